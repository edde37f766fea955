//! Complete flags in R^d, transversality, and Lusztig total positivity:
//! pair frames, Jacobi generators, totally positive tests, positive tuples
//! of flags, rearranged flags, permutation factorization, and cross
//! matrices of dual pairings.
//!
//! A flag is stored as an invertible basis matrix whose leading i columns
//! span the i-dimensional part. All positivity tests are brute-force minor
//! enumerations, which keeps them honest at the cost of capping the
//! dimension at 8.

use crate::error::{Error, Result};
use crate::numlin::{self, k_subsets, submatrix, Mat, Vect};
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximum dimension for brute-force minor enumeration.
pub const MAX_MINOR_DIM: usize = 8;

/// Budget on composition enumeration inside `is_transverse`.
const COMPOSITION_BUDGET: usize = 100_000;

/// A complete flag: the i-dimensional part is the span of the first i
/// columns of `basis`.
#[derive(Debug, Clone)]
pub struct Flag {
    basis: Mat,
}

impl Flag {
    /// Builds a flag from an invertible basis matrix. Columns are
    /// unit-normalized with a deterministic sign so equal flags constructed
    /// from different inputs compare stably.
    pub fn new(basis: Mat) -> Result<Self> {
        let d = basis.nrows();
        if d == 0 || basis.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: basis.ncols(),
            });
        }
        let svd = basis.clone().svd(false, false);
        let smax = svd.singular_values[0];
        let smin = svd.singular_values[d - 1];
        if !(smin > 1e-12 * smax) {
            return Err(Error::SingularFlagBasis { det: smin });
        }
        let mut b = basis;
        for j in 0..d {
            let mut col: Vect = b.column(j).clone_owned();
            numlin::normalize_direction(&mut col);
            b.set_column(j, &col);
        }
        Ok(Flag { basis: b })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Standard flag: part i is the span of the first i standard vectors.
    pub fn standard(d: usize) -> Self {
        Flag {
            basis: Mat::identity(d, d),
        }
    }

    /// Reversed standard flag: part i spans the last i standard vectors.
    pub fn reversed_standard(d: usize) -> Self {
        let mut m = Mat::zeros(d, d);
        for j in 0..d {
            m[(d - 1 - j, j)] = 1.0;
        }
        Flag { basis: m }
    }

    /// Image of the flag under an invertible map.
    pub fn map(&self, g: &Mat) -> Result<Self> {
        Flag::new(g * &self.basis)
    }

    /// Orthonormal basis of the i-dimensional part (1 <= i <= d).
    fn ortho_part(&self, i: usize) -> Mat {
        let sub = self.basis.columns(0, i).clone_owned();
        let qr = sub.qr();
        qr.q()
    }
}

/// Largest principal-angle sine between the i-dimensional parts, maximized
/// over i. Zero iff the flags agree.
pub fn flag_distance(f: &Flag, g: &Flag) -> f64 {
    assert_eq!(f.dim(), g.dim());
    let d = f.dim();
    let mut worst = 0.0f64;
    for i in 1..d {
        let qa = f.ortho_part(i);
        let qb = g.ortho_part(i);
        let overlap = qa.transpose() * qb;
        let svd = overlap.svd(false, false);
        let cos_min = svd.singular_values[i - 1].min(1.0);
        worst = worst.max((1.0 - cos_min * cos_min).sqrt());
    }
    worst
}

pub fn flag_eq(f: &Flag, g: &Flag) -> bool {
    flag_distance(f, g) <= tol::TOL_FLAG
}

/// Enumerates compositions of `total` into `parts` non-negative parts.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; parts];
    fn rec(total: usize, idx: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == current.len() - 1 {
            current[idx] = total;
            out.push(current.clone());
            return;
        }
        for v in 0..=total {
            current[idx] = v;
            rec(total - v, idx + 1, current, out);
        }
    }
    rec(total, 0, &mut current, &mut out);
    out
}

/// Transversality of an n-tuple of flags: for every composition
/// (d_1, ..., d_n) of d, the sum of the d_i-dimensional parts has full
/// rank. Zero parts are allowed, so the check covers every sub-tuple; this
/// is what makes the test meaningful for tuples longer than d.
pub fn is_transverse(flags: &[Flag]) -> Result<bool> {
    Ok(transversality_defect(flags)?.is_none())
}

/// Returns the first failing composition with its relative rank defect, or
/// None when the tuple is transverse.
pub fn transversality_defect(flags: &[Flag]) -> Result<Option<(Vec<usize>, f64)>> {
    assert!(!flags.is_empty());
    let d = flags[0].dim();
    for f in flags {
        if f.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: f.dim(),
            });
        }
    }
    let n = flags.len();
    let count = numlin::binomial(d + n - 1, n - 1);
    if count > COMPOSITION_BUDGET {
        return Err(Error::CompositionBudget { count });
    }
    for comp in compositions(d, n) {
        if comp.iter().filter(|&&c| c > 0).count() < 2 {
            continue;
        }
        let mut stacked = Mat::zeros(d, d);
        let mut col = 0;
        for (f, &di) in flags.iter().zip(comp.iter()) {
            for j in 0..di {
                stacked.set_column(col, &f.basis.column(j));
                col += 1;
            }
        }
        let svd = stacked.svd(false, false);
        let smax = svd.singular_values[0];
        let smin = svd.singular_values[d - 1];
        if !(smin > tol::TOL_RANK * smax) {
            return Ok(Some((comp, smin / smax)));
        }
    }
    Ok(None)
}

/// A transverse pair of flags together with the line decomposition
/// L_i(a,b) = a^i n b^(d-i+1) and a consistent basis: column i of `basis`
/// spans L_(i+1) (0-based columns).
#[derive(Debug, Clone)]
pub struct PairFrame {
    pub a: Flag,
    pub b: Flag,
    basis: Mat,
    basis_inv: Mat,
}

impl PairFrame {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Consistent basis, columns e_1..e_d.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Dual covectors as rows: basis()^(-1).
    pub fn duals(&self) -> &Mat {
        &self.basis_inv
    }

    /// Expresses a standard-coordinates map in frame coordinates.
    pub fn to_frame(&self, m: &Mat) -> Mat {
        &self.basis_inv * m * &self.basis
    }

    /// Frame coordinates back to standard coordinates.
    pub fn from_frame(&self, m: &Mat) -> Mat {
        &self.basis * m * &self.basis_inv
    }

    /// The complementary consistent basis {(-1)^i e_i}.
    pub fn complementary(&self) -> PairFrame {
        let d = self.dim();
        let mut basis = self.basis.clone();
        let mut basis_inv = self.basis_inv.clone();
        for i in 0..d {
            if i % 2 == 1 {
                let c = -basis.column(i);
                basis.set_column(i, &c);
                let r = -basis_inv.row(i);
                basis_inv.set_row(i, &r);
            }
        }
        PairFrame {
            a: self.a.clone(),
            b: self.b.clone(),
            basis,
            basis_inv,
        }
    }
}

/// Right null direction of a possibly wide matrix. Pads with zero rows to
/// square so the full right factor is available from the SVD. Returns the
/// direction together with the smallest and second-smallest singular
/// values for degeneracy checks.
fn null_direction(m: &Mat) -> (Vect, f64, f64) {
    let n = m.ncols();
    let rows = m.nrows().max(n);
    let mut padded = Mat::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.as_ref().unwrap();
    let v = v_t.row(n - 1).transpose();
    let smin = svd.singular_values[n - 1];
    let s2 = if n >= 2 {
        svd.singular_values[n - 2]
    } else {
        f64::INFINITY
    };
    (v, smin, s2)
}

/// Builds the line decomposition and consistent basis of a transverse pair.
pub fn pair_frame(a: &Flag, b: &Flag) -> Result<PairFrame> {
    if let Some((composition, defect)) = transversality_defect(&[a.clone(), b.clone()])? {
        return Err(Error::NotTransverse {
            composition,
            defect,
        });
    }
    let d = a.dim();
    let mut basis = Mat::zeros(d, d);
    for i in 1..=d {
        // L_i = a^i n b^(d-i+1): null vector of [Qa | -Qb]
        let qa = a.ortho_part(i);
        let qb = b.ortho_part(d - i + 1);
        let mut stacked = Mat::zeros(d, d + 1);
        for j in 0..i {
            stacked.set_column(j, &qa.column(j));
        }
        for j in 0..d - i + 1 {
            stacked.set_column(i + j, &(-qb.column(j)));
        }
        let (null, _, _) = null_direction(&stacked);
        let coeff = null.rows(0, i).clone_owned();
        let mut line: Vect = &qa * coeff;
        numlin::normalize_direction(&mut line);
        basis.set_column(i - 1, &line);
    }
    let basis_inv = basis
        .clone()
        .try_inverse()
        .ok_or(Error::SingularFlagBasis { det: 0.0 })?;
    Ok(PairFrame {
        a: a.clone(),
        b: b.clone(),
        basis,
        basis_inv,
    })
}

/// Elementary Jacobi matrix: identity except entry (i, j) = t (1-based),
/// so it maps e_j to e_j + t e_i.
pub fn jacobi(d: usize, i: usize, j: usize, t: f64) -> Result<Mat> {
    if i == j {
        return Err(Error::JacobiDiagonal);
    }
    assert!(i >= 1 && i <= d && j >= 1 && j <= d, "indices must be in 1..=d");
    let mut m = Mat::identity(d, d);
    m[(i - 1, j - 1)] = t;
    Ok(m)
}

fn minor_budget_check(d: usize) -> Result<()> {
    if d > MAX_MINOR_DIM {
        return Err(Error::MinorBudget {
            dim: d,
            max: MAX_MINOR_DIM,
        });
    }
    Ok(())
}

fn minor_tolerance(m: &Mat, k: usize) -> f64 {
    let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1e-300);
    tol::TOL_MINOR * scale.powi(k as i32)
}

/// Every minor non-negative (within the scale-aware tolerance).
pub fn is_totally_nonneg(m: &Mat) -> Result<bool> {
    let d = m.nrows();
    minor_budget_check(d)?;
    for k in 1..=d {
        let tol_k = minor_tolerance(m, k);
        let subs = k_subsets(d, k);
        for rows in &subs {
            for cols in &subs {
                if submatrix(m, rows, cols).determinant() < -tol_k {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Every minor strictly positive.
pub fn is_totally_positive(m: &Mat) -> Result<bool> {
    let d = m.nrows();
    minor_budget_check(d)?;
    for k in 1..=d {
        let tol_k = minor_tolerance(m, k);
        let subs = k_subsets(d, k);
        for rows in &subs {
            for cols in &subs {
                if submatrix(m, rows, cols).determinant() <= tol_k {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Contiguous square minors bordering the first row or column.
fn initial_minor_index_sets(d: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for k in 1..=d {
        for s in 0..=(d - k) {
            let block: Vec<usize> = (s..s + k).collect();
            let first: Vec<usize> = (0..k).collect();
            out.push((first.clone(), block.clone()));
            if s != 0 {
                out.push((block, first));
            }
        }
    }
    out
}

/// Checks the Gasca-Pena criterion set: positivity of every contiguous
/// square minor touching the first row or column. For an invertible matrix
/// this is equivalent to total positivity at a fraction of the cost.
pub fn initial_minors_positive(m: &Mat) -> bool {
    let d = m.nrows();
    for (rows, cols) in initial_minor_index_sets(d) {
        let tol_k = minor_tolerance(m, rows.len());
        if submatrix(m, &rows, &cols).determinant() <= tol_k {
            return false;
        }
    }
    true
}

/// Classification of a unipotent upper-triangular matrix by its upper
/// minors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnipotentClass {
    /// All upper minors strictly positive.
    Positive,
    /// All upper minors non-negative, some vanish.
    NonnegOnly,
    /// Some upper minor is negative.
    Outside,
}

/// Upper minors are the (I, J) with i_l <= j_l componentwise; every other
/// minor of an upper-triangular matrix vanishes identically.
pub fn upper_minor_index_sets(d: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for k in 1..=d {
        let subs = k_subsets(d, k);
        for rows in &subs {
            for cols in &subs {
                if rows.iter().zip(cols.iter()).all(|(i, j)| i <= j) {
                    out.push((rows.clone(), cols.clone()));
                }
            }
        }
    }
    out
}

/// Classifies a matrix already expressed in frame coordinates.
pub fn classify_unipotent_frame(u: &Mat) -> Result<UnipotentClass> {
    let d = u.nrows();
    minor_budget_check(d)?;
    let scale = u.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1.0);
    let mut deviation = 0.0f64;
    for i in 0..d {
        deviation = deviation.max((u[(i, i)] - 1.0).abs());
        for j in 0..i {
            deviation = deviation.max(u[(i, j)].abs());
        }
    }
    if deviation > 1e-8 * scale {
        return Err(Error::NotUnipotent { deviation });
    }
    // classify on the cleaned representative
    let mut clean = u.clone();
    for i in 0..d {
        clean[(i, i)] = 1.0;
        for j in 0..i {
            clean[(i, j)] = 0.0;
        }
    }
    let mut any_zero = false;
    for (rows, cols) in upper_minor_index_sets(d) {
        let tol_k = minor_tolerance(&clean, rows.len());
        let v = submatrix(&clean, &rows, &cols).determinant();
        if v < -tol_k {
            return Ok(UnipotentClass::Outside);
        }
        if v <= tol_k {
            any_zero = true;
        }
    }
    Ok(if any_zero {
        UnipotentClass::NonnegOnly
    } else {
        UnipotentClass::Positive
    })
}

/// Classifies a standard-coordinates unipotent with respect to the frame.
pub fn unipotent_positive(u: &Mat, frame: &PairFrame) -> Result<UnipotentClass> {
    classify_unipotent_frame(&frame.to_frame(u))
}

/// The unique unipotent upper-triangular u (frame coordinates) with
/// u(b) = f, solved column by column by back-substitution. Fails with
/// NotInSchubertCell when f is not transverse to the frame's first flag.
pub fn unipotent_transition(frame: &PairFrame, f: &Flag) -> Result<Mat> {
    let d = frame.dim();
    if f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: f.dim(),
        });
    }
    let fc = frame.duals() * f.basis();
    let mut u = Mat::identity(d, d);
    for j in 1..=d {
        // v in span(fc[:, 0..j]) with zeros below row d-j, pivot at d-j
        let g = fc.columns(0, j).clone_owned();
        let col = d - j;
        let x: Vect = if j == 1 {
            Vect::from_element(1, 1.0)
        } else {
            let a = Mat::from_fn(j - 1, j, |r, c| g[(col + 1 + r, c)]);
            let (x, _, s2) = null_direction(&a);
            let smax = a.svd(false, false).singular_values[0].max(1e-300);
            if !(s2 > 1e-12 * smax) {
                return Err(Error::NotInSchubertCell { pivot: col });
            }
            x
        };
        let mut v: Vect = &g * x;
        let pivot = v[col];
        if pivot.abs() <= 1e-10 * v.norm() {
            return Err(Error::NotInSchubertCell { pivot: col });
        }
        v /= pivot;
        for r in 0..d {
            u[(r, col)] = if r > col { 0.0 } else { v[r] };
        }
    }
    Ok(u)
}

/// Witness for a positive (n+2)-tuple: totally positive unipotents in frame
/// coordinates with x_p = u_1 ... u_p (b).
#[derive(Debug, Clone)]
pub struct PositiveTupleWitness {
    pub frame: PairFrame,
    /// u_1..u_n in frame coordinates, each classified Positive.
    pub unipotents: Vec<Mat>,
    /// True when the complementary basis accepted the tuple.
    pub complementary: bool,
}

/// Tests positivity of a flag tuple (a, x_n, ..., x_1, b). Triples reduce
/// to one transition, longer tuples to consecutive quotients of
/// transitions. The test runs in the frame basis and, failing that, in its
/// complementary basis; a tuple is positive when every quotient classifies
/// Positive in one of the two.
pub fn is_positive_tuple(flags: &[Flag]) -> Result<Option<PositiveTupleWitness>> {
    assert!(flags.len() >= 3, "need at least a triple");
    if let Some((composition, defect)) = transversality_defect(flags)? {
        return Err(Error::NotTransverse {
            composition,
            defect,
        });
    }
    let n = flags.len() - 2;
    let a = &flags[0];
    let b = &flags[flags.len() - 1];
    let base = pair_frame(a, b)?;
    for complementary in [false, true] {
        let frame = if complementary {
            base.complementary()
        } else {
            base.clone()
        };
        let mut witnesses = Vec::with_capacity(n);
        let mut prev = Mat::identity(frame.dim(), frame.dim());
        let mut ok = true;
        for p in 1..=n {
            let xp = &flags[flags.len() - 1 - p];
            let w = unipotent_transition(&frame, xp)?;
            let prev_inv = prev.clone().try_inverse().expect("unit triangular");
            let up = prev_inv * &w;
            match classify_unipotent_frame(&up)? {
                UnipotentClass::Positive => witnesses.push(up),
                _ => {
                    ok = false;
                    break;
                }
            }
            prev = w;
        }
        if ok {
            return Ok(Some(PositiveTupleWitness {
                frame,
                unipotents: witnesses,
                complementary,
            }));
        }
    }
    Ok(None)
}

/// A totally positive unipotent sampled along the standard reduced word
/// (s_1)(s_2 s_1)(s_3 s_2 s_1)..., with log-uniform parameters in
/// [0.1, 10]: d(d-1)/2 Jacobi factors.
pub fn sample_positive_unipotent(d: usize, rng: &mut ChaCha8Rng) -> Mat {
    let mut u = Mat::identity(d, d);
    for block in 1..d {
        for s in (1..=block).rev() {
            let t = log_uniform(rng);
            u *= jacobi(d, s, s + 1, t).unwrap();
        }
    }
    u
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    let lo = 0.1f64.ln();
    let hi = 10.0f64.ln();
    rng.gen_range(lo..hi).exp()
}

/// Deterministically generates a positive (n+2)-tuple
/// (a, x_n, ..., x_1, b) from the standard and reversed standard flags.
/// Returns the tuple in that order together with its witness.
pub fn generate_positive_tuple(
    seed: u64,
    n: usize,
    d: usize,
) -> Result<(Vec<Flag>, PositiveTupleWitness)> {
    assert!(n >= 1 && d >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Flag::standard(d);
    let b = Flag::reversed_standard(d);
    let frame = pair_frame(&a, &b)?;
    let mut unipotents = Vec::with_capacity(n);
    let mut tuple_rev = vec![b.clone()]; // built from b outward: x_1, x_2, ...
    let mut product = Mat::identity(d, d);
    for _ in 0..n {
        let u = sample_positive_unipotent(d, &mut rng);
        unipotents.push(u.clone());
        product = &product * &u;
        tuple_rev.push(b.map(&product)?);
    }
    // assemble (a, x_n, ..., x_1, b)
    let mut flags = vec![a];
    for p in (1..=n).rev() {
        flags.push(tuple_rev[p].clone());
    }
    flags.push(tuple_rev[0].clone());
    Ok((
        flags,
        PositiveTupleWitness {
            frame,
            unipotents,
            complementary: false,
        },
    ))
}

/// Osculating flag of the weighted rational normal curve
/// c(t) = (binom(d-1, k) t^k)_k at t = x, or the reversed standard flag at
/// infinity (`x = None`). The binomial weights make the curve equivariant
/// for the symmetric-power embedding of SL2.
pub fn veronese_flag(x: Option<f64>, d: usize) -> Flag {
    match x {
        None => Flag::reversed_standard(d),
        Some(t) => {
            let mut basis = Mat::zeros(d, d);
            for m in 0..d {
                // m-th derivative of c at t
                for k in m..d {
                    let binom = numlin::binomial(d - 1, k) as f64;
                    let falling: f64 = (0..m).map(|r| (k - r) as f64).product();
                    basis[(k, m)] = binom * falling * t.powi((k - m) as i32);
                }
            }
            Flag::new(basis).expect("osculating basis is invertible")
        }
    }
}

/// Flag obtained by rearranging the lines of a transverse pair: part r is
/// the span of lines perm[0..r] (side 0) or perm[d-r..d] read backwards
/// (side 1). `perm` is 0-based.
pub fn rearranged_flag(frame: &PairFrame, perm: &[usize], side: u8) -> Result<Flag> {
    let d = frame.dim();
    check_permutation(perm, d)?;
    let mut basis = Mat::zeros(d, d);
    for r in 0..d {
        let line = match side {
            0 => perm[r],
            _ => perm[d - 1 - r],
        };
        basis.set_column(r, &frame.basis().column(line));
    }
    Flag::new(basis)
}

fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    if perm.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || seen[p] {
            return Err(Error::BadIndexSet(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p o q)(x) = p[q[x]]
    q.iter().map(|&x| p[x]).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn transposition(d: usize, i: usize, j: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (0..d).collect();
    t.swap(i, j);
    t
}

/// Factors a permutation (0-based, perm[x] = image of x) into
/// transpositions (i_l, j_l) with i_l < j_l, listed in application order
/// (first entry applied first), such that the nesting condition
/// Q_(l-1)^(-1)(i_l) < Q_(l-1)^(-1)(j_l) holds for every l. Construction
/// peels the cycle through the smallest element and recurses on the rest.
pub fn factor_permutation(perm: &[usize]) -> Result<Vec<(usize, usize)>> {
    let d = perm.len();
    check_permutation(perm, d)?;
    let elements: Vec<usize> = (0..d).collect();
    let factors = factor_on(perm.to_vec(), elements, d);
    // nesting condition, checked on output
    let mut q: Vec<usize> = (0..d).collect();
    for &(i, j) in &factors {
        assert!(i < j, "transposition not sorted");
        let q_inv = invert(&q);
        assert!(
            q_inv[i] < q_inv[j],
            "nesting condition violated at ({i},{j})"
        );
        q = compose(&transposition(d, i, j), &q);
    }
    assert_eq!(q, perm, "factorization does not reassemble the permutation");
    Ok(factors)
}

fn factor_on(p: Vec<usize>, elements: Vec<usize>, d: usize) -> Vec<(usize, usize)> {
    if elements.len() <= 1 {
        return Vec::new();
    }
    let m = elements[0];
    let r = invert(&p)[m];
    let mut factors = Vec::new();
    let mut p1: Vec<usize> = (0..d).collect();
    if r != m {
        let idx_r = elements.iter().position(|&e| e == r).unwrap();
        for &e in &elements[1..=idx_r] {
            factors.push((m, e));
            p1 = compose(&transposition(d, m, e), &p1);
        }
    }
    let rest = compose(&p, &invert(&p1));
    debug_assert_eq!(rest[m], m);
    let tail_elements: Vec<usize> = elements[1..].to_vec();
    let mut tail = factor_on(rest, tail_elements, d);
    factors.append(&mut tail);
    factors
}

/// Matrix of pairings of the duals of one frame against the basis of
/// another: entry (i, j) = < e^i(a,b) | e_j(x,y) >.
pub fn cross_matrix(frame_ab: &PairFrame, frame_xy: &PairFrame) -> Result<Mat> {
    if frame_ab.dim() != frame_xy.dim() {
        return Err(Error::DimensionMismatch {
            expected: frame_ab.dim(),
            got: frame_xy.dim(),
        });
    }
    Ok(frame_ab.duals() * frame_xy.basis())
}

/// Rescales rows and columns by +-1 so every initial minor is positive.
/// Succeeds exactly when the input is a totally positive matrix masked by
/// sign patterns; the signed first row and column determine the signing
/// uniquely, so the greedy choice is complete.
pub fn sign_normalize_tp(m: &Mat) -> Result<Mat> {
    let d = m.nrows();
    let tol_1 = minor_tolerance(m, 1);
    let mut row_sign = vec![1.0f64; d];
    let mut col_sign = vec![1.0f64; d];
    for i in 0..d {
        if m[(i, 0)].abs() <= tol_1 {
            return Err(Error::ZeroMinor {
                rows: vec![i],
                cols: vec![0],
            });
        }
        row_sign[i] = m[(i, 0)].signum();
    }
    for j in 0..d {
        if m[(0, j)].abs() <= tol_1 {
            return Err(Error::ZeroMinor {
                rows: vec![0],
                cols: vec![j],
            });
        }
        col_sign[j] = m[(0, j)].signum() * m[(0, 0)].signum();
    }
    let signed = Mat::from_fn(d, d, |i, j| row_sign[i] * col_sign[j] * m[(i, j)]);
    for (rows, cols) in initial_minor_index_sets(d) {
        let tol_k = minor_tolerance(&signed, rows.len());
        let v = submatrix(&signed, &rows, &cols).determinant();
        if v.abs() <= tol_k {
            return Err(Error::ZeroMinor { rows, cols });
        }
        if v < 0.0 {
            return Err(Error::NoPositiveSigning);
        }
    }
    Ok(signed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_flags_transverse() {
        let a = Flag::standard(4);
        let b = Flag::reversed_standard(4);
        assert!(is_transverse(&[a.clone(), b.clone()]).unwrap());
        assert!(!is_transverse(&[a.clone(), a.clone()]).unwrap());
    }

    #[test]
    fn veronese_quadruple_transverse() {
        let flags: Vec<Flag> = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|&x| veronese_flag(Some(x), 3))
            .collect();
        assert!(is_transverse(&flags).unwrap());
    }

    #[test]
    fn veronese_endpoints() {
        assert!(flag_eq(&veronese_flag(Some(0.0), 4), &Flag::standard(4)));
        assert!(flag_eq(&veronese_flag(None, 4), &Flag::reversed_standard(4)));
    }

    #[test]
    fn pair_frame_standard() {
        let a = Flag::standard(3);
        let b = Flag::reversed_standard(3);
        let frame = pair_frame(&a, &b).unwrap();
        assert!(numlin::rel_frob(frame.basis(), &Mat::identity(3, 3)) < 1e-12);
        assert!(pair_frame(&a, &a).is_err());
    }

    #[test]
    fn pair_frame_random_spans() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let ga = Mat::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let gb = Mat::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let (Ok(a), Ok(b)) = (Flag::new(ga), Flag::new(gb)) else {
                continue;
            };
            if !is_transverse(&[a.clone(), b.clone()]).unwrap() {
                continue;
            }
            let frame = pair_frame(&a, &b).unwrap();
            let d = 4;
            // span checks by rank: [a^j | e_1..e_j] must stay rank j
            for j in 1..d {
                let mut stacked = Mat::zeros(d, 2 * j);
                for c in 0..j {
                    stacked.set_column(c, &a.basis().column(c));
                    stacked.set_column(j + c, &frame.basis().column(c));
                }
                let rank = stacked.svd(false, false).rank(1e-8);
                assert_eq!(rank, j, "a^{j} span mismatch");
                let mut stacked_b = Mat::zeros(d, 2 * j);
                for c in 0..j {
                    stacked_b.set_column(c, &b.basis().column(c));
                    stacked_b.set_column(j + c, &frame.basis().column(d - 1 - c));
                }
                let rank_b = stacked_b.svd(false, false).rank(1e-8);
                assert_eq!(rank_b, j, "b^{j} span mismatch");
            }
        }
    }

    #[test]
    fn jacobi_basics() {
        let j = jacobi(3, 1, 2, 1.0).unwrap();
        assert_eq!(j[(0, 1)], 1.0);
        assert_eq!(jacobi(3, 1, 2, 0.0).unwrap(), Mat::identity(3, 3));
        let s = jacobi(3, 1, 2, 0.7).unwrap() * jacobi(3, 1, 2, 0.5).unwrap();
        assert!(numlin::rel_frob(&s, &jacobi(3, 1, 2, 1.2).unwrap()) < 1e-14);
        assert!(jacobi(3, 2, 2, 1.0).is_err());
    }

    #[test]
    fn totally_positive_small() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 2.0]);
        assert!(is_totally_positive(&m).unwrap());
        assert!(is_totally_nonneg(&m).unwrap());
        let id = Mat::identity(2, 2);
        assert!(is_totally_nonneg(&id).unwrap());
        assert!(!is_totally_positive(&id).unwrap());
        assert!(initial_minors_positive(&m));
        assert!(!initial_minors_positive(&id));
        assert!(is_totally_positive(&Mat::identity(9, 9)).is_err());
    }

    #[test]
    fn unipotent_classification() {
        let a = Flag::standard(3);
        let b = Flag::reversed_standard(3);
        let frame = pair_frame(&a, &b).unwrap();
        assert_eq!(
            unipotent_positive(&Mat::identity(3, 3), &frame).unwrap(),
            UnipotentClass::NonnegOnly
        );
        let u = jacobi(3, 1, 2, 1.0).unwrap()
            * jacobi(3, 2, 3, 1.0).unwrap()
            * jacobi(3, 1, 2, 1.0).unwrap();
        assert_eq!(
            unipotent_positive(&u, &frame).unwrap(),
            UnipotentClass::Positive
        );
        let j13 = jacobi(3, 1, 3, 1.0).unwrap();
        assert_eq!(
            unipotent_positive(&j13, &frame).unwrap(),
            UnipotentClass::NonnegOnly
        );
        let neg = jacobi(3, 1, 2, -1.0).unwrap();
        assert_eq!(
            unipotent_positive(&neg, &frame).unwrap(),
            UnipotentClass::Outside
        );
        assert!(unipotent_positive(&jacobi(3, 2, 1, 1.0).unwrap(), &frame).is_err());
    }

    /// The componentwise criterion for upper minors is validated by brute
    /// force: over random positive Jacobi products (d <= 4), exactly the
    /// (I, J) with i_l <= j_l ever attain nonzero values.
    #[test]
    fn upper_minor_index_set_is_attainable_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            let upper: std::collections::BTreeSet<_> =
                upper_minor_index_sets(d).into_iter().collect();
            let mut attained: std::collections::BTreeSet<(Vec<usize>, Vec<usize>)> =
                Default::default();
            for _ in 0..200 {
                let u = sample_positive_unipotent(d, &mut rng);
                for k in 1..=d {
                    let subs = k_subsets(d, k);
                    for rows in &subs {
                        for cols in &subs {
                            let v = submatrix(&u, rows, cols).determinant();
                            if v.abs() > minor_tolerance(&u, k) {
                                attained.insert((rows.clone(), cols.clone()));
                            }
                        }
                    }
                }
            }
            assert_eq!(attained, upper, "d={d}");
        }
    }

    #[test]
    fn transition_round_trip() {
        let a = Flag::standard(4);
        let b = Flag::reversed_standard(4);
        let frame = pair_frame(&a, &b).unwrap();
        assert!(numlin::rel_frob(
            &unipotent_transition(&frame, &b).unwrap(),
            &Mat::identity(4, 4)
        ) < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let u0 = sample_positive_unipotent(4, &mut rng);
            let f = b.map(&u0).unwrap();
            let u = unipotent_transition(&frame, &f).unwrap();
            assert!(numlin::rel_frob(&u, &u0) < 1e-10);
        }
        assert!(matches!(
            unipotent_transition(&frame, &a),
            Err(Error::NotInSchubertCell { .. })
        ));
    }

    #[test]
    fn positive_triple_and_errors() {
        let a = Flag::standard(3);
        let b = Flag::reversed_standard(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = sample_positive_unipotent(3, &mut rng);
        let x = b.map(&u).unwrap();
        let w = is_positive_tuple(&[a.clone(), x, b.clone()]).unwrap();
        assert!(w.is_some());
        assert!(!w.unwrap().complementary);

        // non-transverse middle flag
        assert!(matches!(
            is_positive_tuple(&[a.clone(), a.clone(), b.clone()]),
            Err(Error::NotTransverse { .. })
        ));

        // negative-parameter unipotent gives a non-positive triple
        let bad = jacobi(3, 1, 2, -1.0).unwrap() * jacobi(3, 2, 3, 2.0).unwrap();
        let y = b.map(&bad).unwrap();
        if let Ok(res) = is_positive_tuple(&[a.clone(), y, b.clone()]) {
            assert!(res.is_none());
        }
    }

    #[test]
    fn generated_tuples_are_positive() {
        for seed in 0..3u64 {
            let (flags, _) = generate_positive_tuple(seed, 3, 3).unwrap();
            assert_eq!(flags.len(), 5);
            assert!(is_positive_tuple(&flags).unwrap().is_some());
        }
    }

    #[test]
    fn veronese_tuple_positive() {
        let flags = vec![
            veronese_flag(None, 3),
            veronese_flag(Some(2.0), 3),
            veronese_flag(Some(1.0), 3),
            veronese_flag(Some(0.0), 3),
        ];
        assert!(is_positive_tuple(&flags).unwrap().is_some());
    }

    #[test]
    fn rearranged_identity_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let gx = Mat::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let x = Flag::new(gx).unwrap();
        let y = Flag::new(Mat::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0))).unwrap();
        if !is_transverse(&[x.clone(), y.clone()]).unwrap() {
            return;
        }
        let frame = pair_frame(&x, &y).unwrap();
        let id: Vec<usize> = (0..3).collect();
        assert!(flag_eq(&rearranged_flag(&frame, &id, 0).unwrap(), &x));
        assert!(flag_eq(&rearranged_flag(&frame, &id, 1).unwrap(), &y));
    }

    #[test]
    fn jacobi_flow_reaches_rearranged_flag() {
        // lim J_ij(t)(y) = F_1(P_ij(x, y)) at t = 1e6, tolerance O(1/t)
        let (flags, _) = generate_positive_tuple(21, 2, 3).unwrap();
        let (x, y) = (&flags[1], &flags[2]);
        let frame = pair_frame(x, y).unwrap();
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let jac = frame.from_frame(&jacobi(3, i + 1, j + 1, 1e6).unwrap());
            let flowed = y.map(&jac).unwrap();
            let mut perm: Vec<usize> = (0..3).collect();
            perm.swap(i, j);
            let target = rearranged_flag(&frame, &perm, 1).unwrap();
            assert!(
                flag_distance(&flowed, &target) < 1e-5,
                "transposition ({i},{j})"
            );
        }
    }

    #[test]
    fn permutation_factorization() {
        assert!(factor_permutation(&[0, 1, 2]).unwrap().is_empty());
        assert_eq!(factor_permutation(&[1, 0]).unwrap(), vec![(0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let mut p: Vec<usize> = (0..6).collect();
            for i in (1..6).rev() {
                let j = rng.gen_range(0..=i);
                p.swap(i, j);
            }
            // factor_permutation internally asserts nesting + reassembly
            let factors = factor_permutation(&p).unwrap();
            let mut q: Vec<usize> = (0..6).collect();
            for &(i, j) in &factors {
                q = compose(&transposition(6, i, j), &q);
            }
            assert_eq!(q, p);
        }
    }

    #[test]
    fn cross_matrix_same_pair_is_identity() {
        let (flags, _) = generate_positive_tuple(17, 2, 4).unwrap();
        let frame = pair_frame(&flags[0], &flags[3]).unwrap();
        let c = cross_matrix(&frame, &frame).unwrap();
        assert!(numlin::rel_frob(&c, &Mat::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn cross_matrix_of_positive_quadruple() {
        for seed in 0..5u64 {
            let (flags, _) = generate_positive_tuple(seed, 2, 4).unwrap();
            let (a, x, y, b) = (&flags[0], &flags[1], &flags[2], &flags[3]);
            let frame_ab = pair_frame(a, b).unwrap();
            let frame_xy = pair_frame(x, y).unwrap();
            let c = cross_matrix(&frame_ab, &frame_xy).unwrap();
            for k in 1..=4 {
                for ((rows, cols), v) in numlin::enumerate_minors(&c, k).unwrap() {
                    assert!(
                        v.abs() > minor_tolerance(&c, k),
                        "vanishing minor {rows:?} {cols:?} seed {seed}"
                    );
                }
            }
            let signed = sign_normalize_tp(&c).unwrap();
            assert!(is_totally_positive(&signed).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn sign_normalize_undoes_diagonal_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let tp = random_tp(3, &mut rng);
        let normalized = sign_normalize_tp(&tp).unwrap();
        assert!(numlin::rel_frob(&normalized, &tp) < 1e-12);
        let masked = Mat::from_fn(3, 3, |i, j| {
            let ri = if i == 1 { -1.0 } else { 1.0 };
            let cj = if j == 2 { -1.0 } else { 1.0 };
            ri * cj * tp[(i, j)]
        });
        let recovered = sign_normalize_tp(&masked).unwrap();
        assert!(numlin::rel_frob(&recovered, &tp) < 1e-12);
    }

    /// Lower Jacobi word x positive diagonal x upper Jacobi word: a totally
    /// positive matrix by the Loewner-Whitney factorization.
    pub(crate) fn random_tp(d: usize, rng: &mut ChaCha8Rng) -> Mat {
        let mut lower = Mat::identity(d, d);
        for block in 1..d {
            for s in (1..=block).rev() {
                lower *= jacobi(d, s + 1, s, log_uniform(rng)).unwrap();
            }
        }
        let mut diag = Mat::zeros(d, d);
        for i in 0..d {
            diag[(i, i)] = log_uniform(rng);
        }
        let upper = sample_positive_unipotent(d, rng);
        lower * diag * upper
    }

    #[test]
    fn gasca_pena_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for d in 2..=5 {
            for _ in 0..40 {
                let tp = random_tp(d, &mut rng);
                assert!(is_totally_positive(&tp).unwrap());
                assert!(initial_minors_positive(&tp));
                let g = Mat::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
                assert_eq!(
                    is_totally_positive(&g).unwrap(),
                    initial_minors_positive(&g)
                );
            }
        }
    }
}
