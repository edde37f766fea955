//! Reduced words in a free group of finite rank, conjugacy-class
//! canonicalization, class enumeration, and the word schemas used by the
//! spectrum experiments.
//!
//! Letters are signed integers: generator `k` (1-based) is `k`, its inverse
//! is `-k`. The text format writes generators as lowercase `a b c ...` and
//! inverses as the corresponding uppercase letters, so `aab` is the word
//! g1 g1 g2.

use crate::error::{Error, Result};
use std::fmt;

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<i32>,
}

/// Conjugacy class, held as its canonical representative: cyclically reduced
/// and minimal among all rotations in the fixed letter order
/// g1 < g1^-1 < g2 < g2^-1 < ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClass {
    representative: Word,
}

/// Letter order key: g1 < g1^-1 < g2 < g2^-1 < ...
fn letter_key(l: i32) -> (u32, u8) {
    (l.unsigned_abs(), if l > 0 { 0 } else { 1 })
}

impl Word {
    /// Builds a word from raw letters, freely reducing.
    pub fn new(rank: usize, letters: &[i32]) -> Result<Self> {
        for &l in letters {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::BadLetter(l, rank));
            }
        }
        let mut reduced: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if reduced.last() == Some(&-l) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Ok(Word {
            rank,
            letters: reduced,
        })
    }

    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Single generator g_k (1-based).
    pub fn generator(rank: usize, k: usize) -> Result<Self> {
        Word::new(rank, &[k as i32])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            if letters.last() == Some(&-l) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word {
            rank: self.rank.max(other.rank),
            letters,
        }
    }

    pub fn pow(&self, n: i32) -> Word {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut out = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Cyclic reduction: strips matching inverse letters from the two ends.
    fn cyclically_reduced(&self) -> Word {
        let mut l = self.letters.clone();
        while l.len() >= 2 && *l.first().unwrap() == -*l.last().unwrap() {
            l.pop();
            l.remove(0);
        }
        Word {
            rank: self.rank,
            letters: l,
        }
    }

    fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || *self.letters.first().unwrap() != -*self.letters.last().unwrap()
    }

    /// Parses the text format: lowercase = generator, uppercase = inverse.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            }
            let l = match c {
                'a'..='z' => (c as i32 - 'a' as i32) + 1,
                'A'..='Z' => -((c as i32 - 'A' as i32) + 1),
                _ => return Err(Error::SchemaError(format!("bad word character `{c}`"))),
            };
            letters.push(l);
        }
        Word::new(rank, &letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            let idx = (l.unsigned_abs() - 1) as u8;
            let c = if l > 0 { b'a' + idx } else { b'A' + idx };
            write!(f, "{}", c as char)?;
        }
        Ok(())
    }
}

/// Free reduction, exposed as an operation for callers holding raw letters.
pub fn reduce(rank: usize, letters: &[i32]) -> Result<Word> {
    Word::new(rank, letters)
}

/// Canonical conjugacy-class representative of `w`.
pub fn cyclic_canonical(w: &Word) -> ConjClass {
    let cyc = w.cyclically_reduced();
    ConjClass {
        representative: minimal_rotation(&cyc),
    }
}

fn minimal_rotation(w: &Word) -> Word {
    let n = w.letters.len();
    if n <= 1 {
        return w.clone();
    }
    let less = |s1: usize, s2: usize| -> bool {
        for i in 0..n {
            let k1 = letter_key(w.letters[(s1 + i) % n]);
            let k2 = letter_key(w.letters[(s2 + i) % n]);
            if k1 != k2 {
                return k1 < k2;
            }
        }
        false
    };
    let mut best = 0;
    for s in 1..n {
        if less(s, best) {
            best = s;
        }
    }
    Word {
        rank: w.rank,
        letters: (0..n).map(|i| w.letters[(best + i) % n]).collect(),
    }
}

impl ConjClass {
    pub fn representative(&self) -> &Word {
        &self.representative
    }

    /// Class of the inverse word.
    pub fn inverse(&self) -> ConjClass {
        cyclic_canonical(&self.representative.inverse())
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative)
    }
}

/// Hard cap on the reduced-word search space for class enumeration.
const ENUM_BUDGET: usize = 20_000_000;

fn reduced_word_count(rank: usize, max_len: usize) -> usize {
    // 2r * (2r-1)^(L-1) words of length L, summed.
    let g = 2 * rank;
    let mut total = 0usize;
    let mut shell = g;
    for _ in 1..=max_len {
        total = total.saturating_add(shell);
        shell = shell.saturating_mul(g - 1);
    }
    total
}

/// Enumerates all distinct conjugacy classes of cyclically reduced words of
/// length 1..=max_len. With `oriented = false`, classes are merged with their
/// inverses. Output is sorted, hence order-stable.
pub fn enumerate_classes(rank: usize, max_len: usize, oriented: bool) -> Result<Vec<ConjClass>> {
    if rank == 0 || reduced_word_count(rank, max_len) > ENUM_BUDGET {
        return Err(Error::BudgetExceeded { rank, max_len });
    }
    let mut out = Vec::new();
    let mut stack: Vec<i32> = Vec::with_capacity(max_len);
    enumerate_rec(rank, max_len, &mut stack, oriented, &mut out);
    out.sort();
    Ok(out)
}

fn enumerate_rec(
    rank: usize,
    max_len: usize,
    stack: &mut Vec<i32>,
    oriented: bool,
    out: &mut Vec<ConjClass>,
) {
    if !stack.is_empty() {
        let w = Word {
            rank,
            letters: stack.clone(),
        };
        // Keep exactly the canonical representatives; no dedup set needed.
        if w.is_cyclically_reduced() {
            let canon = minimal_rotation(&w);
            let keep = if oriented {
                canon.letters == w.letters
            } else {
                let inv_canon = minimal_rotation(&w.inverse().cyclically_reduced());
                canon.letters == w.letters && w.letters <= inv_canon.letters
            };
            if keep {
                out.push(ConjClass { representative: w });
            }
        }
    }
    if stack.len() == max_len {
        return;
    }
    for k in 1..=rank as i32 {
        for l in [k, -k] {
            if stack.last() == Some(&-l) {
                continue;
            }
            stack.push(l);
            enumerate_rec(rank, max_len, stack, oriented, out);
            stack.pop();
        }
    }
}

/// The word a^n b (generators g1 = a, g2 = b).
pub fn schema_an_b(n: usize) -> Word {
    let mut letters = vec![1; n];
    letters.push(2);
    Word::new(2, &letters).unwrap()
}

/// The word a^p b^q c d^r in rank 4 (a, b, c, d = g1..g4), freely reduced.
pub fn schema_pqr(p: i32, q: i32, r: i32) -> Word {
    let w = Word::generator(4, 1)
        .unwrap()
        .pow(p)
        .concat(&Word::generator(4, 2).unwrap().pow(q))
        .concat(&Word::generator(4, 3).unwrap())
        .concat(&Word::generator(4, 4).unwrap().pow(r));
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction_cancels() {
        let w = Word::new(2, &[1, -1]).unwrap();
        assert!(w.is_empty());
        let w = Word::new(2, &[1, 2, -2, -1, 1]).unwrap();
        assert_eq!(w.letters(), &[1]);
    }

    #[test]
    fn rotation_and_conjugation_canonicalize() {
        let ab = Word::new(2, &[2, 1]).unwrap();
        let ba = Word::new(2, &[1, 2]).unwrap();
        assert_eq!(cyclic_canonical(&ab), cyclic_canonical(&ba));

        let conj = Word::new(2, &[-1, 2, 1]).unwrap();
        let g2 = Word::new(2, &[2]).unwrap();
        assert_eq!(cyclic_canonical(&conj), cyclic_canonical(&g2));
    }

    #[test]
    fn class_counts_rank2() {
        let len1 = enumerate_classes(2, 1, true).unwrap();
        assert_eq!(len1.len(), 4);
        let len1u = enumerate_classes(2, 1, false).unwrap();
        assert_eq!(len1u.len(), 2);
        let len2 = enumerate_classes(2, 2, true).unwrap();
        assert_eq!(len2.len(), 12);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            enumerate_classes(2, 30, true),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn schemas() {
        assert_eq!(schema_an_b(0).to_string(), "b");
        assert_eq!(schema_an_b(2).to_string(), "aab");
        assert_eq!(schema_pqr(1, 0, 0).to_string(), "ac");
    }

    #[test]
    fn text_format_round_trip() {
        let w = Word::parse(4, "aaBcD").unwrap();
        assert_eq!(w.letters(), &[1, 1, -2, 3, -4]);
        assert_eq!(w.to_string(), "aaBcD");
        assert!(Word::parse(1, "ab").is_err());
    }

    /// Independent enumerator: walk every raw string over the alphabet,
    /// reduce by repeated scanning, and group words by the full set of
    /// rotations of the cyclic reduction.
    fn brute_force_count(rank: usize, max_len: usize, oriented: bool) -> usize {
        use std::collections::BTreeSet;
        fn scan_reduce(mut v: Vec<i32>) -> Vec<i32> {
            loop {
                let mut changed = false;
                let mut out: Vec<i32> = Vec::with_capacity(v.len());
                for &l in &v {
                    if out.last() == Some(&-l) {
                        out.pop();
                        changed = true;
                    } else {
                        out.push(l);
                    }
                }
                v = out;
                if !changed {
                    return v;
                }
            }
        }
        fn cyc_reduce(mut v: Vec<i32>) -> Vec<i32> {
            while v.len() >= 2 && v[0] == -v[v.len() - 1] {
                v = v[1..v.len() - 1].to_vec();
            }
            v
        }
        let letters: Vec<i32> = (1..=rank as i32).flat_map(|k| [k, -k]).collect();
        let mut keys: BTreeSet<Vec<Vec<i32>>> = BTreeSet::new();
        let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            for w in &next {
                let core = cyc_reduce(scan_reduce(w.clone()));
                if core.is_empty() || core.len() > max_len {
                    continue;
                }
                let rotations = |v: &Vec<i32>| -> Vec<Vec<i32>> {
                    let n = v.len();
                    let mut rs: Vec<Vec<i32>> =
                        (0..n).map(|s| (0..n).map(|i| v[(s + i) % n]).collect()).collect();
                    rs.sort();
                    rs
                };
                let mut key = rotations(&core);
                if !oriented {
                    let inv: Vec<i32> = core.iter().rev().map(|l| -l).collect();
                    let key_inv = rotations(&inv);
                    if key_inv < key {
                        key = key_inv;
                    }
                }
                keys.insert(key);
            }
            frontier = next;
        }
        keys.len()
    }

    #[test]
    fn counts_match_independent_enumerator() {
        for max_len in 1..=6 {
            for oriented in [true, false] {
                let ours = enumerate_classes(2, max_len, oriented).unwrap().len();
                let brute = brute_force_count(2, max_len, oriented);
                assert_eq!(ours, brute, "max_len={max_len} oriented={oriented}");
            }
        }
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let classes = enumerate_classes(2, 5, true).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for c in &classes {
            assert!(seen.insert(c.representative().letters().to_vec()));
            // closed under the claimed equivalence: canonicalizing any
            // rotation or conjugate lands back on the representative
            let w = c.representative();
            let conj = Word::new(2, &[1]).unwrap().concat(w).concat(&Word::new(2, &[-1]).unwrap());
            assert_eq!(cyclic_canonical(&conj), *c);
        }
    }
}
