pub mod error;
pub mod flags;
pub mod numlin;
pub mod tol;
pub mod words;
