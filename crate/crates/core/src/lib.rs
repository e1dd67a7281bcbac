//! Equivariant homology of free and homologically pure spectra over cyclic
//! p-groups, worked at the level of cell bases and graded algebra.
//!
//! The crate is organised bottom-up:
//!
//! * [`groups`] cyclic groups, subgroups and finite G-sets;
//! * [`grading`] virtual representation degrees;
//! * [`coefficients`] Mackey tables and the RO(C₂)-graded homology of a point;
//! * [`freebasis`] bases of free spectra (box, norm, dual, purity formulas);
//! * [`purering`] ring models lifted from underlying data;
//! * [`specseq`] Koszul Tor engine and bar-type E₂ pages;
//! * [`io`] model and result file formats;
//! * [`check`] self-checks against brute-force references;
//! * [`cli`] the command line front end.

pub mod check;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod freebasis;
pub mod grading;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod purering;
pub mod specseq;

pub use error::{Error, Result};
