//! Exact computation of spherical Whittaker values on metaplectic covers.
//!
//! The crate has three layers:
//!
//! - exact symbolic arithmetic: Laurent polynomials in `q` with rational
//!   exponents, character variables, and formal Gauss-sum symbols
//!   ([`qring`]), plus strict Gelfand-Tsetlin pattern combinatorics
//!   ([`gtpatterns`]);
//! - the values themselves: pattern sums for the general linear covers
//!   ([`gl_whittaker`]) and a verified table of closed forms for the
//!   two-variable exceptional group ([`g2_tables`]);
//! - the deduction side: intertwining-operator constraints ([`intertwiner`])
//!   and a lattice-based solver that recovers which unramified characters
//!   force every Whittaker functional to vanish ([`deduce`]).
//!
//! [`ffgauss`] backs the formal Gauss-symbol relations with numeric
//! finite-field computations.

pub mod qring;

pub mod gtpatterns;

pub mod gl_whittaker;

pub mod g2_tables;

pub mod intertwiner;

pub mod deduce;

pub mod ffgauss;

// The guide's code samples double as doc-tests: each chapter is included
// here so `cargo test --doc` keeps the book in sync with the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(polynomials, "../../../book/src/polynomials.md");
    chapter!(patterns, "../../../book/src/patterns.md");
    chapter!(pattern_sums, "../../../book/src/pattern-sums.md");
    chapter!(g2_table, "../../../book/src/g2-table.md");
    chapter!(constraints, "../../../book/src/constraints.md");
    chapter!(deduction, "../../../book/src/deduction.md");
    chapter!(gauss_sums, "../../../book/src/gauss-sums.md");
    chapter!(cli, "../../../book/src/cli.md");
}
