//! Exact commutative algebra in prime characteristic.
//!
//! Sparse polynomials over `F_p`, reduced Gröbner bases, Frobenius roots of
//! ideals and their descending chains, differential-operator certificates for
//! `δ(1/x) = 1/x^p`, generalized test ideals with F-jumping exponent search,
//! and Frobenius-pushforward decompositions of numerical semigroup rings.

pub mod dmod;
pub mod error;
pub mod field;
pub mod frobroot;
pub mod groebner;
pub mod ideal;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod semigroup;
pub mod testideal;

pub use dmod::{
    construct_delta, generation_report, is_fpure_pair, verify_delta, Conclusion, DeltaCertificate, GenerationReport,
};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use frobroot::{descending_chain, frobenius_root, FrobeniusChainReport};
pub use groebner::{buchberger, ideal_equal, ideal_member, ideal_subset, GroebnerBasis};
pub use ideal::{Ideal, IdealOp};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use parse::{parse_polynomial, parse_polynomial_list};
pub use poly::Polynomial;
pub use ring::{Limits, Ring};
pub use semigroup::{
    build_semigroup, chain_stabilize_frac, ffrt_decompose, frac_hom, frobenius_root_frac, FFRTDecomposition,
    FracChainReport, FracIdeal, NumericalSemigroup,
};
pub use testideal::{
    degree_bound_check, fpt_interval, jumping_exponents, nu, test_ideal, ExponentRational, JumpReport, TestIdeal,
};
