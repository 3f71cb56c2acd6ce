//! Exact counts of finite flat models of the rank-two constant group scheme
//! over a totally ramified extension of Q_p.
//!
//! The count is computed three ways that are checked against each other:
//!
//! * [`formula`]: the closed form `sum_n (a_n + a'_n) q^n`;
//! * [`census`]: the sum of `q^{h_{s,t}}` over Iwasawa cells;
//! * [`oracle`]: brute-force enumeration of Kisin lattices over GF(q).
//!
//! [`gf`] and [`laurent`] supply the exact arithmetic the oracle runs on, and
//! [`verify`] bundles the cross-checks into a reportable suite.

pub mod census;
pub mod error;
pub mod formula;
pub mod gf;
pub mod laurent;
pub mod oracle;
pub mod verify;

pub use census::{census, census_count, h_st, histogram, partition_sizes, r_st, CaseTag, CellCount, PartitionSizes};
pub use error::{Error, Result};
pub use num_bigint::BigUint;
pub use formula::{
    coeff_a, coeff_a_prime, coefficient_table, decompose_n, example_decomposition, model_count,
    moduli_dimension, zeta_factors, CoefficientTable, ExampleDecomposition, ModelCount,
    RamificationInput, WeightDecomposition, ZetaFactors,
};
pub use gf::{FieldElement, FieldSpec};
pub use laurent::{LaurentPoly, Valuation};
pub use oracle::{enumerate_cell, matrix_condition, oracle_count, valuation_condition, LatticePoint, OracleReport};
