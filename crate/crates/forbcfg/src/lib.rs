//! Exact computations for forbidden configurations of {0,1}-matrices:
//! subconfiguration containment, the product-construction exponent `X(F)`
//! with checkable certificates, brute-force `forb(m, F)` at tiny scale, the
//! graph-coloring reduction, and boundary classification.

pub mod classify;
pub mod config;
pub mod containment;
pub mod forb;
pub mod hardness;
pub mod io;
pub mod products;
pub mod xcompute;

pub use config::{generator, ColumnIndex, ConfigError, Configuration, FactorKind, RowSet};
pub use containment::{contains, contains_naive, verify_embedding, Embedding};
pub use forb::{forb_exact, ForbResult};
pub use hardness::{
    chromatic_number, check_reduction, incidence_matrix, parse_dimacs, reduction_matrix, Graph,
};
pub use products::{
    avoid_factor_matrix, explicit_product, extremal_sub, family_membership_oracle,
    member_of_family, ProductShape, RowPartition,
};
pub use xcompute::{
    emit_certificate, reduce_multiplicities, verify_certificate, x_of, x_of_with, Certificate,
    CertificateVerdict, XOptions, XResult,
};
