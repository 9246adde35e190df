//! Dimensions and defects of higher secant varieties of Segre-Veronese
//! varieties.
//!
//! By Terracini's lemma the dimension of the `s`-th secant variety of the
//! embedding of `P^{n_1} x ... x P^{n_t}` by forms of multidegree `a` is
//! `H(Z, a) - 1`, where `Z` is a scheme of `s` generic 2-fat points and `H` its
//! multigraded Hilbert function. This crate computes `H(Z, a)` as the rank of
//! an explicit condition matrix over a large prime field, either directly on
//! the product ([`fatpoints`]) or after moving everything into a single
//! projective space ([`reduction`]), and builds defect reports, Grassmann
//! secant reports and splitting certificates on top ([`secant`]).

pub mod combinat;
pub mod config;
pub mod error;
pub mod fatpoints;
pub mod modlinalg;
pub mod reduction;
pub mod secant;
pub mod suites;
pub mod tensor;

pub use combinat::{
    enumerate_monomials, expected_grassmann_dim, expected_secant_dim, multidegree_dimension,
    MultiMonomial, Multidegree, Shape, VarietySpec, DEFAULT_SIZE_CAP,
};
pub use config::{ComputeConfig, Method};
pub use error::{Error, Result};
pub use fatpoints::{hilbert_function, FatPointScheme, Multiplicity, PointTuple};
pub use modlinalg::{FpMatrix, PrimeField, RankResult, DEFAULT_PRIME};
pub use secant::{
    classify_p1cubed, classify_p1xp1, find_split_certificate, grassmann_secant_dimension,
    secant_dimension, GrassmannReport, SecantReport, SplitCertificate,
};
pub use suites::{run_suite, CaseResult, Suite, SuiteReport};
pub use tensor::{
    embed_point, embedding_invariants_hold, flattening_rank, is_partially_symmetric, rank1_tensor,
    tangent_span_rank, PartialSymTensor,
};
