use thiserror::Error;

/// Errors shared by all computation modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-invertible series")]
    NonInvertibleSeries,
    #[error("weight not in table: {0}")]
    WeightNotInTable(i64),
    #[error("U_m requires integral exponents")]
    NonIntegralExponents,
    #[error("bracket order unsupported: {0}")]
    BracketOrderUnsupported(u32),
    #[error("not positive definite: [{0},{1},{2}]")]
    NotPositiveDefinite(i64, i64, i64),
    #[error("no forms of this discriminant: {0}")]
    NoFormsOfDiscriminant(i64),
    #[error("not in Q_d_p: p does not divide a")]
    NotLevelForm,
    #[error("discriminant not admissible at level {p}: {d}")]
    NotAdmissible { d: i64, p: i64 },
    #[error("representative search failed for d={d}, p={p}, beta={beta}")]
    RepresentativeSearchFailed { d: i64, p: i64, beta: i64 },
    #[error("insufficient series precision")]
    InsufficientPrecision,
    #[error("precision failure: residual {residual:e} at d={d}")]
    PrecisionFailure { d: i64, residual: f64 },
    #[error("unsupported degree: {0}")]
    UnsupportedDegree(i64),
    #[error("index not in plus-space support: {0}")]
    IndexNotInPlusSpace(i64),
    #[error("seed construction failed at level {0}")]
    SeedConstructionFailed(i64),
    #[error("admissibility/ansatz error for D={0}, p={1}")]
    AnsatzError(i64, i64),
    #[error("V_p defined here only from index 1")]
    VOperatorIndex,
    #[error("not a Jacobi form of this index")]
    NotSingleValued,
    #[error("eta method unavailable for p={0}; use rademacher")]
    EtaMethodUnavailable(i64),
    #[error("not a Borcherds product at this precision (exponent at n={0} not integral)")]
    NonIntegralExponent(i64),
    #[error("input not a canonical hauptmodul")]
    NotCanonicalHauptmodul,
    #[error("{0}")]
    Invalid(String),
}
