use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("presentation: syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("presentation: unknown generator `{name}` at byte {pos}")]
    UnknownGenerator { pos: usize, name: String },
    #[error("presentation: exponent 0 at byte {pos}")]
    ZeroExponent { pos: usize },
    #[error("presentation: duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("presentation: generator index {index} out of range 1..={count}")]
    GeneratorIndex { index: i64, count: usize },
    #[error("presentation: ball enumeration exceeded the element budget of {budget}")]
    BudgetExceeded { budget: usize },

    #[error("linalg2: numeric degradation, |det - 1| = {drift:e}")]
    Degraded { drift: f64 },
    #[error("linalg2: non-finite matrix entry")]
    NonFinite,

    #[error("repvar: expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("repvar: presentations differ")]
    PresentationMismatch,
    #[error("repvar: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("repvar: Gauss-Newton stalled at iteration {iteration} (residual {residual:e})")]
    Stalled { iteration: usize, residual: f64 },
    #[error("repvar: singular normal equations")]
    SingularSystem,
    #[error("repvar: continuous family of dimension {torus_dim}, enumeration refused")]
    ContinuousFamily { torus_dim: usize },

    #[error("cohomology: representation is off the variety (residual {residual:e})")]
    OffVariety { residual: f64 },
    #[error("cohomology: cocycle defect {defect:e} exceeds tolerance {tol:e}")]
    NotACocycle { defect: f64, tol: f64 },
    #[error("cohomology: report basis is stale for this cocycle")]
    StaleBasis,

    #[error("deformation: truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("deformation: singular constant term")]
    SingularConstant,
    #[error("deformation: exponential of a jet with nonzero constant term")]
    NonzeroConstant,
    #[error("deformation: invalid jet, defect {defect:e} at order {order}")]
    InvalidJet { order: usize, defect: f64 },
    #[error("deformation: corrector stalled at step {step}: {source}")]
    CorrectorStall {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("report: {0}")]
    Report(String),
}
