use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Data-dependent failures are reported through this enum; violations of
/// documented call contracts (a zero-length average, a malformed window)
/// panic instead, as is usual for programmer errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix offered as a coin is not unitary.
    #[error("matrix is not unitary: max entry of |UU\u{2020} - I| is {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    /// An angle fell outside the half-open interval [0, 2π).
    #[error("angle {name} = {value} lies outside [0, 2\u{3c0})")]
    AngleRange { name: &'static str, value: f64 },

    /// The defect coin has a zero entry, so {P₀, Q₀, R₀, S₀} fails to span
    /// the 2×2 matrices and weight decompositions are unavailable.
    #[error("defect coin has a zero entry; P\u{2080},Q\u{2080},R\u{2080},S\u{2080} do not form a basis")]
    SingularBasis,

    /// Path enumeration was asked for more steps than the enumeration cap.
    #[error("path enumeration for n = {n} exceeds n_max = {n_max}")]
    TooLarge { n: usize, n_max: usize },

    /// A boundary function was requested on the unit circle without saying
    /// from which radial direction the circle is approached.
    #[error("|z| = 1: specify the radial approach to resolve the square-root branch")]
    BranchAmbiguity,

    /// A generating function was evaluated at (or numerically on top of) a
    /// pole of Ξ̃₀.
    #[error("evaluation point is a pole of the generating function (|\u{39b}\u{303}\u{2080}| = {denom_abs:.3e})")]
    PoleHit { denom_abs: f64 },

    /// Closed-form limit measures assume the defect and bulk coins share a
    /// determinant.
    #[error("defect and bulk determinants differ by {deviation:.3e}; closed-form measures need them equal")]
    DeterminantMismatch { deviation: f64 },

    /// The eigenvalue construction degenerates (the candidate decay rate
    /// lands on the unit circle, so no square-summable eigenvector exists).
    #[error("no point-spectrum construction at \u{3c9} = {omega}: the decay root has modulus 1")]
    DegenerateEigenvector { omega: f64 },

    /// Catch-all for violated data preconditions, with a description.
    #[error("{0}")]
    Precondition(String),
}
