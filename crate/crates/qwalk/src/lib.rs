//! Numerics for discrete-time quantum walks on the integer line with a
//! single defect at the origin.
//!
//! The model: a walker carries a two-component chirality spinor
//! ᵀ[Ψ^L(x), Ψ^R(x)] over x ∈ ℤ. One unitary 2×2 coin `U` acts everywhere
//! except the origin, where a different coin `U₀` sits. Splitting each coin
//! into its upper row P (move left) and lower row Q (move right), one step
//! of the walk is
//!
//! ```text
//! Ψ_{n+1}(x) = P_{x+1} Ψ_n(x+1) + Q_{x−1} Ψ_n(x−1)
//! ```
//!
//! and μ_n(x) = ‖Ψ_n(x)‖² is the position distribution at time n.
//!
//! What the crate computes, and how the pieces check each other:
//!
//! * [`engine`]: exact amplitude evolution on a growing window, position and
//!   chirality measures, Cesàro time averages, rescaled empirical CDFs.
//! * [`oracle`]: brute-force path enumeration of the passage weight Ξ(x,n)
//!   (every nearest-neighbor path contributes its ordered coin product).
//!   Slow and obviously correct; the engine must agree with it exactly.
//! * [`coin`]: the 2×2 coin algebra, including the four move operators
//!   P, Q, R, S and the closed multiplication table that lets any passage
//!   weight be written as p·P₀ + q·Q₀ + r·R₀ + s·S₀.
//! * [`genfun`]: generating functions Ξ̃ₓ(z) = Σₙ Ξ(x,n)zⁿ in closed form,
//!   built from continued-fraction boundary functions, with pole locations
//!   on the unit circle and contour extraction of series coefficients.
//! * [`limit`]: the closed-form time-averaged limit measure (exponentially
//!   localized around the defect), the localized total mass, and the weak
//!   limit density (point mass at the origin plus a deformed arcsine law).
//! * [`spectral`]: unit-circle eigenvalues and ℓ² eigenvectors for the
//!   defect family, the stationary measures they generate, and the identity
//!   connecting those to the time-averaged measure.
//! * [`carath`]: series-vs-closed-form consistency checks for the walk's
//!   matrix Carathéodory function, run in double-double precision so that
//!   truncation, not rounding, dominates the residual.
//! * [`verify`]: the acceptance checks wired into both `cargo test` and the
//!   CLI `verify` subcommand, each reporting target, measured value, and
//!   tolerance.
//!
//! # Quick start
//!
//! Time-averaged probability of finding the walker at the defect:
//!
//! ```
//! use qwalk::coin::{CoinMatrix, defect_coin};
//! use qwalk::engine::{CoinState, SpinorField, WalkConfig, time_average};
//!
//! let omega = std::f64::consts::PI;
//! let config = WalkConfig::new(defect_coin(omega), CoinMatrix::hadamard());
//! let psi0 = SpinorField::origin(CoinState::symmetric());
//! let avg = time_average(&psi0, &config, 2000);
//!
//! // The defect traps a positive fraction of the walk: the average does not
//! // decay to zero, and its closed form at ω = π is 8/25.
//! assert!((avg.mass_at(0) - 0.32).abs() < 0.02);
//! ```
//!
//! All arithmetic is `f64` (double-double where a check demands more); all
//! tolerances are absolute and stated at each operation.

pub mod carath;
pub mod coin;
pub mod dd;
pub mod engine;
mod error;
pub mod genfun;
pub mod limit;
pub mod oracle;
pub mod quad;
pub mod spectral;
pub mod verify;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
