//! Point spectrum and stationary measures of the defect-family walk.
//!
//! For the Hadamard bulk with the one-parameter defect coin, the walk
//! operator has exactly four unit-circle eigenvalues with square-summable
//! eigenvectors. Each eigenvector decays geometrically away from the
//! origin with ratio 1/√(3−2cos ω) and is fixed, up to one overall
//! amplitude, by a pair of sign choices (σ, τ). Three consequences are
//! built and checked here:
//!
//! * the eigenvectors themselves ([`build_eigenvector`]), verified against
//!   one engine step;
//! * the two-parameter family of measures they generate
//!   ([`stationary_measure`]), invariant under the evolution, including the
//!   flat measure of the defect-free Hadamard walk;
//! * the bridge back to time averaging: with the right parameter moduli the
//!   stationary measure coincides with the time-averaged limit measure of
//!   the origin-launched walk ([`match_time_average`]), and the eigenvalue
//!   set equals i times the resolvent pole set ([`mass_points_check`]).
//!
//! Launching the walk from any state orthogonal to all four eigenvectors
//! kills localization entirely; [`orthogonal_initial_state`] constructs
//! such a state near the origin.

use num_complex::Complex64;

use crate::engine::{step, CoinState, Measure, SpinorField, WalkConfig};
use crate::limit::time_avg_limit;
use crate::{Error, Result};

/// Degenerate-decay guard: the eigenvector construction needs
/// |γ| = 1/√(3−2cos ω) strictly inside the unit circle, which fails as
/// cos ω → 1.
const FLAT_COS_TOL: f64 = 1e-12;

fn check_sign(name: &str, value: f64) {
    assert!(
        value == 1.0 || value == -1.0,
        "{name} selects a branch and must be +1 or -1, got {value}"
    );
}

/// The four point-spectrum eigenvalues for defect angle ω, ordered
/// (σ,τ) = (+,+), (+,−), (−,+), (−,−).
///
/// Each is (σ√(2−cos²ω) + τi(2−cos ω)) / (√2·√(3−2cos ω)): unit modulus
/// for every ω, and the set is closed under conjugation and negation.
/// At cos ω = 1 the values are still defined but no square-summable
/// eigenvector exists for them; see [`EigenData::new`].
pub fn eigenvalues(omega: f64) -> [Complex64; 4] {
    let co = omega.cos();
    let root = (2.0 - co * co).sqrt();
    let scale = std::f64::consts::SQRT_2 * (3.0 - 2.0 * co).sqrt();
    let mut out = [Complex64::ZERO; 4];
    for (slot, (sigma, tau)) in out
        .iter_mut()
        .zip([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)])
    {
        *slot = Complex64::new(sigma * root, tau * (2.0 - co)) / scale;
    }
    out
}

/// One eigenvalue–eigenvector branch of the defect-family walk.
///
/// Constructed from the defect angle, the two branch signs and the free
/// overall amplitude Ψ^L(0); everything else — the eigenvalue η, the decay
/// root γ, and Ψ^R(0) — is forced by the eigen-equation. In particular the
/// two origin amplitudes are *not* independent: the equation at x = ±1
/// pins Ψ^R(0) = −i(sin ω + στ√(2−cos²ω))·Ψ^L(0).
#[derive(Clone, Copy, Debug)]
pub struct EigenData {
    omega: f64,
    sigma: f64,
    tau: f64,
    eta: Complex64,
    gamma_root: Complex64,
    phi_l0: Complex64,
    phi_r0: Complex64,
    /// Ψ^R(x)/Ψ^L(x) on the positive axis; the negative axis uses its
    /// negative, flipped between components.
    ratio_plus: Complex64,
}

impl EigenData {
    /// # Errors
    ///
    /// [`Error::DegenerateEigenvector`] when cos ω is within 1e-12 of 1
    /// (ω ∈ 2πℤ, or close enough that the decay root has modulus 1 to
    /// machine precision and no ℓ² eigenvector exists).
    ///
    /// # Panics
    ///
    /// If `sigma` or `tau` is anything other than ±1.
    pub fn new(omega: f64, sigma: f64, tau: f64, phi_l0: Complex64) -> Result<EigenData> {
        check_sign("sigma", sigma);
        check_sign("tau", tau);
        let co = omega.cos();
        if (1.0 - co).abs() < FLAT_COS_TOL {
            return Err(Error::DegenerateEigenvector { omega });
        }
        let root = (2.0 - co * co).sqrt();
        let decay = (3.0 - 2.0 * co).sqrt();
        let eta = Complex64::new(sigma * root, tau * (2.0 - co))
            / (std::f64::consts::SQRT_2 * decay);
        let gamma_root = Complex64::new(0.0, -tau / decay);
        let ratio_plus = Complex64::new(1.0 - co, -sigma * tau * root);
        let phi_r0 = Complex64::new(0.0, -(omega.sin() + sigma * tau * root)) * phi_l0;
        Ok(EigenData {
            omega,
            sigma,
            tau,
            eta,
            gamma_root,
            phi_l0,
            phi_r0,
            ratio_plus,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The eigenvalue η, unit modulus.
    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// The in-disk root γ of z² + √2(η − 1/η)z − 1; the eigenvector decays
    /// like |γ|^|x| = (3−2cos ω)^{−|x|/2}.
    pub fn gamma_root(&self) -> Complex64 {
        self.gamma_root
    }

    /// The free amplitude Ψ^L(0).
    pub fn phi_l0(&self) -> Complex64 {
        self.phi_l0
    }

    /// The forced amplitude Ψ^R(0).
    pub fn phi_r0(&self) -> Complex64 {
        self.phi_r0
    }

    /// Residual of the quadratic the decay root must satisfy,
    /// |γ² + √2(η − 1/η)γ − 1|. Zero up to rounding by construction;
    /// exposed so callers can audit a branch before trusting it.
    pub fn quadratic_residual(&self) -> f64 {
        let g = self.gamma_root;
        let hg = g * g + std::f64::consts::SQRT_2 * (self.eta - self.eta.inv()) * g
            - Complex64::new(1.0, 0.0);
        hg.norm()
    }
}

/// Per-site spinors of the eigenvector, without any window truncation.
fn eigen_amplitude(data: &EigenData, x: i64) -> [Complex64; 2] {
    if x == 0 {
        return [data.phi_l0, data.phi_r0];
    }
    if x > 0 {
        let geo = (-data.gamma_root).powi(x as i32);
        let left = data.phi_l0 * geo;
        [left, data.ratio_plus * left]
    } else {
        let geo = data.gamma_root.powi((-x) as i32);
        let right = data.phi_r0 * geo;
        [-data.ratio_plus * right, right]
    }
}

/// The eigenvector truncated to [−window, window], as a time-0 field.
///
/// On the positive axis Ψ^L(x) = Ψ^L(0)·(−γ)^x with Ψ^R locked to it by a
/// fixed ratio; the negative axis mirrors the structure with γ^|x| and the
/// opposite ratio. Truncation error is geometric: the discarded tail has
/// amplitude (3−2cos ω)^{−window/2}.
///
/// # Panics
///
/// If `window` < 1.
pub fn build_eigenvector(data: &EigenData, window: i64) -> SpinorField {
    assert!(window >= 1, "eigenvector window must contain the defect");
    let amps = (-window..=window).map(|x| eigen_amplitude(data, x)).collect();
    SpinorField::from_window(-window, amps)
}

/// Max interior defect of the eigen-equation after one engine step:
/// max over |x| ≤ window−1 of ‖(UΨ)(x) − ηΨ(x)‖∞.
///
/// Interior only, because one step pulls amplitude in from the truncation
/// boundary; everything strictly inside is exact up to rounding.
pub fn eigen_residual(data: &EigenData, window: i64) -> f64 {
    let field = build_eigenvector(data, window);
    let config = WalkConfig::hadamard_with_defect(data.omega);
    let stepped = step(&field, &config);
    let mut worst = 0.0f64;
    for x in (-window + 1)..window {
        let got = stepped.at(x);
        let want = eigen_amplitude(data, x);
        worst = worst
            .max((got[0] - data.eta * want[0]).norm())
            .max((got[1] - data.eta * want[1]).norm());
    }
    worst
}

/// Pointwise mass of the eigenvector-family measure with origin amplitudes
/// (φ_L, φ_R):
///
/// ```text
/// μ(x) = (3−2cos ω)^{−|x|} × ⎧ 2(2−cos ω)|φ_L|²    x ≥ 1
///                            ⎨ |φ_L|² + |φ_R|²     x = 0
///                            ⎩ 2(2−cos ω)|φ_R|²    x ≤ −1
/// ```
///
/// This is ‖Ψ(x)‖² of the displayed eigenvector shape for any parameter
/// pair; the measure is invariant under the walk when the pair satisfies
/// the eigen-equation ratio (see [`EigenData::new`]). At ω = 0 the decay
/// factor is 1 and choosing |φ_L|² = |φ_R|² = c/2 makes μ ≡ c: the flat
/// stationary measure of the defect-free Hadamard walk.
pub fn stationary_mass(omega: f64, phi_l0: Complex64, phi_r0: Complex64, x: i64) -> f64 {
    let co = omega.cos();
    let decay = (3.0 - 2.0 * co).powi(-(x.abs() as i32));
    let site = if x > 0 {
        2.0 * (2.0 - co) * phi_l0.norm_sqr()
    } else if x < 0 {
        2.0 * (2.0 - co) * phi_r0.norm_sqr()
    } else {
        phi_l0.norm_sqr() + phi_r0.norm_sqr()
    };
    decay * site
}

/// Truncation window for [`stationary_measure`]. The discarded tail mass
/// is a geometric remainder, at most (3−2cos ω)^{−200} of the x = 200
/// term's scale; the measure is summable but deliberately not normalized.
pub const STATIONARY_WINDOW: i64 = 200;

/// The eigenvector-family measure tabulated on |x| ≤ [`STATIONARY_WINDOW`].
pub fn stationary_measure(omega: f64, phi_l0: Complex64, phi_r0: Complex64) -> Measure {
    let mass = (-STATIONARY_WINDOW..=STATIONARY_WINDOW)
        .map(|x| stationary_mass(omega, phi_l0, phi_r0, x))
        .collect();
    Measure::from_window(-STATIONARY_WINDOW, mass)
}

/// Chirality split of the time-averaged limit measure at the defect, for
/// the origin-launched walk with ψ₀ = ᵀ[1/√2, i/√2]:
///
/// ```text
/// (L, R) = ((1−cos ω)/(3−2cos ω))² · (1 ± sin ω/(1+sin²ω))
/// ```
///
/// with the left chirality carrying the plus sign. The two add up to the
/// full time-averaged origin mass.
pub fn chirality_time_avg_at_origin(omega: f64) -> (f64, f64) {
    let co = omega.cos();
    let s = omega.sin();
    let base = ((1.0 - co) / (3.0 - 2.0 * co)).powi(2);
    let skew = s / (1.0 + s * s);
    (base * (1.0 + skew), base * (1.0 - skew))
}

/// How far the eigenvector-family measure, with moduli chosen as the
/// chirality split of [`chirality_time_avg_at_origin`], sits from the
/// closed-form time-averaged limit measure of the origin-launched walk.
///
/// Returns the max absolute pointwise deviation over |x| ≤ 50. Both sides
/// are closed forms, so the deviation is pure rounding (≲ 1e-15); the two
/// measures are identical as functions of x. Note the identification is at
/// the level of the *measure*: the modulus pair it prescribes is not an
/// eigen-equation ratio, so the measure-matching state and the eigenvector
/// differ even though their site masses agree.
///
/// # Errors
///
/// Propagates [`time_avg_limit`] failures; none occur for the Hadamard
/// defect family.
pub fn match_time_average(omega: f64) -> Result<f64> {
    let (l_mass, r_mass) = chirality_time_avg_at_origin(omega);
    let phi_l = Complex64::new(l_mass.sqrt(), 0.0);
    let phi_r = Complex64::new(r_mass.sqrt(), 0.0);
    let config = WalkConfig::hadamard_with_defect(omega);
    let psi0 = CoinState::symmetric();
    let mut worst = 0.0f64;
    for x in -50..=50 {
        let closed = time_avg_limit(&config, &psi0, x)?;
        worst = worst.max((stationary_mass(omega, phi_l, phi_r, x) - closed).abs());
    }
    Ok(worst)
}

/// Checks {i·w : w a resolvent pole} = {the four eigenvalues} as sets.
///
/// Matches each rotated pole to its nearest still-unclaimed eigenvalue and
/// returns the worst matched distance, or `None` when the walk has no
/// poles (no localization) and the identity is vacuous.
pub fn mass_points_check(omega: f64) -> Option<f64> {
    let config = WalkConfig::hadamard_with_defect(omega);
    let poles = crate::genfun::find_poles(&config);
    if poles.is_empty() {
        return None;
    }
    let evs = eigenvalues(omega);
    let mut taken = [false; 4];
    let mut worst = 0.0f64;
    for w in poles.points() {
        let rotated = Complex64::new(0.0, 1.0) * w;
        let mut best = f64::INFINITY;
        let mut best_j = 0;
        for (j, &e) in evs.iter().enumerate() {
            let d = (rotated - e).norm();
            if !taken[j] && d < best {
                best = d;
                best_j = j;
            }
        }
        taken[best_j] = true;
        worst = worst.max(best);
    }
    Some(worst)
}

fn inner(u: &[[Complex64; 2]], v: &[[Complex64; 2]]) -> Complex64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| a[0].conj() * b[0] + a[1].conj() * b[1])
        .sum()
}

/// Half-width of the support of [`orthogonal_initial_state`].
pub const ORTHOGONAL_SUPPORT: i64 = 3;

/// A unit-norm state near the origin that never localizes: it is
/// orthogonal to all four point-spectrum eigenvectors, so its time-averaged
/// position measure decays to zero everywhere.
///
/// The state is supported on |x| ≤ [`ORTHOGONAL_SUPPORT`]. Because it has
/// no amplitude outside that window, orthogonality to the eigenvectors
/// restricted there is orthogonality to the full eigenvectors, up to the
/// window-`window` truncation of the restrictions themselves (geometrically
/// small). Construction: orthonormalize the four restrictions, then
/// project them out of a fixed list of seed states and keep the first
/// remainder with enough norm to be well-conditioned.
///
/// # Errors
///
/// [`Error::DegenerateEigenvector`] for ω ∈ 2πℤ (no point spectrum to
/// avoid — every state already spreads ballistically);
/// [`Error::Precondition`] if the four restrictions collide into a
/// lower-dimensional span, or if every seed lies in it.
///
/// # Panics
///
/// If `window` < [`ORTHOGONAL_SUPPORT`] + 1.
pub fn orthogonal_initial_state(omega: f64, window: i64) -> Result<SpinorField> {
    assert!(
        window > ORTHOGONAL_SUPPORT,
        "truncation window must exceed the support half-width"
    );
    let sites = (2 * ORTHOGONAL_SUPPORT + 1) as usize;
    let mut basis: Vec<Vec<[Complex64; 2]>> = Vec::with_capacity(4);
    for (sigma, tau) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let data = EigenData::new(omega, sigma, tau, Complex64::new(1.0, 0.0))?;
        let field = build_eigenvector(&data, window);
        let mut restricted: Vec<[Complex64; 2]> = (-ORTHOGONAL_SUPPORT..=ORTHOGONAL_SUPPORT)
            .map(|x| field.at(x))
            .collect();
        // Modified Gram–Schmidt against the ones already kept.
        for prev in &basis {
            let overlap = inner(prev, &restricted);
            for (r, p) in restricted.iter_mut().zip(prev) {
                r[0] -= overlap * p[0];
                r[1] -= overlap * p[1];
            }
        }
        let norm = inner(&restricted, &restricted).re.sqrt();
        if norm < 1e-10 {
            return Err(Error::Precondition(format!(
                "eigenvector restrictions are linearly dependent at \u{3c9} = {omega}; \
                 cannot span the subspace to avoid"
            )));
        }
        for r in &mut restricted {
            r[0] /= norm;
            r[1] /= norm;
        }
        basis.push(restricted);
    }

    let mut seeds: Vec<Vec<[Complex64; 2]>> = Vec::new();
    let origin = ORTHOGONAL_SUPPORT as usize;
    let symmetric = CoinState::symmetric().as_spinor();
    let mut seed = vec![[Complex64::ZERO; 2]; sites];
    seed[origin] = symmetric;
    seeds.push(seed);
    for (offset, component) in [(0i64, 0usize), (0, 1), (1, 0), (-1, 1)] {
        let mut seed = vec![[Complex64::ZERO; 2]; sites];
        seed[(origin as i64 + offset) as usize][component] = Complex64::new(1.0, 0.0);
        seeds.push(seed);
    }

    for mut seed in seeds {
        for prev in &basis {
            let overlap = inner(prev, &seed);
            for (s, p) in seed.iter_mut().zip(prev) {
                s[0] -= overlap * p[0];
                s[1] -= overlap * p[1];
            }
        }
        let norm = inner(&seed, &seed).re.sqrt();
        if norm > 0.1 {
            for s in &mut seed {
                s[0] /= norm;
                s[1] /= norm;
            }
            return Ok(SpinorField::from_window(-ORTHOGONAL_SUPPORT, seed));
        }
    }
    Err(Error::Precondition(format!(
        "every seed state lies in the eigenvector span at \u{3c9} = {omega}"
    )))
}
