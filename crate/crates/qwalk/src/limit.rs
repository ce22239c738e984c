//! Long-run position statistics in closed form.
//!
//! Two limit theorems govern the one-defect walk. Time-averaging the
//! position distribution gives an exponentially localized limit measure
//! μ̄∞ around the defect, positive exactly when |c|² > m where
//! m = Re(c̄c₀) couples the bulk and defect coins. Rescaling by n instead
//! gives weak convergence of Xₙ/n to a random variable Z whose law mixes a
//! point mass at the origin (weight C, the total of μ̄∞) with an
//! absolutely continuous part w(x)·f_K(x;|a|) supported on (−|a|, |a|).
//! Both laws are rational in the coin entries and evaluated here exactly;
//! the only numerics is the CDF quadrature.

use num_complex::Complex64;

use crate::engine::{CoinState, WalkConfig};
use crate::quad::GaussLegendre;
use crate::{Error, Result};

/// Scalars of the one-defect pair that every closed form below depends on.
#[derive(Clone, Copy, Debug)]
pub struct DerivedParams {
    /// m = Re(c̄·c₀), the bulk–defect coupling.
    pub m: f64,
    /// |c|² of the bulk coin.
    pub loc_c2: f64,
    /// |a|² of the bulk coin.
    pub loc_a2: f64,
    /// 1 − 2m + |c|², the common denominator of the localized masses.
    pub denom: f64,
    /// Bulk determinant.
    pub delta: Complex64,
    /// Defect determinant.
    pub delta0: Complex64,
}

impl DerivedParams {
    /// The localization dichotomy: μ̄∞ > 0 exactly when |c|² > m.
    pub fn localizes(&self) -> bool {
        self.loc_c2 > self.m
    }
}

pub fn derived_params(config: &WalkConfig) -> DerivedParams {
    let m = (config.bulk.c().conj() * config.defect.c()).re;
    DerivedParams {
        m,
        loc_c2: config.bulk.c().norm_sqr(),
        loc_a2: config.bulk.a().norm_sqr(),
        denom: 1.0 - 2.0 * m + config.bulk.c().norm_sqr(),
        delta: config.bulk.det(),
        delta0: config.defect.det(),
    }
}

/// The arcsine-type density √(1−r²)/(π(1−x²)√(r²−x²)) on (−r, r).
///
/// Vanishes off the support; the endpoints |x| = r return +∞ (the
/// singularity is integrable and handled by substitution in quadrature).
/// The radius r is meaningful for r ∈ (0,1); anything else has empty
/// support here.
pub fn f_k(x: f64, r: f64) -> f64 {
    if !(r > 0.0 && r < 1.0) || x.abs() > r {
        return 0.0;
    }
    if x.abs() == r {
        return f64::INFINITY;
    }
    (1.0 - r * r).sqrt() / (std::f64::consts::PI * (1.0 - x * x) * (r * r - x * x).sqrt())
}

fn require_matching_determinants(config: &WalkConfig) -> Result<DerivedParams> {
    config.require_matching_determinants()?;
    Ok(derived_params(config))
}

/// The side-dependent brackets of the localized measure at |x| ≥ 1, as
/// functions of the initial coin state.
fn side_brackets(config: &WalkConfig, psi0: &CoinState, p: &DerivedParams) -> (f64, f64) {
    let alpha = psi0.alpha();
    let beta = psi0.beta();
    let a2 = alpha.norm_sqr();
    let b2 = beta.norm_sqr();
    let u0 = &config.defect;
    let even = 1.0 + u0.c().norm_sqr() - 2.0 * p.m * p.m / p.loc_c2;
    let cross_vec = u0.d().conj() * (u0.c() - p.m / config.bulk.c().conj());
    let cross = 2.0 * (alpha * beta.conj() * cross_vec).re;
    (even * a2 + u0.a().norm_sqr() * b2 + cross, even * b2 + u0.a().norm_sqr() * a2 - cross)
}

/// Guards the |x| ≥ 1 closed form against the disconnected corner
/// |c|² = m², reachable only when the defect has a₀ = 0 with anti-aligned
/// phases — the line then splits into two half-lines and the displayed
/// formula degenerates to 0·∞.
fn off_origin_factor(p: &DerivedParams) -> Result<f64> {
    let spread = p.loc_c2 - p.m * p.m;
    if spread.abs() < 1e-14 {
        return Err(Error::Precondition(
            "the defect disconnects the line (|c|² = m²); masses away from the origin \
             have no closed form here"
                .into(),
        ));
    }
    Ok(p.loc_c2 * (1.0 - p.m) / (spread * p.denom))
}

/// Mass of the time-averaged limit measure at site x.
///
/// Zero everywhere when |c|² ≤ m. Otherwise ½(2(|c|²−m)/(1−2m+|c|²))² at
/// the origin, decaying geometrically in |x| with ratio |a|²/(1−2m+|c|²)
/// and a side-dependent weight in the initial coin state.
pub fn time_avg_limit(config: &WalkConfig, psi0: &CoinState, x: i64) -> Result<f64> {
    let p = require_matching_determinants(config)?;
    if !p.localizes() {
        return Ok(0.0);
    }
    let origin = 0.5 * (2.0 * (p.loc_c2 - p.m) / p.denom).powi(2);
    if x == 0 {
        return Ok(origin);
    }
    let factor = off_origin_factor(&p)?;
    let ratio = p.loc_a2 / p.denom;
    let (plus, minus) = side_brackets(config, psi0, &p);
    let bracket = if x > 0 { plus } else { minus };
    Ok(origin * factor * ratio.powi(x.unsigned_abs() as i32 - 1) * bracket)
}

/// Total mass C = Σₓ μ̄∞(x) of the localized part, summed in closed form
/// as a geometric series. Always in [0, 1); the initial-state dependence
/// of the two side brackets cancels in the total.
pub fn localized_mass(config: &WalkConfig, psi0: &CoinState) -> Result<f64> {
    let p = require_matching_determinants(config)?;
    if !p.localizes() {
        return Ok(0.0);
    }
    let origin = 0.5 * (2.0 * (p.loc_c2 - p.m) / p.denom).powi(2);
    let factor = off_origin_factor(&p)?;
    let ratio = p.loc_a2 / p.denom;
    let (plus, minus) = side_brackets(config, psi0, &p);
    Ok(origin * (1.0 + factor * (plus + minus) / (1.0 - ratio)))
}

/// The law of the rescaled limit Z: an atom at the origin plus the density
/// w(x)·f_K(x; r) on (−r, r).
#[derive(Clone, Debug)]
pub struct WeakLimitDensity {
    atom_mass: f64,
    radius: f64,
    gamma_plus: f64,
    gamma_minus: f64,
    linear: f64,
    m: f64,
    loc_c2: f64,
    spread: f64,
    degenerate_at_origin: bool,
    psi0: CoinState,
}

impl WeakLimitDensity {
    /// Weight C of the point mass at the origin.
    pub fn atom_mass(&self) -> f64 {
        self.atom_mass
    }

    /// Support radius r = |a| of the continuous part.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// True when m = |c|²: the rational weight then has a removable 0/0 at
    /// the origin and `w(0) = 0` is a convention rather than the limit.
    pub fn degenerate_at_origin(&self) -> bool {
        self.degenerate_at_origin
    }

    /// The initial coin state the density was built for.
    pub fn psi0(&self) -> &CoinState {
        &self.psi0
    }

    /// The side-dependent constant γ(x) in the bracket of w; the right
    /// branch applies for x ≥ 0.
    pub fn gamma(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.gamma_plus
        } else {
            self.gamma_minus
        }
    }

    /// The rational weight multiplying f_K. Zero at the origin by the x²
    /// prefactor (a convention in the degenerate m = |c|² corner, where the
    /// prefactor becomes 0/0).
    pub fn w(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let den = (self.loc_c2 - self.m).powi(2) + self.spread * x * x;
        if den == 0.0 {
            return 0.0;
        }
        self.loc_c2 * x * x / den * (self.gamma(x) + self.linear * x)
    }

    /// The continuous part w(x)·f_K(x;r) of the density of Z.
    pub fn continuous_density(&self, x: f64) -> f64 {
        self.w(x) * f_k(x, self.radius)
    }

    /// P(Z ≤ y): the atom (when y ≥ 0) plus the integrated continuous
    /// part. The substitution x = r·sin t removes the endpoint singularity
    /// of f_K; a fixed 2000-node composite Gauss–Legendre rule then
    /// integrates the smooth result.
    pub fn cdf(&self, y: f64) -> f64 {
        let atom = if y >= 0.0 { self.atom_mass } else { 0.0 };
        let r = self.radius;
        if y <= -r {
            return atom;
        }
        let t_hi = (y / r).clamp(-1.0, 1.0).asin();
        let rule = GaussLegendre::new(50);
        let scale = (1.0 - r * r).sqrt() / std::f64::consts::PI;
        let integral = rule.integrate_composite(-std::f64::consts::FRAC_PI_2, t_hi, 40, |t| {
            let x = r * t.sin();
            self.w(x) * scale / (1.0 - x * x)
        });
        atom + integral
    }
}

/// P(Z ≤ y) for the law `density`; see [`WeakLimitDensity::cdf`].
pub fn weak_cdf(density: &WeakLimitDensity, y: f64) -> f64 {
    density.cdf(y)
}

/// Builds the law of the weak limit Z for a configuration and initial coin
/// state.
///
/// The continuous weight is
/// w(x) = |c|²x² / ((|c|²−m)² + (|c|²−m²)x²) · [γ(x) + ℓx]
/// with side-dependent γ and a linear coefficient ℓ fixed by the drift of
/// the walk (see the drift consistency test).
pub fn weak_density(config: &WalkConfig, psi0: &CoinState) -> Result<WeakLimitDensity> {
    let p = require_matching_determinants(config)?;
    let r2 = p.loc_a2;
    if !(r2 > 1e-14 && p.loc_c2 > 1e-14) {
        return Err(Error::Precondition(
            "the rescaled limit needs both coin columns active (0 < |a| < 1); \
             a diagonal or anti-diagonal bulk coin walks degenerately"
                .into(),
        ));
    }
    let atom_mass = localized_mass(config, psi0)?;
    let alpha = psi0.alpha();
    let beta = psi0.beta();
    let u0 = &config.defect;
    let even = 1.0 - 2.0 * p.m + u0.c().norm_sqr();
    let a02 = u0.a().norm_sqr();
    let cross =
        2.0 * (u0.a() * alpha * ((config.bulk.b() - u0.b()) * beta).conj()).re;
    let gamma_plus = alpha.norm_sqr() * even + beta.norm_sqr() * a02 + cross;
    let gamma_minus = beta.norm_sqr() * even + alpha.norm_sqr() * a02 - cross;
    // The linear coefficient uses the defect entries a₀, b₀. The drift
    // consistency test below pins this choice against the walk itself: at
    // ω = π/2 the simulated E[Xₙ/n] separates it cleanly from the two
    // plausible alternatives (bulk entries in the cross term, or half this
    // value), and it reduces to the homogeneous law when the defect is
    // absent.
    let linear = -(a02 * (alpha.norm_sqr() - beta.norm_sqr())
        + 2.0 * (u0.a() * alpha * (u0.b() * beta).conj()).re);
    Ok(WeakLimitDensity {
        atom_mass,
        radius: r2.sqrt(),
        gamma_plus,
        gamma_minus,
        linear,
        m: p.m,
        loc_c2: p.loc_c2,
        spread: p.loc_c2 - p.m * p.m,
        degenerate_at_origin: (p.loc_c2 - p.m).abs() < 1e-14,
        psi0: *psi0,
    })
}
