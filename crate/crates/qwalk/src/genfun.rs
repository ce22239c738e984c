//! Generating functions of passage weights.
//!
//! For |z| < 1 the power series Ξ̃ₓ(z) = Σₙ Ξ(x,n) zⁿ converges (every
//! coefficient matrix has norm at most 1), and for a coin field that is
//! homogeneous away from finitely many sites it evaluates in closed form.
//! The key objects are two families of scalar "boundary" functions:
//!
//! * f̃⁺ₓ(z), the generating function of first returns to x from the right
//!   half-line {y > x}, and its mirror f̃⁻ₓ(z) for the left half-line;
//! * λ̃⁺ₓ(z) = z·dₓ/(1 − cₓf̃⁺ₓ) and λ̃⁻ₓ(z) = z·aₓ/(1 − bₓf̃⁻ₓ), the
//!   per-site transfer multipliers of outward excursions.
//!
//! Splitting paths by their half-line excursions gives the one-site
//! recursions
//!
//! ```text
//! f̃⁺ₓ = z²(b₁ + Δ₁f̃⁺ₓ₊₁)/(1 − c₁f̃⁺ₓ₊₁)      (entries of the coin at x+1)
//! f̃⁻ₓ = z²(c₋₁ + Δ₋₁f̃⁻ₓ₋₁)/(1 − b₋₁f̃⁻ₓ₋₁)   (entries of the coin at x−1)
//! ```
//!
//! which close into quadratics wherever the neighbouring coins no longer
//! vary. The root is pinned by |λ̃±| < 1 on the open disk, equivalently
//! f̃± → 0 as z → 0. Everything else assembles from these: the defect-site
//! resolvent Ξ̃₀, displaced resolvents Ξ̃ₓ as rank-one outer products
//! carried by λ̃-powers, the unit-circle poles of Ξ̃₀ that mark
//! localization, and Taylor coefficients by discrete contour inversion.
//!
//! The module is generic over the scalar type so the extended-precision
//! consistency checks (see [`crate::carath`]) reuse the same formulas
//! verbatim.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coin::Mat2;
use crate::dd::{Dd, DdC};
use crate::engine::WalkConfig;
use crate::{Error, Result};

/// Resolvent denominators smaller than this raise [`Error::PoleHit`].
pub const POLE_TOL: f64 = 1e-13;

/// How close |z| may come to 1 before evaluation demands the radial-limit
/// entry point instead.
const CIRCLE_TOL: f64 = 1e-12;

/// Complex scalar interface shared by `Complex64` and the double-double
/// [`DdC`]: exactly the operations the closed forms need.
pub(crate) trait Scalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_c64(z: Complex64) -> Self;
    fn conj(self) -> Self;
    /// Principal branch: nonnegative real part.
    fn sqrt(self) -> Self;
    /// Modulus rounded to `f64`; used only for branch decisions and guards,
    /// which are never near a tie at interior evaluation points.
    fn modulus(self) -> f64;

    fn from_f64(x: f64) -> Self {
        Self::from_c64(Complex64::new(x, 0.0))
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

impl Scalar for DdC {
    fn zero() -> Self {
        crate::dd::C_ZERO
    }
    fn one() -> Self {
        crate::dd::C_ONE
    }
    fn from_c64(z: Complex64) -> Self {
        DdC::from_complex(z)
    }
    fn conj(self) -> Self {
        DdC::conj(self)
    }
    fn sqrt(self) -> Self {
        DdC::sqrt(self)
    }
    fn modulus(self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }
}

/// Coin entries over a generic scalar.
#[derive(Clone, Copy)]
pub(crate) struct GCoin<C> {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl<C: Scalar> GCoin<C> {
    pub fn from_matrix(m: &crate::coin::CoinMatrix) -> Self {
        GCoin {
            a: C::from_c64(m.a()),
            b: C::from_c64(m.b()),
            c: C::from_c64(m.c()),
            d: C::from_c64(m.d()),
        }
    }

    pub fn det(&self) -> C {
        self.a * self.d - self.b * self.c
    }
}

/// A coin field that is homogeneous outside finitely many special sites,
/// optionally cut off below a wall site (a half-line walk).
pub(crate) struct LatticeCoins<C> {
    pub bulk: GCoin<C>,
    pub special: BTreeMap<i64, GCoin<C>>,
    /// `Some(x0)`: sites below x0 do not exist, so f̃⁻ₓ₀ ≡ 0.
    pub wall_below: Option<i64>,
}

impl<C: Scalar> LatticeCoins<C> {
    /// The standard one-defect field: `config.defect` at the origin,
    /// `config.bulk` elsewhere.
    pub fn one_defect(config: &WalkConfig) -> Self {
        Self::one_defect_at(config, 0)
    }

    /// The same field with every coin moved up by `site` lattice units, so
    /// the defect sits at `site` instead of the origin.
    pub fn one_defect_at(config: &WalkConfig, site: i64) -> Self {
        let mut special = BTreeMap::new();
        special.insert(site, GCoin::from_matrix(&config.defect));
        LatticeCoins { bulk: GCoin::from_matrix(&config.bulk), special, wall_below: None }
    }

    pub fn coin_at(&self, x: i64) -> &GCoin<C> {
        self.special.get(&x).unwrap_or(&self.bulk)
    }

    fn top_special(&self) -> Option<i64> {
        self.special.keys().next_back().copied()
    }

    fn bottom_special(&self) -> Option<i64> {
        self.special.keys().next().copied()
    }
}

/// Solves the homogeneous fixed-point quadratic c·f² + (z²Δ − 1)·f + z²b = 0
/// and returns the root with |λ| < 1 together with that λ = z·d/(1 − c·f).
fn plus_fixed_point<C: Scalar>(bulk: &GCoin<C>, z: C) -> Result<(C, C)> {
    fixed_point_of(z, bulk.c, bulk.b, bulk.d, bulk.det())
}

/// Mirror quadratic b·f² + (z²Δ − 1)·f + z²c = 0 with λ = z·a/(1 − b·f).
fn minus_fixed_point<C: Scalar>(bulk: &GCoin<C>, z: C) -> Result<(C, C)> {
    fixed_point_of(z, bulk.b, bulk.c, bulk.a, bulk.det())
}

/// Common core of the two fixed points: the quadratic
/// p·f² + (z²Δ − 1)·f + z²q = 0 with multiplier λ(f) = z·r/(1 − p·f).
///
/// The two roots carry multipliers whose moduli multiply to 1, so exactly
/// one satisfies |λ| < 1 strictly inside the disk.
fn fixed_point_of<C: Scalar>(z: C, p: C, q: C, r: C, det: C) -> Result<(C, C)> {
    if p.modulus() < 1e-14 {
        return Err(Error::Precondition(
            "a coin with a vanishing off-diagonal entry never crosses the defect; \
             its excursion quadratic degenerates"
                .into(),
        ));
    }
    let one = C::one();
    let lin = one - z * z * det;
    let disc_root = (lin * lin - C::from_f64(4.0) * p * (z * z) * q).sqrt();
    let two_p = C::from_f64(2.0) * p;
    let f1 = (lin + disc_root) / two_p;
    let f2 = (lin - disc_root) / two_p;
    let lam = |f: C| z * r / (one - p * f);
    let (l1, l2) = (lam(f1), lam(f2));
    let (m1, m2) = (l1.modulus(), l2.modulus());
    let first = if m1.is_nan() {
        false
    } else if m2.is_nan() {
        true
    } else {
        if (m1 - m2).abs() <= 1e-12 {
            return Err(Error::BranchAmbiguity);
        }
        m1 < m2
    };
    Ok(if first { (f1, l1) } else { (f2, l2) })
}

/// f̃⁺ₓ: bulk fixed point above the highest special site, then the one-site
/// recursion downward through whatever coins lie in between.
pub(crate) fn f_plus_at<C: Scalar>(field: &LatticeCoins<C>, x: i64, z: C) -> Result<C> {
    if let Some(x0) = field.wall_below {
        if x < x0 {
            return Err(Error::Precondition(format!(
                "site {x} lies below the wall at {x0}"
            )));
        }
    }
    let start = field.top_special().map_or(x, |t| t.max(x));
    let (mut f, _) = plus_fixed_point(&field.bulk, z)?;
    let z2 = z * z;
    let mut y = start;
    while y > x {
        let u = field.coin_at(y);
        let denom = C::one() - u.c * f;
        if denom.modulus() < POLE_TOL {
            return Err(Error::PoleHit { denom_abs: denom.modulus() });
        }
        f = z2 * (u.b + u.det() * f) / denom;
        y -= 1;
    }
    Ok(f)
}

/// f̃⁻ₓ: mirror of [`f_plus_at`], recursing upward; a wall pins f̃⁻ to 0 at
/// the boundary site.
pub(crate) fn f_minus_at<C: Scalar>(field: &LatticeCoins<C>, x: i64, z: C) -> Result<C> {
    let z2 = z * z;
    let (start, mut f) = match field.wall_below {
        Some(x0) => {
            if x < x0 {
                return Err(Error::Precondition(format!(
                    "site {x} lies below the wall at {x0}"
                )));
            }
            (x0, C::zero())
        }
        None => {
            let start = field.bottom_special().map_or(x, |b| b.min(x));
            let (f, _) = minus_fixed_point(&field.bulk, z)?;
            (start, f)
        }
    };
    let mut y = start;
    while y < x {
        let u = field.coin_at(y);
        let denom = C::one() - u.b * f;
        if denom.modulus() < POLE_TOL {
            return Err(Error::PoleHit { denom_abs: denom.modulus() });
        }
        f = z2 * (u.c + u.det() * f) / denom;
        y += 1;
    }
    Ok(f)
}

pub(crate) fn lambda_plus_at<C: Scalar>(field: &LatticeCoins<C>, x: i64, z: C) -> Result<C> {
    let u = field.coin_at(x);
    let f = f_plus_at(field, x, z)?;
    let denom = C::one() - u.c * f;
    if denom.modulus() < POLE_TOL {
        return Err(Error::PoleHit { denom_abs: denom.modulus() });
    }
    Ok(z * u.d / denom)
}

pub(crate) fn lambda_minus_at<C: Scalar>(field: &LatticeCoins<C>, x: i64, z: C) -> Result<C> {
    let u = field.coin_at(x);
    let f = f_minus_at(field, x, z)?;
    let denom = C::one() - u.b * f;
    if denom.modulus() < POLE_TOL {
        return Err(Error::PoleHit { denom_abs: denom.modulus() });
    }
    Ok(z * u.a / denom)
}

/// 2×2 matrix product over a generic scalar.
fn mat_mul<C: Scalar>(l: &[[C; 2]; 2], r: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[C::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = l[i][0] * r[0][j] + l[i][1] * r[1][j];
        }
    }
    out
}

/// Ξ̃₀(z): the resolvent at the site whose coin may differ, assembled from
/// the two boundary functions meeting there.
pub(crate) fn xi0_in<C: Scalar>(field: &LatticeCoins<C>, z: C) -> Result<[[C; 2]; 2]> {
    let fp = f_plus_at(field, 0, z)?;
    let fm = f_minus_at(field, 0, z)?;
    let u0 = field.coin_at(0);
    let one = C::one();
    let lam0 = one - u0.c * fp - u0.b * fm - u0.det() * fp * fm;
    if lam0.modulus() < POLE_TOL {
        return Err(Error::PoleHit { denom_abs: lam0.modulus() });
    }
    Ok([
        [(one - u0.b * fm) / lam0, u0.d * fp / lam0],
        [u0.a * fm / lam0, (one - u0.c * fp) / lam0],
    ])
}

/// Ξ̃ₓ(z) for any x: the displaced resolvent is a rank-one outer product of
/// the outward column at x and the departure row at 0, carried by λ̃
/// multipliers across the intervening sites, all times Ξ̃₀.
pub(crate) fn xi_x_in<C: Scalar>(field: &LatticeCoins<C>, x: i64, z: C) -> Result<[[C; 2]; 2]> {
    if x == 0 {
        return xi0_in(field, z);
    }
    let xi0 = xi0_in(field, z)?;
    let u0 = field.coin_at(0);
    let (col, row, carry) = if x > 0 {
        let mut carry = C::one();
        for y in 1..x {
            carry = carry * lambda_plus_at(field, y, z)?;
        }
        let lp = lambda_plus_at(field, x, z)?;
        let fp = f_plus_at(field, x, z)?;
        ([lp * fp, z], [u0.c, u0.d], carry)
    } else {
        let mut carry = C::one();
        for y in (x + 1)..0 {
            carry = carry * lambda_minus_at(field, y, z)?;
        }
        let lm = lambda_minus_at(field, x, z)?;
        let fm = f_minus_at(field, x, z)?;
        ([z, lm * fm], [u0.a, u0.b], carry)
    };
    let outer = [
        [carry * col[0] * row[0], carry * col[0] * row[1]],
        [carry * col[1] * row[0], carry * col[1] * row[1]],
    ];
    Ok(mat_mul(&outer, &xi0))
}

fn to_mat2(m: [[Complex64; 2]; 2]) -> Mat2 {
    Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

fn check_inside_disk(z: Complex64) -> Result<()> {
    let r = z.norm();
    if (r - 1.0).abs() <= CIRCLE_TOL {
        return Err(Error::BranchAmbiguity);
    }
    if r > 1.0 {
        return Err(Error::Precondition(format!(
            "generating functions are defined for |z| < 1, got |z| = {r}"
        )));
    }
    Ok(())
}

/// The four boundary-function values of a one-defect configuration.
///
/// `f_plus`/`f_minus` are the defect-site values f̃±₀ (they see only the
/// bulk coin), `lambda_plus`/`lambda_minus` the homogeneous-region
/// multipliers, and `w = Δ^{1/2}z` the substituted variable in which the
/// quadratic residual identities are stated.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryValues {
    pub w: Complex64,
    pub f_plus: Complex64,
    pub f_minus: Complex64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

/// Evaluates the boundary functions strictly inside the unit disk.
///
/// On the circle itself the root has two competing limits; call
/// [`eval_boundary_radial_limit`] there instead. Points with |z| > 1 are
/// outside the series' domain.
pub fn eval_boundary(config: &WalkConfig, z: Complex64) -> Result<BoundaryValues> {
    check_inside_disk(z)?;
    let bulk = GCoin::<Complex64>::from_matrix(&config.bulk);
    let (f_plus, lambda_plus) = plus_fixed_point(&bulk, z)?;
    let (f_minus, lambda_minus) = minus_fixed_point(&bulk, z)?;
    let w = config.bulk.det().sqrt() * z;
    Ok(BoundaryValues { w, f_plus, f_minus, lambda_plus, lambda_minus })
}

/// Radial limits of the boundary functions at a unit-circle point,
/// approached as z = (1−ε)e^{iθ}, ε ↓ 0.
///
/// In terms of w = Δ^{1/2}z = e^{iθ}, the limiting square root of
/// (w + w⁻¹)² − 4|a|² is
///
/// ```text
///   2·sgn(cos θ)·√(|c|² − sin²θ)     if |a| ≤ |cos θ|,
///  −2i·sgn(sin θ)·√(|a|² − cos²θ)    otherwise,
/// ```
///
/// real outside the spectral band and imaginary inside it (the two
/// expressions agree because cos²θ − |a|² = |c|² − sin²θ).
pub fn eval_boundary_radial_limit(config: &WalkConfig, z: Complex64) -> Result<BoundaryValues> {
    if (z.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "radial limits need |z| = 1, got |z| = {}",
            z.norm()
        )));
    }
    let delta_root = config.bulk.det().sqrt();
    let w = delta_root * z;
    let (ct, st) = (w.re, w.im);
    let a_abs = config.bulk.a().norm();
    let c_sq = config.bulk.c().norm_sqr();
    let s = if a_abs <= ct.abs() {
        Complex64::new(2.0 * ct.signum() * (c_sq - st * st).max(0.0).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -2.0 * st.signum() * (a_abs * a_abs - ct * ct).max(0.0).sqrt())
    };
    let u = Complex64::new(0.0, 2.0 * st);
    let v = Complex64::new(2.0 * ct, 0.0);
    let two = Complex64::new(2.0, 0.0);
    Ok(BoundaryValues {
        w,
        f_plus: -w * (u + s) / (two * config.bulk.c()),
        f_minus: -w * (u + s) / (two * config.bulk.b()),
        lambda_plus: delta_root * (v - s) / (two * config.bulk.a()),
        lambda_minus: delta_root * (v - s) / (two * config.bulk.d()),
    })
}

/// Quadratic residuals of the two boundary functions in the substituted
/// variable w; both must vanish wherever the functions are defined.
pub(crate) fn boundary_residuals(config: &WalkConfig, vals: &BoundaryValues) -> (f64, f64) {
    let w = vals.w;
    let u = w - Complex64::new(1.0, 0.0) / w;
    let b = config.bulk.b();
    let c = config.bulk.c();
    let plus =
        vals.f_plus * vals.f_plus + u * w / c * vals.f_plus - w * w * (c.norm() / c).powi(2);
    let minus =
        vals.f_minus * vals.f_minus + u * w / b * vals.f_minus - w * w * (b.norm() / b).powi(2);
    (plus.norm(), minus.norm())
}

/// Ξ̃₀(z) of the one-defect field, |z| < 1 and off the poles.
pub fn xi0_generating(config: &WalkConfig, z: Complex64) -> Result<Mat2> {
    check_inside_disk(z)?;
    let field = LatticeCoins::<Complex64>::one_defect(config);
    Ok(to_mat2(xi0_in(&field, z)?))
}

/// Ξ̃ₓ(z) of the one-defect field; x = 0 delegates to [`xi0_generating`].
pub fn xi_x_generating(config: &WalkConfig, x: i64, z: Complex64) -> Result<Mat2> {
    check_inside_disk(z)?;
    let field = LatticeCoins::<Complex64>::one_defect(config);
    Ok(to_mat2(xi_x_in(&field, x, z)?))
}

/// Unit-circle poles of Ξ̃₀ in the w-plane, when they exist.
///
/// With m = Re(c̄c₀), the resolvent denominator has circle zeros exactly
/// when |c|² > m, located at ±w₊ and ±w₋ with w± = (1 + |c|e^{±iγ})
/// normalized to modulus 1 and cos γ = −m/|c|. An empty set means no
/// localization, not a failure.
#[derive(Clone, Debug)]
pub enum PoleSet {
    Empty,
    Localized { gamma: f64, w_plus: Complex64, w_minus: Complex64 },
}

impl PoleSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, PoleSet::Empty)
    }

    /// All pole locations: ±w₊, ±w₋ (empty when not localized).
    pub fn points(&self) -> Vec<Complex64> {
        match self {
            PoleSet::Empty => Vec::new(),
            PoleSet::Localized { w_plus, w_minus, .. } => {
                vec![*w_plus, -*w_plus, *w_minus, -*w_minus]
            }
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match self {
            PoleSet::Empty => None,
            PoleSet::Localized { gamma, .. } => Some(*gamma),
        }
    }
}

/// Locates the unit-circle poles of Ξ̃₀ for a one-defect configuration.
pub fn find_poles(config: &WalkConfig) -> PoleSet {
    let c = config.bulk.c();
    let c0 = config.defect.c();
    let m = (c.conj() * c0).re;
    let c_abs = c.norm();
    if c_abs * c_abs <= m {
        return PoleSet::Empty;
    }
    let gamma = (-m / c_abs).clamp(-1.0, 1.0).acos();
    let raw_plus = Complex64::new(1.0 + c_abs * gamma.cos(), c_abs * gamma.sin());
    let raw_minus = raw_plus.conj();
    PoleSet::Localized {
        gamma,
        w_plus: raw_plus / raw_plus.norm(),
        w_minus: raw_minus / raw_minus.norm(),
    }
}

/// π to double-double accuracy (the low word is π − π_f64 rounded).
const DD_PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };

/// sin and cos by Taylor series; accurate to full double-double precision
/// for the small arguments used here (|x| < 0.1).
fn dd_sincos_small(x: Dd) -> (Dd, Dd) {
    let x2 = x * x;
    let mut sin = x;
    let mut term = x;
    let mut k = 1.0f64;
    while term.abs().hi > 1e-40 {
        // (k+1)(k+2) is an exact small integer; divide in full precision.
        term = -((term * x2) / Dd::from_f64((k + 1.0) * (k + 2.0)));
        sin = sin + term;
        k += 2.0;
    }
    let mut cos = crate::dd::ONE;
    term = crate::dd::ONE;
    k = 0.0;
    while term.abs().hi > 1e-40 {
        term = -((term * x2) / Dd::from_f64((k + 1.0) * (k + 2.0)));
        cos = cos + term;
        k += 2.0;
    }
    (sin, cos)
}

/// The 256 roots of unity e^{−2πij/256} in double-double, by repeated
/// multiplication from a Taylor-series primitive root.
fn dd_roots_of_unity() -> Vec<DdC> {
    let (sin, cos) = dd_sincos_small(DD_PI.scale(1.0 / 128.0));
    let step = DdC { re: cos, im: -sin };
    let mut roots = Vec::with_capacity(256);
    roots.push(crate::dd::C_ONE);
    for j in 1..256 {
        roots.push(roots[j - 1] * step);
    }
    roots
}

/// Taylor coefficients Ξ(x,0), …, Ξ(x,n_max) by discrete Fourier inversion
/// over 256 uniform samples on |z| = 1/2.
///
/// Coefficients are bounded by 1, so the aliasing error of the discrete
/// contour sum is at most (1/2)^(256−n): negligible for the supported
/// n_max ≤ 128. Undoing the contour radius multiplies absolute sample
/// errors by 2ⁿ, so the samples and twiddle factors are evaluated in
/// double-double; the amplified error stays below 1e−20 across the range.
pub fn series_coefficients(config: &WalkConfig, x: i64, n_max: usize) -> Result<Vec<Mat2>> {
    const SAMPLES: usize = 256;
    if n_max > 128 {
        return Err(Error::Precondition(format!(
            "contour inversion supports n_max <= 128, got {n_max}"
        )));
    }
    let roots = dd_roots_of_unity();
    let field = LatticeCoins::<DdC>::one_defect(config);
    let mut coeffs = vec![[[crate::dd::C_ZERO; 2]; 2]; n_max + 1];
    for k in 0..SAMPLES {
        // e^{iθ_k} is the conjugate of the table entry e^{−2πik/256}.
        let z = roots[k].conj().scale(Dd::from_f64(0.5));
        let sample = xi_x_in(&field, x, z)?;
        for (n, acc) in coeffs.iter_mut().enumerate() {
            let twiddle = roots[(n * k) % SAMPLES];
            for i in 0..2 {
                for j in 0..2 {
                    acc[i][j] = acc[i][j] + sample[i][j] * twiddle;
                }
            }
        }
    }
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(n, m)| {
            // 1/(256·(1/2)ⁿ) = 2^{n−8}: an exact scale.
            let undo = Dd::from_f64(2f64.powi(n as i32 - 8));
            Mat2::new(
                m[0][0].scale(undo).to_complex(),
                m[0][1].scale(undo).to_complex(),
                m[1][0].scale(undo).to_complex(),
                m[1][1].scale(undo).to_complex(),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{defect_coin, make_coin, CoinAngles, CoinMatrix};
    use crate::oracle::xi_via_engine;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn hadamard_pi_config() -> WalkConfig {
        WalkConfig::hadamard_with_defect(PI)
    }

    fn rotation_bulk() -> CoinMatrix {
        CoinMatrix::new(
            Complex64::new(0.8, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(-0.6, 0.0),
            Complex64::new(0.8, 0.0),
        )
        .unwrap()
    }

    use super::boundary_residuals as residuals;

    #[test]
    fn boundary_functions_vanish_at_small_z() {
        let config = hadamard_pi_config();
        let vals = eval_boundary(&config, Complex64::new(1e-8, 0.0)).unwrap();
        assert!(vals.f_plus.norm() < 1e-15);
        assert!(vals.f_minus.norm() < 1e-15);
        assert!(vals.lambda_plus.norm() < 1e-7);
        assert!(vals.lambda_minus.norm() < 1e-7);
    }

    #[test]
    fn quadratic_residuals_vanish_at_half() {
        let config = WalkConfig::homogeneous(CoinMatrix::hadamard());
        let z = Complex64::new(0.5, 0.0);
        let vals = eval_boundary(&config, z).unwrap();
        let (rp, rm) = residuals(&config, &vals);
        assert!(rp < 1e-12, "plus residual {rp}");
        assert!(rm < 1e-12, "minus residual {rm}");
    }

    #[test]
    fn multipliers_stay_inside_the_disk() {
        let configs = [
            hadamard_pi_config(),
            WalkConfig::hadamard_with_defect(1.0),
            WalkConfig::new(defect_coin(0.3), rotation_bulk()),
        ];
        for config in &configs {
            for &r in &[0.1, 0.5, 0.9, 0.99] {
                for k in 0..8 {
                    let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / 8.0 + 0.05);
                    let vals = eval_boundary(config, z).unwrap();
                    assert!(vals.lambda_plus.norm() < 1.0);
                    assert!(vals.lambda_minus.norm() < 1.0);
                }
            }
        }
    }

    #[test]
    fn shared_root_ties_the_two_sides_together() {
        // f̃⁻ = (c/b)·f̃⁺ and λ̃⁻ = (a/d)·λ̃⁺: both sides must have picked
        // the same square root.
        let config = WalkConfig::new(defect_coin(0.9), make_coin(CoinAngles::new(0.4, 1.3).unwrap()));
        for &r in &[0.2, 0.7, 0.95] {
            let z = Complex64::from_polar(r, 1.1);
            let vals = eval_boundary(&config, z).unwrap();
            let b = config.bulk.b();
            let c = config.bulk.c();
            let a = config.bulk.a();
            let d = config.bulk.d();
            assert!((vals.f_minus - vals.f_plus * c / b).norm() < 1e-12);
            assert!((vals.lambda_minus - vals.lambda_plus * a / d).norm() < 1e-12);
        }
    }

    #[test]
    fn branch_is_continuous_along_rays() {
        let config = hadamard_pi_config();
        for &theta in &[0.0, 0.7, 2.1, 4.4] {
            let mut prev: Option<BoundaryValues> = None;
            let mut t = 0.001;
            while t < 0.999 {
                let vals = eval_boundary(&config, Complex64::from_polar(t, theta)).unwrap();
                if let Some(p) = prev {
                    assert!(
                        (vals.f_plus - p.f_plus).norm() < 1e-2,
                        "f_plus jump at t={t}, theta={theta}"
                    );
                    assert!((vals.lambda_plus - p.lambda_plus).norm() < 1e-2);
                }
                prev = Some(vals);
                t += 0.001;
            }
        }
    }

    #[test]
    fn circle_evaluation_demands_the_radial_entry_point() {
        let config = hadamard_pi_config();
        let z = Complex64::from_polar(1.0, 0.3);
        assert!(matches!(eval_boundary(&config, z), Err(Error::BranchAmbiguity)));
        assert!(eval_boundary_radial_limit(&config, z).is_ok());
        let far = Complex64::new(1.5, 0.0);
        assert!(matches!(eval_boundary(&config, far), Err(Error::Precondition(_))));
    }

    #[test]
    fn radial_limit_agrees_with_interior_approach() {
        let config = hadamard_pi_config();
        for &theta in &[0.4, 1.0, 2.8] {
            let z_circle = Complex64::from_polar(1.0, theta);
            let limit = eval_boundary_radial_limit(&config, z_circle).unwrap();
            let near = eval_boundary(&config, Complex64::from_polar(1.0 - 1e-7, theta)).unwrap();
            assert!((limit.f_plus - near.f_plus).norm() < 1e-3, "theta {theta}");
            assert!((limit.lambda_plus - near.lambda_plus).norm() < 1e-3);
        }
    }

    #[test]
    fn outside_band_root_is_real_with_cosine_sign() {
        // Hadamard bulk: |a| = 1/√2; θ = 0.2 satisfies |a| ≤ |cos θ|.
        // Reconstruct S from f̃⁺ = −w(u+S)/(2c) and check it.
        let config = WalkConfig::homogeneous(CoinMatrix::hadamard());
        // w = i·z here (Δ = −1), so z = w/i places w = e^{iθ}.
        let theta: f64 = 0.2;
        let w = Complex64::from_polar(1.0, theta);
        let z = w / config.bulk.det().sqrt();
        let vals = eval_boundary_radial_limit(&config, z).unwrap();
        let u = w - w.conj();
        let s = -vals.f_plus * Complex64::new(2.0, 0.0) * config.bulk.c() / w - u;
        assert!(s.im.abs() < 1e-12);
        assert!(s.re > 0.0);
        let expected = 2.0 * (config.bulk.c().norm_sqr() - theta.sin().powi(2)).sqrt();
        assert!((s.re - expected).abs() < 1e-12);
    }

    #[test]
    fn multiplier_has_unit_modulus_inside_the_band() {
        let config = WalkConfig::homogeneous(CoinMatrix::hadamard());
        // θ = π/2 lies inside the band |a| > |cos θ|.
        let w = Complex64::from_polar(1.0, 0.5 * PI);
        let z = w / config.bulk.det().sqrt();
        let vals = eval_boundary_radial_limit(&config, z).unwrap();
        assert!((vals.lambda_plus.norm() - 1.0).abs() < 1e-12);
        assert!((vals.lambda_minus.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resolvent_at_origin_starts_from_identity() {
        let config = hadamard_pi_config();
        let xi = xi0_generating(&config, Complex64::new(1e-9, 0.0)).unwrap();
        assert!(xi.max_abs_diff(&Mat2::IDENTITY) < 1e-15);
    }

    #[test]
    fn root_of_unity_table_hits_the_axes() {
        let roots = dd_roots_of_unity();
        let q = roots[64].to_complex();
        assert!((q - Complex64::new(0.0, -1.0)).norm() < 1e-28);
        let h = roots[128].to_complex();
        assert!((h - Complex64::new(-1.0, 0.0)).norm() < 1e-28);
        let back = (roots[255] * roots[1]).to_complex();
        assert!((back - Complex64::new(1.0, 0.0)).norm() < 1e-28);
    }

    #[test]
    fn taylor_coefficients_match_engine_weights_at_origin() {
        for config in [hadamard_pi_config(), WalkConfig::new(defect_coin(1.2), rotation_bulk())] {
            let coeffs = series_coefficients(&config, 0, 20).unwrap();
            for (n, coeff) in coeffs.iter().enumerate() {
                let reference = xi_via_engine(0, n, &config).weight;
                assert!(
                    coeff.max_abs_diff(&reference) < 1e-10,
                    "order {n} mismatch: {:?}",
                    coeff.max_abs_diff(&reference)
                );
            }
        }
    }

    #[test]
    fn taylor_coefficients_match_engine_weights_displaced() {
        let config = hadamard_pi_config();
        for x in [-2i64, -1, 1, 2] {
            let coeffs = series_coefficients(&config, x, 12).unwrap();
            for (n, coeff) in coeffs.iter().enumerate() {
                let reference = xi_via_engine(x, n, &config).weight;
                assert!(
                    coeff.max_abs_diff(&reference) < 1e-10,
                    "x={x}, order {n}"
                );
            }
        }
    }

    #[test]
    fn first_arrival_zeroes_low_orders() {
        let config = hadamard_pi_config();
        let coeffs = series_coefficients(&config, 3, 2).unwrap();
        for coeff in &coeffs {
            assert!(coeff.max_abs() < 1e-12);
        }
    }

    #[test]
    fn poles_of_the_flip_defect_sit_at_known_points() {
        let config = hadamard_pi_config();
        let poles = find_poles(&config);
        let gamma = poles.gamma().expect("flip defect localizes");
        assert!((gamma - PI / 4.0).abs() < 1e-12);
        let expected = Complex64::new(3.0, 1.0) / 10f64.sqrt();
        match &poles {
            PoleSet::Localized { w_plus, w_minus, .. } => {
                assert!((w_plus - expected).norm() < 1e-12);
                assert!((w_minus - expected.conj()).norm() < 1e-12);
            }
            PoleSet::Empty => unreachable!(),
        }
        for p in poles.points() {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn defect_free_walk_has_no_poles() {
        let config = WalkConfig::hadamard_with_defect(0.0);
        assert!(find_poles(&config).is_empty());
    }

    #[test]
    fn resolvent_denominator_vanishes_at_the_poles() {
        let config = hadamard_pi_config();
        let u0 = &config.defect;
        for w in find_poles(&config).points() {
            let z = w / config.bulk.det().sqrt();
            let vals = eval_boundary_radial_limit(&config, z).unwrap();
            let lam0 = Complex64::new(1.0, 0.0)
                - u0.c() * vals.f_plus
                - u0.b() * vals.f_minus
                - u0.det() * vals.f_plus * vals.f_minus;
            assert!(lam0.norm() < 1e-8, "denominator {} at pole {w}", lam0.norm());
        }
    }

    #[test]
    fn near_pole_evaluation_reports_the_hit() {
        let config = hadamard_pi_config();
        // Radial approach to a pole: the resolvent magnitude grows without
        // bound, and close enough the guard trips.
        let pole_z = Complex64::new(3.0, 1.0) / 10f64.sqrt() / config.bulk.det().sqrt();
        for &eps in &[1e-10f64, 1e-11] {
            let z = pole_z * (1.0 - eps);
            match xi0_generating(&config, z) {
                // Close enough to trip the denominator guard: also fine.
                Err(Error::PoleHit { denom_abs }) => assert!(denom_abs < POLE_TOL),
                Ok(m) => assert!(
                    m.max_abs() > 1e6,
                    "resolvent stayed at {} near the pole",
                    m.max_abs()
                ),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn half_line_reflector_resolvent_matches_the_literal_closed_form() {
        // Right half-line walk: reflector at the origin, rotation bulk with
        // b = 0.6. The (L,L) resolvent entry has the literal form
        //   2b / (2b − z{(z−z⁻¹) + √((z−z⁻¹)² + 4b²)}),
        // with the root branch that tends to +z⁻¹ near the origin.
        let b = 0.6;
        let rho = 0.8;
        let bulk = GCoin {
            a: Complex64::new(rho, 0.0),
            b: Complex64::new(b, 0.0),
            c: Complex64::new(-b, 0.0),
            d: Complex64::new(rho, 0.0),
        };
        let reflector = GCoin {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(0.0, 0.0),
        };
        let mut special = BTreeMap::new();
        special.insert(0, reflector);
        let field = LatticeCoins { bulk, special, wall_below: Some(0) };

        for &z in &[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, 0.3),
            Complex64::new(-0.25, -0.4),
        ] {
            let xi = xi0_in(&field, z).unwrap();
            let u = z - 1.0 / z;
            let root = (u * u + Complex64::new(4.0 * b * b, 0.0)).sqrt();
            let candidates = [root, -root];
            let best = candidates
                .iter()
                .map(|&s| {
                    let literal = Complex64::new(2.0 * b, 0.0)
                        / (Complex64::new(2.0 * b, 0.0) - z * (u + s));
                    (literal - xi[0][0]).norm()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "literal mismatch {best} at z={z}");
            // The off-diagonal and lower entries reflect the wall: no
            // passage returns from the missing half-line.
            assert!(xi[0][1].norm() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn residuals_vanish_for_random_family_coins(
            om in 0.0f64..(2.0 * PI),
            omt in 0.0f64..(2.0 * PI),
            r in 0.05f64..0.95,
            theta in 0.0f64..(2.0 * PI),
        ) {
            let config = WalkConfig::homogeneous(make_coin(CoinAngles::wrapped(om, omt)));
            let z = Complex64::from_polar(r, theta);
            let vals = eval_boundary(&config, z).unwrap();
            let (rp, rm) = residuals(&config, &vals);
            prop_assert!(rp < 1e-10);
            prop_assert!(rm < 1e-10);
            prop_assert!(vals.lambda_plus.norm() < 1.0);
            prop_assert!(vals.lambda_minus.norm() < 1.0);
        }
    }
}
