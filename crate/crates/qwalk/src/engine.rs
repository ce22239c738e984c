//! Exact amplitude evolution on a growing window of the integer line.
//!
//! The state at time n is a spinor field Ψₙ: ℤ → ℂ², supported (for
//! origin-started walks) on [−n, n]. One step applies
//!
//! ```text
//! Ψ_{n+1}(x) = P_{x+1} Ψ_n(x+1) + Q_{x−1} Ψ_n(x−1)
//! ```
//!
//! where P/Q are the row parts of the coin at the *departure* site. Storage
//! is a contiguous array over the current window, grown by one site per
//! side per step, so an n-step evolution costs O(n²) small complex
//! operations and no hashing.
//!
//! The coin layout is abstracted as a [`CoinField`] so the same stepper
//! drives the one-defect model ([`WalkConfig`]), shifted layouts, and the
//! semi-infinite reflector used by the consistency checks in
//! [`crate::carath`].

use num_complex::Complex64;

use crate::coin::{defect_coin, CoinMatrix};
use crate::{Error, Result};

/// Assignment of a coin to every site of the line.
///
/// Implementations must be pure: the same `x` always yields the same coin.
pub trait CoinField {
    fn coin_at(&self, x: i64) -> CoinMatrix;
}

/// The one-defect layout: `defect` at the origin, `bulk` everywhere else.
#[derive(Clone, Copy, Debug)]
pub struct WalkConfig {
    pub defect: CoinMatrix,
    pub bulk: CoinMatrix,
}

impl WalkConfig {
    pub fn new(defect: CoinMatrix, bulk: CoinMatrix) -> Self {
        WalkConfig { defect, bulk }
    }

    /// Defect-free layout (the same coin everywhere).
    pub fn homogeneous(coin: CoinMatrix) -> Self {
        WalkConfig {
            defect: coin,
            bulk: coin,
        }
    }

    /// The standard one-parameter model: defect (1/√2)[[1,e^{iω}],[e^{−iω},−1]]
    /// at the origin, Hadamard bulk.
    pub fn hadamard_with_defect(omega: f64) -> Self {
        WalkConfig {
            defect: defect_coin(omega),
            bulk: CoinMatrix::hadamard(),
        }
    }

    /// Closed-form limit measures assume det U₀ = det U; callers of those
    /// formulas check here first.
    ///
    /// # Errors
    ///
    /// [`Error::DeterminantMismatch`] when the determinants differ by more
    /// than 1e-12.
    pub fn require_matching_determinants(&self) -> Result<()> {
        let deviation = (self.defect.det() - self.bulk.det()).norm();
        if deviation > 1e-12 {
            return Err(Error::DeterminantMismatch { deviation });
        }
        Ok(())
    }
}

impl CoinField for WalkConfig {
    fn coin_at(&self, x: i64) -> CoinMatrix {
        if x == 0 {
            self.defect
        } else {
            self.bulk
        }
    }
}

/// Chirality component selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Left,
    Right,
}

/// Initial coin spinor ᵀ[α, β], unit norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinState {
    alpha: Complex64,
    beta: Complex64,
}

impl CoinState {
    /// # Errors
    ///
    /// [`Error::Precondition`] unless |α|² + |β|² = 1 within 1e-12.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "initial spinor must be unit norm, got |\u{3b1}|\u{b2}+|\u{3b2}|\u{b2} = {norm}"
            )));
        }
        Ok(CoinState { alpha, beta })
    }

    /// ᵀ[1/√2, i/√2]: the state whose defect-free Hadamard walk is
    /// symmetric about the origin. The default initial state throughout.
    pub fn symmetric() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CoinState {
            alpha: Complex64::new(h, 0.0),
            beta: Complex64::new(0.0, h),
        }
    }

    /// A chirality basis spinor, ᵀ\[1,0\] or ᵀ\[0,1\].
    pub fn basis(side: Chirality) -> Self {
        match side {
            Chirality::Left => CoinState {
                alpha: Complex64::new(1.0, 0.0),
                beta: Complex64::ZERO,
            },
            Chirality::Right => CoinState {
                alpha: Complex64::ZERO,
                beta: Complex64::new(1.0, 0.0),
            },
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn as_spinor(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }
}

/// The walk state: a window [lo, hi] of per-site spinors and the time index.
#[derive(Clone, Debug)]
pub struct SpinorField {
    lo: i64,
    time: usize,
    amps: Vec<[Complex64; 2]>,
}

impl SpinorField {
    /// δ₀ ⊗ ψ₀: everything at the origin.
    pub fn origin(state: CoinState) -> Self {
        SpinorField {
            lo: 0,
            time: 0,
            amps: vec![state.as_spinor()],
        }
    }

    /// δₓ ⊗ ψ₀ at an arbitrary site (time index 0).
    pub fn point(x: i64, state: CoinState) -> Self {
        SpinorField {
            lo: x,
            time: 0,
            amps: vec![state.as_spinor()],
        }
    }

    /// Arbitrary window state at time 0. Panics on an empty window.
    pub fn from_window(lo: i64, amps: Vec<[Complex64; 2]>) -> Self {
        assert!(!amps.is_empty(), "spinor field needs at least one site");
        SpinorField { lo, time: 0, amps }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.amps.len() as i64 - 1
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// Amplitude at a site; zero outside the stored window.
    pub fn at(&self, x: i64) -> [Complex64; 2] {
        if x < self.lo || x > self.hi() {
            [Complex64::ZERO; 2]
        } else {
            self.amps[(x - self.lo) as usize]
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum()
    }

    /// Rescales so the total norm is 1. Panics on the zero field.
    pub fn normalized(mut self) -> Self {
        let n = self.norm_sq().sqrt();
        assert!(n > 0.0, "cannot normalize the zero field");
        for a in &mut self.amps {
            a[0] /= n;
            a[1] /= n;
        }
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, [Complex64; 2])> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, a)| (self.lo + i as i64, *a))
    }
}

/// One step of the walk under an arbitrary coin layout.
pub fn step_field<F: CoinField + ?Sized>(state: &SpinorField, coins: &F) -> SpinorField {
    let old_lo = state.lo;
    let old_len = state.amps.len() as i64;
    let new_lo = old_lo - 1;
    let new_len = (old_len + 2) as usize;
    let mut amps = Vec::with_capacity(new_len);
    for i in 0..new_len as i64 {
        let x = new_lo + i;
        // Left component arrives from x+1 (old index i), right from x−1
        // (old index i−2), each scattered by the coin where it departed.
        let mut l = Complex64::ZERO;
        let mut r = Complex64::ZERO;
        if (0..old_len).contains(&i) {
            let src = state.amps[i as usize];
            let u = coins.coin_at(x + 1);
            l = u.a() * src[0] + u.b() * src[1];
        }
        if (0..old_len).contains(&(i - 2)) {
            let src = state.amps[(i - 2) as usize];
            let u = coins.coin_at(x - 1);
            r = u.c() * src[0] + u.d() * src[1];
        }
        amps.push([l, r]);
    }
    SpinorField {
        lo: new_lo,
        time: state.time + 1,
        amps,
    }
}

/// One step of the one-defect walk.
pub fn step(state: &SpinorField, config: &WalkConfig) -> SpinorField {
    step_field(state, config)
}

/// n-fold step under an arbitrary coin layout.
pub fn evolve_field<F: CoinField + ?Sized>(
    initial: &SpinorField,
    coins: &F,
    n: usize,
) -> SpinorField {
    let mut state = initial.clone();
    for _ in 0..n {
        state = step_field(&state, coins);
    }
    state
}

/// n-fold step of the one-defect walk; n = 0 returns the input.
pub fn evolve(initial: &SpinorField, config: &WalkConfig, n: usize) -> SpinorField {
    evolve_field(initial, config, n)
}

/// Position distribution μ(x) = ‖Ψ(x)‖² as a windowed map, trimmed to the
/// support.
#[derive(Clone, Debug, Default)]
pub struct Measure {
    lo: i64,
    mass: Vec<f64>,
}

impl Measure {
    pub(crate) fn from_window(lo: i64, mass: Vec<f64>) -> Self {
        // Trim zero margins so window bounds mean something.
        let first = mass.iter().position(|&m| m != 0.0);
        match first {
            None => Measure {
                lo: 0,
                mass: Vec::new(),
            },
            Some(first) => {
                let last = mass.iter().rposition(|&m| m != 0.0).unwrap();
                Measure {
                    lo: lo + first as i64,
                    mass: mass[first..=last].to_vec(),
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.mass.len() as i64 - 1
    }

    /// Mass at a site; zero outside the support window.
    pub fn mass_at(&self, x: i64) -> f64 {
        if x < self.lo || x > self.hi() {
            0.0
        } else {
            self.mass[(x - self.lo) as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Σₓ x·μ(x), the mean position.
    pub fn mean_position(&self) -> f64 {
        self.iter().map(|(x, m)| x as f64 * m).sum()
    }

    /// Total mass at sites ≤ `x`.
    pub fn mass_up_to(&self, x: i64) -> f64 {
        self.iter().filter(|&(site, _)| site <= x).map(|(_, m)| m).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.mass
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.lo + i as i64, m))
    }
}

/// μ(x) = ‖Ψ(x)‖² per site.
pub fn measure(state: &SpinorField) -> Measure {
    let mass = state
        .amps
        .iter()
        .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
        .collect();
    Measure::from_window(state.lo, mass)
}

/// One chirality component's measure, |Ψ^L(x)|² or |Ψ^R(x)|².
pub fn chirality_measure(state: &SpinorField, side: Chirality) -> Measure {
    let pick = match side {
        Chirality::Left => 0,
        Chirality::Right => 1,
    };
    let mass = state.amps.iter().map(|a| a[pick].norm_sqr()).collect();
    Measure::from_window(state.lo, mass)
}

/// Cesàro average (1/T)·Σ_{n=0}^{T−1} μₙ of the one-defect walk.
///
/// Panics if `t_steps` is zero.
pub fn time_average(initial: &SpinorField, config: &WalkConfig, t_steps: usize) -> Measure {
    time_average_field(initial, config, t_steps)
}

/// Cesàro average under an arbitrary coin layout.
pub fn time_average_field<F: CoinField + ?Sized>(
    initial: &SpinorField,
    coins: &F,
    t_steps: usize,
) -> Measure {
    assert!(t_steps >= 1, "time average needs T >= 1");
    // The window after T−1 steps; accumulate in place, no trajectory kept.
    let final_lo = initial.lo - (t_steps as i64 - 1);
    let final_len = initial.amps.len() + 2 * (t_steps - 1);
    let mut acc = vec![0.0f64; final_len];
    let mut state = initial.clone();
    for n in 0..t_steps {
        if n > 0 {
            state = step_field(&state, coins);
        }
        let offset = (state.lo - final_lo) as usize;
        for (i, a) in state.amps.iter().enumerate() {
            acc[offset + i] += a[0].norm_sqr() + a[1].norm_sqr();
        }
    }
    let inv = 1.0 / t_steps as f64;
    for m in &mut acc {
        *m *= inv;
    }
    Measure::from_window(final_lo, acc)
}

/// P(Xₙ/n ≤ y) for each query point, from the exact measure at time n.
///
/// The mass at site x sits at the rescaled point x/n; no smoothing.
/// Panics unless n ≥ 1 and the points are strictly increasing in (−1, 1).
pub fn rescaled_empirical_cdf(
    initial: &SpinorField,
    config: &WalkConfig,
    n: usize,
    points: &[f64],
) -> Vec<f64> {
    assert!(n >= 1, "rescaled CDF needs n >= 1");
    assert!(
        points.windows(2).all(|w| w[0] < w[1]),
        "query points must be strictly increasing"
    );
    assert!(
        points.iter().all(|y| (-1.0..1.0).contains(y)),
        "query points must lie in (-1, 1)"
    );
    let mu = measure(&evolve(initial, config, n));
    points
        .iter()
        .map(|&y| {
            let cutoff = (y * n as f64).floor() as i64;
            mu.mass_up_to(cutoff)
        })
        .collect()
}
