//! The acceptance suite: ten numbered checks, each comparing a measured
//! quantity against a closed-form target with an explicit tolerance.
//!
//! Every check reduces to one or more [`CriterionReport`] records of the
//! same shape: a deviation that must not exceed its tolerance. The suite
//! is deterministic — the random coins and random initial states come from
//! a fixed-seed generator — so a report can be regenerated bit-for-bit.
//!
//! The checks cross-validate independent implementations of the same
//! quantities: path enumeration against the evolution engine, contour
//! coefficients against passage weights, long Cesàro averages against
//! closed-form limits, empirical rescaled distributions against the
//! limiting law, eigenvector algebra against brute-force stepping, and
//! truncated amplitude series against resolvent entries.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::carath::{caratheodory_check, reflector_config};
use crate::coin::{defect_coin, make_coin, CoinAngles};
use crate::engine::{
    evolve, measure, rescaled_empirical_cdf, time_average, CoinState, SpinorField, WalkConfig,
};
use crate::genfun::{boundary_residuals, eval_boundary, series_coefficients};
use crate::limit::weak_density;
use crate::oracle::{enumerate_xi, xi_via_engine};
use crate::quad::GaussLegendre;
use crate::spectral::{
    build_eigenvector, eigen_residual, mass_points_check, match_time_average,
    orthogonal_initial_state, stationary_mass, EigenData,
};
use crate::Result;

/// Number of criteria in the suite.
pub const CRITERION_COUNT: usize = 10;

/// Short name of criterion `k` (1-based), used by the `--only` filter.
pub fn criterion_name(k: usize) -> &'static str {
    match k {
        1 => "oracle",
        2 => "series",
        3 => "timeavg",
        4 => "nodefect",
        5 => "normalization",
        6 => "cdf",
        7 => "spectral",
        8 => "masspoints",
        9 => "caratheodory",
        10 => "orthogonal",
        _ => "unknown",
    }
}

/// One pass/fail record: `measured` must stay within `tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    /// 1-based criterion number.
    pub criterion: usize,
    /// What is being measured against what target.
    pub target: String,
    /// The achieved deviation (NaN when the runner itself failed).
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn record(criterion: usize, target: impl Into<String>, measured: f64, tolerance: f64) -> CriterionReport {
    CriterionReport {
        criterion,
        target: target.into(),
        measured,
        tolerance,
        pass: measured <= tolerance,
    }
}

/// Runs criterion `k` (1-based); out-of-range numbers yield no records.
pub fn run_criterion(k: usize) -> Vec<CriterionReport> {
    let outcome = match k {
        1 => oracle_equivalence(),
        2 => series_consistency(),
        3 => localization_value(),
        4 => no_defect_null(),
        5 => weak_limit_normalization(),
        6 => weak_convergence(),
        7 => eigen_stationary_suite(),
        8 => mass_point_identity(),
        9 => caratheodory_consistency(),
        10 => orthogonal_delocalization(),
        _ => return Vec::new(),
    };
    outcome.unwrap_or_else(|e| {
        vec![CriterionReport {
            criterion: k,
            target: format!("runner failed: {e}"),
            measured: f64::NAN,
            tolerance: 0.0,
            pass: false,
        }]
    })
}

/// Runs the whole suite, or the criteria whose name contains `filter`
/// (a bare number selects by position instead).
pub fn run_all(filter: Option<&str>) -> Vec<CriterionReport> {
    let selected = |k: usize| match filter {
        None => true,
        Some(f) => criterion_name(k).contains(f) || f.parse() == Ok(k),
    };
    (1..=CRITERION_COUNT)
        .filter(|&k| selected(k))
        .flat_map(run_criterion)
        .collect()
}

/// Fixed-seed generator (splitmix64) for the suite's random coins and
/// states; a library-private dependency float keeps the reports stable.
struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> SplitMix64 {
        SplitMix64(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn random_coin_state(rng: &mut SplitMix64) -> CoinState {
    loop {
        let parts: [f64; 4] = std::array::from_fn(|_| 2.0 * rng.next_f64() - 1.0);
        let norm = parts.iter().map(|p| p * p).sum::<f64>().sqrt();
        if norm < 0.1 {
            continue;
        }
        let alpha = Complex64::new(parts[0], parts[1]) / norm;
        let beta = Complex64::new(parts[2], parts[3]) / norm;
        return CoinState::new(alpha, beta).expect("normalized by construction");
    }
}

/// A random one-defect configuration: defect angle and bulk angle pair all
/// uniform, redrawn in the measure-zero event of a zero bulk entry.
fn random_config(rng: &mut SplitMix64) -> WalkConfig {
    loop {
        let bulk = make_coin(CoinAngles::wrapped(
            rng.next_f64() * TAU,
            rng.next_f64() * TAU,
        ));
        if bulk.has_zero_entry() {
            continue;
        }
        return WalkConfig::new(defect_coin(rng.next_f64() * TAU), bulk);
    }
}

/// Criterion 1: brute-force path enumeration and the evolution engine
/// produce identical passage weights over the full reachable range.
fn oracle_equivalence() -> Result<Vec<CriterionReport>> {
    let mut configs: Vec<WalkConfig> = [0.0, FRAC_PI_4, FRAC_PI_2, PI]
        .iter()
        .map(|&omega| WalkConfig::hadamard_with_defect(omega))
        .collect();
    let mut rng = SplitMix64::new(0x0a11_5eed_0001);
    configs.extend((0..3).map(|_| random_config(&mut rng)));

    let mut worst = 0.0f64;
    for config in &configs {
        for n in 0..=12usize {
            for x in -(n as i64)..=n as i64 {
                let enumerated = enumerate_xi(x, n, config)?;
                let engine = xi_via_engine(x, n, config);
                worst = worst.max(enumerated.weight.max_abs_diff(&engine.weight));
            }
        }
    }
    Ok(vec![record(
        1,
        "path enumeration = engine passage weights, |x| <= n <= 12, 7 configurations",
        worst,
        1e-12,
    )])
}

/// Criterion 2: contour-extracted Taylor coefficients match engine passage
/// weights, and the boundary functions satisfy their quadratics on a
/// 1000-point sample of the disk.
fn series_consistency() -> Result<Vec<CriterionReport>> {
    let mut worst_coeff = 0.0f64;
    for omega in [FRAC_PI_2, PI] {
        let config = WalkConfig::hadamard_with_defect(omega);
        for x in -3i64..=3 {
            let coeffs = series_coefficients(&config, x, 20)?;
            for (n, coeff) in coeffs.iter().enumerate() {
                let engine = xi_via_engine(x, n, &config);
                worst_coeff = worst_coeff.max(coeff.max_abs_diff(&engine.weight));
            }
        }
    }

    let sample_configs = [
        WalkConfig::hadamard_with_defect(FRAC_PI_2),
        WalkConfig::new(
            defect_coin(1.0),
            make_coin(CoinAngles::new(2.0, 0.7).expect("angles in range")),
        ),
    ];
    let mut worst_quad = 0.0f64;
    for config in &sample_configs {
        for k in 0..20 {
            let r = 0.0475 * (k + 1) as f64;
            for j in 0..25 {
                let theta = TAU * (j as f64 + 0.5) / 25.0;
                let z = Complex64::from_polar(r, theta);
                let vals = eval_boundary(config, z)?;
                let (rp, rm) = boundary_residuals(config, &vals);
                worst_quad = worst_quad.max(rp).max(rm);
            }
        }
    }

    Ok(vec![
        record(
            2,
            "contour Taylor coefficients = passage weights, |x| <= 3, n <= 20",
            worst_coeff,
            1e-10,
        ),
        record(
            2,
            "boundary-function quadratic residuals on 1000 disk points",
            worst_quad,
            1e-10,
        ),
    ])
}

/// Criterion 3: the Cesàro average at the strongest defect reaches its
/// closed-form limit values at the origin and its neighbors.
fn localization_value() -> Result<Vec<CriterionReport>> {
    let config = WalkConfig::hadamard_with_defect(PI);
    let mu = time_average(
        &SpinorField::origin(CoinState::symmetric()),
        &config,
        5000,
    );
    Ok(vec![
        record(3, "time-averaged origin mass -> 0.32", (mu.mass_at(0) - 0.32).abs(), 0.02),
        record(3, "time-averaged mass at +1 -> 0.192", (mu.mass_at(1) - 0.192).abs(), 0.02),
        record(3, "time-averaged mass at -1 -> 0.192", (mu.mass_at(-1) - 0.192).abs(), 0.02),
    ])
}

/// Criterion 4: without a defect the origin mass decays to zero.
fn no_defect_null() -> Result<Vec<CriterionReport>> {
    let config = WalkConfig::hadamard_with_defect(0.0);
    let mu = time_average(
        &SpinorField::origin(CoinState::symmetric()),
        &config,
        5000,
    );
    Ok(vec![record(
        4,
        "defect-free time-averaged origin mass -> 0",
        mu.mass_at(0),
        0.02,
    )])
}

/// Continuous mass of the weak-limit law by singularity-free quadrature:
/// x = r sin t cancels the inverse square root of the arcsine kernel.
fn continuous_mass(density: &crate::limit::WeakLimitDensity) -> f64 {
    let r = density.radius();
    let scale = (1.0 - r * r).sqrt() / PI;
    GaussLegendre::new(50).integrate_composite(-FRAC_PI_2, FRAC_PI_2, 40, |t| {
        let x = r * t.sin();
        density.w(x) * scale / (1.0 - x * x)
    })
}

/// Criterion 5: atom plus continuous mass is a probability for all defect
/// angles and initial states, with the closed-form split at the strongest
/// defect.
fn weak_limit_normalization() -> Result<Vec<CriterionReport>> {
    let mut rng = SplitMix64::new(0x57a7_e5ee_d5);
    let states: Vec<CoinState> = (0..10).map(|_| random_coin_state(&mut rng)).collect();

    let mut worst = 0.0f64;
    for k in 1..=15 {
        let config = WalkConfig::hadamard_with_defect(k as f64 * PI / 8.0);
        for psi0 in &states {
            let density = weak_density(&config, psi0)?;
            let total = density.atom_mass() + continuous_mass(&density);
            worst = worst.max((total - 1.0).abs());
        }
    }

    let strongest = weak_density(
        &WalkConfig::hadamard_with_defect(PI),
        &CoinState::symmetric(),
    )?;
    Ok(vec![
        record(
            5,
            "atom + quadrature mass = 1 over 15 angles x 10 random states",
            worst,
            1e-6,
        ),
        record(5, "atom mass = 0.8 at the strongest defect", (strongest.atom_mass() - 0.8).abs(), 1e-15),
        record(5, "quadrature mass = 0.2 at the strongest defect", (continuous_mass(&strongest) - 0.2).abs(), 1e-6),
    ])
}

/// Criterion 6: the rescaled position distribution at n = 2000 is close to
/// the limiting law at ten fixed query points, half of them outside the
/// ballistic support where only tail mass can sit.
fn weak_convergence() -> Result<Vec<CriterionReport>> {
    let points = [-0.6, -0.4, -0.3, -0.2, -0.1, 0.1, 0.2, 0.3, 0.4, 0.6];
    let config = WalkConfig::hadamard_with_defect(PI);
    let psi0 = CoinState::symmetric();
    let empirical = rescaled_empirical_cdf(&SpinorField::origin(psi0), &config, 2000, &points);
    let density = weak_density(&config, &psi0)?;
    let sup = empirical
        .iter()
        .zip(&points)
        .map(|(e, &y)| (e - density.cdf(y)).abs())
        .fold(0.0f64, f64::max);
    Ok(vec![record(
        6,
        "sup |empirical rescaled CDF - limit CDF| at 10 fixed points, n = 2000",
        sup,
        0.03,
    )])
}

/// Criterion 7: the eigenvector algebra against the engine — pointwise
/// eigen-equation residuals, invariance of the displayed measure under
/// 50 steps, agreement of the matched stationary measure with the
/// time-averaged limit, and exact flatness in the defect-free case.
fn eigen_stationary_suite() -> Result<Vec<CriterionReport>> {
    let phi_l0 = Complex64::new(0.6, 0.3);
    let angles = [FRAC_PI_4, FRAC_PI_2, PI];

    let mut worst_eigen = 0.0f64;
    let mut worst_fifty = 0.0f64;
    for &omega in &angles {
        let config = WalkConfig::hadamard_with_defect(omega);
        for sigma in [1.0, -1.0] {
            for tau in [1.0, -1.0] {
                let data = EigenData::new(omega, sigma, tau, phi_l0)?;
                worst_eigen = worst_eigen.max(eigen_residual(&data, 200));

                let field = build_eigenvector(&data, 200);
                let before = measure(&field);
                let after = measure(&evolve(&field, &config, 50));
                for x in -149i64..=149 {
                    worst_fifty = worst_fifty.max((after.mass_at(x) - before.mass_at(x)).abs());
                }
            }
        }
    }

    let mut worst_match = 0.0f64;
    for &omega in &angles {
        worst_match = worst_match.max(match_time_average(omega)?);
    }

    // Defect-free case: the |gamma| = 1 stationary family is exactly flat.
    let c = 0.34f64;
    let amp = (c / 2.0).sqrt();
    let phi_l = Complex64::new(amp, 0.0);
    let phi_r = Complex64::new(0.0, -amp);
    let window = 150i64;
    let amps: Vec<[Complex64; 2]> = (-window..=window)
        .map(|x| {
            if x >= 0 {
                let geo = Complex64::new(0.0, 1.0).powi(x as i32);
                [phi_l * geo, Complex64::new(0.0, -1.0) * phi_l * geo]
            } else {
                let geo = Complex64::new(0.0, -1.0).powi((-x) as i32);
                [Complex64::new(0.0, 1.0) * phi_r * geo, phi_r * geo]
            }
        })
        .collect();
    let flat_field = SpinorField::from_window(-window, amps);
    let mut worst_flat = 0.0f64;
    for x in -window..=window {
        worst_flat = worst_flat.max((stationary_mass(0.0, phi_l, phi_r, x) - c).abs());
    }
    let mut worst_flat_engine = 0.0f64;
    let evolved = measure(&evolve(
        &flat_field,
        &WalkConfig::hadamard_with_defect(0.0),
        40,
    ));
    for x in -(window - 41)..=(window - 41) {
        worst_flat_engine = worst_flat_engine.max((evolved.mass_at(x) - c).abs());
    }

    Ok(vec![
        record(7, "eigen-equation residual, 3 angles x 4 branches, W = 200", worst_eigen, 1e-12),
        record(7, "displayed measure invariant under 50 steps, causal interior", worst_fifty, 1e-10),
        record(7, "matched stationary measure = time-averaged limit, |x| <= 50", worst_match, 1e-12),
        record(7, "defect-free stationary measure exactly uniform", worst_flat, 1e-15),
        record(7, "uniform measure engine-invariant over 40 steps", worst_flat_engine, 1e-12),
    ])
}

/// Criterion 8: rotating the resolvent's circle poles by i lands exactly
/// on the four eigenvalues.
fn mass_point_identity() -> Result<Vec<CriterionReport>> {
    let mut worst = 0.0f64;
    for omega in [FRAC_PI_4, FRAC_PI_2, PI] {
        let dev = mass_points_check(omega).expect("defect angles produce poles");
        worst = worst.max(dev);
    }
    Ok(vec![record(
        8,
        "rotated resolvent poles = eigenvalue set, 3 angles",
        worst,
        1e-10,
    )])
}

/// Criterion 9: truncated amplitude series against closed-form resolvent
/// entries, scalar on the half line and 2x2 on the full line, with the
/// truncation tail as the yardstick.
fn caratheodory_consistency() -> Result<Vec<CriterionReport>> {
    let zs = [
        Complex64::new(0.4, 0.0),
        Complex64::new(0.0, 0.4),
        Complex64::new(-0.3, 0.3),
    ];
    let half_line = reflector_config();
    let defect = WalkConfig::hadamard_with_defect(PI);
    let mut worst_semi = 0.0f64;
    let mut worst_doubly = 0.0f64;
    for &z in &zs {
        let semi_report = caratheodory_check(&half_line, z, 60)?;
        let semi = semi_report
            .semi_infinite
            .expect("the swap defect seals the half line");
        worst_semi = worst_semi.max(semi / semi_report.tail_bound);
        worst_doubly = worst_doubly.max(semi_report.doubly_infinite / semi_report.tail_bound);

        let defect_report = caratheodory_check(&defect, z, 60)?;
        worst_doubly = worst_doubly.max(defect_report.doubly_infinite / defect_report.tail_bound);
    }
    Ok(vec![
        record(
            9,
            "half-line series identity residual over truncation tail, N = 60",
            worst_semi,
            2.0,
        ),
        record(
            9,
            "full-line matrix series identity residual over truncation tail, N = 60",
            worst_doubly,
            2.0,
        ),
    ])
}

/// Criterion 10: an initial state orthogonal to every localized
/// eigenvector escapes the defect, while the generic state stays pinned.
fn orthogonal_delocalization() -> Result<Vec<CriterionReport>> {
    let config = WalkConfig::hadamard_with_defect(PI);
    let orthogonal = orthogonal_initial_state(PI, 200)?;
    let mu_orth = time_average(&orthogonal, &config, 2000);
    let mu_generic = time_average(
        &SpinorField::origin(CoinState::symmetric()),
        &config,
        2000,
    );
    Ok(vec![
        record(10, "orthogonal-state time-averaged origin mass -> 0", mu_orth.mass_at(0), 0.01),
        record(
            10,
            "generic-state time-averaged origin mass -> 0.32",
            (mu_generic.mass_at(0) - 0.32).abs(),
            0.02,
        ),
    ])
}
