//! The command drivers: each turns a resolved [`ExperimentSpec`] into a
//! [`Table`] (or, for `verify`, into criterion records).

use std::sync::atomic::{AtomicUsize, Ordering};

use qwalk::coin::defect_coin;
use qwalk::engine::{evolve, measure, time_average, SpinorField, WalkConfig};
use qwalk::genfun::find_poles;
use qwalk::limit::{time_avg_limit, weak_density};
use qwalk::verify::{criterion_name, run_all, CriterionReport};

use crate::config::ExperimentSpec;
use crate::error::CliError;
use crate::report::{Cell, Table};

fn in_window(window: Option<i64>, x: i64) -> bool {
    window.is_none_or(|w| x.abs() <= w)
}

/// Exact position distribution after n steps, columns (x, mu).
pub fn simulate(spec: &ExperimentSpec) -> Result<Table, CliError> {
    let steps = spec.require_steps()?;
    let mu = measure(&evolve(&SpinorField::origin(spec.psi0), &spec.walk, steps));
    let rows = mu
        .iter()
        .filter(|&(x, _)| in_window(spec.window, x))
        .map(|(x, m)| vec![Cell::Int(x), Cell::Num(m)])
        .collect();
    Ok(Table {
        metadata: spec.echo.clone(),
        columns: vec!["x", "mu"],
        rows,
    })
}

/// Cesàro average over the first T measures; with `compare_theory`, the
/// closed-form limit and the absolute difference are appended per row and
/// the largest difference is reported.
pub struct TimeavgOutcome {
    pub table: Table,
    pub max_abs_diff: Option<f64>,
}

pub fn timeavg(spec: &ExperimentSpec) -> Result<TimeavgOutcome, CliError> {
    let horizon = spec.require_horizon()?;
    let mu = time_average(&SpinorField::origin(spec.psi0), &spec.walk, horizon);
    let sites = mu.iter().filter(|&(x, _)| in_window(spec.window, x));

    let mut table = Table {
        metadata: spec.echo.clone(),
        columns: vec!["x", "mu_bar"],
        rows: Vec::new(),
    };
    if !spec.compare_theory {
        table.rows = sites.map(|(x, m)| vec![Cell::Int(x), Cell::Num(m)]).collect();
        return Ok(TimeavgOutcome { table, max_abs_diff: None });
    }

    table.columns = vec!["x", "mu_bar", "theory", "abs_diff"];
    let mut max_abs_diff = 0.0f64;
    for (x, m) in sites {
        let theory = time_avg_limit(&spec.walk, &spec.psi0, x)
            .map_err(|e| CliError::precondition("coin", e.to_string()))?;
        let diff = (m - theory).abs();
        max_abs_diff = max_abs_diff.max(diff);
        table.rows.push(vec![
            Cell::Int(x),
            Cell::Num(m),
            Cell::Num(theory),
            Cell::Num(diff),
        ]);
    }
    table
        .metadata
        .push(("max_abs_diff".into(), format!("{max_abs_diff:.16e}")));
    Ok(TimeavgOutcome { table, max_abs_diff: Some(max_abs_diff) })
}

/// Closed-form localization summary per defect angle: the weak-limit atom,
/// the time-averaged origin mass, and the resolvent pole angle (NaN when
/// the poles do not exist). Cells are computed by a worker pool; output
/// order is grid order regardless of completion order.
pub fn sweep(spec: &ExperimentSpec) -> Result<Table, CliError> {
    let grid = spec.require_grid()?;
    let kind = spec.report.as_deref().unwrap_or("localization");
    if kind != "localization" {
        return Err(CliError::parse(
            "report",
            format!("unknown report {kind:?}; available: localization"),
        ));
    }
    if spec.echo.iter().any(|(key, _)| key == "defect") {
        return Err(CliError::parse(
            "defect",
            "sweep varies the defect angle; drop the explicit defect coin",
        ));
    }

    let bulk = spec.walk.bulk;
    let psi0 = spec.psi0;
    let cell = move |omega: f64| -> Result<Vec<Cell>, CliError> {
        let config = WalkConfig::new(defect_coin(omega), bulk);
        let oops = |e: qwalk::Error| {
            CliError::precondition("omega_grid", format!("at omega = {omega}: {e}"))
        };
        let density = weak_density(&config, &psi0).map_err(oops)?;
        let origin_mass = time_avg_limit(&config, &psi0, 0).map_err(oops)?;
        let gamma = find_poles(&config).gamma().unwrap_or(f64::NAN);
        Ok(vec![
            Cell::Num(omega),
            Cell::Num(density.atom_mass()),
            Cell::Num(origin_mass),
            Cell::Num(gamma),
        ])
    };

    let workers = spec
        .threads
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(usize::from).unwrap_or(1)
        })
        .clamp(1, grid.len());
    let next = AtomicUsize::new(0);
    let mut cells: Vec<(usize, Result<Vec<Cell>, CliError>)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= grid.len() {
                            break;
                        }
                        local.push((i, cell(grid[i])));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    cells.sort_by_key(|&(i, _)| i);

    let mut rows = Vec::with_capacity(grid.len());
    for (_, outcome) in cells {
        rows.push(outcome?);
    }
    Ok(Table {
        metadata: spec.echo.clone(),
        columns: vec!["omega", "atom_mass", "mu_bar_origin", "pole_angle"],
        rows,
    })
}

/// The verification suite, optionally filtered.
#[derive(Debug)]
pub struct VerifySummary {
    pub records: Vec<CriterionReport>,
    pub all_pass: bool,
}

pub fn verify(only: Option<&str>) -> Result<VerifySummary, CliError> {
    let records = run_all(only);
    if records.is_empty() {
        return Err(CliError::precondition(
            "only",
            format!("{:?} selects no criterion", only.unwrap_or("")),
        ));
    }
    let all_pass = records.iter().all(|r| r.pass);
    Ok(VerifySummary { records, all_pass })
}

/// Human-readable verify report: a headline per criterion, details per
/// record.
pub fn render_verify_text(records: &[CriterionReport]) -> String {
    let mut out = String::new();
    let mut criteria: Vec<usize> = records.iter().map(|r| r.criterion).collect();
    criteria.dedup();
    for k in criteria {
        let group: Vec<&CriterionReport> =
            records.iter().filter(|r| r.criterion == k).collect();
        let pass = group.iter().all(|r| r.pass);
        out.push_str(&format!(
            "[{}] criterion {k:2} ({})\n",
            if pass { "PASS" } else { "FAIL" },
            criterion_name(k)
        ));
        for r in group {
            out.push_str(&format!(
                "       {:<72} measured {:>12.4e}  tolerance {:>9.1e}  {}\n",
                r.target,
                r.measured,
                r.tolerance,
                if r.pass { "ok" } else { "FAIL" }
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentSpec, FileConfig, Overrides};

    fn spec_with(command: &'static str, flags: Overrides) -> ExperimentSpec {
        ExperimentSpec::resolve(command, &FileConfig::default(), flags).unwrap()
    }

    #[test]
    fn simulate_emits_a_unit_mass_distribution() {
        let spec = spec_with(
            "simulate",
            Overrides { omega: Some(std::f64::consts::PI), steps: Some(40), ..Default::default() },
        );
        let table = simulate(&spec).unwrap();
        assert_eq!(table.columns, vec!["x", "mu"]);
        let total: f64 = table
            .rows
            .iter()
            .map(|row| match row[1] {
                Cell::Num(v) => v,
                _ => panic!("mu must be numeric"),
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simulate_without_steps_names_the_field() {
        let err = simulate(&spec_with("simulate", Overrides::default())).unwrap_err();
        assert!(err.machine_record().contains("steps"));
    }

    #[test]
    fn timeavg_comparison_converges_at_the_strong_defect() {
        let spec = spec_with(
            "timeavg",
            Overrides {
                omega: Some(std::f64::consts::PI),
                horizon: Some(600),
                window: Some(3),
                compare_theory: true,
                ..Default::default()
            },
        );
        let outcome = timeavg(&spec).unwrap();
        assert!(outcome.max_abs_diff.unwrap() < 0.05);
        assert!(outcome
            .table
            .metadata
            .iter()
            .any(|(k, _)| k == "max_abs_diff"));
    }

    #[test]
    fn sweep_rows_follow_grid_order_for_any_worker_count() {
        for threads in [1usize, 3] {
            let spec = spec_with(
                "sweep",
                Overrides {
                    omega_grid: Some("0:3.14159:7".into()),
                    threads: Some(threads),
                    ..Default::default()
                },
            );
            let table = sweep(&spec).unwrap();
            assert_eq!(table.rows.len(), 7);
            let omegas: Vec<f64> = table
                .rows
                .iter()
                .map(|row| match row[0] {
                    Cell::Num(v) => v,
                    _ => panic!("omega must be numeric"),
                })
                .collect();
            assert!(omegas.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn sweep_atom_hits_the_closed_form_at_pi() {
        let spec = spec_with(
            "sweep",
            Overrides { omega_grid: Some("3.141592653589793:3.141592653589793:1".into()), ..Default::default() },
        );
        let table = sweep(&spec).unwrap();
        match (&table.rows[0][1], &table.rows[0][3]) {
            (Cell::Num(atom), Cell::Num(gamma)) => {
                assert!((atom - 0.8).abs() < 1e-14);
                assert!(gamma.is_finite());
            }
            _ => panic!("numeric cells expected"),
        }
    }

    #[test]
    fn sweep_no_defect_angle_has_no_poles() {
        let spec = spec_with(
            "sweep",
            Overrides { omega_grid: Some("0:0:1".into()), ..Default::default() },
        );
        let table = sweep(&spec).unwrap();
        match table.rows[0][3] {
            Cell::Num(gamma) => assert!(gamma.is_nan()),
            _ => panic!("numeric cell expected"),
        }
    }

    #[test]
    fn verify_filter_runs_a_single_criterion() {
        let summary = verify(Some("masspoints")).unwrap();
        assert!(summary.all_pass);
        assert!(summary.records.iter().all(|r| r.criterion == 8));
        let text = render_verify_text(&summary.records);
        assert!(text.contains("[PASS] criterion  8 (masspoints)"));
    }

    #[test]
    fn verify_rejects_an_empty_selection() {
        let err = verify(Some("zzz")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
