//! The acceptance gate: runs the full ten-criterion verification suite and
//! prints one pass/fail line per criterion (run with `-- --nocapture` to
//! see the lines on success).
//!
//! Every criterion is asserted; a failure reports all measured values
//! before the test panics, so a broken build still yields the complete
//! scoreboard.

use qwalk::verify::{criterion_name, run_all, CriterionReport, CRITERION_COUNT};

#[test]
fn all_criteria_pass() {
    let reports = run_all(None);
    let mut failed = Vec::new();

    for k in 1..=CRITERION_COUNT {
        let records: Vec<&CriterionReport> =
            reports.iter().filter(|r| r.criterion == k).collect();
        assert!(!records.is_empty(), "criterion {k} produced no records");

        let pass = records.iter().all(|r| r.pass);
        println!(
            "[{}] criterion {k:2} ({})",
            if pass { "PASS" } else { "FAIL" },
            criterion_name(k)
        );
        for r in &records {
            println!(
                "       {:<72} measured {:>12.4e}  tolerance {:>9.1e}  {}",
                r.target,
                r.measured,
                r.tolerance,
                if r.pass { "ok" } else { "FAIL" }
            );
        }
        if !pass {
            failed.push(k);
        }
    }

    assert!(failed.is_empty(), "acceptance criteria failed: {failed:?}");
}
