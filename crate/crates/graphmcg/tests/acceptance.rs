//! Acceptance suite: every criterion must pass; one line is printed per
//! criterion (run with `--nocapture` to see them).

use graphmcg::acceptance::run_all;

#[test]
fn acceptance_criteria() {
    let outcomes = run_all();
    assert_eq!(outcomes.len(), 9);
    let mut failures = Vec::new();
    for o in &outcomes {
        println!(
            "criterion {}: {} — {} ({})",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.details
        );
        if !o.passed {
            failures.push(format!("criterion {} ({}): {}", o.id, o.name, o.details));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
