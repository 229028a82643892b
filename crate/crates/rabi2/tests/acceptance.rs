//! The acceptance gate: the full battery must pass, one line per criterion.

use rabi2::selftest::{all_passed, run_all};

#[test]
fn acceptance() {
    let outcomes = run_all(42);
    assert_eq!(outcomes.len(), 10);
    for o in &outcomes {
        println!(
            "criterion {:>2} ({}): {} [{:.1} s] {}",
            o.index,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.seconds,
            o.detail
        );
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    assert!(
        all_passed(&outcomes),
        "failed criteria: {}",
        failed.join(", ")
    );
}
