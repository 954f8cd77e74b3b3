use thermoporo::checks;

#[test]
fn every_self_check_passes() {
    let outcomes = checks::run_all();
    for o in &outcomes {
        println!("{:<45} {} {}", o.name, if o.passed { "ok" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    assert!(failed.is_empty(), "failed checks: {failed:?}");
}
