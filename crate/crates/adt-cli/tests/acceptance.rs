use std::io::Write;
use std::time::{Duration, Instant};

use adt_cli::suite::{run_all, KNOWN_RED};

#[test]
fn acceptance() {
    let t0 = Instant::now();
    let outcomes = run_all();
    let total = t0.elapsed();
    // written to the stream directly so the lines show without --nocapture
    let mut err = std::io::stderr().lock();
    for o in &outcomes {
        writeln!(err, "{o}").unwrap();
    }
    writeln!(
        err,
        "{} full suite in {} ms (limit 60000 ms)",
        if total < Duration::from_secs(60) { "PASS" } else { "FAIL" },
        total.as_millis()
    )
    .unwrap();
    assert!(total < Duration::from_secs(60));
    let unexpected: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.pass && !KNOWN_RED.contains(&o.id))
        .map(|o| o.id)
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
}
