//! Acceptance criteria 1–12, one pass/fail line each.

use std::io::Write;

use qshape_cli::selftest::{run, CRITERIA, DEFAULT_SEED};

#[test]
fn acceptance() {
    let only: Option<u8> = std::env::var("QSHAPE_CRITERION")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = std::time::Instant::now();
        let o = run(id, DEFAULT_SEED);
        // Written to the process stdout directly so the lines survive test capture.
        let _ = writeln!(
            std::io::stdout(),
            "criterion {:>2} {}: {} — {} ({:.1}s)",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.title,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
