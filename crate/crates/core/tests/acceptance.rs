//! Runs every acceptance criterion at its full size and prints one line each.

use std::process::ExitCode;

use geomodal::acceptance::{run_suite, AcceptOptions, CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).collect();
    let outcomes = run_suite(&ids, AcceptOptions::default());
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        let detail = if o.detail.is_empty() { String::new() } else { format!("; {}", o.detail) };
        println!("{verdict} criterion {:>2} ({}): {} checks{detail}", o.id, o.name, o.checked);
    }
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
