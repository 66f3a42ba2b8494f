//! One line per acceptance criterion, each backed by a verification suite
//! on its pinned window. Runs without the test harness so the lines are
//! always printed.

use std::process::ExitCode;

use kqext::suites::SUITES;

fn main() -> ExitCode {
    assert_eq!(SUITES.len(), 12);
    let mut failed = 0;
    for suite in SUITES {
        let report = suite.run(None);
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {:<16} {status}  {}", suite.criterion, suite.name, suite.title);
        for c in report.failures() {
            println!("    {}: {}", c.name, c.detail);
        }
        failed += usize::from(!report.passed());
    }
    println!("acceptance: {} of {} criteria pass", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
