//! Runs the property suites at a small size bound.

use sqpo::suites::{run_suite, Suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { size_bound: 3, n_random: 20, seed: 1 };
    for suite in Suite::ALL {
        let report = run_suite(suite, cfg);
        println!(
            "{suite}: {} checks, {} failures, {} inconclusive",
            report.checked,
            report.failures.len(),
            report.inconclusive.len()
        );
    }
}
