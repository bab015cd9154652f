//! Verifies every catalog identity and prints one line per claim.
//!
//! cargo run --example verify_catalog -- [terms]

use digitprod::identities::verify_all;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let terms = std::env::args().nth(1).map_or(Ok(1_000_000), |s| s.parse())?;
    let summary = verify_all(terms)?;
    for r in &summary.reports {
        println!(
            "{:<5} {:<34} computed {:>+.12} {:>+.3e}i  expected {:>+.12}  rel_err {:.2e}  err_est {:.2e}",
            if r.pass { "ok" } else { "FAIL" },
            r.name,
            r.computed,
            r.computed_im,
            r.expected,
            r.rel_err,
            r.err_est,
        );
    }
    println!(
        "{}/{} passed at N = {}; worst rel_err {:.2e} ({}); {:.2} s",
        summary.passed, summary.total, summary.terms, summary.worst_rel_err, summary.worst_claim, summary.seconds
    );
    Ok(())
}
