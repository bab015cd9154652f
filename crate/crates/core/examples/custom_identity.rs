//! Builds identities outside the fixed catalog and verifies them.

use digitprod::identities::{strong_mult_claim, verify, zero_count_claim};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let claims = [
        zero_count_claim(4, Complex64::new(-0.5, 0.3))?,
        zero_count_claim(7, Complex64::new(0.25, 0.0))?,
        strong_mult_claim(
            "table_b4",
            4,
            vec![
                Complex64::new(0.0, -1.0),
                Complex64::new(-0.5, 0.0),
                Complex64::new(0.3, 0.4),
            ],
            1e-4,
        )?,
    ];
    for claim in &claims {
        let r = verify(claim, 1_000_000)?;
        println!(
            "{:<5} {:<28} computed {:+.12}{:+.12}i  expected {:+.12}{:+.12}i  rel_err {:.1e}",
            if r.pass { "ok" } else { "FAIL" },
            r.name,
            r.computed,
            r.computed_im,
            r.expected,
            r.expected_im,
            r.rel_err
        );
    }
    Ok(())
}
