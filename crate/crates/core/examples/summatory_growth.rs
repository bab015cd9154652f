//! Summatory function F(N): fast recursion against brute force, and the
//! empirical growth bound |F(N)| < C N^alpha.

use digitprod::digits::{Base, DigitStat};
use digitprod::sequences::{hb_profile, ExponentSeq};
use digitprod::summatory::{f_brute, f_fast, geometric_checkpoints, growth_check};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seq = ExponentSeq::digit_stat_power(Base::new(2)?, Complex64::new(0.5, 0.0), DigitStat::DigitSum)?;
    let p = hb_profile(&seq, 1 << 14)?;

    println!("{:>9} {:>22} {:>22}", "N", "f_fast", "f_brute");
    for n in [10u64, 1_000, 100_000, 1_000_000] {
        println!(
            "{n:>9} {:>22.15} {:>22.15}",
            f_fast(&p, &seq, n)?.re,
            f_brute(&seq, n).re
        );
    }

    let report = growth_check(&p, &seq, &geometric_checkpoints(2, 1 << 30, 3))?;
    println!(
        "\nalpha = {:.6}, empirical C = {:.4}, bound holds: {}",
        report.alpha, report.c_est, report.pass
    );
    for row in report.rows.iter().step_by(11) {
        println!(
            "  N = {:>10}  F = {:>14.3}  F/N^alpha = {:.4}",
            row.n, row.f.re, row.ratio
        );
    }
    Ok(())
}
