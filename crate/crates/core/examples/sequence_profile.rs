//! Block-relation profiles `u(Bn+k) = u(n) v(k)` of a few exponent sequences.

use digitprod::digits::{Base, DigitStat};
use digitprod::sequences::{hb_profile, ExponentSeq};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b3 = Base::new(3)?;
    let seqs = [
        ("Thue-Morse", ExponentSeq::thue_morse()),
        (
            "(1/2)^{s_2(n)}",
            ExponentSeq::digit_stat_power(Base::new(2)?, Complex64::new(0.5, 0.0), DigitStat::DigitSum)?,
        ),
        (
            "omega^{N_1(n)}, B = 3",
            ExponentSeq::digit_stat_power(
                b3,
                Complex64::cis(std::f64::consts::TAU / 3.0),
                DigitStat::CountDigit(1),
            )?,
        ),
        ("i^n, B = 5", ExponentSeq::periodic_power(Base::new(5)?, 4, 1)?),
        (
            "table(i, 0.5), B = 3",
            ExponentSeq::strongly_multiplicative(b3, vec![Complex64::i(), Complex64::new(0.5, 0.0)])?,
        ),
    ];
    for (name, seq) in &seqs {
        let p = hb_profile(seq, 1 << 14)?;
        let v: Vec<String> = p.v.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
        println!("{name}");
        println!("  B = {}, seed n0 = {}, v = [{}]", p.base.get(), p.n0, v.join(", "));
        println!(
            "  |G(B)| = {:.4}, alpha = {:.4}, |u| <= 1: {}, |v| <= 1: {}",
            p.g_total().norm(),
            p.alpha,
            p.u_bounded,
            p.v_bounded
        );
    }
    Ok(())
}
