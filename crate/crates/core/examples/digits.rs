//! Base-B digits and the digit statistics that drive the exponents.
//!
//! cargo run --example digits -- [n] [base]

use digitprod::digits::{digit_stat, expand, thue_morse, Base, DigitStat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(Ok(2026), |s| s.parse())?;
    let b = Base::new(args.next().map_or(Ok(3), |s| s.parse())?)?;

    let digits = expand(n, b);
    let shown: Vec<String> = digits.iter().rev().map(u64::to_string).collect();
    println!("{n} in base {}: [{}]", b.get(), shown.join(" "));
    println!("digit sum s_B(n)   {}", digit_stat(n, &DigitStat::DigitSum, b));
    println!("length             {}", digit_stat(n, &DigitStat::Length, b));
    for k in 0..b.get() {
        println!("N_{k}(n)             {}", digit_stat(n, &DigitStat::CountDigit(k), b));
    }

    let eps: String = (0..32).map(|m| if thue_morse(m) > 0 { '+' } else { '-' }).collect();
    println!("Thue-Morse signs, n < 32: {eps}");
    Ok(())
}
