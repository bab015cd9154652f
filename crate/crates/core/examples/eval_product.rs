//! Evaluates a product given in the text spec syntax three ways.
//!
//! cargo run --example eval_product -- ["base=2; exponent=thue_morse; factors=1"]

use digitprod::cli::{parse_spec, Parsed};
use digitprod::products::{eval_abel, eval_naive};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "base=2; exponent=thue_morse; factors=1".into());
    let Parsed::Product(spec) = parse_spec(&text)? else {
        return Err("spec has no factors".into());
    };
    println!("{text}");
    println!(
        "{:>9} {:>20} {:>20} {:>20} {:>10}",
        "N", "naive", "abel", "extrapolated", "err_est"
    );
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let naive = eval_naive(&spec, n)?;
        let abel = eval_abel(&spec, n, false)?;
        let extra = eval_abel(&spec, n, true)?;
        println!(
            "{n:>9} {:>20.15} {:>20.15} {:>20.15} {:>10.2e}",
            naive.value.re, abel.value.re, extra.value.re, extra.err_est
        );
    }
    Ok(())
}
