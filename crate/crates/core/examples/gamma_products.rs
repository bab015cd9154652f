//! Gamma-quotient products: Wallis, the base-3 alternating product, and the
//! odd-base products with central binomial coefficients.

use digitprod::gammaproducts::{
    eval_gamma_quotient, odd_base_products, p13_spec, partial_quotient, verify_gamma_side, wallis_spec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let wallis = wallis_spec();
    println!(
        "Wallis: closed {:.15}, 10^6 factors {:.15}",
        eval_gamma_quotient(&wallis)?,
        partial_quotient(&wallis, 1_000_000)?
    );
    println!(
        "P_(1,3): {:.15} (1/sqrt 3 = {:.15})",
        eval_gamma_quotient(&p13_spec())?,
        1.0 / 3f64.sqrt()
    );

    println!("\n{:>3} {:>18} {:>18} {:>18}", "B", "even k", "odd k", "product");
    for b in [3, 5, 7, 9, 11] {
        let o = odd_base_products(b)?;
        println!("{b:>3} {:>18.15} {:>18.15} {:>18.15}", o.even_k, o.odd_k, o.wallis);
    }

    let side = verify_gamma_side(5, 1_000_000)?;
    println!(
        "\nB = 5 truncated vs closed form: even k rel {:.1e}, odd k rel {:.1e}, pass {}",
        side.even_k.rel_err, side.odd_k.rel_err, side.pass
    );
    Ok(())
}
