//! The constants Q and R, which have no known closed form but satisfy QR = 3/2,
//! and the finite even/odd splitting behind the Woods-Robbins product.

use digitprod::identities::{estimate_qr, trick_check, trick_limit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [10_000u64, 1_000_000, 10_000_000] {
        let e = estimate_qr(n)?;
        println!(
            "N = {n:>8}: Q = {:.12}  R = {:.12}  QR - 3/2 = {:+.2e}",
            e.q,
            e.r,
            e.product_check - 1.5
        );
    }

    let t = trick_check(1 << 12)?;
    println!("\nmerge identity: max deviation {:.2e}", t.merge.max_deviation);
    println!("split identity: max deviation {:.2e}", t.split.max_deviation);
    let (p, dev) = trick_limit(1 << 20)?;
    println!("P from 2^20 terms = {p:.10}, |P^2 - 1/2| = {dev:.2e}");
    Ok(())
}
