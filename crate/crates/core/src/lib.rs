//! Infinite products `prod ((Bn+k)/(Bn+k+1))^{c_k u(n)}` whose exponents are
//! built from base-B digits: evaluation, closed-form identities and the
//! checks that back them.
//!
//! - [`digits`]: expansions and digit statistics.
//! - [`sequences`]: exponent sequences and their block structure.
//! - [`summatory`]: partial sums of the exponents and their growth.
//! - [`products`]: evaluation of the products.
//! - [`identities`]: the catalog of closed forms.
//! - [`gammaproducts`]: Gamma-function products.
//! - [`cli`]: the `digitprod` command line.

pub mod cli;
pub mod digits;
pub mod error;
pub mod gammaproducts;
pub mod identities;
pub mod numeric;
pub mod products;
pub mod sequences;
pub mod summatory;

pub use digits::{Base, DigitStat};
pub use error::{Error, Result};
pub use products::{eval_abel, eval_naive, EvalResult, Factor, ProductSpec};
pub use sequences::{hb_profile, ExponentSeq, HBProfile};
