//! Gamma-function evaluations of balanced rational products.
//!
//! For `sum a_j = sum b_j`,
//! `prod_{n >= 0} (n+a_1)...(n+a_d) / ((n+b_1)...(n+b_d)) = Gamma(b_1)...Gamma(b_d) / (Gamma(a_1)...Gamma(a_d))`.
//! Only real positive parameters are supported.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;

/// Tolerance on `sum a - sum b`.
pub const BALANCE_TOL: f64 = 1e-12;

/// Largest odd base whose central binomial coefficient is computed exactly.
pub const EXACT_BINOMIAL_MAX: u64 = 61;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Gamma(x)` for real `x > 0` (Lanczos, g = 7).
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs a finite x > 0, got {x}")));
    }
    if x < 0.5 {
        // Gamma(x) = Gamma(x + 1) / x keeps the series away from its pole.
        return Ok(lanczos(x + 1.0) - x.ln());
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + s.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaQuotientSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl GammaQuotientSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Validation(format!(
                "need equally many a and b parameters (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        if let Some(&bad) = b.iter().find(|&&x| x <= 0.0 && x == x.round()) {
            return Err(Error::Domain(format!("b = {bad} is zero or a negative integer")));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::Validation("parameters must be finite".into()));
        }
        let sum_a: f64 = a.iter().sum();
        let sum_b: f64 = b.iter().sum();
        if (sum_a - sum_b).abs() > BALANCE_TOL * sum_a.abs().max(1.0) {
            return Err(Error::Balance { sum_a, sum_b });
        }
        Ok(GammaQuotientSpec { a, b })
    }

    fn require_positive(&self) -> Result<()> {
        match self.a.iter().chain(&self.b).find(|&&x| x <= 0.0) {
            Some(x) => Err(Error::Domain(format!("parameter {x} is not positive"))),
            None => Ok(()),
        }
    }
}

/// `prod (n+1)^2 / ((n+1/2)(n+3/2)) = pi/2`.
pub fn wallis_spec() -> GammaQuotientSpec {
    GammaQuotientSpec::new(vec![1.0, 1.0], vec![0.5, 1.5]).expect("balanced")
}

/// `prod_{n >= 0} ((3n+1)/(3n+2))^{(-1)^n}`, paired as
/// `(6m+1)(6m+5) / ((6m+2)(6m+4)) = (m+1/6)(m+5/6) / ((m+1/3)(m+2/3))`.
/// By reflection the value is `(pi / sin(pi/3)) / (pi / sin(pi/6)) = 1/sqrt 3`.
pub fn p13_spec() -> GammaQuotientSpec {
    GammaQuotientSpec::new(vec![1.0 / 6.0, 5.0 / 6.0], vec![1.0 / 3.0, 2.0 / 3.0]).expect("balanced")
}

/// Residues k < B of the given parity, with k = 0 allowed for even.
fn residues(base: u64, odd: bool) -> impl Iterator<Item = u64> {
    (0..base).filter(move |k| (k % 2 == 1) == odd)
}

/// `prod_{n >= 1} prod_{k} ((Bn+k)/(Bn+k+1))^{(-1)^n}` over residues k of one
/// parity, with n = 2m+1, 2m+2 grouped into one factor. Dividing by 2B, each k gives
/// `(m + (B+k+1)/(2B)) (m + (2B+k)/(2B)) / ((m + (B+k)/(2B)) (m + (2B+k+1)/(2B)))`.
pub fn alternating_pair_spec(base: u64, odd: bool) -> Result<GammaQuotientSpec> {
    if base < 3 || base.is_multiple_of(2) {
        return Err(Error::Domain(format!("base must be odd and at least 3, got {base}")));
    }
    let two_b = 2.0 * base as f64;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for k in residues(base, odd) {
        let (bf, kf) = (base as f64, k as f64);
        a.push((bf + kf + 1.0) / two_b);
        a.push((2.0 * bf + kf) / two_b);
        b.push((bf + kf) / two_b);
        b.push((2.0 * bf + kf + 1.0) / two_b);
    }
    GammaQuotientSpec::new(a, b)
}

/// `Gamma(b_1)...Gamma(b_d) / (Gamma(a_1)...Gamma(a_d))`.
pub fn eval_gamma_quotient(spec: &GammaQuotientSpec) -> Result<f64> {
    spec.require_positive()?;
    let mut s = NeumaierSum::default();
    for &x in &spec.b {
        s.add(log_gamma(x)?);
    }
    for &x in &spec.a {
        s.add(-log_gamma(x)?);
    }
    Ok(s.value().exp())
}

/// Elementary symmetric polynomials `e_0..e_d` of `xs`.
fn elementary(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (i, &x) in xs.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// `prod_{0 <= n < N} (n+a_1)...(n+a_d) / ((n+b_1)...(n+b_d))`.
///
/// Each factor is `1 + (P_a(n) - P_b(n)) / P_b(n)` with the numerator expanded
/// in elementary symmetric polynomials, so the leading powers cancel exactly.
pub fn partial_quotient(spec: &GammaQuotientSpec, n: u64) -> Result<f64> {
    spec.require_positive()?;
    let ea = elementary(&spec.a);
    let eb = elementary(&spec.b);
    let diff: Vec<f64> = ea.iter().zip(&eb).map(|(x, y)| x - y).collect();
    let mut s = NeumaierSum::default();
    for i in 0..n {
        let x = i as f64;
        // sum_{j >= 1} diff_j x^{d-j}, by Horner.
        let num = diff[1..].iter().fold(0.0, |acc, &c| acc * x + c);
        let den: f64 = spec.b.iter().map(|&b| x + b).product();
        s.add((num / den).ln_1p());
    }
    Ok(s.value().exp())
}

/// `C(B-1, (B-1)/2)` as a logarithm.
pub fn log_central_binomial(base: u64) -> Result<f64> {
    if base.is_multiple_of(2) || base < 3 {
        return Err(Error::Domain(format!("base must be odd and at least 3, got {base}")));
    }
    let (n, k) = (base - 1, (base - 1) / 2);
    if base <= EXACT_BINOMIAL_MAX {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return Ok((c as f64).ln());
    }
    Ok(log_gamma(base as f64)? - 2.0 * log_gamma((base + 1) as f64 / 2.0)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OddBaseProducts {
    pub base: u64,
    /// `pi sqrt(B) C(B-1,(B-1)/2) / 2^B`, the n >= 1 product over even k.
    pub even_k: f64,
    /// `2^{B-1} / (sqrt(B) C(B-1,(B-1)/2))`, the n >= 1 product over odd k.
    pub odd_k: f64,
    /// `even_k * odd_k`, which is `pi/2`.
    pub wallis: f64,
}

pub fn odd_base_products(base: u64) -> Result<OddBaseProducts> {
    let log_c = log_central_binomial(base)?;
    let bf = base as f64;
    let log_even = PI.ln() + 0.5 * bf.ln() + log_c - bf * LN_2;
    let log_odd = (bf - 1.0) * LN_2 - 0.5 * bf.ln() - log_c;
    Ok(OddBaseProducts {
        base,
        even_k: log_even.exp(),
        odd_k: log_odd.exp(),
        wallis: (log_even + log_odd).exp(),
    })
}

/// Tolerance of the truncated alternating products against the closed forms.
pub const GAMMA_SIDE_TOL: f64 = 1e-4;

/// Tolerance of the Gamma-function route against the closed forms.
pub const GAMMA_ROUTE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSideRow {
    pub closed_form: f64,
    /// Truncated paired product over `1 <= n <= N`.
    pub truncated: f64,
    /// The same product through Gamma values.
    pub gamma_route: f64,
    pub rel_err: f64,
    pub gamma_rel_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSideReport {
    pub base: u64,
    pub terms: u64,
    pub even_k: GammaSideRow,
    pub odd_k: GammaSideRow,
    /// Odd-k product including its n = 0 factor, against `1/sqrt(B)`.
    pub from_zero: f64,
    pub from_zero_rel_err: f64,
    pub pass: bool,
}

fn side_row(base: u64, odd: bool, closed: f64, terms: u64) -> Result<GammaSideRow> {
    let spec = alternating_pair_spec(base, odd)?;
    let truncated = partial_quotient(&spec, terms / 2)?;
    let gamma_route = eval_gamma_quotient(&spec)?;
    let rel_err = (truncated / closed - 1.0).abs();
    let gamma_rel_err = (gamma_route / closed - 1.0).abs();
    Ok(GammaSideRow {
        closed_form: closed,
        truncated,
        gamma_route,
        rel_err,
        gamma_rel_err,
        pass: rel_err <= GAMMA_SIDE_TOL && gamma_rel_err <= GAMMA_ROUTE_TOL,
    })
}

/// Compares both alternating odd-base products, truncated at `N` (even), with
/// their closed forms, and checks the odd-k product against `1/sqrt(B)` once
/// the n = 0 factor `prod_{k odd} k/(k+1)` is restored.
pub fn verify_gamma_side(base: u64, terms: u64) -> Result<GammaSideReport> {
    if terms % 2 == 1 || terms == 0 {
        return Err(Error::Validation(format!("N must be even and positive, got {terms}")));
    }
    let closed = odd_base_products(base)?;
    let even_k = side_row(base, false, closed.even_k, terms)?;
    let odd_k = side_row(base, true, closed.odd_k, terms)?;
    let n0: f64 = residues(base, true).map(|k| k as f64 / (k + 1) as f64).product();
    let from_zero = odd_k.truncated * n0;
    let from_zero_rel_err = (from_zero * (base as f64).sqrt() - 1.0).abs();
    Ok(GammaSideReport {
        base,
        terms,
        even_k,
        odd_k,
        from_zero,
        from_zero_rel_err,
        pass: even_k.pass && odd_k.pass && from_zero_rel_err <= GAMMA_SIDE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::excessive_precision)]
    // log Gamma at 40 significant digits, rounded to 20.
    const REFERENCE: [(f64, f64); 13] = [
        (0.001, 6.907_178_885_383_853_682_5),
        (0.1, 2.252_712_651_734_205_959_9),
        (0.3, 1.095_797_994_818_075_521_7),
        (0.5, 0.572_364_942_924_700_087_07),
        (0.9, 0.066_376_239_734_742_971_189),
        (1.5, -0.120_782_237_635_245_222_35),
        (2.5, 0.284_682_870_472_919_159_63),
        (3.7, 1.428_072_326_665_387_921_9),
        (10.25, 13.368_023_671_476_046_295),
        (123.456, 469.605_547_129_929_468_73),
        (1000.5, 5_908.674_175_848_677_488_7),
        (54321.0, 537_918.196_708_422_062_57),
        (1_000_000.0, 12_815_504.569_147_611_66),
    ];

    #[test]
    fn log_gamma_against_reference() {
        for (x, want) in REFERENCE {
            let got = log_gamma(x).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "x = {x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn log_gamma_trivial_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-15);
        assert!((log_gamma(6.0).unwrap() - 120f64.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-15);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn reflection() {
        for i in 1..200 {
            let x = i as f64 / 200.0;
            let lhs = log_gamma(x).unwrap() + log_gamma(1.0 - x).unwrap();
            let rhs = (PI / (PI * x).sin()).ln();
            assert!((lhs - rhs).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            GammaQuotientSpec::new(vec![1.0], vec![2.0]),
            Err(Error::Balance { .. })
        ));
        assert!(GammaQuotientSpec::new(vec![], vec![]).is_err());
        assert!(GammaQuotientSpec::new(vec![1.0], vec![1.0, 0.0]).is_err());
        assert!(matches!(
            GammaQuotientSpec::new(vec![-1.0, 1.0], vec![-2.0, 2.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn quotients() {
        assert!((eval_gamma_quotient(&wallis_spec()).unwrap() - PI / 2.0).abs() < 1e-11);
        assert!((eval_gamma_quotient(&p13_spec()).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-10);
        let same = GammaQuotientSpec::new(vec![0.3, 2.0], vec![0.3, 2.0]).unwrap();
        assert!((eval_gamma_quotient(&same).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(partial_quotient(&same, 1000).unwrap(), 1.0);
        assert_eq!(partial_quotient(&wallis_spec(), 0).unwrap(), 1.0);
    }

    #[test]
    fn partial_wallis() {
        let w = partial_quotient(&wallis_spec(), 1_000_000).unwrap();
        assert!((w - PI / 2.0).abs() < 1e-5);
    }

    #[test]
    fn partial_quotient_rate_is_one_over_n() {
        let spec = p13_spec();
        let exact = eval_gamma_quotient(&spec).unwrap();
        let c: Vec<f64> = [1_000u64, 10_000, 100_000, 1_000_000]
            .iter()
            .map(|&n| (partial_quotient(&spec, n).unwrap() / exact - 1.0).abs() * n as f64)
            .collect();
        for w in c.windows(2) {
            assert!((w[1] / w[0] - 1.0).abs() < 0.01, "{c:?}");
        }
    }

    #[test]
    fn p13_partial_matches_direct_alternating_sum() {
        // Direct alternating truncation at an even number of terms.
        let direct: f64 = (0..2000u64)
            .map(|n| {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                s * ((3 * n + 1) as f64 / (3 * n + 2) as f64).ln()
            })
            .sum::<f64>()
            .exp();
        assert!((partial_quotient(&p13_spec(), 1000).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn central_binomials() {
        assert!((log_central_binomial(3).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((log_central_binomial(9).unwrap() - 70f64.ln()).abs() < 1e-14);
        let exact = log_central_binomial(61).unwrap();
        let via_gamma = log_gamma(61.0).unwrap() - 2.0 * log_gamma(31.0).unwrap();
        assert!((exact - via_gamma).abs() < 1e-12 * exact);
        assert!(log_central_binomial(63).unwrap() > exact);
        assert!(log_central_binomial(4).is_err());
    }

    #[test]
    fn odd_base_examples() {
        let p = odd_base_products(3).unwrap();
        assert!((p.even_k - PI * 3f64.sqrt() / 4.0).abs() < 1e-14);
        assert!((p.odd_k - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        for b in (3..200).step_by(2) {
            let p = odd_base_products(b).unwrap();
            assert!((p.wallis / (PI / 2.0) - 1.0).abs() < 1e-12, "B = {b}");
        }
        assert!(odd_base_products(4).is_err());
    }

    #[test]
    fn gamma_route_matches_closed_forms() {
        for b in [3u64, 5, 7, 9, 11, 21] {
            let closed = odd_base_products(b).unwrap();
            let even = eval_gamma_quotient(&alternating_pair_spec(b, false).unwrap()).unwrap();
            let odd = eval_gamma_quotient(&alternating_pair_spec(b, true).unwrap()).unwrap();
            assert!((even / closed.even_k - 1.0).abs() < 1e-11, "B = {b}");
            assert!((odd / closed.odd_k - 1.0).abs() < 1e-11, "B = {b}");
        }
    }

    #[test]
    fn gamma_side_small() {
        let rep = verify_gamma_side(5, 20_000).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(verify_gamma_side(3, 7).is_err());
        assert!(verify_gamma_side(4, 100).is_err());
    }
}
