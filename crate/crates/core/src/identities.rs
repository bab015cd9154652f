//! Closed-form product identities as checkable claims.
//!
//! A claim is a list of components `(product, projection, power)`; its log is
//! `sum power * projection(log product)`, compared with the log of the closed
//! form. Sine/cosine products are the imaginary/real parts of one product with
//! a complex exponent, which is how most of the catalog is stored.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::digits::{thue_morse, Base, DigitStat};
use crate::error::{Error, Result};
use crate::gammaproducts::{eval_gamma_quotient, GammaQuotientSpec};
use crate::numeric::ComplexSum;
use crate::products::{eval_abel, eval_naive, log_term, CheckReport, EvalResult, Factor, ProductSpec};
use crate::sequences::{root_of_unity, ExponentSeq};

/// Tolerance class for exponents with bounded summatory function.
pub const TOL_BOUNDED: f64 = 1e-5;
/// Tolerance class for unit-modulus exponents with growing summatory function.
pub const TOL_UNIT: f64 = 1e-4;
/// Tolerance class for real exponents `w^{stat}` with `0 < w < 1`.
pub const TOL_DAMPED: f64 = 5e-4;

/// Default truncation.
pub const DEFAULT_TERMS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ClosedForm {
    /// `base^exponent`.
    PowerOfB {
        base: u64,
        exponent: Complex64,
    },
    Rational {
        p: i64,
        q: u64,
    },
    One,
    ExplicitReal {
        value: f64,
        formula: String,
    },
    GammaRef(GammaQuotientSpec),
}

impl ClosedForm {
    pub fn log_value(&self) -> Result<Complex64> {
        Ok(match self {
            ClosedForm::PowerOfB { base, exponent } => exponent * (*base as f64).ln(),
            ClosedForm::Rational { p, q } => {
                if *q == 0 || *p == 0 {
                    return Err(Error::Validation(format!("bad rational {p}/{q}")));
                }
                Complex64::new(*p as f64 / *q as f64, 0.0).ln()
            }
            ClosedForm::One => Complex64::new(0.0, 0.0),
            ClosedForm::ExplicitReal { value, .. } => Complex64::new(*value, 0.0).ln(),
            ClosedForm::GammaRef(spec) => Complex64::new(eval_gamma_quotient(spec)?.ln(), 0.0),
        })
    }

    pub fn value(&self) -> Result<Complex64> {
        Ok(self.log_value()?.exp())
    }
}

/// Which part of a product's log a component keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    Re,
    Im,
    Full,
}

impl Part {
    fn project(self, z: Complex64) -> Complex64 {
        match self {
            Part::Re => Complex64::new(z.re, 0.0),
            Part::Im => Complex64::new(z.im, 0.0),
            Part::Full => z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub spec: ProductSpec,
    pub part: Part,
    pub power: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityClaim {
    pub name: String,
    /// Short description of the identity family.
    pub family: String,
    pub components: Vec<Component>,
    pub rhs: ClosedForm,
    pub tol: f64,
    pub cost_hint: u64,
}

impl IdentityClaim {
    fn new(name: &str, family: &str, rhs: ClosedForm, tol: f64) -> Self {
        IdentityClaim {
            name: name.to_string(),
            family: family.to_string(),
            components: Vec::new(),
            rhs,
            tol,
            cost_hint: DEFAULT_TERMS,
        }
    }

    fn with(mut self, spec: ProductSpec, part: Part, power: f64) -> Self {
        self.components.push(Component {
            spec,
            part,
            power: Complex64::new(power, 0.0),
        });
        self
    }

    /// The product of a single-component claim.
    pub fn spec(&self) -> &ProductSpec {
        &self.components[0].spec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub computed: f64,
    pub computed_im: f64,
    pub expected: f64,
    pub expected_im: f64,
    pub abs_err: f64,
    /// `|exp(L - L*) - 1|` for claim log L and closed-form log L*.
    pub rel_err: f64,
    pub err_est: f64,
    pub tol: f64,
    pub pass: bool,
    pub terms: u64,
    pub seconds: f64,
}

/// Log of the claim's left side, with the summed error estimates.
pub fn claim_log(claim: &IdentityClaim, n: u64) -> Result<(Complex64, f64, u64)> {
    let mut log = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut terms = 0;
    for c in &claim.components {
        let r: EvalResult = eval_abel(&c.spec, n, true)?;
        log += c.power * c.part.project(r.log_value);
        err += c.power.norm() * r.err_est;
        terms = terms.max(r.terms);
    }
    Ok((log, err, terms))
}

/// Evaluates a claim with `n` terms (tail-extrapolated) and compares it with
/// its closed form.
pub fn verify(claim: &IdentityClaim, n: u64) -> Result<VerifyReport> {
    verify_with_tol(claim, n, claim.tol)
}

pub fn verify_with_tol(claim: &IdentityClaim, n: u64, tol: f64) -> Result<VerifyReport> {
    let t0 = Instant::now();
    let (log, err_est, terms) = claim_log(claim, n)?;
    let want = claim.rhs.log_value()?;
    let computed = log.exp();
    let expected = want.exp();
    let rel_err = ((log - want).exp() - 1.0).norm();
    Ok(VerifyReport {
        name: claim.name.clone(),
        computed: computed.re,
        computed_im: computed.im,
        expected: expected.re,
        expected_im: expected.im,
        abs_err: (computed - expected).norm(),
        rel_err,
        err_est,
        tol,
        pass: rel_err <= tol,
        terms,
        seconds: t0.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub terms: u64,
    pub passed: usize,
    pub total: usize,
    pub worst_rel_err: f64,
    pub worst_claim: String,
    pub seconds: f64,
    pub reports: Vec<VerifyReport>,
}

/// Verifies every catalog claim with `n` terms.
pub fn verify_all(n: u64) -> Result<VerifySummary> {
    verify_claims(&catalog(), n)
}

pub fn verify_claims(claims: &[IdentityClaim], n: u64) -> Result<VerifySummary> {
    let t0 = Instant::now();
    let reports = claims.par_iter().map(|c| verify(c, n)).collect::<Result<Vec<_>>>()?;
    let worst = reports.iter().max_by(|a, b| a.rel_err.total_cmp(&b.rel_err));
    Ok(VerifySummary {
        terms: n,
        passed: reports.iter().filter(|r| r.pass).count(),
        total: reports.len(),
        worst_rel_err: worst.map_or(0.0, |r| r.rel_err),
        worst_claim: worst.map_or_else(String::new, |r| r.name.clone()),
        seconds: t0.elapsed().as_secs_f64(),
        reports,
    })
}

pub fn find_claim(name: &str) -> Result<IdentityClaim> {
    catalog()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownClaim(name.to_string()))
}

fn base(b: u64) -> Base {
    Base::new(b).expect("catalog bases are valid")
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn product(b: u64, factors: Vec<Factor>, seq: ExponentSeq) -> ProductSpec {
    ProductSpec::new(base(b), factors, seq).expect("catalog products are valid")
}

fn power_of(b: u64, exponent: f64) -> ClosedForm {
    ClosedForm::PowerOfB {
        base: b,
        exponent: cx(exponent, 0.0),
    }
}

fn inv_sqrt(b: u64) -> ClosedForm {
    power_of(b, -0.5)
}

fn sign_power(b: u64, stat: DigitStat) -> ExponentSeq {
    ExponentSeq::digit_stat_power(base(b), cx(-1.0, 0.0), stat).expect("valid")
}

fn odd_residues(b: u64, c: Complex64) -> Vec<Factor> {
    (1..b).step_by(2).map(|k| Factor::new(k, c)).collect()
}

/// `sin(pi k p/q) e^{i pi k p/q}` on residues `0 < k < B`, `k != 0 mod q`:
/// the imaginary part of the product with these multipliers and
/// `u(n) = omega^{m(n)}` is the sine product, the real part the cosine product.
fn sine_multipliers(b: u64, q: u64, p: u64) -> Vec<Factor> {
    (1..b)
        .filter(|k| k % q != 0)
        .map(|k| {
            let t = PI * (k * p) as f64 / q as f64;
            Factor::new(k, Complex64::from_polar(t.sin(), t))
        })
        .collect()
}

/// `B^{-1/(2 sin(pi p/q))}`.
fn digit_count_rhs(b: u64, q: u64, p: u64) -> ClosedForm {
    power_of(b, -1.0 / (2.0 * (PI * p as f64 / q as f64).sin()))
}

/// `prod_{n >= 1} (Bn/(Bn+1))^{c z^{N_0(n)}}`. Requires `|z| <= 1`, `z` not 0 or 1.
pub fn zero_count_spec(b: u64, z: Complex64, c: Complex64) -> Result<ProductSpec> {
    if z == cx(0.0, 0.0) || z == cx(1.0, 0.0) {
        return Err(Error::Validation("zero-count products need z not in {0, 1}".into()));
    }
    if z.norm() > 1.0 {
        return Err(Error::Validation(format!("zero-count products need |z| <= 1, got {z}")));
    }
    let bb = Base::new(b)?;
    ProductSpec::new(
        bb,
        vec![Factor::new(0, c)],
        ExponentSeq::digit_stat_power(bb, z, DigitStat::CountDigit(0))?,
    )
}

/// `prod_{n >= 1} (Bn/(Bn+1))^{(1-z) z^{N_0(n)}} = 1/B`.
pub fn zero_count_claim(b: u64, z: Complex64) -> Result<IdentityClaim> {
    let spec = zero_count_spec(b, z, cx(1.0, 0.0) - z)?;
    Ok(IdentityClaim::new(
        &format!("zero_count_b{b}"),
        "zero-count exponent",
        ClosedForm::Rational { p: 1, q: b },
        TOL_UNIT,
    )
    .with(spec, Part::Full, 1.0))
}

/// `prod_{n >= 1} (Bn/(Bn+1))^{z^{N_0(n)}} = B^{1/(z-1)}`.
pub fn zero_count_log_claim(b: u64, z: Complex64) -> Result<IdentityClaim> {
    let spec = zero_count_spec(b, z, cx(1.0, 0.0))?;
    let exponent = cx(1.0, 0.0) / (z - 1.0);
    Ok(IdentityClaim::new(
        &format!("zero_count_log_form_b{b}"),
        "zero-count exponent, log form",
        ClosedForm::PowerOfB { base: b, exponent },
        TOL_UNIT,
    )
    .with(spec, Part::Full, 1.0))
}

/// `prod_k prod_n ((Bn+k)/(Bn+k+1))^{u(n)(1-u(k))} = 1/B` for a strongly
/// multiplicative table `u(1..B-1)`.
pub fn strong_mult_claim(name: &str, b: u64, table: Vec<Complex64>, tol: f64) -> Result<IdentityClaim> {
    let bb = Base::new(b)?;
    let factors: Vec<Factor> = table
        .iter()
        .enumerate()
        .filter(|(_, &u)| u != cx(1.0, 0.0))
        .map(|(i, &u)| Factor::new(i as u64 + 1, cx(1.0, 0.0) - u))
        .collect();
    let seq = ExponentSeq::strongly_multiplicative(bb, table)?;
    Ok(IdentityClaim::new(
        name,
        "strongly multiplicative exponent",
        ClosedForm::Rational { p: 1, q: b },
        tol,
    )
    .with(ProductSpec::new(bb, factors, seq)?, Part::Full, 1.0))
}

/// `prod ((Bn+k)/(Bn+k+1))^{z^{s_B(n)}(1-z^k)} = 1/B`.
pub fn digit_sum_power_claim(name: &str, b: u64, z: Complex64, tol: f64) -> Result<IdentityClaim> {
    let bb = Base::new(b)?;
    let factors: Vec<Factor> = (1..b)
        .filter_map(|k| {
            let zk = crate::sequences::ipow(z, k);
            (zk != cx(1.0, 0.0)).then(|| Factor::new(k, cx(1.0, 0.0) - zk))
        })
        .collect();
    let seq = ExponentSeq::digit_stat_power(bb, z, DigitStat::DigitSum)?;
    Ok(IdentityClaim::new(
        name,
        "digit-sum power exponent",
        ClosedForm::Rational { p: 1, q: b },
        tol,
    )
    .with(ProductSpec::new(bb, factors, seq)?, Part::Full, 1.0))
}

fn root_of_unity_pair(b: u64, q: u64, p: u64) -> [IdentityClaim; 2] {
    let spec = product(
        b,
        sine_multipliers(b, q, p),
        ExponentSeq::periodic_power(base(b), q, p).expect("valid"),
    );
    [
        IdentityClaim::new(
            &format!("roots_of_unity_sin_b{b}_q{q}_p{p}"),
            "periodic root-of-unity exponent",
            inv_sqrt(b),
            TOL_UNIT,
        )
        .with(spec.clone(), Part::Im, 1.0),
        IdentityClaim::new(
            &format!("roots_of_unity_cos_b{b}_q{q}_p{p}"),
            "periodic root-of-unity exponent",
            ClosedForm::One,
            TOL_UNIT,
        )
        .with(spec, Part::Re, 1.0),
    ]
}

fn digit_sum_root_pair(b: u64, q: u64, p: u64) -> [IdentityClaim; 2] {
    let seq = ExponentSeq::digit_stat_power(base(b), root_of_unity(q, p, 1), DigitStat::DigitSum).expect("valid");
    let spec = product(b, sine_multipliers(b, q, p), seq);
    [
        IdentityClaim::new(
            &format!("digit_sum_sin_b{b}_q{q}_p{p}"),
            "digit-sum root-of-unity exponent",
            inv_sqrt(b),
            TOL_UNIT,
        )
        .with(spec.clone(), Part::Im, 1.0),
        IdentityClaim::new(
            &format!("digit_sum_cos_b{b}_q{q}_p{p}"),
            "digit-sum root-of-unity exponent",
            ClosedForm::One,
            TOL_UNIT,
        )
        .with(spec, Part::Re, 1.0),
    ]
}

/// Sine/cosine products of `omega^{N_J(n)}` over the residues in J.
fn digit_set_pair(b: u64, set: &[u64], q: u64, p: u64) -> [IdentityClaim; 2] {
    let stat = if set.len() == 1 {
        DigitStat::CountDigit(set[0])
    } else {
        DigitStat::count_set(set.to_vec()).expect("nonempty")
    };
    let seq = ExponentSeq::digit_stat_power(base(b), root_of_unity(q, p, 1), stat).expect("valid");
    let half_turn = Complex64::cis(PI * p as f64 / q as f64);
    let spec = product(b, set.iter().map(|&k| Factor::new(k, half_turn)).collect(), seq);
    let tag: String = set.iter().map(|k| k.to_string()).collect();
    let (kind, family) = if set.len() == 1 {
        ("single_digit", "single-digit count exponent")
    } else {
        ("digit_set", "digit-set count exponent")
    };
    [
        IdentityClaim::new(
            &format!("{kind}_sin_b{b}_j{tag}_q{q}"),
            family,
            digit_count_rhs(b, q, p),
            TOL_UNIT,
        )
        .with(spec.clone(), Part::Im, 1.0),
        IdentityClaim::new(
            &format!("{kind}_cos_b{b}_j{tag}_q{q}"),
            family,
            ClosedForm::One,
            TOL_UNIT,
        )
        .with(spec, Part::Re, 1.0),
    ]
}

/// `(-1)^{N_J(n)}` products over the residues in J, equal to `1/sqrt(B)`.
fn digit_set_sign(name: &str, b: u64, set: &[u64]) -> IdentityClaim {
    let stat = if set.len() == 1 {
        DigitStat::CountDigit(set[0])
    } else {
        DigitStat::count_set(set.to_vec()).expect("nonempty")
    };
    let spec = product(
        b,
        set.iter().map(|&k| Factor::real(k, 1.0)).collect(),
        sign_power(b, stat),
    );
    IdentityClaim::new(name, "digit-count sign exponent", inv_sqrt(b), TOL_BOUNDED).with(spec, Part::Full, 1.0)
}

fn sum_of_digits(b: u64) -> IdentityClaim {
    let spec = product(b, odd_residues(b, cx(1.0, 0.0)), sign_power(b, DigitStat::DigitSum));
    IdentityClaim::new(
        &format!("sum_of_digits_b{b}"),
        "digit-sum sign exponent",
        inv_sqrt(b),
        TOL_BOUNDED,
    )
    .with(spec, Part::Full, 1.0)
}

/// Odd B: `prod_{n >= 0} prod_{k odd} ((Bn+k)/(Bn+k+1))^{(-1)^n} = 1/sqrt(B)`.
pub fn odd_base_alternating_spec(b: u64) -> Result<ProductSpec> {
    if b.is_multiple_of(2) {
        return Err(Error::Domain(format!("base must be odd, got {b}")));
    }
    let bb = Base::new(b)?;
    ProductSpec::new(
        bb,
        odd_residues(b, cx(1.0, 0.0)),
        ExponentSeq::periodic_power(bb, 2, 1)?,
    )
}

fn odd_base_alternating(b: u64) -> IdentityClaim {
    IdentityClaim::new(
        &format!("odd_base_alternating_b{b}"),
        "alternating exponent, odd base",
        inv_sqrt(b),
        TOL_BOUNDED,
    )
    .with(odd_base_alternating_spec(b).expect("odd base"), Part::Full, 1.0)
}

/// Base-3 digit-sum products with exponent `theta(s_3(n) + k - 1)` built as
/// `2 Im L - (2/sqrt 3) Re L` from the q = 3 sine/cosine pair.
fn theta_digit_sum() -> IdentityClaim {
    let [sin, _] = digit_sum_root_pair(3, 3, 1);
    let spec = sin.components[0].spec.clone();
    IdentityClaim::new(
        "theta_digit_sum_b3",
        "digit-sum root-of-unity exponent, combined",
        ClosedForm::Rational { p: 1, q: 3 },
        TOL_UNIT,
    )
    .with(spec.clone(), Part::Im, 2.0)
    .with(spec, Part::Re, -2.0 / 3f64.sqrt())
}

/// Base-3 single-digit products with exponents `eta(N_k(n))` and `theta(N_k(n)+1)`.
fn eta_theta_count(k: u64) -> [IdentityClaim; 2] {
    let [sin, cos] = digit_set_pair(3, &[k], 3, 1);
    [
        IdentityClaim::new(
            &format!("eta_count_b3_k{k}"),
            "single-digit count exponent, scaled",
            power_of(3, -2.0 / 3.0),
            TOL_UNIT,
        )
        .with(sin.components[0].spec.clone(), Part::Im, 2.0 / 3f64.sqrt()),
        IdentityClaim::new(
            &format!("theta_count_b3_k{k}"),
            "single-digit count exponent, scaled",
            ClosedForm::One,
            TOL_UNIT,
        )
        .with(cos.components[0].spec.clone(), Part::Re, 2.0),
    ]
}

/// The verified identities.
pub fn catalog() -> Vec<IdentityClaim> {
    let one = cx(1.0, 0.0);
    let mut out = Vec::new();

    let wr = product(2, vec![Factor::real(1, 1.0)], sign_power(2, DigitStat::CountDigit(1)));
    out.push(
        IdentityClaim::new("woods_robbins", "Thue-Morse exponent", inv_sqrt(2), TOL_BOUNDED).with(wr, Part::Full, 1.0),
    );

    out.push(strong_mult_claim("strong_mult_thue_morse", 2, vec![cx(-1.0, 0.0)], TOL_BOUNDED).expect("valid"));
    out.push(strong_mult_claim("strong_mult_table_b3", 3, vec![cx(0.0, 1.0), cx(0.5, 0.0)], TOL_UNIT).expect("valid"));
    out.push(
        strong_mult_claim(
            "strong_mult_table_b4",
            4,
            vec![cx(0.0, -1.0), cx(-1.0, 0.0), cx(0.6, 0.8)],
            TOL_UNIT,
        )
        .expect("valid"),
    );

    out.push(zero_count_claim(3, cx(-0.5, 0.0)).expect("valid"));
    let mut zc = zero_count_claim(2, cx(0.0, 0.5)).expect("valid");
    zc.name = "zero_count_b2_complex".into();
    out.push(zc);
    out.push(zero_count_log_claim(3, cx(-0.5, 0.0)).expect("valid"));
    let mut zl = zero_count_log_claim(2, cx(0.0, 1.0)).expect("valid");
    zl.name = "zero_count_log_form_b2_complex".into();
    out.push(zl);

    out.extend(root_of_unity_pair(5, 4, 1));
    out.extend(root_of_unity_pair(7, 3, 1));

    // Squares of the B = 5, q = 4 pair: exponents sigma(n), sigma(n)+sigma(n+1), sigma(n+1)
    // and sigma(n-1), sigma(n-1)+sigma(n), sigma(n), written as Re(c_k i^n).
    let per = ExponentSeq::periodic_power(base(5), 4, 1).expect("valid");
    let first = vec![
        Factor::new(1, cx(1.0, -1.0)),
        Factor::new(2, cx(2.0, 0.0)),
        Factor::new(3, cx(1.0, 1.0)),
    ];
    let second = vec![
        Factor::new(1, cx(-1.0, -1.0)),
        Factor::new(2, cx(0.0, -2.0)),
        Factor::new(3, cx(1.0, -1.0)),
    ];
    out.push(
        IdentityClaim::new(
            "sigma_b5_first",
            "mod-4 square-class exponent",
            ClosedForm::Rational { p: 1, q: 5 },
            TOL_UNIT,
        )
        .with(product(5, first, per.clone()), Part::Re, 1.0),
    );
    out.push(
        IdentityClaim::new(
            "sigma_b5_second",
            "mod-4 square-class exponent",
            ClosedForm::One,
            TOL_UNIT,
        )
        .with(product(5, second, per), Part::Re, 1.0),
    );

    out.push(digit_sum_power_claim("digit_sum_power_b3", 3, cx(0.5, 0.5), TOL_DAMPED).expect("valid"));
    out.push(digit_sum_power_claim("digit_sum_power_b5", 5, cx(-0.3, 0.6), TOL_DAMPED).expect("valid"));
    let half = product(
        2,
        vec![Factor::new(1, one)],
        ExponentSeq::digit_stat_power(base(2), cx(0.5, 0.0), DigitStat::DigitSum).expect("valid"),
    );
    out.push(
        IdentityClaim::new(
            "half_power_b2",
            "digit-sum power exponent",
            ClosedForm::Rational { p: 1, q: 4 },
            TOL_DAMPED,
        )
        .with(half, Part::Full, 1.0),
    );

    out.extend(digit_sum_root_pair(3, 5, 2));
    out.extend(digit_sum_root_pair(4, 3, 1));
    // B = 2, q = 4 squared: exponents sigma(s_2(n)) and sigma(s_2(n) + 1).
    let sig = product(
        2,
        vec![Factor::new(1, cx(1.0, 1.0))],
        ExponentSeq::digit_stat_power(base(2), cx(0.0, 1.0), DigitStat::DigitSum).expect("valid"),
    );
    out.push(
        IdentityClaim::new(
            "sigma_digit_sum_b2",
            "digit-sum root-of-unity exponent",
            ClosedForm::Rational { p: 1, q: 2 },
            TOL_UNIT,
        )
        .with(sig.clone(), Part::Im, 1.0),
    );
    out.push(
        IdentityClaim::new(
            "sigma_digit_sum_shift_b2",
            "digit-sum root-of-unity exponent",
            ClosedForm::One,
            TOL_UNIT,
        )
        .with(sig, Part::Re, 1.0),
    );
    out.push(theta_digit_sum());

    for b in [2, 3, 4, 5, 6, 10] {
        out.push(sum_of_digits(b));
    }

    out.extend(digit_set_pair(4, &[1, 3], 3, 1));
    out.extend(digit_set_pair(5, &[0, 2], 4, 1));
    out.push(digit_set_sign("digit_set_sign_b3_j02", 3, &[0, 2]));
    out.push(digit_set_sign("digit_set_sign_b6_j135", 6, &[1, 3, 5]));

    out.push(digit_set_sign("single_digit_b2_k1", 2, &[1]));
    out.push(digit_set_sign("single_digit_b2_k0", 2, &[0]));
    out.extend(digit_set_pair(3, &[0], 5, 2));

    for k in 0..3 {
        out.extend(eta_theta_count(k));
    }

    for b in [3, 5, 7] {
        out.push(odd_base_alternating(b));
    }
    out.push(
        IdentityClaim::new(
            "p13_gamma",
            "alternating exponent, Gamma form",
            ClosedForm::GammaRef(crate::gammaproducts::p13_spec()),
            TOL_BOUNDED,
        )
        .with(odd_base_alternating_spec(3).expect("odd base"), Part::Full, 1.0),
    );
    out
}

/// `Q = prod_{n >= 1} (2n/(2n+1))^{eps(n)}` and
/// `R = prod_{n >= 1} ((4n+1)(4n+2)/(4n(4n+3)))^{eps(n)}`.
pub fn q_spec() -> ProductSpec {
    product(2, vec![Factor::real(0, 1.0)], ExponentSeq::thue_morse())
}

pub fn r_spec() -> ProductSpec {
    product(
        4,
        vec![Factor::real(0, -1.0), Factor::real(2, 1.0).with_start(1)],
        ExponentSeq::thue_morse(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QrEstimate {
    pub q: f64,
    pub q_err_est: f64,
    pub r: f64,
    pub r_err_est: f64,
    /// `Q R`, which is 3/2.
    pub product_check: f64,
    pub terms: u64,
}

/// Estimates Q by summation by parts with tail removal and R by plain
/// truncation (its log-series converges absolutely).
pub fn estimate_qr(n: u64) -> Result<QrEstimate> {
    if n < 1000 {
        return Err(Error::Validation(format!(
            "estimate needs at least 1000 terms, got {n}"
        )));
    }
    let q = eval_abel(&q_spec(), n, true)?;
    let r = eval_naive(&r_spec(), n)?;
    Ok(QrEstimate {
        q: q.value.re,
        q_err_est: q.err_est,
        r: r.value.re,
        r_err_est: r.err_est,
        product_check: (q.log_value.re + r.log_value.re).exp(),
        terms: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrickReport {
    pub merge: CheckReport,
    pub split: CheckReport,
    pub pass: bool,
}

/// Tolerance on `|P^2 - 1/2|` in [`trick_limit`].
pub const TRICK_P_TOL: f64 = 2e-5;

/// Finite skeleton of the even/odd trick behind the Woods–Robbins product:
/// (a) `sum_{1<=n<N} eps(n)[log(2n/(2n+1)) + log((2n+1)/(2n+2))] = sum_{1<=n<N} eps(n) log(n/(n+1))`,
/// (b) `sum_{1<=n<2N} eps(n) log(n/(n+1)) = sum_{1<=n<N} eps(n) log(2n/(2n+1)) - sum_{0<=n<N} eps(n) log((2n+1)/(2n+2))`.
pub fn trick_check(n: u64) -> Result<TrickReport> {
    if !n.is_power_of_two() {
        return Err(Error::Validation(format!("N must be a power of two, got {n}")));
    }
    let two = base(2);
    let eps = |m: u64| thue_morse(m) as f64;
    let whole = |m: u64| -(1.0 / m as f64).ln_1p();

    let mut merged = ComplexSum::default();
    let mut direct = ComplexSum::default();
    let mut per_term = 0.0f64;
    for m in 1..n {
        let pair = log_term(two, 0, m)? + log_term(two, 1, m)?;
        per_term = per_term.max((pair - whole(m)).abs());
        merged.add(cx(eps(m) * pair, 0.0));
        direct.add(cx(eps(m) * whole(m), 0.0));
    }
    let sum_dev = (merged.value() - direct.value()).norm();

    let mut lhs = ComplexSum::default();
    for m in 1..2 * n {
        lhs.add(cx(eps(m) * whole(m), 0.0));
    }
    let mut rhs = ComplexSum::default();
    for m in 1..n {
        // eps(2m) = eps(m)
        rhs.add(cx(eps(m) * log_term(two, 0, m)?, 0.0));
    }
    for m in 0..n {
        // eps(2m+1) = -eps(m)
        rhs.add(cx(-eps(m) * log_term(two, 1, m)?, 0.0));
    }
    let split_dev = (lhs.value() - rhs.value()).norm();

    let tol = crate::products::IDENTITY_TOL;
    let merge = CheckReport {
        name: "trick_merge".into(),
        pass: sum_dev.max(per_term) <= tol,
        max_deviation: sum_dev.max(per_term),
        detail: format!("per-term {per_term:.3e}; summed {sum_dev:.3e}"),
    };
    let split = CheckReport {
        name: "trick_split".into(),
        pass: split_dev <= tol,
        max_deviation: split_dev,
        detail: format!("summed {split_dev:.3e}"),
    };
    Ok(TrickReport {
        pass: merge.pass && split.pass,
        merge,
        split,
    })
}

/// The limit the trick forces, `P^2 = 1/2`: returns `(P_est, |P_est^2 - 1/2|)`.
pub fn trick_limit(n: u64) -> Result<(f64, f64)> {
    let p = eval_abel(find_claim("woods_robbins")?.spec(), n, true)?;
    Ok((p.value.re, (p.value.re * p.value.re - 0.5).abs()))
}
