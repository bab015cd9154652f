//! Evaluation of products `prod_k prod_{n >= start_k} ((Bn+k)/(Bn+k+1))^{c_k u(n)}`.
//!
//! Everything is done on the logarithm: each factor contributes
//! `c_k * sum_n u(n) log((Bn+k)/(Bn+k+1))`, a real log times a complex
//! exponent, so no complex logarithm (and no branch choice) ever appears.
//!
//! [`eval_abel`] sums by parts, `sum u(n) a_n = sum F(n+1)(a_n - a_{n+1}) + F(N) a_N`,
//! and optionally removes the tail. For an H_B exponent the tail
//! `T(N) = sum_{n >= N} u(n) a_n` obeys `T(BM) = (G(B)/B) T(M) + O(M^{alpha-2})`
//! for every M >= 1, so two partial sums at N/B and N determine it.
//!
//! The range of n is cut into fixed blocks that are evaluated in parallel and
//! folded in index order, so results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digits::Base;
use crate::error::{Error, Result};
use crate::numeric::{ComplexSum, NeumaierSum};
use crate::sequences::{hb_profile_in, ExponentSeq, HBProfile, SeqEvaluator, RELATION_TOL};
use crate::summatory::f_brute;

/// Block length (in n) of the parallel partition.
pub const BLOCK: u64 = 1 << 15;

/// How far the H_B relation is scanned before evaluating by parts.
pub const PROFILE_SPAN: u64 = 1 << 14;

/// Absolute floor added to every error estimate (accumulated rounding).
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// Absolute tolerance of the exact finite identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// One residue class `k` with exponent multiplier `c_k`, starting at `n = start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub residue: u64,
    pub multiplier: Complex64,
    pub start: u64,
}

impl Factor {
    /// Factor with the usual start: 1 for the zero residue, 0 otherwise.
    pub fn new(residue: u64, multiplier: Complex64) -> Self {
        Factor {
            residue,
            multiplier,
            start: default_start(residue),
        }
    }

    pub fn real(residue: u64, multiplier: f64) -> Self {
        Factor::new(residue, Complex64::new(multiplier, 0.0))
    }

    pub fn with_start(mut self, start: u64) -> Self {
        self.start = start;
        self
    }
}

/// 1 for the zero residue (its n = 0 factor would be 0/1), else 0.
pub fn default_start(residue: u64) -> u64 {
    u64::from(residue == 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSpec {
    base: Base,
    factors: Vec<Factor>,
    seq: ExponentSeq,
}

impl ProductSpec {
    pub fn new(base: Base, factors: Vec<Factor>, seq: ExponentSeq) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidProduct("no factors".into()));
        }
        let mut seen: Vec<u64> = factors.iter().map(|f| f.residue).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidProduct("residues must be distinct".into()));
        }
        for f in &factors {
            base.check_digit(f.residue)?;
            if base.get() * f.start + f.residue < 1 {
                return Err(Error::InvalidProduct(format!(
                    "factor {} starts at n = {}, where its numerator vanishes",
                    f.residue, f.start
                )));
            }
            if !(f.multiplier.re.is_finite() && f.multiplier.im.is_finite()) {
                return Err(Error::InvalidProduct("non-finite multiplier".into()));
            }
        }
        seq.validate()?;
        divergence_guard(&seq)?;
        Ok(ProductSpec { base, factors, seq })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn seq(&self) -> &ExponentSeq {
        &self.seq
    }

    /// H_B profile of the exponent with respect to the product's base.
    pub fn profile(&self) -> Result<HBProfile> {
        hb_profile_in(&self.seq, self.base, PROFILE_SPAN)
    }
}

/// Rejects exponents `w^{stat}` where the statistic counts every digit (the
/// digit length) and `|w| >= 1`: then `|G(B)| = |w| B >= B` and the products
/// may diverge.
fn divergence_guard(seq: &ExponentSeq) -> Result<()> {
    if let ExponentSeq::DigitStatPower { base, w, stat } = seq {
        if stat.counts_all_digits(*base) && w.norm() >= 1.0 - ROUNDING_FLOOR {
            return Err(Error::ConvergenceHypothesisViolated {
                g_abs: w.norm() * base.get() as f64,
                base: base.get(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "naive")]
    Naive,
    #[serde(rename = "abel")]
    Abel,
    #[serde(rename = "abel+extrapolation")]
    AbelExtrapolated,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Abel => "abel",
            Method::AbelExtrapolated => "abel+extrapolation",
        }
    }
}

/// Result of one product evaluation. `err_est` is a heuristic estimate of the
/// error of `log_value`, not a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub log_value: Complex64,
    pub value: Complex64,
    pub err_est: f64,
    pub terms: u64,
    pub method: Method,
}

impl EvalResult {
    fn new(log_value: Complex64, err_est: f64, terms: u64, method: Method) -> Self {
        EvalResult {
            log_value,
            value: log_value.exp(),
            err_est,
            terms,
            method,
        }
    }

    /// Flat report shape used by the command line.
    pub fn report(&self) -> EvalReport {
        EvalReport {
            value_re: self.value.re,
            value_im: self.value.im,
            log_re: self.log_value.re,
            log_im: self.log_value.im,
            err_est: self.err_est,
            terms: self.terms,
            method: self.method,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub value_re: f64,
    pub value_im: f64,
    pub log_re: f64,
    pub log_im: f64,
    pub err_est: f64,
    pub terms: u64,
    pub method: Method,
}

/// `log((Bn+k)/(Bn+k+1))`, computed as `-log1p(1/(Bn+k))`.
pub fn log_term(base: Base, k: u64, n: u64) -> Result<f64> {
    let x = base.get() as u128 * n as u128 + k as u128;
    if x < 1 {
        return Err(Error::Domain(format!(
            "log term needs Bn+k >= 1 (B = {base}, k = {k}, n = {n})"
        )));
    }
    Ok(log_ratio(x as f64))
}

/// `log(x/(x+1))` for x >= 1.
#[inline]
fn log_ratio(x: f64) -> f64 {
    -(1.0 / x).ln_1p()
}

/// `a_n - a_{n+1}` for `a_n = log(x/(x+1))`, `x = Bn+k`:
/// `log(1 - B/((x+1)(x+B)))`.
#[inline]
fn log_term_step(b: f64, x: f64) -> f64 {
    (-b / ((x + 1.0) * (x + b))).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Naive,
    Parts,
}

struct BlockOut {
    u_sum: ComplexSum,
    /// Per factor: the naive block sum, or `sum F_loc(n+1) (a_n - a_{n+1})`.
    sums: Vec<ComplexSum>,
    /// Per factor: `a_{lo'} - a_{hi}` (by-parts mode only).
    drops: Vec<f64>,
}

/// Per-factor partial sums `sum_{start_k <= n < X} u(n) a_k(n)` at each checkpoint X.
struct Partials {
    at: Vec<(u64, Vec<Complex64>, Complex64)>,
}

fn kernel(spec: &ProductSpec, ev: &SeqEvaluator<'_>, lo: u64, hi: u64, mode: Mode) -> BlockOut {
    let b = spec.base.get();
    let bf = b as f64;
    let mut u = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize];
    ev.fill(lo, &mut u);
    let mut u_sum = ComplexSum::default();
    let mut sums = Vec::with_capacity(spec.factors.len());
    let mut drops = Vec::with_capacity(spec.factors.len());

    match mode {
        Mode::Naive => {
            u.iter().for_each(|&z| u_sum.add(z));
            for f in &spec.factors {
                let mut acc = ComplexSum::default();
                for n in f.start.max(lo)..hi {
                    let x = (b * n + f.residue) as f64;
                    acc.add(u[(n - lo) as usize] * log_ratio(x));
                }
                sums.push(acc);
                drops.push(0.0);
            }
        }
        Mode::Parts => {
            // floc[i] = u(lo) + ... + u(lo + i), i.e. F_loc(n + 1) for n = lo + i.
            let floc: Vec<Complex64> = u
                .iter()
                .map(|&z| {
                    u_sum.add(z);
                    u_sum.value()
                })
                .collect();
            for f in &spec.factors {
                let s = f.start.max(lo);
                let mut acc = ComplexSum::default();
                let mut drop = 0.0;
                if s < hi {
                    for n in s..hi {
                        let x = (b * n + f.residue) as f64;
                        acc.add(floc[(n - lo) as usize] * log_term_step(bf, x));
                    }
                    drop = log_ratio((b * s + f.residue) as f64) - log_ratio((b * hi + f.residue) as f64);
                }
                sums.push(acc);
                drops.push(drop);
            }
        }
    }
    BlockOut { u_sum, sums, drops }
}

/// Evaluates all factors at the increasing checkpoints (the last one is N).
fn partial_sums(spec: &ProductSpec, checkpoints: &[u64], mode: Mode) -> Partials {
    let mut blocks = Vec::new();
    let mut lo = 0;
    for &cp in checkpoints {
        while lo < cp {
            let hi = (lo + BLOCK).min(cp);
            blocks.push((lo, hi));
            lo = hi;
        }
    }
    let ev = spec.seq.evaluator();
    let outs: Vec<BlockOut> = blocks
        .par_iter()
        .map(|&(lo, hi)| kernel(spec, &ev, lo, hi, mode))
        .collect();

    let nf = spec.factors.len();
    let b = spec.base.get();
    // F(start_k), needed for the boundary term of summation by parts.
    let f_start: Vec<Complex64> = spec.factors.iter().map(|f| f_brute(&spec.seq, f.start)).collect();

    let mut f_run = ComplexSum::default();
    let mut acc = vec![ComplexSum::default(); nf];
    let mut at = Vec::with_capacity(checkpoints.len());
    let mut cps = checkpoints.iter().peekable();
    let mut record = |x: u64, f_x: Complex64, acc: &[ComplexSum]| {
        let sums = spec
            .factors
            .iter()
            .zip(acc)
            .enumerate()
            .map(|(i, (f, s))| match mode {
                Mode::Naive => s.value(),
                Mode::Parts if x <= f.start => Complex64::new(0.0, 0.0),
                Mode::Parts => {
                    let a_x = log_ratio((b * x + f.residue) as f64);
                    let a_s = log_ratio((b * f.start + f.residue) as f64);
                    s.value() + f_x * a_x - f_start[i] * a_s
                }
            })
            .collect();
        at.push((x, sums, f_x));
    };
    while let Some(&&cp) = cps.peek() {
        if cp == 0 {
            record(0, Complex64::new(0.0, 0.0), &acc);
            cps.next();
        } else {
            break;
        }
    }
    for (&(_, hi), out) in blocks.iter().zip(&outs) {
        let f_lo = f_run.value();
        for (i, a) in acc.iter_mut().enumerate() {
            match mode {
                Mode::Naive => a.merge(&out.sums[i]),
                Mode::Parts => {
                    a.add(f_lo * out.drops[i]);
                    a.merge(&out.sums[i]);
                }
            }
        }
        f_run.merge(&out.u_sum);
        while let Some(&&cp) = cps.peek() {
            if cp == hi {
                record(cp, f_run.value(), &acc);
                cps.next();
            } else {
                break;
            }
        }
    }
    Partials { at }
}

fn combine(spec: &ProductSpec, sums: &[Complex64]) -> Complex64 {
    spec.factors.iter().zip(sums).map(|(f, s)| f.multiplier * s).sum()
}

/// Plain truncation: `sum_k c_k sum_{start_k <= n < N} u(n) a_k(n)`.
///
/// `err_est` is the magnitude of the contribution of the last `[N/B, N)` stretch.
pub fn eval_naive(spec: &ProductSpec, n: u64) -> Result<EvalResult> {
    let m = n / spec.base.get();
    let cps: Vec<u64> = if m > 0 && m < n { vec![m, n] } else { vec![n] };
    let p = partial_sums(spec, &cps, Mode::Naive);
    let log_n = combine(spec, &p.at.last().expect("one checkpoint").1);
    let err = if p.at.len() == 2 {
        (log_n - combine(spec, &p.at[0].1)).norm()
    } else {
        log_n.norm()
    };
    Ok(EvalResult::new(log_n, err + ROUNDING_FLOOR, n, Method::Naive))
}

/// Summation by parts, with optional tail removal.
///
/// N is rounded up to a multiple of B. With `extrapolate`, the tail is fitted
/// from the partial sums at N/B and N using the ratio `r = G(B)/B`:
/// `T(N) = r (S(N) - S(N/B)) / (1 - r)`, and `err_est = |T(N)|` plus the size
/// of the neglected next-order term.
pub fn eval_abel(spec: &ProductSpec, n: u64, extrapolate: bool) -> Result<EvalResult> {
    let profile = spec.profile()?;
    profile.require_bounded()?;
    eval_abel_with(spec, &profile, n, extrapolate)
}

/// [`eval_abel`] with a precomputed profile.
pub fn eval_abel_with(spec: &ProductSpec, profile: &HBProfile, n: u64, extrapolate: bool) -> Result<EvalResult> {
    let b = spec.base.get();
    if profile.base != spec.base {
        return Err(Error::Validation("profile base differs from product base".into()));
    }
    if n < b {
        return Err(Error::Validation(format!("need at least B = {b} terms, got {n}")));
    }
    let n = n.div_ceil(b) * b;
    let m = n / b;
    let p = partial_sums(spec, &[m, n], Mode::Parts);
    let (_, sums_m, _) = &p.at[0];
    let (_, sums_n, f_n) = &p.at[1];
    let s_n = combine(spec, sums_n);

    if !extrapolate {
        let boundary: f64 = spec
            .factors
            .iter()
            .map(|f| {
                let f_s = f_brute(&spec.seq, f.start);
                f.multiplier.norm() * (f_n - f_s).norm() * log_ratio((b * n + f.residue) as f64).abs()
            })
            .sum();
        return Ok(EvalResult::new(s_n, boundary + ROUNDING_FLOOR, n, Method::Abel));
    }

    let s_m = combine(spec, sums_m);
    let r = profile.tail_ratio();
    let one_minus_r = Complex64::new(1.0, 0.0) - r;
    let delta = s_n - s_m;
    let tail = r * delta / one_minus_r;
    let next_order = delta.norm() / (one_minus_r.norm() * m as f64);
    Ok(EvalResult::new(
        s_n + tail,
        tail.norm() + next_order + ROUNDING_FLOOR,
        n,
        Method::AbelExtrapolated,
    ))
}

/// Outcome of an exact finite identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub max_deviation: f64,
    pub detail: String,
}

impl CheckReport {
    fn from_deviations(name: &str, devs: &[(&str, f64)], tol: f64) -> Self {
        let worst = devs.iter().map(|d| d.1).fold(0.0, f64::max);
        let detail = devs
            .iter()
            .map(|(label, d)| format!("{label}: {d:.3e}"))
            .collect::<Vec<_>>()
            .join("; ");
        CheckReport {
            name: name.to_string(),
            pass: worst <= tol && worst.is_finite(),
            max_deviation: worst,
            detail,
        }
    }
}

/// Telescoping across residues, in finite form:
/// for n >= 1, `sum_{k<B} log((Bn+k)/(Bn+k+1)) = log(n/(n+1))`; for n = 0 the
/// residues k >= 1 give `-log B`; and, weighted by u,
/// `sum_k sum_{start_k <= n < N} u(n) a_k(n) = -u(0) log B + sum_{1 <= n < N} u(n) log(n/(n+1))`.
pub fn telescope_check(seq: &ExponentSeq, n: u64) -> Result<CheckReport> {
    let base = seq.base();
    let b = base.get();
    let u = seq.evaluator().range(0, n.max(1));
    if u.iter().any(|z| z.norm() > 1.0 + RELATION_TOL) {
        return Err(Error::UnboundedExponent {
            u_ok: false,
            v_ok: true,
        });
    }
    let mut per_n = 0.0f64;
    let zero: f64 = (1..b).map(|k| log_ratio(k as f64)).sum();
    per_n = per_n.max((zero + (b as f64).ln()).abs());

    let mut lhs = ComplexSum::default();
    let mut rhs = ComplexSum::default();
    rhs.add(-u[0] * (b as f64).ln());
    for k in 1..b {
        lhs.add(u[0] * log_term(base, k, 0)?);
    }
    for i in 1..n {
        let mut row = NeumaierSum::default();
        for k in 0..b {
            let t = log_term(base, k, i)?;
            row.add(t);
            lhs.add(u[i as usize] * t);
        }
        let merged = log_ratio(i as f64);
        per_n = per_n.max((row.value() - merged).abs());
        rhs.add(u[i as usize] * merged);
    }
    let weighted = (lhs.value() - rhs.value()).norm();
    Ok(CheckReport::from_deviations(
        "telescope",
        &[("per-n", per_n), ("weighted", weighted)],
        IDENTITY_TOL,
    ))
}

/// Splitting by residues mod B, in finite form:
/// `sum_{1 <= m < BN} u(m) log(m/(m+1)) = sum_k sum_{start_k <= n < N} u(Bn+k) a_k(n)`,
/// and the substituted forms using `u(Bn+k) = u(n) v(k)` for n >= 1.
pub fn split_residue_check(seq: &ExponentSeq, profile: &HBProfile, n: u64) -> Result<CheckReport> {
    let base = profile.base;
    let b = base.get();
    let n = n.max(1);
    let ev = seq.evaluator();
    let u = ev.range(0, n.max(b));

    // One pass over m = Bi + k: the merged sum in m order and one sum per residue.
    let mut merged = ComplexSum::default();
    let mut per_residue = vec![ComplexSum::default(); b as usize];
    let mut buf = vec![Complex64::new(0.0, 0.0); BLOCK as usize];
    let mut lo = 0;
    while lo < b * n {
        let len = BLOCK.min(b * n - lo);
        ev.fill(lo, &mut buf[..len as usize]);
        for (j, &um) in buf[..len as usize].iter().enumerate() {
            let m = lo + j as u64;
            if m == 0 {
                continue;
            }
            merged.add(um * log_ratio(m as f64));
            per_residue[(m % b) as usize].add(um * log_term(base, m % b, m / b)?);
        }
        lo += len;
    }
    let mut split = ComplexSum::default();
    per_residue.iter().for_each(|s| split.merge(s));

    // sum_{0<k<B} u(k) log(k/(k+1)) + sum_k v(k) sum_{1 <= n < N} u(n) a_k(n)
    let mut inner = Vec::with_capacity(b as usize);
    for k in 0..b {
        let mut s = ComplexSum::default();
        for i in 1..n {
            s.add(u[i as usize] * log_term(base, k, i)?);
        }
        inner.push(s.value());
    }
    let mut substituted = ComplexSum::default();
    for k in 1..b {
        substituted.add(u[k as usize] * log_ratio(k as f64));
    }
    for k in 0..b {
        substituted.add(profile.v[k as usize] * inner[k as usize]);
    }

    // sum_{0<k<B} (u(k) - u(0) v(k)) log(k/(k+1)) + sum_k v(k) sum_{start_k <= n < N} u(n) a_k(n)
    let mut shifted = ComplexSum::default();
    for k in 1..b {
        let coeff = u[k as usize] - u[0] * profile.v[k as usize];
        shifted.add(coeff * log_ratio(k as f64));
        shifted.add(profile.v[k as usize] * u[0] * log_ratio(k as f64));
    }
    for k in 0..b {
        shifted.add(profile.v[k as usize] * inner[k as usize]);
    }

    let scale = merged.value().norm().max(1.0);
    Ok(CheckReport::from_deviations(
        "split_residue",
        &[
            ("reorder", (merged.value() - split.value()).norm() / scale),
            ("substitute", (split.value() - substituted.value()).norm() / scale),
            ("shift", (split.value() - shifted.value()).norm() / scale),
        ],
        IDENTITY_TOL,
    ))
}
