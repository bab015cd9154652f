//! Exponent sequences u(n) and the structural checks on them: strong
//! B-multiplicativity and the weaker block relation `u(Bn+k) = u(n) v(k)`
//! for n >= 1 (the H_B profile).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::digits::{Base, DigitCounts, DigitCursor, DigitStat};
use crate::error::{Error, Result};

/// Absolute tolerance for relation checks on complex values.
pub const RELATION_TOL: f64 = 1e-12;

/// Largest power table kept by [`SeqEvaluator`]; larger exponents use [`ipow`].
const MAX_POW_TABLE: usize = 1 << 12;

/// An exponent sequence u(n), n >= 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExponentSeq {
    /// `u(n) = prod_j table[e_j(n)]` over the digits of n, with `u(0) = 1`.
    /// `table[d - 1]` holds u(d) for digits d = 1..B-1.
    StronglyMultiplicative { base: Base, table: Vec<Complex64> },
    /// `u(n) = w^{stat(n)}` with `0^0 = 1`.
    DigitStatPower { base: Base, w: Complex64, stat: DigitStat },
    /// `u(n) = e^{2 pi i p n / q}`.
    PeriodicPower { base: Base, q: u64, p: u64 },
    /// `u(n) = values[n mod values.len()]`.
    SignedResidue { base: Base, values: Vec<Complex64> },
}

impl ExponentSeq {
    pub fn strongly_multiplicative(base: Base, table: Vec<Complex64>) -> Result<Self> {
        let s = ExponentSeq::StronglyMultiplicative { base, table };
        s.validate()?;
        Ok(s)
    }

    pub fn digit_stat_power(base: Base, w: Complex64, stat: DigitStat) -> Result<Self> {
        let s = ExponentSeq::DigitStatPower { base, w, stat };
        s.validate()?;
        Ok(s)
    }

    pub fn periodic_power(base: Base, q: u64, p: u64) -> Result<Self> {
        let s = ExponentSeq::PeriodicPower { base, q, p };
        s.validate()?;
        Ok(s)
    }

    pub fn signed_residue(base: Base, values: Vec<Complex64>) -> Result<Self> {
        let s = ExponentSeq::SignedResidue { base, values };
        s.validate()?;
        Ok(s)
    }

    /// The ±1 Thue–Morse sequence as `(-1)^{N_{1,2}(n)}`.
    pub fn thue_morse() -> Self {
        ExponentSeq::DigitStatPower {
            base: Base::new(2).expect("2 is a valid base"),
            w: Complex64::new(-1.0, 0.0),
            stat: DigitStat::CountDigit(1),
        }
    }

    pub fn base(&self) -> Base {
        match self {
            ExponentSeq::StronglyMultiplicative { base, .. }
            | ExponentSeq::DigitStatPower { base, .. }
            | ExponentSeq::PeriodicPower { base, .. }
            | ExponentSeq::SignedResidue { base, .. } => *base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        match self {
            ExponentSeq::StronglyMultiplicative { base, table } => {
                if table.len() as u64 != base.get() - 1 {
                    return Err(Error::InvalidSequence(format!(
                        "table needs {} entries u(1..B-1), got {}",
                        base.get() - 1,
                        table.len()
                    )));
                }
                if !table.iter().all(finite) {
                    return Err(Error::InvalidSequence("non-finite table entry".into()));
                }
            }
            ExponentSeq::DigitStatPower { base, w, stat } => {
                stat.validate(*base)?;
                if !finite(w) {
                    return Err(Error::InvalidSequence("non-finite power base".into()));
                }
            }
            ExponentSeq::PeriodicPower { q, p, .. } => {
                if !(*q > *p && *p > 0) {
                    return Err(Error::InvalidSequence(format!(
                        "periodic power needs q > p > 0, got q = {q}, p = {p}"
                    )));
                }
            }
            ExponentSeq::SignedResidue { values, .. } => {
                if values.is_empty() {
                    return Err(Error::InvalidSequence("empty residue table".into()));
                }
                if !values.iter().all(finite) {
                    return Err(Error::InvalidSequence("non-finite residue value".into()));
                }
            }
        }
        Ok(())
    }

    /// u(n).
    pub fn eval(&self, n: u64) -> Complex64 {
        match self {
            ExponentSeq::PeriodicPower { q, p, .. } => root_of_unity(*q, *p, n % q),
            ExponentSeq::SignedResidue { values, .. } => values[(n % values.len() as u64) as usize],
            _ => self.eval_counts(&DigitCounts::of(n, self.base())),
        }
    }

    fn eval_counts(&self, counts: &DigitCounts) -> Complex64 {
        match self {
            ExponentSeq::StronglyMultiplicative { table, .. } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for (i, &t) in table.iter().enumerate() {
                    let c = counts.count(i as u64 + 1);
                    if c > 0 {
                        acc *= ipow(t, c);
                    }
                }
                acc
            }
            ExponentSeq::DigitStatPower { w, stat, .. } => ipow(*w, stat.from_counts(counts)),
            _ => unreachable!("periodic sequences do not use digit counts"),
        }
    }

    /// A fast evaluator for consecutive ranges of n.
    pub fn evaluator(&self) -> SeqEvaluator<'_> {
        SeqEvaluator::new(self)
    }
}

/// `w^m` by repeated squaring, with `0^0 = 1`.
pub fn ipow(w: Complex64, mut m: u64) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut sq = w;
    while m > 0 {
        if m & 1 == 1 {
            result *= sq;
        }
        m >>= 1;
        if m > 0 {
            sq *= sq;
        }
    }
    result
}

/// `e^{2 pi i p r / q}` for a residue r.
pub fn root_of_unity(q: u64, p: u64, r: u64) -> Complex64 {
    let turn = ((p as u128 * r as u128) % q as u128) as f64 / q as f64;
    Complex64::cis(std::f64::consts::TAU * turn)
}

/// Evaluates a sequence over runs of consecutive indices.
///
/// Values are bit-identical to [`ExponentSeq::eval`]: the power tables are
/// filled with the same `ipow` calls and products are taken in the same order.
pub struct SeqEvaluator<'a> {
    seq: &'a ExponentSeq,
    tables: Vec<Vec<Complex64>>,
}

impl<'a> SeqEvaluator<'a> {
    fn new(seq: &'a ExponentSeq) -> Self {
        let pow_table = |w: Complex64, len: usize| (0..len as u64).map(|m| ipow(w, m)).collect();
        let tables = match seq {
            ExponentSeq::StronglyMultiplicative { table, .. } => table.iter().map(|&t| pow_table(t, 65)).collect(),
            ExponentSeq::DigitStatPower { base, w, stat } => {
                let max_stat = match stat {
                    DigitStat::DigitSum => 64 * (base.get() - 1) as usize,
                    _ => 64,
                };
                vec![pow_table(*w, (max_stat + 1).min(MAX_POW_TABLE))]
            }
            ExponentSeq::PeriodicPower { q, p, .. } if *q as usize <= MAX_POW_TABLE => {
                vec![(0..*q).map(|r| root_of_unity(*q, *p, r)).collect()]
            }
            _ => Vec::new(),
        };
        SeqEvaluator { seq, tables }
    }

    #[inline]
    fn pow(&self, table: usize, w: Complex64, m: u64) -> Complex64 {
        match self.tables[table].get(m as usize) {
            Some(&z) => z,
            None => ipow(w, m),
        }
    }

    /// Writes u(start), u(start+1), ... into `out`.
    pub fn fill(&self, start: u64, out: &mut [Complex64]) {
        match self.seq {
            ExponentSeq::PeriodicPower { q, p, .. } => {
                let mut r = start % q;
                for slot in out.iter_mut() {
                    *slot = match self.tables.first() {
                        Some(t) => t[r as usize],
                        None => root_of_unity(*q, *p, r),
                    };
                    r += 1;
                    if r == *q {
                        r = 0;
                    }
                }
            }
            ExponentSeq::SignedResidue { values, .. } => {
                let period = values.len();
                let mut r = (start % period as u64) as usize;
                for slot in out.iter_mut() {
                    *slot = values[r];
                    r += 1;
                    if r == period {
                        r = 0;
                    }
                }
            }
            ExponentSeq::StronglyMultiplicative { table, base } => {
                let mut cur = DigitCursor::new(start, *base);
                for slot in out.iter_mut() {
                    let counts = cur.counts();
                    let mut acc = Complex64::new(1.0, 0.0);
                    for (i, &t) in table.iter().enumerate() {
                        let c = counts.count(i as u64 + 1);
                        if c > 0 {
                            acc *= self.pow(i, t, c);
                        }
                    }
                    *slot = acc;
                    cur.advance();
                }
            }
            ExponentSeq::DigitStatPower { base, w, stat } => {
                let mut cur = DigitCursor::new(start, *base);
                for slot in out.iter_mut() {
                    *slot = self.pow(0, *w, stat.from_counts(cur.counts()));
                    cur.advance();
                }
            }
        }
    }

    /// u(n) for n in `start..end`.
    pub fn range(&self, start: u64, end: u64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); end.saturating_sub(start) as usize];
        self.fill(start, &mut out);
        out
    }
}

/// Outcome of a strong-multiplicativity scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongMultReport {
    pub pass: bool,
    pub checked: u64,
    pub max_deviation: f64,
    /// First (n, k) with `u(Bn+k) != u(n) u(k)`; `None` also covers a bad u(0).
    pub first_failure: Option<(u64, u64)>,
    pub u0_ok: bool,
}

/// Checks `u(0) = 1` and `u(Bn+k) = u(n) u(k)` for all `Bn+k <= limit`.
pub fn verify_strong_mult(seq: &ExponentSeq, limit: u64) -> StrongMultReport {
    let b = seq.base().get();
    let u = seq.evaluator().range(0, limit + 1);
    let u0_ok = (u[0] - Complex64::new(1.0, 0.0)).norm() <= RELATION_TOL;
    let mut max_dev = 0.0f64;
    let mut first_failure = None;
    let mut checked = 0;
    'outer: for n in 0..=limit / b {
        for k in 0..b {
            let m = b * n + k;
            if m > limit {
                break 'outer;
            }
            let dev = (u[m as usize] - u[n as usize] * u[k as usize]).norm();
            checked += 1;
            max_dev = max_dev.max(dev);
            if dev > RELATION_TOL && first_failure.is_none() {
                first_failure = Some((n, k));
            }
        }
    }
    StrongMultReport {
        pass: u0_ok && first_failure.is_none(),
        checked,
        max_deviation: max_dev,
        first_failure,
        u0_ok,
    }
}

/// The data of the block relation `u(Bn+k) = u(n) v(k)` (n >= 1) together with
/// the partial sums `G(j) = v(0) + ... + v(j-1)` and the growth exponent alpha.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HBProfile {
    pub base: Base,
    pub v: Vec<Complex64>,
    pub n0: u64,
    /// `G(0), ..., G(B)`.
    pub g: Vec<Complex64>,
    pub alpha: f64,
    pub u_bounded: bool,
    pub v_bounded: bool,
}

impl HBProfile {
    pub fn g_total(&self) -> Complex64 {
        self.g[self.base.get() as usize]
    }

    /// `G(B)/B`: the ratio between the tails of the product log-series at BM and M.
    pub fn tail_ratio(&self) -> Complex64 {
        self.g_total() / self.base.get() as f64
    }

    /// Both modulus bounds required for the convergence argument.
    pub fn sup_norm_ok(&self) -> bool {
        self.u_bounded && self.v_bounded
    }

    pub fn require_bounded(&self) -> Result<()> {
        if self.sup_norm_ok() {
            Ok(())
        } else {
            Err(Error::UnboundedExponent {
                u_ok: self.u_bounded,
                v_ok: self.v_bounded,
            })
        }
    }
}

/// Builds the profile of `seq` in its own base, scanning n up to `span`.
pub fn hb_profile(seq: &ExponentSeq, span: u64) -> Result<HBProfile> {
    hb_profile_in(seq, seq.base(), span)
}

/// Builds the profile of `seq` with respect to `base`, which may differ from
/// the base the sequence is defined in (e.g. Thue–Morse is also 4-multiplicative).
pub fn hb_profile_in(seq: &ExponentSeq, base: Base, span: u64) -> Result<HBProfile> {
    let b = base.get();
    let span = span.max(b * b);
    let hi = span.min(b + 64 * b);
    let u = seq.evaluator().range(0, span + 1);
    let (n0, best) = (b..=hi)
        .map(|n| (n, u[n as usize].norm()))
        .fold((0, 0.0), |acc, (n, a)| if a > acc.1 { (n, a) } else { acc });
    if best == 0.0 {
        return Err(Error::NoNonzeroSeed { lo: b, hi });
    }
    profile_from_values(&u, base, n0)
}

/// Same as [`hb_profile_in`] but with a caller-chosen seed n0.
pub fn hb_profile_with_seed(seq: &ExponentSeq, base: Base, span: u64, n0: u64) -> Result<HBProfile> {
    let b = base.get();
    let span = span.max(b * b).max(b * n0 + b);
    let u = seq.evaluator().range(0, span + 1);
    if n0 < b || u[n0 as usize].norm() == 0.0 {
        return Err(Error::Validation(format!("n0 = {n0} is not a valid seed")));
    }
    profile_from_values(&u, base, n0)
}

fn profile_from_values(u: &[Complex64], base: Base, n0: u64) -> Result<HBProfile> {
    let b = base.get();
    let span = (u.len() - 1) as u64;
    let seed = u[n0 as usize];
    let v: Vec<Complex64> = (0..b).map(|k| u[(b * n0 + k) as usize] / seed).collect();

    for n in 1..=span / b {
        for k in 0..b {
            let m = b * n + k;
            if m > span {
                break;
            }
            let expect = u[n as usize] * v[k as usize];
            let tol = RELATION_TOL * expect.norm().max(1.0);
            if (u[m as usize] - expect).norm() > tol {
                return Err(Error::HypothesisFailed { n, k });
            }
        }
    }

    let bound = 1.0 + RELATION_TOL;
    let u_bounded = u.iter().all(|z| z.norm() <= bound);
    let v_bounded = v.iter().all(|z| z.norm() <= bound);

    let mut g = Vec::with_capacity(b as usize + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    g.push(acc);
    for &vk in &v {
        acc += vk;
        g.push(acc);
    }
    let g_abs = acc.norm();
    if g_abs >= b as f64 * (1.0 - 1e-12) {
        return Err(Error::ConvergenceHypothesisViolated { g_abs, base: b });
    }
    let alpha = if g_abs <= 1.0 {
        0.5
    } else {
        g_abs.ln() / (b as f64).ln()
    };
    Ok(HBProfile {
        base,
        v,
        n0,
        g,
        alpha,
        u_bounded,
        v_bounded,
    })
}
