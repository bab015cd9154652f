//! Summatory functions `F(N) = u(0) + ... + u(N-1)`.
//!
//! `f_fast` peels base-B digits with
//! `F(BM+b) = F(B) + (F(M) - u(0)) G(B) + u(M) G(b)` (valid for M >= 1),
//! costing one evaluation of u per digit of N.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use crate::sequences::{ExponentSeq, HBProfile, RELATION_TOL};

const CHUNK: u64 = 1 << 16;

/// Envelope growth factor tolerated between the middle and the end of the
/// checked range before the bound is declared unbounded.
pub const GROWTH_SLACK: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummatoryPoint {
    pub n: u64,
    pub f: Complex64,
}

/// Direct summation of u(0..N).
pub fn f_brute(seq: &ExponentSeq, n: u64) -> Complex64 {
    let ev = seq.evaluator();
    let mut buf = vec![Complex64::new(0.0, 0.0); CHUNK.min(n) as usize];
    let mut acc = ComplexSum::default();
    let mut start = 0;
    while start < n {
        let len = CHUNK.min(n - start) as usize;
        ev.fill(start, &mut buf[..len]);
        buf[..len].iter().for_each(|&z| acc.add(z));
        start += len as u64;
    }
    acc.value()
}

/// Running values F(0), F(1), ..., F(n).
pub fn f_prefix(seq: &ExponentSeq, n: u64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = ComplexSum::default();
    out.push(acc.value());
    for z in seq.evaluator().range(0, n) {
        acc.add(z);
        out.push(acc.value());
    }
    out
}

/// Spot-checks that `profile` describes `seq`.
pub fn check_profile(profile: &HBProfile, seq: &ExponentSeq) -> Result<()> {
    let b = profile.base.get();
    for n in [1, 2, 3, b + 1, profile.n0, 997, 65_537] {
        let un = seq.eval(n);
        for k in 0..b {
            let expect = un * profile.v[k as usize];
            let tol = RELATION_TOL * expect.norm().max(1.0);
            if (seq.eval(b * n + k) - expect).norm() > tol {
                return Err(Error::ProfileMismatch { n, k });
            }
        }
    }
    Ok(())
}

/// `F(N)` by the digit recursion, in O(log^2 N).
pub fn f_fast(profile: &HBProfile, seq: &ExponentSeq, n: u64) -> Result<Complex64> {
    check_profile(profile, seq)?;
    Ok(FastSummatory::new(profile, seq).eval(n))
}

/// Reusable state for repeated `f_fast` queries on one sequence.
pub struct FastSummatory<'a> {
    profile: &'a HBProfile,
    seq: &'a ExponentSeq,
    small: Vec<Complex64>,
}

impl<'a> FastSummatory<'a> {
    /// Assumes `profile` was already checked against `seq`.
    pub fn new(profile: &'a HBProfile, seq: &'a ExponentSeq) -> Self {
        let small = f_prefix(seq, profile.base.get());
        FastSummatory { profile, seq, small }
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        let b = self.profile.base.get();
        if n < b {
            return self.small[n as usize];
        }
        let (m, r) = (n / b, n % b);
        let f_b = self.small[b as usize];
        let u0 = self.small[1];
        f_b + (self.eval(m) - u0) * self.profile.g_total() + self.seq.eval(m) * self.profile.g[r as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: u64,
    pub f: Complex64,
    /// `|F(N)| / N^alpha`.
    pub ratio: f64,
    /// `|F(N)| / log N`, reported when `|G(B)| <= 1`.
    pub log_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    /// Largest `|F(N)| / N^alpha` over checkpoints past the first quartile.
    pub c_est: f64,
    /// Largest `|F(N)| / log N` over the same range, when `|G(B)| <= 1`.
    pub c_log_est: Option<f64>,
    pub alpha: f64,
    pub pass: bool,
    pub rows: Vec<GrowthRow>,
}

/// Empirical check of `|F(N)| < C N^alpha` over increasing checkpoints.
///
/// Only checkpoints past the first quartile count ("N large enough"). The
/// bound passes when the running maximum of the ratio at the last checkpoint
/// is within [`GROWTH_SLACK`] of its value halfway through that range (or of
/// the size of one unit term, whichever is larger).
pub fn growth_check(profile: &HBProfile, seq: &ExponentSeq, checkpoints: &[u64]) -> Result<GrowthReport> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation("checkpoints must be nonempty and increasing".into()));
    }
    check_profile(profile, seq)?;
    let fast = FastSummatory::new(profile, seq);
    let small_g = profile.g_total().norm() <= 1.0;
    let rows: Vec<GrowthRow> = checkpoints
        .par_iter()
        .map(|&n| {
            let f = fast.eval(n);
            let nf = (n.max(1)) as f64;
            GrowthRow {
                n,
                f,
                ratio: f.norm() / nf.powf(profile.alpha),
                log_ratio: (small_g && n >= 2).then(|| f.norm() / nf.ln()),
            }
        })
        .collect();

    let tail = &rows[rows.len() / 4..];
    let c_est = tail.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let c_log_est = small_g.then(|| tail.iter().filter_map(|r| r.log_ratio).fold(0.0, f64::max));

    let key = |r: &GrowthRow| if small_g { r.log_ratio.unwrap_or(0.0) } else { r.ratio };
    let mut envelope = Vec::with_capacity(tail.len());
    let mut run = 0.0f64;
    for r in tail {
        run = run.max(key(r));
        envelope.push(run);
    }
    let mid = envelope[envelope.len() / 2];
    let last = *envelope.last().expect("tail is nonempty");
    // A single unit term at the last checkpoint, on the same scale.
    let n_last = rows.last().expect("rows are nonempty").n.max(2) as f64;
    let unit = if small_g {
        1.0 / n_last.ln()
    } else {
        1.0 / n_last.powf(profile.alpha)
    };
    let finite = rows.iter().all(|r| r.ratio.is_finite());
    let pass = finite && last <= GROWTH_SLACK * mid.max(unit) + 1e-12;

    Ok(GrowthReport {
        c_est,
        c_log_est,
        alpha: profile.alpha,
        pass,
        rows,
    })
}

/// Geometric grid of checkpoints from `lo` to `hi` (both included), about
/// `per_octave` points per doubling.
pub fn geometric_checkpoints(lo: u64, hi: u64, per_octave: u32) -> Vec<u64> {
    let lo = lo.max(1);
    let step = 2f64.powf(1.0 / per_octave.max(1) as f64);
    let mut out = Vec::new();
    let mut x = lo as f64;
    while (x as u64) < hi {
        let n = x.round() as u64;
        if out.last() != Some(&n) {
            out.push(n);
        }
        x *= step;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::{Base, DigitStat};
    use crate::sequences::hb_profile;

    fn b(x: u64) -> Base {
        Base::new(x).unwrap()
    }
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn brute_examples() {
        let tm = ExponentSeq::thue_morse();
        assert_eq!(f_brute(&tm, 3), c(-1.0, 0.0));
        assert_eq!(f_brute(&tm, 0), c(0.0, 0.0));
        let per = ExponentSeq::periodic_power(b(5), 4, 1).unwrap();
        assert!(f_brute(&per, 4).norm() < 1e-15);
    }

    #[test]
    fn fast_equals_brute_small() {
        let seqs = [
            ExponentSeq::thue_morse(),
            ExponentSeq::digit_stat_power(b(3), c(0.4, 0.5), DigitStat::CountDigit(0)).unwrap(),
            ExponentSeq::periodic_power(b(7), 3, 1).unwrap(),
        ];
        for s in &seqs {
            let p = hb_profile(s, 4096).unwrap();
            let prefix = f_prefix(s, 5000);
            let fast = FastSummatory::new(&p, s);
            for n in 0..=5000u64 {
                assert!((fast.eval(n) - prefix[n as usize]).norm() < 1e-9, "n = {n}");
            }
        }
    }

    #[test]
    fn fast_equals_brute_large() {
        let tm = ExponentSeq::thue_morse();
        let p = hb_profile(&tm, 4096).unwrap();
        let n = 1 << 20;
        assert!((f_fast(&p, &tm, n).unwrap() - f_brute(&tm, n)).norm() < 1e-9);

        let half = ExponentSeq::digit_stat_power(b(2), c(0.5, 0.0), DigitStat::DigitSum).unwrap();
        let p = hb_profile(&half, 4096).unwrap();
        let n = 1_000_000;
        assert!((f_fast(&p, &half, n).unwrap() - f_brute(&half, n)).norm() < 1e-9);
    }

    #[test]
    fn mismatched_profile_is_rejected() {
        let tm = ExponentSeq::thue_morse();
        let other = ExponentSeq::digit_stat_power(b(2), c(0.5, 0.0), DigitStat::DigitSum).unwrap();
        let p = hb_profile(&other, 4096).unwrap();
        assert!(matches!(f_fast(&p, &tm, 100), Err(Error::ProfileMismatch { .. })));
    }

    #[test]
    fn thue_morse_growth_is_bounded() {
        let tm = ExponentSeq::thue_morse();
        let p = hb_profile(&tm, 4096).unwrap();
        let cps: Vec<u64> = (10..=24).map(|j| 1u64 << j).chain([(1 << 24) + 12345]).collect();
        let rep = growth_check(&p, &tm, &cps).unwrap();
        assert!(rep.pass);
        assert!(rep.rows.iter().all(|r| r.f.norm() <= 1.0));
    }

    #[test]
    fn half_power_growth_uses_log_three_halves() {
        let half = ExponentSeq::digit_stat_power(b(2), c(0.5, 0.0), DigitStat::DigitSum).unwrap();
        let p = hb_profile(&half, 4096).unwrap();
        assert!((p.alpha - (1.5f64).log2()).abs() < 1e-14);
        let cps = geometric_checkpoints(1 << 8, 1 << 30, 4);
        let rep = growth_check(&p, &half, &cps).unwrap();
        assert!(rep.pass, "{rep:?}");
        // F(2^m) = (3/2)^m exactly, so the ratio is 1 at powers of two.
        assert!(rep.c_est >= 1.0 - 1e-12);

        let mut wrong = p.clone();
        wrong.alpha = 0.3;
        let rep = growth_check(&wrong, &half, &cps).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn i_power_alpha_is_half() {
        let s = ExponentSeq::digit_stat_power(b(2), c(0.0, 1.0), DigitStat::DigitSum).unwrap();
        let p = hb_profile(&s, 4096).unwrap();
        assert!((p.g_total().norm() - 2f64.sqrt()).abs() < 1e-14);
        assert!((p.alpha - 0.5).abs() < 1e-14);
        let rep = growth_check(&p, &s, &geometric_checkpoints(64, 1 << 28, 3)).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn checkpoint_validation() {
        let tm = ExponentSeq::thue_morse();
        let p = hb_profile(&tm, 4096).unwrap();
        assert!(growth_check(&p, &tm, &[]).is_err());
        assert!(growth_check(&p, &tm, &[10, 5]).is_err());
        let g = geometric_checkpoints(2, 1000, 2);
        assert_eq!(g.first(), Some(&2));
        assert_eq!(g.last(), Some(&1000));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
