//! Base-B digit expansions and the digit statistics used to build exponents.
//!
//! Zero is the empty word: `expand(0)` is empty and every statistic vanishes
//! at zero, including the count of the digit 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest radix accepted. Digit-count tables are allocated per base.
pub const MAX_BASE: u64 = 1 << 16;

/// A radix B >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Base(u64);

impl Base {
    pub fn new(b: u64) -> Result<Self> {
        if (2..=MAX_BASE).contains(&b) {
            Ok(Base(b))
        } else {
            Err(Error::InvalidBase(b))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub(crate) fn check_digit(self, d: u64) -> Result<()> {
        if d < self.0 {
            Ok(())
        } else {
            Err(Error::InvalidDigit { digit: d, base: self.0 })
        }
    }
}

impl TryFrom<u64> for Base {
    type Error = Error;
    fn try_from(b: u64) -> Result<Self> {
        Base::new(b)
    }
}

impl From<Base> for u64 {
    fn from(b: Base) -> u64 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A digit statistic of n in a fixed base.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DigitStat {
    /// Occurrences of one digit.
    CountDigit(u64),
    /// Occurrences of any digit of a nonempty set (kept sorted, without repeats).
    CountSet(Vec<u64>),
    /// Sum of the digits.
    DigitSum,
    /// Number of digits (0 for n = 0).
    Length,
}

impl DigitStat {
    /// Builds a `CountSet`, normalizing the digit list.
    pub fn count_set(mut digits: Vec<u64>) -> Result<Self> {
        digits.sort_unstable();
        digits.dedup();
        if digits.is_empty() {
            return Err(Error::Validation("digit set must be nonempty".into()));
        }
        Ok(DigitStat::CountSet(digits))
    }

    pub fn validate(&self, base: Base) -> Result<()> {
        match self {
            DigitStat::CountDigit(j) => base.check_digit(*j),
            DigitStat::CountSet(set) => {
                if set.is_empty() {
                    return Err(Error::Validation("digit set must be nonempty".into()));
                }
                if set.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Validation("digit set must be sorted and distinct".into()));
                }
                set.iter().try_for_each(|&d| base.check_digit(d))
            }
            DigitStat::DigitSum | DigitStat::Length => Ok(()),
        }
    }

    /// True when the statistic counts every digit, i.e. equals the length.
    pub fn counts_all_digits(&self, base: Base) -> bool {
        match self {
            DigitStat::Length => true,
            DigitStat::CountSet(set) => set.len() as u64 == base.get(),
            DigitStat::CountDigit(_) | DigitStat::DigitSum => false,
        }
    }

    /// Evaluates the statistic from a digit histogram.
    #[inline]
    pub fn from_counts(&self, counts: &DigitCounts) -> u64 {
        match self {
            DigitStat::CountDigit(j) => counts.count(*j),
            DigitStat::CountSet(set) => set.iter().map(|&j| counts.count(j)).sum(),
            DigitStat::DigitSum => counts.digit_sum,
            DigitStat::Length => counts.len as u64,
        }
    }
}

/// Base-B digits of n, least significant first. Zero expands to the empty list.
pub fn expand(n: u64, base: Base) -> Vec<u64> {
    let b = base.get();
    let mut out = Vec::new();
    let mut m = n;
    while m > 0 {
        out.push(m % b);
        m /= b;
    }
    out
}

/// Reassembles a least-significant-first digit list. Returns `None` on overflow.
pub fn assemble(digits: &[u64], base: Base) -> Option<u64> {
    digits
        .iter()
        .rev()
        .try_fold(0u64, |acc, &d| acc.checked_mul(base.get())?.checked_add(d))
}

pub fn digit_stat(n: u64, stat: &DigitStat, base: Base) -> u64 {
    stat.from_counts(&DigitCounts::of(n, base))
}

/// `s_B(n)`.
pub fn digit_sum(n: u64, base: Base) -> u64 {
    expand(n, base).iter().sum()
}

/// Thue–Morse sign `(-1)^{number of ones in binary n}`.
#[inline]
pub fn thue_morse(n: u64) -> i32 {
    if n.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Histogram of the digits of n together with their sum and count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitCounts {
    counts: Vec<u32>,
    pub digit_sum: u64,
    pub len: u32,
}

impl DigitCounts {
    pub fn zero(base: Base) -> Self {
        DigitCounts {
            counts: vec![0; base.get() as usize],
            digit_sum: 0,
            len: 0,
        }
    }

    pub fn of(n: u64, base: Base) -> Self {
        let mut c = DigitCounts::zero(base);
        for d in expand(n, base) {
            c.counts[d as usize] += 1;
            c.digit_sum += d;
            c.len += 1;
        }
        c
    }

    #[inline]
    pub fn count(&self, digit: u64) -> u64 {
        self.counts[digit as usize] as u64
    }
}

/// Walks n, n+1, n+2, ... keeping the digit histogram current in amortized O(1).
#[derive(Debug, Clone)]
pub struct DigitCursor {
    base: u64,
    n: u64,
    digits: Vec<u64>,
    counts: DigitCounts,
}

impl DigitCursor {
    pub fn new(n: u64, base: Base) -> Self {
        DigitCursor {
            base: base.get(),
            n,
            digits: expand(n, base),
            counts: DigitCounts::of(n, base),
        }
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn counts(&self) -> &DigitCounts {
        &self.counts
    }

    #[inline]
    pub fn advance(&mut self) {
        self.n += 1;
        let top = self.base - 1;
        let c = &mut self.counts;
        for d in self.digits.iter_mut() {
            if *d < top {
                c.counts[*d as usize] -= 1;
                *d += 1;
                c.counts[*d as usize] += 1;
                c.digit_sum += 1;
                return;
            }
            c.counts[top as usize] -= 1;
            c.counts[0] += 1;
            c.digit_sum -= top;
            *d = 0;
        }
        self.digits.push(1);
        c.counts[1] += 1;
        c.digit_sum += 1;
        c.len += 1;
    }
}
