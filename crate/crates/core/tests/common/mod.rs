//! Shared generators and independent reference implementations.

#![allow(dead_code)]

use std::f64::consts::TAU;

use digitprod::digits::{Base, DigitStat};
use digitprod::sequences::ExponentSeq;
use num_complex::Complex64;
use proptest::prelude::*;

pub fn base(b: u64) -> Base {
    Base::new(b).unwrap()
}

/// A point of the closed unit disk, kept away from 1 so that |G(B)| < B holds
/// with room to spare.
pub fn unit_disk() -> impl Strategy<Value = Complex64> {
    (0.0f64..=1.0, 0.25f64..(TAU - 0.25)).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Random strongly multiplicative table `u(1..B-1)` inside the unit disk.
pub fn sm_table(b: u64) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(unit_disk(), (b - 1) as usize)
}

pub fn strongly_multiplicative() -> impl Strategy<Value = ExponentSeq> {
    (2u64..=10)
        .prop_flat_map(|b| sm_table(b).prop_map(move |t| ExponentSeq::strongly_multiplicative(base(b), t).unwrap()))
}

/// Random sequences satisfying the block relation `u(Bn+k) = u(n) v(k)`, n >= 1.
pub fn hb_sequence() -> impl Strategy<Value = ExponentSeq> {
    let stat_power = (2u64..=10, unit_disk(), 0u8..4, any::<u64>()).prop_map(|(b, w, kind, pick)| {
        let stat = match kind {
            0 => DigitStat::DigitSum,
            1 => DigitStat::CountDigit(pick % b),
            2 => {
                // proper nonempty subset from the bits of `pick`
                let mask = 1 + pick % ((1 << b) - 2);
                DigitStat::count_set((0..b).filter(|j| mask >> j & 1 == 1).collect()).unwrap()
            }
            _ => DigitStat::Length,
        };
        let w = if matches!(stat, DigitStat::Length) { w * 0.9 } else { w };
        ExponentSeq::digit_stat_power(base(b), w, stat).unwrap()
    });
    let periodic = (2u64..=9, 1u64..=4, any::<u64>()).prop_map(|(q, m, p)| {
        // B = 1 mod q makes n -> omega^n strongly B-multiplicative.
        let b = m * q + 1;
        ExponentSeq::periodic_power(base(b), q, 1 + p % (q - 1).max(1)).unwrap()
    });
    prop_oneof![3 => stat_power, 2 => strongly_multiplicative(), 1 => periodic]
}

/// `u(n)` for a strongly multiplicative table, by multiplying the table entries
/// of the base-B digits of n (computed with plain division).
pub fn digit_product(table: &[Complex64], b: u64, mut n: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while n > 0 {
        let d = n % b;
        if d > 0 {
            acc *= table[(d - 1) as usize];
        }
        n /= b;
    }
    acc
}
