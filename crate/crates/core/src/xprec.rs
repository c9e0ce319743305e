//! Binary fixed-point arithmetic on big integers.
//!
//! A value v is stored as the integer ⌊v · 2^frac⌋. Only the handful of
//! operations the alternating selection-combining sum needs are provided.

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Fixed {
    frac: u64,
}

impl Fixed {
    pub(crate) fn new(frac_bits: u64) -> Self {
        Self { frac: frac_bits }
    }

    pub(crate) fn one(&self) -> BigInt {
        BigInt::one() << self.frac
    }

    /// Exact for any finite f64 whose lowest set bit is at or above 2^-frac;
    /// otherwise truncated toward zero.
    pub(crate) fn from_f64(&self, v: f64) -> BigInt {
        assert!(v.is_finite(), "fixed-point conversion of non-finite value");
        if v == 0.0 {
            return BigInt::zero();
        }
        let bits = v.abs().to_bits();
        let exp_field = ((bits >> 52) & 0x7ff) as i64;
        let frac_field = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp_field == 0 {
            (frac_field, -1074)
        } else {
            (frac_field | (1u64 << 52), exp_field - 1075)
        };
        let mag = BigInt::from(mantissa);
        let shift = exp + self.frac as i64;
        let mag = if shift >= 0 {
            mag << shift as u64
        } else {
            mag >> (-shift) as u64
        };
        if v < 0.0 {
            -mag
        } else {
            mag
        }
    }

    pub(crate) fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.frac
    }

    pub(crate) fn to_f64(&self, a: &BigInt) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        let bits = a.bits();
        let (top, dropped) = if bits > 64 {
            let drop = bits - 64;
            (a >> drop, drop as i64)
        } else {
            (a.clone(), 0)
        };
        let m = top.to_f64().expect("64-bit value converts");
        let e = dropped - self.frac as i64;
        m * pow2(e)
    }

    /// e^{−y} for y ≥ 0, accurate to a few units of 2^-frac.
    pub(crate) fn exp_neg(&self, y: &BigInt) -> BigInt {
        debug_assert!(y.sign() != Sign::Minus);
        if y.is_zero() {
            return self.one();
        }
        // e^{−y} < 2^{−frac} once y > frac·ln 2.
        let cutoff = BigInt::from(self.frac + 2) << self.frac;
        if *y > cutoff {
            return BigInt::zero();
        }
        // Reduce to r = y/2^s ≤ 2^{−m}, sum the Taylor series, square s times.
        let m = (self.frac as f64).sqrt().ceil().max(8.0) as u64;
        let int_bits = y.bits().saturating_sub(self.frac);
        let s = int_bits + m;
        let guard = s + 16;
        let work = Fixed::new(self.frac + guard);
        let r = (y << guard) >> s;

        let mut term = work.one();
        let mut sum = term.clone();
        let mut k: u64 = 1;
        loop {
            term = work.mul(&term, &r) / BigInt::from(k);
            if term.is_zero() {
                break;
            }
            if k % 2 == 1 {
                sum -= &term;
            } else {
                sum += &term;
            }
            k += 1;
        }
        for _ in 0..s {
            sum = work.mul(&sum, &sum);
        }
        sum >> guard
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}
