//! Minimal arbitrary-precision fixed-point reals and complex numbers.
//!
//! A [`Real`] stores `mant / 2^bits` with a per-value scale. This is enough
//! for evaluating q-expansions at CM points: we need pi, square roots of
//! integers, the real exponential and sine/cosine, all to a few hundred
//! digits. Guard bits are added internally; results are correct to within a
//! few units in the last place, which the callers absorb by carrying more
//! working precision than they report.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

const GUARD: u64 = 64;

/// Fixed-point real number: value = mant / 2^bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mant: BigInt,
    bits: u64,
}

impl Real {
    pub fn zero(bits: u64) -> Self {
        Real {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(n: i64, bits: u64) -> Self {
        Real {
            mant: BigInt::from(n) << bits,
            bits,
        }
    }

    pub fn from_bigint(n: &BigInt, bits: u64) -> Self {
        Real {
            mant: n.clone() << bits,
            bits,
        }
    }

    pub fn from_ratio(r: &BigRational, bits: u64) -> Self {
        Real {
            mant: div_round(&(r.numer() << bits), r.denom()),
            bits,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Change the scale, rounding if it shrinks.
    pub fn with_bits(&self, bits: u64) -> Self {
        if bits >= self.bits {
            Real {
                mant: &self.mant << (bits - self.bits),
                bits,
            }
        } else {
            let shift = self.bits - bits;
            let half = BigInt::from(1) << (shift - 1);
            Real {
                mant: (&self.mant + half) >> shift,
                bits,
            }
        }
    }

    fn unify(&self, other: &Self) -> (BigInt, BigInt, u64) {
        let bits = self.bits.max(other.bits);
        (
            &self.mant << (bits - self.bits),
            &other.mant << (bits - other.bits),
            bits,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, bits) = self.unify(other);
        Real { mant: a + b, bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, bits) = self.unify(other);
        Real { mant: a - b, bits }
    }

    pub fn neg(&self) -> Self {
        Real {
            mant: -&self.mant,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        Real {
            mant: self.mant.abs(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, bits) = self.unify(other);
        let prod = a * b;
        let half = BigInt::from(1) << (bits - 1);
        Real {
            mant: (prod + half) >> bits,
            bits,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let (a, b, bits) = self.unify(other);
        assert!(!b.is_zero(), "division by zero");
        Real {
            mant: div_round(&(a << bits), &b),
            bits,
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Real {
            mant: &self.mant * n,
            bits: self.bits,
        }
    }

    pub fn div_int(&self, n: i64) -> Self {
        Real {
            mant: div_round(&self.mant, &BigInt::from(n)),
            bits: self.bits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn cmp_val(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b, _) = self.unify(other);
        a.cmp(&b)
    }

    /// Nearest integer and the absolute distance to it.
    pub fn round_with_residual(&self) -> (BigInt, Real) {
        let half = BigInt::from(1) << (self.bits - 1);
        let n: BigInt = (&self.mant + half) >> self.bits;
        let resid = Real {
            mant: &self.mant - (&n << self.bits),
            bits: self.bits,
        };
        (n, resid.abs())
    }

    /// Approximate conversion to f64 (for diagnostics and thresholds).
    pub fn to_f64(&self) -> f64 {
        let nbits = self.mant.bits();
        if nbits <= 1000 {
            return self.mant.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.bits as i32);
        }
        let shift = nbits - 53;
        let top = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // round-half-up quotient: floor((2a + b) / 2b), valid for either sign of a
    let (a, b) = if b.is_negative() {
        (-a, -b)
    } else {
        (a.clone(), b.clone())
    };
    num_integer::Integer::div_floor(&(&a * 2 + &b), &(&b * 2))
}

/// pi via Machin's formula, 16 atan(1/5) - 4 atan(1/239).
pub fn pi(bits: u64) -> Real {
    let wb = bits + GUARD;
    let a = atan_inv(5, wb);
    let b = atan_inv(239, wb);
    a.mul_int(16).sub(&b.mul_int(4)).with_bits(bits)
}

/// atan(1/x) for integer x >= 2 by the alternating Taylor series.
fn atan_inv(x: i64, bits: u64) -> Real {
    let one = BigInt::from(1) << bits;
    let x2 = BigInt::from(x) * x;
    let mut term: BigInt = &one / x; // x / x^(2k+1) terms
    let mut sum = term.clone();
    let mut k = 1i64;
    while !term.is_zero() {
        term = &term / &x2;
        if term.is_zero() {
            break;
        }
        let piece = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= piece;
        } else {
            sum += piece;
        }
        k += 1;
    }
    Real { mant: sum, bits }
}

/// Square root of a nonnegative real.
pub fn sqrt(x: &Real) -> Real {
    assert!(!x.is_negative(), "sqrt of negative real");
    let bits = x.bits;
    let shifted: BigInt = &x.mant << bits;
    Real {
        mant: shifted.sqrt(),
        bits,
    }
}

/// Square root of a nonnegative integer to the given precision.
pub fn sqrt_int(n: i64, bits: u64) -> Real {
    assert!(n >= 0);
    sqrt(&Real::from_int(n, bits))
}

/// Real exponential by halving until the argument is small, Taylor, and
/// repeated squaring.
pub fn exp(x: &Real) -> Real {
    let bits = x.bits;
    let wb = bits + GUARD;
    let mut y = x.with_bits(wb);
    // halve until |y| < 1/4
    let quarter = Real {
        mant: BigInt::from(1) << (wb - 2),
        bits: wb,
    };
    let mut k = 0u32;
    while y.abs().cmp_val(&quarter) == std::cmp::Ordering::Greater {
        y = Real {
            mant: &y.mant >> 1,
            bits: wb,
        };
        k += 1;
        assert!(k < 64, "exponential argument out of range");
    }
    // Taylor for exp(y)
    let one = Real::from_int(1, wb);
    let mut sum = one.clone();
    let mut term = one;
    let mut n = 1i64;
    while !term.mant.is_zero() {
        term = term.mul(&y).div_int(n);
        sum = sum.add(&term);
        n += 1;
    }
    for _ in 0..k {
        sum = sum.mul(&sum);
    }
    sum.with_bits(bits)
}

/// Simultaneous cosine and sine, with range reduction modulo 2 pi.
pub fn cos_sin(x: &Real) -> (Real, Real) {
    let bits = x.bits;
    let wb = bits + GUARD;
    let mut y = x.with_bits(wb);
    // reduce modulo 2 pi
    let two_pi = pi(wb).mul_int(2);
    let q: BigInt = {
        let (a, b, _) = y.unify(&two_pi);
        div_round(&a, &b)
    };
    if !q.is_zero() {
        y = y.sub(&Real {
            mant: &two_pi.mant * &q,
            bits: wb,
        });
    }
    // halve until |y| < 1/4, then double-angle back up
    let quarter = Real {
        mant: BigInt::from(1) << (wb - 2),
        bits: wb,
    };
    let mut k = 0u32;
    while y.abs().cmp_val(&quarter) == std::cmp::Ordering::Greater {
        y = Real {
            mant: div_round(&y.mant, &BigInt::from(2)),
            bits: wb,
        };
        k += 1;
        assert!(k < 64, "trig argument out of range");
    }
    let one = Real::from_int(1, wb);
    let y2 = y.mul(&y);
    // cos
    let mut cos = one.clone();
    let mut term = one.clone();
    let mut n = 1i64;
    while !term.mant.is_zero() {
        term = term.mul(&y2).div_int((2 * n - 1) * 2 * n).neg();
        cos = cos.add(&term);
        n += 1;
    }
    // sin
    let mut sin = y.clone();
    let mut term = y.clone();
    let mut n = 1i64;
    while !term.mant.is_zero() {
        term = term.mul(&y2).div_int(2 * n * (2 * n + 1)).neg();
        sin = sin.add(&term);
        n += 1;
    }
    for _ in 0..k {
        let c2 = cos.mul(&cos).mul_int(2).sub(&Real::from_int(1, wb));
        let s2 = sin.mul(&cos).mul_int(2);
        cos = c2;
        sin = s2;
    }
    (cos.with_bits(bits), sin.with_bits(bits))
}

/// Complex number over [`Real`].
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u64) -> Self {
        Complex {
            re: Real::zero(bits),
            im: Real::zero(bits),
        }
    }

    pub fn from_real(re: Real) -> Self {
        let bits = re.bits();
        Complex {
            re,
            im: Real::zero(bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Complex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Complex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, r: &Real) -> Self {
        Complex {
            re: self.re.mul(r),
            im: self.im.mul(r),
        }
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        Complex {
            re: self.re.div(&n),
            im: self.im.neg().div(&n),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Integer power (negative exponents via the inverse).
    pub fn powi(&self, k: i64) -> Self {
        let bits = self.re.bits();
        if k == 0 {
            return Complex::from_real(Real::from_int(1, bits));
        }
        let (mut base, mut e) = if k < 0 {
            (self.inv(), (-k) as u64)
        } else {
            (self.clone(), k as u64)
        };
        let mut acc: Option<Complex> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }
}

/// Bits of precision needed to hold roughly `digits` decimal digits.
pub fn digits_to_bits(digits: u64) -> u64 {
    // log2(10) < 3.33
    digits * 10 / 3 + 8
}
