//! Exact truncated Laurent q-series arithmetic.
//!
//! A [`FracQSeries`] is a truncated Laurent series in `q` whose exponents are
//! integers divided by a fixed denominator `expdenom` and whose coefficients
//! are exact rationals. Terms with exponent `>= prec` are *unknown*, not
//! zero; every operation computes the correct precision of its result so
//! that no coefficient is ever silently wrong.

mod forms;

pub use forms::{
    big_j, delta, eisenstein, eta, eta_quotient, euler_product, jfun, rankin_cohen, sigma,
    standard_form, theta, theta1, StandardForm,
};

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Sentinel for "exact to all orders" (constants). Saturating arithmetic
/// keeps it stable under denominator lifts and valuation shifts.
const INF_PREC: i64 = i64::MAX / 4;

/// Truncated Laurent series in q with exact rational coefficients and
/// exponents in (1/expdenom)Z.
#[derive(Clone, PartialEq, Eq)]
pub struct FracQSeries {
    /// All exponents are `key / expdenom`.
    expdenom: i64,
    /// Nonzero coefficients, keyed by exponent numerator.
    coeffs: BTreeMap<i64, BigRational>,
    /// Terms with exponent >= prec_num / expdenom are unknown.
    prec_num: i64,
}

fn sat(p: i64) -> i64 {
    p.min(INF_PREC)
}

impl FracQSeries {
    /// Zero series with the given exponent denominator and precision.
    pub fn zero(expdenom: i64, prec_num: i64) -> Self {
        assert!(expdenom >= 1);
        FracQSeries {
            expdenom,
            coeffs: BTreeMap::new(),
            prec_num: sat(prec_num),
        }
    }

    /// Zero series with integral exponents, known below `prec`.
    pub fn zero_integral(prec: i64) -> Self {
        Self::zero(1, prec)
    }

    /// Exact constant (known to all orders).
    pub fn constant(c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        FracQSeries {
            expdenom: 1,
            coeffs,
            prec_num: INF_PREC,
        }
    }

    /// Exact constant from an integer.
    pub fn constant_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// The exact monomial `c * q^(num/den)`.
    pub fn monomial(c: BigRational, num: i64, den: i64) -> Self {
        assert!(den >= 1);
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(num, c);
        }
        FracQSeries {
            expdenom: den,
            coeffs,
            prec_num: INF_PREC,
        }
    }

    /// Build from integral-exponent terms, known below `prec`.
    pub fn from_terms(terms: &[(i64, i64)], prec: i64) -> Self {
        let mut s = Self::zero(1, prec);
        for &(e, c) in terms {
            if c != 0 && e < prec {
                s.coeffs.insert(e, BigRational::from_integer(BigInt::from(c)));
            }
        }
        s
    }

    pub fn expdenom(&self) -> i64 {
        self.expdenom
    }

    /// Precision cutoff as an exact rational.
    pub fn prec(&self) -> Ratio<i64> {
        Ratio::new(self.prec_num, self.expdenom)
    }

    pub fn prec_num(&self) -> i64 {
        self.prec_num
    }

    pub fn is_exact(&self) -> bool {
        self.prec_num >= INF_PREC
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Iterate over (exponent numerator, coefficient) pairs in order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Leading (lowest-exponent) term, if any.
    pub fn leading(&self) -> Option<(i64, &BigRational)> {
        self.coeffs.iter().next().map(|(&k, v)| (k, v))
    }

    /// Valuation numerator: exponent numerator of the leading term, or the
    /// precision cutoff for the zero series.
    fn val_num(&self) -> i64 {
        self.leading().map(|(k, _)| k).unwrap_or(self.prec_num)
    }

    /// Coefficient of `q^(num/den)`; zero if the term is absent but below
    /// the precision cutoff. Panics if the exponent is past the cutoff.
    pub fn coeff(&self, num: i64, den: i64) -> BigRational {
        assert!(den >= 1);
        // exponent must be representable with our denominator
        if (num * self.expdenom) % den != 0 {
            assert!(
                Ratio::new(num, den) < self.prec(),
                "coefficient query past precision"
            );
            return BigRational::zero();
        }
        let key = num * self.expdenom / den;
        assert!(key < self.prec_num, "coefficient query past precision");
        self.coeffs.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the integral exponent `e`.
    pub fn coeff_int(&self, e: i64) -> BigRational {
        self.coeff(e, 1)
    }

    /// Integer coefficient of `q^e`; error if non-integral.
    pub fn coeff_as_int(&self, e: i64) -> Result<BigInt> {
        let c = self.coeff(e, 1);
        if c.is_integer() {
            Ok(c.to_integer())
        } else {
            Err(Error::Invalid(format!("coefficient at q^{e} is not an integer: {c}")))
        }
    }

    /// Lift to a larger exponent denominator (a multiple of the current one).
    pub fn lift(&self, new_denom: i64) -> Self {
        assert!(new_denom % self.expdenom == 0);
        let f = new_denom / self.expdenom;
        if f == 1 {
            return self.clone();
        }
        FracQSeries {
            expdenom: new_denom,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k * f, v.clone())).collect(),
            prec_num: if self.is_exact() { INF_PREC } else { self.prec_num * f },
        }
    }

    /// Reduce the exponent denominator when all keys allow it.
    pub fn normalize_denom(&self) -> Self {
        let mut g = self.expdenom;
        for &k in self.coeffs.keys() {
            g = num_integer::gcd(g, k);
            if g == 1 {
                return self.clone();
            }
        }
        if g == 1 {
            return self.clone();
        }
        FracQSeries {
            expdenom: self.expdenom / g,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k / g, v.clone())).collect(),
            prec_num: if self.is_exact() {
                INF_PREC
            } else {
                // floor keeps the claim conservative when g does not divide it
                self.prec_num.div_euclid(g)
            },
        }
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let d = num_integer::lcm(self.expdenom, other.expdenom);
        (self.lift(d), other.lift(d))
    }

    /// Drop terms at or above the given cutoff and set the precision to it.
    pub fn truncate(&self, prec_num: i64, prec_den: i64) -> Self {
        let d = num_integer::lcm(self.expdenom, prec_den);
        let mut s = self.lift(d);
        let cut = prec_num * (d / prec_den);
        s.coeffs.retain(|&k, _| k < cut);
        s.prec_num = s.prec_num.min(cut);
        s
    }

    pub fn neg(&self) -> Self {
        FracQSeries {
            expdenom: self.expdenom,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, -v.clone())).collect(),
            prec_num: self.prec_num,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.unify(other);
        a.prec_num = a.prec_num.min(b.prec_num);
        for (k, v) in b.coeffs {
            if k >= a.prec_num {
                continue;
            }
            let e = a.coeffs.entry(k).or_insert_with(BigRational::zero);
            *e += v;
            if e.is_zero() {
                a.coeffs.remove(&k);
            }
        }
        a.coeffs.retain(|&k, _| k < a.prec_num);
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return FracQSeries::zero(self.expdenom, self.prec_num);
        }
        FracQSeries {
            expdenom: self.expdenom,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
            prec_num: self.prec_num,
        }
    }

    pub fn scalar_mul_int(&self, c: i64) -> Self {
        self.scalar_mul(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        // result known below min(Pa + val(b), Pb + val(a))
        let prec = sat(sat(a.prec_num.saturating_add(b.val_num()))
            .min(sat(b.prec_num.saturating_add(a.val_num()))));
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (&ka, va) in &a.coeffs {
            for (&kb, vb) in &b.coeffs {
                let k = ka + kb;
                if k >= prec {
                    break; // kb ascending
                }
                let e = coeffs.entry(k).or_insert_with(BigRational::zero);
                *e += va * vb;
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        FracQSeries {
            expdenom: a.expdenom,
            coeffs,
            prec_num: prec,
        }
    }

    /// Laurent division by leading-term peeling.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify(other);
        let (vb, lead_b) = match b.leading() {
            Some((k, c)) => (k, c.clone()),
            None => return Err(Error::NonInvertibleSeries),
        };
        // q = a / b known below min(Pa - vb, Pb - 2 vb + val(a))
        let prec = sat(sat(a.prec_num.saturating_sub(vb)).min(sat(
            b.prec_num.saturating_sub(2 * vb).saturating_add(a.val_num()),
        )));
        let mut quot: BTreeMap<i64, BigRational> = BTreeMap::new();
        let mut rem = a.coeffs;
        while let Some((&kr, _)) = rem.iter().next() {
            let ke = kr - vb;
            if ke >= prec {
                break;
            }
            let t = rem.remove(&kr).unwrap() / &lead_b;
            for (&kb, cb) in &b.coeffs {
                if kb == vb {
                    continue;
                }
                let k = kb - vb + kr;
                let e = rem.entry(k).or_insert_with(BigRational::zero);
                *e -= &t * cb;
                if e.is_zero() {
                    rem.remove(&k);
                }
            }
            quot.insert(ke, t);
        }
        quot.retain(|_, v| !v.is_zero());
        Ok(FracQSeries {
            expdenom: a.expdenom,
            coeffs: quot,
            prec_num: prec,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        FracQSeries::constant(BigRational::one()).div(self)
    }

    /// Integer power (negative powers invert first).
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(FracQSeries::constant(BigRational::one()));
        }
        let (mut base, mut e) = if k < 0 {
            (self.inv()?, (-k) as u64)
        } else {
            (self.clone(), k as u64)
        };
        let mut acc: Option<FracQSeries> = None;
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
        Ok(acc.unwrap())
    }

    /// Substitute q -> q^(1/n) (tau -> tau/n): reinterpret integral
    /// exponents over denominator n.
    pub fn substitute_root(&self, n: i64) -> Result<Self> {
        assert!(n >= 1);
        if self.expdenom != 1 {
            return Err(Error::NonIntegralExponents);
        }
        Ok(FracQSeries {
            expdenom: n,
            coeffs: self.coeffs.clone(),
            prec_num: self.prec_num,
        })
    }

    /// Substitute q -> q^m (tau -> m tau).
    pub fn scale(&self, m: i64) -> Self {
        assert!(m >= 1);
        if m == 1 {
            return self.clone();
        }
        FracQSeries {
            expdenom: self.expdenom,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k * m, v.clone())).collect(),
            prec_num: if self.is_exact() { INF_PREC } else { self.prec_num * m },
        }
    }

    /// U_m: keep exponents divisible by m and divide them by m.
    pub fn u_operator(&self, m: i64) -> Result<Self> {
        assert!(m >= 1);
        if self.expdenom != 1 {
            return Err(Error::NonIntegralExponents);
        }
        let prec = if self.is_exact() {
            INF_PREC
        } else {
            // a(mn) known for mn < P, i.e. n <= ceil(P/m) - 1, so prec = ceil(P/m)
            num_integer::Integer::div_ceil(&self.prec_num, &m)
        };
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&k, _)| k.rem_euclid(m) == 0)
            .map(|(&k, v)| (k.div_euclid(m), v.clone()))
            .collect();
        Ok(FracQSeries {
            expdenom: 1,
            coeffs,
            prec_num: prec,
        })
    }

    /// theta_q = q d/dq: multiply each coefficient by its exponent.
    pub fn q_derivative(&self) -> Self {
        let d = BigInt::from(self.expdenom);
        FracQSeries {
            expdenom: self.expdenom,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| k != 0)
                .map(|(&k, v)| (k, v * BigRational::new(BigInt::from(k), d.clone())))
                .collect(),
            prec_num: self.prec_num,
        }
    }

    /// exp of a series with strictly positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if self.val_num() <= 0 && !self.is_zero_series() {
            return Err(Error::Invalid("exp needs positive valuation".into()));
        }
        let mut acc = FracQSeries::constant(BigRational::one()).truncate_like(self);
        let mut term = acc.clone();
        let mut k = BigInt::one();
        loop {
            // truncate back to the input precision: the product rule would
            // otherwise let the precision grow with the term's valuation
            // and the loop would never drain
            term = term.mul(self).truncate_like(self);
            if term.is_zero_series() {
                break;
            }
            term = term.scalar_mul(&BigRational::new(BigInt::one(), k.clone()));
            acc = acc.add(&term);
            k += 1;
        }
        Ok(acc)
    }

    fn truncate_like(&self, other: &Self) -> Self {
        self.truncate(other.prec_num, other.expdenom)
    }

    /// Serializable snapshot.
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            expdenom: self.expdenom,
            prec_num: self.prec_num,
            prec_den: self.expdenom,
            terms: self
                .coeffs
                .iter()
                .map(|(&k, v)| (k, v.numer().to_string(), v.denom().to_string()))
                .collect(),
        }
    }
}

/// JSON form of a series: exponent numerators with exact rational
/// coefficients as decimal strings, sorted by exponent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub expdenom: i64,
    pub prec_num: i64,
    pub prec_den: i64,
    pub terms: Vec<(i64, String, String)>,
}

impl fmt::Debug for FracQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms().take(12) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.expdenom == 1 {
                write!(f, "{c}*q^{k}")?;
            } else {
                write!(f, "{c}*q^({k}/{})", self.expdenom)?;
            }
        }
        if self.num_terms() > 12 {
            write!(f, " + ...")?;
        } else if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}/{}))", self.prec_num, self.expdenom)
    }
}

/// Generalized binomial coefficient with rational upper argument.
pub fn binom_rational(x: &BigRational, k: u32) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..k {
        num *= x - BigRational::from_integer(BigInt::from(i));
        num /= BigRational::from_integer(BigInt::from(i + 1));
    }
    num
}

/// Binomial coefficient with (possibly huge, possibly negative) integer
/// upper argument.
pub fn binom_bigint(n: &BigInt, k: u32) -> BigRational {
    binom_rational(&BigRational::from_integer(n.clone()), k)
}
