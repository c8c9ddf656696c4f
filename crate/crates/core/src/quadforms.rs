//! Positive definite integral binary quadratic forms.
//!
//! A form `[a, b, c]` represents `a x^2 + b x y + c y^2` with discriminant
//! `b^2 - 4ac = -d < 0`. We enumerate reduced representatives of the
//! classes of discriminant `-d`, compute Hurwitz-Kronecker class numbers
//! (imprimitive classes included) and the level-p representatives used for
//! Fricke group traces.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A positive definite binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Qform {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Qform {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = b * b - 4 * a * c;
        if a <= 0 || disc >= 0 {
            return Err(Error::NotPositiveDefinite(a, b, c));
        }
        Ok(Qform { a, b, c })
    }

    /// Positive discriminant d with b^2 - 4ac = -d.
    pub fn d(&self) -> i64 {
        4 * self.a * self.c - self.b * self.b
    }

    pub fn is_primitive(&self) -> bool {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c) == 1
    }

    pub fn content(&self) -> i64 {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c)
    }

    /// Reduced: |b| <= a <= c, with b >= 0 when |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let Qform { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() < a && a < c))
    }

    /// Act by a unimodular matrix: Q'(x, y) = Q(px + qy, rx + sy).
    pub fn transform(&self, p: i64, q: i64, r: i64, s: i64) -> Qform {
        debug_assert_eq!(p * s - q * r, 1);
        let Qform { a, b, c } = *self;
        let a2 = a * p * p + b * p * r + c * r * r;
        let b2 = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let c2 = a * q * q + b * q * s + c * s * s;
        Qform { a: a2, b: b2, c: c2 }
    }

    /// Gauss reduction to the canonical representative of the class.
    pub fn reduce(&self) -> Qform {
        let mut f = *self;
        loop {
            // translate b into (-a, a]
            if f.b > f.a || f.b <= -f.a {
                // b -> b - 2ka with k = round(b / 2a)
                let k = num_integer::Integer::div_floor(&(f.b + f.a), &(2 * f.a));
                f = f.transform(1, -k, 0, 1);
            }
            if f.a > f.c {
                f = f.transform(0, -1, 1, 0); // swap a and c, negate b
                continue;
            }
            break;
        }
        // boundary normalization
        if f.b < 0 && (f.a == f.c || f.b == -f.a) {
            f.b = -f.b;
        }
        f
    }

    /// Stabilizer order in PSL2(Z): 3 for the class of [a,a,a], 2 for
    /// [a,0,a], 1 otherwise.
    pub fn weight(&self) -> u32 {
        let r = self.reduce();
        if r.a == r.b && r.b == r.c {
            3
        } else if r.b == 0 && r.a == r.c {
            2
        } else {
            1
        }
    }
}

/// True when -d is a valid discriminant, i.e. d > 0 and d = 0 or 3 mod 4.
pub fn is_discriminant(d: i64) -> bool {
    d > 0 && matches!(d % 4, 0 | 3)
}

/// All reduced forms of discriminant -d, imprimitive ones included,
/// ordered lexicographically.
pub fn enumerate_classes(d: i64) -> Result<Vec<Qform>> {
    if !is_discriminant(d) {
        return Err(Error::NoFormsOfDiscriminant(d));
    }
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 0 } else { 1 };
    while b * b <= d / 3 {
        let n = (d + b * b) / 4;
        let mut a = b.max(1);
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                out.push(Qform { a, b, c });
                if b > 0 && a > b && c > a {
                    out.push(Qform { a, b: -b, c });
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

/// Class number h(-d): number of primitive classes.
pub fn classnum(d: i64) -> Result<usize> {
    Ok(enumerate_classes(d)?
        .iter()
        .filter(|f| f.is_primitive())
        .count())
}

/// Hurwitz-Kronecker class number H(d). H(0) = -1/12, H(d) = 0 for
/// d = 1, 2 mod 4, and otherwise the weighted class count including
/// imprimitive classes.
pub fn hurwitz(d: i64) -> Result<BigRational> {
    if d < 0 {
        return Err(Error::NoFormsOfDiscriminant(d));
    }
    if d == 0 {
        return Ok(BigRational::new(BigInt::from(-1), BigInt::from(12)));
    }
    if !is_discriminant(d) {
        return Ok(BigRational::zero());
    }
    let mut h = BigRational::zero();
    for f in enumerate_classes(d)? {
        h += BigRational::new(BigInt::from(1), BigInt::from(f.weight()));
    }
    Ok(h)
}

/// One side-by-side evaluation of the two Hurwitz class number identities
/// at a given n.
#[derive(Debug, Clone, Serialize)]
pub struct ClassnumIdentity {
    pub n: i64,
    pub weighted_lhs: BigRational,
    pub weighted_rhs: BigRational,
    pub plain_lhs: BigRational,
    pub plain_rhs: BigRational,
}

impl ClassnumIdentity {
    pub fn holds(&self) -> bool {
        self.weighted_lhs == self.weighted_rhs && self.plain_lhs == self.plain_rhs
    }
}

/// Evaluate, for each 1 <= n <= nmax, the identities
///
///   sum_{r^2 < 4n} (n - r^2) H(4n - r^2)
///       = sum_{d|n} min(d, n/d)^3 - [n square] n/2
///   sum_{r^2 < 4n} H(4n - r^2)
///       = sum_{d|n} max(d, n/d) + [n square] 1/6
///
/// with r ranging over all integers.
pub fn classnum_identities(nmax: i64) -> Result<Vec<ClassnumIdentity>> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        let mut weighted = BigRational::zero();
        let mut plain = BigRational::zero();
        let mut r = 0i64;
        while r * r < 4 * n {
            let h = hurwitz(4 * n - r * r)?;
            let mult = if r == 0 { 1 } else { 2 };
            weighted += BigRational::from_integer(BigInt::from(mult * (n - r * r))) * &h;
            plain += BigRational::from_integer(BigInt::from(mult)) * &h;
            r += 1;
        }
        let mut min_cubes = BigInt::zero();
        let mut max_sum = BigInt::zero();
        for dd in 1..=n {
            if n % dd == 0 {
                let e = n / dd;
                min_cubes += BigInt::from(dd.min(e)).pow(3);
                max_sum += BigInt::from(dd.max(e));
            }
        }
        let sq = {
            let s = (n as f64).sqrt().round() as i64;
            s * s == n
        };
        let mut weighted_rhs = BigRational::from_integer(min_cubes);
        let mut plain_rhs = BigRational::from_integer(max_sum);
        if sq {
            weighted_rhs -= BigRational::new(BigInt::from(n), BigInt::from(2));
            plain_rhs += BigRational::new(BigInt::from(1), BigInt::from(6));
        }
        out.push(ClassnumIdentity {
            n,
            weighted_lhs: weighted,
            weighted_rhs,
            plain_lhs: plain,
            plain_rhs,
        });
    }
    Ok(out)
}

/// Find a form in the class of `f` whose leading coefficient is divisible
/// by p (searching small primitive vectors (r, t) with Q(r, t) = 0 mod p
/// and completing to a unimodular matrix).
pub fn transport_to_level(f: &Qform, p: i64) -> Result<Qform> {
    let bound = 2 * p + 2;
    for r in -bound..=bound {
        for t in -bound..=bound {
            if num_integer::gcd(r, t) != 1 {
                continue;
            }
            let val = f.a * r * r + f.b * r * t + f.c * t * t;
            if val.rem_euclid(p) != 0 {
                continue;
            }
            // complete (r, t) to a matrix (r q; t s) with rs - qt = 1
            let g = extended_gcd(r, t);
            let (s, q) = (g.1, -g.2);
            debug_assert_eq!(r * s - q * t, 1);
            return Ok(f.transform(r, q, t, s));
        }
    }
    Err(Error::RepresentativeSearchFailed {
        d: f.d(),
        p,
        beta: 0,
    })
}

/// (g, x, y) with a x + b y = g = gcd(a, b).
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Whether -d is a square modulo 4p, i.e. forms of discriminant -d with
/// p | a exist.
pub fn is_admissible(d: i64, p: i64) -> bool {
    (0..2 * p).any(|b| (b * b + d).rem_euclid(4 * p) == 0)
}

/// Representatives of the classes of discriminant -d with p | a, one per
/// SL2(Z)-class, used for traces on the Fricke group of level p.
pub fn level_classes(d: i64, p: i64) -> Result<Vec<Qform>> {
    if !is_admissible(d, p) {
        return Err(Error::NotAdmissible { d, p });
    }
    let classes = enumerate_classes(d)?;
    classes.iter().map(|f| transport_to_level(f, p)).collect()
}

/// Serializable list of class representatives with stabilizer weights.
#[derive(Debug, Clone, Serialize)]
pub struct ClassListJson {
    pub disc: i64,
    pub reps: Vec<(i64, i64, i64, u32)>,
}

pub fn classes_json(d: i64) -> Result<ClassListJson> {
    Ok(ClassListJson {
        disc: -d,
        reps: enumerate_classes(d)?
            .into_iter()
            .map(|f| (f.a, f.b, f.c, f.weight()))
            .collect(),
    })
}
