//! Builders for the classical q-expansions used throughout the crate.

use super::{binom_rational, FracQSeries};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

/// Sum of the m-th powers of the positive divisors of n.
pub fn sigma(m: u32, n: i64) -> BigInt {
    assert!(n >= 1);
    let mut s = BigInt::zero();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(m);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(m);
            }
        }
        d += 1;
    }
    s
}

/// Normalized Eisenstein series E_k for k in {4, 6, 8, 10, 12}, to the
/// given precision.
pub fn eisenstein(k: i64, prec: i64) -> Result<FracQSeries> {
    let c = match k {
        4 => BigRational::from_integer(BigInt::from(240)),
        6 => BigRational::from_integer(BigInt::from(-504)),
        8 => BigRational::from_integer(BigInt::from(480)),
        10 => BigRational::from_integer(BigInt::from(-264)),
        12 => BigRational::new(BigInt::from(65520), BigInt::from(691)),
        _ => return Err(Error::WeightNotInTable(k)),
    };
    let mut s = FracQSeries::zero_integral(prec);
    s = s.add(&FracQSeries::constant(BigRational::one()).truncate(prec, 1));
    let mut sum = s;
    for n in 1..prec {
        let a = &c * BigRational::from_integer(sigma((k - 1) as u32, n));
        sum = sum.add(&FracQSeries::monomial(a, n, 1).truncate(prec, 1));
    }
    Ok(sum)
}

/// Euler's product prod_{n>=1} (1 - q^n), via the pentagonal number theorem.
pub fn euler_product(prec: i64) -> FracQSeries {
    let mut s = FracQSeries::zero_integral(prec);
    let mut k = 0i64;
    loop {
        let mut hit = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if e < prec {
                hit = true;
                let c = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                s = s.add(&FracQSeries::from_terms(&[(e, c)], prec));
            }
            if kk == 0 {
                break;
            }
        }
        if !hit {
            break;
        }
        k += 1;
    }
    s
}

/// Dedekind eta, with exponents in (1/24)Z, known below q^prec.
pub fn eta(prec: i64) -> FracQSeries {
    euler_product(prec).lift(24).mul(&FracQSeries::monomial(
        BigRational::one(),
        1,
        24,
    ))
}

/// The discriminant form Delta = eta^24 = q prod (1-q^n)^24.
pub fn delta(prec: i64) -> FracQSeries {
    euler_product(prec)
        .pow(24)
        .unwrap()
        .mul(&FracQSeries::monomial(BigRational::one(), 1, 1))
}

/// Klein's j-function, j = E4^3 / Delta.
pub fn jfun(prec: i64) -> FracQSeries {
    let e4 = eisenstein(4, prec + 2).unwrap();
    let d = delta(prec + 2);
    e4.pow(3).unwrap().div(&d).unwrap().truncate(prec, 1)
}

/// The normalized hauptmodul J = j - 744.
pub fn big_j(prec: i64) -> FracQSeries {
    jfun(prec).sub(&FracQSeries::constant_int(744).truncate(prec, 1))
}

/// Jacobi theta, theta(tau) = 1 + 2 sum q^(n^2).
pub fn theta(prec: i64) -> FracQSeries {
    let mut terms = vec![(0i64, 1i64)];
    let mut n = 1i64;
    while n * n < prec {
        terms.push((n * n, 2));
        n += 1;
    }
    FracQSeries::from_terms(&terms, prec)
}

/// Twisted theta, theta1(tau) = 1 + 2 sum (-1)^n q^(n^2).
pub fn theta1(prec: i64) -> FracQSeries {
    let mut terms = vec![(0i64, 1i64)];
    let mut n = 1i64;
    while n * n < prec {
        terms.push((n * n, if n % 2 == 0 { 2 } else { -2 }));
        n += 1;
    }
    FracQSeries::from_terms(&terms, prec)
}

/// Eta quotient prod_i eta(m_i tau)^{r_i}, known at least below q^prec.
pub fn eta_quotient(factors: &[(i64, i64)], prec: i64) -> FracQSeries {
    // generous shared base precision: the negative-exponent factors eat
    // precision proportionally to scale * |power|
    let slack: i64 = factors
        .iter()
        .filter(|&&(_, r)| r < 0)
        .map(|&(m, r)| m * (-r))
        .sum();
    let base = prec + slack + 2;
    let mut acc = FracQSeries::constant(BigRational::one());
    for &(m, r) in factors {
        assert!(m >= 1 && r != 0);
        let f = eta(base).scale(m).pow(r).unwrap();
        acc = acc.mul(&f);
    }
    if acc.prec() > num_rational::Ratio::new(prec, 1) {
        acc = acc.truncate(prec, 1);
    }
    acc.normalize_denom()
}

/// Names of the built-in standard expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardForm {
    Eta,
    Delta,
    J,
    BigJ,
    Theta,
    Theta1,
}

impl std::str::FromStr for StandardForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eta" => StandardForm::Eta,
            "delta" => StandardForm::Delta,
            "j" => StandardForm::J,
            "J" | "bigJ" => StandardForm::BigJ,
            "theta" => StandardForm::Theta,
            "theta1" => StandardForm::Theta1,
            _ => return Err(Error::Invalid(format!("unknown form: {s}"))),
        })
    }
}

/// Build one of the standard expansions to the given precision.
pub fn standard_form(which: StandardForm, prec: i64) -> FracQSeries {
    match which {
        StandardForm::Eta => eta(prec),
        StandardForm::Delta => delta(prec),
        StandardForm::J => jfun(prec),
        StandardForm::BigJ => big_j(prec),
        StandardForm::Theta => theta(prec),
        StandardForm::Theta1 => theta1(prec),
    }
}

/// Rankin-Cohen bracket [f, g]_n for (possibly half-integral) weights.
///
/// [f,g]_n = sum_{r=0}^{n} (-1)^r C(kf+n-1, n-r) C(kg+n-1, r)
///           theta_q^r(f) theta_q^{n-r}(g)
pub fn rankin_cohen(
    f: &FracQSeries,
    kf: BigRational,
    g: &FracQSeries,
    kg: BigRational,
    n: u32,
) -> Result<FracQSeries> {
    if n > 4 {
        return Err(Error::BracketOrderUnsupported(n));
    }
    let mut df = vec![f.clone()];
    let mut dg = vec![g.clone()];
    for i in 0..n as usize {
        df.push(df[i].q_derivative());
        dg.push(dg[i].q_derivative());
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let one = BigRational::one();
    let mut acc: Option<FracQSeries> = None;
    for r in 0..=n {
        let c1 = binom_rational(&(&kf + &nn - &one), n - r);
        let c2 = binom_rational(&(&kg + &nn - &one), r);
        let mut c = c1 * c2;
        if r % 2 == 1 {
            c = -c;
        }
        let term = df[r as usize]
            .mul(&dg[(n - r) as usize])
            .scalar_mul(&c);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.unwrap())
}
