//! Infinite-product structure of modular forms: the multiplicative lift of
//! weight-1/2 plus-space forms, exact exponent extraction from a series,
//! and product-formula verification for the full modular group and for
//! Fricke groups of prime level.

use std::collections::BTreeMap;

use crate::bigfloat::{self, Complex, Real};
use crate::error::Error;
use crate::fricke::{hauptmodul_eta, weighted_level_classes};
use crate::plusspace::{basis_f, basis_f_levelp, HalfIntForm};
use crate::qseries::{jfun, FracQSeries};
use crate::quadforms::hurwitz;
use crate::traces::{eval_series, hilbert_poly, lambda_series, working_digits, CmPoint, FracTag};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// A truncated product form q^-h prod_{n >= 1} (1 - q^n)^(e(n)) of a
/// series, with integer exponents e(n) for n < prec.
#[derive(Debug, Clone)]
pub struct ProductExpansion {
    pub h: BigRational,
    pub exponents: BTreeMap<i64, BigInt>,
    pub prec: i64,
    /// weight of the lifted form when produced by psi_lift (its constant
    /// coefficient), zero otherwise
    pub weight: BigInt,
}

impl ProductExpansion {
    /// Expand the product back into a q-series to precision prec.
    pub fn expand(&self, prec: i64) -> Result<FracQSeries> {
        let mut log = FracQSeries::zero_integral(prec);
        for (&n, e) in &self.exponents {
            if n >= prec {
                break;
            }
            // e(n) log(1 - q^n) = -e(n) sum_k q^(nk)/k
            let mut k = 1i64;
            let mut acc = FracQSeries::zero_integral(prec);
            while n * k < prec {
                acc = acc.add(
                    &FracQSeries::monomial(
                        BigRational::new(-e.clone(), BigInt::from(k)),
                        n * k,
                        1,
                    )
                    .truncate(prec, 1),
                );
                k += 1;
            }
            log = log.add(&acc);
        }
        let unit = log.exp()?;
        let den = self.h.denom().to_i64().ok_or(Error::InsufficientPrecision)?;
        let num = self.h.numer().to_i64().ok_or(Error::InsufficientPrecision)?;
        Ok(unit
            .lift(den)
            .mul(&FracQSeries::monomial(BigRational::one(), -num, den)))
    }
}

/// Logarithm of a series with constant term 1 (integer exponents).
fn log_unit(s: &FracQSeries) -> Result<FracQSeries> {
    if !s.coeff_int(0).is_one() {
        return Err(Error::Invalid("logarithm needs constant term 1".into()));
    }
    let prec = s.prec_num();
    let ratio = s.q_derivative().div(s)?; // theta_q log s = theta_q(s)/s
    let mut out = FracQSeries::zero_integral(prec);
    for (e, c) in ratio.terms() {
        let n = e;
        if n >= 1 && n < prec {
            out = out.add(
                &FracQSeries::monomial(c / BigRational::from_integer(BigInt::from(n)), n, 1)
                    .truncate(prec, 1),
            );
        }
    }
    Ok(out)
}

/// Extract the exponents of a series as a product q^-h prod (1-q^n)^e(n),
/// requiring unit leading coefficient and integer e(n).
pub fn product_exponents(series: &FracQSeries, prec: i64) -> Result<ProductExpansion> {
    if series.expdenom() != 1 {
        return Err(Error::NonIntegralExponents);
    }
    let Some((val, lead)) = series.leading() else {
        return Err(Error::Invalid("zero series has no product form".into()));
    };
    if !lead.is_one() {
        return Err(Error::Invalid("leading coefficient must be 1".into()));
    }
    let unit = series.mul(&FracQSeries::monomial(BigRational::one(), -val, 1));
    let prec = prec.min(unit.prec_num());
    let log = log_unit(&unit)?;
    // -N [q^N] log = sum_{n | N} n e(n)
    let mut exponents: BTreeMap<i64, BigInt> = BTreeMap::new();
    for n in 1..prec {
        let mut c = -log.coeff_int(n) * BigRational::from_integer(BigInt::from(n));
        for d in 1..n {
            if n % d == 0 {
                if let Some(e) = exponents.get(&d) {
                    c -= BigRational::from_integer(BigInt::from(d) * e);
                }
            }
        }
        let en = c / BigRational::from_integer(BigInt::from(n));
        if !en.is_integer() {
            return Err(Error::NonIntegralExponent(n));
        }
        let en = en.to_integer();
        if !en.is_zero() {
            exponents.insert(n, en);
        }
    }
    Ok(ProductExpansion {
        h: BigRational::from_integer(BigInt::from(-val)),
        exponents,
        prec,
        weight: BigInt::zero(),
    })
}

/// The Hurwitz class number generating series -1/12 + sum H(d) q^d.
pub fn xi_series(prec: i64) -> FracQSeries {
    let mut out = FracQSeries::monomial(BigRational::new(BigInt::from(-1), BigInt::from(12)), 0, 1)
        .truncate(prec, 1);
    for d in 1..prec {
        let h = hurwitz(d).unwrap_or_else(|_| BigRational::zero());
        if !h.is_zero() {
            out = out.add(&FracQSeries::monomial(h, d, 1).truncate(prec, 1));
        }
    }
    out
}

/// Multiplicative lift of a weight-1/2 plus-space form at level 4:
/// exponents e(n) are the coefficients at square exponents n^2, and the
/// leading power h is the constant term of f times the class-number
/// series.
pub fn psi_lift(f: &HalfIntForm, prec: i64) -> Result<ProductExpansion> {
    if f.weight2 != 1 || f.level != 4 {
        return Err(Error::NotLevelForm);
    }
    if prec * prec >= f.prec() {
        return Err(Error::InsufficientPrecision);
    }
    // constant term of f * xi: sum over e <= 0 of c(e) H(-e)
    let mut h = BigRational::new(-f.coeff(0), BigInt::from(12));
    let mut e = -1i64;
    while e >= -f.index {
        let c = f.coeff(e);
        if !c.is_zero() {
            h += BigRational::from_integer(c) * hurwitz(-e)?;
        }
        e -= 1;
    }
    let mut exponents = BTreeMap::new();
    for n in 1..=prec {
        let a = f.coeff(n * n);
        if !a.is_zero() {
            exponents.insert(n, a);
        }
    }
    Ok(ProductExpansion {
        h,
        exponents,
        prec: prec + 1,
        weight: f.coeff(0),
    })
}

/// Outcome of a product-formula verification.
#[derive(Debug, Clone, Serialize)]
pub struct ProductCheck {
    pub d: i64,
    pub ok: bool,
    pub first_mismatch: Option<i64>,
    /// leading exponent of the class polynomial side (weighted class count)
    pub h: String,
    /// power both sides were raised to (least common multiple of weights)
    pub lcm: i64,
    pub prec: i64,
    pub exponents: Vec<(i64, String)>,
}

fn compare_units(
    left: &FracQSeries,
    right: &FracQSeries,
    prec: i64,
) -> (bool, Option<i64>) {
    for n in 0..prec {
        if left.coeff_int(n) != right.coeff_int(n) {
            return (false, Some(n));
        }
    }
    (true, None)
}

/// Expand q^(L h) * series into a unit and compare with the exponent
/// product prod (1-q^n)^(L e(n)) to precision prec.
fn check_product_side(
    series_with_val: &FracQSeries,
    exponents: &[(i64, BigInt)],
    lcm: i64,
    prec: i64,
) -> Result<(bool, Option<i64>)> {
    let val = series_with_val
        .leading()
        .map(|(e, _)| e)
        .ok_or(Error::InsufficientPrecision)?;
    let unit = series_with_val.mul(&FracQSeries::monomial(BigRational::one(), -val, 1));
    if !unit.coeff_int(0).is_one() {
        return Err(Error::Invalid("class polynomial side is not monic".into()));
    }
    let mut log = FracQSeries::zero_integral(prec);
    for (n, e) in exponents {
        let mut k = 1i64;
        while n * k < prec {
            log = log.add(
                &FracQSeries::monomial(
                    BigRational::new(-e * BigInt::from(lcm), BigInt::from(k)),
                    n * k,
                    1,
                )
                .truncate(prec, 1),
            );
            k += 1;
        }
    }
    let product_unit = log.exp()?;
    Ok(compare_units(&unit.truncate(prec, 1), &product_unit, prec))
}

/// Verify the level-1 product formula: the class polynomial of
/// discriminant -d composed with the j-series equals
/// q^(-H(d)) prod (1-q^n)^(A(n^2, d)), with fractional tags handled by
/// raising both sides to the least common multiple of the class weights.
pub fn verify_product_level1(d: i64, prec: i64) -> Result<ProductCheck> {
    let f = basis_f(d, prec * prec + 1)?;
    verify_product_level1_from(&f, prec)
}

/// As verify_product_level1, with the basis element supplied by the
/// caller (so a batch over many d can share one basis computation).
pub fn verify_product_level1_from(f: &HalfIntForm, prec: i64) -> Result<ProductCheck> {
    let d = f.index;
    if prec * prec >= f.prec() {
        return Err(Error::InsufficientPrecision);
    }
    let hp = hilbert_poly(d)?;
    let lcm: i64 = match hp.frac_tag {
        FracTag::None => 1,
        FracTag::CubeRootX => 3,
        FracTag::SqrtXminus1728 => 2,
    };
    let exponents: Vec<(i64, BigInt)> = (1..=prec)
        .map(|n| (n, f.coeff(n * n)))
        .filter(|(_, e)| !e.is_zero())
        .collect();
    let h = hurwitz(d)?;
    let deg = hp.coeffs.len() as i64 - 1;
    let wp = prec + lcm * (deg + 2) + 4;
    let j = jfun(wp);
    let mut pj = FracQSeries::zero_integral(wp);
    let mut jp = FracQSeries::constant_int(1).truncate(wp, 1);
    for c in &hp.coeffs {
        pj = pj.add(&jp.scalar_mul(&BigRational::from_integer(c.clone())));
        jp = jp.mul(&j);
    }
    let mut left = pj.pow(lcm)?;
    match hp.frac_tag {
        FracTag::None => {}
        FracTag::CubeRootX => left = left.mul(&j),
        FracTag::SqrtXminus1728 => {
            left = left.mul(&j.sub(&FracQSeries::constant_int(1728).truncate(wp, 1)))
        }
    }
    // the leading power must be the weighted class count
    let lh = &h * BigRational::from_integer(BigInt::from(lcm));
    if !lh.is_integer()
        || left.leading().map(|(e, _)| e) != lh.to_integer().to_i64().map(|v| -v)
    {
        return Err(Error::Invalid(format!(
            "leading exponent does not match the class count H({d}) = {h}"
        )));
    }
    let (ok, first_mismatch) = check_product_side(&left, &exponents, lcm, prec)?;
    Ok(ProductCheck {
        d,
        ok,
        first_mismatch,
        h: h.to_string(),
        lcm,
        prec,
        exponents: exponents
            .iter()
            .map(|(n, e)| (*n, e.to_string()))
            .collect(),
    })
}

/// Verify the Fricke product formula at prime level p: the weighted class
/// polynomial in the hauptmodul equals
/// q^(-H_p(d)) prod (1-q^n)^(A*(n^2, d)) with A*(n^2, d) doubled when
/// p | n, exponents read from the level-4p weight-1/2 basis.
pub fn verify_product_fricke(p: i64, d: i64, prec: i64) -> Result<ProductCheck> {
    let f = basis_f_levelp(p, d, prec * prec + 1)?;
    verify_product_fricke_from(p, &f, prec)
}

/// As verify_product_fricke, with the level-4p basis element supplied by
/// the caller.
pub fn verify_product_fricke_from(p: i64, f: &HalfIntForm, prec: i64) -> Result<ProductCheck> {
    let d = f.index;
    if prec * prec >= f.prec() {
        return Err(Error::InsufficientPrecision);
    }
    let classes = weighted_level_classes(d, p)?;
    let lcm = classes
        .iter()
        .map(|c| c.weight as i64)
        .fold(1i64, num_integer::lcm);
    let h: BigRational = classes
        .iter()
        .map(|c| BigRational::new(BigInt::one(), BigInt::from(c.weight)))
        .sum();
    let degree: i64 = classes.iter().map(|c| lcm / c.weight as i64).sum();
    let wp = prec + degree + 4;
    let spec = hauptmodul_eta(p, wp.max(60 * p))?;
    // numeric class polynomial with multiplicities lcm / w
    let mut digits = working_digits(d) * (degree as u64 + 1) + 16;
    let mut coeffs: Option<Vec<BigInt>> = None;
    let mut residual = 0.0f64;
    for _ in 0..4 {
        let bits = bigfloat::digits_to_bits(digits);
        let mut poly = vec![Complex::from_real(Real::from_int(1, bits))];
        for wc in &classes {
            let root = eval_series(&spec.series, &CmPoint::of_form(&wc.form), bits);
            for _ in 0..(lcm / wc.weight as i64) {
                let mut next = vec![Complex::zero(bits); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(c);
                    next[i] = next[i].sub(&c.mul(&root));
                }
                poly = next;
            }
        }
        let mut out = Vec::with_capacity(poly.len());
        let mut worst = 0.0f64;
        for c in &poly {
            let (n, resid) = c.re.round_with_residual();
            worst = worst
                .max(resid.to_f64().abs())
                .max(c.im.to_f64().abs());
            out.push(n);
        }
        residual = worst;
        if worst < 1e-6 {
            coeffs = Some(out);
            break;
        }
        digits *= 2;
    }
    let coeffs = coeffs.ok_or(Error::PrecisionFailure { d, residual })?;
    // exponents with the doubling rule at p | n
    let exponents: Vec<(i64, BigInt)> = (1..=prec)
        .map(|n| {
            let mut e = f.coeff(n * n);
            if n % p == 0 {
                e *= 2;
            }
            (n, e)
        })
        .filter(|(_, e)| !e.is_zero())
        .collect();
    // compose the polynomial with the hauptmodul series
    let mut pj = FracQSeries::zero_integral(wp);
    let mut jp = FracQSeries::constant_int(1).truncate(wp, 1);
    for c in &coeffs {
        pj = pj.add(&jp.scalar_mul(&BigRational::from_integer(c.clone())));
        jp = jp.mul(&spec.series.truncate(wp, 1));
    }
    let lh = &h * BigRational::from_integer(BigInt::from(lcm));
    if !lh.is_integer()
        || pj.leading().map(|(e, _)| e) != lh.to_integer().to_i64().map(|v| -v)
    {
        return Err(Error::Invalid(format!(
            "leading exponent does not match the weighted class count H_{p}({d}) = {h}"
        )));
    }
    let (ok, first_mismatch) = check_product_side(&pj, &exponents, lcm, prec)?;
    Ok(ProductCheck {
        d,
        ok,
        first_mismatch,
        h: h.to_string(),
        lcm,
        prec,
        exponents: exponents
            .iter()
            .map(|(n, e)| (*n, e.to_string()))
            .collect(),
    })
}

fn moebius(n: i64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Consistency of exponents with traces at level 1:
/// u A(u^2, d) = sum over v | u of mu(u/v) Tr_v(d), with the traces read
/// exactly from the logarithmic-derivative series of the class polynomial.
pub fn trace_exponent_check(u_max: i64, d_max: i64) -> Result<Vec<(i64, i64, bool)>> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        if !crate::quadforms::is_discriminant(d) {
            continue;
        }
        let f = basis_f(d, u_max * u_max + 1)?;
        let lam = lambda_series(d, u_max + 1)?;
        for u in 1..=u_max {
            let lhs = BigInt::from(u) * f.coeff(u * u);
            let mut rhs = BigRational::zero();
            for v in 1..=u {
                if u % v == 0 {
                    rhs += lam.coeff_int(v)
                        * BigRational::from_integer(BigInt::from(moebius(u / v)));
                }
            }
            out.push((d, u, BigRational::from_integer(lhs) == rhs));
        }
    }
    Ok(out)
}
