//! Numerical singular moduli and exact consequences: traces t(d) and
//! Tr_m(d), Hilbert class polynomials, the Lambda_d series, Faber
//! polynomials, and the modular polynomials Psi_n for n in {2, 3}.

use crate::bigfloat::{self, Complex, Real};
use crate::qseries::{jfun, FracQSeries};
use crate::quadforms::{enumerate_classes, hurwitz, is_discriminant, Qform};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// A CM point (-b + i sqrt(d)) / (2a), the root of a x^2 + b x + c with
/// b^2 - 4ac = -d.
#[derive(Clone, Copy, Debug)]
pub struct CmPoint {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl CmPoint {
    pub fn of_form(f: &Qform) -> CmPoint {
        CmPoint {
            a: f.a,
            b: f.b,
            d: f.d(),
        }
    }
}

/// Evaluate a q-expansion at a CM point: sum of coeff * q^(k/N) with
/// q^(1/N) = exp(2 pi i tau / N). The caller is responsible for the series
/// being long enough for the tail to be negligible at the working
/// precision; for reduced forms (a <= sqrt(d/3)) the terms decay like
/// exp(-pi sqrt(3) n) and the default precisions below are ample.
pub fn eval_series(f: &FracQSeries, tau: &CmPoint, bits: u64) -> Complex {
    let nn = f.expdenom();
    let pi = bigfloat::pi(bits);
    let sqrt_d = bigfloat::sqrt_int(tau.d, bits);
    let denom = tau.a * nn;
    // |q^(1/N)| and its phase
    let modulus = bigfloat::exp(&pi.mul(&sqrt_d).div_int(denom).neg());
    let angle = pi.mul_int(-tau.b).div_int(denom);
    let (c, s) = bigfloat::cos_sin(&angle);
    let base = Complex::new(c, s).scale(&modulus);
    let mut acc = Complex::zero(bits);
    let mut cur: Option<(i64, Complex)> = None;
    for (k, coeff) in f.terms() {
        let pw = match cur {
            Some((k0, ref p)) => p.mul(&base.powi(k - k0)),
            None => base.powi(k),
        };
        let cr = Real::from_ratio(coeff, bits);
        acc = acc.add(&pw.scale(&cr));
        cur = Some((k, pw));
    }
    acc
}

/// Result of an integer-rounded trace computation.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub d: i64,
    pub value: BigInt,
    pub residual: f64,
    pub digits: u64,
}

/// Working decimal digits for discriminant d: the dominant singular
/// modulus has about pi sqrt(d) / ln 10 digits.
pub fn working_digits(d: i64) -> u64 {
    (std::f64::consts::PI * (d as f64).sqrt() / std::f64::consts::LN_10).ceil() as u64 + 20
}

fn series_prec(_d: i64) -> i64 {
    // reduced CM points have Im tau >= sqrt(3)/2, so the n-th term is below
    // exp(4 pi sqrt(n) - pi sqrt(3) n); by n = 80 the tail is < 1e-100
    80
}

/// The trace of singular moduli t(d) = sum over classes of (j - 744)/w.
/// Conventions t(-1) = -1 and t(0) = 2 are stored explicitly.
pub fn trace(d: i64) -> Result<TraceRecord> {
    if d == -1 {
        return Ok(TraceRecord {
            d,
            value: BigInt::from(-1),
            residual: 0.0,
            digits: 0,
        });
    }
    if d == 0 {
        return Ok(TraceRecord {
            d,
            value: BigInt::from(2),
            residual: 0.0,
            digits: 0,
        });
    }
    let classes = enumerate_classes(d)?;
    let jpoly = [BigInt::from(-744), BigInt::one()]; // j - 744
    with_escalation(d, |digits| {
        let (v, resid) = weighted_polynomial_sum(&classes, &jpoly, digits)?;
        Ok(TraceRecord {
            d,
            value: v,
            residual: resid,
            digits,
        })
    })
}

/// Evaluate sum over classes of P(j(alpha_Q))/w_Q for an integer
/// polynomial P, returning the rounded integer and residual.
fn weighted_polynomial_sum(
    classes: &[Qform],
    poly: &[BigInt],
    digits: u64,
) -> Result<(BigInt, f64)> {
    let bits = bigfloat::digits_to_bits(digits);
    let d = classes[0].d();
    let prec = series_prec(d);
    let j = jfun(prec);
    // accumulate the weighted sum over the denominator lcm 6
    let mut acc6 = Complex::zero(bits);
    for f in classes {
        let w = f.weight() as i64;
        let jv = eval_series(&j, &CmPoint::of_form(f), bits);
        let pv = eval_poly(poly, &jv, bits);
        acc6 = acc6.add(&pv.scale(&Real::from_ratio(
            &BigRational::new(BigInt::from(6 / w), BigInt::one()),
            bits,
        )));
    }
    let re6 = acc6.re.div_int(6);
    let im = acc6.im.div_int(6).abs().to_f64().abs();
    let (n, resid) = re6.round_with_residual();
    let r = resid.to_f64().abs().max(im);
    if r >= 1e-6 {
        return Err(Error::PrecisionFailure {
            d,
            residual: r,
        });
    }
    Ok((n, r))
}

fn eval_poly(poly: &[BigInt], x: &Complex, bits: u64) -> Complex {
    let mut acc = Complex::zero(bits);
    for c in poly.iter().rev() {
        acc = acc.mul(x).add(&Complex::from_real(Real::from_bigint(c, bits)));
    }
    acc
}

/// Retry with doubled precision up to three times on residual failure.
fn with_escalation<T>(d: i64, mut f: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let mut digits = working_digits(d);
    let mut last = None;
    for _ in 0..4 {
        match f(digits) {
            Ok(v) => return Ok(v),
            Err(e @ Error::PrecisionFailure { .. }) => {
                last = Some(e);
                digits *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Hilbert class polynomial: the integer polynomial part together with the
/// fractional factor that absorbs the weight 2 and 3 classes.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub enum FracTag {
    None,
    /// an extra factor X^(1/3) (present exactly when d/3 is a square)
    CubeRootX,
    /// an extra factor (X - 1728)^(1/2) (present exactly when d is a square)
    SqrtXminus1728,
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertPoly {
    pub d: i64,
    /// monic integer polynomial, ascending powers of X
    pub coeffs: Vec<BigInt>,
    pub frac_tag: FracTag,
}

impl HilbertPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let s = (n as f64).sqrt().round() as i64;
    s * s == n
}

/// Compute the Hilbert class polynomial of discriminant -d, with the
/// weight-1 classes contributing linear factors and the special classes
/// (j = 0 or 1728) tracked as fractional tags.
pub fn hilbert_poly(d: i64) -> Result<HilbertPoly> {
    if !is_discriminant(d) {
        return Err(Error::NoFormsOfDiscriminant(d));
    }
    let classes: Vec<Qform> = enumerate_classes(d)?
        .into_iter()
        .filter(|f| f.weight() == 1)
        .collect();
    let frac_tag = if d % 3 == 0 && is_square(d / 3) {
        FracTag::CubeRootX
    } else if is_square(d) {
        FracTag::SqrtXminus1728
    } else {
        FracTag::None
    };
    if classes.is_empty() {
        return Ok(HilbertPoly {
            d,
            coeffs: vec![BigInt::one()],
            frac_tag,
        });
    }
    with_escalation(d, |digits| {
        // more digits than a single modulus: coefficients multiply up
        let bits = bigfloat::digits_to_bits(digits * classes.len() as u64 + 16);
        let j = jfun(series_prec(d));
        let mut poly = vec![Complex::from_real(Real::from_int(1, bits))];
        for f in &classes {
            let root = eval_series(&j, &CmPoint::of_form(f), bits);
            // multiply by (X - root)
            let mut next = vec![Complex::zero(bits); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(&root));
            }
            poly = next;
        }
        let mut coeffs = Vec::with_capacity(poly.len());
        for c in &poly {
            let (n, resid) = c.re.round_with_residual();
            let r = resid.to_f64().abs().max(c.im.to_f64().abs());
            if r >= 1e-6 {
                return Err(Error::PrecisionFailure { d, residual: r });
            }
            coeffs.push(n);
        }
        Ok(HilbertPoly {
            d,
            coeffs,
            frac_tag: frac_tag.clone(),
        })
    })
}

/// Faber polynomial J_m: the unique polynomial in j with expansion
/// q^(-m) + O(q). Returns (series, coefficients of powers of j).
pub fn faber(m: i64, prec: i64) -> (FracQSeries, Vec<BigInt>) {
    assert!(m >= 0);
    if m == 0 {
        return (
            FracQSeries::constant_int(1).truncate(prec, 1),
            vec![BigInt::one()],
        );
    }
    let p = prec.max(2);
    let j = jfun(p + m);
    let mut jpow = vec![FracQSeries::constant_int(1).truncate(p + m, 1)];
    for k in 1..=m {
        let nxt = jpow[(k - 1) as usize].mul(&j);
        jpow.push(nxt);
    }
    let mut cur = jpow[m as usize].clone();
    let mut coeffs = vec![BigInt::zero(); m as usize + 1];
    coeffs[m as usize] = BigInt::one();
    for e in (0..m).rev() {
        let c = cur.coeff(-e, 1);
        debug_assert!(c.is_integer());
        if !c.is_zero() {
            cur = cur.sub(&jpow[e as usize].scalar_mul(&c));
            coeffs[e as usize] = -c.to_integer();
        }
    }
    (cur.truncate(prec, 1), coeffs)
}

/// Generalized trace Tr_m(d) = sum over classes of J_m(alpha_Q)/w_Q.
pub fn generalized_trace(m: i64, d: i64) -> Result<BigInt> {
    assert!(m >= 1);
    let classes = enumerate_classes(d)?;
    let (_, mut poly) = faber(m, 2);
    // evaluate the Faber polynomial shifted to j: it is stored in powers
    // of j already
    if poly.is_empty() {
        poly.push(BigInt::zero());
    }
    with_escalation(d, |digits| {
        let (v, _) = weighted_polynomial_sum(&classes, &poly, digits * m as u64 + 8)?;
        Ok(v)
    })
}

/// Exact expansion of Lambda_d = -theta_q log H_d(j(tau))
/// = H(d) + t(d) q + O(q^2).
pub fn lambda_series(d: i64, prec: i64) -> Result<FracQSeries> {
    let hp = hilbert_poly(d)?;
    let deg = hp.degree() as i64;
    let wp = prec + deg + 3;
    let j = jfun(wp);
    let mut acc = FracQSeries::zero_integral(prec);
    if deg > 0 {
        // P(j(tau)) and its logarithmic q-derivative
        let mut pj = FracQSeries::zero_integral(wp);
        let mut jp = FracQSeries::constant_int(1).truncate(wp, 1);
        for c in &hp.coeffs {
            pj = pj.add(&jp.scalar_mul(&BigRational::from_integer(c.clone())));
            jp = jp.mul(&j);
        }
        acc = acc.sub(&pj.q_derivative().div(&pj)?.truncate(prec, 1));
    }
    match hp.frac_tag {
        FracTag::None => {}
        FracTag::CubeRootX => {
            let t = j.q_derivative().div(&j)?.truncate(prec, 1);
            acc = acc.sub(&t.scalar_mul(&BigRational::new(BigInt::one(), BigInt::from(3))));
        }
        FracTag::SqrtXminus1728 => {
            let sh = j.sub(&FracQSeries::constant_int(1728).truncate(wp, 1));
            let t = sh.q_derivative().div(&sh)?.truncate(prec, 1);
            acc = acc.sub(&t.scalar_mul(&BigRational::new(BigInt::one(), BigInt::from(2))));
        }
    }
    Ok(acc)
}

/// Sanity cross-check used in tests: the constant term of lambda_series
/// equals the Hurwitz class number.
pub fn lambda_constant_is_hurwitz(d: i64) -> Result<bool> {
    Ok(lambda_series(d, 2)?.coeff_int(0) == hurwitz(d)?)
}

/// Bivariate integer polynomial Psi_n(X, Y): coeffs[r][s] multiplies
/// X^r Y^s, where Y stands for j(tau).
#[derive(Debug, Clone, Serialize)]
pub struct ModularPolynomial {
    pub n: i64,
    pub coeffs: Vec<Vec<BigInt>>,
}

impl ModularPolynomial {
    pub fn degree_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The one-variable polynomial Psi_n(X, X), ascending coefficients.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let dx = self.coeffs.len();
        let dy = self.coeffs.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut out = vec![BigInt::zero(); dx + dy - 1];
        for (r, row) in self.coeffs.iter().enumerate() {
            for (s, c) in row.iter().enumerate() {
                out[r + s] += c;
            }
        }
        while out.len() > 1 && out.last().unwrap().is_zero() {
            out.pop();
        }
        out
    }

    /// Evaluate Psi_n(f, g) on q-series arguments.
    pub fn eval(&self, f: &FracQSeries, g: &FracQSeries) -> FracQSeries {
        let mut fp = vec![FracQSeries::constant_int(1)];
        for r in 1..self.coeffs.len() {
            let nx = fp[r - 1].mul(f);
            fp.push(nx);
        }
        let mut acc: Option<FracQSeries> = None;
        for (r, row) in self.coeffs.iter().enumerate() {
            let mut gacc: Option<FracQSeries> = None;
            let mut gp = FracQSeries::constant_int(1);
            for c in row.iter() {
                if !c.is_zero() {
                    let t = gp.scalar_mul(&BigRational::from_integer(c.clone()));
                    gacc = Some(match gacc {
                        None => t,
                        Some(a) => a.add(&t),
                    });
                }
                gp = gp.mul(g);
            }
            if let Some(ga) = gacc {
                let t = ga.mul(&fp[r]);
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.add(&t),
                });
            }
        }
        acc.unwrap()
    }
}

/// The n-th modular polynomial for prime n in {2, 3}, built from the
/// product over upper-triangular representatives of determinant n. The
/// Galois-stable symmetric functions of j((tau + b)/n) are rational, so
/// only power sums over integral-exponent slices are needed.
pub fn modular_polynomial(n: i64, prec: i64) -> Result<ModularPolynomial> {
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDegree(n));
    }
    // pole orders reach sigma1+(n); keep a comfortable margin
    let wp = prec + 6 * n;
    let j = jfun(wp * n);
    // g = j(tau/n): same coefficients with exponents divided by n
    let g = j.substitute_root(n)?;
    // power sums p_k = sum over b of j((tau+b)/n)^k = n * (integral part of g^k)
    let mut gk = FracQSeries::constant_int(1);
    let mut psums: Vec<FracQSeries> = Vec::new();
    for _ in 0..n {
        gk = gk.mul(&g);
        psums.push(integral_part(&gk).scalar_mul_int(n));
    }
    // Newton's identities: e1 = p1, k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    let mut elem: Vec<FracQSeries> = vec![FracQSeries::constant_int(1)];
    for k in 1..=n as usize {
        let mut s = FracQSeries::zero_integral(wp);
        for i in 1..=k {
            let t = elem[k - i].mul(&psums[i - 1]);
            s = if i % 2 == 1 { s.add(&t) } else { s.sub(&t) };
        }
        elem.push(s.scalar_mul(&BigRational::new(BigInt::one(), BigInt::from(k as i64))));
    }
    // prod_b (X - f_b) = sum_k (-1)^k e_k X^(n-k); multiply by (X - j(n tau))
    let jn = jfun(wp).scale(n);
    let deg = n as usize + 1;
    let mut xcoef: Vec<FracQSeries> = vec![FracQSeries::zero_integral(wp); deg + 1];
    for k in 0..=n as usize {
        let mut e = elem[k].clone();
        if k % 2 == 1 {
            e = e.neg();
        }
        let r = n as usize - k;
        // (X - jn) * e X^r
        xcoef[r + 1] = xcoef[r + 1].add(&e);
        xcoef[r] = xcoef[r].sub(&e.mul(&jn));
    }
    // express each X-coefficient as an integer polynomial in j
    let mut jpow = vec![FracQSeries::constant_int(1).truncate(wp, 1)];
    let jser = jfun(wp);
    for k in 1..=deg {
        let nx = jpow[k - 1].mul(&jser);
        jpow.push(nx);
    }
    let mut rows = Vec::with_capacity(deg + 1);
    for a in &xcoef {
        let mut cur = a.truncate(wp.min(a.prec_num()), 1);
        let mut row = vec![BigInt::zero(); deg + 1];
        let mut e = -cur.leading().map(|(k, _)| k).unwrap_or(0);
        while e >= 0 {
            let c = cur.coeff(-e, 1);
            if !c.is_zero() {
                if !c.is_integer() || e as usize > deg {
                    return Err(Error::Invalid(format!(
                        "modular polynomial reduction failed at pole order {e}"
                    )));
                }
                row[e as usize] = c.to_integer();
                cur = cur.sub(&jpow[e as usize].scalar_mul(&c));
            }
            e -= 1;
        }
        // remainder must vanish identically
        for (k, c) in cur.terms() {
            if k < prec && !c.is_zero() {
                return Err(Error::Invalid(format!(
                    "modular polynomial remainder nonzero at q^{k}"
                )));
            }
        }
        rows.push(row);
    }
    Ok(ModularPolynomial { n, coeffs: rows })
}

/// Keep only the terms with integral exponent (numerator divisible by the
/// exponent denominator), returned as an integral-exponent series.
fn integral_part(f: &FracQSeries) -> FracQSeries {
    let d = f.expdenom();
    let pn = f.prec_num();
    let mut out = FracQSeries::zero_integral(num_integer::Integer::div_ceil(&pn, &d));
    let cut = out.prec_num();
    for (k, c) in f.terms() {
        if k % d == 0 && k / d < cut {
            out = out.add(&FracQSeries::monomial(c.clone(), k / d, 1).truncate(cut, 1));
        }
    }
    out
}

/// JSON payload for a trace query.
#[derive(Debug, Clone, Serialize)]
pub struct TraceJson {
    pub d: i64,
    pub trace: String,
    pub residual: f64,
    pub digits: u64,
    pub classes: Vec<(i64, i64, i64, u32)>,
}

pub fn trace_json(d: i64) -> Result<TraceJson> {
    let t = trace(d)?;
    let classes = if d > 0 {
        enumerate_classes(d)?
            .into_iter()
            .map(|f| (f.a, f.b, f.c, f.weight()))
            .collect()
    } else {
        Vec::new()
    };
    Ok(TraceJson {
        d,
        trace: t.value.to_string(),
        residual: t.residual,
        digits: t.digits,
        classes,
    })
}
