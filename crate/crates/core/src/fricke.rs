//! Hauptmoduln for the Fricke groups of prime level: exact eta-quotient
//! expansions for p in {2, 3, 5, 7, 13}, Rademacher-sum coefficient
//! estimates for general Monster primes, class traces, and the weight-0
//! Hecke action on q-expansions.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::qseries::{eta_quotient, FracQSeries};
use crate::quadforms::{enumerate_classes, is_admissible, is_discriminant, Qform};
use crate::traces::{eval_series, working_digits, CmPoint, TraceRecord};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Primes p with (p - 1) | 24, where the hauptmodul is an eta quotient.
pub const ETA_PRIMES: [i64; 5] = [2, 3, 5, 7, 13];

/// Monster primes: p such that the Fricke group of level p has genus zero.
pub const MONSTER_PRIMES: [i64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71];

/// A canonical hauptmodul q^-1 + 0 + O(q) for the Fricke group of level p.
#[derive(Debug, Clone)]
pub struct HauptmodulSpec {
    pub p: i64,
    pub method: &'static str,
    pub series: FracQSeries,
    /// the exact constant added to reach zero constant term
    pub additive_constant: BigRational,
}

/// Exact hauptmodul from the eta quotient
///   p^(a/2) (eta(p tau)/eta(tau))^a + (eta(tau)/eta(p tau))^a + a
/// with a = 24/(p - 1).
pub fn hauptmodul_eta(p: i64, prec: i64) -> Result<HauptmodulSpec> {
    if !ETA_PRIMES.contains(&p) {
        return Err(Error::EtaMethodUnavailable(p));
    }
    let a = 24 / (p - 1);
    let up = eta_quotient(&[(p, a), (1, -a)], prec + 2);
    let down = eta_quotient(&[(1, a), (p, -a)], prec + 2);
    let prefactor = BigRational::from_integer(BigInt::from(p).pow(a as u32 / 2));
    let sum = up.scalar_mul(&prefactor).add(&down).normalize_denom();
    let c0 = sum.coeff_int(0);
    let series = sum
        .sub(&FracQSeries::constant(c0.clone()).truncate(sum.prec_num(), 1))
        .truncate(prec, 1);
    let spec = HauptmodulSpec {
        p,
        method: "eta",
        series,
        additive_constant: -c0,
    };
    if !spec.is_canonical() {
        return Err(Error::NotCanonicalHauptmodul);
    }
    Ok(spec)
}

impl HauptmodulSpec {
    /// q^-1 leading coefficient 1 and zero constant term.
    pub fn is_canonical(&self) -> bool {
        self.series.coeff(-1, 1).is_one()
            && self.series.coeff_int(0).is_zero()
            && self.series.leading().map(|(e, _)| e) == Some(-1)
    }

    /// All coefficients integral (true for every eta-method hauptmodul).
    pub fn is_integral(&self) -> bool {
        self.series.terms().all(|(_, c)| c.is_integer())
    }
}

/// Kloosterman sum K(m, n, c) = sum over d mod c, gcd(d, c) = 1, of
/// e((m d + n dbar)/c), real by d <-> -d symmetry; compensated summation.
pub fn kloosterman(m: i64, n: i64, c: i64) -> f64 {
    assert!(c >= 1);
    if c == 1 {
        return 1.0;
    }
    let two_pi = std::f64::consts::TAU;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for d in 1..c {
        if num_integer::gcd(d, c) != 1 {
            continue;
        }
        let dbar = mod_inverse(d, c);
        let phase = ((m.rem_euclid(c) * d + n.rem_euclid(c) * dbar).rem_euclid(c)) as f64 / c as f64;
        let term = (two_pi * phase).cos();
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn mod_inverse(d: i64, c: i64) -> i64 {
    // extended Euclid; gcd(d, c) = 1 guaranteed by the caller
    let (mut r0, mut r1) = (c, d.rem_euclid(c));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(c)
}

/// Modified Bessel function I_1 by its power series
/// sum_k (x/2)^(2k+1) / (k! (k+1)!).
pub fn bessel_i1(x: f64) -> f64 {
    assert!(x >= 0.0);
    let half = x / 2.0;
    let mut term = half; // k = 0
    let mut sum = term;
    let mut k = 1.0f64;
    while term.abs() > 1e-18 * (1.0 + sum.abs()) {
        term *= half * half / (k * (k + 1.0));
        sum += term;
        k += 1.0;
    }
    sum
}

/// One Rademacher-sum coefficient estimate with truncation metadata.
#[derive(Debug, Clone, Serialize)]
pub struct RademacherResult {
    pub p: i64,
    pub nu: i64,
    pub estimate: f64,
    pub c_max: i64,
    pub d_max: i64,
    pub tail_estimate: f64,
}

/// Coefficient of q^nu in the Rademacher-sum hauptmodul for the Fricke
/// group of level p: the Gamma0(p) family over moduli c p plus the Fricke
/// family over moduli d coprime to p, each truncated with a tail estimate
/// from the fluctuation of the partial sums over the last decade.
pub fn rademacher_coeff(p: i64, nu: i64, c_max: i64, d_max: i64) -> RademacherResult {
    assert!(nu >= 1 && c_max >= 10 && d_max >= 10);
    let sqrt_nu = (nu as f64).sqrt();
    let sqrt_p = (p as f64).sqrt();
    let two_pi = std::f64::consts::TAU;
    let mut families = [0.0f64; 2];
    let mut tails = [0.0f64; 2];
    // Gamma0(p) family
    let mut partials = Vec::with_capacity(c_max as usize);
    let mut s = 0.0f64;
    for c in 1..=c_max {
        let modulus = c * p;
        let k = kloosterman(nu, -1, modulus);
        let arg = 2.0 * two_pi * sqrt_nu / modulus as f64;
        s += k * two_pi * bessel_i1(arg) / (c as f64 * sqrt_nu * p as f64);
        partials.push(s);
    }
    families[0] = s;
    tails[0] = fluctuation(&partials);
    // Fricke family
    let mut partials = Vec::with_capacity(d_max as usize);
    let mut s = 0.0f64;
    for d in 1..=d_max {
        if d % p == 0 {
            continue;
        }
        // the Fricke coset phase is e(b/d) with b = -(cp)^(-1) mod d, so the
        // second argument of the Kloosterman sum is -p^(-1) mod d, not -1
        let k = if d == 1 {
            1.0
        } else {
            kloosterman(nu, -mod_inverse(p, d), d)
        };
        let arg = 2.0 * two_pi * sqrt_nu / (d as f64 * sqrt_p);
        s += k * two_pi * bessel_i1(arg) / (d as f64 * (nu as f64 * p as f64).sqrt());
        partials.push(s);
    }
    families[1] = s;
    tails[1] = fluctuation(&partials);
    RademacherResult {
        p,
        nu,
        estimate: families[0] + families[1],
        c_max,
        d_max,
        tail_estimate: tails[0] + tails[1],
    }
}

/// Mean absolute deviation of the last decade of partial sums from the
/// final value.
fn fluctuation(partials: &[f64]) -> f64 {
    let n = partials.len();
    if n < 2 {
        return 0.0;
    }
    let last = partials[n - 1];
    let start = n - (n / 10).max(1);
    let window = &partials[start..];
    window.iter().map(|s| (s - last).abs()).sum::<f64>() / window.len() as f64
}

/// A class representative for the Fricke trace together with its
/// Gamma0(p)-stabilizer order.
#[derive(Debug, Clone, Serialize)]
pub struct WeightedClass {
    pub form: Qform,
    pub weight: u32,
}

/// Representatives of the Gamma0(p)-classes of forms of discriminant -d
/// with p | a and b = beta (mod 2p), one per SL2(Z)-class, each chosen
/// with the smallest leading coefficient for fast series evaluation.
pub fn weighted_level_classes(d: i64, p: i64) -> Result<Vec<WeightedClass>> {
    if !is_admissible(d, p) {
        return Err(Error::NotAdmissible { d, p });
    }
    let beta = (0..2 * p)
        .find(|b| (b * b + d).rem_euclid(4 * p) == 0)
        .expect("admissibility guarantees a root");
    let classes = enumerate_classes(d)?;
    let mut chosen: BTreeMap<(i64, i64, i64), Qform> = BTreeMap::new();
    let mut bound = p * (int_sqrt(d / 3) + 1);
    for _ in 0..8 {
        let mut a = p;
        while a <= bound {
            // translations keep b mod 2p (p | a), so b in (-a, a] is complete
            let mut b = beta - 2 * p * ((beta + a) / (2 * p) + 1);
            while b <= a {
                if b > -a && (b * b + d) % (4 * a) == 0 {
                    let c = (b * b + d) / (4 * a);
                    if c > 0 {
                        let f = Qform { a, b, c };
                        let key = f.reduce();
                        chosen
                            .entry((key.a, key.b, key.c))
                            .and_modify(|old| {
                                if f.a < old.a {
                                    *old = f;
                                }
                            })
                            .or_insert(f);
                    }
                }
                b += 2 * p;
            }
            a += p;
        }
        if chosen.len() == classes.len() {
            break;
        }
        bound *= 2;
    }
    if chosen.len() != classes.len() {
        return Err(Error::RepresentativeSearchFailed { d, p, beta });
    }
    Ok(classes
        .iter()
        .map(|cls| {
            let f = chosen[&(cls.a, cls.b, cls.c)];
            WeightedClass {
                form: f,
                weight: gamma0_weight(&f, p),
            }
        })
        .collect())
}

fn int_sqrt(n: i64) -> i64 {
    (n.max(0) as f64).sqrt() as i64
}

/// Order of the stabilizer of the class in Gamma0(p) (mod +-1): 3 when the
/// primitive part has discriminant -3 and its order-3 automorph lies in
/// Gamma0(p) (lower-left entry a0 divisible by p), 2 in the analogous
/// discriminant -4 case, else 1.
fn gamma0_weight(f: &Qform, p: i64) -> u32 {
    let k = f.content();
    let f0 = Qform {
        a: f.a / k,
        b: f.b / k,
        c: f.c / k,
    };
    match f0.d() {
        3 if f0.a % p == 0 => 3,
        4 if f0.a % p == 0 => 2,
        _ => 1,
    }
}

/// Trace of the canonical hauptmodul over the Fricke-group classes of
/// discriminant -d, with conventions t(-1) = -1 and t(0) = 2.
pub fn fricke_trace(p: i64, d: i64) -> Result<TraceRecord> {
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
    if !is_discriminant(d) {
        return Err(Error::NoFormsOfDiscriminant(-d));
    }
    let spec = hauptmodul_eta(p, series_prec(p))?;
    trace_of_series(&spec.series, p, d, 1)
}

fn series_prec(p: i64) -> i64 {
    60 * p
}

/// Weighted numeric trace of a weight-0 series over the level classes,
/// rounded to an integer with a residual check and precision escalation.
pub(crate) fn trace_of_series(
    series: &FracQSeries,
    p: i64,
    d: i64,
    poly_degree: i64,
) -> Result<TraceRecord> {
    let classes = weighted_level_classes(d, p)?;
    let mut digits = working_digits(d) * poly_degree.max(1) as u64;
    let mut last_residual = f64::INFINITY;
    for _ in 0..4 {
        let bits = crate::bigfloat::digits_to_bits(digits);
        // accumulate 6 * sum (values/w) exactly in weight space
        let mut total = crate::bigfloat::Complex::zero(bits);
        for wc in &classes {
            let alpha = CmPoint::of_form(&wc.form);
            let v = eval_series(series, &alpha, bits);
            let scaled = crate::bigfloat::Complex {
                re: v.re.mul_int(6 / wc.weight as i64),
                im: v.im.mul_int(6 / wc.weight as i64),
            };
            total = total.add(&scaled);
        }
        let re6 = total.re.clone();
        let (rounded, residual) = crate::bigfloat::Real::round_with_residual(&re6);
        let resid = residual.to_f64().abs().max(total.im.to_f64().abs());
        let (q, r) = num_integer::Integer::div_rem(&rounded, &BigInt::from(6));
        if resid < 1e-6 && r.is_zero() {
            return Ok(TraceRecord {
                d,
                value: q,
                residual: resid,
                digits,
            });
        }
        last_residual = resid;
        digits *= 2;
    }
    Err(Error::PrecisionFailure {
        d,
        residual: last_residual,
    })
}

/// Weight-0 Hecke action on a q-expansion with integer exponents:
/// coefficient n of T(m) f is sum over a d = m with a | n of d c(n d / a),
/// then the constant term is removed. When the input is a canonical
/// hauptmodul the result is asserted to be q^-m + O(q).
pub fn hecke_weight0(f: &FracQSeries, m: i64) -> Result<FracQSeries> {
    assert!(m >= 1);
    if f.expdenom() != 1 {
        return Err(Error::NonIntegralExponents);
    }
    let src_prec = f.prec_num();
    let prec = num_integer::Integer::div_ceil(&src_prec, &m);
    let lead = f.leading().map(|(e, _)| e).unwrap_or(0);
    let mut out = FracQSeries::zero_integral(prec);
    for n in (lead * m).min(lead)..prec {
        let mut c = BigRational::zero();
        for a in 1..=m {
            if m % a != 0 || n % a != 0 {
                continue;
            }
            let dd = m / a;
            let k = n / a * dd;
            if k < src_prec {
                c += f.coeff(k, 1) * BigRational::from_integer(BigInt::from(dd));
            }
        }
        if !c.is_zero() {
            out = out.add(&FracQSeries::monomial(c, n, 1).truncate(prec, 1));
        }
    }
    let c0 = out.coeff_int(0);
    let out = out.sub(&FracQSeries::constant(c0).truncate(prec, 1));
    let canonical_input = f.coeff(-1, 1).is_one() && f.coeff_int(0).is_zero();
    if canonical_input {
        let ok = out.coeff(-m, 1).is_one()
            && (-m + 1..0).all(|e| out.coeff(e, 1).is_zero());
        if !ok {
            return Err(Error::NotCanonicalHauptmodul);
        }
    }
    Ok(out)
}

/// The unique group-invariant form q^-m + O(q) attached to a canonical
/// hauptmodul: its Faber polynomial. This agrees with the naive weight-0
/// Hecke image whenever m is coprime to the level, but for m divisible by
/// the level the naive coset sum is not invariant under the Fricke
/// involution and the class trace must use this completion instead.
fn hauptmodul_faber(t: &FracQSeries, m: i64) -> FracQSeries {
    let prec = t.prec_num();
    let mut pows = vec![FracQSeries::constant_int(1).truncate(prec, 1)];
    for k in 1..=m {
        pows.push(pows[(k - 1) as usize].mul(t));
    }
    let mut cur = pows[m as usize].clone();
    for e in (0..m).rev() {
        let c = cur.coeff(-e, 1);
        if !c.is_zero() {
            cur = cur.sub(&pows[e as usize].scalar_mul(&c));
        }
    }
    cur
}

/// Generalized Fricke trace Tr_m(d): numerically as the class trace of
/// T(m) applied to the hauptmodul, checked against the exact weight-3/2
/// side -sum over u | m of 2^xi u B(u^2, d), with xi = 1 exactly when
/// p | u.
pub fn fricke_generalized_trace(p: i64, m: i64, d: i64) -> Result<BigInt> {
    if !(p == 2 || p == 3 || p == 5) {
        return Err(Error::Invalid(format!(
            "generalized Fricke traces need the index-p Jacobi solver, p = {p}"
        )));
    }
    let spec = hauptmodul_eta(p, series_prec(p) * m)?;
    let tm = if m % p == 0 {
        hauptmodul_faber(&spec.series, m)
    } else {
        hecke_weight0(&spec.series, m)?
    };
    let numeric = trace_of_series(&tm, p, d, m)?;
    // exact side from the Jacobi coefficients
    let mut exact = BigInt::zero();
    for u in 1..=m {
        if m % u != 0 {
            continue;
        }
        let prec_n = num_integer::Integer::div_ceil(&d.max(u * u), &(4 * p)) + p + 2;
        let phi = crate::jacobi::solve_phi_dp(u * u, p, prec_n)?;
        let g = crate::jacobi::to_plusspace(&phi)?;
        let xi = if u % p == 0 { 2 } else { 1 };
        exact += BigInt::from(xi * u) * g.coeff(d);
    }
    exact = -exact;
    if numeric.value != exact {
        return Err(Error::Invalid(format!(
            "generalized trace mismatch at p = {p}, m = {m}, d = {d}: numeric {} vs exact {}",
            numeric.value, exact
        )));
    }
    Ok(exact)
}

/// Numeric Fricke-involution consistency: the hauptmodul takes equal
/// values at tau and -1/(p tau), checked on a deterministic sample of CM
/// points (tau a root of [a, b, c] maps to a root of [c p^2, -b p, a]).
pub fn fricke_involution_check(p: i64, digits: u64) -> Result<bool> {
    let spec = hauptmodul_eta(p, series_prec(p))?;
    let bits = crate::bigfloat::digits_to_bits(digits);
    let samples = [
        Qform { a: 1, b: 0, c: 5 },
        Qform { a: 1, b: 1, c: 6 },
        Qform { a: 2, b: 1, c: 4 },
        Qform { a: 2, b: -1, c: 5 },
        Qform { a: 3, b: 2, c: 5 },
    ];
    for f in samples {
        let d = f.d();
        let tau = CmPoint { a: f.a, b: f.b, d };
        let wtau = CmPoint {
            a: f.c * p * p,
            b: -f.b * p,
            d: d * p * p,
        };
        let v1 = eval_series(&spec.series, &tau, bits);
        let v2 = eval_series(&spec.series, &wtau, bits);
        let diff = v1.sub(&v2);
        if diff.re.to_f64().abs() > 1e-6 || diff.im.to_f64().abs() > 1e-6 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Serializable hauptmodul output.
#[derive(Debug, Clone, Serialize)]
pub struct HauptmodulJson {
    pub p: i64,
    pub method: String,
    pub additive_constant: String,
    pub coeffs: Vec<(i64, String)>,
}

pub fn hauptmodul_json(spec: &HauptmodulSpec) -> HauptmodulJson {
    HauptmodulJson {
        p: spec.p,
        method: spec.method.to_string(),
        additive_constant: spec.additive_constant.to_string(),
        coeffs: spec.series.terms().map(|(e, c)| (e, c.to_string())).collect(),
    }
}
