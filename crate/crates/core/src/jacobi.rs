//! Weak Jacobi forms of even weight.
//!
//! A [`JacobiSeries`] stores the two-variable expansion
//! phi(tau, z) = sum c(n, r) q^n zeta^r as a finite family of zeta-slices,
//! each an exact q-series. The standard index-1 generators are produced
//! from theta quotients; the forms phi_{D,p} of weight 2 and index p are
//! solved from an exact linear ansatz and identified with the weight-3/2
//! plus-space.

use crate::plusspace::HalfIntForm;
use crate::qseries::{eisenstein, euler_product, FracQSeries};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Two-variable expansion sum_r zeta^r * (q-series), all slices sharing
/// the same q-precision contract.
#[derive(Debug, Clone)]
pub struct JacobiSeries {
    pub weight: i64,
    pub index: i64,
    slices: BTreeMap<i64, FracQSeries>,
}

impl JacobiSeries {
    fn new(weight: i64, index: i64) -> Self {
        JacobiSeries {
            weight,
            index,
            slices: BTreeMap::new(),
        }
    }

    /// Coefficient c(n, r). A missing slice reads as zero.
    pub fn coeff(&self, n: i64, r: i64) -> BigRational {
        match self.slices.get(&r) {
            Some(s) => s.coeff(n, 1),
            None => BigRational::zero(),
        }
    }

    /// True if a cell is stored below precision (false = unknown).
    pub fn cell_known(&self, n: i64, r: i64) -> bool {
        match self.slices.get(&r) {
            Some(s) => n < s.prec_num() / s.expdenom(),
            None => !self.slices.is_empty() && self.prec_n() > n,
        }
    }

    /// Common q-precision: min over slices.
    pub fn prec_n(&self) -> i64 {
        self.slices
            .values()
            .map(|s| num_integer::Integer::div_floor(&s.prec_num(), &s.expdenom()))
            .min()
            .unwrap_or(0)
    }

    pub fn zeta_range(&self) -> (i64, i64) {
        let lo = *self.slices.keys().next().unwrap_or(&0);
        let hi = *self.slices.keys().last().unwrap_or(&0);
        (lo, hi)
    }

    pub fn slice(&self, r: i64) -> Option<&FracQSeries> {
        self.slices.get(&r)
    }

    /// All stored cells (n, r, coefficient).
    pub fn cells(&self) -> Vec<(i64, i64, BigRational)> {
        let mut out = Vec::new();
        for (&r, s) in &self.slices {
            for (k, c) in s.terms() {
                debug_assert_eq!(s.expdenom(), 1);
                out.push((k, r, c.clone()));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.weight, other.weight);
        assert_eq!(self.index, other.index);
        let mut slices = self.slices.clone();
        for (&r, s) in &other.slices {
            slices
                .entry(r)
                .and_modify(|t| *t = t.add(s))
                .or_insert_with(|| s.clone());
        }
        JacobiSeries {
            weight: self.weight,
            index: self.index,
            slices,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scalar_mul(&-BigRational::one()))
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        JacobiSeries {
            weight: self.weight,
            index: self.index,
            slices: self
                .slices
                .iter()
                .map(|(&r, s)| (r, s.scalar_mul(c)))
                .collect(),
        }
    }

    /// Multiply by a one-variable q-series (weight adds if it is modular;
    /// the caller tracks that via `weight_shift`).
    pub fn scale_by_series(&self, s: &FracQSeries, weight_shift: i64) -> Self {
        JacobiSeries {
            weight: self.weight + weight_shift,
            index: self.index,
            slices: self
                .slices
                .iter()
                .map(|(&r, sl)| (r, sl.mul(s)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut slices: BTreeMap<i64, FracQSeries> = BTreeMap::new();
        for (&r1, s1) in &self.slices {
            for (&r2, s2) in &other.slices {
                let p = s1.mul(s2);
                slices
                    .entry(r1 + r2)
                    .and_modify(|t| *t = t.add(&p))
                    .or_insert(p);
            }
        }
        slices.retain(|_, s| !s.is_zero_series());
        JacobiSeries {
            weight: self.weight + other.weight,
            index: self.index + other.index,
            slices,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drop cells at q-exponent >= prec and fix every slice's precision.
    pub fn truncate_n(&self, prec: i64) -> Self {
        JacobiSeries {
            weight: self.weight,
            index: self.index,
            slices: self
                .slices
                .iter()
                .map(|(&r, s)| (r, s.truncate(prec, 1).normalize_denom()))
                .filter(|(_, s)| !s.is_zero_series())
                .collect(),
        }
    }

    /// Even-weight symmetry c(n, r) = c(n, -r).
    pub fn is_symmetric(&self) -> bool {
        self.slices.iter().all(|(&r, s)| {
            let cut = s.prec_num().min(
                self.slices
                    .get(&-r)
                    .map(|t| t.prec_num())
                    .unwrap_or(s.prec_num()),
            );
            match self.slices.get(&-r) {
                Some(t) => s.truncate(cut, 1) == t.truncate(cut, 1),
                None => s.truncate(cut, 1).is_zero_series(),
            }
        })
    }

    /// Single-valuedness: cells with equal (4 m n - r^2, +-r mod 2m) agree.
    pub fn is_single_valued(&self) -> bool {
        let m = self.index;
        let mut seen: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
        for (n, r, c) in self.cells() {
            let disc = 4 * m * n - r * r;
            let rm = (r.rem_euclid(2 * m)).min((-r).rem_euclid(2 * m));
            if let Some(prev) = seen.get(&(disc, rm)) {
                if *prev != c {
                    return false;
                }
            } else {
                seen.insert((disc, rm), c);
            }
        }
        true
    }

    pub fn to_json(&self) -> JacobiJson {
        JacobiJson {
            weight: self.weight,
            index: self.index,
            prec_n: self.prec_n(),
            cells: self
                .cells()
                .into_iter()
                .map(|(n, r, c)| (n, r, c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobiJson {
    pub weight: i64,
    pub index: i64,
    pub prec_n: i64,
    pub cells: Vec<(i64, i64, String, String)>,
}

/// Insert a term c * q^(num/8) zeta^r while building theta expansions.
fn push_term(
    acc: &mut BTreeMap<i64, BTreeMap<i64, BigRational>>,
    r: i64,
    num8: i64,
    c: i64,
) {
    let e = acc
        .entry(r)
        .or_default()
        .entry(num8)
        .or_insert_with(BigRational::zero);
    *e += BigRational::from_integer(BigInt::from(c));
}

fn into_slices(
    acc: BTreeMap<i64, BTreeMap<i64, BigRational>>,
    prec8: i64,
) -> BTreeMap<i64, FracQSeries> {
    let mut out = BTreeMap::new();
    for (r, terms) in acc {
        let mut s = FracQSeries::zero(8, prec8);
        for (num8, c) in terms {
            if c.is_zero() || num8 >= prec8 {
                continue;
            }
            s = s.add(&FracQSeries::monomial(c, num8, 8).truncate(prec8, 8));
        }
        if !s.is_zero_series() {
            out.insert(r, s);
        }
    }
    out
}

/// The standard weak Jacobi generators of index 1:
/// a (weight -2) with q^0 slice zeta - 2 + 1/zeta, and
/// b (weight 0) with q^0 slice zeta + 10 + 1/zeta.
pub fn generators(prec_n: i64) -> (JacobiSeries, JacobiSeries) {
    let prec8 = 8 * (prec_n + 1);
    // squared odd theta: pairs of half-odd characteristics
    let mut asq: BTreeMap<i64, BTreeMap<i64, BigRational>> = BTreeMap::new();
    let mut t2sq = asq.clone();
    let mut t3sq = asq.clone();
    let mut t4sq = asq.clone();
    let bound = 1 + (2.0 * (prec8 as f64)).sqrt() as i64;
    for n in -bound..=bound {
        for m in -bound..=bound {
            let odd = (2 * n + 1) * (2 * n + 1) + (2 * m + 1) * (2 * m + 1); // /8
            if odd - 2 < prec8 {
                let sgn = if (n + m).rem_euclid(2) == 0 { 1 } else { -1 };
                push_term(&mut asq, n + m + 1, odd, sgn);
                push_term(&mut t2sq, n + m + 1, odd, 1);
            }
            let even = 4 * (n * n + m * m); // /8
            if even < prec8 {
                push_term(&mut t3sq, n + m, even, 1);
                let sgn = if (n + m).rem_euclid(2) == 0 { 1 } else { -1 };
                push_term(&mut t4sq, n + m, even, sgn);
            }
        }
    }
    // a = (theta_11(tau,z))^2 / eta^6
    let eta6 = euler_product(prec_n + 2)
        .pow(6)
        .unwrap()
        .lift(8)
        .mul(&FracQSeries::monomial(BigRational::one(), 2, 8));
    let mut a = JacobiSeries::new(-2, 1);
    for (r, s) in into_slices(asq, prec8) {
        let sl = s.div(&eta6).unwrap().normalize_denom();
        a.slices.insert(r, sl);
    }
    a = a.truncate_n(prec_n);
    // b = 4 sum over the three even theta squares of slice / value-at-z=0
    let mut b = JacobiSeries::new(0, 1);
    for sq in [t2sq, t3sq, t4sq] {
        let slices = into_slices(sq, prec8);
        // value at z = 0 is the sum of the slices
        let mut denom = FracQSeries::zero(8, prec8);
        for s in slices.values() {
            denom = denom.add(s);
        }
        for (r, s) in slices {
            let sl = s.mul(&FracQSeries::constant_int(4)).div(&denom).unwrap();
            let sl = sl.normalize_denom();
            b.slices
                .entry(r)
                .and_modify(|t| *t = t.add(&sl))
                .or_insert(sl);
        }
    }
    b = b.truncate_n(prec_n);
    (a, b)
}

/// The unique weak Jacobi form of weight 2 and index 1 with a simple
/// discriminant -1 principal part: E4 times the weight -2 generator.
pub fn phi_11(prec_n: i64) -> Result<JacobiSeries> {
    let (a, _) = generators(prec_n + 2);
    let e4 = eisenstein(4, prec_n + 2)?;
    Ok(a.scale_by_series(&e4, 4).truncate_n(prec_n))
}

/// Solve for the unique weak Jacobi form phi_{D,p} of weight 2 and index p
/// with B(D, -D) = 1 and no other negative-discriminant coefficients,
/// as an exact linear combination sum_nu f_{p,nu} a^nu b^(p-nu) with
/// f_{p,nu} Eisenstein monomials over powers of Delta.
pub fn solve_phi_dp(big_d: i64, p: i64, prec_n: i64) -> Result<JacobiSeries> {
    if !(p == 1 || p == 2 || p == 3 || p == 5) {
        return Err(Error::AnsatzError(big_d, p));
    }
    // admissibility: D must be a square mod 4p
    if !crate::plusspace::g_index_admissible(big_d, 4 * p) || big_d <= 0 {
        return Err(Error::NotAdmissible { d: big_d, p });
    }
    let kmax = big_d / (4 * p);
    let qprec = prec_n + kmax + 4;
    let (a, b) = generators(qprec);
    let delta = crate::qseries::delta(qprec + 2);
    // candidate forms: (E4^al E6^be / Delta^k) a^nu b^(p-nu)
    let mut cands: Vec<JacobiSeries> = Vec::new();
    for nu in 0..=p as u32 {
        let mono = if nu as i64 == p {
            a.pow(nu)
        } else if nu == 0 {
            b.pow(p as u32)
        } else {
            a.pow(nu).mul(&b.pow(p as u32 - nu))
        };
        for k in 0..=kmax {
            let w = 2 + 2 * nu as i64 + 12 * k;
            for al in 0..=(w / 4) {
                let rem = w - 4 * al;
                if rem % 6 != 0 {
                    continue;
                }
                let be = rem / 6;
                let mut f = FracQSeries::constant_int(1).truncate(qprec + 2, 1);
                for _ in 0..al {
                    f = f.mul(&eisenstein(4, qprec + 2)?);
                }
                for _ in 0..be {
                    f = f.mul(&eisenstein(6, qprec + 2)?);
                }
                if k > 0 {
                    f = f.div(&delta.pow(k)?)?;
                }
                cands.push(mono.scale_by_series(&f, w - 12 * k).truncate_n(prec_n));
            }
        }
    }
    // constraint cells: every stored cell with negative discriminant up to
    // a few q-orders; discriminant -D cells get value 1
    let ncon = kmax + 2;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let rbound = cands
        .iter()
        .map(|c| c.zeta_range().1)
        .max()
        .unwrap_or(0);
    for n in -(kmax + 1)..=ncon {
        for r in 0..=rbound {
            let disc = 4 * p * n - r * r;
            if disc >= 0 {
                continue;
            }
            rows.push(cands.iter().map(|c| c.coeff(n, r)).collect());
            rhs.push(if disc == -big_d {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
    }
    let sol = solve_via_plusspace(&rows, &rhs).ok_or(Error::AnsatzError(big_d, p))?;
    let mut phi = JacobiSeries::new(2, p);
    for (c, x) in cands.iter().zip(&sol) {
        if !x.is_zero() {
            phi = phi.add(&c.scalar_mul(x));
        }
    }
    if !phi.is_single_valued() {
        return Err(Error::NotSingleValued);
    }
    Ok(phi)
}

fn solve_via_plusspace(
    rows: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Option<Vec<BigRational>> {
    // exact Gaussian elimination (free variables pinned to zero)
    let m = rows.len();
    let n = if m > 0 { rows[0].len() } else { 0 };
    let mut a = rows.to_vec();
    let mut b = rhs.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        b.swap(row, pr);
        let inv = a[row][col].clone().recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        b[row] *= &inv;
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &a[row][c] * &f;
                    a[r][c] -= t;
                }
                let t = &b[row] * &f;
                b[r] -= t;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    for r in row..m {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

/// Index-raising operator V_p on an index-1 form:
/// c'(n, r) = sum over a | gcd(n, r, p) of a c(n p / a^2, r / a).
pub fn v_operator(phi: &JacobiSeries, p: i64) -> Result<JacobiSeries> {
    if phi.index != 1 {
        return Err(Error::VOperatorIndex);
    }
    let src_prec = phi.prec_n();
    let prec = num_integer::Integer::div_floor(&src_prec, &p);
    let (lo, hi) = phi.zeta_range();
    let nmin = phi
        .slices
        .values()
        .filter_map(|s| s.leading().map(|(k, _)| k))
        .min()
        .unwrap_or(0);
    let mut out = JacobiSeries::new(phi.weight, p);
    for r in (lo * p)..=(hi * p) {
        let mut s = FracQSeries::zero_integral(prec);
        for n in nmin..prec {
            let mut c = BigRational::zero();
            if n * p < src_prec {
                c += phi.coeff(n * p, r).clone();
            }
            if n % p == 0 && r % p == 0 {
                c += phi.coeff(n / p, r / p) * BigRational::from_integer(BigInt::from(p));
            }
            if !c.is_zero() {
                s = s.add(&FracQSeries::monomial(c, n, 1).truncate(prec, 1));
            }
        }
        if !s.is_zero_series() {
            out.slices.insert(r, s);
        }
    }
    Ok(out)
}

/// Identify a weight-2 index-p Jacobi form with its weight-3/2 plus-space
/// expansion: q^d picks up c(n, r) with d = 4pn - r^2.
pub fn to_plusspace(phi: &JacobiSeries) -> Result<HalfIntForm> {
    if phi.weight != 2 {
        return Err(Error::NotSingleValued);
    }
    let p = phi.index;
    if !phi.is_single_valued() {
        return Err(Error::NotSingleValued);
    }
    // complete for d < dcap: every d needs a representative cell with
    // n = (d + r^2)/(4p) for some 0 <= r <= 2p-ish
    let prec_n = phi.prec_n();
    let dcap = 4 * p * prec_n - (2 * p) * (2 * p);
    let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (n, r, c) in phi.cells() {
        let d = 4 * p * n - r * r;
        if d < dcap && !c.is_zero() {
            coeffs.insert(d, c);
        }
    }
    let mut s = FracQSeries::zero_integral(dcap);
    for (d, c) in coeffs {
        s = s.add(&FracQSeries::monomial(c, d, 1).truncate(dcap, 1));
    }
    let index = -s.leading().map(|(k, _)| k).unwrap_or(0);
    for (_, c) in s.terms() {
        if !c.is_integer() {
            return Err(Error::Invalid(format!(
                "plus-space image has non-integer coefficient {c}"
            )));
        }
    }
    Ok(HalfIntForm {
        weight2: 3,
        level: 4 * p,
        kind: 'g',
        index,
        series: s,
    })
}
