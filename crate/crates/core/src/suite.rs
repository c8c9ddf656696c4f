//! End-to-end verification suite: each check exercises one headline
//! capability of the library (singular moduli, traces, bases, duality,
//! recurrences, product formulas, Jacobi forms, hauptmoduln, Rademacher
//! sums, and modular polynomials) and reports a pass/fail with detail.

use std::time::Instant;

use crate::bigfloat;
use crate::borcherds::{product_exponents, psi_lift, verify_product_fricke_from,
    verify_product_level1_from};
use crate::fricke::{fricke_trace, hauptmodul_eta, rademacher_coeff, ETA_PRIMES};
use crate::jacobi::{generators, phi_11, solve_phi_dp, to_plusspace, v_operator};
use crate::plusspace::{
    basis_f_levelp_upto, basis_f_upto, basis_g, basis_g_upto, f_index_admissible,
    g_index_admissible, recurrence_check_b, HalfIntForm,
};
use crate::qseries::{delta, eisenstein, jfun};
use crate::quadforms::classnum_identities;
use crate::traces::{eval_series, modular_polynomial, trace, CmPoint};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

/// Outcome of one suite check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
    pub seconds: f64,
}

const NAMES: [&str; 11] = [
    "singular moduli of the j-function",
    "traces of singular moduli against weight-3/2 coefficients",
    "level-4 half-integral bases",
    "coefficient duality grids",
    "level-8 half-integral basis",
    "coefficient recurrences and class number identities",
    "level-1 product formulas",
    "Jacobi forms of index 2",
    "Fricke hauptmoduln, traces, and products",
    "Rademacher sums",
    "modular polynomial of degree 2",
];

fn run(id: usize, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (ok, detail) = match f() {
        Ok((ok, detail)) => (ok, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        id,
        name: NAMES[id - 1],
        ok,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Run every check in order.
pub fn run_all() -> Vec<CheckResult> {
    (1..=11).map(run_one).collect()
}

/// Run a single check by its 1-based id.
pub fn run_one(id: usize) -> CheckResult {
    match id {
        1 => run(1, check_singular_moduli),
        2 => run(2, check_traces),
        3 => run(3, check_level4_bases),
        4 => run(4, check_duality),
        5 => run(5, check_level8_basis),
        6 => run(6, check_recurrences),
        7 => run(7, check_level1_products),
        8 => run(8, check_jacobi),
        9 => run(9, check_fricke),
        10 => run(10, check_rademacher),
        11 => run(11, check_modular_polynomial),
        _ => CheckResult {
            id,
            name: "unknown",
            ok: false,
            detail: format!("no check with id {id}"),
            seconds: 0.0,
        },
    }
}

fn check_singular_moduli() -> Result<(bool, String)> {
    let j = jfun(80);
    let bits = bigfloat::digits_to_bits(40);
    // (point, expected j-value): i, (1 + i sqrt 3)/2, i sqrt 2, (1 + i sqrt 7)/2
    let cases = [
        (CmPoint { a: 1, b: 0, d: 4 }, 1728.0),
        (CmPoint { a: 1, b: -1, d: 3 }, 0.0),
        (CmPoint { a: 1, b: 0, d: 8 }, 8000.0),
        (CmPoint { a: 1, b: -1, d: 7 }, -3375.0),
    ];
    let mut worst = 0.0f64;
    for (tau, want) in cases {
        let v = eval_series(&j, &tau, bits);
        let err = (v.re.to_f64() - want).abs().max(v.im.to_f64().abs());
        worst = worst.max(err);
    }
    Ok((worst < 1e-6, format!("max error {worst:.3e}")))
}

fn check_traces() -> Result<(bool, String)> {
    let g1 = basis_g(1, 151)?;
    let fixed = [(3i64, -248i64), (4, 492), (7, -4119), (8, 7256)];
    for (d, want) in fixed {
        let t = trace(d)?;
        if t.value != BigInt::from(want) {
            return Ok((false, format!("t({d}) = {} but expected {want}", t.value)));
        }
    }
    let mut count = 0;
    for d in 1..=150 {
        if !f_index_admissible(d, 4) {
            continue;
        }
        let t = trace(d)?;
        if t.value != -g1.coeff(d) {
            return Ok((
                false,
                format!("t({d}) = {} differs from -B({d}) = {}", t.value, -g1.coeff(d)),
            ));
        }
        count += 1;
    }
    Ok((true, format!("{count} discriminants checked up to 150")))
}

fn coeff_table_ok(
    forms: &[HalfIntForm],
    table: &[(i64, &[(i64, i64)])],
    label: &str,
) -> Option<String> {
    for (index, entries) in table {
        let Some(f) = forms.iter().find(|h| h.index == *index) else {
            return Some(format!("{label}_{index} missing"));
        };
        if f.coeff(-index) != BigInt::one() {
            return Some(format!("{label}_{index} is not monic at q^-{index}"));
        }
        for (e, c) in *entries {
            if f.coeff(*e) != BigInt::from(*c) {
                return Some(format!(
                    "{label}_{index} coefficient at q^{e}: {} vs expected {c}",
                    f.coeff(*e)
                ));
            }
        }
        if !f.support_ok() {
            return Some(format!("{label}_{index} support violation"));
        }
    }
    None
}

fn check_level4_bases() -> Result<(bool, String)> {
    let fs = basis_f_upto(7, 10)?;
    let gs = basis_g_upto(8, 10)?;
    let f_table: [(i64, &[(i64, i64)]); 4] = [
        (0, &[(0, 1), (1, 2), (4, 2), (9, 2), (2, 0), (3, 0)]),
        (3, &[(0, 0), (1, -248), (4, 26752), (5, -85995)]),
        (4, &[(1, 492), (4, 143376), (5, 565760)]),
        (7, &[(1, -4119), (4, 8288256), (5, -52756480)]),
    ];
    let g_table: [(i64, &[(i64, i64)]); 4] = [
        (1, &[(0, -2), (3, 248), (4, -492), (7, 4119), (8, -7256)]),
        (4, &[(0, -2), (3, -26752), (4, -143376), (7, -8288256)]),
        (5, &[(0, 0), (3, 85995), (4, -565760), (7, 52756480)]),
        (8, &[(0, 0), (3, -1707264), (4, -18473000), (7, -5734772736)]),
    ];
    if let Some(msg) = coeff_table_ok(&fs[1..], &f_table[1..], "f") {
        return Ok((false, msg));
    }
    // f_0 is theta: constant 1, not a pole
    let f0 = fs.iter().find(|h| h.index == 0).unwrap();
    for (e, c) in f_table[0].1 {
        if f0.coeff(*e) != BigInt::from(*c) {
            return Ok((false, format!("f_0 coefficient at q^{e}")));
        }
    }
    if let Some(msg) = coeff_table_ok(&gs, &g_table, "g") {
        return Ok((false, msg));
    }
    Ok((true, "eight basis elements match the reference lists".into()))
}

fn check_duality() -> Result<(bool, String)> {
    // level 4, D <= 40, d <= 40
    let fs = basis_f_upto(40, 45)?;
    let gs = basis_g_upto(40, 45)?;
    let mut pairs = 0usize;
    for f in &fs {
        for g in &gs {
            if g.index < 1 {
                continue;
            }
            if f.coeff(g.index) != -g.coeff(f.index) {
                return Ok((
                    false,
                    format!("level 4: A({}, {}) != -B({}, {})", g.index, f.index, g.index, f.index),
                ));
            }
            pairs += 1;
        }
    }
    // level 8, D <= 16, d <= 32
    let fs8 = basis_f_levelp_upto(2, 32, 20)?;
    let mut pairs8 = 0usize;
    for big_d in 1..=16i64 {
        if !g_index_admissible(big_d, 8) {
            continue;
        }
        let g = to_plusspace(&solve_phi_dp(big_d, 2, 8)?)?;
        for f in &fs8 {
            if f.coeff(big_d) != -g.coeff(f.index) {
                return Ok((
                    false,
                    format!("level 8: A({big_d}, {}) != -B({big_d}, {})", f.index, f.index),
                ));
            }
            pairs8 += 1;
        }
    }
    Ok((true, format!("{pairs} level-4 and {pairs8} level-8 pairs")))
}

fn check_level8_basis() -> Result<(bool, String)> {
    let fs = basis_f_levelp_upto(2, 8, 8)?;
    let table: [(i64, &[(i64, i64)]); 3] = [
        (4, &[(1, -52), (4, 272)]),
        (7, &[(1, -23), (4, -2048)]),
        (8, &[(1, 152), (4, 3552)]),
    ];
    if let Some(msg) = coeff_table_ok(&fs, &table, "f") {
        return Ok((false, msg));
    }
    let f0 = fs.iter().find(|h| h.index == 0);
    match f0 {
        Some(f) if f.coeff(0) == BigInt::one() && f.coeff(1) == BigInt::from(2) => {}
        _ => return Ok((false, "theta seed missing or wrong".into())),
    }
    Ok((true, "level-8 basis matches the reference list".into()))
}

fn check_recurrences() -> Result<(bool, String)> {
    for w in recurrence_check_b(50)? {
        if !w.odd_ok || !w.even_ok {
            return Ok((false, format!("coefficient recurrence fails at n = {}", w.n)));
        }
    }
    for id in classnum_identities(200)? {
        if !id.holds() {
            return Ok((false, format!("class number identity fails at n = {}", id.n)));
        }
    }
    Ok((true, "recurrences to n = 50, class number identities to n = 200".into()))
}

fn check_level1_products() -> Result<(bool, String)> {
    // the lift of 12 theta is the discriminant series
    let fs = basis_f_upto(60, 901)?;
    let theta12 = {
        let f0 = fs.iter().find(|h| h.index == 0).unwrap();
        HalfIntForm {
            series: f0
                .series
                .scalar_mul(&BigRational::from_integer(BigInt::from(12))),
            ..f0.clone()
        }
    };
    let pe = psi_lift(&theta12, 30)?;
    let lifted = pe.expand(31)?;
    let disc = delta(31);
    for n in 0..31 {
        if lifted.coeff(n, 1) != disc.coeff(n, 1) {
            return Ok((false, format!("lift of 12 theta differs at q^{n}")));
        }
    }
    if pe.weight != BigInt::from(12) {
        return Ok((false, "lift weight is not 12".into()));
    }
    // product exponents of the weight-4 Eisenstein series
    let e4 = eisenstein(4, 6)?;
    let ex = product_exponents(&e4, 4)?;
    for (n, want) in [(1i64, -240i64), (2, 26760), (3, -4096240)] {
        if ex.exponents.get(&n) != Some(&BigInt::from(want)) {
            return Ok((false, format!("Eisenstein exponent at n = {n}")));
        }
    }
    // full product formula for every admissible d <= 60
    let mut count = 0usize;
    for f in &fs {
        if f.index == 0 {
            continue;
        }
        let c = verify_product_level1_from(f, 30)?;
        if !c.ok {
            return Ok((
                false,
                format!("product formula fails at d = {} (q^{:?})", f.index, c.first_mismatch),
            ));
        }
        count += 1;
    }
    Ok((true, format!("{count} discriminants verified to q^30")))
}

fn check_jacobi() -> Result<(bool, String)> {
    let (a, b) = generators(9);
    let e4 = eisenstein(4, 11)?;
    let e6 = eisenstein(6, 11)?;
    let e4ab = a.mul(&b).scale_by_series(&e4, 4);
    let e6aa = a.mul(&a).scale_by_series(&e6, 6);
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    // decomposition coefficients in the index-2 generator basis
    let phi12 = solve_phi_dp(1, 2, 7)?;
    let combo12 = e4ab
        .scalar_mul(&r(1, 12))
        .sub(&e6aa.scalar_mul(&r(1, 12)));
    let phi42 = solve_phi_dp(4, 2, 7)?;
    let combo42 = e4ab
        .scalar_mul(&r(1, 3))
        .add(&e6aa.scalar_mul(&r(2, 3)));
    for n in 0..6 {
        for rr in -6..=6 {
            if phi12.coeff(n, rr) != combo12.coeff(n, rr) {
                return Ok((false, format!("index-2 decomposition (1/12, -1/12) at ({n}, {rr})")));
            }
            if phi42.coeff(n, rr) != combo42.coeff(n, rr) {
                return Ok((false, format!("index-2 decomposition (1/3, 2/3) at ({n}, {rr})")));
            }
        }
    }
    // elliptic-variable slices: defining cells and single-valuedness
    if phi12.coeff(1, 3) != BigRational::one()
        || phi42.coeff(0, 2) != BigRational::one()
        || !phi12.is_single_valued()
        || !phi42.is_single_valued()
        || !phi12.is_symmetric()
        || !phi42.is_symmetric()
    {
        return Ok((false, "slice structure of the index-2 forms".into()));
    }
    // index raising: V_2 phi_{1,1} = 2 phi_{4,2} + phi_{1,2}
    let lhs = v_operator(&phi_11(15)?, 2)?;
    let rhs = phi42.scalar_mul(&r(2, 1)).add(&phi12);
    for n in 0..6 {
        for rr in -6..=6 {
            if lhs.coeff(n, rr) != rhs.coeff(n, rr) {
                return Ok((false, format!("index-raising identity at ({n}, {rr})")));
            }
        }
    }
    Ok((true, "index-2 decompositions, slices, and index raising".into()))
}

fn check_fricke() -> Result<(bool, String)> {
    for p in ETA_PRIMES {
        let h = hauptmodul_eta(p, 30)?;
        if !h.is_canonical() || !h.is_integral() {
            return Ok((false, format!("hauptmodul at p = {p} not canonical/integral")));
        }
    }
    for (d, want) in [(4i64, -52i64), (7, -23)] {
        let t = fricke_trace(2, d)?;
        if t.value != BigInt::from(want) {
            return Ok((false, format!("level-2 trace at d = {d}: {}", t.value)));
        }
    }
    // product formula at p = 2 for the five smallest admissible d
    let fs = basis_f_levelp_upto(2, 15, 401)?;
    let mut count = 0usize;
    for f in &fs {
        if f.index == 0 {
            continue;
        }
        let c = verify_product_fricke_from(2, f, 20)?;
        if !c.ok {
            return Ok((
                false,
                format!("Fricke product fails at d = {} (q^{:?})", f.index, c.first_mismatch),
            ));
        }
        count += 1;
    }
    Ok((true, format!("5 hauptmoduln, 2 traces, {count} products to q^20")))
}

fn check_rademacher() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for p in ETA_PRIMES {
        let h = hauptmodul_eta(p, 6)?;
        for nu in 1..=4i64 {
            let r = rademacher_coeff(p, nu, 5000, 5000);
            let want = h
                .series
                .coeff(nu, 1)
                .to_integer()
                .to_string()
                .parse::<f64>()
                .unwrap_or(f64::NAN);
            let err = (r.estimate - want).abs();
            let allowed = 1e-2f64.max(3.0 * r.tail_estimate);
            if !(err < allowed) {
                return Ok((
                    false,
                    format!("p = {p}, nu = {nu}: estimate {} vs {want}, err {err:.3e} > {allowed:.3e}",
                        r.estimate),
                ));
            }
            worst = worst.max(err);
        }
    }
    // p = 11 has no eta expression; the sums must still be near integers
    for nu in 1..=3i64 {
        let r = rademacher_coeff(11, nu, 5000, 5000);
        let err = (r.estimate - r.estimate.round()).abs();
        if err >= 5e-2 {
            return Ok((false, format!("p = 11, nu = {nu}: {} off by {err:.3e}", r.estimate)));
        }
        worst = worst.max(err);
    }
    Ok((true, format!("max deviation {worst:.3e}")))
}

fn check_modular_polynomial() -> Result<(bool, String)> {
    let mp = modular_polynomial(2, 20)?;
    if mp.degree_x() != 3 {
        return Ok((false, format!("degree in X is {}", mp.degree_x())));
    }
    let diag = mp.diagonal();
    if diag.len() != 5 || !diag.last().unwrap().abs().is_one() {
        return Ok((false, "diagonal is not a degree-4 polynomial with unit leading".into()));
    }
    let wp = 32;
    let j = jfun(wp);
    let j2 = jfun(wp / 2 + 14).scale(2);
    let ev = mp.eval(&j2, &j);
    let lead = ev.leading();
    let ok = match lead {
        None => true,
        Some((e, _)) => e >= 20,
    };
    if !ok {
        return Ok((false, format!("evaluation at (j(2 tau), j(tau)) nonzero from q^{:?}",
            lead.map(|(e, _)| e))));
    }
    // also confirm the well-known constant: Psi_2(X, Y) contains -X^2 Y^2
    if mp.coeffs[2][2] != BigInt::from(-1) {
        return Ok((false, "X^2 Y^2 coefficient is not -1".into()));
    }
    Ok((true, "vanishing to q^20, degree 3 in X, degree-4 diagonal".into()))
}

/// Deterministic plain-text report, one line per check.
pub fn render_report(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "[{}] criterion {:2} {} ({:.2}s): {}\n",
            if r.ok { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.detail
        ));
    }
    out
}
