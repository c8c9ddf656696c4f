use moduli::borcherds::{
    product_exponents, psi_lift, trace_exponent_check, verify_product_fricke,
    verify_product_level1, xi_series,
};
use moduli::plusspace::{basis_f, basis_f_levelp, HalfIntForm};
use moduli::qseries::{delta, eisenstein, FracQSeries};
use num_bigint::BigInt;
use num_rational::BigRational;

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn exponents_of_eisenstein_four() {
    let e4 = eisenstein(4, 8).unwrap();
    let pe = product_exponents(&e4, 4).unwrap();
    assert_eq!(pe.h, BigRational::from_integer(int(0)));
    assert_eq!(pe.exponents[&1], int(-240));
    assert_eq!(pe.exponents[&2], int(26760));
    assert_eq!(pe.exponents[&3], int(-4096240));
}

#[test]
fn exponents_of_delta_are_constant() {
    let d = delta(20);
    let pe = product_exponents(&d, 16).unwrap();
    assert_eq!(pe.h, BigRational::from_integer(int(-1)));
    for n in 1..16 {
        assert_eq!(pe.exponents[&n], int(24), "n = {n}");
    }
}

#[test]
fn exponents_of_one_are_empty() {
    let one = FracQSeries::constant_int(1).truncate(10, 1);
    let pe = product_exponents(&one, 10).unwrap();
    assert!(pe.exponents.is_empty());
}

#[test]
fn extract_expand_round_trip() {
    let e4 = eisenstein(4, 10).unwrap();
    let pe = product_exponents(&e4, 10).unwrap();
    let back = pe.expand(10).unwrap();
    for n in 0..10 {
        assert_eq!(back.coeff_int(n), e4.coeff_int(n), "n = {n}");
    }
}

#[test]
fn class_number_series_values() {
    // -1/12, then H(3) = 1/3, H(4) = 1/2, H(7) = 1, H(8) = 1, H(11) = 1,
    // H(12) = 4/3, H(15) = 2, H(16) = 3/2
    let xi = xi_series(17);
    let r = |n: i64, d: i64| BigRational::new(int(n), int(d));
    assert_eq!(xi.coeff(0, 1), r(-1, 12));
    assert_eq!(xi.coeff(3, 1), r(1, 3));
    assert_eq!(xi.coeff(4, 1), r(1, 2));
    assert_eq!(xi.coeff(7, 1), r(1, 1));
    assert_eq!(xi.coeff(12, 1), r(4, 3));
    assert_eq!(xi.coeff(15, 1), r(2, 1));
    assert_eq!(xi.coeff(16, 1), r(3, 2));
    assert_eq!(xi.coeff(1, 1), r(0, 1));
}

fn twelve_theta(prec: i64) -> HalfIntForm {
    let f0 = basis_f(0, prec).unwrap();
    HalfIntForm {
        series: f0
            .series
            .scalar_mul(&BigRational::from_integer(int(12))),
        ..f0
    }
}

#[test]
fn lift_of_twelve_theta_is_delta() {
    let f = twelve_theta(31 * 31 + 2);
    let pe = psi_lift(&f, 30).unwrap();
    assert_eq!(pe.h, BigRational::from_integer(int(-1)));
    assert_eq!(pe.weight, int(12));
    for n in 1..=30 {
        assert_eq!(pe.exponents[&n], int(24), "n = {n}");
    }
    let s = pe.expand(31).unwrap();
    let d = delta(31);
    for n in 0..31 {
        assert_eq!(
            s.coeff(n, 1),
            d.coeff(n, 1),
            "expanded lift vs discriminant series at n = {n}"
        );
    }
}

#[test]
fn lift_is_additive() {
    // the lift of a sum multiplies the product expansions
    let prec = 10i64;
    let qprec = prec * prec + 2;
    let a = twelve_theta(qprec);
    let b = basis_f(3, qprec).unwrap();
    let sum = HalfIntForm {
        series: a.series.add(&b.series),
        index: 3,
        ..a.clone()
    };
    let pa = psi_lift(&a, prec).unwrap();
    let pb = psi_lift(&b, prec).unwrap();
    let ps = psi_lift(&sum, prec).unwrap();
    assert_eq!(ps.h, &pa.h + &pb.h);
    let lhs = ps.expand(prec).unwrap();
    let rhs = pa.expand(prec).unwrap().mul(&pb.expand(prec).unwrap());
    assert!(lhs.sub(&rhs).is_zero_series());
}

#[test]
fn product_formula_level_one() {
    // class number 1, integral exponents
    let c7 = verify_product_level1(7, 12).unwrap();
    assert!(c7.ok, "d = 7 mismatch at {:?}", c7.first_mismatch);
    assert_eq!(c7.lcm, 1);
    // H(3) = 1/3: both sides cubed
    let c3 = verify_product_level1(3, 10).unwrap();
    assert!(c3.ok, "d = 3 mismatch at {:?}", c3.first_mismatch);
    assert_eq!(c3.lcm, 3);
    // H(4) = 1/2: both sides squared
    let c4 = verify_product_level1(4, 10).unwrap();
    assert!(c4.ok, "d = 4 mismatch at {:?}", c4.first_mismatch);
    assert_eq!(c4.lcm, 2);
    // class number 2
    let c15 = verify_product_level1(15, 10).unwrap();
    assert!(c15.ok, "d = 15 mismatch at {:?}", c15.first_mismatch);
    assert_eq!(c15.h, "2");
}

#[test]
fn product_formula_fricke_level_two() {
    let c = verify_product_fricke(2, 4, 8).unwrap();
    assert!(c.ok, "mismatch at {:?}", c.first_mismatch);
    // exponent at n = 2 is doubled: 2 A(4, 4)
    let f = basis_f_levelp(2, 4, 5).unwrap();
    let at2 = c
        .exponents
        .iter()
        .find(|(n, _)| *n == 2)
        .map(|(_, e)| e.clone());
    assert_eq!(
        at2,
        Some((f.coeff(4) * int(2)).to_string()),
        "doubling rule at n = 2"
    );
}

#[test]
fn exponents_match_traces() {
    for (d, u, ok) in trace_exponent_check(4, 24).unwrap() {
        assert!(ok, "trace/exponent identity fails at d = {d}, u = {u}");
    }
}

#[test]
fn rejects_non_unit_leading() {
    let two = FracQSeries::constant_int(2).truncate(8, 1);
    assert!(product_exponents(&two, 8).is_err());
}
