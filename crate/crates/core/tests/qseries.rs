use moduli::qseries::{
    self, big_j, binom_rational, delta, eisenstein, eta, eta_quotient, euler_product, jfun,
    rankin_cohen, sigma, theta, theta1, FracQSeries,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[test]
fn sigma_small_values() {
    assert_eq!(sigma(1, 6), BigInt::from(12));
    assert_eq!(sigma(3, 1), BigInt::from(1));
    assert_eq!(sigma(3, 2), BigInt::from(9));
    assert_eq!(sigma(3, 3), BigInt::from(28));
    assert_eq!(sigma(5, 2), BigInt::from(33));
    assert_eq!(sigma(11, 1), BigInt::from(1));
}

#[test]
fn eisenstein_leading_coefficients() {
    let e4 = eisenstein(4, 5).unwrap();
    assert_eq!(e4.coeff_int(0), int(1));
    assert_eq!(e4.coeff_int(1), int(240));
    assert_eq!(e4.coeff_int(2), int(2160));
    let e6 = eisenstein(6, 4).unwrap();
    assert_eq!(e6.coeff_int(1), int(-504));
    assert_eq!(e6.coeff_int(2), int(-16632));
    let e12 = eisenstein(12, 2).unwrap();
    assert_eq!(
        e12.coeff_int(1),
        BigRational::new(BigInt::from(65520), BigInt::from(691))
    );
    assert!(eisenstein(14, 4).is_err());
}

#[test]
fn discriminant_form_matches_eta_power() {
    let d = delta(20);
    assert_eq!(d.coeff_int(1), int(1));
    assert_eq!(d.coeff_int(2), int(-24));
    assert_eq!(d.coeff_int(3), int(252));
    assert_eq!(d.coeff_int(4), int(-1472));
    let e = eta(20).pow(24).unwrap();
    for n in 1..18 {
        assert_eq!(d.coeff_int(n), e.coeff(n, 1));
    }
}

#[test]
fn weight_identities() {
    // E4^2 = E8, E4 E6 = E10 and E4^3 - E6^2 = 1728 Delta
    let p = 16;
    let e4 = eisenstein(4, p).unwrap();
    let e6 = eisenstein(6, p).unwrap();
    let e8 = eisenstein(8, p).unwrap();
    let e10 = eisenstein(10, p).unwrap();
    assert_eq!(e4.mul(&e4).truncate(p, 1), e8);
    assert_eq!(e4.mul(&e6).truncate(p, 1), e10);
    let lhs = e4.pow(3).unwrap().sub(&e6.pow(2).unwrap()).truncate(p, 1);
    let rhs = delta(p).scalar_mul_int(1728).truncate(p, 1);
    assert_eq!(lhs, rhs);
}

#[test]
fn j_function_expansion() {
    let j = jfun(4);
    assert_eq!(j.coeff(-1, 1), int(1));
    assert_eq!(j.coeff_int(0), int(744));
    assert_eq!(j.coeff_int(1), int(196884));
    assert_eq!(j.coeff_int(2), int(21493760));
    assert_eq!(j.coeff_int(3), int(864299970));
    let bj = big_j(2);
    assert_eq!(bj.coeff_int(0), int(0));
    assert_eq!(bj.coeff_int(1), int(196884));
}

#[test]
fn theta_series() {
    let t = theta(17);
    assert_eq!(t.coeff_int(0), int(1));
    assert_eq!(t.coeff_int(1), int(2));
    assert_eq!(t.coeff_int(2), int(0));
    assert_eq!(t.coeff_int(4), int(2));
    assert_eq!(t.coeff_int(9), int(2));
    assert_eq!(t.coeff_int(16), int(2));
    let t1 = theta1(10);
    assert_eq!(t1.coeff_int(1), int(-2));
    assert_eq!(t1.coeff_int(4), int(2));
    assert_eq!(t1.coeff_int(9), int(-2));
    // theta(tau) * theta1(tau) = theta1(2 tau)^2
    let a = theta(40).mul(&theta1(40));
    let b = theta1(20).scale(2).pow(2).unwrap();
    for n in 0..38 {
        assert_eq!(a.coeff_int(n), b.coeff_int(n), "at q^{n}");
    }
}

#[test]
fn eta_quotient_matches_direct_product() {
    // eta(2t)^2 / eta(t) is the generating weight-1/2 form of level 16
    let f = eta_quotient(&[(2, 2), (1, -1)], 12);
    // = q^{1/8} sum q^{n(n+1)/2}
    assert_eq!(f.expdenom(), 8);
    assert_eq!(f.coeff(1, 8), int(1));
    assert_eq!(f.coeff(9, 8), int(1));
    assert_eq!(f.coeff(25, 8), int(1));
    assert_eq!(f.coeff(17, 8), int(0));
}

#[test]
fn division_and_inverse() {
    let d = delta(12);
    let j = jfun(8);
    let prod = j.mul(&d);
    let back = prod.div(&d).unwrap();
    for n in -1..6 {
        assert_eq!(back.coeff_int(n), j.coeff_int(n));
    }
    let inv = d.inv().unwrap();
    let one = d.mul(&inv);
    assert_eq!(one.coeff_int(0), int(1));
    for n in 1..8 {
        assert_eq!(one.coeff_int(n), int(0));
    }
    assert!(FracQSeries::zero_integral(5).inv().is_err());
}

#[test]
fn u_operator_and_scale() {
    let j = jfun(12);
    let up = j.scale(3).u_operator(3).unwrap();
    for n in -1..10 {
        assert_eq!(up.coeff_int(n), j.coeff_int(n));
    }
    assert!(eta(5).u_operator(2).is_err());
}

#[test]
fn q_derivative_of_monomial() {
    let m = FracQSeries::monomial(int(3), 5, 2);
    let d = m.q_derivative();
    assert_eq!(d.coeff(5, 2), BigRational::new(BigInt::from(15), BigInt::from(2)));
}

#[test]
fn rankin_cohen_first_bracket_weights() {
    // [E4, E6]_1 is a cusp form of weight 12, proportional to Delta:
    // [E4,E6]_1 = 4 E4' E6 - 6 E4 E6' = -3456 Delta
    let p = 10;
    let e4 = eisenstein(4, p).unwrap();
    let e6 = eisenstein(6, p).unwrap();
    let b = rankin_cohen(&e4, int(4), &e6, int(6), 1).unwrap();
    let want = delta(p).scalar_mul_int(-3456);
    for n in 0..p - 1 {
        assert_eq!(b.coeff_int(n), want.coeff_int(n), "at q^{n}");
    }
    assert!(rankin_cohen(&e4, int(4), &e6, int(6), 5).is_err());
}

#[test]
fn binomials_with_rational_arguments() {
    assert_eq!(binom_rational(&int(5), 2), int(10));
    assert_eq!(binom_rational(&int(-1), 3), int(-1));
    // C(1/2, 2) = -1/8
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    assert_eq!(
        binom_rational(&half, 2),
        BigRational::new(BigInt::from(-1), BigInt::from(8))
    );
    assert_eq!(binom_rational(&half, 0), int(1));
}

#[test]
fn precision_tracking_under_multiplication() {
    let a = FracQSeries::from_terms(&[(-2, 1), (0, 3)], 5); // val -2, prec 5
    let b = FracQSeries::from_terms(&[(1, 1)], 4); // val 1, prec 4
    let c = a.mul(&b);
    // known below min(5+1, 4-2) = 2
    assert_eq!(c.prec(), num_rational::Ratio::new(2, 1));
    let q = a.div(&b).unwrap();
    // known below min(5-1, 4-2-2) = 0
    assert_eq!(q.prec(), num_rational::Ratio::new(0, 1));
}

#[test]
fn json_round_trip_schema() {
    let j = jfun(3).to_json();
    assert_eq!(j.expdenom, 1);
    let text = serde_json::to_string(&j).unwrap();
    let back: qseries::SeriesJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.terms.len(), j.terms.len());
    assert_eq!(back.terms[0], (-1, "1".to_string(), "1".to_string()));
}

#[test]
fn exp_log_consistency() {
    // exp(sum q^n / n) = 1/(1-q)
    let p = 12;
    let mut s = FracQSeries::zero_integral(p);
    for n in 1..p {
        s = s.add(&FracQSeries::monomial(
            BigRational::new(BigInt::one(), BigInt::from(n)),
            n,
            1,
        ).truncate(p, 1));
    }
    let e = s.exp().unwrap();
    for n in 0..p {
        assert_eq!(e.coeff_int(n), int(1));
    }
}

// ---- property tests ------------------------------------------------------

fn arb_series() -> impl Strategy<Value = FracQSeries> {
    (
        proptest::collection::vec((-6i64..12, -50i64..50), 0..8),
        6i64..16,
    )
        .prop_map(|(terms, prec)| FracQSeries::from_terms(&terms, prec))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_add_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn prop_mul_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn prop_mul_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        let cut = lhs.prec_num().min(rhs.prec_num());
        prop_assert_eq!(lhs.truncate(cut, 1), rhs.truncate(cut, 1));
    }

    #[test]
    fn prop_mul_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
        let lhs = a.mul(&b).mul(&c);
        let rhs = a.mul(&b.mul(&c));
        let cut = lhs.prec_num().min(rhs.prec_num());
        prop_assert_eq!(lhs.truncate(cut, 1), rhs.truncate(cut, 1));
    }

    #[test]
    fn prop_derivation_leibniz(a in arb_series(), b in arb_series()) {
        let lhs = a.mul(&b).q_derivative();
        let rhs = a.q_derivative().mul(&b).add(&a.mul(&b.q_derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_div_inverts_mul(a in arb_series(), b in arb_series()) {
        prop_assume!(!b.is_zero_series());
        let q = a.mul(&b).div(&b).unwrap();
        let cut = q.prec_num();
        prop_assert_eq!(q, a.truncate(cut, 1));
    }

    #[test]
    fn prop_u_undoes_scale(a in arb_series(), m in 1i64..6) {
        let back = a.scale(m).u_operator(m).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn prop_scale_is_multiplicative(a in arb_series(), b in arb_series(), m in 1i64..5) {
        prop_assert_eq!(a.mul(&b).scale(m), a.scale(m).mul(&b.scale(m)));
    }
}
