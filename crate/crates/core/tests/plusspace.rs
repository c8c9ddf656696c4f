use moduli::plusspace::{
    basis_f, basis_f_levelp, basis_f_upto, basis_g, basis_g_upto, duality_check_level4,
    f_index_admissible, g_index_admissible, hecke_tm2, kronecker, recurrence_check_b,
};
use num_bigint::BigInt;

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn kronecker_matches_euler_criterion() {
    // for odd primes p, (a|p) = a^((p-1)/2) mod p
    for p in [3i64, 5, 7, 11, 13, 17] {
        for a in -20i64..20 {
            let mut e = 1i64;
            let base = a.rem_euclid(p);
            for _ in 0..(p - 1) / 2 {
                e = (e * base).rem_euclid(p);
            }
            let want = if e == 0 {
                0
            } else if e == 1 {
                1
            } else {
                -1
            };
            assert_eq!(kronecker(a, p), want, "({a}|{p})");
        }
    }
    // (a|2): 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    assert_eq!(kronecker(7, 2), 1);
    assert_eq!(kronecker(3, 2), -1);
    assert_eq!(kronecker(-1, 2), 1);
    assert_eq!(kronecker(6, 2), 0);
    // multiplicative in the lower argument
    for a in -15i64..15 {
        assert_eq!(kronecker(a, 15), kronecker(a, 3) * kronecker(a, 5), "a={a}");
        assert_eq!(kronecker(a, 12), kronecker(a, 2).pow(2) * kronecker(a, 3));
    }
}

#[test]
fn admissible_indices_level4() {
    for d in 0..20 {
        assert_eq!(f_index_admissible(d, 4), d % 4 == 0 || d % 4 == 3, "{d}");
        assert_eq!(g_index_admissible(d, 4), d % 4 == 0 || d % 4 == 1, "{d}");
    }
}

#[test]
fn weight_half_basis_printed_coefficients() {
    let fs = basis_f_upto(7, 10).unwrap();
    let find = |d: i64| fs.iter().find(|h| h.index == d).unwrap();
    let f0 = find(0);
    assert_eq!(f0.coeff(0), int(1));
    assert_eq!(f0.coeff(1), int(2));
    assert_eq!(f0.coeff(4), int(2));
    let f3 = find(3);
    assert_eq!(f3.coeff(-3), int(1));
    assert_eq!(f3.coeff(0), int(0));
    assert_eq!(f3.coeff(1), int(-248));
    assert_eq!(f3.coeff(4), int(26752));
    assert_eq!(f3.coeff(5), int(-85995));
    let f4 = find(4);
    assert_eq!(f4.coeff(-4), int(1));
    assert_eq!(f4.coeff(1), int(492));
    assert_eq!(f4.coeff(4), int(143376));
    assert_eq!(f4.coeff(5), int(565760));
    let f7 = find(7);
    assert_eq!(f7.coeff(-7), int(1));
    assert_eq!(f7.coeff(1), int(-4119));
    assert_eq!(f7.coeff(4), int(8288256));
    assert_eq!(f7.coeff(5), int(-52756480));
    for f in &fs {
        assert!(f.support_ok(), "support of f_{}", f.index);
    }
}

#[test]
fn weight_three_halves_basis_printed_coefficients() {
    let gs = basis_g_upto(8, 10).unwrap();
    let find = |d: i64| gs.iter().find(|h| h.index == d).unwrap();
    let g1 = find(1);
    assert_eq!(g1.coeff(-1), int(1));
    assert_eq!(g1.coeff(0), int(-2));
    assert_eq!(g1.coeff(3), int(248));
    assert_eq!(g1.coeff(4), int(-492));
    assert_eq!(g1.coeff(7), int(4119));
    assert_eq!(g1.coeff(8), int(-7256));
    let g4 = find(4);
    assert_eq!(g4.coeff(-4), int(1));
    assert_eq!(g4.coeff(0), int(-2));
    assert_eq!(g4.coeff(3), int(-26752));
    assert_eq!(g4.coeff(4), int(-143376));
    assert_eq!(g4.coeff(7), int(-8288256));
    let g5 = find(5);
    assert_eq!(g5.coeff(-5), int(1));
    assert_eq!(g5.coeff(0), int(0));
    assert_eq!(g5.coeff(3), int(85995));
    assert_eq!(g5.coeff(4), int(-565760));
    assert_eq!(g5.coeff(7), int(52756480));
    let g8 = find(8);
    assert_eq!(g8.coeff(-8), int(1));
    assert_eq!(g8.coeff(0), int(0));
    assert_eq!(g8.coeff(3), int(-1707264));
    assert_eq!(g8.coeff(4), int(-18473000));
    assert_eq!(g8.coeff(7), int(-5734772736));
    for g in &gs {
        assert!(g.support_ok(), "support of g_{}", g.index);
    }
}

#[test]
fn single_basis_accessors_agree() {
    let f3 = basis_f(3, 8).unwrap();
    assert_eq!(f3.coeff(1), int(-248));
    let g1 = basis_g(1, 8).unwrap();
    assert_eq!(g1.coeff(3), int(248));
    assert!(basis_f(1, 8).is_err());
    assert!(basis_g(2, 8).is_err());
}

#[test]
fn duality_small_grid() {
    for big_d in [1i64, 4, 5, 8, 9, 12, 13, 16] {
        for d in [0i64, 3, 4, 7, 8, 11, 12, 15] {
            let w = duality_check_level4(big_d, d, 4).unwrap();
            assert!(w.ok, "duality D={big_d} d={d}: A={} B={}", w.a, w.b);
        }
    }
}

#[test]
fn hecke_on_theta_is_multiplication() {
    // T(p^2) theta = (p + 1) theta in weight 1/2
    let f0 = basis_f(0, 40).unwrap();
    for p in [2i64, 3, 5] {
        let t = hecke_tm2(&f0, p).unwrap();
        for n in 0..t.prec() {
            assert_eq!(t.coeff(n), f0.coeff(n) * int(p + 1), "p={p} n={n}");
        }
    }
}

#[test]
fn hecke_images_give_generalized_traces() {
    // t_m(d) = -(T(m^2) g_1)(d)
    use moduli::traces::generalized_trace;
    let g1 = basis_g(1, 160).unwrap();
    for m in [1i64, 2, 3, 4] {
        let tg = hecke_tm2(&g1, m).unwrap();
        for d in [3i64, 4, 7, 8] {
            assert_eq!(
                -tg.coeff(d),
                generalized_trace(m, d).unwrap(),
                "m={m} d={d}"
            );
        }
    }
}

#[test]
fn hecke_composition() {
    // T(4) T(4) = T(16) + 2 on weight 3/2 forms
    let g1 = basis_g(1, 100).unwrap();
    let t4 = hecke_tm2(&g1, 2).unwrap();
    let t4t4 = hecke_tm2(&t4, 2).unwrap();
    let t16 = hecke_tm2(&g1, 4).unwrap();
    let n = t4t4.prec().min(t16.prec());
    for e in -1..n {
        assert_eq!(t4t4.coeff(e), t16.coeff(e) + int(2) * g1.coeff(e), "e={e}");
    }
}

#[test]
fn level_eight_basis_printed_coefficients() {
    let f4 = basis_f_levelp(2, 4, 8).unwrap();
    assert_eq!(f4.coeff(-4), int(1));
    assert_eq!(f4.coeff(1), int(-52));
    assert_eq!(f4.coeff(4), int(272));
    let f7 = basis_f_levelp(2, 7, 8).unwrap();
    assert_eq!(f7.coeff(-7), int(1));
    assert_eq!(f7.coeff(1), int(-23));
    assert_eq!(f7.coeff(4), int(-2048));
    let f8 = basis_f_levelp(2, 8, 8).unwrap();
    assert_eq!(f8.coeff(-8), int(1));
    assert_eq!(f8.coeff(1), int(152));
    assert_eq!(f8.coeff(4), int(3552));
    for f in [&f4, &f7, &f8] {
        assert!(f.support_ok(), "support of level-8 f_{}", f.index);
    }
}

#[test]
fn recurrences_hold() {
    for w in recurrence_check_b(50).unwrap() {
        assert!(w.odd_ok, "odd recurrence fails at n = {}", w.n);
        assert!(w.even_ok, "even recurrence fails at n = {}", w.n);
    }
}
