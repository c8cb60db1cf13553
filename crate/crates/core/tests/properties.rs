//! Randomized invariant suites, 100 cases each.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use qkw_core::counts::{
    lambda_via_strata, nakajima_duality_check, nakajima_polys, p_series, predicted_lambda_count, reciprocal_identity_check,
    NakajimaVariant,
};
use qkw_core::ffrep::linalg::Mat;
use qkw_core::ffrep::{
    census_abs_indec, end_algebra, group_order, is_abs_indecomposable, is_strongly_semi_nilpotent,
    is_strongly_semi_nilpotent_minimal, nakajima_count, radical_and_units, CensusOptions, FFRep,
};
use qkw_core::gkm::{ch_highest_weight, ch_uq_minus, constant_term_check, kac_constant_term_check, root_multiplicities};
use qkw_core::hua::{kac_table, r_series, r_series_enumerated, vol_rep_closed, Flavor, HuaOptions, KacTable};
use qkw_core::quiver::Quiver;
use qkw_core::symcore::{DimVector, IntPoly, MultiSeries, RatFun};
use qkw_core::Error;

fn opts() -> HuaOptions {
    HuaOptions::default()
}

fn dv(v: &[u32]) -> DimVector {
    DimVector(v.to_vec())
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-4i64..=4, 0..=max_deg + 1).prop_map(|c| IntPoly::from_i64(&c))
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (int_poly(3), int_poly(2).prop_filter("nonzero denominator", |d| !d.is_zero()), -2i64..=2)
        .prop_map(|(n, d, s)| RatFun::new(n, d).unwrap().mul_t_pow(s))
}

/// Two-variable series in the box (3,2) with zero constant term.
fn series() -> impl Strategy<Value = MultiSeries> {
    prop::collection::vec(((0u32..=3, 0u32..=2), -3i64..=3, -2i64..=2), 1..5).prop_map(|terms| {
        MultiSeries::from_terms(
            dv(&[3, 2]),
            terms
                .into_iter()
                .filter(|((a, b), _, _)| a + b > 0)
                .map(|((a, b), c, e)| (dv(&[a, b]), RatFun::from_int(c).mul_t_pow(e))),
        )
    })
}

fn quiver() -> impl Strategy<Value = Quiver> {
    (1usize..=2, prop::collection::vec((0usize..2, 0usize..2), 0..=3)).prop_map(|(n, arrows)| {
        let arrows = arrows.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        Quiver::new((0..n).map(|i| format!("v{i}")).collect(), arrows).unwrap()
    })
}

fn small_box(q: &Quiver) -> DimVector {
    DimVector(vec![if q.n() == 1 { 3 } else { 2 }; q.n()])
}

fn tables(q: &Quiver) -> [KacTable; 3] {
    let bx = small_box(q);
    Flavor::ALL.map(|f| kac_table(q, f, &bx, opts()).unwrap())
}

/// A random representation of a random quiver over F_2 or F_3, doubled or not.
fn rep(max_total: u32) -> impl Strategy<Value = FFRep> {
    (quiver(), prop::collection::vec(0u32..=2, 2), prop::bool::ANY, prop::bool::ANY, prop::collection::vec(0u8..=255, 64))
        .prop_filter_map("dimension too large", move |(q, v, three, doubled, bytes)| {
            let v = DimVector(v[..q.n()].to_vec());
            if v.is_zero() || v.total() > max_total {
                return None;
            }
            let p = if three { 3 } else { 2 };
            let mut it = bytes.into_iter().cycle();
            let mut fill = |rows: usize, cols: usize| {
                let mut m = Mat::zeros(rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m.set(r, c, it.next().unwrap() % p as u8);
                    }
                }
                m
            };
            let d: Vec<usize> = v.0.iter().map(|&x| x as usize).collect();
            let x: Vec<Mat> = q.arrows().iter().map(|&(s, t)| fill(d[t], d[s])).collect();
            let xs = doubled.then(|| q.arrows().iter().map(|&(s, t)| fill(d[s], d[t])).collect::<Vec<_>>());
            FFRep::new(&q, &v, p, x, xs).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ratfun_field_axioms(a in ratfun(), b in ratfun(), c in ratfun()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, RatFun::zero());
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
        }
    }

    #[test]
    fn ratfun_adams_composes(a in ratfun(), k in 1usize..=3, l in 1usize..=3) {
        prop_assert_eq!(a.adams(k).adams(l), a.adams(k * l));
    }

    #[test]
    fn series_adams_composes(f in series(), k in 1u32..=3, l in 1u32..=3) {
        prop_assert_eq!(f.adams(k).adams(l), f.adams(k * l));
    }

    #[test]
    fn pleth_exp_is_additive_to_multiplicative(f in series(), g in series()) {
        let lhs = f.add(&g).unwrap().pleth_exp().unwrap();
        let rhs = f.pleth_exp().unwrap().mul(&g.pleth_exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pleth_log_inverts_pleth_exp(f in series(), g in series()) {
        prop_assert_eq!(f.pleth_exp().unwrap().pleth_log().unwrap(), f);
        let h = MultiSeries::one(dv(&[3, 2])).add(&g).unwrap();
        prop_assert_eq!(h.pleth_log().unwrap().pleth_exp().unwrap(), h);
    }

    #[test]
    fn inverse_of_exp_is_exp_of_negative(f in series()) {
        prop_assert_eq!(f.pleth_exp().unwrap().inverse().unwrap(), f.neg().pleth_exp().unwrap());
        prop_assert_eq!(f.exp().unwrap().inverse().unwrap(), f.neg().exp().unwrap());
    }

    #[test]
    fn euler_form_laws(q in quiver(), v in prop::collection::vec(-3i64..=3, 2), w in prop::collection::vec(-3i64..=3, 2), u in prop::collection::vec(-3i64..=3, 2), k in -3i64..=3) {
        let n = q.n();
        let (v, w, u) = (&v[..n], &w[..n], &u[..n]);
        prop_assert_eq!(q.sym(v, w), q.sym(w, v));
        let vu: Vec<i64> = v.iter().zip(u).map(|(a, b)| a + k * b).collect();
        prop_assert_eq!(q.euler(&vu, w), q.euler(v, w) + k * q.euler(u, w));
        prop_assert_eq!(q.euler(w, &vu), q.euler(w, v) + k * q.euler(w, u));
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            prop_assert_eq!(q.sym(&e, &e), 2 - 2 * q.loop_count(i) as i64);
        }
        prop_assert_eq!(q.reverse_all_arrows().euler(v, w), q.euler(w, v));
    }

    #[test]
    fn subquiver_composes(q in quiver(), extra in prop::collection::vec((0usize..3, 0usize..3), 0..4)) {
        let arrows: Vec<(usize, usize)> = q.arrows().iter().copied().chain(extra).map(|(a, b)| (a % 3, b % 3)).collect();
        let q = Quiver::new(vec!["a".into(), "b".into(), "c".into()], arrows).unwrap();
        let outer = q.subquiver(&[0, 2]).unwrap();
        prop_assert_eq!(outer.subquiver(&[1]).unwrap(), q.subquiver(&[2]).unwrap());
        prop_assert_eq!(outer.subquiver(&[0, 1]).unwrap(), outer);
    }

    #[test]
    fn flavor_coincidences(q in quiver()) {
        let [plain, nil1, nil0] = tables(&q);
        if !q.has_loops() {
            prop_assert_eq!(&nil1.polys, &plain.polys);
        }
        if q.only_loop_cycles() {
            prop_assert_eq!(&nil1.polys, &nil0.polys);
        }
    }

    #[test]
    fn values_at_one_agree(q in quiver()) {
        let [plain, nil1, nil0] = tables(&q);
        let one = BigInt::one();
        for (v, a) in &plain.polys {
            prop_assert_eq!(nil1.get(v).eval_int(&one), a.eval_int(&one));
            prop_assert_eq!(nil0.get(v).eval_int(&one), a.eval_int(&one));
        }
    }

    #[test]
    fn orientation_invariance(q in quiver(), k in 0usize..4) {
        let [plain, nil1, nil0] = tables(&q);
        if !q.arrows().is_empty() {
            let [rp, r1, _] = tables(&q.reverse_arrow(k % q.arrows().len()));
            prop_assert_eq!(&rp.polys, &plain.polys);
            prop_assert_eq!(&r1.polys, &nil1.polys);
        }
        let [_, _, r0] = tables(&q.reverse_all_arrows());
        prop_assert_eq!(&r0.polys, &nil0.polys);
    }

    #[test]
    fn plain_kac_polynomials_are_monic_of_expected_degree(q in quiver()) {
        let [plain, _, _] = tables(&q);
        for (v, a) in &plain.polys {
            if !a.is_zero() {
                prop_assert_eq!(a.lead().cloned(), Some(BigInt::one()), "v={}", v);
                prop_assert_eq!(a.degree().map(|d| d as i64), Some(1 - q.euler_sq(v)), "v={}", v);
            }
        }
    }

    #[test]
    fn monotone_in_flavor(q in quiver(), p in 2i64..=9) {
        let [plain, nil1, nil0] = tables(&q);
        let x = BigInt::from(p);
        for (v, a) in &plain.polys {
            let (a, a1, a0) = (a.eval_int(&x), nil1.get(v).eval_int(&x), nil0.get(v).eval_int(&x));
            prop_assert!(a >= a1 && a1 >= a0, "v={} values {} {} {}", v, a, a1, a0);
        }
    }

    #[test]
    fn column_dp_matches_enumeration(q in quiver(), w in prop::collection::vec(0i64..=2, 2)) {
        let bx = DimVector(vec![2; q.n()]);
        for f in Flavor::ALL {
            prop_assert_eq!(
                r_series(&q, &w[..q.n()], f, &bx, opts()).unwrap(),
                r_series_enumerated(&q, &w[..q.n()], f, &bx, opts()).unwrap()
            );
        }
    }

    #[test]
    fn reciprocal_identity(q in quiver()) {
        for f in Flavor::ALL {
            let r = reciprocal_identity_check(&q, f, &small_box(&q), opts()).unwrap();
            prop_assert!(r.holds(), "{:?}", r.failures);
        }
    }

    #[test]
    fn count_series_reject_one(q in quiver()) {
        let s = p_series(&q, Flavor::Plain, &small_box(&q), opts()).unwrap();
        let v = DimVector::unit(q.n(), 0);
        let at_one = s.point_count(&v, &BigRational::one());
        prop_assert!(matches!(at_one, Err(Error::Pole { .. })), "{:?}", at_one);
    }

    #[test]
    fn nakajima_duality_and_positivity(q in quiver(), w in prop::collection::vec(0u32..=2, 2)) {
        let w = DimVector(w[..q.n()].to_vec());
        let bx = DimVector(vec![2; q.n()]);
        prop_assert!(nakajima_duality_check(&q, &w, &bx, opts()).unwrap().is_empty());
        let mut polys = Vec::new();
        for variant in NakajimaVariant::ALL {
            let table = nakajima_polys(&q, &w, variant, &bx, opts()).unwrap();
            for np in table.values() {
                prop_assert!(np.poly.coeffs().iter().all(|c| !c.is_negative()), "{} {}: {}", variant, np.v, np.poly);
            }
            polys.push(table);
        }
        if !q.has_loops() {
            // ALL is ordered M, M0, M1, L, L0, L1.
            prop_assert_eq!(&polys[0], &polys[2].iter().map(|(v, np)| (v.clone(), qkw_core::counts::NakajimaPoly { variant: NakajimaVariant::M, ..np.clone() })).collect());
            prop_assert_eq!(&polys[3], &polys[5].iter().map(|(v, np)| (v.clone(), qkw_core::counts::NakajimaPoly { variant: NakajimaVariant::L, ..np.clone() })).collect());
        }
    }

    #[test]
    fn strata_route_matches_series(q in quiver(), qv in 2i64..=5) {
        let qv = BigRational::from_integer(BigInt::from(qv));
        for v in DimVector(vec![2; q.n()]).points_below() {
            prop_assert_eq!(
                lambda_via_strata(&q, &v, &qv, opts()).unwrap(),
                predicted_lambda_count(&q, Flavor::Plain, &v, &qv, opts()).unwrap().value
            );
        }
    }

    #[test]
    fn census_matches_kac_and_volume(q in quiver(), v in prop::collection::vec(0u32..=2, 2), three in prop::bool::ANY, f in 0usize..3) {
        let v = DimVector(v[..q.n()].to_vec());
        prop_assume!(!v.is_zero());
        let p = if three { 3 } else { 2 };
        let flavor = Flavor::ALL[f];
        let opts_c = CensusOptions { cap: 1 << 16, cross_check_radical: false };
        match census_abs_indec(&q, &v, p, flavor, &opts_c) {
            Ok(r) => {
                let table = kac_table(&q, flavor, &v, opts()).unwrap();
                prop_assert_eq!(BigInt::from(r.a_value), table.get(&v).eval_int(&BigInt::from(p)));
                let counted = BigRational::new(BigInt::from(r.flavored), BigInt::from(group_order(&v, p).unwrap()));
                let qv = BigRational::from_integer(BigInt::from(p));
                prop_assert_eq!(counted, vol_rep_closed(&q, flavor, &v, &qv, opts()).unwrap());
            }
            Err(Error::Capacity(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn nakajima_count_matches_full_variety(q in quiver(), v in prop::collection::vec(0u32..=1, 2), w in prop::collection::vec(0u32..=1, 2), three in prop::bool::ANY) {
        let (v, w) = (DimVector(v[..q.n()].to_vec()), DimVector(w[..q.n()].to_vec()));
        let p = if three { 3 } else { 2 };
        match nakajima_count(&q, &v, &w, p, NakajimaVariant::M, 1 << 16) {
            Ok(n) => {
                let np = qkw_core::counts::nakajima_poly(&q, &v, &w, NakajimaVariant::M, opts()).unwrap();
                prop_assert_eq!(BigInt::from(n), np.poly.eval_int(&BigInt::from(p)));
            }
            Err(Error::Capacity(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn strongly_semi_nilpotent_routes_agree(x in rep(4).prop_filter("doubled", |x| x.xs.is_some())) {
        prop_assert_eq!(is_strongly_semi_nilpotent(&x).unwrap(), is_strongly_semi_nilpotent_minimal(&x).unwrap());
    }

    #[test]
    fn local_algebra_test_matches_radical(x in rep(4)) {
        let a = end_algebra(&x);
        match radical_and_units(&a, 1 << 12) {
            Ok(info) => prop_assert_eq!(is_abs_indecomposable(&a), a.dim() > 0 && info.radical_dim + 1 == a.dim()),
            Err(Error::Capacity(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn constant_terms_are_multiplicities(q in quiver()) {
        let bx = small_box(&q);
        let r = kac_constant_term_check(&q, &bx, opts()).unwrap();
        prop_assert!(r.holds(), "{:?}", r.failing());
        for m in root_multiplicities(&q, &bx).unwrap().values() {
            prop_assert!(!m.is_negative());
        }
        if !q.has_loops() {
            prop_assert!(constant_term_check(&q, Flavor::Plain, &bx, opts()).unwrap().holds());
        }
    }

    #[test]
    fn a2_highest_weight_dimensions(a in 0i64..=3, b in 0i64..=3) {
        let q = Quiver::a2();
        let h = (a + b) as u32;
        let ch = ch_highest_weight(&q, &[a, b], &dv(&[h, h])).unwrap();
        let total: BigInt = dv(&[h, h]).points_below().iter().map(|v| ch.coeff(v)).sum();
        prop_assert_eq!(total, BigInt::from((a + 1) * (b + 1) * (a + b + 2) / 2));
        prop_assert!(dv(&[h, h]).points_below().iter().all(|v| !ch.coeff(v).is_negative()));
    }
}

#[test]
fn a2_negative_part_is_root_product() {
    let bx = dv(&[4, 4]);
    let ch = ch_uq_minus(&Quiver::a2(), &bx).unwrap();
    // 1 / ((1 - x)(1 - y)(1 - xy)): the coefficient of x^a y^b is min(a, b) + 1.
    for v in bx.points_below() {
        assert_eq!(ch.coeff(&v), BigInt::from(v.0[0].min(v.0[1]) + 1), "{v}");
    }
}
