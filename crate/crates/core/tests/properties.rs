use std::sync::Arc;

use cubic_motives::gradedring::{TruncPoly, VarietyData};
use cubic_motives::instances;
use cubic_motives::linalg::Matrix;
use cubic_motives::motiveiso::{self, GAMMA_SUMMANDS};
use cubic_motives::mukai::MukaiSpace;
use cubic_motives::quadform::{self, QuadSpace};
use cubic_motives::rational::{frac, int, Rational};
use cubic_motives::realization::{RealizationConfig, RealizedClass};
use cubic_motives::tautcorr::{CorrClass, TautRing};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn poly() -> impl Strategy<Value = TruncPoly> {
    prop::collection::vec(rational(), 5).prop_map(|c| TruncPoly::new(VarietyData::cubic_fourfold(), c))
}

fn unipotent() -> impl Strategy<Value = TruncPoly> {
    prop::collection::vec(rational(), 4).prop_map(|mut c| {
        c.insert(0, int(1));
        TruncPoly::new(VarietyData::cubic_fourfold(), c)
    })
}

/// A random combination of normal-form basis classes on `X²`.
fn corr2() -> impl Strategy<Value = CorrClass> {
    let basis = TautRing::cubic().full_basis(2);
    let n = basis.len();
    prop::collection::vec((0..n, -3i64..=3), 1..5).prop_map(move |terms| {
        terms
            .iter()
            .fold(CorrClass::zero(2), |acc, &(i, c)| &acc + &basis[i].scale(&int(c)))
    })
}

fn default_cfg() -> &'static RealizationConfig {
    static CFG: std::sync::OnceLock<RealizationConfig> = std::sync::OnceLock::new();
    CFG.get_or_init(|| RealizationConfig::new(QuadSpace::new(instances::default_gram(22)).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_is_commutative_and_associative(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn dual_is_an_involution(a in poly()) {
        prop_assert_eq!(a.dual().dual(), a);
    }

    #[test]
    fn square_root_squares_back(u in unipotent()) {
        let s = u.sqrt().unwrap();
        prop_assert_eq!(&s * &s, u.clone());
        prop_assert_eq!(u.log().unwrap().exp_nilpotent(), u);
    }

    #[test]
    fn composition_routes_agree(f in corr2(), g in corr2()) {
        let r = TautRing::cubic();
        prop_assert_eq!(r.compose(&f, &g).unwrap(), r.compose_pull_push(&f, &g).unwrap());
    }

    #[test]
    fn transpose_reverses_composition(f in corr2(), g in corr2()) {
        let r = TautRing::cubic();
        let lhs = r.transpose(&r.compose(&f, &g).unwrap()).unwrap();
        let rhs = r.compose(&r.transpose(&g).unwrap(), &r.transpose(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mutations_land_in_the_orthogonal(c in prop::collection::vec(rational(), 8)) {
        let s = MukaiSpace::new(QuadSpace::diagonal(&[int(1), int(-1), int(2)])).unwrap();
        let a = s.from_coords(&c);
        let p = s.kuznetsov_project(&a);
        for i in 0..3 {
            prop_assert_eq!(s.pairing(&s.line(i), &p), int(0));
        }
        prop_assert_eq!(s.kuznetsov_project(&p), p);
    }

    #[test]
    fn reflections_move_vectors(x in prop::collection::vec(rational(), 4), u in prop::collection::vec(rational(), 4)) {
        let v = QuadSpace::diagonal(&[int(1), int(2), int(-1), int(3)]);
        prop_assume!(v.q(&u) != int(0));
        let y = v.reflection(&u).unwrap().mul_vec(&x);
        let (iso, count) = quadform::reflect_to(&x, &y, &v).unwrap();
        prop_assert!(count <= 2);
        prop_assert_eq!(iso.apply(&x), y);
        prop_assert!(iso.is_isometry(&v, &v));
    }

    #[test]
    fn equivariant_witt_returns_equivariant_isometries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = instances::random_witt_instance(&mut rng);
        let ext = quadform::equivariant_witt(&w.input()).unwrap();
        prop_assert!(ext.full.is_isometry(&w.v1, &w.v2));
        prop_assert!(ext.full.is_equivariant(&w.g1, &w.g2));
        prop_assert!(ext.restricted.is_isometry(&ext.u1(&w.v1), &ext.u2(&w.v2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn realization_is_functorial(f in corr2(), g in corr2()) {
        let cfg = default_cfg();
        let r = cfg.ring();
        let lhs = cfg.realize(&r.compose(&f, &g).unwrap());
        let rhs = RealizedClass::compose(&cfg.realize(&f), &cfg.realize(&g)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degrees_do_not_depend_on_the_gram_matrix(seed in any::<u64>(), a in 0u8..=4, b in 0u8..=4, c in 0u8..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let other = RealizationConfig::new(QuadSpace::new(instances::random_gram(&mut rng, 22)).unwrap()).unwrap();
        let m = CorrClass::mono(3, [a, b, c]);
        let x = &CorrClass::small_diagonal() + &m;
        let d1 = default_cfg().realize(&x).product(&default_cfg().realize(&m)).unwrap().degree();
        let d2 = other.realize(&x).product(&other.realize(&m)).unwrap().degree();
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn gamma_certificates_pass_and_corruptions_fail(seed in any::<u64>(), alg in 0usize..=2, group in any::<bool>(), which in 0usize..6, s in prop::sample::select(vec![(0i64, 1i64), (2, 1), (-2, 1), (1, 2), (3, 1)])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = instances::random_fourfold_pair(&mut rng, 5, alg, group).unwrap();
        let cert = motiveiso::build_gamma(&p.first, &p.second, &p.iso_tr).unwrap();
        prop_assert!(cert.passed());
        prop_assert!(motiveiso::verify_frobenius(&cert).unwrap().iter().all(|c| c.passed));
        // s = −1 on the transcendental summand gives another valid certificate.
        let bad = cert.with_scaled_summand(GAMMA_SUMMANDS[which], &frac(s.0, s.1));
        let caught = !bad.passed() || motiveiso::verify_frobenius(&bad).unwrap().iter().any(|c| !c.passed);
        prop_assert!(caught);
    }

    #[test]
    fn gamma_preserves_the_intersection_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = instances::random_fourfold_pair(&mut rng, 4, 1, false).unwrap();
        let cert = motiveiso::build_gamma(&p.first, &p.second, &p.iso_tr).unwrap();
        let (f, g): (&Arc<_>, &Arc<_>) = (p.first.factor(), p.second.factor());
        let push = |s: u16| {
            let mut v = RealizedClass::zero(vec![f.clone()]);
            v.add_entry(vec![s], int(1));
            RealizedClass::act(&cert.gamma, &v).unwrap()
        };
        let n = f.n_slots() as u16;
        let mut lhs = Matrix::zeros(n as usize, n as usize);
        for s in 0..n {
            for t in 0..n {
                lhs[(s as usize, t as usize)] = push(s).product(&push(t)).unwrap().degree();
            }
        }
        prop_assert_eq!(lhs, f.pairing_matrix());
        prop_assert_eq!(g.n_slots(), f.n_slots());
    }
}
