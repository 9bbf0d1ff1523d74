use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cubic_motives::gradedring::{self, TruncPoly, VarietyData};
use cubic_motives::instances;
use cubic_motives::linalg::{self, Matrix};
use cubic_motives::motiveiso::{self, FourfoldData, SurfaceData, GAMMA_SUMMANDS};
use cubic_motives::mukai::{self, MukaiSpace};
use cubic_motives::quadform::{self, Isometry, QuadSpace};
use cubic_motives::rational::{frac, int, Rational};
use cubic_motives::realization::{self, RealizationConfig};
use cubic_motives::error::{CertError, QuadError};
use cubic_motives::tautcorr::{CorrClass, TautRing};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Failures collected by one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Written straight to stdout so the lines survive output capture.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn run(id: &str, title: &str, limit: Duration, f: impl FnOnce(&mut Outcome)) -> bool {
    let mut o = Outcome::default();
    let start = Instant::now();
    f(&mut o);
    let took = start.elapsed();
    o.check(took < limit, || format!("took {took:.2?}, limit {limit:?}"));
    let ok = o.failures.is_empty();
    let status = if ok { "PASS" } else { "FAIL" };
    emit(&format!("{status} {id} {title} ({:.2}s)", took.as_secs_f64()));
    for w in o.failures.iter().take(5) {
        emit(&format!("    {w}"));
    }
    ok
}

fn binom(t: i64, k: i64) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * int(t - i) / int(i + 1))
}

fn chi_cubic(t: i64) -> Rational {
    binom(t + 5, 5) - binom(t + 2, 5)
}

fn random_cfg(seed: u64) -> RealizationConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RealizationConfig::new(QuadSpace::new(instances::random_gram(&mut rng, 22)).unwrap()).unwrap()
}

fn default_cfg() -> RealizationConfig {
    RealizationConfig::new(QuadSpace::new(instances::default_gram(22)).unwrap()).unwrap()
}

fn ac1(o: &mut Outcome) {
    let vd = VarietyData::cubic_fourfold();
    let (c, _) = gradedring::tangent_chern(&vd).unwrap();
    // (1+h)^6 / (1+3h), expanded by hand.
    let oracle: Vec<Rational> = (0..5i64)
        .map(|k| (0..=k).map(|j| binom(6, j) * int((-3i64).pow((k - j) as u32))).sum())
        .collect();
    o.check(c.coeffs() == oracle.as_slice(), || format!("c = {c}"));
    o.check(c == TruncPoly::from_i64(vd, &[1, 3, 6, 2, 9]), || format!("c = {c}"));
    let (td, sqrt) = gradedring::todd_and_sqrt(&c).unwrap();
    o.check(td.integrate() == chi_cubic(0), || format!("int td = {}", td.integrate()));
    let c4 = TruncPoly::monomial(vd, 4, c.coeff(4)).integrate();
    o.check(c4 == int(27), || format!("int c4 = {c4}"));
    o.check(&sqrt * &sqrt == td, || "sqrt(td)^2 != td".into());
}

fn ac2(o: &mut Outcome) {
    let s = MukaiSpace::new(QuadSpace::new(instances::default_gram(22)).unwrap()).unwrap();
    let lines: Vec<_> = (0..3).map(|i| s.line(i)).collect();
    let g = s.gram_of(&lines);
    o.check(g == Matrix::from_i64(&[&[1, 6, 21], &[0, 1, 6], &[0, 0, 1]]), || format!("{g:?}"));
    for (i, a) in lines.iter().enumerate() {
        for (j, b) in lines.iter().enumerate() {
            let t = j as i64 - i as i64;
            o.check(s.pairing(a, b) == chi_cubic(t), || format!("entry ({i},{j}) vs chi(O({t}))"));
        }
    }
    for i in -4..=4 {
        for j in -4..=4 {
            let v = s.pairing(&s.line(i), &s.line(j));
            o.check(v == chi_cubic(j - i), || format!("<O({i}),O({j})> = {v}"));
        }
    }
}

fn ac3(o: &mut Outcome) {
    let s = MukaiSpace::new(QuadSpace::new(instances::default_gram(22)).unwrap()).unwrap();
    let (l1, l2) = mukai::lambda_basis(s.variety());
    let paper_l1 = [int(3), frac(5, 4), frac(-7, 32), frac(-77, 384), frac(41, 2048)];
    let paper_l2 = [int(-3), frac(-1, 4), frac(15, 32), frac(1, 384), frac(-153, 2048)];
    o.check(l1.coeffs() == paper_l1 && l2.coeffs() == paper_l2, || "lambda coefficients".into());
    let ls = [s.from_poly(l1), s.from_poly(l2)];
    let g = s.gram_of(&ls);
    o.check(g == Matrix::from_i64(&[&[-2, 1], &[1, -2]]), || format!("{g:?}"));
    let mut vs: Vec<_> = (0..3).map(|i| s.line(i).poly.coeffs().to_vec()).collect();
    vs.extend(ls.iter().map(|l| l.poly.coeffs().to_vec()));
    o.check(linalg::rank_of(&vs, 5) == 5, || "span is not Q[h]/h^5".into());
}

fn ac4(o: &mut Outcome) {
    let ring = TautRing::cubic();
    let p = ring.ck_projectors();
    let mut total = CorrClass::zero(2);
    for (na, a) in p.graded() {
        total = &total + a;
        for (nb, b) in p.graded() {
            let c = ring.compose(b, a).unwrap();
            if na == nb {
                o.check(&c == a, || format!("{na} not idempotent"));
            } else {
                o.check(c.is_zero(), || format!("{na}∘{nb} != 0"));
            }
        }
    }
    o.check(total == CorrClass::diagonal(), || "projectors do not sum to the diagonal".into());
    let pp = &p.p4_prim;
    o.check(&ring.compose(pp, pp).unwrap() == pp, || "pi4prim not idempotent".into());
    o.check(&ring.transpose(pp).unwrap() == pp, || "pi4prim not self-transpose".into());
    o.check(&ring.compose(&p.p4, pp).unwrap() == pp, || "pi4prim∘pi4".into());
    o.check(&ring.compose(pp, &p.p4).unwrap() == pp, || "pi4∘pi4prim".into());
    let h1 = CorrClass::mono(2, [1, 0, 0]);
    let h2 = CorrClass::mono(2, [0, 1, 0]);
    let zs = ring.monomials(2, 3);
    o.check(zs.len() == 4, || format!("{} codimension-3 monomials", zs.len()));
    for z in zs {
        let a = ring.compose(&ring.intersect(&z, &h1).unwrap(), pp).unwrap();
        let b = ring.compose(pp, &ring.intersect(&z, &h2).unwrap()).unwrap();
        o.check(a.is_zero() && b.is_zero(), || format!("h-vanishing fails for {z}"));
    }
}

fn ac5(o: &mut Outcome) {
    for (label, cfg) in [("default", default_cfg()), ("random", random_cfg(11))] {
        let checks = realization::verify_kernel_identities(&cfg);
        o.check(checks.len() == 6, || format!("{label}: {} identities", checks.len()));
        for c in checks {
            o.check(c.passed, || format!("{label}: {} {:?}", c.name, c.witness));
        }
    }
}

fn ac6(o: &mut Outcome) {
    let c1 = default_cfg();
    let c2 = random_cfg(12);
    o.check(c1.prim() != c2.prim(), || "Gram matrices coincide".into());
    let (p1, p2) = match (realization::derive_p(&c1), realization::derive_p(&c2)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            o.check(false, || format!("V-components present: {:?} {:?}", a.err(), b.err()));
            return;
        }
    };
    for (e, c) in &p1 {
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let f = perm.map(|i| e[i]);
            o.check(p1.get(&f) == Some(c), || format!("P not symmetric at {e:?}"));
        }
    }
    o.check(p1 == p2, || "P depends on the Gram matrix".into());
    let rem = c1.mck_remainder();
    let ind = |b: bool| i64::from(b);
    for a in 0..=4u8 {
        for b in 0..=4u8 {
            for c in 0..=4u8 {
                let d = rem.product(&c1.realize(&CorrClass::mono(3, [a, b, c]))).unwrap().degree();
                let (a, b, c) = (a as i64, b as i64, c as i64);
                let count = 3 * ind(a + b + c == 4)
                    - 3 * (ind(c == 0 && a + b == 4) + ind(b == 0 && a + c == 4) + ind(a == 0 && b + c == 4));
                o.check(d == int(count), || format!("deg(R·h^({a},{b},{c})) = {d}, expected {count}"));
            }
        }
    }
    for (e, c) in &p1 {
        let fours = e.iter().filter(|&&x| x == 4).count() as i64;
        let sum: u8 = e.iter().sum();
        o.check(sum == 8 && *c == frac(1 - fours, 9), || format!("P coefficient at {e:?} is {c}"));
    }
}

fn ac7(o: &mut Outcome) {
    for rank in [21, 22, 23] {
        let space = QuadSpace::new(instances::default_gram(rank)).unwrap();
        let mukai_ok = MukaiSpace::new(space.clone()).is_ok();
        let cfg = RealizationConfig::new(space);
        o.check(mukai_ok && cfg.is_ok(), || format!("rank {rank} fails before the Euler check"));
        let Ok(cfg) = cfg else { continue };
        let euler = cfg.euler_check();
        o.check(euler.is_ok() == (rank == 22), || format!("rank {rank}: Euler check gave {euler:?}"));
        if let Err(e) = euler {
            o.check(e.expected == int(27) && e.got == int(5 + rank as i64), || format!("rank {rank}: {e}"));
        }
    }
}

fn ac8(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let w = instances::random_witt_instance(&mut rng);
        o.check(w.v1.dim() <= 6 && w.g1.order() <= 8 && w.w1.len() <= 2, || format!("instance {i} out of range"));
        match quadform::equivariant_witt(&w.input()) {
            Ok(ext) => {
                let m = &ext.full.matrix;
                o.check(m.congruence(w.v2.gram()) == *w.v1.gram(), || format!("instance {i}: M^T G2 M != G1"));
                let commutes = w.g1.elements().iter().zip(w.g2.elements()).all(|(a, b)| m.mul(a) == b.mul(m));
                o.check(commutes && w.g1.order() == w.g2.order(), || format!("instance {i}: not equivariant"));
                o.check(ext.restricted.is_isometry(&ext.u1(&w.v1), &ext.u2(&w.v2)), || {
                    format!("instance {i}: restriction not an isometry")
                });
            }
            Err(e) => o.check(false, || format!("instance {i}: {e}")),
        }
    }
    for i in 0..50 {
        let w = instances::degenerate_witt_instance(&mut rng);
        let r = quadform::equivariant_witt(&w.input());
        o.check(matches!(r, Err(QuadError::DegenerateComplement)), || format!("degenerate {i}: {r:?}"));
    }
}

fn ac9(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..20 {
        let pair = instances::random_fourfold_pair(&mut rng, 22, i % 4, i % 2 == 1).unwrap();
        let cert = match motiveiso::build_gamma(&pair.first, &pair.second, &pair.iso_tr) {
            Ok(c) => c,
            Err(e) => {
                o.check(false, || format!("pair {i}: {e}"));
                continue;
            }
        };
        for c in &cert.checks {
            o.check(c.passed, || format!("pair {i}: {} {:?}", c.name, c.witness));
        }
        let frob = motiveiso::verify_frobenius(&cert).unwrap();
        o.check(frob.len() == 4, || format!("pair {i}: {} Frobenius checks", frob.len()));
        for c in &frob {
            o.check(c.passed, || format!("pair {i}: {} {:?}", c.name, c.witness));
        }
        let factor = if i % 2 == 0 { int(0) } else { int(2) };
        for name in GAMMA_SUMMANDS {
            let bad = cert.with_scaled_summand(name, &factor);
            let caught = !bad.passed() || motiveiso::verify_frobenius(&bad).unwrap().iter().any(|c| !c.passed);
            o.check(caught, || format!("pair {i}: corrupting {name} went undetected"));
        }
    }
}

fn ac10(o: &mut Outcome) {
    let mut certify = |label: &str, x: &FourfoldData, s: &SurfaceData, iso: &Isometry| {
        match motiveiso::build_gamma_cubic_k3(x, s, iso) {
            Ok(c) => {
                for ch in &c.checks {
                    o.check(ch.passed, || format!("{label}: {} {:?}", ch.name, ch.witness));
                }
            }
            Err(e) => o.check(false, || format!("{label}: {e}")),
        }
    };
    let two = [int(2), int(2)];
    let x = FourfoldData::new(Arc::new(RealizationConfig::new(QuadSpace::diagonal(&two)).unwrap()), vec![], None).unwrap();
    let s = SurfaceData::new(2, QuadSpace::diagonal(&two), vec![]).unwrap();
    certify("toy", &x, &s, &Isometry::identity(2));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (x22, s22, iso22) = instances::random_cubic_k3(&mut rng, 22, 0, 2).unwrap();
    certify("rank 22", &x22, &s22, &iso22);
    let (x21, s21, iso21) = instances::random_cubic_k3(&mut rng, 22, 1, 2).unwrap();
    certify("rank 21", &x21, &s21, &iso21);
    let r = motiveiso::build_gamma_cubic_k3(&x22, &s21, &Isometry::identity(21));
    o.check(matches!(r, Err(CertError::RankMismatch(22, 21))), || "rank mismatch accepted".into());
    o.check(
        r.err().map(|e| e.to_string()).unwrap_or_default().contains("not Witt-equivalent"),
        || "mismatch message".into(),
    );
    let s_wrong = SurfaceData::new(2, QuadSpace::diagonal(&[int(2), int(1)]), vec![]).unwrap();
    o.check(motiveiso::build_gamma_cubic_k3(&x, &s_wrong, &Isometry::identity(2)).is_err(), || {
        "non-isometric map accepted".into()
    });
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    emit("\nacceptance criteria:");
    let results = [
        run("AC1", "Chern/Todd pipeline", s(1), ac1),
        run("AC2", "Mukai table", s(1), ac2),
        run("AC3", "lambda classes", s(1), ac3),
        run("AC4", "projector suite", s(5), ac4),
        run("AC5", "kernel identities", s(30), ac5),
        run("AC6", "derive_P", s(60), ac6),
        run("AC7", "Euler consistency", s(60), ac7),
        run("AC8", "equivariant Witt", s(60), ac8),
        run("AC9", "Gamma certificates", s(120), ac9),
        run("AC10", "cubic-K3", s(30), ac10),
    ];
    let passed = results.iter().filter(|&&b| b).count();
    emit(&format!("acceptance: {passed}/{} criteria passed", results.len()));
    assert!(results.iter().all(|&b| b));
}
