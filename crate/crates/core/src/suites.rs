//! Verification suites behind the command-line front end, and their reports.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{self, GramSource, RunConfig};
use crate::error::{CertError, ConfigError, QuadError};
use crate::gradedring::{self, TruncPoly, VarietyData};
use crate::instances;
use crate::linalg::{self, Matrix};
use crate::motiveiso::{self, FourfoldData, SurfaceData, GAMMA_SUMMANDS};
use crate::mukai::{self, MukaiSpace};
use crate::quadform::{self, Isometry, QuadSpace};
use crate::rational::{self, int, Rational};
use crate::realization::{self, IdentityCheck, RealizationConfig};
use crate::tautcorr::{CorrClass, TautRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub anchor: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    /// Tables and other output worth reading.
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
            notes: Vec::new(),
            seconds: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, id: &str, anchor: &str, passed: bool, witness: impl FnOnce() -> String) {
        self.checks.push(CheckResult {
            id: id.into(),
            anchor: anchor.into(),
            passed,
            witness: if passed { None } else { Some(witness()) },
        });
    }

    fn identity(&mut self, prefix: &str, anchor: &str, c: &IdentityCheck) {
        self.checks.push(CheckResult {
            id: format!("{prefix}{}", c.name),
            anchor: anchor.into(),
            passed: c.passed,
            witness: c.witness.clone(),
        });
    }

    pub fn markdown(&self) -> String {
        let mut s = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "## {} ({status}, {:.2}s)\n", self.suite, self.seconds);
        let _ = writeln!(s, "| check | anchor | result | witness |");
        let _ = writeln!(s, "|---|---|---|---|");
        for c in &self.checks {
            let r = if c.passed { "pass" } else { "FAIL" };
            let w = c.witness.as_deref().unwrap_or("").replace('|', "\\|");
            let _ = writeln!(s, "| {} | {} | {r} | {w} |", c.id, c.anchor);
        }
        for n in &self.notes {
            let _ = writeln!(s, "\n```\n{n}\n```");
        }
        s
    }
}

pub const SUITES: [&str; 9] = [
    "chern",
    "mukai-table",
    "projectors",
    "derive-p",
    "kernels",
    "euler",
    "witt",
    "gamma",
    "gamma-k3",
];

/// Everything the suites read: the run configuration and the two primitive forms.
#[derive(Clone, Debug)]
pub struct Context {
    pub run: RunConfig,
    pub gram: Matrix,
    pub second_gram: Matrix,
}

impl Context {
    pub fn new(run: RunConfig, source: GramSource) -> Result<Context, ConfigError> {
        let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
        let random = instances::random_gram(&mut rng, run.rank);
        let gram = match (source, &run.gram) {
            (GramSource::Explicit(m), _) => m,
            (GramSource::Random, _) => random.clone(),
            (GramSource::Default, Some(m)) => config::matrix(m)?,
            (GramSource::Default, None) => instances::default_gram(run.rank),
        };
        QuadSpace::new(gram.clone())?.require_nondegenerate()?;
        let second_gram = match &run.second_gram {
            Some(m) => config::matrix(m)?,
            None if random != gram => random,
            None => instances::random_gram(&mut rng, run.rank),
        };
        QuadSpace::new(second_gram.clone())?.require_nondegenerate()?;
        Ok(Context { run, gram, second_gram })
    }

    fn cfg(&self, m: &Matrix) -> Result<RealizationConfig, CertError> {
        Ok(RealizationConfig::new(QuadSpace::new(m.clone())?)?)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.run.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

pub fn run_suite(name: &str, ctx: &Context) -> Result<SuiteReport, CertError> {
    let start = Instant::now();
    let mut r = match name {
        "chern" => chern(),
        "mukai-table" => mukai_table(ctx),
        "projectors" => projectors(),
        "derive-p" => derive_p(ctx)?,
        "kernels" => kernels(ctx)?,
        "euler" => euler(),
        "witt" => witt(ctx),
        "gamma" => gamma(ctx)?,
        "gamma-k3" => gamma_k3(ctx)?,
        other => panic!("unknown suite {other}"),
    };
    r.seconds = start.elapsed().as_secs_f64();
    Ok(r)
}

fn poly_string(p: &TruncPoly) -> String {
    p.to_string()
}

pub fn chern() -> SuiteReport {
    const A: &str = "Chern and Todd classes of a cubic fourfold";
    let mut r = SuiteReport::new("chern");
    let vd = VarietyData::cubic_fourfold();
    let (c, _) = gradedring::tangent_chern(&vd).expect("cubic data");
    let expected = TruncPoly::from_i64(vd, &[1, 3, 6, 2, 9]);
    r.check("c(T_X)", A, c == expected, || format!("got {}", poly_string(&c)));
    let (td, sqrt) = gradedring::todd_and_sqrt(&c).expect("constant term 1");
    r.check("int td = 1", A, td.integrate().is_one(), || rational::display(&td.integrate()));
    let c4 = TruncPoly::monomial(vd, 4, c.coeff(4)).integrate();
    r.check("int c4 = 27", A, c4 == int(27), || rational::display(&c4));
    r.check("sqrt(td)^2 = td", A, &sqrt * &sqrt == td, || poly_string(&(&sqrt * &sqrt)));
    let k3 = VarietyData::k3(2).expect("valid");
    let (ck, _) = gradedring::tangent_chern(&k3).expect("k3");
    let (tdk, _) = gradedring::todd_and_sqrt(&ck).expect("k3");
    r.check("K3: int c2 = 24, int td = 2", A, ck.integrate() == int(24) && tdk.integrate() == int(2), || {
        format!("c = {}, td = {}", poly_string(&ck), poly_string(&tdk))
    });
    r.notes.push(format!("c = {}\ntd = {}\nsqrt td = {}", c, td, sqrt));
    r
}

fn binom(t: i64, k: i64) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * int(t - i) / int(i + 1))
}

/// `χ(O(t))` on a cubic fourfold from its Hilbert polynomial.
pub fn hilbert_cubic(t: i64) -> Rational {
    binom(t + 5, 5) - binom(t + 2, 5)
}

pub fn mukai_table(ctx: &Context) -> SuiteReport {
    const A: &str = "Mukai pairing on a cubic fourfold";
    const L: &str = "A2 lattice of the Kuznetsov component";
    let mut r = SuiteReport::new("mukai-table");
    let s = MukaiSpace::new(QuadSpace::new(ctx.gram.clone()).expect("validated")).expect("validated");
    let lines: Vec<_> = (0..3).map(|i| s.line(i)).collect();
    let g = s.gram_of(&lines);
    r.check("Gram of O, O(1), O(2)", A, g == Matrix::from_i64(&[&[1, 6, 21], &[0, 1, 6], &[0, 0, 1]]), || {
        format!("{g:?}")
    });
    let mut bad = None;
    for i in -4..=4 {
        for j in -4..=4 {
            let v = s.pairing(&s.line(i), &s.line(j));
            if v != hilbert_cubic(j - i) && bad.is_none() {
                bad = Some(format!("<O({i}), O({j})> = {}", rational::display(&v)));
            }
        }
    }
    r.check("Hilbert polynomial oracle, t in [-4, 4]", A, bad.is_none(), || bad.unwrap_or_default());
    let (l1, l2) = mukai::lambda_basis(s.variety());
    let ls = [s.from_poly(l1), s.from_poly(l2)];
    let lg = s.gram_of(&ls);
    r.check("lambda Gram", L, lg == Matrix::from_i64(&[&[-2, 1], &[1, -2]]), || format!("{lg:?}"));
    let mut all: Vec<_> = lines.iter().map(|l| l.poly.coeffs().to_vec()).collect();
    all.extend(ls.iter().map(|l| l.poly.coeffs().to_vec()));
    let rank = linalg::rank_of(&all, 5);
    r.check("span equals Q[h]/h^5", L, rank == 5, || format!("rank {rank}"));
    let table: Vec<String> = (0..3)
        .map(|i| {
            let row: Vec<String> = (0..3).map(|j| rational::display(&g[(i, j)])).collect();
            row.join(" ")
        })
        .collect();
    r.notes.push(table.join("\n"));
    r
}

pub fn projectors() -> SuiteReport {
    const A: &str = "Chow-Kunneth projectors of a cubic fourfold";
    const K: &str = "vanishing of h-multiples on the primitive projector";
    let mut r = SuiteReport::new("projectors");
    let ring = TautRing::cubic();
    let p = ring.ck_projectors();
    let graded = p.graded();
    let mut total = CorrClass::zero(2);
    for (na, a) in graded {
        total = &total + a;
        for (nb, b) in graded {
            let c = ring.compose(b, a).expect("X^2");
            if na == nb {
                r.check(&format!("{na} idempotent"), A, &c == a, || format!("{c}"));
            } else {
                r.check(&format!("{na}∘{nb} = 0"), A, c.is_zero(), || format!("{c}"));
            }
        }
    }
    r.check("sum = Δ", A, total == CorrClass::diagonal(), || format!("{total}"));
    let pp = &p.p4_prim;
    let sq = ring.compose(pp, pp).expect("X^2");
    r.check("pi4prim idempotent", A, &sq == pp, || format!("{sq}"));
    let t = ring.transpose(pp).expect("X^2");
    r.check("pi4prim self-transpose", A, &t == pp, || format!("{t}"));
    let l = ring.compose(&p.p4, pp).expect("X^2");
    let rr = ring.compose(pp, &p.p4).expect("X^2");
    r.check("pi4prim absorbs pi4", A, &l == pp && &rr == pp, || format!("{l} / {rr}"));
    let h1 = CorrClass::mono(2, [1, 0, 0]);
    let h2 = CorrClass::mono(2, [0, 1, 0]);
    let mut bad = None;
    for z in ring.monomials(2, 3) {
        let zh1 = ring.intersect(&z, &h1).expect("X^2");
        let zh2 = ring.intersect(&z, &h2).expect("X^2");
        let a = ring.compose(&zh1, pp).expect("X^2");
        let b = ring.compose(pp, &zh2).expect("X^2");
        if !(a.is_zero() && b.is_zero()) && bad.is_none() {
            bad = Some(format!("Z = {z}"));
        }
    }
    r.check("pi4prim∘(Z·h1) = (Z·h2)∘pi4prim = 0 for codim-3 Z", K, bad.is_none(), || {
        bad.unwrap_or_default()
    });
    r
}

pub fn derive_p(ctx: &Context) -> Result<SuiteReport, CertError> {
    const A: &str = "multiplicative relation for the small diagonal";
    let mut r = SuiteReport::new("derive-p");
    let c1 = ctx.cfg(&ctx.gram)?;
    let c2 = ctx.cfg(&ctx.second_gram)?;
    let p1 = realization::derive_p(&c1);
    r.check("remainder has no V-components", A, p1.is_ok(), || {
        p1.as_ref().err().map(|e| e.to_string()).unwrap_or_default()
    });
    let Ok(p1) = p1 else { return Ok(r) };
    r.check("P is S3-symmetric", A, realization::poly3_is_symmetric(&p1), || {
        realization::poly3_to_string(&p1)
    });
    let p2 = realization::derive_p(&c2);
    r.check("P independent of the Gram matrix", A, p2.as_ref() == Ok(&p1), || match &p2 {
        Ok(p) => realization::poly3_to_string(p),
        Err(e) => e.to_string(),
    });
    let rem = c1.mck_remainder();
    let mut bad = None;
    for a in 0..=4u8 {
        for b in 0..=4u8 {
            for c in 0..=4u8 {
                let m = c1.realize(&CorrClass::mono(3, [a, b, c]));
                let d = rem.product(&m)?.degree();
                if d != realization::remainder_degree_oracle(a, b, c) && bad.is_none() {
                    bad = Some(format!("deg(R·h1^{a}h2^{b}h3^{c}) = {}", rational::display(&d)));
                }
            }
        }
    }
    r.check("degree pairings with all 125 monomials", A, bad.is_none(), || bad.unwrap_or_default());
    r.notes.push(format!("P = {}", realization::poly3_to_string(&p1)));
    Ok(r)
}

pub fn kernels(ctx: &Context) -> Result<SuiteReport, CertError> {
    const A: &str = "mutation kernels projecting onto the Kuznetsov component";
    let mut r = SuiteReport::new("kernels");
    for (label, g) in [("G1", &ctx.gram), ("G2", &ctx.second_gram)] {
        let cfg = ctx.cfg(g)?;
        for c in realization::verify_kernel_identities(&cfg) {
            r.identity(&format!("{label}: "), A, &c);
        }
    }
    Ok(r)
}

/// Rank of `V` against `deg(Δ²) = ∫c₄ = 27`.
pub fn euler() -> SuiteReport {
    const A: &str = "Euler characteristic of a cubic fourfold";
    let mut r = SuiteReport::new("euler");
    for rank in [21usize, 22, 23] {
        let cfg = RealizationConfig::new(QuadSpace::new(instances::default_gram(rank)).expect("symmetric"));
        let outcome = cfg.as_ref().map(|c| c.euler_check());
        let expect_pass = rank == 22;
        let ok = match &outcome {
            Ok(Ok(())) => expect_pass,
            Ok(Err(_)) => !expect_pass,
            Err(_) => false,
        };
        r.check(
            &format!("rank {rank} {}", if expect_pass { "passes" } else { "fails only the Euler check" }),
            A,
            ok,
            || match outcome {
                Ok(Ok(())) => "Euler check passed".into(),
                Ok(Err(e)) => e.to_string(),
                Err(e) => format!("failed earlier: {e}"),
            },
        );
    }
    r
}

pub fn witt(ctx: &Context) -> SuiteReport {
    const A: &str = "equivariant Witt cancellation";
    let mut r = SuiteReport::new("witt");
    let mut rng = ctx.rng(1);
    let n = ctx.run.witt_instances;
    let (mut iso_bad, mut eq_bad, mut ext_bad) = (None, None, None);
    for i in 0..n {
        let w = instances::random_witt_instance(&mut rng);
        match quadform::equivariant_witt(&w.input()) {
            Ok(ext) => {
                let restricted_ok = ext.restricted.is_isometry(&ext.u1(&w.v1), &ext.u2(&w.v2));
                if !(ext.full.is_isometry(&w.v1, &w.v2) && restricted_ok) && iso_bad.is_none() {
                    iso_bad = Some(format!("instance {i}"));
                }
                if !ext.full.is_equivariant(&w.g1, &w.g2) && eq_bad.is_none() {
                    eq_bad = Some(format!("instance {i}"));
                }
                let extends = w
                    .w1
                    .iter()
                    .enumerate()
                    .all(|(j, x)| ext.full.apply(x) == psi_image(&w.w2, &w.psi, j));
                if !extends && ext_bad.is_none() {
                    ext_bad = Some(format!("instance {i}"));
                }
            }
            Err(e) => {
                iso_bad.get_or_insert(format!("instance {i}: {e}"));
            }
        }
    }
    r.check(&format!("M^T G2 M = G1 ({n} instances)"), A, iso_bad.is_none(), || iso_bad.unwrap_or_default());
    r.check(&format!("M commutes with G ({n} instances)"), A, eq_bad.is_none(), || eq_bad.unwrap_or_default());
    r.check(&format!("M extends psi ({n} instances)"), A, ext_bad.is_none(), || ext_bad.unwrap_or_default());
    let mut rejected = true;
    for _ in 0..20 {
        let w = instances::degenerate_witt_instance(&mut rng);
        if !matches!(quadform::equivariant_witt(&w.input()), Err(QuadError::DegenerateComplement)) {
            rejected = false;
        }
    }
    r.check("degenerate W rejected", A, rejected, || "accepted a degenerate W".into());
    r
}

fn psi_image(w2: &[linalg::Vector], psi: &Isometry, j: usize) -> linalg::Vector {
    let dim = w2.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); dim];
    for (k, w) in w2.iter().enumerate() {
        linalg::axpy(&psi.matrix[(k, j)], w, &mut out);
    }
    out
}

/// Outcome of certifying one pair, including negative controls.
#[derive(Clone, Debug)]
pub struct PairOutcome {
    pub checks: Vec<IdentityCheck>,
    /// Summands whose corruption went undetected.
    pub undetected: Vec<String>,
}

pub fn certify_pair(d1: &FourfoldData, d2: &FourfoldData, iso: &Isometry, controls: bool) -> Result<PairOutcome, CertError> {
    let cert = motiveiso::build_gamma(d1, d2, iso)?;
    let mut checks = cert.checks.clone();
    checks.extend(motiveiso::verify_frobenius(&cert)?);
    let mut undetected = Vec::new();
    if controls {
        for name in GAMMA_SUMMANDS {
            let bad = cert.with_scaled_summand(name, &int(2));
            let caught = !bad.passed() || motiveiso::verify_frobenius(&bad)?.iter().any(|c| !c.passed);
            if !caught {
                undetected.push(name.to_string());
            }
        }
    }
    Ok(PairOutcome { checks, undetected })
}

pub fn gamma(ctx: &Context) -> Result<SuiteReport, CertError> {
    const A: &str = "motives of cubic fourfolds with isometric transcendental parts";
    const F: &str = "Frobenius algebra structure";
    let mut r = SuiteReport::new("gamma");
    if let Some((d1, d2, iso)) = ctx.run.explicit_pair().map_err(|e| CertError::AlgebraicMismatch(e.to_string()))? {
        let out = certify_pair(&d1, &d2, &iso, false)?;
        for c in &out.checks {
            r.identity("config pair: ", A, c);
        }
    }
    let mut rng = ctx.rng(2);
    let n = ctx.run.gamma_pairs;
    let mut failures: Vec<(String, String)> = Vec::new();
    let mut undetected = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for i in 0..n {
        let alg = i % (ctx.run.max_alg_rank + 1);
        let pair = instances::random_fourfold_pair(&mut rng, ctx.run.rank, alg, i % 2 == 1)?;
        let out = certify_pair(&pair.first, &pair.second, &pair.iso_tr, true)?;
        for c in &out.checks {
            if !names.contains(&c.name) {
                names.push(c.name.clone());
            }
            if !c.passed {
                failures.push((c.name.clone(), format!("pair {i}: {}", c.witness.clone().unwrap_or_default())));
            }
        }
        undetected.extend(out.undetected.iter().map(|s| format!("pair {i}: {s}")));
    }
    for name in &names {
        let anchor = if name.contains('δ') || name.contains("Γ⊗Γ") { F } else { A };
        let first = failures.iter().find(|(n, _)| n == name).map(|(_, w)| w.clone());
        r.check(&format!("{name} ({n} pairs)"), anchor, first.is_none(), || first.unwrap_or_default());
    }
    r.check("every single-summand corruption detected", A, undetected.is_empty(), || undetected.join(", "));
    Ok(r)
}

pub fn gamma_k3(ctx: &Context) -> Result<SuiteReport, CertError> {
    const A: &str = "cubic fourfold and K3 surface with isometric transcendental parts";
    let mut r = SuiteReport::new("gamma-k3");
    let run = |r: &mut SuiteReport, label: &str, x: &FourfoldData, s: &SurfaceData, iso: &Isometry| -> Result<(), CertError> {
        let cert = motiveiso::build_gamma_cubic_k3(x, s, iso)?;
        for c in &cert.checks {
            r.identity(&format!("{label}: "), A, c);
        }
        Ok(())
    };
    if let Some((x, s, iso)) = ctx.run.explicit_k3().map_err(|e| CertError::AlgebraicMismatch(e.to_string()))? {
        run(&mut r, "config", &x, &s, &iso)?;
    }
    let two = [int(2), int(2)];
    let x = FourfoldData::new(Arc::new(RealizationConfig::new(QuadSpace::diagonal(&two))?), vec![], None)?;
    let s = SurfaceData::new(2, QuadSpace::diagonal(&two), vec![])?;
    run(&mut r, "toy diag(2,2)", &x, &s, &Isometry::identity(2))?;
    let mut rng = ctx.rng(3);
    let (x22, s22, iso22) = instances::random_cubic_k3(&mut rng, 22, 0, 2)?;
    run(&mut r, "rank 22", &x22, &s22, &iso22)?;
    let (x21, s21, iso21) = instances::random_cubic_k3(&mut rng, 22, 1, 2)?;
    run(&mut r, "rank 21", &x21, &s21, &iso21)?;
    let mismatch = motiveiso::build_gamma_cubic_k3(&x22, &s21, &Isometry::identity(21));
    r.check(
        "rank 22 against rank 21 is rejected",
        A,
        matches!(mismatch, Err(CertError::RankMismatch(22, 21))),
        || format!("{mismatch:?}").chars().take(200).collect(),
    );
    Ok(r)
}
