//! Refined Chow–Künneth projectors, the correspondence `Γ` between two cubic
//! fourfolds built from an isometry of transcendental parts, its Frobenius
//! compatibility, and the analogous certificate between a cubic fourfold and a
//! K3 surface. Everything is checked on realized classes.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::CertError;
use crate::gradedring::VarietyData;
use crate::linalg::{self, Matrix, Vector};
use crate::mukai::{self, MukaiSpace};
use crate::quadform::{self, GroupAction, Isometry, QuadSpace, WittInput};
use crate::rational::{self, int, Rational};
use crate::realization::{self, Factor, IdentityCheck, RealizationConfig, RealizedClass};

fn validate_orthogonal_basis(space: &QuadSpace, basis: &[Vector]) -> Result<(), CertError> {
    for (i, a) in basis.iter().enumerate() {
        if a.len() != space.dim() {
            return Err(CertError::AlgebraicBasis(format!("vector {i} has the wrong length")));
        }
        if space.q(a).is_zero() {
            return Err(CertError::AlgebraicBasis(format!("vector {i} is isotropic")));
        }
        for (j, b) in basis.iter().enumerate().skip(i + 1) {
            if !space.b(a, b).is_zero() {
                return Err(CertError::AlgebraicBasis(format!("vectors {i} and {j} are not orthogonal")));
            }
        }
    }
    Ok(())
}

/// A cubic fourfold's realization data with its algebraic primitive classes.
#[derive(Clone, Debug)]
pub struct FourfoldData {
    pub cfg: Arc<RealizationConfig>,
    pub alg_basis: Vec<Vector>,
    pub group: GroupAction,
}

impl FourfoldData {
    pub fn new(
        cfg: Arc<RealizationConfig>,
        alg_basis: Vec<Vector>,
        group: Option<GroupAction>,
    ) -> Result<Self, CertError> {
        let prim = cfg.prim();
        validate_orthogonal_basis(prim, &alg_basis)?;
        let group = group.unwrap_or_else(|| GroupAction::trivial(prim.dim()));
        if group.dim() != prim.dim() {
            return Err(CertError::GroupMismatch("group acts on a space of the wrong dimension".into()));
        }
        if let Some(i) = alg_basis.iter().position(|a| !group.fixes(a)) {
            return Err(CertError::AlgebraicBasis(format!("vector {i} is not fixed by the group")));
        }
        Ok(FourfoldData { cfg, alg_basis, group })
    }

    pub fn prim(&self) -> &QuadSpace {
        self.cfg.prim()
    }

    pub fn factor(&self) -> &Arc<Factor> {
        self.cfg.factor()
    }

    /// Canonical basis of the orthogonal complement of the algebraic classes.
    pub fn transcendental_basis(&self) -> Vec<Vector> {
        self.prim().orthogonal_complement(&self.alg_basis)
    }

    pub fn transcendental_form(&self) -> QuadSpace {
        self.prim().restrict(&self.transcendental_basis())
    }

    /// The group action in transcendental coordinates, element by element.
    pub fn transcendental_group(&self) -> Vec<Matrix> {
        let t = self.transcendental_basis();
        restrict_group(&self.group, &t, self.prim().dim())
    }

    /// The numerical lattice `⟨λ₁, λ₂⟩ ⊕ span(αᵢ)` in the basis `(λ₁, λ₂, α₁, …)`.
    pub fn numerical_lattice(&self) -> QuadSpace {
        let s = MukaiSpace::new(self.prim().clone()).expect("non-degenerate form");
        let (l1, l2) = mukai::lambda_basis(s.variety());
        let a2 = s.gram_of(&[s.from_poly(l1), s.from_poly(l2)]);
        let alg: Vec<Rational> = self.alg_basis.iter().map(|a| self.prim().q(a)).collect();
        QuadSpace::new(a2.direct_sum(&Matrix::diagonal(&alg))).expect("symmetric")
    }
}

fn restrict_group(g: &GroupAction, basis: &[Vector], dim: usize) -> Vec<Matrix> {
    let b = Matrix::from_columns(dim, basis);
    g.elements()
        .iter()
        .map(|m| {
            let cols: Vec<Vector> = basis
                .iter()
                .map(|t| b.solve(&m.mul_vec(t)).expect("the group preserves the subspace"))
                .collect();
            Matrix::from_columns(basis.len(), &cols)
        })
        .collect()
}

fn h_term(f: &Arc<Factor>, g: &Arc<Factor>, a: usize, b: usize, c: Rational) -> RealizedClass {
    RealizedClass::from_entries(vec![f.clone(), g.clone()], [(vec![f.h(a), g.h(b)], c)])
}

/// `(π⁴_alg, π⁴_tr)` realized on `X × X`.
pub fn build_refined_projectors(d: &FourfoldData) -> (RealizedClass, RealizedClass) {
    let f = d.factor();
    let third = f.degree().recip();
    let mut alg = h_term(f, f, 2, 2, third);
    for a in &d.alg_basis {
        let qa = d.prim().q(a);
        alg = alg
            .add(&RealizedClass::prim_outer(f, a, f, a).scale(&qa.recip()))
            .expect("same factors");
    }
    let pi4 = d.cfg.realize(&d.cfg.ring().ck_projectors().p4);
    let tr = pi4.sub(&alg).expect("same factors");
    (alg, tr)
}

/// An isometry between the numerical lattices of two fourfolds, fixing
/// nothing in particular; it plays the role of the map induced on numerical
/// classes of the two K3-like components.
#[derive(Clone, Debug)]
pub struct KuznetsovShadow {
    pub map: Isometry,
}

impl KuznetsovShadow {
    /// The identity in the bases `(λ₁, λ₂, αᵢ)`, valid when `q(αᵢ) = q(α'ᵢ)`.
    pub fn matching(d1: &FourfoldData, d2: &FourfoldData) -> Result<Self, CertError> {
        let (n1, n2) = (d1.numerical_lattice(), d2.numerical_lattice());
        if n1 != n2 {
            return Err(CertError::AlgebraicMismatch(
                "algebraic classes have different norms".into(),
            ));
        }
        Ok(KuznetsovShadow {
            map: Isometry::identity(n1.dim()),
        })
    }
}

/// The isometry `span(αᵢ) → span(α'ᵢ)` obtained by Witt cancellation of the
/// `λ`-plane from the numerical lattices, as images `φ(αᵢ)` in `V'`.
pub fn algebraic_isometry(
    d1: &FourfoldData,
    d2: &FourfoldData,
    kuz: &KuznetsovShadow,
) -> Result<Vec<Vector>, CertError> {
    let (n1, n2) = (d1.numerical_lattice(), d2.numerical_lattice());
    if n1.dim() != n2.dim() {
        return Err(CertError::AlgebraicMismatch("algebraic ranks differ".into()));
    }
    let n = n1.dim();
    // Algebraic classes are fixed by the group, so it acts trivially here.
    let triv = GroupAction::trivial(n);
    let lambda = vec![linalg::unit_vec(n, 0), linalg::unit_vec(n, 1)];
    let ext = quadform::equivariant_witt(&WittInput {
        v1: &n1,
        g1: &triv,
        v2: &n2,
        g2: &triv,
        w1: &lambda,
        w2: &lambda,
        phi: &kuz.map,
        psi: &Isometry::identity(2),
    })?;
    let dim2 = d2.prim().dim();
    (0..d1.alg_basis.len())
        .map(|i| {
            let img = ext.full.apply(&linalg::unit_vec(n, 2 + i));
            if !img[0].is_zero() || !img[1].is_zero() {
                return Err(CertError::AlgebraicMismatch("image leaves the algebraic span".into()));
            }
            let mut v = vec![Rational::zero(); dim2];
            for (j, a) in d2.alg_basis.iter().enumerate() {
                linalg::axpy(&img[2 + j], a, &mut v);
            }
            Ok(v)
        })
        .collect()
}

/// Names of the six summands of `Γ`, in order.
pub const GAMMA_SUMMANDS: [&str; 6] = ["h4x1", "h3xh", "alg4", "tr", "hxh3", "1xh4"];

/// The summands of `Γ` for given algebraic images and transcendental map.
pub fn gamma_summands(
    d1: &FourfoldData,
    d2: &FourfoldData,
    phi_alg: &[Vector],
    iso_tr: &Matrix,
) -> Vec<(&'static str, RealizedClass)> {
    let (f, g) = (d1.factor(), d2.factor());
    let third = f.degree().recip();
    let mut alg4 = h_term(f, g, 2, 2, third.clone());
    for (a, pa) in d1.alg_basis.iter().zip(phi_alg) {
        let qa = d1.prim().q(a);
        alg4 = alg4
            .add(&RealizedClass::prim_outer(f, a, g, pa).scale(&qa.recip()))
            .expect("same factors");
    }
    let t1 = d1.transcendental_basis();
    let t2 = d2.transcendental_basis();
    let gt_inv = d1.transcendental_form().gram().inverse().expect("non-degenerate");
    let dual: Vec<Vector> = (0..t1.len())
        .map(|j| {
            let mut v = vec![Rational::zero(); d1.prim().dim()];
            for (k, t) in t1.iter().enumerate() {
                linalg::axpy(&gt_inv[(j, k)], t, &mut v);
            }
            v
        })
        .collect();
    let t2m = Matrix::from_columns(d2.prim().dim(), &t2);
    let mut tr = RealizedClass::zero(vec![f.clone(), g.clone()]);
    for (j, tj) in dual.iter().enumerate() {
        let img = t2m.mul_vec(&iso_tr.column(j));
        tr = tr.add(&RealizedClass::prim_outer(f, tj, g, &img)).expect("same factors");
    }
    vec![
        ("h4x1", h_term(f, g, 4, 0, third.clone())),
        ("h3xh", h_term(f, g, 3, 1, third.clone())),
        ("alg4", alg4),
        ("tr", tr),
        ("hxh3", h_term(f, g, 1, 3, third.clone())),
        ("1xh4", h_term(f, g, 0, 4, third)),
    ]
}

/// A correspondence `Γ` on `X × X'` with its verified identities.
#[derive(Clone, Debug)]
pub struct GammaCert {
    pub source: FourfoldData,
    pub target: FourfoldData,
    pub summands: Vec<(&'static str, RealizedClass)>,
    pub gamma: RealizedClass,
    pub checks: Vec<IdentityCheck>,
}

impl GammaCert {
    /// Assemble `Γ` from summands and run the isomorphism checks.
    pub fn from_summands(
        source: FourfoldData,
        target: FourfoldData,
        summands: Vec<(&'static str, RealizedClass)>,
    ) -> Self {
        let (f, g) = (source.factor().clone(), target.factor().clone());
        let gamma = summands
            .iter()
            .fold(RealizedClass::zero(vec![f.clone(), g.clone()]), |acc, (_, s)| {
                acc.add(s).expect("same factors")
            });
        let gt = gamma.transpose().expect("two factors");
        let compose = |a: &RealizedClass, b: &RealizedClass| {
            RealizedClass::compose(a, b).expect("matching factors")
        };
        let mut checks = vec![
            IdentityCheck::compare("tΓ∘Γ = Δ_X", &compose(&gamma, &gt), &RealizedClass::diagonal(&f)),
            IdentityCheck::compare("Γ∘tΓ = Δ_X'", &compose(&gt, &gamma), &RealizedClass::diagonal(&g)),
        ];
        let mut push_ok = true;
        let mut witness = String::new();
        for i in 0..=f.dim() {
            let img = RealizedClass::act(&gamma, &RealizedClass::h_power(&f, i)).expect("shapes");
            if let Some(w) = img.diff_witness(&RealizedClass::h_power(&g, i)) {
                push_ok = false;
                witness = format!("Γ_*(h^{i}): {w}");
                break;
            }
        }
        checks.push(IdentityCheck::from_bool("Γ_*h^i = h'^i", push_ok, || witness));
        if source.group.order() > 1 || target.group.order() > 1 {
            let m = prim_map(&gamma);
            let ok = quadform::intertwines(&m, &source.group, &target.group);
            checks.push(IdentityCheck::from_bool("Γ is equivariant", ok, || {
                "Γ_* does not commute with the group".into()
            }));
        }
        GammaCert {
            source,
            target,
            summands,
            gamma,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// A copy with the summand `name` multiplied by `s`.
    pub fn with_scaled_summand(&self, name: &str, s: &Rational) -> GammaCert {
        let summands = self
            .summands
            .iter()
            .map(|(n, x)| (*n, if *n == name { x.scale(s) } else { x.clone() }))
            .collect();
        GammaCert::from_summands(self.source.clone(), self.target.clone(), summands)
    }
}

/// `Γ_*` restricted to `V → V'`, in coordinates.
pub fn prim_map(gamma: &RealizedClass) -> Matrix {
    let (f, g) = (&gamma.factors()[0], &gamma.factors()[1]);
    let cols: Vec<Vector> = (0..f.rank())
        .map(|i| {
            let unit = linalg::unit_vec(f.rank(), i);
            let img = RealizedClass::act(gamma, &RealizedClass::prim_vector(f, &unit)).expect("shapes");
            (0..g.rank()).map(|j| img.get(&[g.e(j)])).collect()
        })
        .collect();
    Matrix::from_columns(g.rank(), &cols)
}

/// Build `Γ` from an isometry of transcendental parts, in the canonical bases,
/// matching algebraic classes of equal norm in order.
pub fn build_gamma(d1: &FourfoldData, d2: &FourfoldData, iso_tr: &Isometry) -> Result<GammaCert, CertError> {
    build_gamma_with_shadow(d1, d2, iso_tr, &KuznetsovShadow::matching(d1, d2)?)
}

/// As [`build_gamma`], with the algebraic correspondence fixed by `kuz`.
pub fn build_gamma_with_shadow(
    d1: &FourfoldData,
    d2: &FourfoldData,
    iso_tr: &Isometry,
    kuz: &KuznetsovShadow,
) -> Result<GammaCert, CertError> {
    let (tf1, tf2) = (d1.transcendental_form(), d2.transcendental_form());
    if tf1.dim() != tf2.dim() {
        return Err(CertError::RankMismatch(tf1.dim(), tf2.dim()));
    }
    if !iso_tr.is_isometry(&tf1, &tf2) {
        return Err(CertError::TranscendentalNotIsometric);
    }
    if d1.group.order() != d2.group.order() {
        return Err(CertError::GroupMismatch("groups have different orders".into()));
    }
    let (g1, g2) = (d1.transcendental_group(), d2.transcendental_group());
    if g1.iter().zip(&g2).any(|(a, b)| iso_tr.matrix.mul(a) != b.mul(&iso_tr.matrix)) {
        return Err(CertError::TranscendentalNotEquivariant);
    }
    let phi = algebraic_isometry(d1, d2, kuz)?;
    let summands = gamma_summands(d1, d2, &phi, &iso_tr.matrix);
    Ok(GammaCert::from_summands(d1.clone(), d2.clone(), summands))
}

/// `(Γ⊗Γ)_*Δ = Δ'` and `(Γ⊗Γ⊗Γ)_*δ = δ'`, the latter directly and through
/// the decomposition `δ = (1/3)[Δ₁₂h₃⁴ + Δ₁₃h₂⁴ + Δ₂₃h₁⁴] + P(h₁,h₂,h₃)`.
pub fn verify_frobenius(cert: &GammaCert) -> Result<Vec<IdentityCheck>, CertError> {
    let (c1, c2) = (&cert.source.cfg, &cert.target.cfg);
    let (f, g) = (c1.factor(), c2.factor());
    let gamma = &cert.gamma;
    let delta2 = RealizedClass::diagonal(g);
    let moved_delta = RealizedClass::diagonal(f).transport(gamma)?;
    let mut out = vec![IdentityCheck::compare("(Γ⊗Γ)_*Δ = Δ'", &moved_delta, &delta2)];

    let small2 = c2.small_diagonal();
    let direct = c1.small_diagonal().transport(gamma)?;
    out.push(IdentityCheck::compare("(Γ⊗Γ⊗Γ)_*δ = δ' (direct)", &direct, small2));

    let p = realization::derive_p(c1)?;
    let images: Vec<RealizedClass> = (0..=f.dim())
        .map(|i| RealizedClass::act(gamma, &RealizedClass::h_power(f, i)).expect("shapes"))
        .collect();
    let three = vec![g.clone(); 3];
    let third = f.degree().recip();
    let mut via = RealizedClass::zero(three.clone());
    for (pair, other) in [([0, 1], 2), ([0, 2], 1), ([1, 2], 0)] {
        let d = moved_delta.pull(&three, &pair)?;
        let h = images[f.dim()].pull(&three, &[other])?;
        via = via.add(&d.product(&h)?.scale(&third))?;
    }
    for (e, c) in &p {
        let mut term = RealizedClass::from_entries(three.clone(), [(vec![0, 0, 0], c.clone())]);
        for (i, &k) in e.iter().enumerate() {
            term = term.product(&images[k as usize].pull(&three, &[i])?)?;
        }
        via = via.add(&term)?;
    }
    out.push(IdentityCheck::compare("(Γ⊗Γ⊗Γ)_*δ = δ' (via P)", &via, small2));
    out.push(IdentityCheck::compare("δ-transport routes agree", &via, &direct));
    Ok(out)
}

/// A K3 surface: its realization factor and algebraic primitive classes.
#[derive(Clone, Debug)]
pub struct SurfaceData {
    pub vd: VarietyData,
    pub factor: Arc<Factor>,
    pub ns_basis: Vec<Vector>,
}

impl SurfaceData {
    pub fn new(degree: u32, prim2: QuadSpace, ns_basis: Vec<Vector>) -> Result<Self, CertError> {
        let vd = VarietyData::k3(degree).map_err(|e| CertError::AlgebraicBasis(e.to_string()))?;
        validate_orthogonal_basis(&prim2, &ns_basis)?;
        let factor = Arc::new(Factor::new(2, int(degree as i64), prim2)?);
        Ok(SurfaceData { vd, factor, ns_basis })
    }

    pub fn prim(&self) -> &QuadSpace {
        self.factor.prim()
    }

    pub fn transcendental_basis(&self) -> Vec<Vector> {
        self.prim().orthogonal_complement(&self.ns_basis)
    }

    pub fn transcendental_form(&self) -> QuadSpace {
        self.prim().restrict(&self.transcendental_basis())
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceProjectors {
    pub p0: RealizedClass,
    pub p2_alg: RealizedClass,
    pub p2_tr: RealizedClass,
    pub p4: RealizedClass,
}

impl SurfaceProjectors {
    pub fn all(&self) -> [(&'static str, &RealizedClass); 4] {
        [
            ("pi0", &self.p0),
            ("pi2alg", &self.p2_alg),
            ("pi2tr", &self.p2_tr),
            ("pi4", &self.p4),
        ]
    }
}

/// `π⁰ = o × S`, `π⁴ = S × o`, `π²_alg = (1/e) h × h + Σ βᵢ × βᵢ / q(βᵢ)` and the rest.
pub fn surface_ck(s: &SurfaceData) -> SurfaceProjectors {
    let f = &s.factor;
    let inv_e = f.degree().recip();
    let p0 = h_term(f, f, 2, 0, inv_e.clone());
    let p4 = h_term(f, f, 0, 2, inv_e.clone());
    let mut p2_alg = h_term(f, f, 1, 1, inv_e);
    for b in &s.ns_basis {
        let qb = s.prim().q(b);
        p2_alg = p2_alg
            .add(&RealizedClass::prim_outer(f, b, f, b).scale(&qb.recip()))
            .expect("same factors");
    }
    let p2_tr = RealizedClass::diagonal(f)
        .sub(&p0)
        .and_then(|x| x.sub(&p4))
        .and_then(|x| x.sub(&p2_alg))
        .expect("same factors");
    SurfaceProjectors { p0, p2_alg, p2_tr, p4 }
}

/// Idempotence, mutual orthogonality and completeness of a projector family on `F × F`.
pub fn projector_family_checks(f: &Arc<Factor>, family: &[(&str, &RealizedClass)]) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let mut total = RealizedClass::zero(vec![f.clone(), f.clone()]);
    for (i, (na, a)) in family.iter().enumerate() {
        total = total.add(a).expect("same factors");
        for (j, (nb, b)) in family.iter().enumerate() {
            let c = RealizedClass::compose(b, a).expect("same factors");
            out.push(if i == j {
                IdentityCheck::compare(&format!("{na}∘{na} = {na}"), &c, a)
            } else {
                IdentityCheck::from_bool(&format!("{na}∘{nb} = 0"), c.is_zero(), || {
                    format!("{} nonzero entries", c.entries().len())
                })
            });
        }
    }
    out.push(IdentityCheck::compare("sum = Δ", &total, &RealizedClass::diagonal(f)));
    out
}

/// `Γ_tr` between the transcendental parts of a cubic fourfold and a K3 surface.
#[derive(Clone, Debug)]
pub struct TranscendentalCert {
    pub gamma: RealizedClass,
    pub checks: Vec<IdentityCheck>,
}

impl TranscendentalCert {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `Γ_tr = Σ tⱼ^* × iso(tⱼ)` on `X × S`, checked against both transcendental projectors.
pub fn build_gamma_cubic_k3(
    dx: &FourfoldData,
    ds: &SurfaceData,
    iso: &Isometry,
) -> Result<TranscendentalCert, CertError> {
    let (tx, ts) = (dx.transcendental_form(), ds.transcendental_form());
    if tx.dim() != ts.dim() {
        return Err(CertError::RankMismatch(tx.dim(), ts.dim()));
    }
    if !iso.is_isometry(&tx, &ts) {
        return Err(CertError::TranscendentalNotIsometric);
    }
    let (f, g) = (dx.factor(), &ds.factor);
    let t1 = dx.transcendental_basis();
    let t2m = Matrix::from_columns(ds.prim().dim(), &ds.transcendental_basis());
    let gt_inv = tx.gram().inverse().expect("non-degenerate");
    let mut gamma = RealizedClass::zero(vec![f.clone(), g.clone()]);
    for j in 0..t1.len() {
        let mut dual = vec![Rational::zero(); dx.prim().dim()];
        for (k, t) in t1.iter().enumerate() {
            linalg::axpy(&gt_inv[(j, k)], t, &mut dual);
        }
        let img = t2m.mul_vec(&iso.matrix.column(j));
        gamma = gamma.add(&RealizedClass::prim_outer(f, &dual, g, &img))?;
    }
    let gt = gamma.transpose()?;
    let (_, pi_x) = build_refined_projectors(dx);
    let pi_s = surface_ck(ds).p2_tr;
    let mut checks = vec![
        IdentityCheck::compare("tΓtr∘Γtr = π4tr(X)", &RealizedClass::compose(&gamma, &gt)?, &pi_x),
        IdentityCheck::compare("Γtr∘tΓtr = π2tr(S)", &RealizedClass::compose(&gt, &gamma)?, &pi_s),
    ];
    let m = prim_map(&gamma);
    let preserved = t1
        .iter()
        .all(|a| t1.iter().all(|b| ds.prim().b(&m.mul_vec(a), &m.mul_vec(b)) == dx.prim().b(a, b)));
    checks.push(IdentityCheck::from_bool("q'∘Γ = q on T(X)", preserved, || {
        "pairing not preserved".into()
    }));
    Ok(TranscendentalCert { gamma, checks })
}

/// Human form of a rational vector.
pub fn vector_string(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::display).collect();
    format!("({})", parts.join(", "))
}
