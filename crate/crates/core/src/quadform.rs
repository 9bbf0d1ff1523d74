//! Quadratic spaces over ℚ with finite isometry groups, reflections, and a
//! constructive equivariant Witt extension theorem.

use std::collections::{HashSet, VecDeque};

use num_traits::Zero;

use crate::error::QuadError;
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSpace {
    gram: Matrix,
    nondegenerate: bool,
}

impl QuadSpace {
    pub fn new(gram: Matrix) -> Result<Self, QuadError> {
        if !gram.is_symmetric() {
            return Err(QuadError::NotSymmetric);
        }
        let nondegenerate = gram.rows() == 0 || !gram.determinant().is_zero();
        Ok(QuadSpace { gram, nondegenerate })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        Self::new(Matrix::diagonal(entries)).expect("diagonal Gram matrices are symmetric")
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn require_nondegenerate(&self) -> Result<(), QuadError> {
        if self.nondegenerate {
            Ok(())
        } else {
            Err(QuadError::Degenerate)
        }
    }

    pub fn b(&self, x: &[Rational], y: &[Rational]) -> Rational {
        linalg::form(&self.gram, x, y)
    }

    pub fn q(&self, x: &[Rational]) -> Rational {
        self.b(x, x)
    }

    /// The form restricted to the span of `basis`, in that basis.
    pub fn restrict(&self, basis: &[Vector]) -> QuadSpace {
        let b = Matrix::from_columns(self.dim(), basis);
        QuadSpace::new(b.congruence(&self.gram)).expect("congruent forms stay symmetric")
    }

    /// A basis of `{v : b(v, w) = 0 for all w in span(basis)}`.
    pub fn orthogonal_complement(&self, basis: &[Vector]) -> Vec<Vector> {
        if basis.is_empty() {
            return (0..self.dim()).map(|i| linalg::unit_vec(self.dim(), i)).collect();
        }
        let b = Matrix::from_columns(self.dim(), basis);
        b.transpose().mul(&self.gram).nullspace()
    }

    /// Reflection `v ↦ v − 2 b(v,u)/q(u) · u`.
    pub fn reflection(&self, u: &[Rational]) -> Result<Matrix, QuadError> {
        let qu = self.q(u);
        if qu.is_zero() {
            return Err(QuadError::NormMismatch {
                qx: "0".into(),
                qy: "0".into(),
            });
        }
        let gu = self.gram.mul_vec(u);
        let s = int(2) / qu;
        let mut m = Matrix::identity(self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(i, j)] -= &s * &u[i] * &gu[j];
            }
        }
        Ok(m)
    }
}

/// Kernel of the Gram matrix.
pub fn radical(v: &QuadSpace) -> Vec<Vector> {
    v.gram.nullspace()
}

/// A finite group acting on a quadratic space, as an explicit element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
}

impl GroupAction {
    pub fn trivial(dim: usize) -> Self {
        GroupAction {
            generators: Vec::new(),
            elements: vec![Matrix::identity(dim)],
        }
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    /// `(1/|G|) Σ g`.
    pub fn averaging_projector(&self) -> Matrix {
        let mut s = Matrix::zeros(self.dim(), self.dim());
        for g in &self.elements {
            s = s.add(g);
        }
        s.scale(&rational::frac(1, self.order() as i64))
    }

    pub fn average(&self, v: &[Rational]) -> Vector {
        self.averaging_projector().mul_vec(v)
    }

    pub fn fixes(&self, v: &[Rational]) -> bool {
        self.generators.iter().all(|g| g.mul_vec(v) == v)
    }

    pub fn commutes_with(&self, m: &Matrix) -> bool {
        self.generators.iter().all(|g| g.mul(m) == m.mul(g))
    }
}

/// `M g₁ = g₂ M` for every aligned pair of elements.
pub fn intertwines(m: &Matrix, g1: &GroupAction, g2: &GroupAction) -> bool {
    g1.elements.len() == g2.elements.len()
        && g1
            .elements
            .iter()
            .zip(&g2.elements)
            .all(|(a, b)| m.mul(a) == b.mul(m))
}

pub fn group_closure(v: &QuadSpace, gens: &[Matrix], cap: usize) -> Result<GroupAction, QuadError> {
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != v.dim() || g.cols() != v.dim() {
            return Err(QuadError::Dimension(format!("generator {i} has the wrong shape")));
        }
        if g.congruence(&v.gram) != v.gram {
            return Err(QuadError::NotIsometry(i));
        }
    }
    let id = Matrix::identity(v.dim());
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(QuadError::NotFinite(cap));
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(GroupAction {
        generators: gens.to_vec(),
        elements,
    })
}

/// Closure of a group acting on two spaces at once, with the `i`-th generator
/// acting by `gens1[i]` and `gens2[i]`. Element lists come out aligned.
pub fn group_closure_paired(
    v1: &QuadSpace,
    gens1: &[Matrix],
    v2: &QuadSpace,
    gens2: &[Matrix],
    cap: usize,
) -> Result<(GroupAction, GroupAction), QuadError> {
    if gens1.len() != gens2.len() {
        return Err(QuadError::Dimension("generator lists differ in length".into()));
    }
    let (n1, n2) = (v1.dim(), v2.dim());
    let sum = QuadSpace::new(v1.gram.direct_sum(&v2.gram))?;
    let gens: Vec<Matrix> = gens1.iter().zip(gens2).map(|(a, b)| a.direct_sum(b)).collect();
    let g = group_closure(&sum, &gens, cap)?;
    let split = |range: std::ops::Range<usize>, list: &[Matrix]| -> Vec<Matrix> {
        list.iter().map(|m| m.submatrix(range.clone(), range.clone())).collect()
    };
    Ok((
        GroupAction {
            generators: gens1.to_vec(),
            elements: split(0..n1, &g.elements),
        },
        GroupAction {
            generators: gens2.to_vec(),
            elements: split(n1..n1 + n2, &g.elements),
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSpace {
    /// Basis of `V^G` in ambient coordinates.
    pub basis: Vec<Vector>,
    pub form: QuadSpace,
}

pub fn fixed_space_form(v: &QuadSpace, g: &GroupAction) -> Result<FixedSpace, QuadError> {
    v.require_nondegenerate()?;
    let basis = g.averaging_projector().column_basis();
    let form = v.restrict(&basis);
    if !form.is_nondegenerate() {
        return Err(QuadError::DegenerateFixedSpace);
    }
    Ok(FixedSpace { basis, form })
}

/// A linear map between quadratic spaces, stored as a matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: Matrix,
}

impl Isometry {
    pub fn new(matrix: Matrix) -> Self {
        Isometry { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Isometry::new(Matrix::identity(dim))
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        self.matrix.mul_vec(v)
    }

    /// `Mᵀ G₂ M = G₁`.
    pub fn is_isometry(&self, source: &QuadSpace, target: &QuadSpace) -> bool {
        self.matrix.rows() == target.dim()
            && self.matrix.cols() == source.dim()
            && self.matrix.congruence(&target.gram) == source.gram
    }

    pub fn verify(&self, source: &QuadSpace, target: &QuadSpace) -> Result<(), QuadError> {
        if self.is_isometry(source, target) {
            Ok(())
        } else {
            Err(QuadError::NotAnIsometry)
        }
    }

    pub fn is_equivariant(&self, g1: &GroupAction, g2: &GroupAction) -> bool {
        intertwines(&self.matrix, g1, g2)
    }

    pub fn compose(&self, first: &Isometry) -> Isometry {
        Isometry::new(self.matrix.mul(&first.matrix))
    }
}

fn check_norms(v: &QuadSpace, x: &[Rational], y: &[Rational]) -> Result<(), QuadError> {
    let (qx, qy) = (v.q(x), v.q(y));
    if qx != qy || qx.is_zero() {
        return Err(QuadError::NormMismatch {
            qx: rational::display(&qx),
            qy: rational::display(&qy),
        });
    }
    Ok(())
}

/// An isometry of `V` sending `x` to `y`, and the number of reflections used.
pub fn reflect_to(x: &[Rational], y: &[Rational], v: &QuadSpace) -> Result<(Isometry, usize), QuadError> {
    if x.len() != v.dim() || y.len() != v.dim() {
        return Err(QuadError::Dimension("vector length".into()));
    }
    check_norms(v, x, y)?;
    if x == y {
        return Ok((Isometry::identity(v.dim()), 0));
    }
    let diff = linalg::sub_vec(x, y);
    if !v.q(&diff).is_zero() {
        return Ok((Isometry::new(v.reflection(&diff)?), 1));
    }
    let sum = linalg::add_vec(x, y);
    let m = v.reflection(y)?.mul(&v.reflection(&sum)?);
    Ok((Isometry::new(m), 2))
}

/// A `G`-equivariant isometry sending the fixed vector `x` to the fixed vector `y`:
/// a reflection inside `V^G` and the identity on its orthogonal complement.
pub fn equivariant_transport(
    x: &[Rational],
    y: &[Rational],
    v: &QuadSpace,
    g: &GroupAction,
) -> Result<Isometry, QuadError> {
    if !g.fixes(x) || !g.fixes(y) {
        return Err(QuadError::NotFixed);
    }
    check_norms(v, x, y)?;
    let fixed = fixed_space_form(v, g)?;
    let k = fixed.basis.len();
    let b = Matrix::from_columns(v.dim(), &fixed.basis);
    let cx = b.solve(x).ok_or(QuadError::NotFixed)?;
    let cy = b.solve(y).ok_or(QuadError::NotFixed)?;
    let (inner, _) = reflect_to(&cx, &cy, &fixed.form)?;
    let comp = v.orthogonal_complement(&fixed.basis);
    let mut cols = fixed.basis.clone();
    cols.extend(comp);
    let t = Matrix::from_columns(v.dim(), &cols);
    let t_inv = t.inverse().ok_or(QuadError::DegenerateFixedSpace)?;
    let block = inner.matrix.direct_sum(&Matrix::identity(v.dim() - k));
    Ok(Isometry::new(t.mul(&block).mul(&t_inv)))
}

/// An orthogonal basis of `span(basis)` made of anisotropic vectors.
pub fn diagonalize(v: &QuadSpace, basis: &[Vector]) -> Result<Vec<Vector>, QuadError> {
    let mut rest: Vec<Vector> = basis.to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let x = match rest.iter().position(|e| !v.q(e).is_zero()) {
            Some(i) => rest.remove(i),
            None => {
                let mut pair = None;
                'search: for i in 0..rest.len() {
                    for j in i + 1..rest.len() {
                        if !v.b(&rest[i], &rest[j]).is_zero() {
                            pair = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let (i, j) = pair.ok_or(QuadError::DegenerateComplement)?;
                let x = linalg::add_vec(&rest[i], &rest[j]);
                rest.remove(i);
                x
            }
        };
        let qx = v.q(&x);
        for e in rest.iter_mut() {
            let c = -(v.b(e, &x) / &qx);
            linalg::axpy(&c, &x, e);
        }
        out.push(x);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittExtension {
    /// Equivariant isometry `V₁ → V₂` extending `ψ` on `W₁`.
    pub full: Isometry,
    /// Basis of `U₁ = W₁^⊥`.
    pub u1_basis: Vec<Vector>,
    /// Basis of `U₂ = W₂^⊥`.
    pub u2_basis: Vec<Vector>,
    /// The induced map `U₁ → U₂` in those bases.
    pub restricted: Isometry,
}

impl WittExtension {
    pub fn u1(&self, v1: &QuadSpace) -> QuadSpace {
        v1.restrict(&self.u1_basis)
    }

    pub fn u2(&self, v2: &QuadSpace) -> QuadSpace {
        v2.restrict(&self.u2_basis)
    }
}

pub struct WittInput<'a> {
    pub v1: &'a QuadSpace,
    pub g1: &'a GroupAction,
    pub v2: &'a QuadSpace,
    pub g2: &'a GroupAction,
    /// Bases of `W₁ ⊂ V₁^G` and `W₂ ⊂ V₂^G`.
    pub w1: &'a [Vector],
    pub w2: &'a [Vector],
    pub phi: &'a Isometry,
    /// `W₁ → W₂` in the given bases.
    pub psi: &'a Isometry,
}

/// Given an equivariant isometry `φ : V₁ → V₂` and an isometry `ψ : W₁ → W₂` of
/// fixed subspaces, produce an equivariant isometry `W₁^⊥ → W₂^⊥`.
pub fn equivariant_witt(input: &WittInput<'_>) -> Result<WittExtension, QuadError> {
    let WittInput { v1, g1, v2, g2, w1, w2, phi, psi } = *input;
    v1.require_nondegenerate()?;
    v2.require_nondegenerate()?;
    if v1.dim() != v2.dim() || w1.len() != w2.len() {
        return Err(QuadError::Dimension("V or W dimensions differ".into()));
    }
    if w1.iter().any(|w| !g1.fixes(w)) || w2.iter().any(|w| !g2.fixes(w)) {
        return Err(QuadError::NotInFixedSpace);
    }
    let k = w1.len();
    let wf1 = v1.restrict(w1);
    let wf2 = v2.restrict(w2);
    if linalg::rank_of(w1, v1.dim()) < k
        || linalg::rank_of(w2, v2.dim()) < k
        || !wf1.is_nondegenerate()
        || !wf2.is_nondegenerate()
    {
        return Err(QuadError::DegenerateComplement);
    }
    phi.verify(v1, v2)?;
    if !phi.is_equivariant(g1, g2) {
        return Err(QuadError::NotEquivariant);
    }
    psi.verify(&wf1, &wf2)?;

    let w2m = Matrix::from_columns(v2.dim(), w2);
    let w1m = Matrix::from_columns(v1.dim(), w1);
    let psi_ambient = |x: &[Rational]| -> Vector {
        let coords = w1m.solve(x).expect("x lies in W1");
        w2m.mul_vec(&psi.apply(&coords))
    };

    let mut full = phi.clone();
    for x in diagonalize(v1, w1)? {
        let y = full.apply(&x);
        let target = psi_ambient(&x);
        let tau = equivariant_transport(&y, &target, v2, g2)?;
        full = tau.compose(&full);
    }

    let u1_basis = v1.orthogonal_complement(w1);
    let u2_basis = v2.orthogonal_complement(w2);
    let u2m = Matrix::from_columns(v2.dim(), &u2_basis);
    let images: Vec<Vector> = u1_basis
        .iter()
        .map(|u| {
            let img = full.apply(u);
            u2m.solve(&img).expect("image of W1^perp lies in W2^perp")
        })
        .collect();
    let restricted = Isometry::new(Matrix::from_columns(u2_basis.len(), &images));
    Ok(WittExtension {
        full,
        u1_basis,
        u2_basis,
        restricted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn id_space(n: usize) -> QuadSpace {
        QuadSpace::new(Matrix::identity(n)).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn swap2() -> Matrix {
        Matrix::from_i64(&[&[0, 1], &[1, 0]])
    }

    #[test]
    fn closures() {
        let v2 = id_space(2);
        assert_eq!(group_closure(&v2, &[Matrix::identity(2)], 10).unwrap().order(), 1);
        assert_eq!(group_closure(&v2, &[swap2()], 10).unwrap().order(), 2);
        let cyc = Matrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let g = group_closure(&id_space(3), std::slice::from_ref(&cyc), 10).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(cyc.mul(&cyc).mul(&cyc), Matrix::identity(3));
        assert!(g.elements().contains(&cyc.mul(&cyc)));
    }

    #[test]
    fn closure_errors() {
        let v2 = id_space(2);
        let scale = Matrix::from_i64(&[&[2, 0], &[0, 1]]);
        assert_eq!(group_closure(&v2, &[scale], 10), Err(QuadError::NotIsometry(0)));
        // A hyperbolic boost has infinite order.
        let h = QuadSpace::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let boost = Matrix::diagonal(&[int(2), rational::frac(1, 2)]);
        assert_eq!(group_closure(&h, &[boost], 16), Err(QuadError::NotFinite(16)));
    }

    #[test]
    fn radicals() {
        assert!(radical(&id_space(2)).is_empty());
        let d = QuadSpace::diagonal(&[int(1), int(0)]);
        assert_eq!(radical(&d), vec![v(&[0, 1])]);
        let hyp = QuadSpace::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(radical(&hyp).is_empty());
    }

    #[test]
    fn fixed_spaces() {
        let v2 = id_space(2);
        let g = group_closure(&v2, &[swap2()], 10).unwrap();
        let f = fixed_space_form(&v2, &g).unwrap();
        assert_eq!(f.basis.len(), 1);
        assert_eq!(f.basis[0][0], f.basis[0][1]);
        let n = v2.q(&f.basis[0]) / (&f.basis[0][0] * &f.basis[0][0]);
        assert_eq!(n, int(2));

        let cyc = Matrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let v3 = id_space(3);
        let g3 = group_closure(&v3, &[cyc], 10).unwrap();
        let f3 = fixed_space_form(&v3, &g3).unwrap();
        let scaled = linalg::scale_vec(&f3.basis[0][0].recip(), &f3.basis[0]);
        assert_eq!(scaled, v(&[1, 1, 1]));
        assert_eq!(v3.q(&scaled), int(3));
    }

    #[test]
    fn reflections() {
        let v2 = id_space(2);
        let (m, n) = reflect_to(&v(&[1, 0]), &v(&[1, 0]), &v2).unwrap();
        assert_eq!((m.matrix, n), (Matrix::identity(2), 0));
        let (m, n) = reflect_to(&v(&[1, 0]), &v(&[0, 1]), &v2).unwrap();
        assert_eq!(n, 1);
        assert_eq!(m.matrix, v2.reflection(&v(&[1, -1])).unwrap());

        let g = QuadSpace::diagonal(&[int(1), int(-1), int(1)]);
        let (m, _) = reflect_to(&v(&[1, 0, 0]), &v(&[0, 0, 1]), &g).unwrap();
        assert_eq!(m.apply(&v(&[1, 0, 0])), v(&[0, 0, 1]));
        assert!(m.is_isometry(&g, &g));

        assert!(reflect_to(&v(&[1, 0]), &v(&[1, 1]), &v2).is_err());
        let hyp = QuadSpace::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(reflect_to(&v(&[1, 0]), &v(&[0, 1]), &hyp).is_err());
    }

    #[test]
    fn two_reflection_branch() {
        // q(x - y) = 0 forces the second branch.
        let g = QuadSpace::diagonal(&[int(1), int(1), int(-1)]);
        let x = v(&[1, 0, 0]);
        let y = v(&[1, 1, 1]);
        assert!(g.q(&linalg::sub_vec(&x, &y)).is_zero());
        let (m, n) = reflect_to(&x, &y, &g).unwrap();
        assert_eq!(n, 2);
        assert_eq!(m.apply(&x), y);
        assert!(m.is_isometry(&g, &g));
    }

    #[test]
    fn transports() {
        let v2 = id_space(2);
        let g = group_closure(&v2, &[swap2()], 10).unwrap();
        let t = equivariant_transport(&v(&[1, 1]), &v(&[1, 1]), &v2, &g).unwrap();
        assert_eq!(t.matrix, Matrix::identity(2));

        let v4 = id_space(4);
        let bs = swap2().direct_sum(&swap2());
        let g4 = group_closure(&v4, std::slice::from_ref(&bs), 10).unwrap();
        let x = v(&[1, 1, 0, 0]);
        let y = v(&[0, 0, 1, 1]);
        let t = equivariant_transport(&x, &y, &v4, &g4).unwrap();
        assert_eq!(t.apply(&x), y);
        assert!(t.is_isometry(&v4, &v4));
        assert!(g4.commutes_with(&t.matrix));
        let anti = v(&[1, -1, 0, 0]);
        assert_eq!(t.apply(&anti), anti);

        assert_eq!(
            equivariant_transport(&v(&[1, 0]), &v(&[0, 1]), &v2, &g),
            Err(QuadError::NotFixed)
        );
    }

    #[test]
    fn witt_basic_cases() {
        let v2 = id_space(2);
        let g = GroupAction::trivial(2);
        let phi = Isometry::identity(2);
        let psi0 = Isometry::identity(0);
        let out = equivariant_witt(&WittInput {
            v1: &v2, g1: &g, v2: &v2, g2: &g,
            w1: &[], w2: &[], phi: &phi, psi: &psi0,
        })
        .unwrap();
        assert_eq!(out.full, phi);

        let e1 = vec![v(&[1, 0])];
        let psi = Isometry::identity(1);
        let out = equivariant_witt(&WittInput {
            v1: &v2, g1: &g, v2: &v2, g2: &g,
            w1: &e1, w2: &e1, phi: &phi, psi: &psi,
        })
        .unwrap();
        assert_eq!(out.u1_basis, vec![v(&[0, 1])]);
        assert_eq!(out.u1(&v2).gram(), &Matrix::identity(1));
        assert!(out.restricted.is_isometry(&out.u1(&v2), &out.u2(&v2)));
    }

    #[test]
    fn witt_rejects_degenerate_w() {
        let hyp = QuadSpace::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let g = GroupAction::trivial(2);
        let phi = Isometry::identity(2);
        let w = vec![v(&[1, 0])];
        let psi = Isometry::identity(1);
        let err = equivariant_witt(&WittInput {
            v1: &hyp, g1: &g, v2: &hyp, g2: &g,
            w1: &w, w2: &w, phi: &phi, psi: &psi,
        })
        .unwrap_err();
        assert_eq!(err, QuadError::DegenerateComplement);
        assert_eq!(err.to_string(), "unsupported: degenerate complement");
    }

    #[test]
    fn diagonalize_isotropic_basis() {
        let hyp = QuadSpace::new(Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let basis = diagonalize(&hyp, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(hyp.b(&basis[0], &basis[1]).is_zero());
        assert!(basis.iter().all(|x| !hyp.q(x).is_zero()));
    }
}
