//! Seeded random inputs: Gram matrices, equivariant Witt instances and pairs
//! of fourfold data related by a known isometry.

use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::CertError;
use crate::linalg::{self, Matrix, Vector};
use crate::motiveiso::{FourfoldData, SurfaceData};
use crate::quadform::{self, GroupAction, Isometry, QuadSpace};
use crate::rational::{int, Rational};
use crate::realization::RealizationConfig;

/// Cap on group orders produced here.
pub const MAX_GROUP_ORDER: usize = 8;

/// The default primitive form: signature `(20, 2)`, all diagonal.
pub fn default_gram(rank: usize) -> Matrix {
    let d: Vec<Rational> = (0..rank).map(|i| int(if i < 2 { -1 } else { 1 })).collect();
    Matrix::diagonal(&d)
}

/// `I` perturbed by random elementary row operations with small coefficients.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, ops: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = int(*[-2, -1, 1, 2].choose(rng).unwrap());
        let row_j = m.row(j).to_vec();
        for k in 0..n {
            let v = &m[(i, k)] + &c * &row_j[k];
            m[(i, k)] = v;
        }
    }
    m
}

fn random_diag<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(*[-3, -2, -1, 1, 1, 2, 3].choose(rng).unwrap())).collect()
}

/// A non-degenerate form congruent to a random diagonal one.
pub fn random_gram<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let b = random_unimodular(rng, n, 2 * n);
    b.congruence(&Matrix::diagonal(&random_diag(rng, n)))
}

fn random_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vector {
    (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

fn permutation_matrix(p: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(p.len(), p.len());
    for (i, &j) in p.iter().enumerate() {
        m[(j, i)] = int(1);
    }
    m
}

/// A random permutation group of order at most `MAX_GROUP_ORDER` on `n` letters.
fn random_permutation_group<R: Rng>(rng: &mut R, n: usize) -> Vec<Matrix> {
    loop {
        let k = rng.gen_range(0..=2usize);
        let gens: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        let mats: Vec<Matrix> = gens.iter().map(|p| permutation_matrix(p)).collect();
        let space = QuadSpace::new(Matrix::identity(n)).expect("symmetric");
        if quadform::group_closure(&space, &mats, MAX_GROUP_ORDER).is_ok() {
            return mats;
        }
    }
}

/// Owned data for one call of the equivariant Witt solver.
#[derive(Clone, Debug)]
pub struct WittInstance {
    pub v1: QuadSpace,
    pub g1: GroupAction,
    pub v2: QuadSpace,
    pub g2: GroupAction,
    pub w1: Vec<Vector>,
    pub w2: Vec<Vector>,
    pub phi: Isometry,
    pub psi: Isometry,
}

impl WittInstance {
    pub fn input(&self) -> quadform::WittInput<'_> {
        quadform::WittInput {
            v1: &self.v1,
            g1: &self.g1,
            v2: &self.v2,
            g2: &self.g2,
            w1: &self.w1,
            w2: &self.w2,
            phi: &self.phi,
            psi: &self.psi,
        }
    }
}

fn average_of(ms: &[Matrix], f: impl Fn(&Matrix) -> Matrix) -> Matrix {
    let n = ms[0].rows();
    let sum = ms.iter().fold(Matrix::zeros(n, n), |acc, g| acc.add(&f(g)));
    sum.scale(&int(ms.len() as i64).recip())
}

/// A random instance with `dim V ≤ 6`, `|G| ≤ 8` and non-degenerate `W` of dimension `≤ 2`.
pub fn random_witt_instance<R: Rng>(rng: &mut R) -> WittInstance {
    loop {
        let n = rng.gen_range(1..=6);
        let gens = random_permutation_group(rng, n);
        let id_space = QuadSpace::new(Matrix::identity(n)).expect("symmetric");
        let perm = quadform::group_closure(&id_space, &gens, MAX_GROUP_ORDER).expect("bounded");
        let elems = perm.elements().to_vec();

        let raw = random_gram(rng, n);
        let g1m = average_of(&elems, |p| p.congruence(&raw));
        let Ok(v1) = QuadSpace::new(g1m) else { continue };
        if !v1.is_nondegenerate() {
            continue;
        }
        let a = random_unimodular(rng, n, n);
        let s = average_of(&elems, |p| p.transpose().mul(&a).mul(p));
        let Some(s_inv) = s.inverse() else { continue };
        let v2 = QuadSpace::new(s_inv.congruence(v1.gram())).expect("symmetric");
        let Ok((g1, g2)) = quadform::group_closure_paired(&v1, &gens, &v2, &gens, MAX_GROUP_ORDER) else {
            continue;
        };
        let phi = Isometry::new(s.clone());

        let fixed = g1.averaging_projector().column_basis();
        let k = rng.gen_range(0..=fixed.len().min(2));
        let w1: Vec<Vector> = (0..k).map(|_| g1.average(&random_vector(rng, n, 3))).collect();
        if linalg::rank_of(&w1, n) < k || !v1.restrict(&w1).is_nondegenerate() {
            continue;
        }
        // An equivariant isometry of V₂ moves φ(W₁) around; ψ twists inside W.
        let mut w2: Vec<Vector> = w1.iter().map(|w| s.mul_vec(w)).collect();
        let u = g2.average(&random_vector(rng, n, 2));
        if !v2.q(&u).is_zero() {
            let r = v2.reflection(&u).expect("anisotropic");
            w2 = w2.iter().map(|w| r.mul_vec(w)).collect();
        }
        let wf = v1.restrict(&w1);
        let psi = match (0..k).map(|i| linalg::unit_vec(k, i)).find(|e| !wf.q(e).is_zero()) {
            Some(e) if rng.gen_bool(0.5) => Isometry::new(wf.reflection(&e).expect("anisotropic")),
            _ => Isometry::identity(k),
        };
        return WittInstance { v1, g1, v2, g2, w1, w2, phi, psi };
    }
}

/// An instance whose `W` contains an isotropic vector, which must be rejected.
pub fn degenerate_witt_instance<R: Rng>(rng: &mut R) -> WittInstance {
    let n = rng.gen_range(2..=6);
    let mut gram = Matrix::zeros(n, n);
    gram[(0, 1)] = int(1);
    gram[(1, 0)] = int(1);
    for i in 2..n {
        gram[(i, i)] = int(rng.gen_range(1..=3));
    }
    let v = QuadSpace::new(gram).expect("symmetric");
    let g = GroupAction::trivial(n);
    let w = vec![linalg::unit_vec(n, 0)];
    WittInstance {
        v1: v.clone(),
        g1: g.clone(),
        v2: v,
        g2: g,
        w1: w.clone(),
        w2: w,
        phi: Isometry::identity(n),
        psi: Isometry::identity(1),
    }
}

/// Two fourfold data sets and an isometry of their transcendental parts.
#[derive(Clone, Debug)]
pub struct FourfoldPair {
    pub first: FourfoldData,
    pub second: FourfoldData,
    /// `V₁ → V₂` in ambient coordinates, fixing algebraic classes in order.
    pub full: Matrix,
    /// The transcendental restriction in canonical bases.
    pub iso_tr: Isometry,
}

fn in_basis(basis: &[Vector], dim: usize, v: &[Rational]) -> Vector {
    Matrix::from_columns(dim, basis)
        .solve(v)
        .expect("vector lies in the span")
}

/// Restriction of `m : V₁ → V₂` to canonical transcendental bases.
pub fn restrict_to_transcendental(d1: &FourfoldData, d2: &FourfoldData, m: &Matrix) -> Isometry {
    let t2 = d2.transcendental_basis();
    let cols: Vec<Vector> = d1
        .transcendental_basis()
        .iter()
        .map(|t| in_basis(&t2, d2.prim().dim(), &m.mul_vec(t)))
        .collect();
    Isometry::new(Matrix::from_columns(t2.len(), &cols))
}

/// A random pair: `V₂ = C·V₁` for unimodular `C`, twisted by an equivariant
/// reflection fixing the algebraic classes. With `group`, a `ℤ/2` swapping two
/// coordinates of an underlying diagonal form acts on both sides.
pub fn random_fourfold_pair<R: Rng>(
    rng: &mut R,
    rank: usize,
    alg_rank: usize,
    group: bool,
) -> Result<FourfoldPair, CertError> {
    loop {
        let mut diag = random_diag(rng, rank);
        let swap = group && rank >= 2;
        if swap {
            diag[1] = diag[0].clone();
        }
        let b = random_unimodular(rng, rank, rank);
        let b_inv = b.inverse().expect("unimodular");
        let g1m = b.congruence(&Matrix::diagonal(&diag));
        let v1 = QuadSpace::new(g1m).expect("symmetric");
        let mut perm: Vec<usize> = (0..rank).collect();
        if swap {
            perm.swap(0, 1);
        }
        let gens1 = if swap {
            vec![b_inv.mul(&permutation_matrix(&perm)).mul(&b)]
        } else {
            vec![]
        };
        let c = random_unimodular(rng, rank, rank);
        let c_inv = c.inverse().expect("unimodular");
        let v2 = QuadSpace::new(c_inv.congruence(v1.gram())).expect("symmetric");
        let gens2: Vec<Matrix> = gens1.iter().map(|g| c.mul(g).mul(&c_inv)).collect();
        let (g1, g2) = quadform::group_closure_paired(&v1, &gens1, &v2, &gens2, MAX_GROUP_ORDER)?;

        let raw: Vec<Vector> = (0..alg_rank).map(|_| g1.average(&random_vector(rng, rank, 2))).collect();
        if linalg::rank_of(&raw, rank) < alg_rank {
            continue;
        }
        let Ok(alg1) = quadform::diagonalize(&v1, &raw) else { continue };
        if !v1.restrict(&alg1).is_nondegenerate() {
            continue;
        }
        let alg2: Vec<Vector> = alg1.iter().map(|a| c.mul_vec(a)).collect();

        let mut full = c.clone();
        let mut u = g2.average(&random_vector(rng, rank, 2));
        for a in &alg2 {
            let s = -(v2.b(&u, a) / v2.q(a));
            linalg::axpy(&s, a, &mut u);
        }
        if !v2.q(&u).is_zero() {
            full = v2.reflection(&u)?.mul(&full);
        }

        let cfg1 = Arc::new(RealizationConfig::new(v1)?);
        let cfg2 = Arc::new(RealizationConfig::new(v2)?);
        let first = FourfoldData::new(cfg1, alg1, Some(g1))?;
        let second = FourfoldData::new(cfg2, alg2, Some(g2))?;
        let iso_tr = restrict_to_transcendental(&first, &second, &full);
        return Ok(FourfoldPair { first, second, full, iso_tr });
    }
}

/// A fourfold with `alg_rank` algebraic classes and a K3 surface whose primitive
/// second cohomology is its transcendental part moved by a random change of basis
/// and a few reflections. Returns the isometry between transcendental parts.
pub fn random_cubic_k3<R: Rng>(
    rng: &mut R,
    rank: usize,
    alg_rank: usize,
    k3_degree: u32,
) -> Result<(FourfoldData, SurfaceData, Isometry), CertError> {
    let pair = random_fourfold_pair(rng, rank, alg_rank, false)?;
    let x = pair.first;
    let tf = x.transcendental_form();
    let t = tf.dim();
    // Reflections inside T(X), then a change of basis onto the surface side.
    let mut iso = Matrix::identity(t);
    let mut steps = 0;
    while steps < 3 {
        let u = random_vector(rng, t, 2);
        if tf.q(&u).is_zero() {
            continue;
        }
        iso = tf.reflection(&u)?.mul(&iso);
        steps += 1;
    }
    let c = random_unimodular(rng, t, t);
    let c_inv = c.inverse().expect("unimodular");
    let prim2 = QuadSpace::new(c_inv.congruence(tf.gram()))?;
    let s = SurfaceData::new(k3_degree, prim2, vec![])?;
    Ok((x, s, Isometry::new(c.mul(&iso))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn witt_instances_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = random_witt_instance(&mut rng);
            assert!(w.phi.is_isometry(&w.v1, &w.v2));
            assert!(w.phi.is_equivariant(&w.g1, &w.g2));
            assert!(w.psi.is_isometry(&w.v1.restrict(&w.w1), &w.v2.restrict(&w.w2)));
            assert!(w.g1.order() <= MAX_GROUP_ORDER);
        }
    }

    #[test]
    fn fourfold_pairs_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_fourfold_pair(&mut rng, 6, 2, true).unwrap();
        assert_eq!(p.first.group.order(), 2);
        let m = Isometry::new(p.full.clone());
        assert!(m.is_isometry(p.first.prim(), p.second.prim()));
        assert!(m.is_equivariant(&p.first.group, &p.second.group));
        for (a, b) in p.first.alg_basis.iter().zip(&p.second.alg_basis) {
            assert_eq!(&p.full.mul_vec(a), b);
        }
        assert!(p.iso_tr.is_isometry(&p.first.transcendental_form(), &p.second.transcendental_form()));
    }

    #[test]
    fn cubic_k3_instances_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (x, s, iso) = random_cubic_k3(&mut rng, 5, 1, 2).unwrap();
        assert!(iso.is_isometry(&x.transcendental_form(), &s.transcendental_form()));
    }
}
