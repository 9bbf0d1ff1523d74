//! Mukai pairing, the Mukai space `ℚ[h]/(h⁵) ⊕ V` of a cubic fourfold, mutation
//! projections onto the orthogonal of `⟨O, O(1), O(2)⟩` and their kernel classes.

use num_traits::{One, Zero};

use crate::error::{MukaiError, RingError};
use crate::gradedring::{self, TruncPoly, VarietyData};
use crate::linalg::{self, Matrix, Vector};
use crate::quadform::QuadSpace;
use crate::rational::{frac, int, Rational};
use crate::tautcorr::{Basis, CorrClass, TautRing};

/// `⟨v, w⟩ = ∫ v^∨ · w · exp(c₁/2)`.
pub fn mukai_pairing(v: &TruncPoly, w: &TruncPoly) -> Result<Rational, RingError> {
    let vd = v.variety();
    let (c, _) = gradedring::tangent_chern(vd)?;
    let half_c1 = TruncPoly::monomial(*vd, 1, c.coeff(1) * frac(1, 2)).exp_nilpotent();
    Ok(v.dual().mul(w)?.mul(&half_c1)?.integrate())
}

/// The two classes spanning the polynomial part of the Kuznetsov component.
pub fn lambda_basis(vd: &VarietyData) -> (TruncPoly, TruncPoly) {
    let l1 = vec![int(3), frac(5, 4), frac(-7, 32), frac(-77, 384), frac(41, 2048)];
    let l2 = vec![int(-3), frac(-1, 4), frac(15, 32), frac(1, 384), frac(-153, 2048)];
    (TruncPoly::new(*vd, l1), TruncPoly::new(*vd, l2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiVector {
    pub poly: TruncPoly,
    pub prim: Vector,
}

impl MukaiVector {
    pub fn add(&self, other: &MukaiVector) -> MukaiVector {
        MukaiVector {
            poly: &self.poly + &other.poly,
            prim: linalg::add_vec(&self.prim, &other.prim),
        }
    }

    pub fn scale(&self, s: &Rational) -> MukaiVector {
        MukaiVector {
            poly: self.poly.scale(s),
            prim: linalg::scale_vec(s, &self.prim),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && linalg::is_zero_vec(&self.prim)
    }

    /// Coordinates `(poly coefficients, prim coordinates)` as one vector.
    pub fn coords(&self) -> Vector {
        let mut v = self.poly.coeffs().to_vec();
        v.extend(self.prim.iter().cloned());
        v
    }
}

/// `H*(A_X)`-shadow: polynomials in `h` plus a primitive quadratic space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiSpace {
    vd: VarietyData,
    prim: QuadSpace,
    /// `exp(c₁/2)`, cached.
    half_c1: TruncPoly,
}

impl MukaiSpace {
    pub fn new(prim: QuadSpace) -> Result<Self, MukaiError> {
        if !prim.is_nondegenerate() {
            return Err(MukaiError::DegeneratePrim);
        }
        let vd = VarietyData::cubic_fourfold();
        let (c, _) = gradedring::tangent_chern(&vd)?;
        let half_c1 = TruncPoly::monomial(vd, 1, c.coeff(1) * frac(1, 2)).exp_nilpotent();
        Ok(MukaiSpace { vd, prim, half_c1 })
    }

    pub fn variety(&self) -> &VarietyData {
        &self.vd
    }

    pub fn prim(&self) -> &QuadSpace {
        &self.prim
    }

    pub fn dim(&self) -> usize {
        self.vd.dim + 1 + self.prim.dim()
    }

    pub fn from_poly(&self, p: TruncPoly) -> MukaiVector {
        MukaiVector {
            poly: p,
            prim: vec![Rational::zero(); self.prim.dim()],
        }
    }

    pub fn from_prim(&self, v: Vector) -> Result<MukaiVector, MukaiError> {
        if v.len() != self.prim.dim() {
            return Err(MukaiError::PrimDimension {
                expected: self.prim.dim(),
                got: v.len(),
            });
        }
        Ok(MukaiVector {
            poly: TruncPoly::zero(self.vd),
            prim: v,
        })
    }

    pub fn from_coords(&self, c: &[Rational]) -> MukaiVector {
        let k = self.vd.dim + 1;
        MukaiVector {
            poly: TruncPoly::new(self.vd, c[..k].to_vec()),
            prim: c[k..].to_vec(),
        }
    }

    /// `v(O(i))`.
    pub fn line(&self, i: i64) -> MukaiVector {
        self.from_poly(gradedring::mukai_vector_line(&self.vd, i).expect("cubic data is valid"))
    }

    /// Mukai pairing on the polynomial part, the form of `V` on the primitive part.
    pub fn pairing(&self, a: &MukaiVector, b: &MukaiVector) -> Rational {
        let poly = (&(&a.poly.dual() * &b.poly) * &self.half_c1).integrate();
        poly + self.prim.b(&a.prim, &b.prim)
    }

    fn exceptional(&self, v: &MukaiVector) -> Result<(), MukaiError> {
        let n = self.pairing(v, v);
        if n.is_one() {
            Ok(())
        } else {
            Err(MukaiError::NotExceptional(crate::rational::display(&n)))
        }
    }

    /// Left mutation shadow `a − ⟨v_E, a⟩ v_E`.
    pub fn mutate_project(&self, ve: &MukaiVector, a: &MukaiVector) -> Result<MukaiVector, MukaiError> {
        self.exceptional(ve)?;
        Ok(a.add(&ve.scale(&-self.pairing(ve, a))))
    }

    /// Right mutation shadow `a − ⟨a, v_E⟩ v_E`.
    pub fn mutate_project_right(&self, ve: &MukaiVector, a: &MukaiVector) -> Result<MukaiVector, MukaiError> {
        self.exceptional(ve)?;
        Ok(a.add(&ve.scale(&-self.pairing(a, ve))))
    }

    /// Projection onto the right orthogonal of `⟨v(O), v(O(1)), v(O(2))⟩`,
    /// mutating through `O(2)`, `O(1)` and `O` in that order.
    pub fn kuznetsov_project(&self, a: &MukaiVector) -> MukaiVector {
        [2, 1, 0].iter().fold(a.clone(), |acc, &i| {
            self.mutate_project(&self.line(i), &acc).expect("line bundles are exceptional")
        })
    }

    /// The same image reached by right mutations through `O(−3)`, `O(−2)`, `O(−1)`.
    pub fn kuznetsov_project_right(&self, a: &MukaiVector) -> MukaiVector {
        [-3, -2, -1].iter().fold(a.clone(), |acc, &i| {
            self.mutate_project_right(&self.line(i), &acc).expect("line bundles are exceptional")
        })
    }

    /// Gram matrix `⟨vᵢ, vⱼ⟩` of a list of vectors.
    pub fn gram_of(&self, vs: &[MukaiVector]) -> Matrix {
        let mut m = Matrix::zeros(vs.len(), vs.len());
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                m[(i, j)] = self.pairing(a, b);
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    L,
    R,
}

/// Cohomology class of a mutation kernel on `X × X`: the diagonal plus pure `h`-terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelClass {
    pub side: Side,
    pub class: CorrClass,
}

/// `Σ aᵢ bⱼ hⁱ × hʲ`.
pub fn outer(a: &TruncPoly, b: &TruncPoly) -> CorrClass {
    let mut out = CorrClass::zero(2);
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                out = &out + &CorrClass::basis(2, Basis::Mono([i as u8, j as u8, 0]), x * y);
            }
        }
    }
    out
}

/// Kernel of the mutation through `O(i)`: `Δ − v(O(−i)) × v(O(i))` on the left,
/// `Δ − v(O(−i−3)) × v(O(i))` on the right.
pub fn single_kernel(vd: &VarietyData, side: Side, i: i64) -> CorrClass {
    let line = |k| gradedring::mukai_vector_line(vd, k).expect("valid variety");
    let left = match side {
        Side::L => line(-i),
        Side::R => line(-i - 3),
    };
    &CorrClass::diagonal() - &outer(&left, &line(i))
}

/// The kernel of the full projection, as a composite of three single mutations.
pub fn kernel_class(ring: &TautRing, side: Side) -> KernelClass {
    let vd = VarietyData::cubic_fourfold();
    let order: [i64; 3] = match side {
        Side::L => [2, 1, 0],
        Side::R => [-3, -2, -1],
    };
    let mut k = CorrClass::diagonal();
    for i in order {
        k = ring
            .compose(&k, &single_kernel(&vd, side, i))
            .expect("kernels live on X^2");
    }
    KernelClass { side, class: k }
}

impl KernelClass {
    /// `α ↦ p₂*(K · p₁^*α)` on the Mukai space.
    pub fn act(&self, space: &MukaiSpace, a: &MukaiVector) -> MukaiVector {
        let vd = *space.variety();
        let mut poly = TruncPoly::zero(vd);
        let mut diag = Rational::zero();
        for (b, c) in self.class.terms() {
            match *b {
                Basis::Mono([i, j, _]) => {
                    let hi = TruncPoly::monomial(vd, i as usize, Rational::one());
                    let s = (&hi * &a.poly).integrate() * c;
                    poly = &poly + &TruncPoly::monomial(vd, j as usize, s);
                }
                Basis::Diag { .. } => diag += c,
                Basis::Small => unreachable!("kernels live on X^2"),
            }
        }
        MukaiVector {
            poly: &poly + &a.poly.scale(&diag),
            prim: linalg::scale_vec(&diag, &a.prim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> MukaiSpace {
        let g = QuadSpace::diagonal(&[int(1), int(1), int(-1)]);
        MukaiSpace::new(g).unwrap()
    }

    fn binom(t: i64, k: i64) -> Rational {
        (0..k).fold(Rational::one(), |acc, i| acc * int(t - i) / int(i + 1))
    }

    /// χ(O(t)) on a cubic fourfold.
    fn hilbert(t: i64) -> Rational {
        binom(t + 5, 5) - binom(t + 2, 5)
    }

    #[test]
    fn hilbert_polynomial_values() {
        assert_eq!(hilbert(0), int(1));
        assert_eq!(hilbert(1), int(6));
        assert_eq!(hilbert(2), int(21));
        assert_eq!(hilbert(-1), int(0));
        assert_eq!(hilbert(-3), int(1));
    }

    #[test]
    fn pairing_matches_euler_characteristic() {
        let vd = VarietyData::cubic_fourfold();
        for i in -4..=4 {
            for j in -4..=4 {
                let vi = gradedring::mukai_vector_line(&vd, i).unwrap();
                let vj = gradedring::mukai_vector_line(&vd, j).unwrap();
                assert_eq!(mukai_pairing(&vi, &vj).unwrap(), hilbert(j - i), "({i},{j})");
            }
        }
    }

    #[test]
    fn k3_structure_sheaf() {
        let vd = VarietyData::k3(2).unwrap();
        let v = gradedring::mukai_vector_line(&vd, 0).unwrap();
        assert_eq!(mukai_pairing(&v, &v).unwrap(), int(2));
    }

    #[test]
    fn exceptional_gram() {
        let s = space();
        let vs: Vec<_> = (0..3).map(|i| s.line(i)).collect();
        assert_eq!(s.gram_of(&vs), Matrix::from_i64(&[&[1, 6, 21], &[0, 1, 6], &[0, 0, 1]]));
    }

    #[test]
    fn lambda_lattice() {
        let s = space();
        let (l1, l2) = lambda_basis(s.variety());
        assert_eq!(l1.coeff(0), int(3));
        let ls = [s.from_poly(l1), s.from_poly(l2)];
        assert_eq!(s.gram_of(&ls), Matrix::from_i64(&[&[-2, 1], &[1, -2]]));
        let mut all: Vec<Vector> = (0..3).map(|i| s.line(i).poly.coeffs().to_vec()).collect();
        all.extend(ls.iter().map(|l| l.poly.coeffs().to_vec()));
        assert_eq!(linalg::rank_of(&all, 5), 5);
    }

    #[test]
    fn mutations() {
        let s = space();
        let o = s.line(0);
        let o1 = s.line(1);
        assert_eq!(
            s.mutate_project(&o, &o1).unwrap(),
            o1.add(&o.scale(&int(-6)))
        );
        assert!(s.mutate_project(&o, &o).unwrap().is_zero());
        let twice = o.scale(&int(2));
        assert!(matches!(s.mutate_project(&twice, &o1), Err(MukaiError::NotExceptional(_))));
    }

    #[test]
    fn kuznetsov_image() {
        let s = space();
        let p = s.from_prim(vec![int(1), int(2), int(3)]).unwrap();
        assert_eq!(s.kuznetsov_project(&p), p);
        assert!(s.kuznetsov_project(&s.line(1)).is_zero());
        let (l1, l2) = lambda_basis(s.variety());
        for l in [l1, l2] {
            let v = s.from_poly(l);
            assert_eq!(s.kuznetsov_project(&v), v);
            assert_eq!(s.kuznetsov_project_right(&v), v);
        }
    }

    #[test]
    fn kernels_act_as_projections() {
        let s = space();
        let ring = TautRing::cubic();
        for side in [Side::L, Side::R] {
            let k = kernel_class(&ring, side);
            for i in 0..5 {
                let v = s.from_poly(TruncPoly::monomial(*s.variety(), i, int(1)));
                let expected = match side {
                    Side::L => s.kuznetsov_project(&v),
                    Side::R => s.kuznetsov_project_right(&v),
                };
                assert_eq!(k.act(&s, &v), expected);
            }
            let p = s.from_prim(vec![int(1), int(0), int(-2)]).unwrap();
            assert_eq!(k.act(&s, &p), p);
        }
    }
}
