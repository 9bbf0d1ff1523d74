//! Cohomological realization: classes on products of factors `H = ℚ[h]/(h^{d+1}) ⊕ V`
//! stored as sparse tensors in a slot basis `{1, h, …, h^d} ∪ {e₁, …, e_r}`, with
//! `V` in the middle degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::RealizationError;
use crate::gradedring::{self, VarietyData};
use crate::linalg::{Matrix, Vector};
use crate::mukai::{self, Side};
use crate::quadform::QuadSpace;
use crate::rational::{self, int, Rational};
use crate::tautcorr::{Basis, CorrClass, Pair, TautRing};

pub type Slot = u16;

/// One factor: `h` of degree `e = ∫ h^d` and a primitive space `V` in codimension `d/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    d: usize,
    e: Rational,
    prim: QuadSpace,
    gram_inv: Matrix,
}

impl Factor {
    pub fn new(d: usize, e: Rational, prim: QuadSpace) -> Result<Self, RealizationError> {
        if !d.is_multiple_of(2) {
            return Err(RealizationError::OddDimension);
        }
        prim.require_nondegenerate()?;
        let gram_inv = prim
            .gram()
            .inverse()
            .ok_or(crate::error::QuadError::Degenerate)?;
        Ok(Factor { d, e, prim, gram_inv })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> &Rational {
        &self.e
    }

    pub fn prim(&self) -> &QuadSpace {
        &self.prim
    }

    pub fn rank(&self) -> usize {
        self.prim.dim()
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn n_slots(&self) -> usize {
        self.d + 1 + self.rank()
    }

    pub fn h(&self, k: usize) -> Slot {
        assert!(k <= self.d);
        k as Slot
    }

    pub fn e(&self, i: usize) -> Slot {
        assert!(i < self.rank());
        (self.d + 1 + i) as Slot
    }

    /// `Some(k)` for the slot `h^k`.
    pub fn h_power(&self, s: Slot) -> Option<usize> {
        let s = s as usize;
        (s <= self.d).then_some(s)
    }

    /// `Some(i)` for the slot `eᵢ`.
    pub fn prim_index(&self, s: Slot) -> Option<usize> {
        let s = s as usize;
        (s > self.d).then(|| s - self.d - 1)
    }

    pub fn codim(&self, s: Slot) -> usize {
        self.h_power(s).unwrap_or(self.d / 2)
    }

    pub fn slot_name(&self, s: Slot) -> String {
        match (self.h_power(s), self.prim_index(s)) {
            (Some(0), _) => "1".into(),
            (Some(1), _) => "h".into(),
            (Some(k), _) => format!("h^{k}"),
            (_, Some(i)) => format!("e{}", i + 1),
            _ => unreachable!(),
        }
    }

    /// Product of two slots: `hᵃhᵇ = h^{a+b}`, `1·e = e`, `h^{≥1}·e = 0`, `eᵢeⱼ = (Gᵢⱼ/e) h^d`.
    pub fn mul(&self, a: Slot, b: Slot) -> Option<(Slot, Rational)> {
        match (self.h_power(a), self.h_power(b)) {
            (Some(x), Some(y)) => (x + y <= self.d).then(|| ((x + y) as Slot, Rational::one())),
            (Some(0), None) => Some((b, Rational::one())),
            (None, Some(0)) => Some((a, Rational::one())),
            (Some(_), None) | (None, Some(_)) => None,
            (None, None) => {
                let i = self.prim_index(a).unwrap();
                let j = self.prim_index(b).unwrap();
                let g = &self.prim.gram()[(i, j)];
                (!g.is_zero()).then(|| (self.d as Slot, g / &self.e))
            }
        }
    }

    pub fn integral(&self, s: Slot) -> Rational {
        if s as usize == self.d {
            self.e.clone()
        } else {
            Rational::zero()
        }
    }

    /// `∫ s · t`.
    pub fn pairing(&self, s: Slot, t: Slot) -> Rational {
        match self.mul(s, t) {
            Some((u, c)) => c * self.integral(u),
            None => Rational::zero(),
        }
    }

    /// Nonzero `(t, ∫ s·t)`.
    pub fn partners(&self, s: Slot) -> Vec<(Slot, Rational)> {
        match (self.h_power(s), self.prim_index(s)) {
            (Some(k), _) => vec![((self.d - k) as Slot, self.e.clone())],
            (_, Some(i)) => (0..self.rank())
                .filter(|&j| !self.prim.gram()[(i, j)].is_zero())
                .map(|j| (self.e(j), self.prim.gram()[(i, j)].clone()))
                .collect(),
            _ => unreachable!(),
        }
    }

    /// The intersection pairing on the slot basis.
    pub fn pairing_matrix(&self) -> Matrix {
        let n = self.n_slots();
        let mut m = Matrix::zeros(n, n);
        for s in 0..n {
            for (t, c) in self.partners(s as Slot) {
                m[(s, t as usize)] = c;
            }
        }
        m
    }

    /// Künneth components of the diagonal.
    pub fn diagonal_terms(&self) -> Vec<(Slot, Slot, Rational)> {
        let inv_e = self.e.recip();
        let mut out: Vec<(Slot, Slot, Rational)> = (0..=self.d)
            .map(|i| (i as Slot, (self.d - i) as Slot, inv_e.clone()))
            .collect();
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                let g = &self.gram_inv[(a, b)];
                if !g.is_zero() {
                    out.push((self.e(a), self.e(b), g.clone()));
                }
            }
        }
        out
    }
}

fn same_factor(a: &Arc<Factor>, b: &Arc<Factor>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A class on `F₁ × ⋯ × Fₙ` as a sparse tensor in the slot bases.
#[derive(Clone)]
pub struct RealizedClass {
    factors: Vec<Arc<Factor>>,
    entries: BTreeMap<Vec<Slot>, Rational>,
}

impl PartialEq for RealizedClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_factors(other) && self.entries == other.entries
    }
}

impl Eq for RealizedClass {}

impl fmt::Debug for RealizedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealizedClass(n={}, {} entries", self.n(), self.entries.len())?;
        for (k, c) in self.entries.iter().take(12) {
            write!(f, "; {}·{}", rational::display(c), self.key_name(k))?;
        }
        write!(f, ")")
    }
}

impl RealizedClass {
    pub fn zero(factors: Vec<Arc<Factor>>) -> Self {
        RealizedClass {
            factors,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        factors: Vec<Arc<Factor>>,
        entries: impl IntoIterator<Item = (Vec<Slot>, Rational)>,
    ) -> Self {
        let mut x = Self::zero(factors);
        for (k, c) in entries {
            x.add_entry(k, c);
        }
        x
    }

    /// `h^k` on a single factor.
    pub fn h_power(f: &Arc<Factor>, k: usize) -> Self {
        Self::from_entries(vec![f.clone()], [(vec![f.h(k)], Rational::one())])
    }

    /// The diagonal of `F × F`.
    pub fn diagonal(f: &Arc<Factor>) -> Self {
        Self::from_entries(
            vec![f.clone(), f.clone()],
            f.diagonal_terms().into_iter().map(|(a, b, c)| (vec![a, b], c)),
        )
    }

    /// `Σ uₐ v_b eₐ ⊗ e'_b` on `F × F'`.
    pub fn prim_outer(f: &Arc<Factor>, u: &[Rational], g: &Arc<Factor>, v: &[Rational]) -> Self {
        let mut x = Self::zero(vec![f.clone(), g.clone()]);
        for (a, ua) in u.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                if !ua.is_zero() && !vb.is_zero() {
                    x.add_entry(vec![f.e(a), g.e(b)], ua * vb);
                }
            }
        }
        x
    }

    /// A vector of `V` as a class on a single factor.
    pub fn prim_vector(f: &Arc<Factor>, u: &[Rational]) -> Self {
        Self::from_entries(
            vec![f.clone()],
            u.iter().enumerate().map(|(a, c)| (vec![f.e(a)], c.clone())),
        )
    }

    pub fn factors(&self) -> &[Arc<Factor>] {
        &self.factors
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Slot>, Rational> {
        &self.entries
    }

    pub fn get(&self, key: &[Slot]) -> Rational {
        self.entries.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn key_name(&self, key: &[Slot]) -> String {
        key.iter()
            .zip(&self.factors)
            .map(|(s, f)| f.slot_name(*s))
            .collect::<Vec<_>>()
            .join("⊗")
    }

    pub fn add_entry(&mut self, key: Vec<Slot>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_factors(&self, other: &RealizedClass) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| same_factor(a, b))
    }

    fn check(&self, other: &RealizedClass) -> Result<(), RealizationError> {
        if self.same_factors(other) {
            Ok(())
        } else {
            Err(RealizationError::FactorMismatch)
        }
    }

    fn require(&self, n: usize) -> Result<(), RealizationError> {
        if self.n() == n {
            Ok(())
        } else {
            Err(RealizationError::Arity {
                expected: n,
                got: self.n(),
            })
        }
    }

    pub fn add(&self, other: &RealizedClass) -> Result<RealizedClass, RealizationError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.entries {
            out.add_entry(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RealizedClass) -> Result<RealizedClass, RealizationError> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, s: &Rational) -> RealizedClass {
        let mut out = Self::zero(self.factors.clone());
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.entries {
            out.entries.insert(k.clone(), c * s);
        }
        out
    }

    /// Cup product.
    pub fn product(&self, other: &RealizedClass) -> Result<RealizedClass, RealizationError> {
        self.check(other)?;
        let mut out = Self::zero(self.factors.clone());
        for (ka, ca) in &self.entries {
            'pairs: for (kb, cb) in &other.entries {
                let mut key = Vec::with_capacity(ka.len());
                let mut c = ca * cb;
                for ((f, a), b) in self.factors.iter().zip(ka).zip(kb) {
                    match f.mul(*a, *b) {
                        Some((s, x)) => {
                            key.push(s);
                            if !x.is_one() {
                                c *= x;
                            }
                        }
                        None => continue 'pairs,
                    }
                }
                out.add_entry(key, c);
            }
        }
        Ok(out)
    }

    /// `∫` over the product of all factors.
    pub fn degree(&self) -> Rational {
        let mut total = Rational::zero();
        'entries: for (k, c) in &self.entries {
            let mut v = c.clone();
            for (f, s) in self.factors.iter().zip(k) {
                if *s as usize != f.d {
                    continue 'entries;
                }
                v *= &f.e;
            }
            total += v;
        }
        total
    }

    /// The component of total codimension `k`.
    pub fn codim_part(&self, k: usize) -> RealizedClass {
        self.filter(|key, fs| key.iter().zip(fs).map(|(s, f)| f.codim(*s)).sum::<usize>() == k)
    }

    /// The component in multidegree `degs`.
    pub fn multidegree_part(&self, degs: &[usize]) -> RealizedClass {
        self.filter(|key, fs| key.iter().zip(fs).zip(degs).all(|((s, f), d)| f.codim(*s) == *d))
    }

    /// Entries with at least one slot in `V`.
    pub fn prim_components(&self) -> RealizedClass {
        self.filter(|key, fs| key.iter().zip(fs).any(|(s, f)| f.prim_index(*s).is_some()))
    }

    fn filter(&self, keep: impl Fn(&[Slot], &[Arc<Factor>]) -> bool) -> RealizedClass {
        RealizedClass {
            factors: self.factors.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k, &self.factors))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Relabel factors: factor `i` becomes factor `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> RealizedClass {
        assert_eq!(perm.len(), self.n());
        let mut factors = self.factors.clone();
        for (i, &p) in perm.iter().enumerate() {
            factors[p] = self.factors[i].clone();
        }
        let mut out = Self::zero(factors);
        for (k, c) in &self.entries {
            let mut nk = k.clone();
            for (i, &p) in perm.iter().enumerate() {
                nk[p] = k[i];
            }
            out.entries.insert(nk, c.clone());
        }
        out
    }

    pub fn transpose(&self) -> Result<RealizedClass, RealizationError> {
        self.require(2)?;
        Ok(self.permute(&[1, 0]))
    }

    /// `g ∘ f` for `f` on `X × Y` and `g` on `Y × Z`: contraction over `Y` with its pairing.
    pub fn compose(f: &RealizedClass, g: &RealizedClass) -> Result<RealizedClass, RealizationError> {
        f.require(2)?;
        g.require(2)?;
        if !same_factor(&f.factors[1], &g.factors[0]) {
            return Err(RealizationError::FactorMismatch);
        }
        let y = &f.factors[1];
        let mut by_first: HashMap<Slot, Vec<(Slot, &Rational)>> = HashMap::new();
        for (k, c) in &g.entries {
            by_first.entry(k[0]).or_default().push((k[1], c));
        }
        // Contract with the pairing first, then multiply.
        let mut paired: BTreeMap<(Slot, Slot), Rational> = BTreeMap::new();
        for (kf, cf) in &f.entries {
            for (t, p) in y.partners(kf[1]) {
                if by_first.contains_key(&t) {
                    *paired.entry((kf[0], t)).or_insert_with(Rational::zero) += cf * &p;
                }
            }
        }
        let mut out = Self::zero(vec![f.factors[0].clone(), g.factors[1].clone()]);
        for ((a, t), c) in &paired {
            if c.is_zero() {
                continue;
            }
            for (b, cg) in &by_first[t] {
                out.add_entry(vec![*a, *b], c * *cg);
            }
        }
        Ok(out)
    }

    /// `p₂*(K · p₁^*α)` for a correspondence `K` on `X × Y` and a class `α` on `X`.
    pub fn act(k: &RealizedClass, alpha: &RealizedClass) -> Result<RealizedClass, RealizationError> {
        k.require(2)?;
        alpha.require(1)?;
        if !same_factor(&k.factors[0], &alpha.factors[0]) {
            return Err(RealizationError::FactorMismatch);
        }
        let x = &k.factors[0];
        let mut out = Self::zero(vec![k.factors[1].clone()]);
        for (ka, ca) in &alpha.entries {
            for (t, p) in x.partners(ka[0]) {
                for (kk, ck) in k.entries.range(vec![t]..vec![t + 1]) {
                    out.add_entry(vec![kk[1]], ca * &p * ck);
                }
            }
        }
        Ok(out)
    }

    /// The linear map `Γ_* : H(X) → H(Y)` of a correspondence, as `slot ↦ image`.
    fn pushforward_map(gamma: &RealizedClass) -> Vec<Vec<(Slot, Rational)>> {
        let x = &gamma.factors[0];
        let mut rows: Vec<Vec<(Slot, Rational)>> = vec![Vec::new(); x.n_slots()];
        for (k, c) in &gamma.entries {
            // Γ_*(s) = Σ ∫(s·a) Γ[a,b] b
            for (s, p) in x.partners(k[0]) {
                rows[s as usize].push((k[1], &p * c));
            }
        }
        for row in rows.iter_mut() {
            let mut acc: BTreeMap<Slot, Rational> = BTreeMap::new();
            for (b, c) in row.drain(..) {
                *acc.entry(b).or_insert_with(Rational::zero) += c;
            }
            row.extend(acc.into_iter().filter(|(_, c)| !c.is_zero()));
        }
        rows
    }

    /// `(Γ × ⋯ × Γ)_*` applied to a class on `Xⁿ`, for `Γ` on `X × Y`.
    pub fn transport(&self, gamma: &RealizedClass) -> Result<RealizedClass, RealizationError> {
        gamma.require(2)?;
        if self.factors.iter().any(|f| !same_factor(f, &gamma.factors[0])) {
            return Err(RealizationError::FactorMismatch);
        }
        let map = Self::pushforward_map(gamma);
        let mut current: BTreeMap<Vec<Slot>, Rational> = self.entries.clone();
        for pos in 0..self.n() {
            let mut next: BTreeMap<Vec<Slot>, Rational> = BTreeMap::new();
            for (k, c) in &current {
                for (b, m) in &map[k[pos] as usize] {
                    let mut nk = k.clone();
                    nk[pos] = *b;
                    let slot = next.entry(nk).or_insert_with(Rational::zero);
                    *slot += c * m;
                }
            }
            next.retain(|_, c| !c.is_zero());
            current = next;
        }
        Ok(RealizedClass {
            factors: vec![gamma.factors[1].clone(); self.n()],
            entries: current,
        })
    }

    /// Pullback along the projection `Yᵐ → Xⁿ` onto the factors `positions`
    /// (zero-based, in order); the other factors get the unit class.
    pub fn pull(&self, target: &[Arc<Factor>], positions: &[usize]) -> Result<RealizedClass, RealizationError> {
        if positions.len() != self.n() {
            return Err(RealizationError::Arity {
                expected: positions.len(),
                got: self.n(),
            });
        }
        for (i, &p) in positions.iter().enumerate() {
            if p >= target.len() || !same_factor(&target[p], &self.factors[i]) {
                return Err(RealizationError::FactorMismatch);
            }
        }
        let mut out = Self::zero(target.to_vec());
        for (k, c) in &self.entries {
            let mut nk = vec![0 as Slot; target.len()];
            for (i, &p) in positions.iter().enumerate() {
                nk[p] = k[i];
            }
            out.entries.insert(nk, c.clone());
        }
        Ok(out)
    }

    /// Pushforward onto the factors `keep` (zero-based, in order).
    pub fn push(&self, keep: &[usize]) -> Result<RealizedClass, RealizationError> {
        if keep.iter().any(|&k| k >= self.n()) {
            return Err(RealizationError::Arity {
                expected: keep.len(),
                got: self.n(),
            });
        }
        let factors: Vec<Arc<Factor>> = keep.iter().map(|&k| self.factors[k].clone()).collect();
        let mut out = Self::zero(factors);
        'entries: for (k, c) in &self.entries {
            let mut v = c.clone();
            for i in 0..self.n() {
                if !keep.contains(&i) {
                    let f = &self.factors[i];
                    if k[i] as usize != f.d {
                        continue 'entries;
                    }
                    v *= &f.e;
                }
            }
            out.add_entry(keep.iter().map(|&i| k[i]).collect(), v);
        }
        Ok(out)
    }

    /// Matrix of a class on `X × Y` in the slot bases.
    pub fn matrix(&self) -> Result<Matrix, RealizationError> {
        self.require(2)?;
        let mut m = Matrix::zeros(self.factors[0].n_slots(), self.factors[1].n_slots());
        for (k, c) in &self.entries {
            m[(k[0] as usize, k[1] as usize)] = c.clone();
        }
        Ok(m)
    }

    /// First differing entry against `other`, for reports.
    pub fn diff_witness(&self, other: &RealizedClass) -> Option<String> {
        if !self.same_factors(other) {
            return Some("factor lists differ".into());
        }
        let d = self.sub(other).ok()?;
        d.entries.iter().next().map(|(k, c)| {
            format!(
                "{} differs by {} ({} differing entries)",
                self.key_name(k),
                rational::display(c),
                d.entries.len()
            )
        })
    }
}

/// A cubic-fourfold factor together with the tautological ring data.
pub struct RealizationConfig {
    factor: Arc<Factor>,
    ring: TautRing,
    small_diagonal: OnceLock<RealizedClass>,
}

impl fmt::Debug for RealizationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealizationConfig(rank {})", self.rank())
    }
}

impl Clone for RealizationConfig {
    fn clone(&self) -> Self {
        RealizationConfig {
            factor: self.factor.clone(),
            ring: self.ring.clone(),
            small_diagonal: OnceLock::new(),
        }
    }
}

impl RealizationConfig {
    /// Accepts any non-degenerate rank; the rank is tested by [`Self::euler_check`].
    pub fn new(prim: QuadSpace) -> Result<Self, RealizationError> {
        let vd = VarietyData::cubic_fourfold();
        let ring = TautRing::new(&vd)?;
        let factor = Factor::new(vd.dim, int(vd.degree as i64), prim)?;
        Ok(RealizationConfig {
            factor: Arc::new(factor),
            ring,
            small_diagonal: OnceLock::new(),
        })
    }

    pub fn factor(&self) -> &Arc<Factor> {
        &self.factor
    }

    pub fn ring(&self) -> &TautRing {
        &self.ring
    }

    pub fn prim(&self) -> &QuadSpace {
        self.factor.prim()
    }

    pub fn rank(&self) -> usize {
        self.factor.rank()
    }

    fn factors(&self, n: usize) -> Vec<Arc<Factor>> {
        vec![self.factor.clone(); n]
    }

    /// `deg(real(Δ)²)` against `∫ c_d(T_X)`.
    pub fn euler_check(&self) -> Result<(), EulerMismatch> {
        let delta = RealizedClass::diagonal(&self.factor);
        let got = delta.product(&delta).expect("same factors").degree();
        let vd = VarietyData::cubic_fourfold();
        let (c, _) = gradedring::tangent_chern(&vd).expect("cubic data is valid");
        let expected = gradedring::TruncPoly::monomial(vd, vd.dim, c.coeff(vd.dim)).integrate();
        if got == expected {
            Ok(())
        } else {
            Err(EulerMismatch { got, expected })
        }
    }

    pub fn small_diagonal(&self) -> &RealizedClass {
        self.small_diagonal.get_or_init(|| {
            let d12 = self.realize_diag(Pair(0, 1), 0);
            let d13 = self.realize_diag(Pair(0, 2), 0);
            d12.product(&d13).expect("same factors")
        })
    }

    fn realize_diag(&self, pair: Pair, free_exp: u8) -> RealizedClass {
        let f = &self.factor;
        let mut x = RealizedClass::zero(self.factors(3));
        let k = pair.complement() as usize;
        for (a, b, c) in f.diagonal_terms() {
            let mut key = vec![0 as Slot; 3];
            key[pair.0 as usize] = a;
            key[pair.1 as usize] = b;
            key[k] = f.h(free_exp as usize);
            x.add_entry(key, c);
        }
        x
    }

    pub fn realize(&self, x: &CorrClass) -> RealizedClass {
        let n = x.n() as usize;
        let f = &self.factor;
        let mut out = RealizedClass::zero(self.factors(n));
        for (b, c) in x.terms() {
            match *b {
                Basis::Mono(m) => {
                    out.add_entry((0..n).map(|i| f.h(m[i] as usize)).collect(), c.clone());
                }
                Basis::Diag { pair, free_exp } => {
                    let part = if n == 2 {
                        RealizedClass::diagonal(f)
                    } else {
                        self.realize_diag(pair, free_exp)
                    };
                    out = out.add(&part.scale(c)).expect("same factors");
                }
                Basis::Small => {
                    out = out.add(&self.small_diagonal().scale(c)).expect("same factors");
                }
            }
        }
        out
    }

    /// The realized primitive diagonal `κ = Σ G⁻¹ₐᵦ eₐ ⊗ e_b`.
    pub fn kappa(&self) -> RealizedClass {
        RealizedClass::diagonal(&self.factor).prim_components()
    }

    /// `R = δ − (1/3)[Δ₁₂h₃⁴ + Δ₁₃h₂⁴ + Δ₂₃h₁⁴]` realized, with `1/3 = 1/e`.
    pub fn mck_remainder(&self) -> RealizedClass {
        let d = self.ring.dim();
        let inv_e = self.ring.degree().recip();
        let mut r = self.small_diagonal().clone();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let t = self.realize(&CorrClass::partial_diagonal(i, j, d));
            r = r.sub(&t.scale(&inv_e)).expect("same factors");
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerMismatch {
    pub got: Rational,
    pub expected: Rational,
}

impl fmt::Display for EulerMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "deg(Δ·Δ) = {} but ∫c_top = {}",
            rational::display(&self.got),
            rational::display(&self.expected)
        )
    }
}

/// A polynomial in `h₁, h₂, h₃`, keyed by exponents.
pub type Poly3 = BTreeMap<[u8; 3], Rational>;

/// The pure `h`-polynomial `P` with `δ = (1/3)[Δ₁₂h₃⁴ + Δ₁₃h₂⁴ + Δ₂₃h₁⁴] + P`
/// in cohomology. Fails if the remainder has a component involving `V`.
pub fn derive_p(cfg: &RealizationConfig) -> Result<Poly3, RealizationError> {
    let r = cfg.mck_remainder();
    let v = r.prim_components();
    if let Some((k, c)) = v.entries().iter().next() {
        return Err(RealizationError::MckShadowViolated(format!(
            "{} with coefficient {}",
            r.key_name(k),
            rational::display(c)
        )));
    }
    let f = cfg.factor();
    Ok(r.entries()
        .iter()
        .map(|(k, c)| {
            let e = [0, 1, 2].map(|i| f.h_power(k[i]).expect("pure h entry") as u8);
            (e, c.clone())
        })
        .collect())
}

pub fn poly3_to_corr(p: &Poly3) -> CorrClass {
    p.iter().fold(CorrClass::zero(3), |acc, (e, c)| {
        &acc + &CorrClass::basis(3, Basis::Mono(*e), c.clone())
    })
}

pub fn poly3_is_symmetric(p: &Poly3) -> bool {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    p.iter().all(|(e, c)| {
        PERMS.iter().all(|perm| {
            let pe = [e[perm[0]], e[perm[1]], e[perm[2]]];
            p.get(&pe) == Some(c)
        })
    })
}

pub fn poly3_to_string(p: &Poly3) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (e, c) in p {
        let mono: Vec<String> = (0..3)
            .filter(|&i| e[i] > 0)
            .map(|i| if e[i] == 1 { format!("h{}", i + 1) } else { format!("h{}^{}", i + 1, e[i]) })
            .collect();
        let mono = if mono.is_empty() { "1".into() } else { mono.join("*") };
        parts.push(format!("({})*{}", rational::display(c), mono));
    }
    parts.join(" + ")
}

/// Closed-form `deg(R · h₁ᵃh₂ᵇh₃ᶜ)` for a cubic fourfold.
pub fn remainder_degree_oracle(a: u8, b: u8, c: u8) -> Rational {
    let ind = |x: bool| if x { 1 } else { 0 };
    let s = a + b + c;
    int(3 * ind(s == 4)
        - 3 * (ind(c == 0 && a + b == 4) + ind(b == 0 && a + c == 4) + ind(a == 0 && b + c == 4)))
}

/// Outcome of one named identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub fn compare(name: &str, got: &RealizedClass, expected: &RealizedClass) -> Self {
        let witness = got.diff_witness(expected);
        IdentityCheck {
            name: name.into(),
            passed: witness.is_none(),
            witness,
        }
    }

    pub fn from_bool(name: &str, passed: bool, witness: impl FnOnce() -> String) -> Self {
        IdentityCheck {
            name: name.into(),
            passed,
            witness: (!passed).then(witness),
        }
    }
}

/// Realized kernel classes of the two projections.
pub fn realized_kernels(cfg: &RealizationConfig) -> (RealizedClass, RealizedClass) {
    let l = mukai::kernel_class(cfg.ring(), Side::L);
    let r = mukai::kernel_class(cfg.ring(), Side::R);
    (cfg.realize(&l.class), cfg.realize(&r.class))
}

/// Composition identities of the projection kernels and the primitive sandwich.
pub fn verify_kernel_identities(cfg: &RealizationConfig) -> Vec<IdentityCheck> {
    let (pl, pr) = realized_kernels(cfg);
    let c = |f: &RealizedClass, g: &RealizedClass| RealizedClass::compose(f, g).expect("X × X classes");
    let mut out = vec![
        IdentityCheck::compare("pL∘pL = pL", &c(&pl, &pl), &pl),
        IdentityCheck::compare("pR∘pR = pR", &c(&pr, &pr), &pr),
        // g ∘ f is `c(f, g)`.
        IdentityCheck::compare("pL∘pR = pR", &c(&pr, &pl), &pr),
        IdentityCheck::compare("pR∘pL = pL", &c(&pl, &pr), &pl),
    ];
    let pi = cfg.realize(&cfg.ring().ck_projectors().p4_prim);
    for (name, k) in [("L", &pl), ("R", &pr)] {
        let v4 = k.codim_part(cfg.ring().dim() as usize);
        let sandwich = c(&c(&pi, &v4), &pi);
        out.push(IdentityCheck::compare(
            &format!("π4prim∘v4(p{name})∘π4prim = π4prim"),
            &sandwich,
            &pi,
        ));
    }
    out
}

/// `v₄(p)` restricted to `V`, as a matrix on the coordinates of `V`.
pub fn kernel_on_prim(cfg: &RealizationConfig, k: &RealizedClass) -> Matrix {
    let f = cfg.factor();
    let v4 = k.codim_part(f.dim());
    let r = f.rank();
    let cols: Vec<Vector> = (0..r)
        .map(|i| {
            let mut unit = vec![Rational::zero(); r];
            unit[i] = Rational::one();
            let img = RealizedClass::act(&v4, &RealizedClass::prim_vector(f, &unit)).expect("shapes");
            (0..r).map(|j| img.get(&[f.e(j)])).collect()
        })
        .collect();
    Matrix::from_columns(r, &cols)
}
