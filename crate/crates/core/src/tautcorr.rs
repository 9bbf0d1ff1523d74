//! The free tautological ring on `X`, `X²` and `X³` for a smooth hypersurface `X`:
//! hyperplane monomials, partial diagonals `Δᵢⱼ` and the small diagonal `δ`.
//!
//! Products are reduced to a normal form with the excess-intersection rule
//! `Δ · (hᵃ × hᵇ) = Δ_*(h^{a+b})`, the self-intersection `Δ² = Δ_*(c_d(T_X))`
//! and `Δᵢⱼ · Δⱼₖ = δ`. No relation expressing `δ` through the other generators
//! is imposed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CorrError, ParseError};
use crate::gradedring::{self, VarietyData};
use crate::rational::{self, int, Rational};

/// Unordered pair of factor indices, stored zero-based with `.0 < .1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(pub u8, pub u8);

impl Pair {
    pub fn new(i: u8, j: u8) -> Self {
        if i < j {
            Pair(i, j)
        } else {
            Pair(j, i)
        }
    }

    /// The remaining index of `{0,1,2}`.
    pub fn complement(self) -> u8 {
        3 - self.0 - self.1
    }

    pub fn contains(self, k: u8) -> bool {
        self.0 == k || self.1 == k
    }
}

/// Normal-form basis elements. The derived order puts monomials first
/// (lexicographic in the exponents), then diagonal terms, then `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Mono([u8; 3]),
    /// `Δ_pair · h_k^free_exp`; on `X²` the pair is `(0,1)` and the exponent is 0.
    Diag { pair: Pair, free_exp: u8 },
    Small,
}

impl Basis {
    pub fn code(&self, n: u8) -> String {
        match *self {
            Basis::Mono(m) => {
                let parts: Vec<String> = (0..n as usize)
                    .filter(|&i| m[i] > 0)
                    .map(|i| {
                        if m[i] == 1 {
                            format!("h{}", i + 1)
                        } else {
                            format!("h{}^{}", i + 1, m[i])
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join(" ")
                }
            }
            Basis::Diag { pair, free_exp } => {
                let d = format!("D{}{}", pair.0 + 1, pair.1 + 1);
                match free_exp {
                    0 => d,
                    1 => format!("{d} h{}", pair.complement() + 1),
                    c => format!("{d} h{}^{c}", pair.complement() + 1),
                }
            }
            Basis::Small => "delta".into(),
        }
    }

    pub fn parse(code: &str, n: u8) -> Result<Basis, ParseError> {
        let bad = || ParseError::Monomial(code.to_string());
        let code = code.trim();
        if code == "delta" {
            return if n == 3 { Ok(Basis::Small) } else { Err(bad()) };
        }
        if code == "1" {
            return Ok(Basis::Mono([0; 3]));
        }
        let mut exps = [0u8; 3];
        let mut pair = None;
        for tok in code.split_whitespace() {
            if let Some(rest) = tok.strip_prefix('D') {
                let b = rest.as_bytes();
                if b.len() != 2 || pair.is_some() {
                    return Err(bad());
                }
                let i = b[0].wrapping_sub(b'1');
                let j = b[1].wrapping_sub(b'1');
                if i >= j || j >= n {
                    return Err(bad());
                }
                pair = Some(Pair(i, j));
            } else if let Some(rest) = tok.strip_prefix('h') {
                let (idx, exp) = match rest.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u8>().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                let idx: usize = idx.parse().map_err(|_| bad())?;
                if idx == 0 || idx > n as usize || exps[idx - 1] != 0 {
                    return Err(bad());
                }
                exps[idx - 1] = exp;
            } else {
                return Err(bad());
            }
        }
        match pair {
            None => Ok(Basis::Mono(exps)),
            Some(p) => {
                if exps[p.0 as usize] != 0 || exps[p.1 as usize] != 0 {
                    return Err(bad());
                }
                let free_exp = if n == 3 { exps[p.complement() as usize] } else { 0 };
                Ok(Basis::Diag { pair: p, free_exp })
            }
        }
    }
}

/// A ℚ-linear combination of normal-form basis elements on `Xⁿ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CorrClass {
    n: u8,
    terms: BTreeMap<Basis, Rational>,
}

impl fmt::Debug for CorrClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CorrClass(n={}, {})", self.n, self)
    }
}

impl fmt::Display for CorrClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("{}*[{}]", rational::display(c), b.code(self.n)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: String,
    pub coeff: String,
}

impl CorrClass {
    pub fn zero(n: u8) -> Self {
        assert!((1..=3).contains(&n), "classes live on X, X^2 or X^3");
        CorrClass {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(n: u8, b: Basis, c: Rational) -> Self {
        let mut x = Self::zero(n);
        x.add_term(b, c);
        x
    }

    /// `h₁^{e₀} ⋯ hₙ^{e_{n-1}}`; unused exponents must be zero.
    pub fn mono(n: u8, exps: [u8; 3]) -> Self {
        assert!(exps[n as usize..].iter().all(|&e| e == 0), "exponent on a missing factor");
        Self::basis(n, Basis::Mono(exps), Rational::one())
    }

    /// The diagonal of `X²`.
    pub fn diagonal() -> Self {
        Self::basis(2, Basis::Diag { pair: Pair(0, 1), free_exp: 0 }, Rational::one())
    }

    /// `Δᵢⱼ · h_k^c` on `X³`, indices one-based.
    pub fn partial_diagonal(i: u8, j: u8, c: u8) -> Self {
        let pair = Pair::new(i - 1, j - 1);
        Self::basis(3, Basis::Diag { pair, free_exp: c }, Rational::one())
    }

    pub fn small_diagonal() -> Self {
        Self::basis(3, Basis::Small, Rational::one())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Basis, Rational> {
        &self.terms
    }

    pub fn coeff(&self, b: &Basis) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, b: Basis, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    fn check(&self, other: &CorrClass) -> Result<(), CorrError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(CorrError::Arity {
                expected: self.n,
                got: other.n,
            })
        }
    }

    pub fn try_add(&self, other: &CorrClass) -> Result<CorrClass, CorrError> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> CorrClass {
        let mut out = CorrClass::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, c * s);
        }
        out
    }

    /// Relabel factors: factor `i` of `self` becomes factor `perm[i]`.
    pub fn permute(&self, perm: &[u8]) -> CorrClass {
        assert_eq!(perm.len(), self.n as usize, "permutation length");
        let mut out = CorrClass::zero(self.n);
        for (b, c) in &self.terms {
            let nb = match *b {
                Basis::Mono(m) => {
                    let mut e = [0u8; 3];
                    for i in 0..self.n as usize {
                        e[perm[i] as usize] = m[i];
                    }
                    Basis::Mono(e)
                }
                Basis::Diag { pair, free_exp } => Basis::Diag {
                    pair: Pair::new(perm[pair.0 as usize], perm[pair.1 as usize]),
                    free_exp,
                },
                Basis::Small => Basis::Small,
            };
            out.add_term(nb, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(b, c)| TermJson {
                monomial: b.code(self.n),
                coeff: rational::to_string(c),
            })
            .collect()
    }

    pub fn from_json(n: u8, terms: &[TermJson]) -> Result<CorrClass, ParseError> {
        if !(1..=3).contains(&n) {
            return Err(ParseError::Shape(format!("arity {n}")));
        }
        let mut out = CorrClass::zero(n);
        for t in terms {
            out.add_term(Basis::parse(&t.monomial, n)?, rational::parse(&t.coeff)?);
        }
        Ok(out)
    }
}

impl Add for &CorrClass {
    type Output = CorrClass;
    fn add(self, rhs: &CorrClass) -> CorrClass {
        self.try_add(rhs).expect("classes of the same arity")
    }
}

impl Sub for &CorrClass {
    type Output = CorrClass;
    fn sub(self, rhs: &CorrClass) -> CorrClass {
        self.try_add(&-rhs).expect("classes of the same arity")
    }
}

impl Neg for &CorrClass {
    type Output = CorrClass;
    fn neg(self) -> CorrClass {
        self.scale(&int(-1))
    }
}

/// One term of an unreduced expression: `coeff · h^exps · Π diags`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub coeff: Rational,
    pub exps: [u32; 3],
    pub diags: Vec<Pair>,
}

/// A projection between powers of `X`; indices are one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// `p_{ij}^*` from `X²` to `X³`; factor 1 goes to `i`, factor 2 to `j`.
    Pull2To3(u8, u8),
    /// `p_{ij*}` from `X³` to `X²`.
    Push3To2(u8, u8),
    /// `p_i^*` from `X` to `X^n`.
    Pull1(u8, u8),
    /// `p_{i*}` from `X²` to `X`.
    Push2To1(u8),
}

/// The ring data: dimension, degree and top Chern number of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautRing {
    d: u8,
    e: Rational,
    /// Coefficient of `h^d` in `c(T_X)`.
    top_chern: Rational,
}

impl TautRing {
    pub fn new(vd: &VarietyData) -> Result<Self, CorrError> {
        let (c, _) = gradedring::tangent_chern(vd)?;
        if vd.is_k3() {
            return Err(CorrError::Ring(crate::error::RingError::NotHypersurface));
        }
        Ok(TautRing {
            d: vd.dim as u8,
            e: int(vd.degree as i64),
            top_chern: c.coeff(vd.dim),
        })
    }

    pub fn cubic() -> Self {
        Self::new(&VarietyData::cubic_fourfold()).expect("cubic fourfold data is valid")
    }

    pub fn dim(&self) -> u8 {
        self.d
    }

    pub fn degree(&self) -> &Rational {
        &self.e
    }

    pub fn top_chern(&self) -> &Rational {
        &self.top_chern
    }

    /// `Δ_*(h^k)` on `X²`.
    pub fn diagonal_push(&self, k: u32) -> CorrClass {
        let mut out = CorrClass::zero(2);
        self.reduce_into(&mut out, Rational::one(), [k, 0, 0], vec![Pair(0, 1)]);
        out
    }

    pub fn reduce(&self, n: u8, raw: &[RawTerm]) -> Result<CorrClass, CorrError> {
        let mut out = CorrClass::zero(n);
        for t in raw {
            if t.exps[n as usize..].iter().any(|&e| e != 0) {
                return Err(CorrError::Projection("exponent on a missing factor".into()));
            }
            if let Some(&e) = t.exps.iter().find(|&&e| e > u8::MAX as u32) {
                return Err(CorrError::Overflow(e));
            }
            for p in &t.diags {
                if p.0 >= p.1 || p.1 >= n {
                    return Err(CorrError::Projection(format!("bad diagonal {p:?}")));
                }
            }
            self.reduce_into(&mut out, t.coeff.clone(), t.exps, t.diags.clone());
        }
        Ok(out)
    }

    fn reduce_into(&self, out: &mut CorrClass, coeff: Rational, mut m: [u32; 3], mut diags: Vec<Pair>) {
        let d = self.d as u32;
        if coeff.is_zero() || m.iter().any(|&e| e > d) {
            return;
        }
        diags.sort();
        if let Some(i) = (1..diags.len()).find(|&i| diags[i] == diags[i - 1]) {
            // Δᵢⱼ² = c_d · (h^d × h^d) / e on the pair.
            let p = diags[i];
            diags.drain(i - 1..=i);
            m[p.0 as usize] += d;
            m[p.1 as usize] += d;
            let c = coeff * &self.top_chern / &self.e;
            return self.reduce_into(out, c, m, diags);
        }
        match diags.len() {
            0 => out.add_term(Basis::Mono(m.map(|e| e as u8)), coeff),
            1 => {
                let p = diags[0];
                let s = m[p.0 as usize] + m[p.1 as usize];
                if s == 0 {
                    let free_exp = if out.n == 3 { m[p.complement() as usize] as u8 } else { 0 };
                    out.add_term(Basis::Diag { pair: p, free_exp }, coeff);
                    return;
                }
                let c = coeff / &self.e;
                for t in 1..=d {
                    let mut mm = m;
                    mm[p.0 as usize] = t + s - 1;
                    mm[p.1 as usize] = d + 1 - t;
                    self.reduce_into(out, c.clone(), mm, Vec::new());
                }
            }
            2 => {
                if m == [0; 3] {
                    out.add_term(Basis::Small, coeff);
                    return;
                }
                let (p, q) = if m[diags[0].0 as usize] + m[diags[0].1 as usize] > 0 {
                    (diags[0], diags[1])
                } else {
                    (diags[1], diags[0])
                };
                let mut tmp = CorrClass::zero(out.n);
                self.reduce_into(&mut tmp, coeff, m, vec![p]);
                for (b, c) in tmp.terms {
                    match b {
                        Basis::Mono(mm) => {
                            self.reduce_into(out, c, mm.map(u32::from), vec![q]);
                        }
                        _ => unreachable!("a diagonal against a positive exponent reduces to monomials"),
                    }
                }
            }
            _ => {
                // Δ₁₂Δ₁₃Δ₂₃ = Δ₁₂ · δ = Δ₁₂²Δ₁₃.
                self.reduce_into(out, coeff, m, vec![Pair(0, 1), Pair(0, 1), Pair(0, 2)]);
            }
        }
    }

    fn raw_of(b: &Basis) -> ([u32; 3], Vec<Pair>) {
        match *b {
            Basis::Mono(m) => (m.map(u32::from), Vec::new()),
            Basis::Diag { pair, free_exp } => {
                let mut m = [0u32; 3];
                m[pair.complement() as usize] = free_exp as u32;
                (m, vec![pair])
            }
            Basis::Small => ([0; 3], vec![Pair(0, 1), Pair(0, 2)]),
        }
    }

    pub fn intersect(&self, a: &CorrClass, b: &CorrClass) -> Result<CorrClass, CorrError> {
        a.check(b)?;
        let mut out = CorrClass::zero(a.n);
        for (x, cx) in &a.terms {
            let (mx, dx) = Self::raw_of(x);
            for (y, cy) in &b.terms {
                let (my, dy) = Self::raw_of(y);
                let m = [mx[0] + my[0], mx[1] + my[1], mx[2] + my[2]];
                let mut diags = dx.clone();
                diags.extend_from_slice(&dy);
                self.reduce_into(&mut out, cx * cy, m, diags);
            }
        }
        Ok(out)
    }

    fn require(x: &CorrClass, n: u8) -> Result<(), CorrError> {
        if x.n == n {
            Ok(())
        } else {
            Err(CorrError::Arity {
                expected: n,
                got: x.n,
            })
        }
    }

    pub fn transpose(&self, f: &CorrClass) -> Result<CorrClass, CorrError> {
        Self::require(f, 2)?;
        Ok(f.permute(&[1, 0]))
    }

    /// `g ∘ f` by the closed rules `Δ ∘ x = x ∘ Δ = x` and
    /// `(h^c × h^s) ∘ (h^a × h^b) = e [b + c = d] h^a × h^s`.
    pub fn compose(&self, f: &CorrClass, g: &CorrClass) -> Result<CorrClass, CorrError> {
        Self::require(f, 2)?;
        Self::require(g, 2)?;
        let d = self.d;
        let mut out = CorrClass::zero(2);
        for (x, cx) in &f.terms {
            for (y, cy) in &g.terms {
                let c = cx * cy;
                match (x, y) {
                    (Basis::Diag { .. }, _) => out.add_term(*y, c),
                    (_, Basis::Diag { .. }) => out.add_term(*x, c),
                    (Basis::Mono([a, b, _]), Basis::Mono([cc, s, _])) => {
                        if b + cc == d {
                            out.add_term(Basis::Mono([*a, *s, 0]), c * &self.e);
                        }
                    }
                    _ => unreachable!("no small diagonal on X^2"),
                }
            }
        }
        Ok(out)
    }

    /// `g ∘ f = p₁₃*(p₁₂^*f · p₂₃^*g)` through `X³`.
    pub fn compose_pull_push(&self, f: &CorrClass, g: &CorrClass) -> Result<CorrClass, CorrError> {
        Self::require(f, 2)?;
        Self::require(g, 2)?;
        let pf = self.push_pull(f, Projection::Pull2To3(1, 2))?;
        let pg = self.push_pull(g, Projection::Pull2To3(2, 3))?;
        let prod = self.intersect(&pf, &pg)?;
        self.push_pull(&prod, Projection::Push3To2(1, 3))
    }

    pub fn push_pull(&self, f: &CorrClass, spec: Projection) -> Result<CorrClass, CorrError> {
        let bad = |s: &str| CorrError::Projection(s.to_string());
        let d = self.d;
        match spec {
            Projection::Pull2To3(i, j) => {
                Self::require(f, 2)?;
                if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i == j {
                    return Err(bad("pull needs two distinct indices in 1..=3"));
                }
                let (i, j) = (i - 1, j - 1);
                let mut out = CorrClass::zero(3);
                for (b, c) in &f.terms {
                    let nb = match *b {
                        Basis::Mono([a, bb, _]) => {
                            let mut m = [0u8; 3];
                            m[i as usize] = a;
                            m[j as usize] = bb;
                            Basis::Mono(m)
                        }
                        Basis::Diag { .. } => Basis::Diag {
                            pair: Pair::new(i, j),
                            free_exp: 0,
                        },
                        Basis::Small => unreachable!(),
                    };
                    out.add_term(nb, c.clone());
                }
                Ok(out)
            }
            Projection::Push3To2(i, j) => {
                Self::require(f, 3)?;
                if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i == j {
                    return Err(bad("push needs two distinct indices in 1..=3"));
                }
                let (i, j) = (i - 1, j - 1);
                let k = 3 - i - j;
                let mut out = CorrClass::zero(2);
                for (b, c) in &f.terms {
                    match *b {
                        Basis::Mono(m) => {
                            if m[k as usize] == d {
                                out.add_term(
                                    Basis::Mono([m[i as usize], m[j as usize], 0]),
                                    c * &self.e,
                                );
                            }
                        }
                        Basis::Diag { pair, free_exp } => {
                            if pair == Pair::new(i, j) {
                                if free_exp == d {
                                    out.add_term(
                                        Basis::Diag { pair: Pair(0, 1), free_exp: 0 },
                                        c * &self.e,
                                    );
                                }
                            } else if pair.contains(i) {
                                out.add_term(Basis::Mono([0, free_exp, 0]), c.clone());
                            } else {
                                out.add_term(Basis::Mono([free_exp, 0, 0]), c.clone());
                            }
                        }
                        Basis::Small => {
                            out.add_term(Basis::Diag { pair: Pair(0, 1), free_exp: 0 }, c.clone())
                        }
                    }
                }
                Ok(out)
            }
            Projection::Pull1(n, i) => {
                Self::require(f, 1)?;
                if !(2..=3).contains(&n) || !(1..=n).contains(&i) {
                    return Err(bad("pull from X needs a target arity 2 or 3 and an index"));
                }
                let mut out = CorrClass::zero(n);
                for (b, c) in &f.terms {
                    if let Basis::Mono([a, _, _]) = *b {
                        let mut m = [0u8; 3];
                        m[i as usize - 1] = a;
                        out.add_term(Basis::Mono(m), c.clone());
                    }
                }
                Ok(out)
            }
            Projection::Push2To1(i) => {
                Self::require(f, 2)?;
                if !(1..=2).contains(&i) {
                    return Err(bad("push to X needs index 1 or 2"));
                }
                let (keep, other) = if i == 1 { (0, 1) } else { (1, 0) };
                let mut out = CorrClass::zero(1);
                for (b, c) in &f.terms {
                    match *b {
                        Basis::Mono(m) => {
                            if m[other] == d {
                                out.add_term(Basis::Mono([m[keep], 0, 0]), c * &self.e);
                            }
                        }
                        Basis::Diag { .. } => out.add_term(Basis::Mono([0; 3]), c.clone()),
                        Basis::Small => unreachable!(),
                    }
                }
                Ok(out)
            }
        }
    }

    /// `(1/e) h^{d-k} × h^k`, the projector onto `H^{2k}` for `2k ≠ d`.
    pub fn graded_projector(&self, k: u8) -> CorrClass {
        CorrClass::basis(2, Basis::Mono([self.d - k, k, 0]), self.e.recip())
    }

    pub fn ck_projectors(&self) -> CkProjectors {
        let d = self.d;
        assert!(d == 4, "projector family is defined for fourfolds");
        let p0 = self.graded_projector(0);
        let p2 = self.graded_projector(1);
        let p6 = self.graded_projector(3);
        let p8 = self.graded_projector(4);
        let mut p4 = CorrClass::diagonal();
        for p in [&p0, &p2, &p6, &p8] {
            p4 = &p4 - p;
        }
        let p4_prim = &p4 - &self.graded_projector(2);
        CkProjectors { p0, p2, p4, p6, p8, p4_prim }
    }

    /// Basis of codimension-`k` monomials on `X^n`.
    pub fn monomials(&self, n: u8, k: u32) -> Vec<CorrClass> {
        let d = self.d as u32;
        let mut out = Vec::new();
        let range = |used: bool| if used { 0..=d } else { 0..=0 };
        for a in range(true) {
            for b in range(n >= 2) {
                for c in range(n >= 3) {
                    if a + b + c == k {
                        out.push(CorrClass::mono(n, [a as u8, b as u8, c as u8]));
                    }
                }
            }
        }
        out
    }

    /// The full normal-form basis on `X^n`.
    pub fn full_basis(&self, n: u8) -> Vec<CorrClass> {
        let mut out: Vec<CorrClass> = (0..=n as u32 * self.d as u32)
            .flat_map(|k| self.monomials(n, k))
            .collect();
        match n {
            2 => out.push(CorrClass::diagonal()),
            3 => {
                for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                    for c in 0..=self.d {
                        out.push(CorrClass::partial_diagonal(i, j, c));
                    }
                }
                out.push(CorrClass::small_diagonal());
            }
            _ => {}
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CkProjectors {
    pub p0: CorrClass,
    pub p2: CorrClass,
    pub p4: CorrClass,
    pub p6: CorrClass,
    pub p8: CorrClass,
    pub p4_prim: CorrClass,
}

impl CkProjectors {
    /// `(label, projector)` for the five graded pieces.
    pub fn graded(&self) -> [(&'static str, &CorrClass); 5] {
        [
            ("pi0", &self.p0),
            ("pi2", &self.p2),
            ("pi4", &self.p4),
            ("pi6", &self.p6),
            ("pi8", &self.p8),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn third() -> Rational {
        frac(1, 3)
    }

    fn r() -> TautRing {
        TautRing::cubic()
    }

    fn m2(a: u8, b: u8) -> CorrClass {
        CorrClass::mono(2, [a, b, 0])
    }

    fn m3(a: u8, b: u8, c: u8) -> CorrClass {
        CorrClass::mono(3, [a, b, c])
    }

    fn sum(xs: &[CorrClass]) -> CorrClass {
        xs.iter().fold(CorrClass::zero(xs[0].n()), |acc, x| &acc + x)
    }

    #[test]
    fn excess_intersection() {
        let r = r();
        let got = r.intersect(&CorrClass::diagonal(), &m2(1, 0)).unwrap();
        let expected = sum(&[m2(1, 4), m2(2, 3), m2(3, 2), m2(4, 1)]).scale(&third());
        assert_eq!(got, expected);
        assert_eq!(r.diagonal_push(4), m2(4, 4).scale(&third()));
        let dd = r.intersect(&CorrClass::diagonal(), &CorrClass::diagonal()).unwrap();
        assert_eq!(dd, m2(4, 4).scale(&int(3)));
    }

    #[test]
    fn basic_products() {
        let r = r();
        assert!(r.intersect(&CorrClass::mono(1, [2, 0, 0]), &CorrClass::mono(1, [3, 0, 0])).unwrap().is_zero());
        let d12 = CorrClass::partial_diagonal(1, 2, 0);
        let d13 = CorrClass::partial_diagonal(1, 3, 0);
        assert_eq!(r.intersect(&d12, &d13).unwrap(), CorrClass::small_diagonal());
        let lhs = r.intersect(&d12, &m3(0, 0, 4)).unwrap();
        assert_eq!(lhs, CorrClass::partial_diagonal(1, 2, 4));
        assert!(r.intersect(&d12, &m2(1, 0)).is_err());
    }

    #[test]
    fn small_diagonal_products() {
        let r = r();
        let delta = CorrClass::small_diagonal();
        assert!(r.intersect(&delta, &delta).unwrap().is_zero());
        let d12 = CorrClass::partial_diagonal(1, 2, 0);
        assert_eq!(r.intersect(&delta, &d12).unwrap(), m3(4, 4, 4));
        // δ · h₁⁴h₂⁴ integrates like h⁸ on X, so it vanishes.
        assert!(r.intersect(&delta, &m3(4, 4, 0)).unwrap().is_zero());
        // All three routes to δ agree.
        let d23 = CorrClass::partial_diagonal(2, 3, 0);
        let d13 = CorrClass::partial_diagonal(1, 3, 0);
        assert_eq!(r.intersect(&d12, &d23).unwrap(), delta);
        assert_eq!(r.intersect(&d13, &d23).unwrap(), delta);
    }

    #[test]
    fn small_diagonal_is_symmetric_in_its_expansion() {
        let r = r();
        let delta = CorrClass::small_diagonal();
        for m in r.monomials(3, 2) {
            let x = r.intersect(&delta, &m).unwrap();
            for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
                let y = r.intersect(&delta, &m.permute(&perm)).unwrap();
                assert_eq!(x.permute(&perm), y);
            }
        }
    }

    #[test]
    fn pushes() {
        let r = r();
        let p13 = Projection::Push3To2(1, 3);
        assert_eq!(r.push_pull(&CorrClass::small_diagonal(), p13).unwrap(), CorrClass::diagonal());
        assert_eq!(r.push_pull(&m3(2, 4, 1), p13).unwrap(), m2(2, 1).scale(&int(3)));
        assert_eq!(
            r.push_pull(&CorrClass::partial_diagonal(1, 3, 4), p13).unwrap(),
            CorrClass::diagonal().scale(&int(3))
        );
        assert_eq!(r.push_pull(&CorrClass::partial_diagonal(1, 2, 3), p13).unwrap(), m2(0, 3));
        assert_eq!(r.push_pull(&CorrClass::partial_diagonal(2, 3, 2), p13).unwrap(), m2(2, 0));
        assert!(r.push_pull(&m3(0, 0, 0), Projection::Push3To2(1, 1)).is_err());
    }

    #[test]
    fn compositions() {
        let r = r();
        let pi = r.ck_projectors();
        assert_eq!(r.compose(&pi.p0, &pi.p0).unwrap(), pi.p0);
        assert_eq!(r.compose(&m2(2, 1), &CorrClass::diagonal()).unwrap(), m2(2, 1));
        let f = m2(0, 2);
        let g = m2(2, 2);
        let closed = r.compose(&f, &g).unwrap();
        assert_eq!(closed, m2(0, 2).scale(&int(3)));
        assert_eq!(r.compose_pull_push(&f, &g).unwrap(), closed);
    }

    #[test]
    fn transposes() {
        let r = r();
        assert_eq!(r.transpose(&m2(1, 3)).unwrap(), m2(3, 1));
        assert_eq!(r.transpose(&CorrClass::diagonal()).unwrap(), CorrClass::diagonal());
        let pi = r.ck_projectors();
        assert_eq!(r.transpose(&pi.p0).unwrap(), pi.p8);
    }

    #[test]
    fn projector_family() {
        let r = r();
        let pi = r.ck_projectors();
        let total = sum(&[pi.p0.clone(), pi.p2.clone(), pi.p4.clone(), pi.p6.clone(), pi.p8.clone()]);
        assert_eq!(total, CorrClass::diagonal());
        for (i, (_, a)) in pi.graded().iter().enumerate() {
            for (j, (_, b)) in pi.graded().iter().enumerate() {
                let c = r.compose(a, b).unwrap();
                if i == j {
                    assert_eq!(&c, *a);
                } else {
                    assert!(c.is_zero());
                }
            }
        }
        assert_eq!(r.compose(&pi.p4, &pi.p4_prim).unwrap(), pi.p4_prim);
        assert_eq!(r.compose(&pi.p4_prim, &pi.p4).unwrap(), pi.p4_prim);
    }

    #[test]
    fn codes_round_trip() {
        let r = r();
        for n in 1..=3u8 {
            for x in r.full_basis(n) {
                let json = x.to_json();
                assert_eq!(CorrClass::from_json(n, &json).unwrap(), x);
            }
        }
        assert_eq!(Basis::parse("h1^2 h2^4", 2).unwrap(), Basis::Mono([2, 4, 0]));
        assert_eq!(
            Basis::parse("D12 h3^3", 3).unwrap(),
            Basis::Diag { pair: Pair(0, 1), free_exp: 3 }
        );
        assert!(Basis::parse("D12 h1", 3).is_err());
        assert!(Basis::parse("delta", 2).is_err());
    }
}
