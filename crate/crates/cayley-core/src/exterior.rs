//! Exterior algebra on coordinate subspaces of ℝ⁸ with exact coefficients.
//!
//! A multi-index is a bitmask over the eight coordinate directions 0…7, and
//! every form carries a `universe` mask saying which directions exist for it
//! (all of ℝ⁸, the imaginary directions 1…7, or a 4-dimensional coordinate
//! subspace). Coefficients live in ℚ(√2)(i); zero coefficients are pruned so
//! equality is literal map equality.

use crate::linalg::{Mat, MatF};
use crate::scalar::{rat_f64, Scalar};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

pub type Mask = u8;

/// All eight directions 0…7.
pub const FULL8: Mask = 0xFF;
/// The seven imaginary directions 1…7.
pub const IMAG7: Mask = 0xFE;

#[derive(Debug, Error)]
pub enum ExteriorError {
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("volume normalization √|det g| = √({0}) does not lie in the scalar field")]
    IrrationalVolume(String),
    #[error("metric has complex entries where a real one is required")]
    ComplexMetric,
}

pub fn mask_from_indices(idx: &[usize]) -> Mask {
    idx.iter().fold(0u8, |m, &i| {
        assert!(i < 8, "direction index out of range");
        m | (1u8 << i)
    })
}

pub fn indices_of_mask(m: Mask) -> Vec<usize> {
    (0..8).filter(|&i| m & (1 << i) != 0).collect()
}

pub fn mask_dim(m: Mask) -> u8 {
    m.count_ones() as u8
}

fn low_mask(j: usize) -> Mask {
    (1u16 << j) as Mask - 1
}

/// Sign of e^{a₁}∧…∧e^{aₚ}∧e^{b₁}∧…∧e^{b_q} relative to the sorted merge,
/// for disjoint sorted masks: (−1)^{#inversions between the two blocks}.
pub(crate) fn merge_sign(a: Mask, b: Mask) -> i32 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    for i in indices_of_mask(a) {
        inversions += (b & low_mask(i)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorted mask and permutation sign of an index word; None when an index
/// repeats.
pub fn sort_sign(idx: &[usize]) -> Option<(Mask, i32)> {
    let mut mask: Mask = 0;
    let mut sign = 1i32;
    for &i in idx {
        assert!(i < 8);
        let bit = 1u8 << i;
        if mask & bit != 0 {
            return None;
        }
        // Appending i after the already-placed set: count placed indices
        // greater than i.
        let greater = (mask & !low_mask(i) & !bit).count_ones();
        if greater % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// All grade-k multi-indices inside `universe`, in ascending mask order.
pub fn keys_of(universe: Mask, grade: u8) -> Vec<Mask> {
    (0u16..256)
        .map(|m| m as Mask)
        .filter(|&m| m & !universe == 0 && mask_dim(m) == grade)
        .collect()
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// A vector with components on the directions of its universe.
#[derive(Clone, PartialEq)]
pub struct VectorX {
    universe: Mask,
    comps: Vec<Scalar>, // always length 8; zero outside the universe
}

impl VectorX {
    pub fn zero(universe: Mask) -> Self {
        VectorX {
            universe,
            comps: vec![Scalar::zero(); 8],
        }
    }

    pub fn basis(universe: Mask, j: usize) -> Self {
        let mut v = VectorX::zero(universe);
        v.set(j, Scalar::one());
        v
    }

    pub fn from_components(universe: Mask, entries: &[(usize, Scalar)]) -> Self {
        let mut v = VectorX::zero(universe);
        for (j, s) in entries {
            let cur = v.get(*j) + s;
            v.set(*j, cur);
        }
        v
    }

    pub fn universe(&self) -> Mask {
        self.universe
    }

    pub fn get(&self, j: usize) -> Scalar {
        self.comps[j].clone()
    }

    pub fn set(&mut self, j: usize, s: Scalar) {
        assert!(
            self.universe & (1 << j) != 0 || s.is_zero(),
            "component outside the universe"
        );
        self.comps[j] = s;
    }

    pub fn components(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn add(&self, other: &VectorX) -> VectorX {
        assert_eq!(self.universe, other.universe);
        VectorX {
            universe: self.universe,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &VectorX) -> VectorX {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> VectorX {
        VectorX {
            universe: self.universe,
            comps: self.comps.iter().map(|c| c * s).collect(),
        }
    }

    pub fn conj(&self) -> VectorX {
        VectorX {
            universe: self.universe,
            comps: self.comps.iter().map(Scalar::conj).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.comps.iter().all(Scalar::is_real)
    }

    /// Reinterpret on a larger universe.
    pub fn embed(&self, bigger: Mask) -> VectorX {
        assert_eq!(self.universe & bigger, self.universe);
        VectorX {
            universe: bigger,
            comps: self.comps.clone(),
        }
    }
}

impl std::fmt::Debug for VectorX {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..8)
            .filter(|&j| !self.comps[j].is_zero())
            .map(|j| format!("({})e{}", self.comps[j], j))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

// ---------------------------------------------------------------------------
// Forms
// ---------------------------------------------------------------------------

/// Exterior form of a fixed grade on a coordinate subspace.
#[derive(Clone)]
pub struct Form {
    universe: Mask,
    grade: u8,
    terms: BTreeMap<Mask, Scalar>,
}

impl Form {
    pub fn zero(universe: Mask, grade: u8) -> Self {
        Form {
            universe,
            grade,
            terms: BTreeMap::new(),
        }
    }

    /// Grade-0 form with the given value.
    pub fn scalar_form(universe: Mask, s: Scalar) -> Self {
        let mut f = Form::zero(universe, 0);
        f.add_term(0, s);
        f
    }

    /// Top-degree basis form e^{i₁…} with indices in increasing order.
    pub fn volume(universe: Mask) -> Self {
        let mut f = Form::zero(universe, mask_dim(universe));
        f.add_term(universe, Scalar::one());
        f
    }

    /// Single term c·e^{i₁}∧…∧e^{i_k}; indices in any order, parity applied.
    pub fn term(universe: Mask, idx: &[usize], coeff: Scalar) -> Self {
        let mut f = Form::zero(universe, idx.len() as u8);
        match sort_sign(idx) {
            None => f,
            Some((mask, sign)) => {
                assert_eq!(mask & !universe, 0, "index outside the universe");
                let c = if sign < 0 { -coeff } else { coeff };
                f.add_term(mask, c);
                f
            }
        }
    }

    pub fn basis_form(universe: Mask, idx: &[usize]) -> Self {
        Form::term(universe, idx, Scalar::one())
    }

    /// Σ cᵢ·e^{word_i} with integer coefficients — the shape the printed
    /// structure forms come in.
    pub fn from_int_terms(universe: Mask, terms: &[(i64, &[usize])]) -> Self {
        assert!(!terms.is_empty());
        let grade = terms[0].1.len() as u8;
        let mut f = Form::zero(universe, grade);
        for (c, idx) in terms {
            assert_eq!(idx.len() as u8, grade, "mixed grades in term list");
            f = f.add(&Form::term(universe, idx, Scalar::from_int(*c)));
        }
        f
    }

    /// Grade-1 form Σ cⱼ e^j.
    pub fn one_form(universe: Mask, entries: &[(usize, Scalar)]) -> Self {
        let mut f = Form::zero(universe, 1);
        for (j, s) in entries {
            f = f.add(&Form::term(universe, &[*j], s.clone()));
        }
        f
    }

    pub fn universe(&self) -> Mask {
        self.universe
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mask, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff_mask(&self, mask: Mask) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient against e^{i₁}∧…∧e^{i_k} with the word's parity applied.
    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        match sort_sign(idx) {
            None => Scalar::zero(),
            Some((mask, sign)) => {
                let c = self.coeff_mask(mask);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub(crate) fn add_term(&mut self, mask: Mask, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(mask & !self.universe, 0);
        debug_assert_eq!(mask_dim(mask), self.grade);
        let entry = self.terms.entry(mask).or_insert_with(Scalar::zero);
        *entry += &coeff;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.grade, other.grade, "grade mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero(self.universe, self.grade);
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn times_i(&self) -> Form {
        self.map_coeffs(Scalar::times_i)
    }

    pub fn conj(&self) -> Form {
        self.map_coeffs(Scalar::conj)
    }

    /// Real part, coefficientwise.
    pub fn re(&self) -> Form {
        self.map_coeffs(Scalar::re)
    }

    /// Imaginary part y of the form x + iy, coefficientwise (a real form).
    pub fn im(&self) -> Form {
        self.map_coeffs(Scalar::im)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Form {
        let mut out = Form::zero(self.universe, self.grade);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        let grade = self.grade + other.grade;
        let mut out = Form::zero(self.universe, grade);
        if grade > mask_dim(self.universe) {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(*ma, *mb);
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(ma | mb, c);
            }
        }
        out
    }

    /// Interior product with the j-th basis vector.
    pub fn interior_index(&self, j: usize) -> Form {
        let bit = 1u8 << j;
        let mut out = Form::zero(self.universe, self.grade.saturating_sub(1));
        if self.grade == 0 {
            return out;
        }
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            // e^j in position popcount(m & low_mask(j)) of the sorted word.
            let pos = (m & low_mask(j)).count_ones();
            let mut v = c.clone();
            if pos % 2 == 1 {
                v = -v;
            }
            out.add_term(m & !bit, v);
        }
        out
    }

    /// Interior product with a vector (first slot).
    pub fn interior(&self, v: &VectorX) -> Form {
        assert_eq!(self.universe, v.universe());
        let mut out = Form::zero(self.universe, self.grade.saturating_sub(1));
        for j in indices_of_mask(self.universe) {
            let c = v.get(j);
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.interior_index(j).scale(&c));
        }
        out
    }

    /// α(v₁, …, v_k): fill slots left to right.
    pub fn eval(&self, args: &[&VectorX]) -> Scalar {
        assert_eq!(args.len() as u8, self.grade);
        let mut acc = self.clone();
        for v in args {
            acc = acc.interior(v);
        }
        acc.coeff_mask(0)
    }

    /// Pullback A*α, (A*α)(ξ₁,…) = α(Aξ₁,…); coefficientwise a sum of
    /// k×k minors of A.
    pub fn pullback(&self, a: &Endomorphism) -> Form {
        assert_eq!(self.universe, a.universe());
        let mut out = Form::zero(self.universe, self.grade);
        if self.is_zero() {
            return out;
        }
        let k = self.grade;
        for target in keys_of(self.universe, k) {
            let cols = indices_of_mask(target);
            let mut acc = Scalar::zero();
            for (m, c) in &self.terms {
                let rows = indices_of_mask(*m);
                let minor = Mat::from_fn(cols.len(), cols.len(), |r, s| {
                    a.entry(rows[r], cols[s]).clone()
                });
                let d = minor.det();
                if !d.is_zero() {
                    acc += &(c * &d);
                }
            }
            out.add_term(target, acc);
        }
        out
    }

    /// Drop all terms with a leg outside `sub` and reinterpret on `sub`.
    pub fn restrict(&self, sub: Mask) -> Form {
        assert_eq!(sub & self.universe, sub);
        let mut out = Form::zero(sub, self.grade);
        for (m, c) in &self.terms {
            if m & !sub == 0 {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// Reinterpret on a larger universe.
    pub fn embed(&self, bigger: Mask) -> Form {
        assert_eq!(self.universe & bigger, self.universe);
        let mut out = Form::zero(bigger, self.grade);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Does any term touch direction j?
    pub fn has_leg(&self, j: usize) -> bool {
        let bit = 1u8 << j;
        self.terms.keys().any(|m| m & bit != 0)
    }

    /// Hodge dual for the orientation e^{i₁<…<i_n}: β ∧ *α = ⟨β, α⟩_g vol,
    /// vol = √|det g|·e^{sorted universe}.
    pub fn hodge(&self, g: &SymBilinear) -> Result<Form, ExteriorError> {
        self.hodge_oriented(g, 1)
    }

    /// Hodge dual with the orientation sign·e^{sorted universe}.
    pub fn hodge_oriented(&self, g: &SymBilinear, orientation: i32) -> Result<Form, ExteriorError> {
        assert_eq!(self.universe, g.universe());
        let n = mask_dim(self.universe);
        let k = self.grade;
        let ginv = g.inverse_mat().ok_or(ExteriorError::DegenerateMetric)?;
        let det = g.det();
        if !det.is_real() {
            return Err(ExteriorError::ComplexMetric);
        }
        let abs_det = if det.sign_real() < 0 { -det } else { det };
        let scale = abs_det
            .sqrt_exact()
            .ok_or_else(|| ExteriorError::IrrationalVolume(format!("{abs_det}")))?;
        let scale = if orientation < 0 { -scale } else { scale };
        let mut out = Form::zero(self.universe, n - k);
        for i_mask in keys_of(self.universe, k) {
            let rows = g.local_positions(i_mask);
            let mut sharp = Scalar::zero(); // (α♯)^I = Σ_J det(g⁻¹[I,J]) α_J
            for (j_mask, c) in &self.terms {
                let cols = g.local_positions(*j_mask);
                let minor = Mat::from_fn(rows.len(), rows.len(), |r, s| {
                    ginv.at(rows[r], cols[s]).clone()
                });
                let d = minor.det();
                if !d.is_zero() {
                    sharp += &(c * &d);
                }
            }
            if sharp.is_zero() {
                continue;
            }
            let comp = self.universe & !i_mask;
            let sigma = merge_sign(i_mask, comp);
            let mut v = &sharp * &scale;
            if sigma < 0 {
                v = -v;
            }
            out.add_term(comp, v);
        }
        Ok(out)
    }

    /// Coefficient vector against `keys_of(universe, grade)`.
    pub fn flatten(&self) -> Vec<Scalar> {
        keys_of(self.universe, self.grade)
            .into_iter()
            .map(|m| self.coeff_mask(m))
            .collect()
    }

    /// Real coefficient vector: re, im interleaved.
    pub fn flatten_real(&self) -> Vec<Scalar> {
        self.flatten()
            .into_iter()
            .flat_map(|c| [c.re(), c.im()])
            .collect()
    }

    pub fn to_c64_map(&self) -> BTreeMap<Mask, Complex64> {
        self.terms.iter().map(|(m, c)| (*m, c.to_c64())).collect()
    }
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        // Grade is ignored when both sides are the zero form.
        self.universe == other.universe && self.terms == other.terms
    }
}

impl std::fmt::Debug for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let word: Vec<String> = indices_of_mask(*m).iter().map(|i| i.to_string()).collect();
                if *m == 0 {
                    format!("({c})")
                } else {
                    format!("({c})e{}", word.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Symmetric bilinear forms (metrics)
// ---------------------------------------------------------------------------

/// Symmetric bilinear form on the directions of a universe.
#[derive(Clone, PartialEq)]
pub struct SymBilinear {
    universe: Mask,
    local: Mat, // dim×dim over the sorted universe directions
}

impl SymBilinear {
    pub fn from_mat(universe: Mask, local: Mat) -> Self {
        let d = mask_dim(universe) as usize;
        assert_eq!((local.rows, local.cols), (d, d));
        assert!(local.is_symmetric(), "metric must be symmetric");
        SymBilinear { universe, local }
    }

    pub fn euclidean(universe: Mask) -> Self {
        SymBilinear::from_mat(universe, Mat::identity(mask_dim(universe) as usize))
    }

    /// Diagonal metric; `signs` in increasing direction order.
    pub fn from_diag(universe: Mask, signs: &[i64]) -> Self {
        let d = mask_dim(universe) as usize;
        assert_eq!(signs.len(), d);
        let mut m = Mat::zeros(d, d);
        for (i, &s) in signs.iter().enumerate() {
            m.set(i, i, Scalar::from_int(s));
        }
        SymBilinear::from_mat(universe, m)
    }

    pub fn universe(&self) -> Mask {
        self.universe
    }

    pub fn mat(&self) -> &Mat {
        &self.local
    }

    fn local_index(&self, global: usize) -> usize {
        debug_assert!(self.universe & (1 << global) != 0);
        (self.universe & low_mask(global)).count_ones() as usize
    }

    /// Local positions of the directions in a mask, ascending.
    fn local_positions(&self, m: Mask) -> Vec<usize> {
        indices_of_mask(m)
            .into_iter()
            .map(|i| self.local_index(i))
            .collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.local.at(self.local_index(i), self.local_index(j))
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Scalar) {
        let (li, lj) = (self.local_index(i), self.local_index(j));
        self.local.set(li, lj, v.clone());
        self.local.set(lj, li, v);
    }

    pub fn eval(&self, u: &VectorX, v: &VectorX) -> Scalar {
        assert_eq!(self.universe, u.universe());
        assert_eq!(self.universe, v.universe());
        let mut acc = Scalar::zero();
        for i in indices_of_mask(self.universe) {
            let ui = u.get(i);
            if ui.is_zero() {
                continue;
            }
            for j in indices_of_mask(self.universe) {
                let vj = v.get(j);
                if vj.is_zero() {
                    continue;
                }
                acc += &(&(&ui * self.entry(i, j)) * &vj);
            }
        }
        acc
    }

    pub fn det(&self) -> Scalar {
        self.local.det()
    }

    pub fn inverse_mat(&self) -> Option<Mat> {
        // Diagonal metrics (the common case for raising indices) invert
        // entrywise without the cost of a full elimination.
        let n = self.local.rows;
        let diagonal = (0..n).all(|r| (0..n).all(|c| r == c || self.local.at(r, c).is_zero()));
        if diagonal {
            let mut inv = Mat::zeros(n, n);
            for r in 0..n {
                inv.set(r, r, self.local.at(r, r).inv()?);
            }
            return Some(inv);
        }
        self.local.inverse()
    }

    pub fn inverse(&self) -> Option<SymBilinear> {
        Some(SymBilinear {
            universe: self.universe,
            local: self.local.inverse()?,
        })
    }

    pub fn is_real(&self) -> bool {
        (0..self.local.rows).all(|r| (0..self.local.cols).all(|c| self.local.at(r, c).is_real()))
    }

    /// (p, q, z) signature; requires real entries.
    pub fn signature(&self) -> (usize, usize, usize) {
        self.local.signature()
    }

    /// Restriction to a coordinate subspace.
    pub fn restrict(&self, sub: Mask) -> SymBilinear {
        assert_eq!(sub & self.universe, sub);
        let idx = indices_of_mask(sub);
        let m = Mat::from_fn(idx.len(), idx.len(), |r, c| {
            self.entry(idx[r], idx[c]).clone()
        });
        SymBilinear::from_mat(sub, m)
    }

    /// v ↦ v♭ = g(v, ·).
    pub fn lower(&self, v: &VectorX) -> Form {
        assert_eq!(self.universe, v.universe());
        let mut entries = Vec::new();
        for j in indices_of_mask(self.universe) {
            let mut acc = Scalar::zero();
            for i in indices_of_mask(self.universe) {
                let vi = v.get(i);
                if !vi.is_zero() {
                    acc += &(&vi * self.entry(i, j));
                }
            }
            entries.push((j, acc));
        }
        Form::one_form(self.universe, &entries)
    }

    /// α ↦ α♯, the metric-dual vector of a 1-form.
    pub fn raise1(&self, alpha: &Form) -> Option<VectorX> {
        assert_eq!(self.universe, alpha.universe());
        assert_eq!(alpha.grade(), 1);
        let ginv = self.inverse_mat()?;
        let mut v = VectorX::zero(self.universe);
        for i in indices_of_mask(self.universe) {
            let mut acc = Scalar::zero();
            for j in indices_of_mask(self.universe) {
                let aj = alpha.coeff(&[j]);
                if !aj.is_zero() {
                    acc += &(ginv.at(self.local_index(i), self.local_index(j)) * &aj);
                }
            }
            v.set(i, acc);
        }
        Some(v)
    }

    pub fn to_matf(&self) -> MatF {
        let d = mask_dim(self.universe) as usize;
        MatF::from_fn(d, d, |r, c| {
            let s = self.local.at(r, c);
            assert!(s.is_real());
            rat_f64(&s.a) + rat_f64(&s.b) * std::f64::consts::SQRT_2
        })
    }
}

impl std::fmt::Debug for SymBilinear {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymBilinear(universe={:#04x})\n{:?}", self.universe, self.local)
    }
}

// ---------------------------------------------------------------------------
// Endomorphisms of the underlying vector space
// ---------------------------------------------------------------------------

/// Linear map on the directions of a universe; entry (i, j) is the e_i
/// component of A e_j.
#[derive(Clone, PartialEq)]
pub struct Endomorphism {
    universe: Mask,
    local: Mat,
}

impl Endomorphism {
    pub fn zero(universe: Mask) -> Self {
        let d = mask_dim(universe) as usize;
        Endomorphism {
            universe,
            local: Mat::zeros(d, d),
        }
    }

    pub fn identity(universe: Mask) -> Self {
        let d = mask_dim(universe) as usize;
        Endomorphism {
            universe,
            local: Mat::identity(d),
        }
    }

    pub fn from_mat(universe: Mask, local: Mat) -> Self {
        let d = mask_dim(universe) as usize;
        assert_eq!((local.rows, local.cols), (d, d));
        Endomorphism { universe, local }
    }

    /// E_{ab}: e_b ↦ e_a, every other basis vector ↦ 0.
    pub fn elementary(universe: Mask, a: usize, b: usize) -> Self {
        let mut e = Endomorphism::zero(universe);
        e.set_entry(a, b, Scalar::one());
        e
    }

    pub fn universe(&self) -> Mask {
        self.universe
    }

    pub fn mat(&self) -> &Mat {
        &self.local
    }

    fn local_index(&self, global: usize) -> usize {
        debug_assert!(self.universe & (1 << global) != 0);
        (self.universe & low_mask(global)).count_ones() as usize
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.local.at(self.local_index(i), self.local_index(j))
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Scalar) {
        let (li, lj) = (self.local_index(i), self.local_index(j));
        self.local.set(li, lj, v);
    }

    pub fn apply(&self, v: &VectorX) -> VectorX {
        assert_eq!(self.universe, v.universe());
        let idx = indices_of_mask(self.universe);
        let local_in: Vec<Scalar> = idx.iter().map(|&j| v.get(j)).collect();
        let local_out = self.local.apply(&local_in);
        let mut out = VectorX::zero(self.universe);
        for (pos, &i) in idx.iter().enumerate() {
            out.set(i, local_out[pos].clone());
        }
        out
    }

    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        assert_eq!(self.universe, other.universe);
        Endomorphism {
            universe: self.universe,
            local: self.local.mul(&other.local),
        }
    }

    pub fn commutator(&self, other: &Endomorphism) -> Endomorphism {
        assert_eq!(self.universe, other.universe);
        Endomorphism {
            universe: self.universe,
            local: self.local.commutator(&other.local),
        }
    }

    pub fn add(&self, other: &Endomorphism) -> Endomorphism {
        assert_eq!(self.universe, other.universe);
        Endomorphism {
            universe: self.universe,
            local: self.local.add(&other.local),
        }
    }

    pub fn sub(&self, other: &Endomorphism) -> Endomorphism {
        assert_eq!(self.universe, other.universe);
        Endomorphism {
            universe: self.universe,
            local: self.local.sub(&other.local),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Endomorphism {
        Endomorphism {
            universe: self.universe,
            local: self.local.scale(s),
        }
    }

    pub fn is_real(&self) -> bool {
        (0..self.local.rows).all(|r| (0..self.local.cols).all(|c| self.local.at(r, c).is_real()))
    }
}

impl std::fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Endomorphism(universe={:#04x})\n{:?}", self.universe, self.local)
    }
}

/// Infinitesimal 𝔤𝔩 action on forms: (A·α)(ξ₁,…,ξ_k) = −Σ_s α(ξ₁,…,Aξ_s,…,ξ_k).
/// Equivalently A·e^u = −Σ_v A^u_v e^v extended as a derivation.
pub fn lie_act(a: &Endomorphism, w: &Form) -> Form {
    assert_eq!(a.universe(), w.universe());
    let universe = w.universe();
    let mut out = Form::zero(universe, w.grade());
    for (m, c) in w.terms() {
        for u in indices_of_mask(*m) {
            let rest = m & !(1u8 << u);
            let s_pos = (m & low_mask(u)).count_ones(); // slot of u in the word
            for v in indices_of_mask(universe) {
                if rest & (1u8 << v) != 0 {
                    continue; // repeated leg
                }
                let coef = a.entry(u, v);
                if coef.is_zero() {
                    continue;
                }
                let t_pos = (rest & low_mask(v)).count_ones(); // slot v takes
                let mut contrib = -(c * coef);
                if (s_pos + t_pos) % 2 == 1 {
                    contrib = -contrib;
                }
                out.add_term(rest | (1u8 << v), contrib);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// First-order jets
// ---------------------------------------------------------------------------

/// Pair (value, first derivative) for exact first-order expansions: the
/// arithmetic of ε with ε² = 0.
#[derive(Clone, Debug)]
pub struct FormJet {
    pub value: Form,
    pub deriv: Form,
}

impl FormJet {
    pub fn constant(f: Form) -> Self {
        let z = Form::zero(f.universe(), f.grade());
        FormJet { value: f, deriv: z }
    }

    pub fn new(value: Form, deriv: Form) -> Self {
        assert_eq!(value.universe(), deriv.universe());
        FormJet { value, deriv }
    }

    pub fn wedge(&self, other: &FormJet) -> FormJet {
        FormJet {
            value: self.value.wedge(&other.value),
            deriv: self
                .value
                .wedge(&other.deriv)
                .add(&self.deriv.wedge(&other.value)),
        }
    }

    pub fn add(&self, other: &FormJet) -> FormJet {
        FormJet {
            value: self.value.add(&other.value),
            deriv: self.deriv.add(&other.deriv),
        }
    }

    pub fn sub(&self, other: &FormJet) -> FormJet {
        FormJet {
            value: self.value.sub(&other.value),
            deriv: self.deriv.sub(&other.deriv),
        }
    }

    pub fn scale(&self, s: &Scalar) -> FormJet {
        FormJet {
            value: self.value.scale(s),
            deriv: self.deriv.scale(s),
        }
    }

    /// Multiply by the jet scalar s + ε·t.
    pub fn scale_jet(&self, s: &Scalar, t: &Scalar) -> FormJet {
        FormJet {
            value: self.value.scale(s),
            deriv: self.deriv.scale(s).add(&self.value.scale(t)),
        }
    }

    pub fn interior_index(&self, j: usize) -> FormJet {
        FormJet {
            value: self.value.interior_index(j),
            deriv: self.deriv.interior_index(j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn wedge_signs_and_interior() {
        let u = FULL8;
        let a = Form::basis_form(u, &[3, 1]); // −e^{13}
        assert_eq!(a.coeff(&[1, 3]), -Scalar::one());
        let b = Form::basis_form(u, &[0, 2]);
        let w = a.wedge(&b);
        // e^3∧e^1∧e^0∧e^2 = −e^{0123}·(sign of 3102→0123) : permutation
        // 3102 has 4 inversions ⟹ +e^{0123}; with a = −e^{13}: w = −(e^{13}∧e^{02})
        // e^{13}∧e^{02} = e^{1302} → inversions (1,0),(3,0),(3,2) = 3 ⟹ −e^{0123}.
        assert_eq!(w.coeff(&[0, 1, 2, 3]), Scalar::one());
        let i = w.interior_index(1);
        assert_eq!(i.coeff(&[0, 2, 3]), -Scalar::one());
    }

    #[test]
    fn eval_matches_coeff() {
        let u = FULL8;
        let f = Form::term(u, &[0, 5, 6], Scalar::from_rat(rat(2, 3)));
        let e0 = VectorX::basis(u, 0);
        let e5 = VectorX::basis(u, 5);
        let e6 = VectorX::basis(u, 6);
        assert_eq!(f.eval(&[&e0, &e5, &e6]), Scalar::from_rat(rat(2, 3)));
        assert_eq!(f.eval(&[&e5, &e0, &e6]), Scalar::from_rat(rat(-2, 3)));
    }

    #[test]
    fn hodge_euclidean_roundtrip() {
        let u = FULL8;
        let g = SymBilinear::euclidean(u);
        let f = Form::basis_form(u, &[0, 1, 2, 3]);
        let h = f.hodge(&g).unwrap();
        assert_eq!(h, Form::basis_form(u, &[4, 5, 6, 7]));
        // ** = +1 on 4-forms in euclidean 8-space
        assert_eq!(h.hodge(&g).unwrap(), f);
    }

    #[test]
    fn lie_act_identity_scales_by_minus_grade() {
        let u = FULL8;
        let f = Form::from_int_terms(u, &[(1, &[0, 1, 2, 3]), (-2, &[4, 5, 6, 7])]);
        let id = Endomorphism::identity(u);
        assert_eq!(lie_act(&id, &f), f.scale(&Scalar::from_int(-4)));
    }
}
