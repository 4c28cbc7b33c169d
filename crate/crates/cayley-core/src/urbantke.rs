//! 4-dimensional conformal metric reconstruction from triples of 2-forms,
//! and the reduction of an 8-dimensional Cayley form to such a triple.

use crate::exterior::{indices_of_mask, keys_of, mask_dim, merge_sign, Form, Mask, SymBilinear};
use crate::families::{calibration_value, CayleyForm, FamilyError};
use crate::linalg::{Mat, MatF};
use crate::scalar::Scalar;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UrbantkeError {
    #[error("a triple needs three 2-forms on one universe of four directions")]
    BadTriple,
    #[error("the wedge-Gram matrix of the triple is singular")]
    DegenerateGram,
    #[error("reality condition fails at pair ({0}, {1})")]
    RealityViolation(usize, usize),
    #[error("metric density is not real after the imaginary-unit factor")]
    NonrealDensity,
    #[error("metric density is singular")]
    DegenerateDensity,
    #[error("triple is not self-dual under its own metric (residual {0:e})")]
    NotSelfDual(f64),
    #[error("plane is not calibrated by the form (value {0})")]
    NotCalibrated(Scalar),
    #[error("σ basis is not self-dual on the calibrated plane")]
    SigmaNotSelfDual,
    #[error("reduced metric is not conformal to the induced one (residual {0:e})")]
    ConformalMismatch(f64),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMode {
    Real,
    Lorentzian,
}

/// A triple of 2-forms on four directions, the seed of a conformal 4-metric.
#[derive(Clone)]
pub struct FormTriple {
    pub b: [Form; 3],
    pub mode: TripleMode,
}

impl FormTriple {
    pub fn new(b: [Form; 3], mode: TripleMode) -> Result<Self, UrbantkeError> {
        let u = b[0].universe();
        if mask_dim(u) != 4 || b.iter().any(|f| f.universe() != u || f.grade() != 2) {
            return Err(UrbantkeError::BadTriple);
        }
        Ok(FormTriple { b, mode })
    }

    pub fn universe(&self) -> Mask {
        self.b[0].universe()
    }

    /// 3×3 matrix of wedge products against the sorted reference volume.
    pub fn wedge_gram(&self) -> Mat {
        let top = self.universe();
        Mat::from_fn(3, 3, |i, j| self.b[i].wedge(&self.b[j]).coeff_mask(top))
    }
}

pub struct RealityReport {
    pub ok: bool,
    /// First pair (i, j) with B^i ∧ conj(B^j) ≠ 0.
    pub witness: Option<(usize, usize)>,
}

/// The nine exact wedge products B^i ∧ B̄^j; all must vanish for the
/// triple to define a real Lorentzian metric.
pub fn reality_check(t: &FormTriple) -> RealityReport {
    for i in 0..3 {
        for j in 0..3 {
            if !t.b[i].wedge(&t.b[j].conj()).is_zero() {
                return RealityReport {
                    ok: false,
                    witness: Some((i, j)),
                };
            }
        }
    }
    RealityReport {
        ok: true,
        witness: None,
    }
}

pub struct UrbantkeMetric {
    /// Ascending directions of the universe; rows/columns of the matrices.
    pub dirs: Vec<usize>,
    /// Exact real density g̃ against the sorted reference volume.
    pub density: Mat,
    /// Numeric metric g = g̃ / |det g̃|^{1/6}, so that det g̃ = (det g)³.
    pub g: MatF,
    /// (positive, negative) inertia of the density, by exact congruence.
    pub signature: (usize, usize),
    /// Common self-duality eigenvalue of the triple under g: ±1 or ±i.
    pub sd_factor: Complex64,
    pub sd_residual: f64,
}

/// The 4-metric of a nondegenerate triple:
/// g̃(ξ,η)·v = (1/6)·ε^{ijk}·(ξ⌟B^i)∧(η⌟B^j)∧B^k with ε¹²³ = +1, read
/// against the sorted coordinate volume v. Lorentzian mode multiplies the
/// density by the imaginary unit and requires exact realness. The triple is
/// checked to be self-dual for the resulting metric and orientation.
pub fn urbantke_metric(t: &FormTriple) -> Result<UrbantkeMetric, UrbantkeError> {
    let universe = t.universe();
    let dirs = indices_of_mask(universe);
    if t.wedge_gram().det().is_zero() {
        return Err(UrbantkeError::DegenerateGram);
    }
    if t.mode == TripleMode::Lorentzian {
        let rep = reality_check(t);
        if let Some((i, j)) = rep.witness {
            return Err(UrbantkeError::RealityViolation(i, j));
        }
    }
    const EPS3: [(usize, usize, usize, i64); 6] = [
        (0, 1, 2, 1),
        (1, 2, 0, 1),
        (2, 0, 1, 1),
        (0, 2, 1, -1),
        (2, 1, 0, -1),
        (1, 0, 2, -1),
    ];
    let sixth = Scalar::from_ratio(1, 6);
    let mut density = Mat::from_fn(4, 4, |a, b| {
        let mut acc = Scalar::zero();
        for &(i, j, k, s) in &EPS3 {
            let w = t.b[i]
                .interior_index(dirs[a])
                .wedge(&t.b[j].interior_index(dirs[b]))
                .wedge(&t.b[k]);
            acc += &(&w.coeff_mask(universe) * &Scalar::from_int(s));
        }
        &acc * &sixth
    });
    if t.mode == TripleMode::Lorentzian {
        density = density.map(|s| s.times_i());
    }
    if !(0..4).all(|r| (0..4).all(|c| density.at(r, c).is_real())) {
        return Err(UrbantkeError::NonrealDensity);
    }
    let det = density.det();
    if det.is_zero() {
        return Err(UrbantkeError::DegenerateDensity);
    }
    let (pos, neg, _) = density.signature();
    let det_abs = det.to_f64_real().abs();
    let gf = MatF::from_fn(4, 4, |r, c| {
        density.at(r, c).to_f64_real() / det_abs.powf(1.0 / 6.0)
    });
    let (sd_factor, sd_residual) = self_duality(&t.b, &gf, universe)?;
    Ok(UrbantkeMetric {
        dirs,
        density,
        g: gf,
        signature: (pos, neg),
        sd_factor,
        sd_residual,
    })
}

/// Numeric complex Hodge star of 2-forms on a 4-direction universe, returning
/// the common eigenvalue (snapped to {±1, ±i}) and the worst residual.
fn self_duality(
    b: &[Form; 3],
    g: &MatF,
    universe: Mask,
) -> Result<(Complex64, f64), UrbantkeError> {
    let dirs = indices_of_mask(universe);
    let local: BTreeMap<usize, usize> = dirs.iter().enumerate().map(|(l, &d)| (d, l)).collect();
    let ginv = g.inverse().ok_or(UrbantkeError::DegenerateDensity)?;
    let sqrt_det = g.det().abs().sqrt();
    let keys = keys_of(universe, 2);
    let star = |f: &BTreeMap<Mask, Complex64>| -> BTreeMap<Mask, Complex64> {
        let mut out = BTreeMap::new();
        for &kc in &keys {
            let k = universe & !kc; // complement inside the universe
            let kp = indices_of_mask(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for (&jm, &cj) in f {
                let jp = indices_of_mask(jm);
                let det2 = ginv.at(local[&kp[0]], local[&jp[0]])
                    * ginv.at(local[&kp[1]], local[&jp[1]])
                    - ginv.at(local[&kp[0]], local[&jp[1]])
                        * ginv.at(local[&kp[1]], local[&jp[0]]);
                acc += cj * det2;
            }
            let v = acc * sqrt_det * merge_sign(k, kc) as f64;
            if v.norm() > 0.0 {
                out.insert(kc, v);
            }
        }
        out
    };
    // Eigenvalue from the largest coefficient of the first nonzero form.
    let maps: Vec<BTreeMap<Mask, Complex64>> = b.iter().map(|f| f.to_c64_map()).collect();
    let stars: Vec<BTreeMap<Mask, Complex64>> = maps.iter().map(&star).collect();
    let mut scale = 0.0f64;
    let mut lambda = Complex64::new(0.0, 0.0);
    for (m, s) in maps.iter().zip(&stars) {
        for (key, c) in m {
            if c.norm() > scale {
                scale = c.norm();
                lambda = s.get(key).copied().unwrap_or_default() / c;
            }
        }
    }
    if scale == 0.0 {
        return Err(UrbantkeError::DegenerateGram);
    }
    let snapped = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ]
    .into_iter()
    .min_by(|x, y| (x - lambda).norm().total_cmp(&(y - lambda).norm()))
    .unwrap();
    let mut residual = 0.0f64;
    for (m, s) in maps.iter().zip(&stars) {
        for &key in &keys {
            let have = s.get(&key).copied().unwrap_or_default();
            let want = snapped * m.get(&key).copied().unwrap_or_default();
            residual = residual.max((have - want).norm() / scale);
        }
    }
    if residual > 1e-9 {
        return Err(UrbantkeError::NotSelfDual(residual));
    }
    Ok((snapped, residual))
}

/// Raise both legs of a 2-form with g, yielding bivector components.
pub fn raise_two_form(g: &SymBilinear, f: &Form) -> Form {
    two_leg_transport(g.inverse_mat().expect("invertible metric"), g, f)
}

/// Lower both legs of a bivector (stored with 2-form keys) with g.
pub fn lower_two_form(g: &SymBilinear, f: &Form) -> Form {
    two_leg_transport(g.mat().clone(), g, f)
}

fn two_leg_transport(m: Mat, g: &SymBilinear, f: &Form) -> Form {
    assert_eq!(f.grade(), 2);
    assert_eq!(f.universe(), g.universe());
    let dirs = indices_of_mask(g.universe());
    let local: BTreeMap<usize, usize> = dirs.iter().enumerate().map(|(l, &d)| (d, l)).collect();
    let mut out = Form::zero(f.universe(), 2);
    for (key, c) in f.terms() {
        let idx = indices_of_mask(*key);
        for &a in &dirs {
            for &b in &dirs {
                if a >= b {
                    continue;
                }
                let w = &(m.at(local[&a], local[&idx[0]]) * m.at(local[&b], local[&idx[1]]))
                    - &(m.at(local[&a], local[&idx[1]]) * m.at(local[&b], local[&idx[0]]));
                if !w.is_zero() {
                    out = out.add(&Form::term(f.universe(), &[a, b], &w * c));
                }
            }
        }
    }
    out
}

/// (Σ c_ab e_a∧e_b) ⌟ ω = Σ c_ab · ι_b ι_a ω over the stored a < b keys.
pub fn contract_bivector(omega: &Form, bivector: &Form) -> Form {
    assert_eq!(bivector.grade(), 2);
    let mut acc = Form::zero(omega.universe(), omega.grade().saturating_sub(2));
    for (key, c) in bivector.terms() {
        let idx = indices_of_mask(*key);
        acc = acc.add(
            &omega
                .interior_index(idx[0])
                .interior_index(idx[1])
                .scale(c),
        );
    }
    acc
}

pub struct Reduction {
    pub triple: FormTriple,
    pub metric: UrbantkeMetric,
    /// Trace-normalized distance between the triple's metric and the one the
    /// Cayley metric induces on the complementary plane.
    pub conformal_residual: f64,
}

/// B^i := (σ^i ⌟ Φ)|_{H^⊥}: contract the Cayley form with a self-dual
/// bivector basis of a calibrated coordinate 4-plane H and keep only the legs
/// in the complement. The triple's 4-metric must be conformal to the one
/// induced on H^⊥.
pub fn reduce_from_cayley(
    cf: &CayleyForm,
    h: Mask,
    sigma: &[Form; 3],
) -> Result<Reduction, UrbantkeError> {
    let universe = cf.form.universe();
    assert_eq!(mask_dim(h), 4);
    assert_eq!(h & universe, h);
    // H must be calibrated: unit value on its oriented orthonormal basis.
    let h_dirs = indices_of_mask(h);
    let plane: [crate::exterior::VectorX; 4] = [
        crate::exterior::VectorX::basis(universe, h_dirs[0]),
        crate::exterior::VectorX::basis(universe, h_dirs[1]),
        crate::exterior::VectorX::basis(universe, h_dirs[2]),
        crate::exterior::VectorX::basis(universe, h_dirs[3]),
    ];
    let value = calibration_value(&cf.form, &plane, &cf.metric)?;
    if &value * &value.conj() != Scalar::one() {
        return Err(UrbantkeError::NotCalibrated(value));
    }
    // σ must be self-dual on H for the induced metric, with a common factor.
    let g_h = cf.metric.restrict(h);
    let mut sd: Option<Scalar> = None;
    for s in sigma {
        assert_eq!(s.universe(), h);
        let two_form = lower_two_form(&g_h, s);
        let dual = two_form.hodge(&g_h).map_err(FamilyError::from)?;
        let factor = match sd.clone() {
            Some(f) => f,
            None => {
                let (key, c) = two_form.terms().next().ok_or(UrbantkeError::SigmaNotSelfDual)?;
                let f = &dual.coeff_mask(*key) * &c.inv().ok_or(UrbantkeError::SigmaNotSelfDual)?;
                sd = Some(f.clone());
                f
            }
        };
        if dual != two_form.scale(&factor)
            || (&factor * &factor.conj()) != Scalar::one()
        {
            return Err(UrbantkeError::SigmaNotSelfDual);
        }
    }
    let comp = universe & !h;
    let b = |s: &Form| contract_bivector(&cf.form, &s.embed(universe)).restrict(comp);
    let triple_forms = [b(&sigma[0]), b(&sigma[1]), b(&sigma[2])];
    let mode = if triple_forms.iter().all(|f| f.is_real()) {
        TripleMode::Real
    } else {
        TripleMode::Lorentzian
    };
    let triple = FormTriple::new(triple_forms, mode)?;
    let metric = urbantke_metric(&triple)?;
    let induced = cf.metric.restrict(comp).to_matf();
    let conformal_residual = conformal_compare(&metric.g, &induced);
    if conformal_residual > 1e-9 {
        return Err(UrbantkeError::ConformalMismatch(conformal_residual));
    }
    Ok(Reduction {
        triple,
        metric,
        conformal_residual,
    })
}

/// Largest entry difference after aligning overall sign (first nonzero
/// diagonal positive) and trace-normalizing: compares 4·a/tr(a·b⁻¹) to b.
pub fn conformal_compare(a: &MatF, b: &MatF) -> f64 {
    let fix = |m: &MatF| -> MatF {
        for i in 0..m.rows {
            let d = m.at(i, i);
            if d != 0.0 {
                return if d < 0.0 { m.scale(-1.0) } else { m.clone() };
            }
        }
        m.clone()
    };
    let a = fix(a);
    let b = fix(b);
    let Some(bi) = b.inverse() else {
        return f64::INFINITY;
    };
    let mut tr = 0.0;
    for i in 0..a.rows {
        for k in 0..a.cols {
            tr += a.at(i, k) * bi.at(k, i);
        }
    }
    if tr == 0.0 {
        return f64::INFINITY;
    }
    let n = a.rows as f64;
    a.scale(n / tr).max_abs_diff(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{calibration_two_forms, CalibrationBlock};
    use crate::exterior::FULL8;

    #[test]
    fn euclidean_triple_reconstructs_flat_metric() {
        let sp = calibration_two_forms(CalibrationBlock::B0567);
        let u: Mask = 0b1110_0001;
        let b = [
            sp[0].restrict(u),
            sp[1].restrict(u),
            sp[2].restrict(u),
        ];
        let t = FormTriple::new(b, TripleMode::Real).unwrap();
        let m = urbantke_metric(&t).unwrap();
        assert_eq!(m.signature, (4, 0));
        assert!(m.sd_residual < 1e-12);
        // e⁰⁵−e⁶⁷ is anti-self-dual for δ with the ascending orientation
        assert_eq!(m.sd_factor, Complex64::new(-1.0, 0.0));
        let id = MatF::identity(4);
        assert!(conformal_compare(&m.g, &id) < 1e-12);
    }

    #[test]
    fn real_triple_fails_reality_conditions() {
        let s = calibration_two_forms(CalibrationBlock::B1234);
        let u: Mask = 0b0001_1110;
        let b = [s[0].restrict(u), s[1].restrict(u), s[2].restrict(u)];
        let t = FormTriple::new(b, TripleMode::Real).unwrap();
        let rep = reality_check(&t);
        assert!(!rep.ok);
        assert_eq!(rep.witness, Some((0, 0)));
    }

    #[test]
    fn bivector_contraction_signs() {
        // (e₀∧e₁)⌟(e⁰∧e¹∧e²) = e², via ι₁ι₀.
        let f = Form::basis_form(FULL8, &[0, 1, 2]);
        let biv = Form::basis_form(FULL8, &[0, 1]);
        assert_eq!(contract_bivector(&f, &biv), Form::basis_form(FULL8, &[2]));
    }
}
