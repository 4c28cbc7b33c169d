//! The two real octonion algebras and their vector-product calculus.
//!
//! Both algebras live on ℝ⁸ with unit direction e₀ and imaginary directions
//! e₁…e₇. The division algebra pairs the positive-definite metric with the
//! associative 3-form φ; the split algebra pairs the signature-(4,4) metric
//! (negative on directions 1…4) with φ̃, which flips every φ term except
//! e⁵∧e⁶∧e⁷. Cross products, triple cross products, the metric-from-3-form
//! density construction, and the normed-algebra reconstruction from a 4-form
//! all happen here.

use crate::exterior::{
    indices_of_mask, Form, Mask, SymBilinear, VectorX, FULL8, IMAG7,
};
use crate::scalar::{rat_nth_root, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OctonionError {
    #[error("expected an imaginary element (zero component on the unit direction)")]
    NotImaginary,
    #[error("the 3-form induces a degenerate metric density")]
    DegenerateDensity,
    #[error("the 3-form induces a metric density with complex entries")]
    ComplexDensity,
    #[error("expected a ± coordinate basis vector")]
    NotCoordinateDirection,
    #[error("expected a unit vector: g(e,e) = 1")]
    NotUnit,
    #[error("the metric couples the chosen direction to its complement")]
    CoupledDirection,
    #[error("the 4-form does not split along this direction with ε = ±1")]
    NotSplittable,
    #[error(transparent)]
    Exterior(#[from] crate::exterior::ExteriorError),
}

/// Which of the two octonion algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OctKind {
    Division,
    Split,
}

/// The associative 3-form on the imaginary directions: φ for the division
/// algebra; φ̃ (all mixed terms flipped) for the split algebra.
pub fn imaginary_three_form(kind: OctKind) -> Form {
    let s = match kind {
        OctKind::Division => 1,
        OctKind::Split => -1,
    };
    Form::from_int_terms(
        IMAG7,
        &[
            (1, &[5, 6, 7]),
            (s, &[5, 4, 1]),
            (-s, &[5, 2, 3]),
            (s, &[6, 4, 2]),
            (-s, &[6, 3, 1]),
            (s, &[7, 4, 3]),
            (-s, &[7, 1, 2]),
        ],
    )
}

/// Metric on the imaginary directions: δ₇, or (−,−,−,−,+,+,+) on 1…7.
pub fn imaginary_metric(kind: OctKind) -> SymBilinear {
    match kind {
        OctKind::Division => SymBilinear::euclidean(IMAG7),
        OctKind::Split => SymBilinear::from_diag(IMAG7, &[-1, -1, -1, -1, 1, 1, 1]),
    }
}

/// Metric on all eight directions: δ₈, or (+,−,−,−,−,+,+,+).
pub fn octonion_metric(kind: OctKind) -> SymBilinear {
    match kind {
        OctKind::Division => SymBilinear::euclidean(FULL8),
        OctKind::Split => SymBilinear::from_diag(FULL8, &[1, -1, -1, -1, -1, 1, 1, 1]),
    }
}

/// An element q₀ + Σ qₐeₐ of one of the two algebras.
#[derive(Clone, PartialEq)]
pub struct Octonion {
    pub kind: OctKind,
    comps: Vec<Scalar>, // length 8, component 0 is the real part
}

impl Octonion {
    pub fn new(kind: OctKind, comps: Vec<Scalar>) -> Self {
        assert_eq!(comps.len(), 8);
        Octonion { kind, comps }
    }

    pub fn zero(kind: OctKind) -> Self {
        Octonion::new(kind, vec![Scalar::zero(); 8])
    }

    pub fn unit(kind: OctKind) -> Self {
        Octonion::basis(kind, 0)
    }

    pub fn basis(kind: OctKind, j: usize) -> Self {
        let mut o = Octonion::zero(kind);
        o.comps[j] = Scalar::one();
        o
    }

    pub fn comp(&self, j: usize) -> &Scalar {
        &self.comps[j]
    }

    pub fn components(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn real_part(&self) -> &Scalar {
        &self.comps[0]
    }

    /// Imaginary part as a vector on the directions 1…7.
    pub fn imag(&self) -> VectorX {
        let mut v = VectorX::zero(IMAG7);
        for j in 1..8 {
            v.set(j, self.comps[j].clone());
        }
        v
    }

    pub fn from_parts(kind: OctKind, real: Scalar, imag: &VectorX) -> Self {
        assert_eq!(imag.universe(), IMAG7);
        let mut o = Octonion::zero(kind);
        o.comps[0] = real;
        for j in 1..8 {
            o.comps[j] = imag.get(j);
        }
        o
    }

    pub fn conj(&self) -> Octonion {
        let mut o = self.clone();
        for j in 1..8 {
            o.comps[j] = -o.comps[j].clone();
        }
        o
    }

    pub fn add(&self, other: &Octonion) -> Octonion {
        assert_eq!(self.kind, other.kind);
        Octonion::new(
            self.kind,
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> Octonion {
        Octonion::new(self.kind, self.comps.iter().map(|c| c * s).collect())
    }

    /// Embed as a vector on all eight directions.
    pub fn as_vector(&self) -> VectorX {
        let mut v = VectorX::zero(FULL8);
        for j in 0..8 {
            v.set(j, self.comps[j].clone());
        }
        v
    }
}

impl std::fmt::Debug for Octonion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.as_vector())
    }
}

/// The octonion norm pairing: Σqᵢ² in the division algebra, the
/// (+,−,−,−,−,+,+,+) quadratic form in the split algebra (polarized).
pub fn oct_pairing(x: &Octonion, y: &Octonion) -> Scalar {
    assert_eq!(x.kind, y.kind);
    let g = octonion_metric(x.kind);
    g.eval(&x.as_vector(), &y.as_vector())
}

/// Cross product of imaginary elements: (u×v)ᵃ = gᵃᵇ φ(u, v, e_b).
pub fn cross(kind: OctKind, u: &VectorX, v: &VectorX) -> VectorX {
    assert_eq!(u.universe(), IMAG7);
    assert_eq!(v.universe(), IMAG7);
    let phi = imaginary_three_form(kind);
    let g = imaginary_metric(kind);
    // Interior products fill slots left to right: ι_v ι_u φ = φ(u, v, ·).
    let one_form = phi.interior(u).interior(v);
    debug_assert_eq!(one_form.grade(), 1);
    g.raise1(&one_form).expect("imaginary metric invertible")
}

/// Triple cross product against a 4-form: Tᵃ = gᵃᵇ Φ(e_b, u, v, w).
pub fn triple_cross(
    phi4: &Form,
    g: &SymBilinear,
    u: &VectorX,
    v: &VectorX,
    w: &VectorX,
) -> VectorX {
    let universe = phi4.universe();
    let contracted = phi4.interior(u).interior(v).interior(w); // Φ(u,v,w,·)
    // Φ is alternating: Φ(e_b,u,v,w) = −Φ(u,v,w,e_b)·(−1)³ = Φ(u,v,w,e_b)·(−1)³…
    // moving e_b from slot 4 to slot 1 crosses three slots: sign (−1)³.
    let mut entries = Vec::new();
    for b in indices_of_mask(universe) {
        let c = contracted.coeff(&[b]);
        entries.push((b, -c));
    }
    let one_form = Form::one_form(universe, &entries);
    g.raise1(&one_form).expect("metric invertible")
}

/// Full product in the algebra: x y = x₀y₀ − (x⃗,y⃗) + x₀y⃗ + y₀x⃗ + x⃗×y⃗.
pub fn oct_mul(x: &Octonion, y: &Octonion) -> Octonion {
    assert_eq!(x.kind, y.kind);
    let kind = x.kind;
    let g7 = imaginary_metric(kind);
    let (xi, yi) = (x.imag(), y.imag());
    let real = &(x.real_part() * y.real_part()) - &g7.eval(&xi, &yi);
    let mut imag = xi.scale(y.real_part());
    imag = imag.add(&yi.scale(x.real_part()));
    imag = imag.add(&cross(kind, &xi, &yi));
    Octonion::from_parts(kind, real, &imag)
}

/// Outcome of the metric-density construction from a 3-form.
pub enum MetricFrom3Form {
    /// |det g̃|^{1/9} lies in ℚ: the normalized metric, the orientation
    /// 7-form it was computed against, and the (p, q) signature.
    Normalized {
        g: SymBilinear,
        orientation: Form,
        signature: (usize, usize),
    },
    /// Irrational normalizer: the raw density pair (g̃, det g̃).
    Density { g_tilde: SymBilinear, det: Scalar },
}

/// Metric density from a 3-form on the imaginary directions:
/// g̃ᵢⱼ vol = (1/6)(eᵢ⌟φ)∧(eⱼ⌟φ)∧φ, then g = g̃ / |det g̃|^{1/9} when the
/// ninth root is rational. Degenerate densities are an error; a density with
/// negative determinant is negated together with the orientation.
pub fn metric_from_3form(phi: &Form) -> Result<MetricFrom3Form, OctonionError> {
    assert_eq!(phi.universe(), IMAG7);
    assert_eq!(phi.grade(), 3);
    let sixth = Scalar::from_ratio(1, 6);
    let mut gt = SymBilinear::from_diag(IMAG7, &[0; 7]);
    for i in 1..8 {
        for j in i..8 {
            let w = phi
                .interior_index(i)
                .wedge(&phi.interior_index(j))
                .wedge(phi)
                .scale(&sixth);
            gt.set_entry(i, j, w.coeff_mask(IMAG7));
        }
    }
    if !gt.is_real() {
        return Err(OctonionError::ComplexDensity);
    }
    let mut det = gt.det();
    if det.is_zero() {
        return Err(OctonionError::DegenerateDensity);
    }
    let mut orientation = Form::volume(IMAG7);
    if det.sign_real() < 0 {
        // Flip the orientation; the density is odd under that, and in
        // dimension 7 so is its determinant.
        gt = SymBilinear::from_mat(IMAG7, gt.mat().scale(&-Scalar::one()));
        det = -det;
        orientation = orientation.neg();
    }
    // g = g̃ / (det g̃)^{1/9}; only rational ninth roots are searched.
    if det.is_rational() {
        if let Some(root) = rat_nth_root(det.rational_part(), 9) {
            let inv = Scalar::from_rat(root).inv().unwrap();
            let g = SymBilinear::from_mat(IMAG7, gt.mat().scale(&inv));
            let (p, q, z) = g.signature();
            debug_assert_eq!(z, 0);
            return Ok(MetricFrom3Form::Normalized {
                g,
                orientation,
                signature: (p, q),
            });
        }
    }
    Ok(MetricFrom3Form::Density { g_tilde: gt, det })
}

/// Bilinear product table reconstructed from a 4-form, a unit vector, and a
/// metric: u·v = u×e×v + (u,e)v + (v,e)u − (u,v)e.
pub struct DerivedAlgebra {
    universe: Mask,
    table: Vec<VectorX>, // 8×8, row-major over global direction pairs
}

impl DerivedAlgebra {
    pub fn universe(&self) -> Mask {
        self.universe
    }

    pub fn product_of_basis(&self, a: usize, b: usize) -> &VectorX {
        &self.table[a * 8 + b]
    }

    pub fn mul(&self, x: &VectorX, y: &VectorX) -> VectorX {
        assert_eq!(x.universe(), self.universe);
        assert_eq!(y.universe(), self.universe);
        let mut acc = VectorX::zero(self.universe);
        for a in indices_of_mask(self.universe) {
            let xa = x.get(a);
            if xa.is_zero() {
                continue;
            }
            for b in indices_of_mask(self.universe) {
                let yb = y.get(b);
                if yb.is_zero() {
                    continue;
                }
                acc = acc.add(&self.product_of_basis(a, b).scale(&(&xa * &yb)));
            }
        }
        acc
    }
}

pub fn algebra_from_cayley(phi4: &Form, e: &VectorX, g: &SymBilinear) -> DerivedAlgebra {
    let universe = phi4.universe();
    assert_eq!(e.universe(), universe);
    assert_eq!(g.universe(), universe);
    let mut table = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            if universe & (1 << a) == 0 || universe & (1 << b) == 0 {
                table.push(VectorX::zero(universe));
                continue;
            }
            let (ea, eb) = (VectorX::basis(universe, a), VectorX::basis(universe, b));
            let mut p = triple_cross(phi4, g, &ea, e, &eb);
            p = p.add(&eb.scale(&g.eval(&ea, e)));
            p = p.add(&ea.scale(&g.eval(&eb, e)));
            p = p.sub(&e.scale(&g.eval(&ea, &eb)));
            table.push(p);
        }
    }
    DerivedAlgebra { universe, table }
}

/// A 4-form split along a unit coordinate direction:
/// Φ = e♭∧φ_e + ε·ψ_e with ψ_e the 7-dimensional Hodge dual of φ_e taken
/// with the induced metric and orientation.
pub struct CayleySplit {
    /// φ_e = e⌟Φ restricted to the complement.
    pub three_form: Form,
    /// ψ_e, equal to the induced Hodge dual of φ_e.
    pub four_form: Form,
    pub epsilon: i32,
    /// The coordinate direction of e.
    pub direction: usize,
}

pub fn split_by_unit_vector(
    phi4: &Form,
    e: &VectorX,
    g: &SymBilinear,
) -> Result<CayleySplit, OctonionError> {
    let universe = phi4.universe();
    assert_eq!(e.universe(), universe);
    assert_eq!(g.universe(), universe);
    // e must be ± a coordinate basis vector…
    let nonzero: Vec<usize> = indices_of_mask(universe)
        .into_iter()
        .filter(|&j| !e.get(j).is_zero())
        .collect();
    let [j] = nonzero[..] else {
        return Err(OctonionError::NotCoordinateDirection);
    };
    let c = e.get(j);
    if &c * &c != Scalar::one() {
        return Err(OctonionError::NotCoordinateDirection);
    }
    // …of unit length, with the metric not coupling it to the complement.
    if g.eval(e, e) != Scalar::one() {
        return Err(OctonionError::NotUnit);
    }
    for k in indices_of_mask(universe) {
        if k != j && !g.entry(j, k).is_zero() {
            return Err(OctonionError::CoupledDirection);
        }
    }
    let phi_e = phi4.interior(e);
    let flat = g.lower(e);
    let rest = phi4.sub(&flat.wedge(&phi_e));
    if rest.has_leg(j) {
        return Err(OctonionError::NotSplittable);
    }
    let sub = universe & !(1u8 << j);
    let phi7 = phi_e.restrict(sub);
    let rest7 = rest.restrict(sub);
    let g7 = g.restrict(sub);
    // Induced orientation: e⌟(e^{sorted universe}) on the complement.
    let pos = indices_of_mask(universe).iter().filter(|&&k| k < j).count();
    let mut orient = if pos % 2 == 0 { 1 } else { -1 };
    if c.sign_real() < 0 {
        orient = -orient;
    }
    let dual = phi7.hodge_oriented(&g7, orient)?;
    let epsilon = if rest7 == dual {
        1
    } else if rest7 == dual.neg() {
        -1
    } else {
        return Err(OctonionError::NotSplittable);
    };
    Ok(CayleySplit {
        three_form: phi7,
        four_form: dual,
        epsilon,
        direction: j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_products() {
        // e⁵e⁶ = e⁷ in the division algebra
        let p = oct_mul(
            &Octonion::basis(OctKind::Division, 5),
            &Octonion::basis(OctKind::Division, 6),
        );
        assert_eq!(p, Octonion::basis(OctKind::Division, 7));
        // ẽ⁵ẽ² = −ẽ³ and (ẽ¹)² = +1 in the split algebra
        let q = oct_mul(
            &Octonion::basis(OctKind::Split, 5),
            &Octonion::basis(OctKind::Split, 2),
        );
        assert_eq!(q, Octonion::basis(OctKind::Split, 3).scale(&-Scalar::one()));
        let r = oct_mul(
            &Octonion::basis(OctKind::Split, 1),
            &Octonion::basis(OctKind::Split, 1),
        );
        assert_eq!(r, Octonion::unit(OctKind::Split));
    }

    #[test]
    fn division_metric_reconstruction() {
        let phi = imaginary_three_form(OctKind::Division);
        match metric_from_3form(&phi).unwrap() {
            MetricFrom3Form::Normalized { g, signature, .. } => {
                assert_eq!(g, SymBilinear::euclidean(IMAG7));
                assert_eq!(signature, (7, 0));
            }
            _ => panic!("expected a normalized metric"),
        }
    }
}
