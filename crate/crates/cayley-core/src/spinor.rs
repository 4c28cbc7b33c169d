//! Pure-spinor geometry: annihilator subspaces, purity and reality tests,
//! and the (para-)complex structures a normalized pure spinor induces on the
//! eight vector directions.

use crate::clifford::{GammaSet, Spinor};
use crate::exterior::{indices_of_mask, Endomorphism, Form, FULL8};
use crate::linalg::{LinearSpace, Mat};
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinorGeometryError {
    #[error("spinor is not pure: annihilator dimension {0} ≠ 4")]
    NotPure(usize),
    #[error("pairing normalization must be 1/2, got {0}")]
    BadNormalization(String),
    #[error("expected real index 0, got {0}")]
    RealIndexNonzero(usize),
    #[error("expected a real spinor")]
    NotReal,
    #[error("annihilators do not span the eight directions")]
    NotTransverse,
}

/// {v ∈ ℂ⁸ : γ(v)ψ = 0}, the null subspace of a spinor.
pub fn annihilator(gs: &GammaSet, psi: &Spinor) -> LinearSpace {
    assert!(!psi.is_zero(), "annihilator requires a nonzero spinor");
    let mut m = Mat::zeros(16, 8);
    for a in 0..8 {
        let col = gs.apply(a, psi);
        for i in 0..16 {
            m.set(i, a, col.comp(i).clone());
        }
    }
    LinearSpace::from_vectors(8, &m.kernel())
}

/// A spinor is pure when its annihilator has the maximal dimension 4.
pub fn is_pure(gs: &GammaSet, psi: &Spinor) -> bool {
    annihilator(gs, psi).dim() == 4
}

/// dim(M ∩ M̄) for the annihilator M — 0, 2, or 4.
pub fn real_index(gs: &GammaSet, psi: &Spinor) -> usize {
    let m = annihilator(gs, psi);
    assert_eq!(m.dim(), 4, "real index requires a pure spinor");
    m.intersection_dim(&m.conj())
}

/// Intersection type of two pure spinors: the dimension of the intersection
/// of their annihilators, read off from the lowest nonvanishing bilinear —
/// B₀ ≠ 0 ⟹ 0, else B₂ ≠ 0 ⟹ 2, else 4. Returns the witness form.
pub fn intersection_type(gs: &GammaSet, psi: &Spinor, phi: &Spinor) -> (usize, Form) {
    let b0 = gs.bilinear(psi, phi, 0);
    if !b0.is_zero() {
        return (0, b0);
    }
    let b2 = gs.bilinear(psi, phi, 2);
    if !b2.is_zero() {
        // The witness must factor as v∧w with v, w the common null
        // directions; rank one in Λ² is exactly the Plücker condition.
        assert!(
            b2.wedge(&b2).is_zero(),
            "grade-2 witness of a pure pair must be decomposable"
        );
        return (2, b2);
    }
    (4, gs.bilinear(psi, phi, 4))
}

/// Data induced by a normalized pure spinor with real index 0: the complex
/// structure J (+i on the annihilator of ψ, −i on its conjugate), the
/// hermitian 2-form ω = −2i⟨ψ̂, ΓΓψ⟩, and the decomposable 4-form
/// Ω = 2⟨ψ, ΓΓΓΓψ⟩.
pub struct ComplexPairData {
    pub j: Endomorphism,
    pub omega: Form,
    pub omega_big: Form,
    pub plus_space: LinearSpace,
}

/// Data induced by a transverse pair of real pure spinors: the para-complex
/// structure K (−1 on the annihilator of ψ₊, +1 on that of ψ₋, so that
/// ω_r(ξ,η) = g(Kξ,η)), the 2-form ω_r = 2⟨ψ₊, ΓΓψ₋⟩, and the two real
/// decomposable 4-forms Ω± = 2⟨ψ±, ΓΓΓΓψ±⟩.
pub struct RealPairData {
    pub k: Endomorphism,
    pub omega_r: Form,
    pub omega_plus: Form,
    pub omega_minus: Form,
    /// Annihilator of ψ₊ — the −1 eigenspace of K.
    pub plus_space: LinearSpace,
    /// Annihilator of ψ₋ — the +1 eigenspace of K.
    pub minus_space: LinearSpace,
}

/// Endomorphism with prescribed eigenvalues on two complementary subspaces.
fn eigen_split(
    plus: &LinearSpace,
    minus: &LinearSpace,
    val_plus: &Scalar,
    val_minus: &Scalar,
) -> Result<Endomorphism, SpinorGeometryError> {
    let mut rows = plus.basis_rows();
    rows.extend(minus.basis_rows());
    if rows.len() != 8 {
        return Err(SpinorGeometryError::NotTransverse);
    }
    let q = Mat::from_rows(rows).transpose(); // columns are the eigenvectors
    let qi = q.inverse().ok_or(SpinorGeometryError::NotTransverse)?;
    let mut d = Mat::zeros(8, 8);
    for i in 0..8 {
        d.set(
            i,
            i,
            if i < plus.dim() {
                val_plus.clone()
            } else {
                val_minus.clone()
            },
        );
    }
    Ok(Endomorphism::from_mat(FULL8, q.mul(&d).mul(&qi)))
}

fn check_half_pairing(pair: &Scalar) -> Result<(), SpinorGeometryError> {
    if pair != &Scalar::from_ratio(1, 2) {
        return Err(SpinorGeometryError::BadNormalization(format!("{pair}")));
    }
    Ok(())
}

pub fn structure_from_pure(
    gs: &GammaSet,
    psi: &Spinor,
) -> Result<ComplexPairData, SpinorGeometryError> {
    let hat = psi.conj();
    let m = annihilator(gs, psi);
    if m.dim() != 4 {
        return Err(SpinorGeometryError::NotPure(m.dim()));
    }
    let mbar = m.conj();
    let ri = m.intersection_dim(&mbar);
    if ri != 0 {
        return Err(SpinorGeometryError::RealIndexNonzero(ri));
    }
    check_half_pairing(&gs.inner(&hat, psi))?;
    let omega = gs.bilinear(&hat, psi, 2).scale(&Scalar::i_ratio(-2, 1));
    let omega_big = gs.bilinear(psi, psi, 4).scale(&Scalar::from_int(2));
    let j = eigen_split(&m, &mbar, &Scalar::i(), &-Scalar::i())?;
    // Cheap structural guards; the geometric identities live in the tests.
    assert!(j.is_real(), "complex structure must be a real endomorphism");
    assert_eq!(
        j.compose(&j),
        Endomorphism::identity(FULL8).scale(&-Scalar::one())
    );
    Ok(ComplexPairData {
        j,
        omega,
        omega_big,
        plus_space: m,
    })
}

pub fn structure_from_real_pair(
    gs: &GammaSet,
    psi_plus: &Spinor,
    psi_minus: &Spinor,
) -> Result<RealPairData, SpinorGeometryError> {
    if !psi_plus.is_real() || !psi_minus.is_real() {
        return Err(SpinorGeometryError::NotReal);
    }
    let mp = annihilator(gs, psi_plus);
    if mp.dim() != 4 {
        return Err(SpinorGeometryError::NotPure(mp.dim()));
    }
    let mm = annihilator(gs, psi_minus);
    if mm.dim() != 4 {
        return Err(SpinorGeometryError::NotPure(mm.dim()));
    }
    check_half_pairing(&gs.inner(psi_plus, psi_minus))?;
    let omega_r = gs.bilinear(psi_plus, psi_minus, 2).scale(&Scalar::from_int(2));
    let omega_plus = gs.bilinear(psi_plus, psi_plus, 4).scale(&Scalar::from_int(2));
    let omega_minus = gs
        .bilinear(psi_minus, psi_minus, 4)
        .scale(&Scalar::from_int(2));
    let k = eigen_split(&mp, &mm, &-Scalar::one(), &Scalar::one())?;
    assert!(k.is_real(), "para-complex structure must be real");
    assert_eq!(k.compose(&k), Endomorphism::identity(FULL8));
    Ok(RealPairData {
        k,
        omega_r,
        omega_plus,
        omega_minus,
        plus_space: mp,
        minus_space: mm,
    })
}

/// Single-contraction Plücker identity Ω ∧ (v⌟Ω) = 0 for every coordinate
/// direction v. Necessary for decomposability; the structure tests pair it
/// with an explicit comparison against a wedge of four 1-forms.
pub fn contraction_identity_four_form(omega: &Form) -> bool {
    assert_eq!(omega.grade(), 4);
    indices_of_mask(omega.universe())
        .into_iter()
        .all(|j| omega.interior_index(j).wedge(omega).is_zero())
}

/// Eigenspace of an endomorphism: kernel of (A − λ·𝕀) over ℂ⁸.
pub fn eigenspace_of(a: &Endomorphism, val: &Scalar) -> LinearSpace {
    let m = a.mat().sub(&Mat::identity(8).scale(val));
    LinearSpace::from_vectors(8, &m.kernel())
}
