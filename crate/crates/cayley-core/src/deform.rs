//! First-order fibre calculus for the spinor-square map: tangent directions
//! of the constant-metric fibres, their exact closed forms, and the
//! para-complex leg-type decomposition of the Lorentzian fibre tangent space.

use crate::clifford::{GammaSet, Signature, Spinor};
use crate::exterior::{
    indices_of_mask, keys_of, lie_act, Endomorphism, ExteriorError, Form, FormJet, SymBilinear,
    VectorX, FULL8, IMAG7,
};
use crate::families::{cayley_plus, seed_lorentzian, seed_real_pair, CompatReport};
use crate::linalg::{LinearSpace, Mat};
use crate::octonion::{imaginary_metric, imaginary_three_form, OctKind};
use crate::scalar::{Rat, Scalar};
use crate::spinor::{eigenspace_of, structure_from_real_pair, RealPairData};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeformError {
    #[error("perturbation does not belong to the requested fibre")]
    WrongFibre,
    #[error("probe spinor does not lie in a single eigenspace of the pairing involution")]
    NotEigenvector,
    #[error("endomorphism is not a real involution with two four-dimensional eigenspaces")]
    BadInvolution,
    #[error("form is not tangent to the constant-metric fibre")]
    NotFibreTangent,
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

// ---------------------------------------------------------------------------
// Perturbation data
// ---------------------------------------------------------------------------

/// Octonion directions carrying the ξ⃗/η⃗ components, in coordinate order.
const SIDE_DIRS: [usize; 6] = [1, 2, 3, 5, 6, 7];

/// Spinor data of a tangent direction on the transverse-pair fibre:
/// δψ₊ = a(𝕀+ẽ⁴) + ξ⃗ and δψ₋ = −a(𝕀−ẽ⁴) + η⃗ with ξ⃗, η⃗ supported on
/// ẽ¹,ẽ²,ẽ³,ẽ⁵,ẽ⁶,ẽ⁷. The opposite scalar coefficients keep the pairing
/// of the two halves constant to first order.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPerturbation {
    pub a: Rat,
    pub xi: [Rat; 6],
    pub eta: [Rat; 6],
}

impl PairPerturbation {
    pub fn zero() -> Self {
        PairPerturbation {
            a: Rat::zero(),
            xi: std::array::from_fn(|_| Rat::zero()),
            eta: std::array::from_fn(|_| Rat::zero()),
        }
    }

    /// The thirteen coordinate directions: a, then ξ⃗, then η⃗.
    pub fn basis() -> Vec<PairPerturbation> {
        let mut out = Vec::with_capacity(13);
        let mut p = PairPerturbation::zero();
        p.a = Rat::one();
        out.push(p);
        for k in 0..6 {
            let mut p = PairPerturbation::zero();
            p.xi[k] = Rat::one();
            out.push(p);
        }
        for k in 0..6 {
            let mut p = PairPerturbation::zero();
            p.eta[k] = Rat::one();
            out.push(p);
        }
        out
    }

    /// δψ₊ = a(𝕀 + ẽ⁴) + ξ⃗.
    pub fn delta_psi_plus(&self) -> Spinor {
        let mut s = Spinor::zero(Signature::Split);
        s.set(0, Scalar::from_rat(self.a.clone()));
        s.set(4, Scalar::from_rat(self.a.clone()));
        for (k, &dir) in SIDE_DIRS.iter().enumerate() {
            s.set(dir, Scalar::from_rat(self.xi[k].clone()));
        }
        s
    }

    /// δψ₋ = −a(𝕀 − ẽ⁴) + η⃗.
    pub fn delta_psi_minus(&self) -> Spinor {
        let mut s = Spinor::zero(Signature::Split);
        s.set(0, Scalar::from_rat(-self.a.clone()));
        s.set(4, Scalar::from_rat(self.a.clone()));
        for (k, &dir) in SIDE_DIRS.iter().enumerate() {
            s.set(dir, Scalar::from_rat(self.eta[k].clone()));
        }
        s
    }

    /// δψ = u·δψ₊ + ū·δψ₋ with u = (1+i)/√2, matching ψ_L = u·ψ₊ + ū·ψ₋.
    pub fn delta_psi(&self) -> Spinor {
        let u = Scalar::new(Rat::zero(), Rat::new(1.into(), 2.into()), Rat::zero(), Rat::new(1.into(), 2.into()));
        self.delta_psi_plus()
            .scale(&u)
            .add(&self.delta_psi_minus().scale(&u.conj()))
    }
}

/// A tangent direction of a constant-metric fibre, presented by its spinor
/// perturbation data.
#[derive(Clone, Debug, PartialEq)]
pub enum FibrePerturbation {
    /// δψ = Y on the unit sphere of real positive-chirality spinors;
    /// Y has no unit component, so ⟨ψ, δψ⟩ = 0 holds structurally.
    Riemannian(VectorX),
    /// A perturbation of the transverse real pair.
    Lorentzian(PairPerturbation),
}

impl FibrePerturbation {
    /// The seven coordinate directions of the positive-definite fibre.
    pub fn riemannian_basis() -> Vec<FibrePerturbation> {
        indices_of_mask(IMAG7)
            .into_iter()
            .map(|j| FibrePerturbation::Riemannian(VectorX::basis(IMAG7, j)))
            .collect()
    }

    /// The thirteen coordinate directions of the Lorentzian fibre.
    pub fn lorentzian_basis() -> Vec<FibrePerturbation> {
        PairPerturbation::basis()
            .into_iter()
            .map(FibrePerturbation::Lorentzian)
            .collect()
    }

    /// The tangent form at the standard base point of the matching fibre.
    pub fn tangent_form(&self) -> Result<Form, DeformError> {
        match self {
            FibrePerturbation::Riemannian(y) => Ok(riemannian_fibre_tangent(y, &cayley_plus())),
            FibrePerturbation::Lorentzian(_) => lorentzian_fibre_tangent(self),
        }
    }
}

// ---------------------------------------------------------------------------
// The positive-definite fibre
// ---------------------------------------------------------------------------

/// δΦ = e⁰∧(Y*⌟Φ) − Y♭∧(e₀⌟Φ): the tangent direction of the positive-definite
/// fibre cut out by the imaginary direction Y. Linear in Y, of rank seven over
/// the seven coordinate directions.
pub fn riemannian_fibre_tangent(y: &VectorX, phi: &Form) -> Form {
    assert!(
        y.universe() == IMAG7 && y.is_real(),
        "direction must be a real vector on the seven imaginary directions"
    );
    assert_eq!(phi.universe(), FULL8);
    assert_eq!(phi.grade(), 4);
    let g7 = imaginary_metric(OctKind::Division);
    let y8 = y.embed(FULL8);
    let flat = g7.lower(y).embed(FULL8);
    let e0 = Form::basis_form(FULL8, &[0]);
    let e0_vec = VectorX::basis(FULL8, 0);
    e0.wedge(&phi.interior(&y8))
        .sub(&flat.wedge(&phi.interior(&e0_vec)))
}

/// The unit-spinor fibre path α = εY through the positive-definite point,
/// expanded to first order: value at ε = 0 together with the exact
/// ε-derivative, computed with a formal nilpotent parameter.
pub fn riemannian_fibre_jet(y: &VectorX) -> Result<FormJet, DeformError> {
    assert!(
        y.universe() == IMAG7 && y.is_real(),
        "direction must be a real vector on the seven imaginary directions"
    );
    let g7 = imaginary_metric(OctKind::Division);
    let c3 = imaginary_three_form(OctKind::Division);
    let c4 = c3.hodge(&g7)?;
    let two = Scalar::from_int(2);
    // α = εY makes |α|² = O(ε²), so the scalar factors (1 − 2|α|²) and
    // √(1 − |α|²) are both 1 + O(ε²) and drop out of the first-order jets.
    let flat = FormJet::new(Form::zero(IMAG7, 1), g7.lower(y));
    let int_c3 = FormJet::new(Form::zero(IMAG7, 2), c3.interior(y));
    let int_c4 = FormJet::new(Form::zero(IMAG7, 3), c4.interior(y));
    let c_jet = FormJet::constant(c3.clone())
        .add(&flat.wedge(&int_c3).scale(&two))
        .sub(&int_c4.scale(&two));
    let star_jet = FormJet::constant(c4)
        .sub(&flat.wedge(&int_c4).scale(&two))
        .add(&flat.wedge(&FormJet::constant(c3)).scale(&two));
    let embed = |j: &FormJet| FormJet::new(j.value.embed(FULL8), j.deriv.embed(FULL8));
    let e0 = FormJet::constant(Form::basis_form(FULL8, &[0]));
    Ok(e0.wedge(&embed(&c_jet)).sub(&embed(&star_jet)))
}

// ---------------------------------------------------------------------------
// Eigenframe building blocks of the Lorentzian fibre
// ---------------------------------------------------------------------------

/// e^{i+1} + s·e^{i+5} for pair index i ∈ {0,1,2}.
fn one_pair(i: usize, s: &Scalar) -> Form {
    Form::basis_form(FULL8, &[i + 1]).add(&Form::basis_form(FULL8, &[i + 5]).scale(s))
}

/// Σᵢ cᵢ (eⁱ ± e^{i+4}) over the three direction pairs (1,5), (2,6), (3,7).
fn eigen_one_form(c: &[Scalar; 3], sign: i64) -> Form {
    let s = Scalar::from_int(sign);
    let mut out = Form::zero(FULL8, 1);
    for (i, ci) in c.iter().enumerate() {
        out = out.add(&one_pair(i, &s).scale(ci));
    }
    out
}

/// Cyclic Σᵢ cᵢ (e^j ± e^{j+4})∧(e^k ± e^{k+4}) with (i,j,k) a cycle of (1,2,3).
fn eigen_two_form(c: &[Scalar; 3], sign: i64) -> Form {
    let s = Scalar::from_int(sign);
    let mut out = Form::zero(FULL8, 2);
    for (i, ci) in c.iter().enumerate() {
        let fj = one_pair((i + 1) % 3, &s);
        let fk = one_pair((i + 2) % 3, &s);
        out = out.add(&fj.wedge(&fk).scale(ci));
    }
    out
}

fn e4_plus_e0() -> Form {
    Form::basis_form(FULL8, &[4]).add(&Form::basis_form(FULL8, &[0]))
}

fn e4_minus_e0() -> Form {
    Form::basis_form(FULL8, &[4]).sub(&Form::basis_form(FULL8, &[0]))
}

/// The invariants of the transverse real pair in the standard frame.
fn standard_pair(gs: &GammaSet) -> RealPairData {
    let (plus, minus) = seed_real_pair();
    structure_from_real_pair(gs, &plus, &minus).expect("standard pair is pure and transverse")
}

/// ω_r∧(Σ cᵘ-cyclic plus-frame bivectors) + ω_r∧(e⁴+e⁰)∧(Σ cᵛ plus-frame
/// covectors). The plus-paired covectors e^i + e^{i+4} are dual to the −1
/// eigenvectors of the pair's involution, so this span has leg type (1, 3).
fn plus_assembly(pair: &RealPairData, u: &[Scalar; 3], v: &[Scalar; 3]) -> Form {
    pair.omega_r.wedge(&eigen_two_form(u, 1)).add(
        &pair
            .omega_r
            .wedge(&e4_plus_e0())
            .wedge(&eigen_one_form(v, 1)),
    )
}

/// ω_r∧(Σ cᵛ-cyclic minus-frame bivectors) + ω_r∧(e⁴−e⁰)∧(Σ cᵘ minus-frame
/// covectors): the mirror span, of leg type (3, 1).
fn minus_assembly(pair: &RealPairData, u: &[Scalar; 3], v: &[Scalar; 3]) -> Form {
    pair.omega_r.wedge(&eigen_two_form(v, -1)).add(
        &pair
            .omega_r
            .wedge(&e4_minus_e0())
            .wedge(&eigen_one_form(u, -1)),
    )
}

/// Halved eigencoordinates of a six-component parameter vector:
/// uᵢ = (cⁱ + c^{i+4})/2 and vᵢ = (cⁱ − c^{i+4})/2.
fn halved_coords(c: &[Scalar; 6]) -> ([Scalar; 3], [Scalar; 3]) {
    let half = Scalar::from_ratio(1, 2);
    let u = std::array::from_fn(|i| &(&c[i] + &c[i + 3]) * &half);
    let v = std::array::from_fn(|i| &(&c[i] - &c[i + 3]) * &half);
    (u, v)
}

struct TangentParts {
    re_plus: Form,
    re_minus: Form,
    im_plus: Form,
    im_minus: Form,
    im_scalar: Form,
}

impl TangentParts {
    fn sum(&self) -> Form {
        self.re_plus
            .add(&self.re_minus)
            .add(&self.im_plus)
            .add(&self.im_minus)
            .add(&self.im_scalar)
    }
}

/// The five closed pieces of a fibre tangent: i·a(Ω₊+Ω₋), the ξ⃗-parametrized
/// eigenframe assemblies (imaginary plus-type, real minus-type) and the
/// η⃗-parametrized ones (real plus-type, imaginary minus-type).
fn tangent_parts(
    pair: &RealPairData,
    a: &Scalar,
    xi: &[Scalar; 6],
    eta: &[Scalar; 6],
) -> TangentParts {
    let (u_xi, v_xi) = halved_coords(xi);
    let (u_eta, v_eta) = halved_coords(eta);
    TangentParts {
        re_plus: plus_assembly(pair, &u_eta, &v_eta),
        re_minus: minus_assembly(pair, &u_xi, &v_xi),
        im_plus: plus_assembly(pair, &u_xi, &v_xi).times_i(),
        im_minus: minus_assembly(pair, &u_eta, &v_eta).scale(&Scalar::i_ratio(-1, 1)),
        im_scalar: pair.omega_plus.add(&pair.omega_minus).scale(&a.times_i()),
    }
}

// ---------------------------------------------------------------------------
// The Lorentzian fibre tangent and the eigenspace resolution table
// ---------------------------------------------------------------------------

/// Pairing-eigenspace sign of a probe spinor: +1 if the components satisfy
/// c_{i+4} = c_i for i = 0..4, −1 for the opposite pairing.
fn eigen_sign(xi: &Spinor) -> Result<i64, DeformError> {
    if xi.sig != Signature::Split || !xi.is_positive_chirality() {
        return Err(DeformError::NotEigenvector);
    }
    let u = xi.upper();
    let plus = (0..4).all(|i| (&u[i + 4] - &u[i]).is_zero());
    let minus = (0..4).all(|i| (&u[i + 4] + &u[i]).is_zero());
    if plus {
        Ok(1)
    } else if minus {
        Ok(-1)
    } else {
        Err(DeformError::NotEigenvector)
    }
}

/// ⟨ψ, Γ…Γ Ξ⟩ for ψ one of the transverse pair and Ξ a probe spinor inside a
/// single pairing eigenspace, computed from the gamma matrices and checked
/// against its closed form: Ω±·ξ₀ + ω_r∧(bivector assembly) when the probe
/// pairs with ψ, and ½ω_r∧ω_r·ξ₀ + ω_r∧(e⁴±e⁰)∧(covector assembly) when it
/// pairs against.
pub fn eigenspace_bilinear(psi: &Spinor, xi: &Spinor) -> Result<Form, DeformError> {
    let gs = GammaSet::new(Signature::Split);
    let (seed_plus, seed_minus) = seed_real_pair();
    let on_plus = if *psi == seed_plus {
        true
    } else if *psi == seed_minus {
        false
    } else {
        panic!("base spinor must be one of the transverse pair");
    };
    let sign = eigen_sign(xi)?;
    let lhs = gs.bilinear(psi, xi, 4);
    let pair = standard_pair(&gs);
    let scalar_coord = xi.comp(0).clone();
    let vec: [Scalar; 3] = [xi.comp(1).clone(), xi.comp(2).clone(), xi.comp(3).clone()];
    let half_rr = pair
        .omega_r
        .wedge(&pair.omega_r)
        .scale(&Scalar::from_ratio(1, 2));
    let rhs = match (on_plus, sign) {
        (true, 1) => pair
            .omega_plus
            .scale(&scalar_coord)
            .add(&pair.omega_r.wedge(&eigen_two_form(&vec, 1))),
        (true, -1) => half_rr.scale(&scalar_coord).add(
            &pair
                .omega_r
                .wedge(&e4_plus_e0())
                .wedge(&eigen_one_form(&vec, 1)),
        ),
        (false, 1) => half_rr.scale(&scalar_coord).add(
            &pair
                .omega_r
                .wedge(&e4_minus_e0())
                .wedge(&eigen_one_form(&vec, -1)),
        ),
        (false, -1) => pair
            .omega_minus
            .scale(&scalar_coord)
            .add(&pair.omega_r.wedge(&eigen_two_form(&vec, -1))),
        _ => unreachable!(),
    };
    assert_eq!(lhs, rhs, "closed form must match the gamma bilinear");
    Ok(lhs)
}

/// The grade-4 bilinear ⟨ψ_L, Γ…Γ δψ⟩ of a Lorentzian fibre direction,
/// computed from the gamma matrices and independently from the closed
/// eigenframe assembly; the two routes must agree exactly. Twice this form is
/// the derivative of the spinor square along the perturbation path.
pub fn lorentzian_fibre_tangent(p: &FibrePerturbation) -> Result<Form, DeformError> {
    let FibrePerturbation::Lorentzian(data) = p else {
        return Err(DeformError::WrongFibre);
    };
    let gs = GammaSet::new(Signature::Split);
    let bilinear = gs.bilinear(&seed_lorentzian(), &data.delta_psi(), 4);
    let pair = standard_pair(&gs);
    let a = Scalar::from_rat(data.a.clone());
    let xi: [Scalar; 6] = std::array::from_fn(|k| Scalar::from_rat(data.xi[k].clone()));
    let eta: [Scalar; 6] = std::array::from_fn(|k| Scalar::from_rat(data.eta[k].clone()));
    let closed = tangent_parts(&pair, &a, &xi, &eta).sum();
    assert_eq!(bilinear, closed, "closed form must match the gamma bilinear");
    Ok(bilinear)
}

// ---------------------------------------------------------------------------
// Leg-type decomposition
// ---------------------------------------------------------------------------

/// Split a form by leg type with respect to an involution: component (p, q)
/// collects the monomials with p legs dual to the +1 eigenspace and q legs
/// dual to the −1 eigenspace. The components sum back to the input exactly.
pub fn k_leg_components(
    alpha: &Form,
    k: &Endomorphism,
) -> Result<BTreeMap<(usize, usize), Form>, DeformError> {
    let universe = alpha.universe();
    if k.universe() != universe || k.compose(k) != Endomorphism::identity(universe) {
        return Err(DeformError::BadInvolution);
    }
    let plus = eigenspace_of(k, &Scalar::one());
    let minus = eigenspace_of(k, &-Scalar::one());
    let p_dim = plus.dim();
    if p_dim + minus.dim() != indices_of_mask(universe).len() {
        return Err(DeformError::BadInvolution);
    }
    let mut vectors: Vec<VectorX> = Vec::with_capacity(8);
    for row in plus.basis_rows().into_iter().chain(minus.basis_rows()) {
        let entries: Vec<(usize, Scalar)> = row.into_iter().enumerate().collect();
        vectors.push(VectorX::from_components(universe, &entries));
    }
    // Dual covectors: rows of the inverse of the matrix whose columns are the
    // eigenvectors.
    let bmat = Mat::from_fn(8, 8, |r, c| vectors[c].get(r));
    let dual = bmat.inverse().ok_or(DeformError::BadInvolution)?;
    let covectors: Vec<Form> = (0..8)
        .map(|j| {
            let mut f = Form::zero(universe, 1);
            for m in indices_of_mask(universe) {
                f = f.add(&Form::basis_form(universe, &[m]).scale(dual.at(j, m)));
            }
            f
        })
        .collect();
    let grade = alpha.grade();
    let mut out: BTreeMap<(usize, usize), Form> = BTreeMap::new();
    for key in keys_of(FULL8, grade) {
        let idx = indices_of_mask(key);
        let args: Vec<&VectorX> = idx.iter().map(|&j| &vectors[j]).collect();
        let coeff = alpha.eval(&args);
        if coeff.is_zero() {
            continue;
        }
        let p = idx.iter().filter(|&&j| j < p_dim).count();
        let q = grade as usize - p;
        let mut mono = covectors[idx[0]].clone();
        for &j in &idx[1..] {
            mono = mono.wedge(&covectors[j]);
        }
        let entry = out
            .entry((p, q))
            .or_insert_with(|| Form::zero(universe, grade));
        *entry = entry.add(&mono.scale(&coeff));
    }
    let mut total = Form::zero(universe, grade);
    for piece in out.values() {
        total = total.add(piece);
    }
    assert_eq!(total, *alpha, "leg components must sum to the input");
    Ok(out)
}

/// The para-complex split of a Lorentzian fibre tangent. The real part lives
/// in the two mixed leg types (three-plus-one and one-plus-three), the
/// imaginary part in those plus the line i·(Ω₊+Ω₋).
#[derive(Clone, Debug)]
pub struct BigradedDecomposition {
    pub re_plus: Form,
    pub re_minus: Form,
    pub im_plus: Form,
    pub im_minus: Form,
    pub im_scalar: Form,
    /// Solved fibre coordinates in basis order: a, then ξ⃗, then η⃗.
    pub params: Vec<Scalar>,
}

impl BigradedDecomposition {
    pub fn re_part(&self) -> Form {
        self.re_plus.add(&self.re_minus)
    }

    pub fn im_part(&self) -> Form {
        self.im_plus.add(&self.im_minus).add(&self.im_scalar)
    }

    pub fn sum(&self) -> Form {
        self.re_part().add(&self.im_part())
    }
}

/// Rank of one six-parameter eigenframe assembly; rank six makes the
/// matched-parameter correspondence between its real and imaginary copies a
/// bijection.
fn assembly_rank(pair: &RealPairData, sign: i64) -> usize {
    let mut rows = Vec::with_capacity(6);
    for slot in 0..6 {
        let mut u = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        let mut v = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        if slot < 3 {
            u[slot] = Scalar::one();
        } else {
            v[slot - 3] = Scalar::one();
        }
        let f = if sign > 0 {
            plus_assembly(pair, &u, &v)
        } else {
            minus_assembly(pair, &u, &v)
        };
        rows.push(f.flatten_real());
    }
    Mat::from_rows(rows).rank()
}

/// Decompose a fibre tangent into its five closed pieces by solving exactly
/// for the thirteen fibre coordinates, rebuilding each piece, and verifying
/// leg types against the involution: plus-frame pieces carry one plus leg and
/// three minus legs, minus-frame pieces the mirror profile, and the scalar
/// piece four legs of a single type.
pub fn decompose_wrt_k(
    dphi: &Form,
    k: &Endomorphism,
) -> Result<BigradedDecomposition, DeformError> {
    if dphi.universe() != FULL8 || dphi.grade() != 4 {
        return Err(DeformError::NotFibreTangent);
    }
    if k.universe() != FULL8 || k.compose(k) != Endomorphism::identity(FULL8) {
        return Err(DeformError::BadInvolution);
    }
    let gs = GammaSet::new(Signature::Split);
    let pair = standard_pair(&gs);
    let basis = PairPerturbation::basis();
    let columns: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|p| {
            let a = Scalar::from_rat(p.a.clone());
            let xi: [Scalar; 6] = std::array::from_fn(|j| Scalar::from_rat(p.xi[j].clone()));
            let eta: [Scalar; 6] = std::array::from_fn(|j| Scalar::from_rat(p.eta[j].clone()));
            tangent_parts(&pair, &a, &xi, &eta).sum().flatten_real()
        })
        .collect();
    let rows = columns[0].len();
    let m = Mat::from_fn(rows, columns.len(), |r, c| columns[c][r].clone());
    let x = m
        .solve(&dphi.flatten_real())
        .ok_or(DeformError::NotFibreTangent)?;
    let a = x[0].clone();
    let xi: [Scalar; 6] = std::array::from_fn(|j| x[1 + j].clone());
    let eta: [Scalar; 6] = std::array::from_fn(|j| x[7 + j].clone());
    let parts = tangent_parts(&pair, &a, &xi, &eta);
    assert_eq!(parts.sum(), *dphi, "pieces must sum to the input exactly");
    for (piece, allowed) in [
        (&parts.re_plus, &[(3usize, 1usize)][..]),
        (&parts.re_minus, &[(1, 3)][..]),
        (&parts.im_plus, &[(3, 1)][..]),
        (&parts.im_minus, &[(1, 3)][..]),
        (&parts.im_scalar, &[(4, 0), (0, 4)][..]),
    ] {
        let legs = k_leg_components(piece, k)?;
        assert!(
            legs.keys().all(|t| allowed.contains(t)),
            "piece must be supported on the leg types {allowed:?}, got {:?}",
            legs.keys().collect::<Vec<_>>()
        );
    }
    assert_eq!(assembly_rank(&pair, 1), 6);
    assert_eq!(assembly_rank(&pair, -1), 6);
    Ok(BigradedDecomposition {
        re_plus: parts.re_plus,
        re_minus: parts.re_minus,
        im_plus: parts.im_plus,
        im_minus: parts.im_minus,
        im_scalar: parts.im_scalar,
        params: x,
    })
}

// ---------------------------------------------------------------------------
// Dimension counts and transversality
// ---------------------------------------------------------------------------

/// Rank of a family of fibre perturbations under the tangent map.
pub fn fibre_rank(basis: &[FibrePerturbation]) -> Result<usize, DeformError> {
    let mut rows = Vec::with_capacity(basis.len());
    for p in basis {
        rows.push(p.tangent_form()?.flatten_real());
    }
    Ok(Mat::from_rows(rows).rank())
}

/// Ranks of the Lorentzian parameter-to-form maps: the real part alone, the
/// imaginary part alone, and the full tangent map.
pub fn lorentzian_component_ranks() -> (usize, usize, usize) {
    let mut re_rows = Vec::with_capacity(13);
    let mut im_rows = Vec::with_capacity(13);
    let mut full_rows = Vec::with_capacity(13);
    for p in FibrePerturbation::lorentzian_basis() {
        let t = p.tangent_form().expect("basis directions are lorentzian");
        re_rows.push(t.re().flatten_real());
        im_rows.push(t.im().flatten_real());
        full_rows.push(t.flatten_real());
    }
    (
        Mat::from_rows(re_rows).rank(),
        Mat::from_rows(im_rows).rank(),
        Mat::from_rows(full_rows).rank(),
    )
}

/// First-order pair-density law along Φ + εδΦ at a fixed metric: each density
/// jet must equal (g_ik g_jl − g_il g_jk − (7/6)(Φ + εδΦ)_ijkl)·v with the
/// metric's own volume v held constant. Exact in the nilpotent parameter;
/// directions that drift the metric or its volume fail with a witness.
pub fn first_order_metric_compat(phi: &Form, dphi: &Form, g: &SymBilinear) -> CompatReport {
    let no_witness_fail = CompatReport {
        ok: false,
        witness: None,
    };
    let Some(vol) = crate::families::solve_volume(phi, g) else {
        return no_witness_fail;
    };
    let jet = FormJet::new(phi.clone(), dphi.clone());
    let dirs = indices_of_mask(phi.universe());
    let sixth = Scalar::from_ratio(1, 6);
    let seven_sixth = Scalar::from_ratio(7, 6);
    let mut pairs = Vec::new();
    for (a, &i) in dirs.iter().enumerate() {
        for &j in &dirs[a + 1..] {
            pairs.push((i, j));
        }
    }
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let d = jet
                .interior_index(i)
                .interior_index(j)
                .wedge(&jet.interior_index(k).interior_index(l))
                .wedge(&jet)
                .scale(&sixth);
            let want_value = vol.scale(&crate::families::density_target(phi, g, i, j, k, l));
            let drift = crate::families::quad_eval(dphi, i, j, k, l);
            let want_deriv = vol.scale(&-(&drift * &seven_sixth));
            if d.value != want_value || d.deriv != want_deriv {
                return CompatReport {
                    ok: false,
                    witness: Some(((i, j), (k, l))),
                };
            }
        }
    }
    CompatReport {
        ok: true,
        witness: None,
    }
}

/// Dimensions of the span of the infinitesimal isometry orbit through the
/// Lorentzian form, of the span of the thirteen fibre directions, and of
/// their intersection.
pub fn isometry_orbit_fibre_intersection() -> (usize, usize, usize) {
    let gs = GammaSet::new(Signature::Split);
    let seed = seed_lorentzian();
    let phi = gs.bilinear(&seed, &seed, 4);
    let ambient = phi.flatten_real().len();
    let orbit_rows: Vec<Vec<Scalar>> = gs
        .spin_generators()
        .iter()
        .map(|g| lie_act(&g.vector, &phi).flatten_real())
        .collect();
    let fibre_rows: Vec<Vec<Scalar>> = FibrePerturbation::lorentzian_basis()
        .iter()
        .map(|p| {
            p.tangent_form()
                .expect("basis directions are lorentzian")
                .flatten_real()
        })
        .collect();
    let orbit = LinearSpace::from_vectors(ambient, &orbit_rows);
    let fibre = LinearSpace::from_vectors(ambient, &fibre_rows);
    (orbit.dim(), fibre.dim(), orbit.intersection_dim(&fibre))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn resolution_table_special_probes() {
        let (psi_plus, psi_minus) = seed_real_pair();
        let gs = GammaSet::new(Signature::Split);
        let pair = standard_pair(&gs);
        let mut probe_plus = Spinor::zero(Signature::Split);
        probe_plus.set(0, Scalar::one());
        probe_plus.set(4, Scalar::one());
        let mut probe_minus = Spinor::zero(Signature::Split);
        probe_minus.set(0, Scalar::one());
        probe_minus.set(4, -Scalar::one());
        assert_eq!(
            eigenspace_bilinear(&psi_plus, &probe_plus).unwrap(),
            pair.omega_plus
        );
        assert_eq!(
            eigenspace_bilinear(&psi_minus, &probe_minus).unwrap(),
            pair.omega_minus
        );
        assert_eq!(
            eigenspace_bilinear(&psi_plus, &probe_minus).unwrap(),
            pair.omega_r
                .wedge(&pair.omega_r)
                .scale(&Scalar::from_ratio(1, 2))
        );
    }

    #[test]
    fn scalar_direction_is_the_top_form_line() {
        let gs = GammaSet::new(Signature::Split);
        let pair = standard_pair(&gs);
        let mut p = PairPerturbation::zero();
        p.a = Rat::one();
        let t = lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(p)).unwrap();
        assert_eq!(t, pair.omega_plus.add(&pair.omega_minus).times_i());
    }

    #[test]
    fn fibre_path_derivative_is_twice_the_displayed_tangent() {
        let y = VectorX::basis(IMAG7, 1);
        let jet = riemannian_fibre_jet(&y).unwrap();
        assert_eq!(jet.value, cayley_plus());
        let displayed = riemannian_fibre_tangent(&y, &cayley_plus());
        assert_eq!(jet.deriv, displayed.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn decomposition_roundtrip_and_scalar_line() {
        let gs = GammaSet::new(Signature::Split);
        let pair = standard_pair(&gs);
        let mut p = PairPerturbation::zero();
        p.a = rat(2, 3);
        p.xi[0] = Rat::one();
        p.eta[4] = rat(-1, 2);
        let t = lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(p)).unwrap();
        let d = decompose_wrt_k(&t, &pair.k).unwrap();
        assert_eq!(d.sum(), t);
        assert_eq!(d.params[0], Scalar::from_ratio(2, 3));

        let mut scalar_only = PairPerturbation::zero();
        scalar_only.a = Rat::one();
        let ts = lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(scalar_only)).unwrap();
        let ds = decompose_wrt_k(&ts, &pair.k).unwrap();
        assert!(ds.re_part().is_zero());
        assert_eq!(ds.im_part(), ts);
    }
}
