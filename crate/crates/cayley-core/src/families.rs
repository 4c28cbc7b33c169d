//! The Cayley 4-form families generated by spinor squaring, their closed
//! forms, calibration presentations, and the metric each one determines.

use crate::clifford::{GammaSet, Signature, Spinor};
use crate::exterior::{
    indices_of_mask, keys_of, lie_act, Endomorphism, Form, Mask, SymBilinear, VectorX, FULL8,
    IMAG7,
};
use crate::linalg::{Mat, MatF};
use crate::octonion::{imaginary_metric, imaginary_three_form, OctKind};
use crate::scalar::{rat, rat_int, Rat, Scalar};
use crate::spinor::{structure_from_pure, SpinorGeometryError};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("parameter does not match the family")]
    WrongParameter,
    #[error("phase parameter must satisfy p² + q² = 1")]
    NotUnitPhase,
    #[error("stretch parameter must be a positive rational")]
    NotPositiveStretch,
    #[error("fibre point must be a real vector on the imaginary directions with |α| < 1")]
    BadFibrePoint,
    #[error("√(1 − |α|²) does not lie in the scalar field")]
    IrrationalRadius,
    #[error("closed-form identity failed for {0:?}")]
    ClosedFormMismatch(FamilyTag),
    #[error("pair density vanishes")]
    DegenerateDensity,
    #[error("fixed-point iteration did not converge (best residual {0:e})")]
    NoConvergence(f64),
    #[error("plane cannot be orthonormalized over the scalar field")]
    BadPlane,
    #[error(transparent)]
    Spinor(#[from] SpinorGeometryError),
    #[error(transparent)]
    Exterior(#[from] crate::exterior::ExteriorError),
}

// ---------------------------------------------------------------------------
// The two real Cayley forms and the spinor seeds
// ---------------------------------------------------------------------------

/// e⁰∧φ − *φ for the matching associative 3-form and 7-direction metric.
pub fn cayley_four_form(kind: OctKind) -> Form {
    let phi = imaginary_three_form(kind);
    let g7 = imaginary_metric(kind);
    let dual = phi.hodge(&g7).expect("unit-determinant metric");
    let e0 = Form::basis_form(FULL8, &[0]);
    e0.wedge(&phi.embed(FULL8)).sub(&dual.embed(FULL8))
}

/// The positive-definite Cayley form e⁰∧φ − *φ.
pub fn cayley_plus() -> Form {
    cayley_four_form(OctKind::Division)
}

/// The split Cayley form e⁰∧φ̃ − *φ̃.
pub fn cayley_split() -> Form {
    cayley_four_form(OctKind::Split)
}

/// ½(𝕀 + i e₄): the normalized pure spinor seeding the positive-definite
/// complex family.
pub fn seed_pure_euclidean() -> Spinor {
    let mut s = Spinor::zero(Signature::Euclidean);
    s.set(0, Scalar::from_ratio(1, 2));
    s.set(4, Scalar::i_ratio(1, 2));
    s
}

/// ½(𝕀 + i ẽ₇): the normalized pure spinor seeding the split complex family.
pub fn seed_pure_split() -> Spinor {
    let mut s = Spinor::zero(Signature::Split);
    s.set(0, Scalar::from_ratio(1, 2));
    s.set(7, Scalar::i_ratio(1, 2));
    s
}

/// The transverse real pure pair ½(𝕀 ± ẽ₄).
pub fn seed_real_pair() -> (Spinor, Spinor) {
    let mut plus = Spinor::zero(Signature::Split);
    plus.set(0, Scalar::from_ratio(1, 2));
    plus.set(4, Scalar::from_ratio(1, 2));
    let mut minus = Spinor::zero(Signature::Split);
    minus.set(0, Scalar::from_ratio(1, 2));
    minus.set(4, Scalar::from_ratio(-1, 2));
    (plus, minus)
}

/// (√2/2)(𝕀 + i ẽ₄): the Lorentzian seed, sitting at the quarter-phase point
/// of the rotation family.
pub fn seed_lorentzian() -> Spinor {
    let half_sqrt2 = Scalar::new(Rat::zero(), rat(1, 2), Rat::zero(), Rat::zero());
    let mut s = Spinor::zero(Signature::Split);
    s.set(0, half_sqrt2.clone());
    s.set(4, half_sqrt2.times_i());
    s
}

/// t·ψ_p + t⁻¹·ψ̂_p for the pure seed of the given signature.
pub fn seed_stretched(sig: Signature, t: &Rat) -> Result<Spinor, FamilyError> {
    if t.is_zero() || t.is_negative() {
        return Err(FamilyError::NotPositiveStretch);
    }
    let psi = match sig {
        Signature::Euclidean => seed_pure_euclidean(),
        Signature::Split => seed_pure_split(),
    };
    let t_inv = Rat::one() / t;
    Ok(psi
        .scale(&Scalar::from_rat(t.clone()))
        .add(&psi.conj().scale(&Scalar::from_rat(t_inv))))
}

/// u·ψ₊ + ū·ψ₋ with u = p + qi on the unit circle.
pub fn seed_phase(p: &Rat, q: &Rat) -> Result<Spinor, FamilyError> {
    if p * p + q * q != Rat::one() {
        return Err(FamilyError::NotUnitPhase);
    }
    let (plus, minus) = seed_real_pair();
    let u = Scalar::new(p.clone(), Rat::zero(), q.clone(), Rat::zero());
    Ok(plus.scale(&u).add(&minus.scale(&u.conj())))
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    RiemannianReal,
    RiemannianComplexTau,
    SplitReal,
    SplitComplexTau,
    SplitComplexTheta,
    Lorentzian,
}

#[derive(Clone, Debug)]
pub enum FamilyParam {
    None,
    /// Stretch t > 0 of the pure/conjugate seed pair.
    Stretch(Rat),
    /// Unit phase u = p + qi applied to the real seed pair.
    Phase(Rat, Rat),
}

/// A Cayley form with its seed spinor and the flat metric it calibrates.
pub struct CayleyForm {
    pub tag: FamilyTag,
    pub form: Form,
    pub seed: Spinor,
    pub metric: SymBilinear,
}

/// cosh 2τ and sinh 2τ for the stretch parameter t = e^τ.
fn stretch_weights(t: &Rat) -> (Scalar, Scalar) {
    let t2 = t * t;
    let t2i = Rat::one() / &t2;
    let cosh = Scalar::from_rat((&t2 + &t2i) / rat_int(2));
    let sinh = Scalar::from_rat((&t2 - &t2i) / rat_int(2));
    (cosh, sinh)
}

/// cos 2θ and sin 2θ for the phase parameter u = p + qi.
fn phase_weights(p: &Rat, q: &Rat) -> (Scalar, Scalar) {
    let cos = Scalar::from_rat(p * p - q * q);
    let sin = Scalar::from_rat(rat_int(2) * p * q);
    (cos, sin)
}

/// Build a family member: square the seed through the grade-4 bilinear and
/// check the family's closed form exactly.
pub fn build_family(tag: FamilyTag, param: &FamilyParam) -> Result<CayleyForm, FamilyError> {
    match (tag, param) {
        (FamilyTag::RiemannianReal, FamilyParam::None) => {
            let gs = GammaSet::new(Signature::Euclidean);
            let seed = Spinor::unit(Signature::Euclidean);
            let form = gs.bilinear(&seed, &seed, 4);
            if form != cayley_plus() {
                return Err(FamilyError::ClosedFormMismatch(tag));
            }
            Ok(CayleyForm {
                tag,
                form,
                seed,
                metric: Signature::Euclidean.vector_metric(),
            })
        }
        (FamilyTag::SplitReal, FamilyParam::None) => {
            let gs = GammaSet::new(Signature::Split);
            let seed = Spinor::unit(Signature::Split);
            let form = gs.bilinear(&seed, &seed, 4);
            if form != cayley_split() {
                return Err(FamilyError::ClosedFormMismatch(tag));
            }
            Ok(CayleyForm {
                tag,
                form,
                seed,
                metric: Signature::Split.vector_metric(),
            })
        }
        (FamilyTag::RiemannianComplexTau, FamilyParam::Stretch(t)) => {
            stretched_family(Signature::Euclidean, tag, t)
        }
        (FamilyTag::SplitComplexTau, FamilyParam::Stretch(t)) => {
            stretched_family(Signature::Split, tag, t)
        }
        (FamilyTag::SplitComplexTheta, FamilyParam::Phase(p, q)) => {
            let gs = GammaSet::new(Signature::Split);
            let seed = seed_phase(p, q)?;
            let form = gs.bilinear(&seed, &seed, 4);
            if form != phase_closed_form(&gs, p, q) {
                return Err(FamilyError::ClosedFormMismatch(tag));
            }
            Ok(CayleyForm {
                tag,
                form,
                seed,
                metric: Signature::Split.vector_metric(),
            })
        }
        (FamilyTag::Lorentzian, FamilyParam::None) => {
            let gs = GammaSet::new(Signature::Split);
            let seed = seed_lorentzian();
            let form = gs.bilinear(&seed, &seed, 4);
            // The quarter-phase closed form: (i/2)(Ω₊ − Ω₋) + ½ ω_r∧ω_r.
            let pair = real_pair_forms(&gs);
            let expect = pair
                .omega_plus
                .sub(&pair.omega_minus)
                .scale(&Scalar::i_ratio(1, 2))
                .add(&pair.omega_r.wedge(&pair.omega_r).scale(&Scalar::from_ratio(1, 2)));
            if form != expect {
                return Err(FamilyError::ClosedFormMismatch(tag));
            }
            Ok(CayleyForm {
                tag,
                form,
                seed,
                metric: Signature::Split.vector_metric(),
            })
        }
        _ => Err(FamilyError::WrongParameter),
    }
}

struct RealPairForms {
    omega_r: Form,
    omega_plus: Form,
    omega_minus: Form,
}

fn real_pair_forms(gs: &GammaSet) -> RealPairForms {
    let (plus, minus) = seed_real_pair();
    let two = Scalar::from_int(2);
    RealPairForms {
        omega_r: gs.bilinear(&plus, &minus, 2).scale(&two),
        omega_plus: gs.bilinear(&plus, &plus, 4).scale(&two),
        omega_minus: gs.bilinear(&minus, &minus, 4).scale(&two),
    }
}

fn phase_closed_form(gs: &GammaSet, p: &Rat, q: &Rat) -> Form {
    let pair = real_pair_forms(gs);
    let (cos, sin) = phase_weights(p, q);
    let half = Scalar::from_ratio(1, 2);
    pair.omega_plus
        .add(&pair.omega_minus)
        .scale(&(&half * &cos))
        .add(
            &pair
                .omega_plus
                .sub(&pair.omega_minus)
                .scale(&(&half * &sin).times_i()),
        )
        .add(&pair.omega_r.wedge(&pair.omega_r).scale(&half))
}

fn stretched_family(sig: Signature, tag: FamilyTag, t: &Rat) -> Result<CayleyForm, FamilyError> {
    let gs = GammaSet::new(sig);
    let seed = seed_stretched(sig, t)?;
    let form = gs.bilinear(&seed, &seed, 4);
    let pure = match sig {
        Signature::Euclidean => seed_pure_euclidean(),
        Signature::Split => seed_pure_split(),
    };
    let data = structure_from_pure(&gs, &pure)?;
    let (cosh, sinh) = stretch_weights(t);
    let half = Scalar::from_ratio(1, 2);
    // cosh2τ·Re Ω − ½ ω∧ω + i·sinh2τ·Im Ω
    let expect = data
        .omega_big
        .re()
        .scale(&cosh)
        .sub(&data.omega.wedge(&data.omega).scale(&half))
        .add(&data.omega_big.im().scale(&sinh).times_i());
    if form != expect {
        return Err(FamilyError::ClosedFormMismatch(tag));
    }
    Ok(CayleyForm {
        tag,
        form,
        seed,
        metric: sig.vector_metric(),
    })
}

// ---------------------------------------------------------------------------
// Calibration bivector bases and the five wedge identities
// ---------------------------------------------------------------------------

/// Which coordinate 4-plane carries the self-dual triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CalibrationBlock {
    B1234,
    B0567,
    B3456,
    B0127,
    B4567,
    B0123,
}

impl CalibrationBlock {
    pub fn mask(&self) -> Mask {
        match self {
            CalibrationBlock::B1234 => 0b0001_1110,
            CalibrationBlock::B0567 => 0b1110_0001,
            CalibrationBlock::B3456 => 0b0111_1000,
            CalibrationBlock::B0127 => 0b1000_0111,
            CalibrationBlock::B4567 => 0b1111_0000,
            CalibrationBlock::B0123 => 0b0000_1111,
        }
    }
}

/// The distinguished 2-form triple of a block, on all eight directions.
pub fn calibration_two_forms(block: CalibrationBlock) -> [Form; 3] {
    let u = FULL8;
    let t = |idx: &[usize]| Form::basis_form(u, idx);
    let it = |idx: &[usize]| Form::term(u, idx, Scalar::i());
    match block {
        CalibrationBlock::B1234 => [
            t(&[4, 1]).sub(&t(&[2, 3])),
            t(&[4, 2]).sub(&t(&[3, 1])),
            t(&[4, 3]).sub(&t(&[1, 2])),
        ],
        CalibrationBlock::B0567 => [
            t(&[0, 5]).sub(&t(&[6, 7])),
            t(&[0, 6]).sub(&t(&[7, 5])),
            t(&[0, 7]).sub(&t(&[5, 6])),
        ],
        CalibrationBlock::B3456 => [
            t(&[5, 4]).add(&t(&[3, 6])),
            t(&[5, 3]).add(&t(&[6, 4])),
            t(&[5, 6]).sub(&t(&[4, 3])),
        ],
        CalibrationBlock::B0127 => [
            t(&[0, 1]).add(&t(&[2, 7])),
            t(&[0, 2]).add(&t(&[7, 1])),
            t(&[0, 7]).sub(&t(&[1, 2])),
        ],
        CalibrationBlock::B4567 => [
            it(&[4, 5]).sub(&t(&[6, 7])),
            it(&[4, 6]).sub(&t(&[7, 5])),
            it(&[4, 7]).sub(&t(&[5, 6])),
        ],
        CalibrationBlock::B0123 => [
            it(&[0, 1]).sub(&t(&[2, 3])),
            it(&[0, 2]).sub(&t(&[3, 1])),
            it(&[0, 3]).sub(&t(&[1, 2])),
        ],
    }
}

/// Σᵢⱼ wᵢⱼ aⁱ∧bʲ for a 3×3 weight matrix.
fn weighted_product(a: &[Form; 3], b: &[Form; 3], w: &[[i64; 3]; 3]) -> Form {
    let mut acc = Form::zero(FULL8, 4);
    for i in 0..3 {
        for j in 0..3 {
            if w[i][j] != 0 {
                acc = acc.add(&a[i].wedge(&b[j]).scale(&Scalar::from_int(w[i][j])));
            }
        }
    }
    acc
}

const DELTA3: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
const ETA3: [[i64; 3]; 3] = [[-1, 0, 0], [0, -1, 0], [0, 0, 1]];

/// The five calibration-identity presentations of the Cayley forms.
#[derive(Clone, Debug)]
pub enum CalibrationIdentity {
    /// Positive-definite form from the 1234/0567 triples, +cross term.
    Riemannian,
    /// Split form from the 1234/0567 triples, −cross term.
    Split,
    /// Split form from the 3456/0127 triples with the (−,−,+) weight.
    SplitAlternate,
    /// Lorentzian form from the complex 4567/0123 triples, −cross term.
    Lorentzian,
    /// Stretched family in the adapted primed basis.
    Stretch(Rat),
}

/// Left side (the family form) and right side (the bivector presentation).
pub fn calibration_identity(which: &CalibrationIdentity) -> Result<(Form, Form), FamilyError> {
    let sixth_neg = Scalar::from_ratio(-1, 6);
    let pair = |a: CalibrationBlock, b: CalibrationBlock, w: &[[i64; 3]; 3], cross: i64| {
        let sa = calibration_two_forms(a);
        let sb = calibration_two_forms(b);
        weighted_product(&sa, &sa, w)
            .add(&weighted_product(&sb, &sb, w))
            .scale(&sixth_neg)
            .add(&weighted_product(&sa, &sb, w).scale(&Scalar::from_int(cross)))
    };
    match which {
        CalibrationIdentity::Riemannian => Ok((
            cayley_plus(),
            pair(CalibrationBlock::B1234, CalibrationBlock::B0567, &DELTA3, 1),
        )),
        CalibrationIdentity::Split => Ok((
            cayley_split(),
            pair(CalibrationBlock::B1234, CalibrationBlock::B0567, &DELTA3, -1),
        )),
        CalibrationIdentity::SplitAlternate => Ok((
            cayley_split(),
            pair(CalibrationBlock::B3456, CalibrationBlock::B0127, &ETA3, 1),
        )),
        CalibrationIdentity::Lorentzian => {
            let form = build_family(FamilyTag::Lorentzian, &FamilyParam::None)?.form;
            Ok((
                form,
                pair(CalibrationBlock::B4567, CalibrationBlock::B0123, &DELTA3, -1),
            ))
        }
        CalibrationIdentity::Stretch(t) => {
            let form = build_family(FamilyTag::RiemannianComplexTau, &FamilyParam::Stretch(t.clone()))?
                .form;
            Ok((form, stretched_adapted_form(t)))
        }
    }
}

/// Adapted-basis display of the stretched family: the primed directions are
/// e′¹=e⁵, e′²=e⁶, e′³=e⁷, e′⁴=e⁰ and the alternating symbol has ε₄₁₂₃ = +1.
fn stretched_adapted_form(t: &Rat) -> Form {
    let (cosh, sinh) = stretch_weights(t);
    let unprimed = [0usize, 1, 2, 3, 4]; // 1-based: e^I = e_I
    let primed = [0usize, 5, 6, 7, 0]; // 1-based: e′^I
    let eps = |i: usize, j: usize, k: usize, l: usize| -> i64 {
        // parity of (i j k l) as a permutation of (1 2 3 4), with ε₁₂₃₄ = −1
        let w = [i, j, k, l];
        let mut sign = -1i64;
        let mut seen = [false; 5];
        for &x in &w {
            if x < 1 || x > 4 || seen[x] {
                return 0;
            }
            seen[x] = true;
        }
        for a in 0..4 {
            for b in a + 1..4 {
                if w[a] > w[b] {
                    sign = -sign;
                }
            }
        }
        sign
    };
    let wedge4 = |a: usize, b: usize, c: usize, d: usize, coeff: Scalar| -> Form {
        Form::term(FULL8, &[a, b, c, d], coeff)
    };
    let mut acc = Form::zero(FULL8, 4);
    let c24 = |s: &Scalar| s * &Scalar::from_ratio(1, 24);
    let c6 = |s: &Scalar| s * &Scalar::from_ratio(1, 6);
    for i in 1..=4 {
        for j in 1..=4 {
            for k in 1..=4 {
                for l in 1..=4 {
                    let e = eps(i, j, k, l);
                    // (cosh/24)(ε e^{IJKL} + ε e′^{IJKL})
                    if e != 0 {
                        let w = Scalar::from_int(e);
                        acc = acc.add(&wedge4(
                            unprimed[i],
                            unprimed[j],
                            unprimed[k],
                            unprimed[l],
                            &c24(&cosh) * &w,
                        ));
                        acc = acc.add(&wedge4(
                            primed[i],
                            primed[j],
                            primed[k],
                            primed[l],
                            &c24(&cosh) * &w,
                        ));
                        // i(sinh/6)(ε e′^I e^J e^K e^L − ε e^I e′^J e′^K e′^L)
                        acc = acc.add(&wedge4(
                            primed[i],
                            unprimed[j],
                            unprimed[k],
                            unprimed[l],
                            (&c6(&sinh) * &w).times_i(),
                        ));
                        acc = acc.add(&wedge4(
                            unprimed[i],
                            primed[j],
                            primed[k],
                            primed[l],
                            -(&c6(&sinh) * &w).times_i(),
                        ));
                    }
                    // ¼(δ_IK δ_JL − δ_IL δ_JK − cosh·ε_{IJKL}) e^I e^J e′^K e′^L
                    let bracket = {
                        let d1 = i64::from(i == k && l == j);
                        let d2 = i64::from(i == l && k == j);
                        Scalar::from_rat(rat(d1 - d2, 1))
                    };
                    let coeff = &(&bracket - &(&cosh * &Scalar::from_int(e)))
                        * &Scalar::from_ratio(1, 4);
                    if !coeff.is_zero() {
                        acc = acc.add(&wedge4(unprimed[i], unprimed[j], primed[k], primed[l], coeff));
                    }
                }
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Metric compatibility and recovery
// ---------------------------------------------------------------------------

/// The pair density of a 4-form: D_{(ij),(kl)} = (1/6)·ι_jι_iΦ ∧ ι_lι_kΦ ∧ Φ,
/// an 8-form for each pair of direction pairs.
fn pair_density(phi: &Form, i: usize, j: usize, k: usize, l: usize) -> Form {
    let a = phi.interior_index(i).interior_index(j);
    let b = phi.interior_index(k).interior_index(l);
    a.wedge(&b).wedge(phi).scale(&Scalar::from_ratio(1, 6))
}

/// Φ(e_i, e_j, e_k, e_l) on coordinate directions.
pub(crate) fn quad_eval(phi: &Form, i: usize, j: usize, k: usize, l: usize) -> Scalar {
    let u = phi.universe();
    let args = [
        VectorX::basis(u, i),
        VectorX::basis(u, j),
        VectorX::basis(u, k),
        VectorX::basis(u, l),
    ];
    phi.eval(&[&args[0], &args[1], &args[2], &args[3]])
}

/// The scalar the pair density must carry against the volume form:
/// g_ik·g_jl − g_il·g_jk − (7/6)·Φ(e_i,e_j,e_k,e_l). The form term is the
/// traceless symmetric correction forced by polarizing the norm law
/// |u∧v|²·v = (1/6)·u⌟v⌟Φ ∧ u⌟v⌟Φ ∧ Φ off the diagonal; it vanishes whenever
/// the two index pairs coincide.
pub(crate) fn density_target(
    phi: &Form,
    g: &SymBilinear,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Scalar {
    let gram = &(g.entry(i, k) * g.entry(j, l)) - &(g.entry(i, l) * g.entry(j, k));
    &gram - &(&quad_eval(phi, i, j, k, l) * &Scalar::from_ratio(7, 6))
}

/// Solve for the volume form from the first coincident pair of direction
/// pairs with nonzero Gram coefficient: v = D_{(ij),(ij)} / (g_ii g_jj − g_ij²).
/// Coincident pairs carry no form term, so the quotient is the volume itself.
pub fn solve_volume(phi: &Form, g: &SymBilinear) -> Option<Form> {
    let dirs = indices_of_mask(phi.universe());
    for (i, j) in pairs(&dirs) {
        let gram = &(g.entry(i, i) * g.entry(j, j)) - &(g.entry(i, j) * g.entry(i, j));
        if gram.is_zero() {
            continue;
        }
        let d = pair_density(phi, i, j, i, j);
        if d.is_zero() {
            continue;
        }
        return Some(d.scale(&gram.inv().unwrap()));
    }
    None
}

fn pairs(dirs: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, &i) in dirs.iter().enumerate() {
        for &j in &dirs[a + 1..] {
            out.push((i, j));
        }
    }
    out
}

pub struct CompatReport {
    pub ok: bool,
    /// First failing ((i,j),(k,l)) pair of pairs.
    pub witness: Option<((usize, usize), (usize, usize))>,
}

/// Exact check of the pair-density law
/// (1/6)ι_jι_iΦ ∧ ι_lι_kΦ ∧ Φ = (g_ik g_jl − g_il g_jk − (7/6)Φ_ijkl)·v
/// over all pairs of direction pairs. On coincident pairs this is the norm
/// law |e_i∧e_j|²·v; the form term is its unique off-diagonal completion.
pub fn verify_metric_compat(phi: &Form, g: &SymBilinear, vol: &Form) -> CompatReport {
    let dirs = indices_of_mask(phi.universe());
    for (i, j) in pairs(&dirs) {
        for (k, l) in pairs(&dirs) {
            let lhs = pair_density(phi, i, j, k, l);
            let rhs = vol.scale(&density_target(phi, g, i, j, k, l));
            if lhs != rhs {
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

pub struct RecoverOptions {
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            max_iters: 200,
            tolerance: 1e-9,
        }
    }
}

pub struct RecoveredMetric {
    /// The compatible metric at the scale the density law dictates,
    /// sign fixed by g(e₀,e₀) > 0.
    pub g: MatF,
    /// Fitted volume coefficient of the compatible metric.
    pub scale: f64,
    pub residual: f64,
    pub iters: usize,
}

/// Numeric recovery of the conformal metric from a 4-form on all eight
/// directions, via the fixed point of g ↦ (1/7)·⟨density, g⁻¹⟩ with per-step
/// determinant normalization. Four branches (two density signs × two starting
/// signatures) are attempted; the best residual wins.
pub fn recover_metric(phi: &Form, opts: &RecoverOptions) -> Result<RecoveredMetric, FamilyError> {
    assert_eq!(phi.universe(), FULL8);
    // Complex 28×28 pair density against the top coefficient. The form term
    // of the density law contributes an imaginary part for complex inputs and
    // an antisymmetric part to the contraction below; both drop out of the
    // real symmetrized iteration, so only the real part drives the fixed
    // point while the full complex matrix enters the residual.
    let dirs: Vec<(usize, usize)> = pairs(&indices_of_mask(FULL8));
    let mut w = vec![Complex64::new(0.0, 0.0); 28 * 28];
    for (r, &(i, j)) in dirs.iter().enumerate() {
        for (c, &(k, l)) in dirs.iter().enumerate() {
            w[r * 28 + c] = pair_density(phi, i, j, k, l).coeff_mask(FULL8).to_c64();
        }
    }
    if w.iter().all(|z| z.norm() == 0.0) {
        return Err(FamilyError::DegenerateDensity);
    }
    let mut wr = MatF::zeros(28, 28);
    for (idx, z) in w.iter().enumerate() {
        wr.data[idx] = z.re;
    }
    // Normalize the density so the fixed-point metric has |det g| = 1:
    // Λ² of a unimodular 8-metric has determinant ±1, and the density scale
    // enters the 28×28 determinant with power 28.
    let detw = wr.det().abs();
    if detw == 0.0 {
        return Err(FamilyError::DegenerateDensity);
    }
    let m = wr.scale(1.0 / detw.powf(1.0 / 28.0));

    let pair_pos: Vec<Vec<usize>> = {
        // index of (min,max) pair in `dirs`
        let mut table = vec![vec![0usize; 8]; 8];
        for (r, &(i, j)) in dirs.iter().enumerate() {
            table[i][j] = r;
            table[j][i] = r;
        }
        table
    };
    let density_entry = |m: &MatF, i: usize, j: usize, k: usize, l: usize| -> f64 {
        if i == j || k == l {
            return 0.0;
        }
        let sign = if (i < j) == (k < l) { 1.0 } else { -1.0 };
        sign * m.at(pair_pos[i][j], pair_pos[k][l])
    };
    let mut quad = vec![Complex64::new(0.0, 0.0); 28 * 28];
    for (r, &(i, j)) in dirs.iter().enumerate() {
        for (c, &(k, l)) in dirs.iter().enumerate() {
            quad[r * 28 + c] = quad_eval(phi, i, j, k, l).to_c64();
        }
    }

    let mut best: Option<RecoveredMetric> = None;
    for flip in [1.0f64, -1.0] {
        let mf = m.scale(flip);
        for init in [
            MatF::identity(8),
            MatF::from_fn(8, 8, |r, c| {
                if r != c {
                    0.0
                } else if (1..=4).contains(&r) {
                    -1.0
                } else {
                    1.0
                }
            }),
        ] {
            let mut g = init.clone();
            let mut iters = 0usize;
            let mut converged = false;
            for it in 0..opts.max_iters {
                iters = it + 1;
                let Some(h) = g.inverse() else { break };
                let mut next = MatF::zeros(8, 8);
                for i in 0..8 {
                    for k in 0..=i {
                        let mut acc = 0.0;
                        for j in 0..8 {
                            for l in 0..8 {
                                // Symmetrized contraction: the form term of
                                // the density is antisymmetric here by slot
                                // exchange and cancels exactly.
                                acc += (density_entry(&mf, i, j, k, l)
                                    + density_entry(&mf, k, j, i, l))
                                    * h.at(j, l);
                            }
                        }
                        next.set(i, k, acc / 14.0);
                        next.set(k, i, acc / 14.0);
                    }
                }
                let d = next.det().abs();
                if d == 0.0 {
                    break;
                }
                let next = next.scale(1.0 / d.powf(1.0 / 8.0));
                let delta = next.max_abs_diff(&g);
                g = next;
                if delta < 1e-14 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                continue;
            }
            // The density law fixes two scales at once: with ĝ the unit-
            // determinant iterate and g = c·ĝ the compatible metric,
            //   W = v·c²·Λ²ĝ − (7/6)·v·quad,  v the volume coefficient of g.
            // Fit the two real coefficients by least squares, read c off
            // their ratio, and take the worst-entry mismatch as the residual.
            let mut gg = 0.0;
            let mut qq = 0.0;
            let mut gq = 0.0;
            let mut wg = 0.0;
            let mut wq = 0.0;
            let mut gram = vec![0.0f64; 28 * 28];
            for (r, &(i, j)) in dirs.iter().enumerate() {
                for (c, &(k, l)) in dirs.iter().enumerate() {
                    let idx = r * 28 + c;
                    let ge = g.at(i, k) * g.at(j, l) - g.at(i, l) * g.at(j, k);
                    gram[idx] = ge;
                    gg += ge * ge;
                    qq += quad[idx].norm_sqr();
                    gq += (quad[idx].conj() * ge).re;
                    wg += (w[idx] * ge).re;
                    wq += (w[idx] * quad[idx].conj()).re;
                }
            }
            let det2 = gg * qq - gq * gq;
            if det2 <= 0.0 {
                continue;
            }
            let va = (wg * qq - wq * gq) / det2;
            let vb = (wq * gg - wg * gq) / det2;
            let vol = -vb * 6.0 / 7.0;
            let c2 = if vol != 0.0 { va / vol } else { 0.0 };
            if c2 <= 0.0 {
                continue;
            }
            let mut residual = 0.0f64;
            for idx in 0..28 * 28 {
                residual = residual.max((w[idx] - gram[idx] * va - quad[idx] * vb).norm());
            }
            if best.as_ref().map_or(true, |b| residual < b.residual) {
                let g_true = g.scale(c2.sqrt());
                let g_signed = if g_true.at(0, 0) < 0.0 {
                    g_true.scale(-1.0)
                } else {
                    g_true
                };
                best = Some(RecoveredMetric {
                    g: g_signed,
                    scale: vol,
                    residual,
                    iters,
                });
            }
        }
    }
    match best {
        Some(b) if b.residual < opts.tolerance => Ok(b),
        Some(b) => Err(FamilyError::NoConvergence(b.residual)),
        None => Err(FamilyError::NoConvergence(f64::INFINITY)),
    }
}

// ---------------------------------------------------------------------------
// Calibrated planes
// ---------------------------------------------------------------------------

/// Value of a 4-form on a g-orthonormalized oriented basis of a 4-plane.
/// Gram–Schmidt runs over the scalar field; planes needing irrational
/// normalizers or containing null directions are rejected.
pub fn calibration_value(
    phi: &Form,
    plane: &[VectorX; 4],
    g: &SymBilinear,
) -> Result<Scalar, FamilyError> {
    let mut basis: Vec<VectorX> = Vec::with_capacity(4);
    for v in plane {
        let mut u = v.clone();
        for b in &basis {
            // subtract g(u,b)/g(b,b)·b ; after normalization g(b,b) = ±1
            let coef = &g.eval(&u, b) * &g.eval(b, b);
            u = u.sub(&b.scale(&coef));
        }
        let norm = g.eval(&u, &u);
        if norm.is_zero() || !norm.is_real() {
            return Err(FamilyError::BadPlane);
        }
        let abs = if norm.sign_real() < 0 { -norm.clone() } else { norm.clone() };
        let root = abs.sqrt_exact().ok_or(FamilyError::BadPlane)?;
        let u = u.scale(&root.inv().unwrap());
        basis.push(u);
    }
    let args: Vec<&VectorX> = basis.iter().collect();
    Ok(phi.eval(&args))
}

/// Does the form take the value ±target on the orthonormalized plane?
pub fn is_calibrated(
    phi: &Form,
    plane: &[VectorX; 4],
    g: &SymBilinear,
    target: &Scalar,
) -> Result<bool, FamilyError> {
    let v = calibration_value(phi, plane, g)?;
    Ok(&v == target || v == -target.clone())
}

// ---------------------------------------------------------------------------
// Orbit dimension and the Lorentzian mixed pair
// ---------------------------------------------------------------------------

/// Dimension of the GL(8,ℝ) orbit of a 4-form: the real rank of the 64
/// elementary generators acting through the Lie action.
pub fn orbit_dimension(phi: &Form) -> usize {
    let n_coords = keys_of(phi.universe(), phi.grade()).len() * 2;
    let dirs = indices_of_mask(phi.universe());
    let mut rows = Vec::with_capacity(dirs.len() * dirs.len());
    for &a in &dirs {
        for &b in &dirs {
            let gen = Endomorphism::elementary(phi.universe(), a, b);
            rows.push(lie_act(&gen, phi).flatten_real());
        }
    }
    let m = Mat::from_rows(rows);
    assert_eq!(m.cols, n_coords);
    m.rank()
}

/// The complex pure pair presenting the Lorentzian form as
/// ½(Ω_c + Ω_c′) + ½ω_c∧ω_c, with ψ_L = ψ_p + ψ_p′.
pub struct MixedPairData {
    pub psi_p: Spinor,
    pub psi_p_prime: Spinor,
    pub omega_c: Form,
    pub omega_big_c: Form,
    pub omega_big_c_prime: Form,
}

pub fn lorentzian_mixed_pair() -> MixedPairData {
    let gs = GammaSet::new(Signature::Split);
    let inv_sqrt2 = Scalar::new(Rat::zero(), rat(1, 2), Rat::zero(), Rat::zero());
    // ψ_p = (1/√2)(½(𝕀 + iẽ⁷) + (i/2)(ẽ⁴ + iẽ³))
    let mut psi_p = Spinor::zero(Signature::Split);
    psi_p.set(0, Scalar::from_ratio(1, 2));
    psi_p.set(7, Scalar::i_ratio(1, 2));
    psi_p.set(4, Scalar::i_ratio(1, 2));
    psi_p.set(3, Scalar::from_ratio(-1, 2));
    let psi_p = psi_p.scale(&inv_sqrt2);
    // ψ_p′ = (1/√2)(½(𝕀 − iẽ⁷) + (i/2)(ẽ⁴ − iẽ³))
    let mut psi_q = Spinor::zero(Signature::Split);
    psi_q.set(0, Scalar::from_ratio(1, 2));
    psi_q.set(7, Scalar::i_ratio(-1, 2));
    psi_q.set(4, Scalar::i_ratio(1, 2));
    psi_q.set(3, Scalar::from_ratio(1, 2));
    let psi_q = psi_q.scale(&inv_sqrt2);
    let two = Scalar::from_int(2);
    MixedPairData {
        omega_c: gs.bilinear(&psi_q, &psi_p, 2).scale(&two),
        omega_big_c: gs.bilinear(&psi_p, &psi_p, 4).scale(&two),
        omega_big_c_prime: gs.bilinear(&psi_q, &psi_q, 4).scale(&two),
        psi_p,
        psi_p_prime: psi_q,
    }
}

// ---------------------------------------------------------------------------
// The closed-form fibre over the positive-definite model
// ---------------------------------------------------------------------------

/// The Cayley form of the unit spinor (√(1−|α|²), α), α a real vector on the
/// imaginary directions:
///   Φ_ψ = e⁰∧C_ψ − *C_ψ with
///   C_ψ = (1−2|α|²)·C + 2α♭∧(α⌟C) − 2√(1−|α|²)·(α⌟*C),
///   *C_ψ = *C − 2α♭∧(α⌟*C) + 2√(1−|α|²)·α♭∧C.
pub fn closed_form_fibre(alpha: &VectorX) -> Result<Form, FamilyError> {
    if alpha.universe() != IMAG7 || !alpha.is_real() {
        return Err(FamilyError::BadFibrePoint);
    }
    let g7 = imaginary_metric(OctKind::Division);
    let c3 = imaginary_three_form(OctKind::Division);
    let c4 = c3.hodge(&g7)?;
    let nsq = g7.eval(alpha, alpha);
    let radicand = &Scalar::one() - &nsq;
    // |α| = 1 is the chart boundary: the identity component of the spinor
    // vanishes there and the displayed split into C, *C blocks degenerates.
    if radicand.sign_real() <= 0 {
        return Err(FamilyError::BadFibrePoint);
    }
    let root = radicand.sqrt_exact().ok_or(FamilyError::IrrationalRadius)?;
    let two = Scalar::from_int(2);
    let flat = g7.lower(alpha);
    let c_new = c3
        .scale(&(&Scalar::one() - &(&two * &nsq)))
        .add(&flat.wedge(&c3.interior(alpha)).scale(&two))
        .sub(&c4.interior(alpha).scale(&(&two * &root)));
    let c4_new = c4
        .sub(&flat.wedge(&c4.interior(alpha)).scale(&two))
        .add(&flat.wedge(&c3).scale(&(&two * &root)));
    let e0 = Form::basis_form(FULL8, &[0]);
    Ok(e0.wedge(&c_new.embed(FULL8)).sub(&c4_new.embed(FULL8)))
}
