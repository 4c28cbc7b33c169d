//! Real 16×16 gamma matrices for the metrics (8,0) and (4,4), their spinors,
//! and the form-valued bilinears built from them.
//!
//! The 16-dimensional spinor space splits into two 8-dimensional chiral
//! halves, each a copy of the matching octonion algebra; the generators are
//! block off-diagonal, Γ₀ = [[0,𝕀],[𝕀,0]] and Γ_a = [[0,−E_a],[E_a,0]] with
//! E_a built from signed 8×8 units. Bilinears ⟨ψ, Γ_{a₁}…Γ_{a_k} φ⟩ assemble
//! into exterior forms on the eight directions; the pairing ⟨,⟩ is bilinear
//! (never conjugated), so complex spinors produce complex forms.

use crate::exterior::{keys_of, indices_of_mask, Endomorphism, Form, SymBilinear, FULL8};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Metric signature of the vector representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    /// Positive definite (8,0).
    Euclidean,
    /// Split (4,4): (+,−,−,−,−,+,+,+) on directions 0…7.
    Split,
}

impl Signature {
    pub fn eta_signs(&self) -> [i64; 8] {
        match self {
            Signature::Euclidean => [1; 8],
            Signature::Split => [1, -1, -1, -1, -1, 1, 1, 1],
        }
    }

    /// Metric on the eight vector directions.
    pub fn vector_metric(&self) -> SymBilinear {
        SymBilinear::from_diag(FULL8, &self.eta_signs())
    }
}

/// 8×8 unit: +1 at (i,j), −1 at (j,i).
fn asym(i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(8, 8);
    m.set(i, j, Scalar::one());
    m.set(j, i, -Scalar::one());
    m
}

/// 8×8 unit: +1 at both (i,j) and (j,i).
fn sym(i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(8, 8);
    m.set(i, j, Scalar::one());
    m.set(j, i, Scalar::one());
    m
}

fn combine(parts: &[(i64, Mat)]) -> Mat {
    let mut acc = Mat::zeros(8, 8);
    for (c, m) in parts {
        acc = acc.add(&m.scale(&Scalar::from_int(*c)));
    }
    acc
}

/// The seven 8×8 blocks E_a. In the euclidean signature all are
/// antisymmetric (E_a² = −𝕀); in the split signature the first four are
/// symmetric (E_a² = +𝕀) while E₅, E₆, E₇ are shared with the euclidean set.
fn e_blocks(sig: Signature) -> Vec<Mat> {
    let e5 = combine(&[(-1, asym(0, 5)), (1, asym(1, 4)), (1, asym(2, 3)), (-1, asym(6, 7))]);
    let e6 = combine(&[(-1, asym(0, 6)), (-1, asym(1, 3)), (1, asym(2, 4)), (1, asym(5, 7))]);
    let e7 = combine(&[(-1, asym(0, 7)), (1, asym(1, 2)), (1, asym(3, 4)), (-1, asym(5, 6))]);
    match sig {
        Signature::Euclidean => vec![
            combine(&[(-1, asym(0, 1)), (1, asym(2, 7)), (-1, asym(3, 6)), (1, asym(4, 5))]),
            combine(&[(-1, asym(0, 2)), (-1, asym(1, 7)), (1, asym(3, 5)), (1, asym(4, 6))]),
            combine(&[(-1, asym(0, 3)), (1, asym(1, 6)), (-1, asym(2, 5)), (1, asym(4, 7))]),
            combine(&[(-1, asym(0, 4)), (-1, asym(1, 5)), (-1, asym(2, 6)), (-1, asym(3, 7))]),
            e5,
            e6,
            e7,
        ],
        Signature::Split => vec![
            combine(&[(1, sym(0, 1)), (1, sym(2, 7)), (-1, sym(3, 6)), (1, sym(4, 5))]),
            combine(&[(1, sym(0, 2)), (-1, sym(1, 7)), (1, sym(3, 5)), (1, sym(4, 6))]),
            combine(&[(1, sym(0, 3)), (1, sym(1, 6)), (-1, sym(2, 5)), (1, sym(4, 7))]),
            combine(&[(1, sym(0, 4)), (-1, sym(1, 5)), (-1, sym(2, 6)), (-1, sym(3, 7))]),
            e5,
            e6,
            e7,
        ],
    }
}

/// A 16-component spinor over ℚ(√2)(i). The upper eight components are the
/// positive-chirality half and are identified with octonion components
/// (unit direction first).
#[derive(Clone, PartialEq)]
pub struct Spinor {
    pub sig: Signature,
    comps: Vec<Scalar>, // length 16
}

impl Spinor {
    pub fn new(sig: Signature, comps: Vec<Scalar>) -> Self {
        assert_eq!(comps.len(), 16);
        Spinor { sig, comps }
    }

    pub fn zero(sig: Signature) -> Self {
        Spinor::new(sig, vec![Scalar::zero(); 16])
    }

    /// Positive-chirality spinor with the given octonion components.
    pub fn from_upper(sig: Signature, upper: &[Scalar]) -> Self {
        assert_eq!(upper.len(), 8);
        let mut c = upper.to_vec();
        c.extend(vec![Scalar::zero(); 8]);
        Spinor::new(sig, c)
    }

    /// The unit spinor: octonion 1 in the positive-chirality half.
    pub fn unit(sig: Signature) -> Self {
        Spinor::upper_basis(sig, 0)
    }

    /// Positive-chirality basis spinor for octonion direction j.
    pub fn upper_basis(sig: Signature, j: usize) -> Self {
        let mut s = Spinor::zero(sig);
        s.comps[j] = Scalar::one();
        s
    }

    pub fn comp(&self, i: usize) -> &Scalar {
        &self.comps[i]
    }

    pub fn set(&mut self, i: usize, v: Scalar) {
        self.comps[i] = v;
    }

    pub fn components(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn upper(&self) -> &[Scalar] {
        &self.comps[..8]
    }

    pub fn lower(&self) -> &[Scalar] {
        &self.comps[8..]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.comps.iter().all(Scalar::is_real)
    }

    /// Positive chirality: supported on the upper eight components.
    pub fn is_positive_chirality(&self) -> bool {
        self.lower().iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Spinor) -> Spinor {
        assert_eq!(self.sig, other.sig);
        Spinor::new(
            self.sig,
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Spinor) -> Spinor {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> Spinor {
        Spinor::new(self.sig, self.comps.iter().map(|c| c * s).collect())
    }

    /// Componentwise complex conjugate.
    pub fn conj(&self) -> Spinor {
        Spinor::new(self.sig, self.comps.iter().map(Scalar::conj).collect())
    }
}

impl std::fmt::Debug for Spinor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..16)
            .filter(|&i| !self.comps[i].is_zero())
            .map(|i| format!("({})s{}", self.comps[i], i))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A generator ¼[Γ_a, Γ_b] together with its vector representation
/// M_{ab}: e_c ↦ e_a η_{bc} − e_b η_{ac}.
pub struct SpinGenerator {
    pub a: usize,
    pub b: usize,
    pub spin: Mat,
    pub vector: Endomorphism,
}

/// Basis of the infinitesimal spin stabilizer of a spinor, as coefficient
/// vectors over the 28 generators (a < b in lexicographic order).
pub struct Stabilizer {
    pub dim: usize,
    pub basis: Vec<Vec<Scalar>>,
}

/// The eight gamma matrices of one signature, with their spinor pairing.
pub struct GammaSet {
    pub sig: Signature,
    gammas: Vec<Mat>,     // 8 of 16×16
    pairing: Vec<Scalar>, // diagonal of the spinor pairing, length 16
}

impl GammaSet {
    pub fn new(sig: Signature) -> Self {
        let blocks = e_blocks(sig);
        let mut gammas = Vec::with_capacity(8);
        // Γ₀ = [[0, 𝕀], [𝕀, 0]]
        let mut g0 = Mat::zeros(16, 16);
        for i in 0..8 {
            g0.set(i, 8 + i, Scalar::one());
            g0.set(8 + i, i, Scalar::one());
        }
        gammas.push(g0);
        // Γ_a = [[0, −E_a], [E_a, 0]]
        for e in &blocks {
            let mut g = Mat::zeros(16, 16);
            for r in 0..8 {
                for c in 0..8 {
                    let v = e.at(r, c);
                    if !v.is_zero() {
                        g.set(r, 8 + c, -v.clone());
                        g.set(8 + r, c, v.clone());
                    }
                }
            }
            gammas.push(g);
        }
        let pairing = match sig {
            Signature::Euclidean => vec![Scalar::one(); 16],
            Signature::Split => {
                let eta = sig.eta_signs();
                (0..16).map(|i| Scalar::from_int(eta[i % 8])).collect()
            }
        };
        GammaSet { sig, gammas, pairing }
    }

    pub fn gamma(&self, a: usize) -> &Mat {
        &self.gammas[a]
    }

    /// The 8×8 building block of Γ_a for a ≥ 1, read off its lower-left
    /// block; Γ₀'s blocks are the identity.
    pub fn e_block(&self, a: usize) -> Mat {
        assert!((1..8).contains(&a), "blocks are defined for Γ₁…Γ₇");
        Mat::from_fn(8, 8, |r, c| self.gammas[a].at(8 + r, c).clone())
    }

    pub fn apply(&self, a: usize, s: &Spinor) -> Spinor {
        assert_eq!(self.sig, s.sig);
        Spinor::new(self.sig, self.gammas[a].apply(s.components()))
    }

    /// Γ_{a₁}Γ_{a₂}…Γ_{a_k} ψ — rightmost factor acts first.
    pub fn apply_word(&self, word: &[usize], s: &Spinor) -> Spinor {
        let mut acc = s.clone();
        for &a in word.iter().rev() {
            acc = self.apply(a, &acc);
        }
        acc
    }

    /// The invariant bilinear pairing ⟨ψ, φ⟩ (no conjugation).
    pub fn inner(&self, psi: &Spinor, phi: &Spinor) -> Scalar {
        assert_eq!(self.sig, psi.sig);
        assert_eq!(self.sig, phi.sig);
        let mut acc = Scalar::zero();
        for i in 0..16 {
            let (a, b) = (psi.comp(i), phi.comp(i));
            if !a.is_zero() && !b.is_zero() {
                acc += &(&(a * &self.pairing[i]) * b);
            }
        }
        acc
    }

    /// The grade-k bilinear form: coefficient ⟨ψ, Γ_{a₁}…Γ_{a_k} φ⟩ on
    /// e^{a₁}∧…∧e^{a_k}, indices increasing.
    pub fn bilinear(&self, psi: &Spinor, phi: &Spinor, k: u8) -> Form {
        assert!(
            psi.is_positive_chirality() && phi.is_positive_chirality(),
            "bilinears are defined between positive-chirality spinors"
        );
        let mut out = Form::zero(FULL8, k);
        for mask in keys_of(FULL8, k) {
            let word = indices_of_mask(mask);
            let c = self.inner(psi, &self.apply_word(&word, phi));
            out.add_term(mask, c);
        }
        out
    }

    /// All 28 generators ¼[Γ_a, Γ_b], a < b, with their vector actions.
    pub fn spin_generators(&self) -> Vec<SpinGenerator> {
        let eta = self.sig.eta_signs();
        let quarter = Scalar::from_ratio(1, 4);
        let mut out = Vec::with_capacity(28);
        for a in 0..8 {
            for b in a + 1..8 {
                let spin = self.gammas[a].commutator(&self.gammas[b]).scale(&quarter);
                let mut vector = Endomorphism::zero(FULL8);
                // M_{ab} e_c = e_a η_{bc} − e_b η_{ac}
                vector.set_entry(a, b, Scalar::from_int(eta[b]));
                vector.set_entry(b, a, Scalar::from_int(-eta[a]));
                out.push(SpinGenerator { a, b, spin, vector });
            }
        }
        out
    }

    /// Dimension and basis of {X ∈ 𝔰𝔭𝔦𝔫 : X·ψ = 0}, computed over the real
    /// span of the 28 generators by splitting each component equation into
    /// real and imaginary parts.
    pub fn stabilizer(&self, psi: &Spinor) -> Stabilizer {
        assert!(!psi.is_zero(), "the zero spinor is stabilized by everything");
        let gens = self.spin_generators();
        let cols: Vec<Vec<Scalar>> = gens
            .iter()
            .map(|g| g.spin.apply(psi.components()))
            .collect();
        let mut m = Mat::zeros(32, 28);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..16 {
                m.set(2 * i, j, col[i].re());
                m.set(2 * i + 1, j, col[i].im());
            }
        }
        let basis = m.kernel();
        Stabilizer {
            dim: basis.len(),
            basis,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_relations_hold() {
        for sig in [Signature::Euclidean, Signature::Split] {
            let gs = GammaSet::new(sig);
            let eta = sig.eta_signs();
            for a in 0..8 {
                for b in 0..8 {
                    let ab = gs.gamma(a).mul(gs.gamma(b));
                    let ba = gs.gamma(b).mul(gs.gamma(a));
                    let sum = ab.add(&ba);
                    let expect = if a == b {
                        Mat::identity(16).scale(&Scalar::from_int(2 * eta[a]))
                    } else {
                        Mat::zeros(16, 16)
                    };
                    assert_eq!(sum, expect, "anticommutator ({a},{b}) in {sig:?}");
                }
            }
        }
    }

    #[test]
    fn unit_spinor_bilinear_has_negative_1234_component() {
        let gs = GammaSet::new(Signature::Euclidean);
        let unit = Spinor::unit(Signature::Euclidean);
        let phi4 = gs.bilinear(&unit, &unit, 4);
        assert_eq!(phi4.coeff(&[1, 2, 3, 4]), -Scalar::one());
        assert_eq!(phi4.coeff(&[0, 5, 6, 7]), Scalar::one());
    }
}
