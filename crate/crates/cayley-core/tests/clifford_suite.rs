//! The gamma-matrix models of the two eight-dimensional signatures: the
//! Clifford relation, the displayed building blocks, spinor bilinears and
//! their pinned values, conjugation pairings, and the spin generators with
//! their vector representation.

use cayley_core::clifford::{GammaSet, Signature, SpinGenerator, Spinor};
use cayley_core::exterior::{Endomorphism, VectorX, FULL8};
use cayley_core::families::{cayley_plus, cayley_split, seed_lorentzian, seed_stretched};
use cayley_core::linalg::Mat;
use cayley_core::{rat, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BOTH: [Signature; 2] = [Signature::Euclidean, Signature::Split];

fn rand_scalar(rng: &mut StdRng) -> Scalar {
    let part = |rng: &mut StdRng| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    Scalar::new(part(rng), rat(0, 1), part(rng), rat(0, 1))
}

fn rand_spinor(rng: &mut StdRng, sig: Signature) -> Spinor {
    Spinor::new(sig, (0..16).map(|_| rand_scalar(rng)).collect())
}

fn rand_plus_spinor(rng: &mut StdRng, sig: Signature) -> Spinor {
    let upper: Vec<Scalar> = (0..8).map(|_| rand_scalar(rng)).collect();
    Spinor::from_upper(sig, &upper)
}

/// Σ v_a Γ_a ψ for a vector with the given components.
fn apply_vector(gs: &GammaSet, v: &[Scalar; 8], psi: &Spinor) -> Spinor {
    let mut acc = Spinor::zero(psi.sig);
    for (a, c) in v.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&gs.apply(a, psi).scale(c));
        }
    }
    acc
}

/// 8×8 unit with +1 at (i,j) and −1 at (j,i).
fn asym_unit(i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(8, 8);
    m.set(i, j, Scalar::one());
    m.set(j, i, -Scalar::one());
    m
}

/// 8×8 unit with +1 at both (i,j) and (j,i).
fn sym_unit(i: usize, j: usize) -> Mat {
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

#[test]
fn anticommutators_reproduce_the_metric_on_all_pairs() {
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let eta = sig.eta_signs();
        for a in 0..8 {
            for b in a..8 {
                let sum = gs
                    .gamma(a)
                    .mul(gs.gamma(b))
                    .add(&gs.gamma(b).mul(gs.gamma(a)));
                let expect = if a == b {
                    Mat::identity(16).scale(&Scalar::from_int(2 * eta[a]))
                } else {
                    Mat::zeros(16, 16)
                };
                assert_eq!(sum, expect, "pair ({a},{b}) in {sig:?}");
            }
        }
    }
}

#[test]
fn building_blocks_match_the_displayed_unit_combinations() {
    let gs = GammaSet::new(Signature::Euclidean);
    let expected_e1 = combine(&[
        (-1, asym_unit(0, 1)),
        (1, asym_unit(2, 7)),
        (-1, asym_unit(3, 6)),
        (1, asym_unit(4, 5)),
    ]);
    assert_eq!(gs.e_block(1), expected_e1, "first euclidean block");

    let gss = GammaSet::new(Signature::Split);
    let expected_s1 = combine(&[
        (1, sym_unit(0, 1)),
        (1, sym_unit(2, 7)),
        (-1, sym_unit(3, 6)),
        (1, sym_unit(4, 5)),
    ]);
    assert_eq!(gss.e_block(1), expected_s1, "first split block");

    // Block squares fix the signature: all negative in the definite model,
    // the first four positive in the split one.
    let minus_id = Mat::identity(8).scale(&-Scalar::one());
    for a in 1..8 {
        assert_eq!(gs.e_block(a).mul(&gs.e_block(a)), minus_id, "E{a}²");
        let split_square = gss.e_block(a).mul(&gss.e_block(a));
        if a <= 4 {
            assert_eq!(split_square, Mat::identity(8), "Ẽ{a}²");
        } else {
            assert_eq!(split_square, minus_id, "Ẽ{a}²");
        }
    }
}

#[test]
fn gamma_zero_swaps_the_chiral_halves() {
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let swapped = gs.apply(0, &Spinor::unit(sig));
        for i in 0..16 {
            let expect = if i == 8 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(*swapped.comp(i), expect, "component {i} in {sig:?}");
        }
    }
}

#[test]
fn vector_action_squares_to_the_quadratic_form() {
    let mut rng = StdRng::seed_from_u64(20260815);
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let g = sig.vector_metric();
        for _ in 0..100 {
            let comps: [Scalar; 8] = std::array::from_fn(|_| {
                Scalar::from_rat(rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
            });
            let entries: Vec<(usize, Scalar)> =
                comps.iter().cloned().enumerate().collect();
            let vx = VectorX::from_components(FULL8, &entries);
            let psi = rand_spinor(&mut rng, sig);
            let twice = apply_vector(&gs, &comps, &apply_vector(&gs, &comps, &psi));
            assert_eq!(twice, psi.scale(&g.eval(&vx, &vx)), "{sig:?}");
        }
    }
}

#[test]
fn unit_spinor_bilinears_pin_the_cayley_forms() {
    let gs = GammaSet::new(Signature::Euclidean);
    let unit = Spinor::unit(Signature::Euclidean);
    let phi4 = gs.bilinear(&unit, &unit, 4);
    assert_eq!(phi4, cayley_plus());
    assert_eq!(phi4.coeff(&[1, 2, 3, 4]), -Scalar::one());
    assert_eq!(phi4.coeff(&[0, 5, 6, 7]), Scalar::one());

    let gss = GammaSet::new(Signature::Split);
    let units = Spinor::unit(Signature::Split);
    assert_eq!(gss.bilinear(&units, &units, 4), cayley_split());

    for (gset, u) in [(&gs, &unit), (&gss, &units)] {
        assert!(gset.bilinear(u, u, 2).is_zero(), "two-form square of 𝕀");
        assert_eq!(gset.bilinear(u, u, 0).coeff(&[]), Scalar::one());
    }
}

#[test]
fn single_spinor_bilinears_vanish_between_grades_zero_and_four() {
    let mut rng = StdRng::seed_from_u64(7);
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        for _ in 0..10 {
            let psi = rand_plus_spinor(&mut rng, sig);
            for k in 1..=3u8 {
                assert!(
                    gs.bilinear(&psi, &psi, k).is_zero(),
                    "grade {k} in {sig:?}"
                );
            }
        }
    }
}

#[test]
fn permuted_gamma_strings_change_by_the_permutation_sign() {
    let mut rng = StdRng::seed_from_u64(99);
    for trial in 0..50 {
        let sig = BOTH[trial % 2];
        let gs = GammaSet::new(sig);
        let k = rng.gen_range(2..=4usize);
        let mut indices: Vec<usize> = (0..8).collect();
        // Partial Fisher–Yates: the first k entries are a random word.
        for i in 0..k {
            let j = rng.gen_range(i..8);
            indices.swap(i, j);
        }
        let word: Vec<usize> = indices[..k].to_vec();
        let mut shuffled = word.clone();
        for i in (1..k).rev() {
            let j = rng.gen_range(0..=i);
            shuffled.swap(i, j);
        }
        let mut sign = 1i64;
        for i in 0..k {
            for j in i + 1..k {
                let pi = word.iter().position(|&x| x == shuffled[i]).unwrap();
                let pj = word.iter().position(|&x| x == shuffled[j]).unwrap();
                if pi > pj {
                    sign = -sign;
                }
            }
        }
        let psi = rand_spinor(&mut rng, sig);
        let phi = rand_spinor(&mut rng, sig);
        let base = gs.inner(&psi, &gs.apply_word(&word, &phi));
        let permuted = gs.inner(&psi, &gs.apply_word(&shuffled, &phi));
        assert_eq!(
            permuted,
            base.scale(&rat(sign, 1)),
            "word {word:?} vs {shuffled:?} in {sig:?}"
        );
    }
}

#[test]
fn conjugation_is_real_equivariant_and_pins_the_pairings() {
    let unit = Spinor::unit(Signature::Euclidean);
    assert_eq!(unit.conj(), unit);

    let mut rng = StdRng::seed_from_u64(31);
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let psi = rand_spinor(&mut rng, sig);
        assert_eq!(psi.conj().conj(), psi);
        let c = Scalar::new(rat(2, 1), rat(0, 1), rat(-1, 3), rat(0, 1));
        assert_eq!(psi.scale(&c).conj(), psi.conj().scale(&c.conj()));
        for a in 0..8 {
            assert_eq!(gs.apply(a, &psi).conj(), gs.apply(a, &psi.conj()));
        }
    }

    // ⟨ψ̂_τ, ψ_τ⟩ runs through the stretch weight (t² + t⁻²)/2 = 17/8 at t=2;
    // the lorentzian seed pairs its conjugate to zero.
    let gs = GammaSet::new(Signature::Euclidean);
    let tau = seed_stretched(Signature::Euclidean, &rat(2, 1)).unwrap();
    assert_eq!(gs.inner(&tau.conj(), &tau), Scalar::from_ratio(17, 8));
    let gss = GammaSet::new(Signature::Split);
    let lor = seed_lorentzian();
    assert!(gss.inner(&lor.conj(), &lor).is_zero());
}

/// Signed lookup of a generator: M_ab = −M_ba, M_aa = 0.
fn gen_term<'a, T>(
    gens: &'a [SpinGenerator],
    pick: impl Fn(&'a SpinGenerator) -> T,
    a: usize,
    b: usize,
) -> Option<(T, i64)> {
    if a == b {
        return None;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
    gens.iter()
        .find(|g| g.a == lo && g.b == hi)
        .map(|g| (pick(g), sign))
}

#[test]
fn spin_and_vector_generators_share_the_orthogonal_commutation_relations() {
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let eta = sig.eta_signs();
        let gens = gs.spin_generators();
        for x in &gens {
            for y in &gens {
                // [M_ab, M_cd] = η_bc M_ad − η_ac M_bd − η_bd M_ac + η_ad M_bc
                let (a, b, c, d) = (x.a, x.b, y.a, y.b);
                let mut spin_expect = Mat::zeros(16, 16);
                let mut vec_expect = Endomorphism::zero(FULL8);
                let delta = |i: usize, j: usize| if i == j { eta[i] } else { 0 };
                for (coef, p, q) in [
                    (delta(b, c), a, d),
                    (-delta(a, c), b, d),
                    (-delta(b, d), a, c),
                    (delta(a, d), b, c),
                ] {
                    if coef == 0 {
                        continue;
                    }
                    if let Some((m, sign)) = gen_term(&gens, |g| &g.spin, p, q) {
                        spin_expect = spin_expect.add(&m.scale(&Scalar::from_int(coef * sign)));
                    }
                    if let Some((m, sign)) = gen_term(&gens, |g| &g.vector, p, q) {
                        vec_expect = vec_expect.add(&m.scale(&Scalar::from_int(coef * sign)));
                    }
                }
                assert_eq!(
                    x.spin.commutator(&y.spin),
                    spin_expect,
                    "spin bracket ({a}{b},{c}{d}) in {sig:?}"
                );
                assert_eq!(
                    x.vector.mat().commutator(y.vector.mat()),
                    *vec_expect.mat(),
                    "vector bracket ({a}{b},{c}{d}) in {sig:?}"
                );
            }
        }
    }
}

#[test]
fn spin_generators_are_compatible_with_the_vector_action() {
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let eta = sig.eta_signs();
        for g in gs.spin_generators() {
            for c in 0..8 {
                let bracket = g.spin.commutator(gs.gamma(c));
                let mut expect = Mat::zeros(16, 16);
                if g.b == c {
                    expect = expect.add(&gs.gamma(g.a).scale(&Scalar::from_int(eta[c])));
                }
                if g.a == c {
                    expect = expect.sub(&gs.gamma(g.b).scale(&Scalar::from_int(eta[c])));
                }
                assert_eq!(bracket, expect, "({},{};{c}) in {sig:?}", g.a, g.b);
            }
        }
    }
}

#[test]
fn generators_annihilating_the_zero_direction_span_twenty_one() {
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let gens = gs.spin_generators();
        let e0 = VectorX::basis(FULL8, 0);
        let mut m = Mat::zeros(8, 28);
        for (j, g) in gens.iter().enumerate() {
            let image = g.vector.apply(&e0);
            for i in 0..8 {
                m.set(i, j, image.get(i));
            }
        }
        assert_eq!(m.kernel().len(), 21, "{sig:?}");
    }
}

#[test]
fn pairing_is_infinitesimally_spin_invariant() {
    let mut rng = StdRng::seed_from_u64(55);
    for sig in BOTH {
        let gs = GammaSet::new(sig);
        let psi = rand_spinor(&mut rng, sig);
        let phi = rand_spinor(&mut rng, sig);
        for g in gs.spin_generators() {
            let a_psi = Spinor::new(sig, g.spin.apply(psi.components()));
            let a_phi = Spinor::new(sig, g.spin.apply(phi.components()));
            let sum = &gs.inner(&a_psi, &phi) + &gs.inner(&psi, &a_phi);
            assert!(sum.is_zero(), "generator ({},{}) in {sig:?}", g.a, g.b);
        }
    }
}

#[test]
fn stabilizer_dimensions_count_the_symmetry_algebras() {
    let gs = GammaSet::new(Signature::Euclidean);
    assert_eq!(gs.stabilizer(&Spinor::unit(Signature::Euclidean)).dim, 21);
    let tau = seed_stretched(Signature::Euclidean, &rat(2, 1)).unwrap();
    assert_eq!(gs.stabilizer(&tau).dim, 15);

    let gss = GammaSet::new(Signature::Split);
    assert_eq!(gss.stabilizer(&Spinor::unit(Signature::Split)).dim, 21);
    assert_eq!(gss.stabilizer(&seed_lorentzian()).dim, 15);

    // The returned coefficient vectors really annihilate the spinor.
    let stab = gss.stabilizer(&seed_lorentzian());
    let gens = gss.spin_generators();
    for coeffs in &stab.basis {
        let mut image = vec![Scalar::zero(); 16];
        for (c, g) in coeffs.iter().zip(&gens) {
            if c.is_zero() {
                continue;
            }
            for (i, v) in g.spin.apply(seed_lorentzian().components()).iter().enumerate() {
                image[i] += &(c * v);
            }
        }
        assert!(image.iter().all(Scalar::is_zero), "basis vector must annihilate");
    }
}
