//! Fibre calculus of the spinor-square map: eigenspace resolution of the
//! grade-4 bilinears, the para-complex decomposition of the transverse-pair
//! fibre tangent space, dimension counts, and first-order metric
//! compatibility along every fibre direction.

use cayley_core::clifford::{GammaSet, Signature, Spinor};
use cayley_core::deform::{
    decompose_wrt_k, eigenspace_bilinear, fibre_rank, first_order_metric_compat,
    isometry_orbit_fibre_intersection, k_leg_components, lorentzian_component_ranks,
    lorentzian_fibre_tangent, riemannian_fibre_jet, riemannian_fibre_tangent, DeformError,
    FibrePerturbation, PairPerturbation,
};
use cayley_core::exterior::{Form, SymBilinear, VectorX, FULL8, IMAG7};
use cayley_core::families::{cayley_plus, seed_lorentzian, seed_real_pair};
use cayley_core::spinor::structure_from_real_pair;
use cayley_core::{rat, Rat, Scalar};

fn q(p: i64, d: i64) -> Scalar {
    Scalar::from_ratio(p, d)
}

/// Positive-chirality split spinor with upper components c_{i+4} = ±c_i.
fn paired_probe(c: &[Scalar; 4], sign: i64) -> Spinor {
    let mut s = Spinor::zero(Signature::Split);
    for (i, ci) in c.iter().enumerate() {
        s.set(i, ci.clone());
        let mirrored = if sign >= 0 { ci.clone() } else { -ci.clone() };
        s.set(i + 4, mirrored);
    }
    s
}

fn perturbation(a: Rat, xi: [Rat; 6], eta: [Rat; 6]) -> PairPerturbation {
    let mut p = PairPerturbation::zero();
    p.a = a;
    p.xi = xi;
    p.eta = eta;
    p
}

#[test]
fn eigenspace_resolution_holds_for_generic_complex_probes() {
    let (psi_plus, psi_minus) = seed_real_pair();
    let coeff_sets: [[Scalar; 4]; 2] = [
        [
            q(2, 3),
            &q(-1, 2) + &Scalar::i_ratio(3, 5),
            Scalar::i_ratio(-4, 7),
            &q(5, 1) + &Scalar::i_ratio(1, 3),
        ],
        [
            Scalar::i_ratio(1, 2),
            q(-3, 4),
            &q(1, 6) + &Scalar::i_ratio(-2, 1),
            q(7, 5),
        ],
    ];
    for base in [&psi_plus, &psi_minus] {
        for sign in [1i64, -1] {
            for coeffs in &coeff_sets {
                let probe = paired_probe(coeffs, sign);
                let form = eigenspace_bilinear(base, &probe)
                    .expect("paired probe lies in a single eigenspace");
                assert_eq!(form.grade(), 4);
                assert_eq!(form.universe(), FULL8);
            }
        }
    }
}

#[test]
fn eigenspace_resolution_recovers_the_pair_invariants() {
    let gs = GammaSet::new(Signature::Split);
    let (psi_plus, psi_minus) = seed_real_pair();
    let pair = structure_from_real_pair(&gs, &psi_plus, &psi_minus)
        .expect("seed pair is pure and transverse");
    let two = Scalar::from_int(2);
    let self_plus = eigenspace_bilinear(&psi_plus, &psi_plus).unwrap();
    assert_eq!(self_plus.scale(&two), pair.omega_plus);
    let self_minus = eigenspace_bilinear(&psi_minus, &psi_minus).unwrap();
    assert_eq!(self_minus.scale(&two), pair.omega_minus);
    let cross = eigenspace_bilinear(&psi_plus, &psi_minus).unwrap();
    let half_rr = pair
        .omega_r
        .wedge(&pair.omega_r)
        .scale(&Scalar::from_ratio(1, 2));
    assert_eq!(cross.scale(&two), half_rr);
}

#[test]
fn probes_outside_a_single_eigenspace_are_rejected() {
    let (psi_plus, _) = seed_real_pair();
    let mut mixed = Spinor::zero(Signature::Split);
    mixed.set(0, Scalar::one());
    mixed.set(4, Scalar::one());
    mixed.set(1, q(1, 2));
    mixed.set(5, q(-1, 2));
    assert!(matches!(
        eigenspace_bilinear(&psi_plus, &mixed),
        Err(DeformError::NotEigenvector)
    ));
    let euclidean = Spinor::unit(Signature::Euclidean);
    assert!(matches!(
        eigenspace_bilinear(&psi_plus, &euclidean),
        Err(DeformError::NotEigenvector)
    ));
}

#[test]
fn lorentzian_tangents_match_their_closed_assemblies_on_a_grid() {
    // The tangent constructor itself compares the gamma-matrix bilinear with
    // the closed eigenframe assembly and panics on any mismatch, so sweeping
    // a grid of parameter values exercises the identity coefficient by
    // coefficient.
    for p in PairPerturbation::basis() {
        lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(p))
            .expect("basis direction is a fibre tangent");
    }
    let base = perturbation(
        rat(1, 2),
        [rat(1, 1), rat(-1, 3), rat(0, 1), rat(2, 1), rat(3, 5), rat(-2, 1)],
        [rat(-1, 2), rat(4, 1), rat(1, 7), rat(0, 1), rat(-1, 1), rat(3, 1)],
    );
    let values = [rat(-2, 1), rat(1, 3), rat(5, 4)];
    for slot in 0..13 {
        for v in &values {
            let mut p = base.clone();
            match slot {
                0 => p.a = v.clone(),
                1..=6 => p.xi[slot - 1] = v.clone(),
                _ => p.eta[slot - 7] = v.clone(),
            }
            lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(p))
                .expect("grid point is a fibre tangent");
        }
    }
}

#[test]
fn decomposition_recovers_the_fibre_coordinates() {
    let gs = GammaSet::new(Signature::Split);
    let (psi_plus, psi_minus) = seed_real_pair();
    let pair = structure_from_real_pair(&gs, &psi_plus, &psi_minus).unwrap();
    let p = perturbation(
        rat(2, 3),
        [rat(1, 1), rat(0, 1), rat(-3, 2), rat(1, 5), rat(2, 1), rat(-1, 1)],
        [rat(0, 1), rat(-2, 7), rat(1, 1), rat(4, 3), rat(0, 1), rat(5, 2)],
    );
    let tangent = lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(p.clone())).unwrap();
    let dec = decompose_wrt_k(&tangent, &pair.k).expect("tangent decomposes");
    assert_eq!(dec.sum(), tangent);
    assert_eq!(dec.re_part().add(&dec.im_part()), tangent);
    assert_eq!(dec.params.len(), 13);
    assert_eq!(dec.params[0], Scalar::from_rat(p.a.clone()));
    for k in 0..6 {
        assert_eq!(dec.params[1 + k], Scalar::from_rat(p.xi[k].clone()));
        assert_eq!(dec.params[7 + k], Scalar::from_rat(p.eta[k].clone()));
    }
    // Real and imaginary parts of the decomposition agree with the form's own
    // real/imaginary split.
    assert_eq!(dec.re_part(), tangent.re());
    assert_eq!(dec.im_part(), tangent.im().times_i());
}

#[test]
fn scalar_direction_spans_the_top_line() {
    let gs = GammaSet::new(Signature::Split);
    let (psi_plus, psi_minus) = seed_real_pair();
    let pair = structure_from_real_pair(&gs, &psi_plus, &psi_minus).unwrap();
    let p = perturbation(rat(3, 1), std::array::from_fn(|_| rat(0, 1)), std::array::from_fn(|_| rat(0, 1)));
    let tangent = lorentzian_fibre_tangent(&FibrePerturbation::Lorentzian(p)).unwrap();
    let dec = decompose_wrt_k(&tangent, &pair.k).unwrap();
    assert!(dec.re_part().is_zero());
    assert!(dec.im_plus.is_zero());
    assert!(dec.im_minus.is_zero());
    let expected = pair
        .omega_plus
        .add(&pair.omega_minus)
        .scale(&Scalar::i_ratio(3, 1));
    assert_eq!(dec.im_scalar, expected);
    // The scalar piece sits in the pure leg types of the involution.
    let legs = k_leg_components(&dec.im_scalar, &pair.k).unwrap();
    assert!(legs.keys().all(|&t| t == (4, 0) || t == (0, 4)));
}

#[test]
fn forms_outside_the_tangent_span_are_rejected() {
    let gs = GammaSet::new(Signature::Split);
    let (psi_plus, psi_minus) = seed_real_pair();
    let pair = structure_from_real_pair(&gs, &psi_plus, &psi_minus).unwrap();
    let stray = Form::basis_form(FULL8, &[0, 1, 2, 3]);
    assert!(matches!(
        decompose_wrt_k(&stray, &pair.k),
        Err(DeformError::NotFibreTangent)
    ));
    let wrong_grade = Form::basis_form(FULL8, &[0, 1, 2]);
    assert!(matches!(
        decompose_wrt_k(&wrong_grade, &pair.k),
        Err(DeformError::NotFibreTangent)
    ));
}

#[test]
fn component_ranks_and_fibre_dimensions() {
    assert_eq!(lorentzian_component_ranks(), (12, 13, 13));
    assert_eq!(
        fibre_rank(&FibrePerturbation::riemannian_basis()).unwrap(),
        7
    );
    assert_eq!(
        fibre_rank(&FibrePerturbation::lorentzian_basis()).unwrap(),
        13
    );
}

#[test]
fn every_riemannian_direction_preserves_the_metric_to_first_order() {
    let g8 = SymBilinear::euclidean(FULL8);
    let phi = cayley_plus();
    for p in FibrePerturbation::riemannian_basis() {
        let t = p.tangent_form().unwrap();
        let report = first_order_metric_compat(&phi, &t, &g8);
        assert!(report.ok, "witness {:?}", report.witness);
    }
}

#[test]
fn every_lorentzian_direction_preserves_the_metric_to_first_order() {
    let gs = GammaSet::new(Signature::Split);
    let eta = Signature::Split.vector_metric();
    let seed = seed_lorentzian();
    let phi = gs.bilinear(&seed, &seed, 4);
    for p in FibrePerturbation::lorentzian_basis() {
        let t = p.tangent_form().unwrap();
        let report = first_order_metric_compat(&phi, &t, &eta);
        assert!(report.ok, "witness {:?}", report.witness);
    }
}

#[test]
fn a_non_tangent_deformation_breaks_first_order_compatibility() {
    let g8 = SymBilinear::euclidean(FULL8);
    let phi = cayley_plus();
    // Rescaling a single monomial is not metric-preserving to first order.
    let bad = Form::basis_form(FULL8, &[0, 1, 2, 3]);
    let report = first_order_metric_compat(&phi, &bad, &g8);
    assert!(!report.ok);
    assert!(report.witness.is_some());
}

#[test]
fn isometry_orbit_coincides_with_the_fibre_tangent_space() {
    assert_eq!(isometry_orbit_fibre_intersection(), (13, 13, 13));
}

#[test]
fn riemannian_jet_is_anchored_and_linear() {
    let zero_jet = riemannian_fibre_jet(&VectorX::zero(IMAG7)).unwrap();
    assert_eq!(zero_jet.value, cayley_plus());
    assert!(zero_jet.deriv.is_zero());
    let two = Scalar::from_int(2);
    for j in 1..8 {
        let y = VectorX::basis(IMAG7, j);
        let jet = riemannian_fibre_jet(&y).unwrap();
        assert_eq!(jet.value, cayley_plus());
        let displayed = riemannian_fibre_tangent(&y, &cayley_plus());
        assert_eq!(jet.deriv, displayed.scale(&two));
    }
    let y1 = VectorX::from_components(IMAG7, &[(1, q(3, 1)), (4, q(-1, 2))]);
    let y2 = VectorX::from_components(IMAG7, &[(2, q(2, 3)), (4, q(1, 1)), (7, q(-5, 4))]);
    let j1 = riemannian_fibre_jet(&y1).unwrap();
    let j2 = riemannian_fibre_jet(&y2).unwrap();
    let jsum = riemannian_fibre_jet(&y1.add(&y2)).unwrap();
    assert_eq!(jsum.deriv, j1.deriv.add(&j2.deriv));
    let jscaled = riemannian_fibre_jet(&y2.scale(&q(-5, 3))).unwrap();
    assert_eq!(jscaled.deriv, j2.deriv.scale(&q(-5, 3)));
}

#[test]
fn euclidean_spinor_route_matches_the_displayed_tangent() {
    let gs = GammaSet::new(Signature::Euclidean);
    let unit = Spinor::unit(Signature::Euclidean);
    assert_eq!(gs.bilinear(&unit, &unit, 4), cayley_plus());
    for j in 1..8 {
        let y = VectorX::basis(IMAG7, j);
        let y_spinor = Spinor::upper_basis(Signature::Euclidean, j);
        assert_eq!(
            gs.bilinear(&unit, &y_spinor, 4),
            riemannian_fibre_tangent(&y, &cayley_plus())
        );
    }
}
