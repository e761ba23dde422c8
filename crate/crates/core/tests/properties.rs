use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realbun_core::oracle::{monomial_counts, rank_by_row_space};
use realbun_core::series::one_plus_range;
use realbun_core::surface::preserves_symplectic_form;
use realbun_core::{
    adapted_basis, classify, cross_check, dickson_invariant, normal_form_matrix, omega_bso_presentation,
    product_closed_form, rankr_presentation, series_mul, series_of, type1_involution_matrix,
    type2_involution_matrix, BitMatrix, CurveInvariants, CurveType, ModuliParams, RoleKind,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adapted_basis_recovers_normal_form(g in 1usize..=16, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let s = ((g as f64) * frac).floor() as usize;
        let p = BitMatrix::random_invertible(2 * g, &mut ChaCha8Rng::seed_from_u64(seed));
        let conj = normal_form_matrix(g, s).unwrap().conjugate_by(&p).unwrap();
        prop_assert_eq!(dickson_invariant(&conj), s);
        let basis = adapted_basis(&conj).unwrap();
        prop_assert!(basis.verify(&conj).unwrap());
        prop_assert_eq!(basis.vectors_with_role(RoleKind::Alpha).len(), s);
        prop_assert_eq!(basis.vectors_with_role(RoleKind::Gamma).len(), g - s);
    }

    #[test]
    fn involution_models_match_classification(g in 2u32..=14, n in 1u32..=15, a in 0u32..=1) {
        let Ok(d) = classify(g, n, a) else { return Ok(()) };
        let s = match d.curve_type {
            CurveType::TypeI => type1_involution_matrix(d.g_prime, n).unwrap(),
            CurveType::TypeII if n < g => type2_involution_matrix(g, n).unwrap(),
            _ => return Ok(()),
        };
        prop_assert!(preserves_symplectic_form(s.matrix()));
        prop_assert_eq!(Some(dickson_invariant(&s) as u32), d.dickson);
    }

    #[test]
    fn cross_check_holds_off_the_acceptance_grid(gp in 0u32..=6, n in 1u32..=8, r in 1u32..=10, cap in 0usize..=48) {
        prop_assert!(cross_check(gp, n, r, cap).unwrap().passed());
    }

    #[test]
    fn presentation_series_is_multiplicative(gp in 0u32..=2, n in 1u32..=3, r in 1u32..=4) {
        let p = rankr_presentation(gp, n, r).unwrap();
        let so = omega_bso_presentation(r + 1);
        let whole = series_of(&p.tensor(&so).unwrap(), 24).unwrap();
        let parts = series_mul(&series_of(&p, 24).unwrap(), &series_of(&so, 24).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn bundle_degree_is_metadata(gp in 0u32..=3, n in 1u32..=4, r in 1u32..=5, d1 in -50i64..50, d2 in -50i64..50) {
        let Ok(curve) = CurveInvariants::new(2 * gp + n - 1, n, 0) else { return Ok(()) };
        let p1 = ModuliParams::new(curve, r, d1).unwrap().presentation();
        let p2 = ModuliParams::new(curve, r, d2).unwrap().presentation();
        prop_assert_eq!(p1.generators, p2.generators);
    }
}

#[test]
fn omega_bso_series_beyond_sixteen() {
    for r in 17..=24 {
        let lhs = series_of(&omega_bso_presentation(r), 80).unwrap();
        let rhs = product_closed_form(&one_plus_range(1, r - 1, 1), 80).unwrap();
        assert_eq!(lhs, rhs, "r = {r}");
    }
}

#[test]
fn rank_two_presentation_matches_enumeration() {
    let p = rankr_presentation(0, 2, 2).unwrap();
    assert_eq!(series_of(&p, 10).unwrap().coefficients(), monomial_counts(&p, 10).as_slice());
    let m = BitMatrix::from_rows(&[[1u8, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]]).unwrap();
    assert_eq!(m.rank(), rank_by_row_space(&m));
}
