use mhbesov::algebra::{
    apply_box, apply_n, apply_r, box_eigenvalue, exact, harmonic_decompose, reconstruct, sphere_inner_product,
    sphere_laplacian_eigenvalue, tangential_fields, tangential_sum_of_squares, BigradedPolynomial, Coeff, ExactComplex,
};
use mhbesov::mh::{random_bihomogeneous, random_harmonic};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn harmonic(seed: u64, n: usize, p: u32, q: u32) -> BigradedPolynomial<ExactComplex> {
    random_harmonic(&mut ChaCha8Rng::seed_from_u64(seed), n, p, q).unwrap()
}

fn polynomial(seed: u64, n: usize, p: u32, q: u32, terms: usize) -> BigradedPolynomial<ExactComplex> {
    random_bihomogeneous(&mut ChaCha8Rng::seed_from_u64(seed), n, p, q, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn harmonics_are_eigenfunctions(seed: u64, n in 2usize..5, p in 0u32..5, q in 0u32..5) {
        let h = harmonic(seed, n, p, q);
        let lambda = box_eigenvalue(n as u32, p, q) as i64;
        prop_assert_eq!(apply_box(&h), h.scale_int(lambda));
        let sigma = sphere_laplacian_eigenvalue(n as u32, p, q) as i64;
        prop_assert_eq!(tangential_sum_of_squares(&h, true).unwrap(), h.scale_int(sigma));
        prop_assert_eq!(tangential_sum_of_squares(&h, false).unwrap(), h.scale_int(lambda));
    }

    #[test]
    fn fields_are_skew_or_self_adjoint(seed: u64, n in 2usize..4, p in 0u32..4, q in 0u32..4) {
        // ⟨X P, Q⟩ = ⟨P, X* Q⟩ on the sphere, with Q of the bidegree X P lands in
        let a = polynomial(seed, n, p, q, 4);
        for x in tangential_fields(n, true) {
            let xa = x.apply(&a).unwrap();
            let Some((p2, q2)) = xa.bidegree() else { continue };
            let b = polynomial(seed ^ 0x9e37_79b9, n, p2, q2, 4);
            let (sign, adj) = x.adjoint();
            let lhs = sphere_inner_product(&xa, &b).unwrap();
            let rhs = sphere_inner_product(&a, &adj.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs * ExactComplex::from_integer(sign), "{:?}", x);
        }
    }

    #[test]
    fn box_commutes_with_r(seed: u64, n in 2usize..4, p in 0u32..4, q in 0u32..4) {
        let a = polynomial(seed, n, p, q, 5);
        prop_assert_eq!(apply_box(&apply_r(&a)), apply_r(&apply_box(&a)));
    }

    #[test]
    fn degree_operator_commutes_with_tangential_fields(seed: u64, n in 2usize..4, p in 0u32..4, q in 0u32..4) {
        let a = polynomial(seed, n, p, q, 5);
        for x in tangential_fields(n, true) {
            prop_assert_eq!(apply_n(&x.apply(&a).unwrap()), x.apply(&apply_n(&a)).unwrap(), "{:?}", x);
        }
    }

    #[test]
    fn harmonics_of_different_bidegree_are_orthogonal(
        seed: u64, n in 2usize..4, a in (0u32..4, 0u32..4), b in (0u32..4, 0u32..4),
    ) {
        prop_assume!(a != b);
        let f = harmonic(seed, n, a.0, a.1);
        let g = harmonic(seed.wrapping_add(1), n, b.0, b.1);
        prop_assert_eq!(sphere_inner_product(&f, &g).unwrap(), exact(0, 0));
        prop_assert!(sphere_inner_product(&f, &f).unwrap() != exact(0, 0));
    }

    #[test]
    fn decomposition_reconstructs(seed: u64, n in 1usize..4, p in 0u32..5, q in 0u32..5, terms in 1usize..6) {
        let a = polynomial(seed, n, p, q, terms);
        let parts = harmonic_decompose(&a).unwrap();
        for (j, h) in &parts {
            prop_assert!(apply_box(h) == h.scale_int(box_eigenvalue(n as u32, p - j, q - j) as i64));
        }
        prop_assert_eq!(reconstruct(n, &parts), a);
    }
}
