mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewable_core::decompose::{decompose, rank, CoefficientSet, DEFAULT_RANK_TOL};
use skewable_core::equivalence::preserves_skew_space;
use skewable_core::exterior::{wedge, FormBasis, FormMatrix};
use skewable_core::linalg::{checked_inverse, Matrix};

fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..7).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
    })
}

fn form_matrix() -> impl Strategy<Value = FormMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(n, m)| {
        let slots = n * (n - 1) / 2;
        prop::collection::vec(prop::collection::vec(-5.0f64..5.0, m * m), slots).prop_map(
            move |terms| {
                let terms = terms
                    .into_iter()
                    .map(|v| Matrix::from_row_slice(m, m, &v))
                    .collect();
                FormMatrix::new(FormBasis::new(n).unwrap(), m, terms).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn wedge_is_antisymmetric((u, v) in vec_pair()) {
        let basis = FormBasis::new(u.len()).unwrap();
        let uv = wedge(&u, &v, basis).unwrap();
        let vu = wedge(&v, &u, basis).unwrap();
        for (a, b) in uv.coeffs().iter().zip(vu.coeffs()) {
            prop_assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn entries_reproduce_term_matrices(f in form_matrix()) {
        for (k, s) in f.terms().iter().enumerate() {
            for i in 0..f.size() {
                for j in 0..f.size() {
                    prop_assert_eq!(f.entry(i, j).unwrap().coeffs()[k], s[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn decompose_then_rebuild_is_identity(f in form_matrix()) {
        let set = decompose(&f);
        prop_assert_eq!(set.matrices(), f.terms());
        prop_assert_eq!(set.to_form_matrix(f.basis()).unwrap(), f);
    }

    #[test]
    fn conjugation_roundtrip(f in form_matrix(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_conditioned(&mut rng, f.size(), 1e3, false);
        let u_inv = checked_inverse(&u).unwrap();
        let back = f.conjugate(&u).unwrap().conjugate(&u_inv).unwrap();
        let scale = f.terms().iter().map(|s| s.amax()).fold(1.0, f64::max);
        for (a, b) in back.terms().iter().zip(f.terms()) {
            prop_assert!((a - b).amax() <= 1e-10 * scale, "{}", (a - b).amax());
        }
    }

    #[test]
    fn rank_survives_conjugation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = 2 + (seed % 3) as usize;
        let mats = common::exact::integer_instance(&mut rng, m);
        let set = CoefficientSet::from_matrices(m, mats.iter().map(common::exact::to_matrix).collect()).unwrap();
        let u = common::random_conditioned(&mut rng, m, 1e3, false);
        let u_inv = checked_inverse(&u).unwrap();
        let conj = CoefficientSet::from_matrices(m, set.matrices().iter().map(|s| &u_inv * s * &u).collect()).unwrap();
        prop_assert_eq!(
            rank(&set, DEFAULT_RANK_TOL).unwrap().rank,
            rank(&conj, DEFAULT_RANK_TOL).unwrap().rank
        );
    }

    #[test]
    fn skew_preservation_ignores_scale(seed in any::<u64>(), c in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = 2 + (seed % 4) as usize;
        let a = if seed % 2 == 0 {
            common::random_orthogonal(&mut rng, m)
        } else {
            common::random_conditioned(&mut rng, m, 20.0, false)
        };
        let p1 = preserves_skew_space(&a, 1e-8).unwrap();
        let p2 = preserves_skew_space(&(&a * c), 1e-8).unwrap();
        prop_assert_eq!(p1.preserved, p2.preserved);
    }
}
