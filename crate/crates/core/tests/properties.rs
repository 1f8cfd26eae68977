//! Property tests over randomly seeded instances.

use holevo::channels::{apply_to_ensemble, channel_from_dilation, StinespringDilation};
use holevo::entropy::{holevo_chi, shannon_entropy, von_neumann_entropy};
use holevo::harness::random_ensemble;
use holevo::measurements::{mutual_information, Povm};
use holevo::random::haar_unitary;
use holevo::{DensityMatrix, Ensemble, Rng};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    2usize..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_is_bounded_by_shannon_and_log_dim(seed in any::<u64>(), d in dims()) {
        let e = random_ensemble(d, 5, &mut Rng::new(seed, 0));
        let chi = holevo_chi(&e).unwrap().chi;
        prop_assert!(chi >= -1e-12);
        prop_assert!(chi <= shannon_entropy(e.probs()).unwrap() + 1e-9);
        prop_assert!(chi <= (d as f64).log2() + 1e-9);
    }

    #[test]
    fn chi_ignores_member_order(seed in any::<u64>(), d in dims(), shift in 0usize..5) {
        let e = random_ensemble(d, 5, &mut Rng::new(seed, 0));
        let k = e.len();
        let order: Vec<usize> = (0..k).map(|i| (i + shift) % k).rev().collect();
        let permuted = Ensemble::new(
            order.iter().map(|&i| e.probs()[i]).collect(),
            order.iter().map(|&i| e.states()[i].clone()).collect(),
        )
        .unwrap();
        prop_assert_eq!(holevo_chi(&e).unwrap().chi, holevo_chi(&permuted).unwrap().chi);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in dims()) {
        let mut rng = Rng::new(seed, 1);
        let rho = random_ensemble(d, 2, &mut rng).mix();
        let u = haar_unitary(d, &mut rng);
        let rotated = DensityMatrix::new(u.conjugate(rho.matrix()).unwrap().hermitian_part()).unwrap();
        let diff = von_neumann_entropy(&rho).unwrap() - von_neumann_entropy(&rotated).unwrap();
        prop_assert!(diff.abs() < 1e-9);
    }

    #[test]
    fn partial_traces_commute(seed in any::<u64>(), a in 1usize..=3, b in 1usize..=3, c in 1usize..=3) {
        let dims = [a, b, c];
        let rho = random_ensemble(a * b * c, 2, &mut Rng::new(seed, 2)).mix();
        let direct = rho.partial_trace(&dims, &[0]).unwrap();
        let via_ab = rho.partial_trace(&dims, &[0, 1]).unwrap().partial_trace(&[a, b], &[0]).unwrap();
        let via_ac = rho.partial_trace(&dims, &[0, 2]).unwrap().partial_trace(&[a, c], &[0]).unwrap();
        prop_assert!(direct.matrix().max_abs_diff(via_ab.matrix()) < 1e-12);
        prop_assert!(direct.matrix().max_abs_diff(via_ac.matrix()) < 1e-12);
    }

    #[test]
    fn channels_commute_with_mixing(seed in any::<u64>(), d in 2usize..=3, dim_env in 1usize..=4) {
        let mut rng = Rng::new(seed, 3);
        let e = random_ensemble(d, 4, &mut rng);
        let ch = channel_from_dilation(&StinespringDilation::haar(d, dim_env, &mut rng)).unwrap();
        let after = apply_to_ensemble(&ch, &e).unwrap().mix();
        let before = ch.apply(&e.mix()).unwrap();
        prop_assert!(after.matrix().max_abs_diff(before.matrix()) < 1e-10);
    }

    #[test]
    fn measured_information_never_exceeds_chi(seed in any::<u64>(), d in dims(), extra in 0usize..4) {
        let mut rng = Rng::new(seed, 4);
        let e = random_ensemble(d, 5, &mut rng);
        let povm = Povm::random(d, d + extra, &mut rng).unwrap();
        let mi = mutual_information(&e, &povm).unwrap();
        prop_assert!(mi >= -1e-12);
        prop_assert!(mi <= holevo_chi(&e).unwrap().chi + 1e-8);
    }
}
