use proptest::prelude::*;

use swivel::commutant::{assemble_swivel, random_swivel, verify_commutation, CommutantStructure, SwivelAssignment};
use swivel::instgen::random::{random_psd, random_unitary, rng_from_seed};
use swivel::instgen::{generate, hexfloat, GenKind, GenSpec};
use swivel::interp::{alpha_density, beta_density, verify_hirschman, QuadratureConfig};
use swivel::matcore::{diag_real, partial_trace, schatten_norm, schatten_pow, ComplexMatrix, PsdOperator, SchattenP, TensorShape};
use swivel::report::Status;
use swivel::swivelopt::{chain_norm, plain_product, ChainInstance};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn schatten_norm_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..5, p in 1.0f64..10.0) {
        let mut rng = rng_from_seed(seed);
        let a = random_psd(&mut rng, n) * random_unitary(&mut rng, n);
        let u = random_unitary(&mut rng, n);
        let v = random_unitary(&mut rng, n);
        let p = SchattenP::finite(p).unwrap();
        let lhs = schatten_norm(&(&u * &a * &v), p).unwrap();
        let rhs = schatten_norm(&a, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn schatten_norm_decreases_in_p(seed in any::<u64>(), n in 1usize..5, p in 1.0f64..8.0, dp in 0.0f64..8.0) {
        let a = random_psd(&mut rng_from_seed(seed), n);
        let small = schatten_norm(&a, SchattenP::finite(p).unwrap()).unwrap();
        let large = schatten_norm(&a, SchattenP::finite(p + dp).unwrap()).unwrap();
        prop_assert!(large <= small * (1.0 + 1e-12));
    }

    #[test]
    fn identity_swivels_give_the_plain_chain(seed in any::<u64>(), n in 1usize..4, l in 1usize..4, p in 1.0f64..9.0) {
        let inst = generate(&GenSpec::new(GenKind::Psd, n, l, seed)).unwrap();
        let ch = inst.chain().unwrap();
        let id = SwivelAssignment::identity(ch.structures());
        let via_swivels = chain_norm(&ch, &id, p).unwrap();
        let direct = schatten_pow(&plain_product(&ch, p), p).unwrap();
        prop_assert!((via_swivels - direct).abs() <= 1e-10 * direct.max(1e-300));
    }

    #[test]
    fn swivels_commute_with_degenerate_operators(seed in any::<u64>(), a in 0.1f64..5.0, b in 0.1f64..5.0) {
        let mut rng = rng_from_seed(seed);
        let u = random_unitary(&mut rng, 3);
        let m: ComplexMatrix = &u * diag_real(&[a, a, a + b]) * u.adjoint();
        let op = PsdOperator::new(&m).unwrap();
        let s = CommutantStructure::of(&op);
        prop_assert_eq!(s.block_sizes().iter().sum::<usize>(), 3);
        let v = assemble_swivel(&s, &random_swivel(&s, seed)).unwrap();
        prop_assert!(verify_commutation(&v, &op).unwrap() <= 1e-9);
        let defect = (&v * v.adjoint() - ComplexMatrix::identity(3, 3)).norm();
        prop_assert!(defect <= 1e-10);
    }

    #[test]
    fn hex_floats_round_trip_every_bit_pattern(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        let back = hexfloat::decode(&hexfloat::encode(x)).unwrap();
        if x.is_nan() {
            prop_assert!(back.is_nan());
        } else {
            prop_assert_eq!(back.to_bits(), bits);
        }
    }

    #[test]
    fn densities_are_even_positive_and_peak_at_zero(theta in 0.001f64..0.999, t in -40.0f64..40.0) {
        for f in [alpha_density, beta_density] {
            let v = f(theta, t).unwrap();
            prop_assert!(v >= 0.0);
            prop_assert_eq!(v, f(theta, -t).unwrap());
            prop_assert!(v <= f(theta, 0.0).unwrap());
        }
    }

    #[test]
    fn partial_trace_keeps_the_trace(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, which in 0usize..2) {
        let m = random_psd(&mut rng_from_seed(seed), a * b);
        let shape = TensorShape::new(vec![a, b]).unwrap();
        let r = partial_trace(&m, &shape, &[which]).unwrap();
        prop_assert!((r.trace() - m.trace()).norm() <= 1e-10 * m.trace().norm());
    }

    #[test]
    fn status_is_monotone_in_slack(s in -1.0f64..1.0, ds in 0.0f64..1.0, tol in 0.0f64..1e-3, err in 0.0f64..1e-3) {
        if Status::from_slack(s, tol, err) == Status::Holds {
            prop_assert_eq!(Status::from_slack(s + ds, tol, err), Status::Holds);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn hirschman_bound_holds_on_random_chains(
        seed in any::<u64>(),
        n in 2usize..4,
        l in 2usize..4,
        q in 1.0f64..3.0,
        extra in 0.1f64..6.0,
    ) {
        let inst = generate(&GenSpec::new(GenKind::Pd, n, l, seed)).unwrap();
        let ch: ChainInstance = inst.chain().unwrap();
        let rep = verify_hirschman(&ch, q + extra, q, &QuadratureConfig::default(), 1e-7).unwrap();
        prop_assert_eq!(rep.status, Status::Holds, "slack {}", rep.slack);
    }
}
