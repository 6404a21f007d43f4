use proptest::prelude::*;
use ultraspec::gelfand::{gelfand, gelfand_inverse, BElement};
use ultraspec::json;
use ultraspec::measure::{spectral_integral, ClopenAlgebra, ProjectionValuedMeasure, StepFunction};
use ultraspec::operator::Operator;
use ultraspec::sample::{self, SampleRng};
use ultraspec::space::WeightedSpace;
use ultraspec::theorems::{pvm_from_rep, rep_from_pvm, spectral_decompose_diagonal};
use ultraspec::PadicScalar;

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn setup(seed: u64, p: usize, dim: usize) -> (SampleRng, WeightedSpace) {
    let mut rng = sample::rng(seed);
    let space = sample::space(&mut rng, PRIMES[p], 12, dim);
    (rng, space)
}

fn values(rng: &mut SampleRng, space: &WeightedSpace, n: usize) -> Vec<PadicScalar> {
    (0..n)
        .map(|_| sample::scalar(rng, space.prime(), space.precision(), -2..=2, 0.2))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_isometric_involution(seed in any::<u64>(), p in 0..4usize, dim in 1..6usize) {
        let (mut rng, space) = setup(seed, p, dim);
        let u = sample::operator(&mut rng, &space);
        let v = sample::operator(&mut rng, &space);
        prop_assert_eq!(u.adjoint_omega().adjoint_omega(), u.clone());
        prop_assert_eq!(u.adjoint_omega().op_norm(), u.op_norm());
        prop_assert_eq!(
            u.compose(&v).unwrap().adjoint_omega(),
            v.adjoint_omega().compose(&u.adjoint_omega()).unwrap()
        );
        prop_assert!(u.compose(&v).unwrap().op_norm() <= u.op_norm().mul(v.op_norm()));
    }

    #[test]
    fn adjoint_satisfies_form_identity(seed in any::<u64>(), p in 0..4usize, dim in 1..6usize) {
        let (mut rng, space) = setup(seed, p, dim);
        let u = sample::operator(&mut rng, &space);
        let x = sample::vector(&mut rng, &space);
        let y = sample::vector(&mut rng, &space);
        let lhs = u.apply(&x).unwrap().f_omega(&y).unwrap();
        let rhs = x.f_omega(&u.adjoint_omega().apply(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gelfand_is_isometric_and_invertible(seed in any::<u64>(), p in 0..4usize, dim in 2..7usize) {
        let (mut rng, space) = setup(seed, p, dim);
        let u: BElement = sample::belement(&mut rng, &space);
        let t = gelfand(&u);
        prop_assert_eq!(t.sup_norm(), u.b_norm());
        prop_assert_eq!(u.to_operator().op_norm(), u.b_norm());
        prop_assert_eq!(gelfand_inverse(&t).unwrap(), u.clone());
        let sq = u.mul(&u).unwrap();
        prop_assert_eq!(sq.b_norm(), u.b_norm().square());
    }

    #[test]
    fn integral_is_a_norm_preserving_homomorphism(
        seed in any::<u64>(),
        p in 0..4usize,
        dim in 1..6usize,
        atoms in 1..5usize,
        conjugate in any::<bool>(),
    ) {
        let (mut rng, space) = setup(seed, p, dim);
        let algebra = ClopenAlgebra::numbered("x", atoms).unwrap();
        let pvm: ProjectionValuedMeasure = sample::pvm(&mut rng, &algebra, &space, conjugate);
        let f = StepFunction::from_atom_values(&algebra, values(&mut rng, &space, atoms)).unwrap();
        let g = StepFunction::from_atom_values(&algebra, values(&mut rng, &space, atoms)).unwrap();
        let zero = space.zero_scalar();
        let (if_, ig) = (spectral_integral(&f, &pvm).unwrap(), spectral_integral(&g, &pvm).unwrap());
        prop_assert_eq!(spectral_integral(&f.mul(&g, zero).unwrap(), &pvm).unwrap(), if_.compose(&ig).unwrap());
        prop_assert_eq!(spectral_integral(&f.add(&g, zero).unwrap(), &pvm).unwrap(), if_.add(&ig).unwrap());
        if !conjugate {
            prop_assert_eq!(if_.op_norm(), f.ess_sup_norm(&pvm).unwrap());
        }
        prop_assert_eq!(pvm_from_rep(&rep_from_pvm(&pvm)).unwrap(), pvm);
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), p in 0..4usize, dim in 1..8usize, pool in 1..4usize) {
        let (mut rng, space) = setup(seed, p, dim);
        let b = sample::diagonal_with_repeats(&mut rng, &space, pool);
        let d = spectral_decompose_diagonal(&b).unwrap();
        prop_assert!(d.support.len() <= pool.min(dim));
        prop_assert_eq!(d.reconstruct(), b);
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), p in 0..4usize, dim in 1..5usize) {
        let (mut rng, space) = setup(seed, p, dim);
        let u = sample::operator(&mut rng, &space);
        let text = json::to_string(&u);
        let back: Operator = json::from_str(&text).unwrap();
        prop_assert_eq!(json::to_string(&back), text);
        prop_assert_eq!(back, u);
        let w: WeightedSpace = json::from_str(&json::to_string(&space)).unwrap();
        prop_assert_eq!(w, space);
    }
}
