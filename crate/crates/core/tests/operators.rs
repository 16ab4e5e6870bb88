mod common;

use common::{matrix, prime, vector};
use num_rational::BigRational;
use num_traits::Zero;
use padic_cauchy::exp_type::{
    alpha_norm, e_alpha_member, estimate_type, norm_sequence, type_of, Membership, TypeMethod,
};
use padic_cauchy::operators::LinearOperator;
use padic_cauchy::oracle::{
    mat_vec, random_closed_form_instance, random_matrix, random_rational, rational_valuation,
    seeded_rng,
};
use padic_cauchy::padic_arith::{LogNorm, Valuation};
use padic_cauchy::spaces::{BanachElement, Vector};
use proptest::prelude::*;
use rand::Rng;

const PREC: u32 = 64;

fn vec_norm(xs: &[BigRational], p: u64) -> LogNorm {
    LogNorm::max_of(
        &xs.iter()
            .map(|q| match rational_valuation(q, prime(p)) {
                Valuation::PlusInfinity => LogNorm::Zero,
                Valuation::Finite(v) => LogNorm::from_int(-v),
            })
            .collect::<Vec<_>>(),
    )
}

fn random_vector<R: Rng>(rng: &mut R, p: u64, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| random_rational(rng, prime(p), -2, 3, 0.2)).collect()
}

fn basis(p: u64, n: usize, j: usize) -> Vector {
    let xs: Vec<BigRational> = (0..n)
        .map(|i| BigRational::from_integer(((i == j) as i64).into()))
        .collect();
    vector(&xs, prime(p), PREC)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn operator_norm_bounds_every_image(
        seed in any::<u64>(),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        n in 1usize..=4,
    ) {
        let mut rng = seeded_rng(seed);
        let rows = random_matrix(&mut rng, prime(p), n, -2, 3);
        let xs = random_vector(&mut rng, p, n);
        let a = matrix(&rows, prime(p), PREC);
        let x = vector(&xs, prime(p), PREC);
        let bound = a.operator_norm_bound().mul(&x.norm());
        prop_assert!(a.apply(&x).unwrap().certified_norm() <= bound.clone());
        prop_assert!(vec_norm(&mat_vec(&rows, &xs), p) <= bound);
        let w = a.apply(&basis(p, n, a.norm_witness())).unwrap();
        prop_assert_eq!(w.certified_norm(), a.operator_norm_bound());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iterate_growth_is_bounded_by_the_operator_norm(
        seed in any::<u64>(),
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in 1usize..=3,
    ) {
        let mut rng = seeded_rng(seed);
        let a = matrix(&random_matrix(&mut rng, prime(p), n, -1, 2), prime(p), PREC);
        let x = vector(&random_vector(&mut rng, p, n), prime(p), PREC);
        prop_assume!(!x.is_exact_zero());
        let Ok(seq) = norm_sequence(&a, &x, 20) else { return Ok(()) };
        let op = a.operator_norm_bound();
        let e0 = seq.norms()[0].clone();
        for (k, e) in seq.norms().iter().enumerate() {
            prop_assert!(*e <= e0.mul(&op.pow(k as u64)), "k = {}", k);
        }
        let est = type_of(&a, &x, 20, 5).unwrap();
        prop_assert!(est.sigma <= op);
    }

    #[test]
    fn closed_form_types_match_and_are_shift_invariant(
        seed in any::<u64>(),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
    ) {
        let mut rng = seeded_rng(seed);
        let inst = random_closed_form_instance(&mut rng, prime(p), 4, 3);
        let a = matrix(&inst.rows, inst.prime, PREC);
        let x = vector(&inst.x, inst.prime, PREC);
        let want = LogNorm::from_int(inst.sigma_exponent);
        let est = type_of(&a, &x, 16, 4).unwrap();
        prop_assert_eq!(&est.sigma, &want);
        prop_assert_eq!(est.method, TypeMethod::ExactClosedForm);
        let window = estimate_type(&norm_sequence(&a, &x, 16).unwrap(), 4).unwrap();
        prop_assert_eq!(&window.sigma, &want);
        let ax = a.apply(&x).unwrap();
        prop_assert_eq!(type_of(&a, &ax, 16, 4).unwrap().sigma, want);
    }

    #[test]
    fn e_alpha_grows_with_alpha(
        seed in any::<u64>(),
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in 1usize..=3,
        lo in -3i64..=3,
        gap in 0i64..=3,
    ) {
        let mut rng = seeded_rng(seed);
        let a = matrix(&random_matrix(&mut rng, prime(p), n, -1, 2), prime(p), PREC);
        let x = vector(&random_vector(&mut rng, p, n), prime(p), PREC);
        let (small, large) = (LogNorm::from_int(lo), LogNorm::from_int(lo + gap));
        let (Ok(m_small), Ok(m_large)) = (
            e_alpha_member(&a, &x, &small, 20),
            e_alpha_member(&a, &x, &large, 20),
        ) else {
            return Ok(());
        };
        if m_small == Membership::Member {
            prop_assert_eq!(m_large, Membership::Member);
            let (ns, nl) = (
                alpha_norm(&a, &x, &small, 20).unwrap(),
                alpha_norm(&a, &x, &large, 20).unwrap(),
            );
            prop_assert!(nl.value <= ns.value);
        }
    }
}

#[test]
fn operator_norm_members() {
    // α ≥ ‖A‖ puts every vector in E_α with ‖x‖_α = ‖x‖
    let p = prime(3);
    let a = matrix(
        &[vec![BigRational::from_integer(3.into()), BigRational::zero()], vec![
            BigRational::from_integer(1.into()),
            BigRational::from_integer(9.into()),
        ]],
        p,
        PREC,
    );
    let x = Vector::from_rationals(p, &[(1, 2), (5, 1)], PREC).unwrap();
    let op = a.operator_norm_bound();
    assert_eq!(e_alpha_member(&a, &x, &op, 16).unwrap(), Membership::Member);
    let an = alpha_norm(&a, &x, &op, 16).unwrap();
    assert_eq!(an.value, x.norm());
    assert!(an.certified);
}
