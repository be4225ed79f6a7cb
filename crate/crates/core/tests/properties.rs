use proptest::prelude::*;
use superext::gf::{fp_linear_independent, Fe, GaloisField};
use superext::sympow::SymPowers;

fn family(r: usize, s: usize, mus: &[u16]) -> Option<SymPowers> {
    let k = if s == 2 { GaloisField::new(3, 2).unwrap() } else { GaloisField::prime(3).unwrap() };
    let mus: Vec<Fe> = mus.iter().take(s).map(|&c| Fe(c % k.order() as u16)).collect();
    fp_linear_independent(&k, &mus).then(|| SymPowers::over(&k, r, s, &mus).unwrap())
}

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((1, 0)), Just((0, 1)), Just((2, 0)), Just((1, 1)), Just((0, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projective_exactly_below_multiples_of_the_period(
        (r, s) in shapes(), mus in prop::collection::vec(1u16..9, 2), n in 0usize..30,
    ) {
        if let Some(fam) = family(r, s, &mus) {
            let q = fam.period();
            prop_assert_eq!(fam.sym_power(n).module.is_projective_kh(), n % q == q - 1);
        }
    }

    #[test]
    fn invariant_dimension_formula((r, s) in shapes(), mus in prop::collection::vec(1u16..9, 2), n in 0usize..30) {
        if let Some(fam) = family(r, s, &mus) {
            prop_assert_eq!(fam.invariants(n).len(), n / fam.period() + 1);
            let predicted = fam.predicted_invariants(n);
            let computed = fam.invariants(n);
            prop_assert!(predicted.iter().all(|v| fam.in_span(&computed, v)));
        }
    }
}
