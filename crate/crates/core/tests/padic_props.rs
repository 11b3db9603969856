mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use volint::padic::Field;

fn fields() -> [Field; 2] {
    [ex71_curve().field, ex72_curve().field]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn log_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for f in fields() {
            prop_assert_eq!(log_homomorphism(&f, &mut rng), Ok(()));
        }
    }

    #[test]
    fn square_roots_square_back(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for f in fields() {
            let x = rand_unit(&f, &mut rng);
            let sq = x.square();
            let r = sq.sqrt().unwrap();
            prop_assert!(agree(&r.square(), &sq, f.cap - 2 * f.e));
            prop_assert!(agree(&r, &x, f.cap - 2 * f.e) || agree(&r, &x.neg(), f.cap - 2 * f.e));
        }
    }

    #[test]
    fn inverses_and_shifts(seed in any::<u64>(), j in -6i64..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        for f in fields() {
            let x = random_nonzero(&f, &mut rng);
            let one = x.mul(&x.inv().unwrap());
            let v = x.valuation().unwrap();
            prop_assert!(one.sub(&f.one()).is_zero());
            prop_assert!(one.prec() >= f.cap - 2 * v.abs() - f.e);
            // stay clear of the cap, which bounds every precision
            let x = x.truncate(f.cap - 6);
            let back = x.shift_pi(j).shift_pi(-j);
            prop_assert_eq!(back.prec(), x.prec());
            prop_assert!(back.sub(&x).is_zero());
        }
    }
}
