mod common;

use common::props::*;
use common::strategies::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn leibniz_rule(p in xpoly(), q in xpoly()) {
        leibniz(&p, &q)?;
    }

    #[test]
    fn gcd_divides_both_with_coprime_cofactors(a in mpoly(), b in mpoly(), c in mpoly()) {
        gcd_divides(&a, &b, &c)?;
    }

    #[test]
    fn theta_c_reconstructs(p in xpoly(), c in ratfun()) {
        theta_reconstruction(&p, &c)?;
    }

    #[test]
    fn index_shift_round_trips(p in xpoly(), k in -4i64..=4) {
        shift_round_trip(&p, k)?;
    }

    #[test]
    fn ratfun_index_shift_round_trips(f in ratfun(), k in -4i64..=4) {
        ratfun_shift_round_trip(&f, k)?;
    }

    #[test]
    fn printer_output_reparses(e in expr()) {
        parser_round_trip(&e)?;
    }

    #[test]
    fn ring_laws(p in xpoly(), q in xpoly(), r in xpoly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p + &q) - &q, p);
    }
}
