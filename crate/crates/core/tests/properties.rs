//! Property tests over the public arithmetic surface.

use arithcs::arith::{self, Factorization};
use arithcs::idealcls::{self, QuadForm};
use arithcs::quadtower::{FamilyDatum, FElement, TowerElement};
use arithcs::{Integer, Rational};
use proptest::prelude::*;

fn int(n: i64) -> Integer {
    Integer::from(n)
}

proptest! {
    #[test]
    fn kronecker_is_multiplicative_in_the_upper_argument(
        a in -300i64..300,
        b in -300i64..300,
        m in 0i64..200,
    ) {
        let modulus = int(2 * m + 1); // odd positive
        let lhs = arith::kronecker(&int(a), &modulus).unwrap() as i32
            * arith::kronecker(&int(b), &modulus).unwrap() as i32;
        let rhs = arith::kronecker(&(int(a) * int(b)), &modulus).unwrap() as i32;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn factorize_recomposes(n in prop::num::i64::ANY.prop_filter("nonzero", |n| *n != 0)) {
        let f: Factorization = arith::factorize(&int(n)).unwrap();
        prop_assert_eq!(f.recompose(), int(n));
        for (p, e) in f.factors() {
            prop_assert!(arith::is_prime(p).unwrap());
            prop_assert!(*e >= 1);
        }
    }

    #[test]
    fn sqrt_mod_squares_to_the_residue(a in 0i64..1000, qi in 0usize..5) {
        let q = [3i64, 13, 17, 101, 1009][qi];
        let qb = int(q);
        let ab = int(a);
        match arith::sqrt_mod(&ab, &qb) {
            Ok(r) => {
                prop_assert_eq!((&r * &r) % &qb, ab % &qb);
                prop_assert!(r <= (&qb >> 1u32) + 1u8);
            }
            Err(_) => {
                prop_assert_eq!(arith::kronecker(&ab, &qb).unwrap(), -1);
            }
        }
    }

    #[test]
    fn tower_norm_is_multiplicative(
        coords in prop::array::uniform8(-12i64..12),
        den in 1i64..4,
    ) {
        let d = FamilyDatum::validate(&int(13), &int(2)).unwrap();
        let m = d.m();
        let f = |n: i64| Rational::new(int(n), int(den));
        let y1 = TowerElement::new(
            FElement::new(f(coords[0]), f(coords[1]), m.clone()),
            FElement::new(f(coords[2]), f(coords[3]), m.clone()),
            d.p(),
        );
        let y2 = TowerElement::new(
            FElement::new(f(coords[4]), f(coords[5]), m.clone()),
            FElement::new(f(coords[6]), f(coords[7]), m.clone()),
            d.p(),
        );
        prop_assert_eq!(
            y1.mul(&y2).norm_k_over_f(),
            y1.norm_k_over_f().mul(&y2.norm_k_over_f())
        );
        // sigma is a ring involution
        prop_assert_eq!(y1.mul(&y2).sigma(), y1.sigma().mul(&y2.sigma()));
    }

    #[test]
    fn principal_ideal_factorization_is_multiplicative(
        coords in prop::array::uniform4(-25i64..25),
        mi in 0usize..4,
    ) {
        let m = int([10i64, 5, 35, 39][mi]);
        let w1 = FElement::new(Rational::from(int(coords[0])), Rational::from(int(coords[1])), m.clone());
        let w2 = FElement::new(Rational::from(int(coords[2])), Rational::from(int(coords[3])), m.clone());
        prop_assume!(!w1.is_zero() && !w2.is_zero());
        let lhs = idealcls::factor_principal(&w1.mul(&w2)).unwrap();
        let rhs = idealcls::factor_principal(&w1).unwrap().mul(&idealcls::factor_principal(&w2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_commutative_and_torsion_squares_close(
        i in 0usize..50,
        j in 0usize..50,
    ) {
        let d = int(-420); // h = 8, all 2-torsion
        let cg = idealcls::reduced_forms(&d).unwrap();
        let f = &cg.forms()[i % cg.h()];
        let g = &cg.forms()[j % cg.h()];
        let fg = idealcls::compose(f, g).unwrap();
        prop_assert_eq!(&fg, &idealcls::compose(g, f).unwrap());
        prop_assert!(cg.contains(&fg));
        let sq = idealcls::compose(&fg, &fg).unwrap();
        prop_assert_eq!(sq, QuadForm::principal(&d).reduce());
    }
}
