//! The Artin map Cl(O_F) -> Gal(K/F) = Z/2 for the unramified extension
//! K = F(sqrt(p)), realized by the genus character attached to the
//! factorization D = D1 * D2 with D1 = p.
//!
//! At a prime not dividing D1 the character reads kronecker(D1, norm); at
//! primes dividing D1 it is evaluated through D2, the classical rule that
//! makes the character total.

use crate::arith::{self, Integer};
use crate::idealcls::{FactoredIdeal, IdealError, PrimeIdeal, QuadForm, SplitKind};
use crate::quadtower::FamilyDatum;
use num_integer::Integer as NumInteger;
use num_traits::One;
use std::fmt;
use std::ops::Add;

/// Element of Gal(K/F) = Z/2 written additively: 0 is the trivial
/// Frobenius, 1 is the generator sigma (under c1: sigma -> 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ArtinValue(u8);

impl ArtinValue {
    pub const TRIVIAL: ArtinValue = ArtinValue(0);
    pub const SIGMA: ArtinValue = ArtinValue(1);

    pub fn from_character(chi: i8) -> ArtinValue {
        match chi {
            1 => ArtinValue(0),
            -1 => ArtinValue(1),
            _ => panic!("genus character must be +1 or -1, got {chi}"),
        }
    }

    pub fn from_bit(bit: u8) -> Option<ArtinValue> {
        match bit {
            0 => Some(ArtinValue(0)),
            1 => Some(ArtinValue(1)),
            _ => None,
        }
    }

    pub fn bit(&self) -> u8 {
        self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == 0
    }
}

impl Add for ArtinValue {
    type Output = ArtinValue;
    fn add(self, rhs: ArtinValue) -> ArtinValue {
        ArtinValue(self.0 ^ rhs.0)
    }
}

impl fmt::Display for ArtinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Frobenius of a prime of O_F in Gal(K/F), via the genus character
/// evaluated at the absolute norm.  Inert primes have norm q^2 and always
/// land on the trivial element.
pub fn frobenius(prime: &PrimeIdeal, d: &FamilyDatum) -> ArtinValue {
    if prime.kind() == SplitKind::Inert {
        return ArtinValue::TRIVIAL;
    }
    let q = prime.q();
    let chi = if q.gcd(d.d1()).is_one() {
        arith::kronecker(d.d1(), q).expect("kronecker defined: q is a positive prime")
    } else {
        arith::kronecker(d.d2(), q).expect("kronecker defined: q is a positive prime")
    };
    ArtinValue::from_character(chi)
}

/// Artin image of a factored fractional ideal: the exponent-weighted sum of
/// the per-prime Frobenius values, mod 2.
pub fn artin_of_ideal(ideal: &FactoredIdeal, d: &FamilyDatum) -> ArtinValue {
    let mut acc = ArtinValue::TRIVIAL;
    for (prime, e) in ideal.factors() {
        if e % 2 != 0 {
            acc = acc + frobenius(prime, d);
        }
    }
    acc
}

/// Per-prime character values, in factor order; the audit trail shown in
/// certificates.
pub fn character_trace(ideal: &FactoredIdeal, d: &FamilyDatum) -> Vec<(PrimeIdeal, ArtinValue)> {
    ideal
        .factors()
        .iter()
        .map(|(prime, _)| (prime.clone(), frobenius(prime, d)))
        .collect()
}

/// Genus character of an ideal class given by a reduced form: evaluate
/// kronecker(D1, A) once the leading coefficient is coprime to D1.
pub fn artin_of_class(form: &QuadForm, d: &FamilyDatum) -> Result<ArtinValue, IdealError> {
    if &form.discriminant() != d.discriminant() {
        return Err(IdealError::DiscriminantMismatch(
            form.discriminant(),
            d.discriminant().clone(),
        ));
    }
    let value = if form.a().gcd(d.d1()).is_one() {
        form.a().clone()
    } else {
        representative_coprime_to(form, d.d1())
    };
    let chi = arith::kronecker(d.d1(), &value).expect("kronecker defined on positive values");
    Ok(ArtinValue::from_character(chi))
}

/// A positive value represented by the form and coprime to n; the form
/// represents such values because it is primitive.
fn representative_coprime_to(form: &QuadForm, n: &Integer) -> Integer {
    let mut bound = 8i64;
    loop {
        for x in 0..bound {
            for y in 0..bound {
                let xg = Integer::from(x);
                let yg = Integer::from(y);
                if !xg.gcd(&yg).is_one() {
                    continue;
                }
                let v = form.value(&xg, &yg);
                if v.gcd(n).is_one() {
                    return v;
                }
            }
        }
        bound *= 2;
        assert!(bound < 1 << 14, "no represented value coprime to {n} found");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idealcls::{factor_principal, ideal_to_form, splitting_type};
    use crate::quadtower::FElement;
    use crate::{Integer, Rational};
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    fn datum(p: i64, t: i64) -> FamilyDatum {
        FamilyDatum::validate(&int(p), &int(t)).unwrap()
    }

    #[test]
    fn frobenius_pinned_examples() {
        // Q5 ramified in (5,2): kronecker(-8, 5) = -1
        let d = datum(5, 2);
        let q5 = splitting_type(&int(5), d.discriminant()).unwrap()[0].clone();
        assert_eq!(frobenius(&q5, &d), ArtinValue::SIGMA);

        // Q5 in (5,1): kronecker(-4, 5) = +1
        let d = datum(5, 1);
        let q5 = splitting_type(&int(5), d.discriminant()).unwrap()[0].clone();
        assert_eq!(frobenius(&q5, &d), ArtinValue::TRIVIAL);

        // any inert prime is trivial
        let d = datum(5, 2);
        let q3 = splitting_type(&int(3), d.discriminant()).unwrap()[0].clone();
        assert_eq!(q3.kind(), SplitKind::Inert);
        assert_eq!(frobenius(&q3, &d), ArtinValue::TRIVIAL);
    }

    #[test]
    fn artin_of_ideal_pinned_examples() {
        let d = datum(5, 2);
        let q5 = splitting_type(&int(5), d.discriminant()).unwrap()[0].clone();
        let i = FactoredIdeal::from_factors(vec![(q5, 1)]);
        assert_eq!(artin_of_ideal(&i, &d), ArtinValue::SIGMA);

        assert_eq!(artin_of_ideal(&FactoredIdeal::unit(), &d), ArtinValue::TRIVIAL);

        // (7) = Q7 * Q7': both conjugates carry the same character value
        let w = FElement::from_integer(&int(7), &d.m());
        let i = factor_principal(&w).unwrap();
        assert_eq!(i.factors().len(), 2);
        assert_eq!(artin_of_ideal(&i, &d), ArtinValue::TRIVIAL);
    }

    #[test]
    fn artin_of_class_pinned_examples() {
        let d = datum(5, 2);
        let f = QuadForm::new(int(2), int(0), int(5));
        assert_eq!(artin_of_class(&f, &d).unwrap(), ArtinValue::SIGMA);
        let id = QuadForm::new(int(1), int(0), int(10));
        assert_eq!(artin_of_class(&id, &d).unwrap(), ArtinValue::TRIVIAL);

        let d = datum(5, 1);
        let f = QuadForm::new(int(2), int(2), int(3));
        assert_eq!(artin_of_class(&f, &d).unwrap(), ArtinValue::SIGMA);
    }

    #[test]
    fn artin_of_class_translates_leading_coefficient() {
        // leading coefficient divisible by D1 = 5 forces the translation path
        let d = datum(5, 1);
        let f = QuadForm::new(int(5), int(0), int(1));
        assert_eq!(f.discriminant(), int(-20));
        // (5,0,1) reduces to (1,0,5): principal, so the character is trivial
        assert_eq!(artin_of_class(&f, &d).unwrap(), ArtinValue::TRIVIAL);
    }

    #[test]
    fn reciprocity_principal_ideals_in_kernel() {
        let mut rng = StdRng::seed_from_u64(99);
        for (p, t) in [(5i64, 2i64), (5, 1), (13, 3), (17, 3), (29, 5)] {
            let d = datum(p, t);
            let m = d.m();
            for _ in 0..50 {
                let w = FElement::new(
                    Rational::from(int(rng.gen_range(-40..40))),
                    Rational::from(int(rng.gen_range(-40..40))),
                    m.clone(),
                );
                if w.is_zero() {
                    continue;
                }
                let ideal = factor_principal(&w).unwrap();
                assert_eq!(
                    artin_of_ideal(&ideal, &d),
                    ArtinValue::TRIVIAL,
                    "principal ideal ({w}) must be in the Artin kernel"
                );
            }
        }
    }

    #[test]
    fn ideal_and_class_routes_agree() {
        let mut rng = StdRng::seed_from_u64(3);
        for (p, t) in [(5i64, 2i64), (13, 3), (17, 3)] {
            let d = datum(p, t);
            let disc = d.discriminant().clone();
            let m = d.m();
            for _ in 0..30 {
                let w = FElement::new(
                    Rational::from(int(rng.gen_range(-25..25))),
                    Rational::from(int(rng.gen_range(-25..25))),
                    m.clone(),
                );
                if w.is_zero() {
                    continue;
                }
                // scale by a random prime ideal to exercise nontrivial classes
                let q = [3i64, 7, 11, 13, 29][rng.gen_range(0..5)];
                let extra = splitting_type(&int(q), &disc).unwrap()[0].clone();
                let ideal = factor_principal(&w)
                    .unwrap()
                    .mul(&FactoredIdeal::from_factors(vec![(extra, 1)]));
                let via_ideal = artin_of_ideal(&ideal, &d);
                let via_class = artin_of_class(&ideal_to_form(&ideal, &disc).unwrap(), &d).unwrap();
                assert_eq!(via_ideal, via_class);
            }
        }
    }

    #[test]
    fn surjectivity_some_small_prime_is_nontrivial() {
        for (p, t) in [(5i64, 2i64), (5, 1), (13, 3), (17, 3), (29, 5), (97, 47)] {
            let d = datum(p, t);
            let mut found = false;
            let mut q = int(2);
            while q < int(200) {
                if crate::arith::is_prime(&q).unwrap() {
                    for prime in splitting_type(&q, d.discriminant()).unwrap() {
                        if prime.norm() < int(200) && frobenius(&prime, &d) == ArtinValue::SIGMA {
                            found = true;
                        }
                    }
                }
                if found {
                    break;
                }
                q += 1u8;
            }
            assert!(found, "K != F: some prime of norm < 200 must be inert in K for ({p},{t})");
        }
    }

    #[test]
    fn frobenius_matches_direct_residue_test() {
        // for q coprime to 2pt and Q of norm q: frobenius(Q) = 0 iff (p|q) = +1
        for (p, t) in [(5i64, 2i64), (13, 3), (17, 3)] {
            let d = datum(p, t);
            let mut q = int(3);
            while q < int(120) {
                if crate::arith::is_prime(&q).unwrap()
                    && !(d.m() * 2u8 % &q).is_zero()
                {
                    for prime in splitting_type(&q, d.discriminant()).unwrap() {
                        if prime.residue_degree() == 1 {
                            let split_in_k = arith::kronecker(d.p(), &q).unwrap() == 1;
                            assert_eq!(
                                frobenius(&prime, &d) == ArtinValue::TRIVIAL,
                                split_in_k,
                                "q = {q} in ({p},{t})"
                            );
                        }
                    }
                }
                q += 2u8;
            }
        }
    }
}
