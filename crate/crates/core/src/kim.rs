//! The end-to-end invariant pipeline: fundamental unit, Hilbert 90
//! resolvent, relative norm, ideal square root, Artin image — together with
//! the independent splitting-criterion oracle, the triviality-criteria
//! checker, the (a, zeta)-pairing route, and batch scanning.

use crate::arith::{self, ArithError, Integer};
use crate::artin::{self, ArtinValue};
use crate::idealcls::{self, FactoredIdeal, IdealError, PrimeIdeal, QuadForm};
use crate::quadtower::{
    self, EUnit, FamilyDatum, FElement, TowerElement, TowerError,
};
use num_integer::Integer as NumInteger;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KimError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("certificate invariant violated: {0}")]
    BadCertificate(String),
    #[error("triviality criteria disagree: S = {s} but Art([J]) = {artin}")]
    EquivalenceFailure { s: ArtinValue, artin: ArtinValue },
}

impl KimError {
    /// True for errors caused by invalid (p, t) input rather than by an
    /// internal guarantee failing.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            KimError::Tower(
                TowerError::NotPrime(_)
                    | TowerError::NotOneModFour(_)
                    | TowerError::TNotPositive(_)
                    | TowerError::TNotSquarefree(_)
                    | TowerError::NotCoprime { .. }
            )
        )
    }
}

/// Full audit record of one invariant computation; every intermediate of
/// the pipeline is retained so the value can be re-derived by hand.
#[derive(Debug, Clone)]
pub struct Certificate {
    datum: FamilyDatum,
    epsilon: EUnit,
    x: TowerElement,
    u: TowerElement,
    y: TowerElement,
    w: FElement,
    w_factored: FactoredIdeal,
    ideal: FactoredIdeal,
    ideal_class: QuadForm,
    character_trace: Vec<(PrimeIdeal, ArtinValue)>,
    s: ArtinValue,
    oracle: ArtinValue,
    agree: bool,
}

impl Certificate {
    pub fn datum(&self) -> &FamilyDatum {
        &self.datum
    }
    pub fn epsilon(&self) -> &EUnit {
        &self.epsilon
    }
    pub fn x(&self) -> &TowerElement {
        &self.x
    }
    pub fn u(&self) -> &TowerElement {
        &self.u
    }
    pub fn y(&self) -> &TowerElement {
        &self.y
    }
    pub fn w(&self) -> &FElement {
        &self.w
    }
    pub fn w_factored(&self) -> &FactoredIdeal {
        &self.w_factored
    }
    pub fn ideal(&self) -> &FactoredIdeal {
        &self.ideal
    }
    pub fn ideal_class(&self) -> &QuadForm {
        &self.ideal_class
    }
    pub fn character_trace(&self) -> &[(PrimeIdeal, ArtinValue)] {
        &self.character_trace
    }
    pub fn s(&self) -> ArtinValue {
        self.s
    }
    pub fn oracle(&self) -> ArtinValue {
        self.oracle
    }
    pub fn agree(&self) -> bool {
        self.agree
    }

    /// Rebuild a certificate from parts (e.g. parsed back from JSON) and
    /// re-verify every internal invariant.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        datum: FamilyDatum,
        epsilon: EUnit,
        x: TowerElement,
        u: TowerElement,
        y: TowerElement,
        w: FElement,
        w_factored: FactoredIdeal,
        ideal: FactoredIdeal,
        ideal_class: QuadForm,
        character_trace: Vec<(PrimeIdeal, ArtinValue)>,
        s: ArtinValue,
        oracle: ArtinValue,
        agree: bool,
    ) -> Result<Certificate, KimError> {
        let cert = Certificate {
            datum,
            epsilon,
            x,
            u,
            y,
            w,
            w_factored,
            ideal,
            ideal_class,
            character_trace,
            s,
            oracle,
            agree,
        };
        cert.verify()?;
        Ok(cert)
    }

    /// Check every certificate invariant from scratch.
    pub fn verify(&self) -> Result<(), KimError> {
        let d = &self.datum;
        FamilyDatum::validate(d.p(), d.t())?;
        let fail = |msg: &str| Err(KimError::BadCertificate(msg.to_string()));

        let minus_one = FElement::from_integer(&Integer::from(-1), &d.m());
        if self.x.norm_k_over_f() != minus_one {
            return fail("Norm_K/F(x) != -1");
        }
        if self.u != self.x.square() {
            return fail("u != x^2");
        }
        if self.y.sigma() != self.u.mul(&self.y) {
            return fail("sigma(y) != u*y");
        }
        if self.y.norm_k_over_f() != self.w {
            return fail("w != Norm_K/F(y)");
        }
        if idealcls::factor_principal(&self.w)? != self.w_factored {
            return fail("w_factored is not the factorization of (w)");
        }
        if self.w_factored.factors().iter().any(|&(_, e)| e % 2 != 0) {
            return fail("w_factored has an odd exponent");
        }
        if self.w_factored.sqrt()? != self.ideal {
            return fail("I != sqrt of (w)");
        }
        if artin::artin_of_ideal(&self.ideal, d) != self.s {
            return fail("S != Art([I])");
        }
        if idealcls::ideal_to_form(&self.ideal, d.discriminant())? != self.ideal_class {
            return fail("IClass is not the class of I");
        }
        let square = idealcls::compose(&self.ideal_class, &self.ideal_class)?;
        if square != QuadForm::principal(d.discriminant()).reduce() {
            return fail("IClass is not 2-torsion");
        }
        let expected_trace = artin::character_trace(&self.ideal, d);
        if expected_trace != self.character_trace {
            return fail("character trace mismatch");
        }
        if oracle_invariant(d)? != self.oracle {
            return fail("oracle value mismatch");
        }
        if (self.s == self.oracle) != self.agree {
            return fail("agreement flag mismatch");
        }
        Ok(())
    }
}

/// Factor Norm_{K/F}(y), halve the exponents, and take the Artin image.
/// This is the back half of the pipeline, shared by the gauge-perturbation
/// checks which feed it modified resolvents.
pub fn invariant_from_y(
    d: &FamilyDatum,
    y: &TowerElement,
) -> Result<(ArtinValue, FactoredIdeal, FactoredIdeal), KimError> {
    let w = y.norm_k_over_f();
    let w_factored = idealcls::factor_principal(&w)?;
    let ideal = w_factored.sqrt()?;
    let s = artin::artin_of_ideal(&ideal, d);
    Ok((s, w_factored, ideal))
}

/// Run the full pipeline on a validated datum and assemble the certificate.
pub fn compute_invariant(d: &FamilyDatum) -> Result<Certificate, KimError> {
    let epsilon = quadtower::fundamental_unit(d.p())?;
    let x = quadtower::norm_minus_one_solution(d)?;
    let u = x.square();
    let y = quadtower::hilbert90_solve(d, &u)?;
    let w = y.norm_k_over_f();
    let (s, w_factored, ideal) = invariant_from_y(d, &y)?;
    let ideal_class = idealcls::ideal_to_form(&ideal, d.discriminant())?;
    let character_trace = artin::character_trace(&ideal, d);
    let oracle = oracle_invariant(d)?;
    let agree = s == oracle;
    Certificate::from_parts(
        d.clone(),
        epsilon,
        x,
        u,
        y,
        w,
        w_factored,
        ideal,
        ideal_class,
        character_trace,
        s,
        oracle,
        agree,
    )
}

/// Independent oracle: the invariant is trivial exactly when t is a square
/// mod p (the prime above p splits in K in that case).
pub fn oracle_invariant(d: &FamilyDatum) -> Result<ArtinValue, KimError> {
    let chi = arith::kronecker(d.t(), d.p())?;
    debug_assert!(chi != 0, "gcd(p, t) = 1 was validated");
    Ok(ArtinValue::from_character(chi))
}

/// Value of the pairing (a, zeta_2) with a = p: the class of the ideal I
/// with Norm_{K/F}(nu * sqrt(p)) O_F = I^2, tensored with zeta_2 = -1.
#[derive(Debug, Clone)]
pub struct PairingValue {
    cls: QuadForm,
    zeta_exponent: u8,
}

impl PairingValue {
    pub fn class(&self) -> &QuadForm {
        &self.cls
    }

    /// The second tensor component as an element of mu_2, written +-1.
    pub fn zeta(&self) -> i8 {
        if self.zeta_exponent == 0 {
            1
        } else {
            -1
        }
    }

    /// kappa([I] (x) zeta_2^k) = k * Art([I]).
    pub fn kappa(&self, d: &FamilyDatum) -> Result<ArtinValue, KimError> {
        if self.zeta_exponent == 0 {
            return Ok(ArtinValue::TRIVIAL);
        }
        Ok(artin::artin_of_class(&self.cls, d)?)
    }
}

/// Construct (a, zeta_2)_2 for a = p via nu with x^2 / zeta_2 = sigma(nu)/nu
/// and y = nu * sqrt(p).
pub fn pairing_a_zeta(d: &FamilyDatum) -> Result<PairingValue, KimError> {
    let x = quadtower::norm_minus_one_solution(d)?;
    // x^2 / b with b = zeta_2 = -1
    let u = x.square().neg();
    let nu = quadtower::hilbert90_solve(d, &u)?;
    let y = nu.mul(&TowerElement::sqrt_p(d));
    let (_, _, ideal) = invariant_from_y(d, &y)?;
    let cls = idealcls::ideal_to_form(&ideal, d.discriminant())?;
    Ok(PairingValue { cls, zeta_exponent: 1 })
}

/// Report of the triviality-criteria check: criterion (i) is the pipeline
/// invariant, criterion (iii) the Artin image of [J] computed on the class
/// side; criterion (ii) (norm subgroup membership) is not evaluated.
#[derive(Debug, Clone)]
pub struct TrivialityReport {
    pub s_invariant: ArtinValue,
    pub artin_image: ArtinValue,
    pub equivalent: bool,
    pub norm_criterion: &'static str,
}

pub fn check_triviality(d: &FamilyDatum) -> Result<TrivialityReport, KimError> {
    let cert = compute_invariant(d)?;
    // (iii) through the form-class route, independent of the per-prime sum
    let artin_image = artin::artin_of_class(cert.ideal_class(), d)?;
    let s_invariant = cert.s();
    if s_invariant != artin_image {
        return Err(KimError::EquivalenceFailure { s: s_invariant, artin: artin_image });
    }
    Ok(TrivialityReport {
        s_invariant,
        artin_image,
        equivalent: true,
        norm_criterion: "not evaluated (criterion (ii) requires Cl(O_K); out of scope)",
    })
}

/// Witness report for the example family conditions: t a non-residue mod p,
/// -pt = 5 mod 8, 2 inert in F, and a nontrivial invariant.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub p_is_one_mod_four: bool,
    pub t_nonresidue_mod_p: bool,
    pub minus_pt_is_five_mod_eight: bool,
    pub two_inert_in_f: bool,
    pub s_nontrivial: bool,
    pub all_hold: bool,
    pub s: ArtinValue,
    pub pairing_note: &'static str,
}

pub fn remark_witness(d: &FamilyDatum) -> Result<WitnessReport, KimError> {
    let p_is_one_mod_four = d.p().mod_floor(&Integer::from(4)).is_one();
    let t_nonresidue_mod_p = arith::kronecker(d.t(), d.p())? == -1;
    let minus_pt = -d.m();
    let minus_pt_is_five_mod_eight = minus_pt.mod_floor(&Integer::from(8)) == Integer::from(5);
    let two_inert_in_f = arith::kronecker(d.discriminant(), &Integer::from(2))? == -1;
    let s = compute_invariant(d)?.s();
    let s_nontrivial = !s.is_trivial();
    let all_hold = p_is_one_mod_four
        && t_nonresidue_mod_p
        && minus_pt_is_five_mod_eight
        && two_inert_in_f
        && s_nontrivial;
    Ok(WitnessReport {
        p_is_one_mod_four,
        t_nonresidue_mod_p,
        minus_pt_is_five_mod_eight,
        two_inert_in_f,
        s_nontrivial,
        all_hold,
        s,
        pairing_note: "pairing value comparison not evaluated (out of scope)",
    })
}

/// One scanned family member.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub p: Integer,
    pub t: Integer,
    pub d: Integer,
    pub h: usize,
    pub s: ArtinValue,
    pub oracle: ArtinValue,
    pub agree: bool,
}

#[derive(Debug, Clone)]
pub enum ScanOutcome {
    Row(ScanRow),
    Failed { p: Integer, t: Integer, reason: String },
}

#[derive(Debug, Clone, Default)]
pub struct ScanTable {
    pub outcomes: Vec<ScanOutcome>,
    pub trivial: usize,
    pub nontrivial: usize,
    pub failed: usize,
}

impl ScanTable {
    pub fn rows(&self) -> impl Iterator<Item = &ScanRow> {
        self.outcomes.iter().filter_map(|o| match o {
            ScanOutcome::Row(r) => Some(r),
            ScanOutcome::Failed { .. } => None,
        })
    }
}

/// All valid family data with p <= p_max and t <= t_max.
pub fn family_corpus(p_max: &Integer, t_max: &Integer) -> Vec<FamilyDatum> {
    let mut out = Vec::new();
    let mut p = Integer::from(5);
    while &p <= p_max {
        if arith::is_prime(&p).unwrap_or(false) && p.mod_floor(&Integer::from(4)).is_one() {
            let mut t = Integer::one();
            while &t <= t_max {
                if let Ok(d) = FamilyDatum::validate(&p, &t) {
                    out.push(d);
                }
                t += 1u8;
            }
        }
        p += 1u8;
    }
    out
}

/// Scan the family up to the bounds; per-row failures are isolated and do
/// not abort the sweep.  Rows are ordered by (p, t).
pub fn scan(p_max: &Integer, t_max: &Integer) -> ScanTable {
    let mut table = ScanTable::default();
    for d in family_corpus(p_max, t_max) {
        match scan_row(&d) {
            Ok(row) => {
                if row.s.is_trivial() {
                    table.trivial += 1;
                } else {
                    table.nontrivial += 1;
                }
                table.outcomes.push(ScanOutcome::Row(row));
            }
            Err(e) => {
                table.failed += 1;
                table.outcomes.push(ScanOutcome::Failed {
                    p: d.p().clone(),
                    t: d.t().clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    table
}

fn scan_row(d: &FamilyDatum) -> Result<ScanRow, KimError> {
    let cert = compute_invariant(d)?;
    let h = idealcls::reduced_forms(d.discriminant())?.h();
    Ok(ScanRow {
        p: d.p().clone(),
        t: d.t().clone(),
        d: d.discriminant().clone(),
        h,
        s: cert.s(),
        oracle: cert.oracle(),
        agree: cert.agree(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(int(n), int(d))
    }

    fn datum(p: i64, t: i64) -> FamilyDatum {
        FamilyDatum::validate(&int(p), &int(t)).unwrap()
    }

    #[test]
    fn pipeline_5_2_full_certificate() {
        let d = datum(5, 2);
        let cert = compute_invariant(&d).unwrap();
        assert_eq!(cert.s(), ArtinValue::SIGMA);
        assert!(cert.agree());
        // eps = (1 + sqrt(5))/2
        assert_eq!(cert.epsilon().r(), &rat(1, 2));
        assert_eq!(cert.epsilon().s(), &rat(1, 2));
        // y = (5 - sqrt(5))/2, w = 5, (w) = Q5^2, I = Q5
        assert_eq!(cert.w(), &FElement::from_integer(&int(5), &d.m()));
        assert_eq!(cert.w_factored().factors().len(), 1);
        assert_eq!(cert.w_factored().factors()[0].1, 2);
        assert_eq!(cert.ideal().factors()[0].0.q(), &int(5));
        assert_eq!(cert.ideal().factors()[0].1, 1);
        assert_eq!(cert.ideal_class(), &QuadForm::new(int(2), int(0), int(5)));
        cert.verify().unwrap();
    }

    #[test]
    fn pinned_instances() {
        for (p, t, s) in [
            (5i64, 1i64, 0u8),
            (5, 2, 1),
            (5, 3, 1),
            (13, 3, 0),
            (17, 3, 1),
            (29, 5, 0),
        ] {
            let cert = compute_invariant(&datum(p, t)).unwrap();
            assert_eq!(cert.s().bit(), s, "(p,t) = ({p},{t})");
            assert!(cert.agree(), "(p,t) = ({p},{t})");
        }
    }

    #[test]
    fn oracle_pinned_instances() {
        assert_eq!(oracle_invariant(&datum(5, 1)).unwrap(), ArtinValue::TRIVIAL);
        assert_eq!(oracle_invariant(&datum(5, 2)).unwrap(), ArtinValue::SIGMA);
        assert_eq!(oracle_invariant(&datum(17, 3)).unwrap(), ArtinValue::SIGMA);
    }

    #[test]
    fn oracle_agreement_spot_corpus() {
        for d in family_corpus(&int(40), &int(12)) {
            let cert = compute_invariant(&d).unwrap();
            assert!(
                cert.agree(),
                "disagreement at (p,t) = ({},{})",
                d.p(),
                d.t()
            );
        }
    }

    #[test]
    fn pairing_pinned_instances() {
        let d = datum(5, 2);
        let pv = pairing_a_zeta(&d).unwrap();
        assert_eq!(pv.zeta(), -1);
        assert_eq!(pv.class(), &QuadForm::new(int(2), int(0), int(5)));
        assert_eq!(pv.kappa(&d).unwrap(), ArtinValue::SIGMA);

        let d = datum(5, 1);
        assert_eq!(pairing_a_zeta(&d).unwrap().kappa(&d).unwrap(), ArtinValue::TRIVIAL);

        let d = datum(13, 3);
        assert_eq!(pairing_a_zeta(&d).unwrap().kappa(&d).unwrap(), ArtinValue::TRIVIAL);
    }

    #[test]
    fn pairing_consistency_spot_corpus() {
        for d in family_corpus(&int(30), &int(10)) {
            let kappa = pairing_a_zeta(&d).unwrap().kappa(&d).unwrap();
            let s = compute_invariant(&d).unwrap().s();
            assert_eq!(kappa, s, "(p,t) = ({},{})", d.p(), d.t());
        }
    }

    #[test]
    fn triviality_pinned_instances() {
        let r = check_triviality(&datum(5, 2)).unwrap();
        assert!(!r.s_invariant.is_trivial());
        assert!(!r.artin_image.is_trivial());
        assert!(r.equivalent);

        let r = check_triviality(&datum(5, 1)).unwrap();
        assert!(r.s_invariant.is_trivial());
        assert!(r.artin_image.is_trivial());

        // 5 = 11^2 mod 29
        let r = check_triviality(&datum(29, 5)).unwrap();
        assert!(r.s_invariant.is_trivial() && r.artin_image.is_trivial());
    }

    #[test]
    fn witness_pinned_instances() {
        let r = remark_witness(&datum(5, 7)).unwrap();
        assert!(r.all_hold, "{r:?}");
        assert_eq!(r.s, ArtinValue::SIGMA);

        // (5,2): -10 is even, D = -40, 2 ramifies
        let r = remark_witness(&datum(5, 2)).unwrap();
        assert!(!r.minus_pt_is_five_mod_eight);
        assert!(!r.two_inert_in_f);
        assert!(!r.all_hold);

        // (5,3): -15 = 1 mod 8, 2 splits
        let r = remark_witness(&datum(5, 3)).unwrap();
        assert!(!r.minus_pt_is_five_mod_eight);
        assert!(!r.two_inert_in_f);

        // (5,1): t = 1 is a square
        let r = remark_witness(&datum(5, 1)).unwrap();
        assert!(!r.t_nonresidue_mod_p);
    }

    #[test]
    fn scan_pinned_small_tables() {
        let table = scan(&int(5), &int(3));
        let rows: Vec<_> = table.rows().collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(
            rows.iter().map(|r| (r.t.clone(), r.s.bit())).collect::<Vec<_>>(),
            vec![(int(1), 0), (int(2), 1), (int(3), 1)]
        );
        assert!(rows.iter().all(|r| r.agree));
        assert_eq!(table.failed, 0);

        let empty = scan(&int(0), &int(10));
        assert!(empty.outcomes.is_empty());

        // no p = 1 mod 4 at or below 3
        let empty = scan(&int(3), &int(3));
        assert!(empty.outcomes.is_empty());

        let table = scan(&int(13), &int(1));
        let pts: Vec<_> = table.rows().map(|r| (r.p.clone(), r.t.clone())).collect();
        assert_eq!(pts, vec![(int(5), int(1)), (int(13), int(1))]);
        assert!(table.rows().all(|r| r.s.is_trivial()));
    }

    #[test]
    fn scan_rows_are_ordered() {
        let table = scan(&int(17), &int(6));
        let keys: Vec<_> = table.rows().map(|r| (r.p.clone(), r.t.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn gauge_invariance_spot() {
        let mut rng = StdRng::seed_from_u64(1212);
        for (p, t) in [(5i64, 2i64), (13, 3), (17, 3), (29, 5)] {
            let d = datum(p, t);
            let m = d.m();
            let cert = compute_invariant(&d).unwrap();
            for _ in 0..20 {
                let f = FElement::new(
                    rat(rng.gen_range(-5..6), rng.gen_range(1..3)),
                    rat(rng.gen_range(-5..6), rng.gen_range(1..3)),
                    m.clone(),
                );
                let k = TowerElement::new(
                    FElement::new(rat(rng.gen_range(-4..5), 1), rat(rng.gen_range(-4..5), 1), m.clone()),
                    FElement::new(rat(rng.gen_range(-4..5), 1), rat(rng.gen_range(-4..5), 1), m.clone()),
                    d.p(),
                );
                if f.is_zero() || k.is_zero() {
                    continue;
                }
                let y2 = cert.y().scale_f(&f).mul(&k.square());
                let (s2, w_factored, _) = invariant_from_y(&d, &y2).unwrap();
                assert!(w_factored.factors().iter().all(|&(_, e)| e % 2 == 0));
                assert_eq!(s2, cert.s(), "gauge change moved the invariant at ({p},{t})");
            }
        }
    }

    #[test]
    fn torsion_of_the_pipeline_class() {
        for (p, t) in [(5i64, 2i64), (5, 1), (13, 3), (17, 3), (29, 5), (37, 10)] {
            let d = datum(p, t);
            let cert = compute_invariant(&d).unwrap();
            let sq = idealcls::compose(cert.ideal_class(), cert.ideal_class()).unwrap();
            assert_eq!(sq, QuadForm::principal(d.discriminant()).reduce());
        }
    }

    #[test]
    fn certificate_verify_catches_tampering() {
        let d = datum(5, 2);
        let cert = compute_invariant(&d).unwrap();
        let mut bad = cert.clone();
        bad.s = ArtinValue::TRIVIAL;
        assert!(bad.verify().is_err());
        let mut bad = cert.clone();
        bad.agree = false;
        assert!(bad.verify().is_err());
    }
}
