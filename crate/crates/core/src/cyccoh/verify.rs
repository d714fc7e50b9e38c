//! Verification suites for the structural identities the invariant
//! pipeline relies on: the boundary/cup sign identity, the factorization
//! of the Bockstein through the integral connecting map, and cup-with-t
//! periodicity.
//!
//! Every check here is a finite-group-cohomology analogue of a sheaf-level
//! statement and is labeled as such in its report.

use super::{
    carry_cocycle_z, coboundary, cohomology, connecting, cup, identity_one_cocycle, is_cocycle,
    Cochain, CohomologyGroup, CycError, GModule, ModuleHom, Pairing, ShortExactSeq,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Result<T> = std::result::Result<T, CycError>;

/// Sign conventions fixed by this engine, printed as a report header.
pub const CONVENTIONS: &str = "conventions: inhomogeneous bar differential with the module action \
on the leading slot; connecting maps by pointwise lift, coboundary, pull-back; degree-k classes \
embed into the mapping cone of multiplication by n with the parity sign (-1)^k; cone cup \
(v,u) x (v',u') = (v u v', v u u')";

/// Element (v, u) of degree k of the mapping cone of multiplication by n
/// on the bar complex: v is a k-cochain, u a (k-1)-cochain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeElement {
    pub v: Cochain,
    pub u: Cochain,
}

impl ConeElement {
    pub fn degree(&self) -> usize {
        self.v.degree()
    }
}

/// Cone differential: (v, u) -> (dv, du + (-1)^k n v).
pub fn cone_coboundary(x: &ConeElement, n_scalar: i128) -> Result<ConeElement> {
    let k = x.v.degree();
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let v = coboundary(&x.v)?;
    let u = coboundary(&x.u)?.add(&x.v.scale(sign * n_scalar))?;
    Ok(ConeElement { v, u })
}

/// Embed a degree-k cocycle into cone degree k+1 with the parity sign:
/// w -> (0, (-1)^k w).
pub fn cone_boundary(w: &Cochain) -> Result<ConeElement> {
    let k = w.degree();
    if !is_cocycle(w)? {
        return Err(CycError::NotACocycle);
    }
    let v = Cochain::zero(w.n(), k + 1, w.module())?;
    let u = if k % 2 == 0 { w.clone() } else { w.neg() };
    Ok(ConeElement { v, u })
}

/// Pull a degree-k cocycle back to the cone: w -> (w, 0).
pub fn cone_pullback(w: &Cochain) -> Result<ConeElement> {
    if !is_cocycle(w)? {
        return Err(CycError::NotACocycle);
    }
    let u = Cochain::zero(w.n(), w.degree().saturating_sub(1), w.module())?;
    Ok(ConeElement { v: w.clone(), u })
}

/// Cup product on the cone induced by the total-complex diagonal:
/// (v, u) x (v', u') -> (v u v', v u u').
pub fn cone_cup(x: &ConeElement, y: &ConeElement, pairing: &Pairing) -> Result<ConeElement> {
    Ok(ConeElement {
        v: cup(&x.v, &y.v, pairing)?,
        u: cup(&x.v, &y.u, pairing)?,
    })
}

pub fn cone_neg(x: &ConeElement) -> ConeElement {
    ConeElement { v: x.v.neg(), u: x.u.neg() }
}

/// Class-level equality in the cone for n-torsion coefficients, where the
/// cone coboundary space splits componentwise.
pub fn cone_classes_equal(
    x: &ConeElement,
    y: &ConeElement,
    h_v: &CohomologyGroup,
    h_u: &CohomologyGroup,
) -> Result<bool> {
    Ok(h_v.classes_equal(&x.v, &y.v)? && h_u.classes_equal(&x.u, &y.u)?)
}

/// One checked instance of the sign identity.
#[derive(Debug, Clone)]
pub struct SignWitness {
    pub alpha_coeff: i128,
    pub beta_coeff: i128,
    pub equal_as_classes: bool,
    pub equal_as_cochains: bool,
}

/// Report of the boundary/cup sign identity d(a u b) = -(a~ u db), checked
/// in the mapping-cone model (finite-group analogue).
#[derive(Debug, Clone)]
pub struct SignIdentityReport {
    pub n: usize,
    pub analogue: &'static str,
    pub pairs_checked: usize,
    pub failures: Vec<SignWitness>,
    pub passed: bool,
}

/// Check d(alpha u beta) = -(alpha~ u d beta) for 1-cocycles alpha, beta
/// with Z/n coefficients: the left side is the cone boundary of the
/// ordinary cup, the right side couples the cone pullback of alpha with
/// the cone boundary of beta.  Every pair of 1-cocycles is enumerated,
/// plus random redraws so at least 20 pairs are exercised per n.
pub fn verify_sign_identity(n: usize) -> Result<SignIdentityReport> {
    let module = GModule::cyclic(n as i128);
    let h2 = cohomology(n, &module, 2)?;
    let h3 = cohomology(n, &module, 3)?;
    verify_sign_identity_with(n, &h2, &h3)
}

fn verify_sign_identity_with(
    n: usize,
    h2: &CohomologyGroup,
    h3: &CohomologyGroup,
) -> Result<SignIdentityReport> {
    let module = GModule::cyclic(n as i128);
    let pairing = Pairing::multiplication(&module, &module, &module)?;
    let identity = identity_one_cocycle(n)?;

    let mut pairs: Vec<(i128, i128)> = Vec::new();
    for a in 0..n as i128 {
        for b in 0..n as i128 {
            pairs.push((a, b));
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5167);
    while pairs.len() < 20 {
        pairs.push((rng.gen_range(0..n as i128), rng.gen_range(0..n as i128)));
    }

    let mut failures = Vec::new();
    for &(ca, cb) in &pairs {
        let alpha = identity.scale(ca);
        let beta = identity.scale(cb);
        let lhs = cone_boundary(&cup(&alpha, &beta, &pairing)?)?;
        let rhs = cone_neg(&cone_cup(
            &cone_pullback(&alpha)?,
            &cone_boundary(&beta)?,
            &pairing,
        )?);
        let equal_as_cochains = lhs == rhs;
        let equal_as_classes = cone_classes_equal(&lhs, &rhs, h3, h2)?;
        if !equal_as_classes {
            failures.push(SignWitness {
                alpha_coeff: ca,
                beta_coeff: cb,
                equal_as_classes,
                equal_as_cochains,
            });
        }
    }
    let passed = failures.is_empty();
    Ok(SignIdentityReport {
        n,
        analogue: "finite-group-cohomology analogue (mapping cone of multiplication by n)",
        pairs_checked: pairs.len(),
        failures,
        passed,
    })
}

/// Report of the factorization of the Bockstein through the integral
/// connecting map followed by reduction mod n.
#[derive(Debug, Clone)]
pub struct BocksteinReport {
    pub n: usize,
    pub analogue: &'static str,
    pub classes_checked: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// For every class of H^1 and H^2 with Z/n coefficients, compare the
/// Bockstein of 0 -> Z/n -> Z/n^2 -> Z/n -> 0 with the connecting map of
/// 0 -> Z -> Z -> Z/n -> 0 followed by reduction mod n.
pub fn verify_bockstein_factorization(n: usize) -> Result<BocksteinReport> {
    let module = GModule::cyclic(n as i128);
    let groups = [
        cohomology(n, &module, 1)?,
        cohomology(n, &module, 2)?,
        cohomology(n, &module, 3)?,
    ];
    verify_bockstein_factorization_with(n, &groups)
}

fn verify_bockstein_factorization_with(
    n: usize,
    groups: &[CohomologyGroup; 3],
) -> Result<BocksteinReport> {
    let module = GModule::cyclic(n as i128);
    let bock = ShortExactSeq::bockstein(n as i128)?;
    let mult = ShortExactSeq::multiplication_by_n(n as i128)?;
    let reduction = ModuleHom::new(GModule::integers(), module.clone(), vec![vec![1]])?;

    let mut classes_checked = 0usize;
    let mut failures = Vec::new();
    for k in 1..=2usize {
        let hk = &groups[k - 1];
        let target = &groups[k];
        for z in hk.representatives()? {
            classes_checked += 1;
            let via_bockstein = connecting(&bock, &z, None)?;
            let via_integers = connecting(&mult, &z, None)?.map_coefficients(&reduction)?;
            if !target.classes_equal(&via_bockstein, &via_integers)? {
                failures.push(format!("degree {k} class {:?}", hk.class_order(&z)?));
            }
        }
    }
    let passed = failures.is_empty();
    Ok(BocksteinReport {
        n,
        analogue: "finite-group-cohomology analogue of the boundary-map factorization",
        classes_checked,
        failures,
        passed,
    })
}

/// Report of cup-with-t periodicity H^1(Z/n, M) = H^3(Z/n, M).
#[derive(Debug, Clone)]
pub struct PeriodicityReport {
    pub n: usize,
    pub module_orders: Vec<i128>,
    pub analogue: &'static str,
    pub h1_order: Option<i128>,
    pub h3_order: Option<i128>,
    pub injective: bool,
    pub passed: bool,
}

/// Cup with the carry generator t of H^2(Z/n, Z) must map H^1(Z/n, M) to
/// H^3(Z/n, M) bijectively.
pub fn verify_periodicity(n: usize, module: &GModule) -> Result<PeriodicityReport> {
    let t = carry_cocycle_z(n)?;
    let rank = module.rank();
    let table: Vec<Vec<Vec<i128>>> = (0..rank)
        .map(|i| {
            vec![{
                let mut e = vec![0i128; rank];
                e[i] = 1;
                e
            }]
        })
        .collect();
    let pairing = Pairing::new(module.clone(), GModule::integers(), module.clone(), table)?;
    let h1 = cohomology(n, module, 1)?;
    let h3 = cohomology(n, module, 3)?;
    let h1_order = h1.order();
    let h3_order = h3.order();
    let mut injective = true;
    if h1_order.is_some() {
        for z in h1.representatives()? {
            let img = cup(&z, &t, &pairing)?;
            let z_zero = h1.is_coboundary(&z)?;
            let img_zero = h3.is_coboundary(&img)?;
            if img_zero && !z_zero {
                injective = false;
            }
        }
    }
    let passed = h1_order == h3_order && h1_order.is_some() && injective;
    Ok(PeriodicityReport {
        n,
        module_orders: module.orders().to_vec(),
        analogue: "cup with the degree-2 carry generator of H^2(Z/n, Z)",
        h1_order,
        h3_order,
        injective,
        passed,
    })
}

/// Order check |H^k(Z/n, Z/n)| = n plus the cup-generation statement.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub n: usize,
    pub conventions: &'static str,
    /// (degree, computed order, order equals n)
    pub orders: Vec<(usize, Option<i128>, bool)>,
    /// cup of H^1 and H^2 generators generates H^3
    pub cup_generates: bool,
    pub sign: SignIdentityReport,
    pub bockstein: BocksteinReport,
    pub periodicity: Vec<PeriodicityReport>,
    pub passed: bool,
}

/// The full cohomology verification suite for one n.  The cohomology
/// groups of Z/n with Z/n coefficients are computed once and shared by the
/// individual checks.
pub fn full_suite(n: usize) -> Result<SuiteReport> {
    let module = GModule::cyclic(n as i128);
    let groups = [
        cohomology(n, &module, 1)?,
        cohomology(n, &module, 2)?,
        cohomology(n, &module, 3)?,
    ];
    let mut orders = Vec::new();
    for (k, h) in groups.iter().enumerate() {
        let order = h.order();
        orders.push((k + 1, order, order == Some(n as i128)));
    }

    // generators: the identity 1-cocycle and its Bockstein
    let pairing = Pairing::multiplication(&module, &module, &module)?;
    let alpha = identity_one_cocycle(n)?;
    let beta = connecting(&ShortExactSeq::bockstein(n as i128)?, &alpha, None)?;
    let c = cup(&alpha, &beta, &pairing)?;
    let cup_generates = groups[2].class_order(&c)? == Some(n as i128);

    let sign = verify_sign_identity_with(n, &groups[1], &groups[2])?;
    let bockstein = verify_bockstein_factorization_with(n, &groups)?;

    // modules from the periodicity contract: Z/n, Z/n^2, and Z/m for the
    // proper divisors m of n
    let mut periodicity = Vec::new();
    let mut modules = vec![GModule::cyclic(n as i128), GModule::cyclic((n * n) as i128)];
    for m in 2..n as i128 {
        if (n as i128) % m == 0 {
            modules.push(GModule::cyclic(m));
        }
    }
    for m in &modules {
        periodicity.push(verify_periodicity(n, m)?);
    }

    let passed = orders.iter().all(|&(_, _, ok)| ok)
        && cup_generates
        && sign.passed
        && bockstein.passed
        && periodicity.iter().all(|p| p.passed);
    Ok(SuiteReport {
        n,
        conventions: CONVENTIONS,
        orders,
        cup_generates,
        sign,
        bockstein,
        periodicity,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_coboundary_squares_to_zero() {
        for n in [2usize, 3] {
            let module = GModule::cyclic(n as i128);
            let id = identity_one_cocycle(n).unwrap();
            let x = ConeElement {
                v: id.clone(),
                u: Cochain::from_fn(n, 0, &module, |_| vec![1]).unwrap(),
            };
            let dx = cone_coboundary(&x, n as i128).unwrap();
            let ddx = cone_coboundary(&dx, n as i128).unwrap();
            assert!(ddx.v.is_zero() && ddx.u.is_zero());
        }
    }

    #[test]
    fn cone_boundary_and_pullback_are_cocycles() {
        for n in [2usize, 4] {
            let id = identity_one_cocycle(n).unwrap();
            let b = cone_boundary(&id).unwrap();
            let db = cone_coboundary(&b, n as i128).unwrap();
            assert!(db.v.is_zero() && db.u.is_zero());
            let p = cone_pullback(&id).unwrap();
            let dp = cone_coboundary(&p, n as i128).unwrap();
            assert!(dp.v.is_zero() && dp.u.is_zero());
        }
    }

    #[test]
    fn sign_identity_holds_and_is_exact_at_cochain_level() {
        for n in [2usize, 3, 4, 6] {
            let r = verify_sign_identity(n).unwrap();
            assert!(r.passed, "n = {n}: {:?}", r.failures);
            assert!(r.pairs_checked >= 20);
        }
    }

    #[test]
    fn sign_identity_needs_the_minus_sign() {
        // with + instead of - the two sides differ as cochains once n > 2
        let n = 3usize;
        let module = GModule::cyclic(n as i128);
        let pairing = Pairing::multiplication(&module, &module, &module).unwrap();
        let alpha = identity_one_cocycle(n).unwrap();
        let beta = alpha.clone();
        let lhs = cone_boundary(&cup(&alpha, &beta, &pairing).unwrap()).unwrap();
        let rhs_unsigned = cone_cup(
            &cone_pullback(&alpha).unwrap(),
            &cone_boundary(&beta).unwrap(),
            &pairing,
        )
        .unwrap();
        assert_ne!(lhs, rhs_unsigned, "dropping the sign must break the identity");
        assert_eq!(lhs, cone_neg(&rhs_unsigned));
    }

    #[test]
    fn sign_identity_pinned_n2_generators() {
        // alpha = beta = the H^1 generator for n = 2: both sides carry the
        // nonzero degree-2 component x^2 in the cone.
        let n = 2usize;
        let module = GModule::cyclic(2);
        let pairing = Pairing::multiplication(&module, &module, &module).unwrap();
        let alpha = identity_one_cocycle(n).unwrap();
        let lhs = cone_boundary(&cup(&alpha, &alpha, &pairing).unwrap()).unwrap();
        let rhs = cone_neg(
            &cone_cup(
                &cone_pullback(&alpha).unwrap(),
                &cone_boundary(&alpha).unwrap(),
                &pairing,
            )
            .unwrap(),
        );
        assert_eq!(lhs, rhs);
        let h2 = cohomology(n, &module, 2).unwrap();
        assert_eq!(h2.class_order(&lhs.u).unwrap(), Some(2), "the shared side is a generator");
    }

    #[test]
    fn bockstein_factorization_all_n() {
        for n in [2usize, 3, 4, 6] {
            let r = verify_bockstein_factorization(n).unwrap();
            assert!(r.passed, "n = {n}: {:?}", r.failures);
            assert_eq!(r.classes_checked, 2 * n);
        }
    }

    #[test]
    fn periodicity_pinned_cases() {
        let r = verify_periodicity(2, &GModule::cyclic(2)).unwrap();
        assert!(r.passed);
        assert_eq!(r.h1_order, Some(2));
        assert_eq!(r.h3_order, Some(2));

        // H^1(Z/n, Z) = 0: trivially bijective
        let r = verify_periodicity(3, &GModule::integers()).unwrap();
        assert!(r.passed);
        assert_eq!(r.h1_order, Some(1));

        let r = verify_periodicity(6, &GModule::cyclic(3)).unwrap();
        assert!(r.passed);
        assert_eq!(r.h1_order, Some(3));
    }

    #[test]
    fn full_suite_small_n() {
        for n in [2usize, 3] {
            let s = full_suite(n).unwrap();
            assert!(s.passed, "suite failed for n = {n}");
        }
    }
}
