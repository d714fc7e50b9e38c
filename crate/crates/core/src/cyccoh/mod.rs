//! Explicit cohomology of finite cyclic groups G = Z/n with finitely
//! generated abelian coefficient modules: bar-resolution cochains, cup
//! products, connecting homomorphisms, and the verification suites built
//! on them.
//!
//! A module is a list of cyclic orders (0 = an infinite cyclic factor)
//! plus an integer matrix giving the action of the generator of G.  A
//! degree-k cochain is a total table on the n^k group tuples.  Cohomology
//! groups are computed as integer-lattice subquotients via Smith normal
//! form.

mod linalg;
mod verify;

pub use linalg::LinAlgError;
pub use verify::{
    cone_boundary, cone_classes_equal, cone_coboundary, cone_cup, cone_neg, cone_pullback,
    full_suite, verify_bockstein_factorization, verify_periodicity, verify_sign_identity,
    BocksteinReport, ConeElement, PeriodicityReport, SignIdentityReport, SignWitness, SuiteReport,
    CONVENTIONS,
};

use crate::arith::Integer;
use linalg::{Subquotient, TorsionSubquotient};
use num_integer::Integer as NumInteger;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Small integer matrix used for module actions and homomorphisms.
type IMat = Vec<Vec<i128>>;

fn imat_identity(n: usize) -> IMat {
    let mut m = vec![vec![0i128; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn imat_vec(a: &IMat, x: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&v, &xi)| v * xi).sum())
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("group order must be at least 2, got {0}")]
    BadGroupOrder(usize),
    #[error("degree {0} out of the supported range (tables are kept through degree 4)")]
    DegreeOverflow(usize),
    #[error("mismatched modules or group orders: {0}")]
    Mismatch(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("short exact sequence failed validation: {0}")]
    InexactSequence(String),
    #[error("action matrix does not define a module structure: {0}")]
    BadAction(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, CycError>;

/// Highest degree for which cochain tables are materialized.
pub const MAX_DEGREE: usize = 4;

/// Finitely generated abelian group with an action of the generator of
/// G = Z/n: a list of cyclic orders (0 = Z) and the action matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    orders: Vec<i128>,
    action: IMat,
}

impl GModule {
    pub fn new(orders: Vec<i128>, action: IMat) -> Result<Self> {
        if action.len() != orders.len() || action.iter().any(|r| r.len() != orders.len()) {
            return Err(CycError::BadAction("action matrix shape mismatch".into()));
        }
        if orders.iter().any(|&o| o < 0) {
            return Err(CycError::BadAction("orders must be nonnegative".into()));
        }
        let m = GModule { orders, action };
        // The action must send each relation o_j * e_j to zero.
        for j in 0..m.rank() {
            if m.orders[j] == 0 {
                continue;
            }
            let mut col = vec![0i128; m.rank()];
            for i in 0..m.rank() {
                col[i] = m.action[i][j] * m.orders[j];
            }
            if !m.is_zero_elem(&col) {
                return Err(CycError::BadAction(format!(
                    "generator image of order-{} factor {} is not annihilated",
                    m.orders[j], j
                )));
            }
        }
        Ok(m)
    }

    /// Trivial action on the given factor orders.
    pub fn trivial(orders: Vec<i128>) -> Self {
        let action = imat_identity(orders.len());
        GModule { orders, action }
    }

    /// Z/q with trivial action.
    pub fn cyclic(q: i128) -> Self {
        GModule::trivial(vec![q])
    }

    /// Z with trivial action.
    pub fn integers() -> Self {
        GModule::trivial(vec![0])
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[i128] {
        &self.orders
    }

    /// The action of the generator must have order dividing n.
    pub fn check_group_order(&self, n: usize) -> Result<()> {
        let mut pow = imat_identity(self.rank());
        for _ in 0..n {
            let mut next = vec![vec![0i128; self.rank()]; self.rank()];
            for (i, row) in self.action.iter().enumerate() {
                for (k, &aik) in row.iter().enumerate() {
                    if aik != 0 {
                        for (j, cell) in next[i].iter_mut().enumerate() {
                            *cell += aik * pow[k][j];
                        }
                    }
                }
            }
            pow = next;
        }
        for j in 0..self.rank() {
            let mut col: Vec<i128> = (0..self.rank()).map(|i| pow[i][j]).collect();
            col[j] -= 1;
            if !self.is_zero_elem(&col) {
                return Err(CycError::BadAction(format!(
                    "generator action does not have order dividing {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        v.iter()
            .zip(self.orders.iter())
            .map(|(&x, &o)| if o > 0 { x.rem_euclid(o) } else { x })
            .collect()
    }

    fn is_zero_elem(&self, v: &[i128]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn zero(&self) -> Vec<i128> {
        vec![0; self.rank()]
    }

    pub fn add(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        self.reduce(&a.iter().zip(b).map(|(&x, &y)| x + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[i128]) -> Vec<i128> {
        self.reduce(&a.iter().map(|&x| -x).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: i128, a: &[i128]) -> Vec<i128> {
        self.reduce(&a.iter().map(|&x| c * x).collect::<Vec<_>>())
    }

    /// Apply the generator action g^k coordinate-exactly.
    pub fn act_pow(&self, k: usize, v: &[i128]) -> Vec<i128> {
        let mut out = v.to_vec();
        for _ in 0..k {
            out = self.reduce(&imat_vec(&self.action, &out));
        }
        out
    }

    fn is_zero_elem_big(&self, v: &[Integer]) -> bool {
        v.iter().zip(self.orders.iter()).all(|(x, &o)| {
            if o > 0 {
                x.mod_floor(&Integer::from(o)).is_zero()
            } else {
                x.is_zero()
            }
        })
    }
}

/// Total function G^k -> M, stored on the n^k tuples in mixed-radix order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    n: usize,
    degree: usize,
    module: GModule,
    table: Vec<Vec<i128>>,
}

fn tuple_count(n: usize, degree: usize) -> usize {
    n.pow(degree as u32)
}

/// Decode a mixed-radix index into a tuple (g_1, ..., g_k).
fn decode(n: usize, degree: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; degree];
    for slot in (0..degree).rev() {
        out[slot] = idx % n;
        idx /= n;
    }
    out
}

fn encode(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * n + g)
}

impl Cochain {
    pub fn zero(n: usize, degree: usize, module: &GModule) -> Result<Self> {
        if n < 2 {
            return Err(CycError::BadGroupOrder(n));
        }
        if degree > MAX_DEGREE {
            return Err(CycError::DegreeOverflow(degree));
        }
        Ok(Cochain {
            n,
            degree,
            module: module.clone(),
            table: vec![module.zero(); tuple_count(n, degree)],
        })
    }

    pub fn from_fn(
        n: usize,
        degree: usize,
        module: &GModule,
        mut f: impl FnMut(&[usize]) -> Vec<i128>,
    ) -> Result<Self> {
        let mut c = Cochain::zero(n, degree, module)?;
        for idx in 0..c.table.len() {
            let tuple = decode(n, degree, idx);
            c.table[idx] = module.reduce(&f(&tuple));
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn get(&self, tuple: &[usize]) -> &[i128] {
        debug_assert_eq!(tuple.len(), self.degree);
        &self.table[encode(self.n, tuple)]
    }

    pub fn set(&mut self, tuple: &[usize], value: Vec<i128>) {
        let idx = encode(self.n, tuple);
        self.table[idx] = self.module.reduce(&value);
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn add(&self, rhs: &Cochain) -> Result<Cochain> {
        self.compatible(rhs)?;
        let mut out = self.clone();
        for (a, b) in out.table.iter_mut().zip(rhs.table.iter()) {
            *a = self.module.add(a, b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Cochain {
        let mut out = self.clone();
        for a in out.table.iter_mut() {
            *a = self.module.neg(a);
        }
        out
    }

    pub fn sub(&self, rhs: &Cochain) -> Result<Cochain> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: i128) -> Cochain {
        let mut out = self.clone();
        for a in out.table.iter_mut() {
            *a = self.module.scale(c, a);
        }
        out
    }

    fn compatible(&self, rhs: &Cochain) -> Result<()> {
        if self.n != rhs.n || self.degree != rhs.degree || self.module != rhs.module {
            return Err(CycError::Mismatch(format!(
                "degree {} vs {} / n {} vs {}",
                self.degree, rhs.degree, self.n, rhs.n
            )));
        }
        Ok(())
    }

    /// Flatten to a coordinate vector (tuple-major, then module coordinate).
    pub fn flatten(&self) -> Vec<i128> {
        let mut out = Vec::with_capacity(self.table.len() * self.module.rank());
        for v in &self.table {
            out.extend_from_slice(v);
        }
        out
    }

    pub fn from_flat(n: usize, degree: usize, module: &GModule, flat: &[i128]) -> Result<Self> {
        let mut c = Cochain::zero(n, degree, module)?;
        let r = module.rank();
        for (idx, chunk) in flat.chunks(r).enumerate() {
            c.table[idx] = module.reduce(chunk);
        }
        Ok(c)
    }

    /// Push the values through a module homomorphism.
    pub fn map_coefficients(&self, hom: &ModuleHom) -> Result<Cochain> {
        if hom.from != self.module {
            return Err(CycError::Mismatch("coefficient map domain mismatch".into()));
        }
        let mut out = Cochain::zero(self.n, self.degree, &hom.to)?;
        for (idx, v) in self.table.iter().enumerate() {
            out.table[idx] = hom.apply(v)?;
        }
        Ok(out)
    }
}

/// Inhomogeneous bar differential: the alternating sum with the module
/// action on the leading slot.
pub fn coboundary(c: &Cochain) -> Result<Cochain> {
    let k = c.degree;
    if k + 1 > MAX_DEGREE {
        return Err(CycError::DegreeOverflow(k + 1));
    }
    let n = c.n;
    let module = &c.module;
    Cochain::from_fn(n, k + 1, module, |tuple| {
        // g_1 . c(g_2, ..., g_{k+1})
        let mut acc = module.act_pow(tuple[0], c.get(&tuple[1..]));
        // middle terms (-1)^i c(..., g_i g_{i+1}, ...)
        for i in 1..=k {
            let mut merged = Vec::with_capacity(k);
            merged.extend_from_slice(&tuple[..i - 1]);
            merged.push((tuple[i - 1] + tuple[i]) % n);
            merged.extend_from_slice(&tuple[i + 1..]);
            let term = c.get(&merged);
            acc = if i % 2 == 1 {
                module.add(&acc, &module.neg(term))
            } else {
                module.add(&acc, term)
            };
        }
        // (-1)^{k+1} c(g_1, ..., g_k)
        let last = c.get(&tuple[..k]);
        if (k + 1) % 2 == 1 {
            module.add(&acc, &module.neg(last))
        } else {
            module.add(&acc, last)
        }
    })
}

pub fn is_cocycle(c: &Cochain) -> Result<bool> {
    Ok(coboundary(c)?.is_zero())
}

/// G-equivariant bilinear pairing M x N -> P, given on generator pairs.
#[derive(Debug, Clone)]
pub struct Pairing {
    left: GModule,
    right: GModule,
    out: GModule,
    table: Vec<Vec<Vec<i128>>>, // table[i][j] = value of e_i (x) e_j
}

impl Pairing {
    pub fn new(left: GModule, right: GModule, out: GModule, table: Vec<Vec<Vec<i128>>>) -> Result<Self> {
        if table.len() != left.rank() || table.iter().any(|r| r.len() != right.rank()) {
            return Err(CycError::Mismatch("pairing table shape".into()));
        }
        let p = Pairing { left, right, out, table };
        // well-defined: order relations on either side must die
        for i in 0..p.left.rank() {
            for j in 0..p.right.rank() {
                for o in [p.left.orders[i], p.right.orders[j]] {
                    if o > 0 && !p.out.is_zero_elem(&p.out.scale(o, &p.table[i][j])) {
                        return Err(CycError::Mismatch(
                            "pairing not well-defined modulo the factor orders".into(),
                        ));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Multiplication pairing between rank-1 modules.
    pub fn multiplication(left: &GModule, right: &GModule, out: &GModule) -> Result<Self> {
        if left.rank() != 1 || right.rank() != 1 || out.rank() != 1 {
            return Err(CycError::Mismatch("multiplication pairing needs rank-1 modules".into()));
        }
        Pairing::new(left.clone(), right.clone(), out.clone(), vec![vec![vec![1]]])
    }

    pub fn left(&self) -> &GModule {
        &self.left
    }
    pub fn right(&self) -> &GModule {
        &self.right
    }
    pub fn out(&self) -> &GModule {
        &self.out
    }

    pub fn apply(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let mut acc = self.out.zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let term = self.out.scale(xi * yj, &self.table[i][j]);
                acc = self.out.add(&acc, &term);
            }
        }
        acc
    }
}

/// Cochain-level cup product
/// (a u b)(g_1..g_{i+j}) = pairing(a(g_1..g_i), (g_1...g_i) . b(g_{i+1}..g_{i+j})).
pub fn cup(a: &Cochain, b: &Cochain, pairing: &Pairing) -> Result<Cochain> {
    if a.n != b.n {
        return Err(CycError::Mismatch("cup of cochains over different groups".into()));
    }
    if a.module != *pairing.left() || b.module != *pairing.right() {
        return Err(CycError::Mismatch("cup modules do not match the pairing".into()));
    }
    let total = a.degree + b.degree;
    if total > MAX_DEGREE {
        return Err(CycError::DegreeOverflow(total));
    }
    let n = a.n;
    Cochain::from_fn(n, total, pairing.out(), |tuple| {
        let left = a.get(&tuple[..a.degree]);
        let shift: usize = tuple[..a.degree].iter().sum::<usize>() % n;
        let right = pairing.right().act_pow(shift, b.get(&tuple[a.degree..]));
        pairing.apply(left, &right)
    })
}

/// Module homomorphism written on generators.
#[derive(Debug, Clone)]
pub struct ModuleHom {
    pub from: GModule,
    pub to: GModule,
    matrix: IMat, // to.rank x from.rank
}

impl ModuleHom {
    pub fn new(from: GModule, to: GModule, matrix: IMat) -> Result<Self> {
        if matrix.len() != to.rank() || matrix.iter().any(|r| r.len() != from.rank()) {
            return Err(CycError::Mismatch("hom matrix shape".into()));
        }
        let h = ModuleHom { from, to, matrix };
        for j in 0..h.from.rank() {
            let o = h.from.orders[j];
            if o > 0 {
                let col: Vec<i128> = (0..h.to.rank()).map(|i| h.matrix[i][j] * o).collect();
                if !h.to.is_zero_elem(&col) {
                    return Err(CycError::Mismatch(
                        "hom not well-defined modulo the factor orders".into(),
                    ));
                }
            }
        }
        Ok(h)
    }

    pub fn apply(&self, v: &[i128]) -> Result<Vec<i128>> {
        Ok(self.to.reduce(&imat_vec(&self.matrix, v)))
    }

    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }
}

/// Short exact sequence 0 -> A -> B -> C -> 0 of G-modules.
#[derive(Debug, Clone)]
pub struct ShortExactSeq {
    pub inj: ModuleHom,
    pub surj: ModuleHom,
}

impl ShortExactSeq {
    /// Validate exactness: surj . inj = 0, inj injective, surj surjective,
    /// and ker(surj) inside im(inj).
    pub fn new(inj: ModuleHom, surj: ModuleHom) -> Result<Self> {
        if inj.to != surj.from {
            return Err(CycError::InexactSequence("middle modules differ".into()));
        }
        let a = &inj.from;
        let b = &inj.to;
        let c = &surj.to;
        // composition zero
        for j in 0..a.rank() {
            let col_in: Vec<i128> = (0..a.rank()).map(|i| if i == j { 1 } else { 0 }).collect();
            let col = imat_vec(&surj.matrix, &imat_vec(&inj.matrix, &col_in));
            if !c.is_zero_elem(&col) {
                return Err(CycError::InexactSequence("surj . inj != 0".into()));
            }
        }
        // inj injective: preimage of the relation lattice of B is the
        // relation lattice of A
        let pre = linalg::kernel_mod_orders(
            &linalg::from_i128(&inj.matrix),
            &linalg::vec_from_i128(&b.orders),
        );
        for jcol in 0..pre.first().map_or(0, |r| r.len()) {
            let col: Vec<Integer> = (0..a.rank()).map(|i| pre[i][jcol].clone()).collect();
            if !a.is_zero_elem_big(&col) {
                return Err(CycError::InexactSequence("inj has a kernel".into()));
            }
        }
        // surj surjective: columns of [matrix | relations] span Z^rank(C)
        let mut stacked = linalg::from_i128(&surj.matrix);
        for (i, row) in stacked.iter_mut().enumerate() {
            for (j, &o) in c.orders.iter().enumerate() {
                row.push(Integer::from(if i == j { o } else { 0 }));
            }
        }
        let snf = linalg::smith(
            &stacked,
            linalg::SnfOptions { track_u: false, track_u_inv: false, track_v: false },
        );
        let full = snf.rank == c.rank() && snf.diagonal().iter().take(snf.rank).all(|d| d.is_one());
        if !full {
            return Err(CycError::InexactSequence("surjection is not onto".into()));
        }
        // ker(surj) inside im(inj)
        let ker = linalg::kernel_mod_orders(
            &linalg::from_i128(&surj.matrix),
            &linalg::vec_from_i128(&c.orders),
        );
        let mut inj_with_rels = linalg::from_i128(&inj.matrix);
        for (i, row) in inj_with_rels.iter_mut().enumerate() {
            for (j, &o) in b.orders.iter().enumerate() {
                row.push(Integer::from(if i == j { o } else { 0 }));
            }
        }
        for jcol in 0..ker.first().map_or(0, |r| r.len()) {
            let col: Vec<Integer> = (0..b.rank()).map(|i| ker[i][jcol].clone()).collect();
            if linalg::solve(&inj_with_rels, &col).is_none() {
                return Err(CycError::InexactSequence(
                    "kernel of the surjection escapes the image of the injection".into(),
                ));
            }
        }
        Ok(ShortExactSeq { inj, surj })
    }

    /// 0 -> Z/n -> Z/n^2 -> Z/n -> 0 (the Bockstein sequence).
    pub fn bockstein(n: i128) -> Result<Self> {
        let a = GModule::cyclic(n);
        let b = GModule::cyclic(n * n);
        let c = GModule::cyclic(n);
        let inj = ModuleHom::new(a, b.clone(), vec![vec![n]])?;
        let surj = ModuleHom::new(b, c, vec![vec![1]])?;
        ShortExactSeq::new(inj, surj)
    }

    /// 0 -> Z --n--> Z -> Z/n -> 0.
    pub fn multiplication_by_n(n: i128) -> Result<Self> {
        let z = GModule::integers();
        let c = GModule::cyclic(n);
        let inj = ModuleHom::new(z.clone(), z.clone(), vec![vec![n]])?;
        let surj = ModuleHom::new(z, c, vec![vec![1]])?;
        ShortExactSeq::new(inj, surj)
    }

    /// A preimage under the surjection, one value at a time.
    fn lift_value(&self, v: &[i128]) -> Result<Vec<i128>> {
        let b = &self.inj.to;
        let c = &self.surj.to;
        let mut stacked = linalg::from_i128(&self.surj.matrix);
        for (i, row) in stacked.iter_mut().enumerate() {
            for (j, &o) in c.orders.iter().enumerate() {
                row.push(Integer::from(if i == j { o } else { 0 }));
            }
        }
        let sol = linalg::solve(&stacked, &linalg::vec_from_i128(v))
            .ok_or_else(|| CycError::InexactSequence("surjection failed to lift a value".into()))?;
        let small = to_i128_vec(&sol[..b.rank()])?;
        Ok(b.reduce(&small))
    }

    /// A preimage under the injection; errors if the value is outside the
    /// image (exactness guarantees it for connecting-map inputs).
    fn pull_back(&self, v: &[i128]) -> Result<Vec<i128>> {
        let a = &self.inj.from;
        let b = &self.inj.to;
        let mut stacked = linalg::from_i128(&self.inj.matrix);
        for (i, row) in stacked.iter_mut().enumerate() {
            for (j, &o) in b.orders.iter().enumerate() {
                row.push(Integer::from(if i == j { o } else { 0 }));
            }
        }
        let sol = linalg::solve(&stacked, &linalg::vec_from_i128(v))
            .ok_or_else(|| CycError::InexactSequence("value is outside the injection image".into()))?;
        let small = to_i128_vec(&sol[..a.rank()])?;
        Ok(a.reduce(&small))
    }
}

/// Connecting homomorphism H^k(G, C) -> H^{k+1}(G, A): lift the
/// representative through the surjection, take the coboundary, pull back
/// through the injection.
///
/// `lift_tweak`, when given, is added to the lift; its values must lie in
/// the kernel of the surjection, so it exercises a different lift of the
/// same class.
pub fn connecting(
    seq: &ShortExactSeq,
    z: &Cochain,
    lift_tweak: Option<&Cochain>,
) -> Result<Cochain> {
    if z.module != seq.surj.to {
        return Err(CycError::Mismatch("cochain not valued in the quotient module".into()));
    }
    if !is_cocycle(z)? {
        return Err(CycError::NotACocycle);
    }
    let n = z.n;
    let b = &seq.inj.to;
    let mut lift = Cochain::zero(n, z.degree, b)?;
    for idx in 0..lift.table.len() {
        lift.table[idx] = seq.lift_value(&z.table[idx])?;
    }
    if let Some(tweak) = lift_tweak {
        if tweak.module != *b || tweak.degree != z.degree || tweak.n != n {
            return Err(CycError::Mismatch("lift tweak shape".into()));
        }
        for idx in 0..lift.table.len() {
            let v = tweak.table[idx].clone();
            if !seq.surj.to.is_zero_elem(&seq.surj.apply(&v)?) {
                return Err(CycError::Mismatch(
                    "lift tweak must take values in ker(surj)".into(),
                ));
            }
            lift.table[idx] = b.add(&lift.table[idx], &v);
        }
    }
    let db = coboundary(&lift)?;
    let mut out = Cochain::zero(n, z.degree + 1, &seq.inj.from)?;
    for idx in 0..db.table.len() {
        out.table[idx] = seq.pull_back(&db.table[idx])?;
    }
    debug_assert!(is_cocycle(&out)?);
    Ok(out)
}

/// H^k(Z/n, M) presented as (cocycles) / (coboundaries + coefficient
/// relations), with class membership decided by an exact linear solve.
pub struct CohomologyGroup {
    n: usize,
    degree: usize,
    module: GModule,
    sub: QuotientRepr,
}

/// Internal presentation: the torsion path keeps every computation modulo
/// the group order (valid in degree >= 1, where |G| annihilates H^k); the
/// general path handles degree 0 and infinite coefficient modules.
enum QuotientRepr {
    General(Subquotient),
    Torsion(TorsionSubquotient),
}

/// Matrix of the coboundary C^k -> C^{k+1} on flattened coordinates,
/// assembled by applying `coboundary` to the basis cochains.
fn coboundary_matrix(n: usize, degree: usize, module: &GModule) -> Result<linalg::Mat> {
    let rows = tuple_count(n, degree + 1) * module.rank();
    let cols = tuple_count(n, degree) * module.rank();
    let mut out = linalg::zeros(rows, cols);
    for col in 0..cols {
        let mut basis = Cochain::zero(n, degree, module)?;
        let (tuple_idx, coord) = (col / module.rank(), col % module.rank());
        basis.table[tuple_idx][coord] = 1;
        let image = coboundary(&basis)?;
        for (row, val) in image.flatten().into_iter().enumerate() {
            if val != 0 {
                out[row][col] = Integer::from(val);
            }
        }
    }
    Ok(out)
}

fn to_i128_vec(v: &[Integer]) -> Result<Vec<i128>> {
    v.iter()
        .map(|x| x.to_i128().ok_or(CycError::LinAlg(LinAlgError::LabelOverflow)))
        .collect()
}

fn order_vector(n: usize, degree: usize, module: &GModule) -> Vec<i128> {
    let mut out = Vec::with_capacity(tuple_count(n, degree) * module.rank());
    for _ in 0..tuple_count(n, degree) {
        out.extend_from_slice(&module.orders);
    }
    out
}

impl CohomologyGroup {
    pub fn divisors(&self) -> Vec<i128> {
        match &self.sub {
            QuotientRepr::General(sub) => sub
                .divisors()
                .iter()
                .map(|d| d.to_i128().expect("invariant factor fits a machine integer"))
                .collect(),
            QuotientRepr::Torsion(sub) => sub.divisors(),
        }
    }

    pub fn order(&self) -> Option<i128> {
        match &self.sub {
            QuotientRepr::General(sub) => sub
                .order()
                .map(|o| o.to_i128().expect("group order fits a machine integer")),
            QuotientRepr::Torsion(sub) => Some(sub.order()),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_coboundary(&self, z: &Cochain) -> Result<bool> {
        self.check(z)?;
        let flat = linalg::vec_from_i128(&z.flatten());
        match &self.sub {
            QuotientRepr::General(sub) => Ok(sub.is_zero_class(&flat)?),
            QuotientRepr::Torsion(sub) => Ok(sub.is_zero_class(&flat)?),
        }
    }

    pub fn classes_equal(&self, a: &Cochain, b: &Cochain) -> Result<bool> {
        self.is_coboundary(&a.sub(b)?)
    }

    pub fn class_order(&self, z: &Cochain) -> Result<Option<i128>> {
        self.check(z)?;
        let flat = linalg::vec_from_i128(&z.flatten());
        match &self.sub {
            QuotientRepr::General(sub) => {
                let ord = sub.class_order(&flat)?;
                Ok(ord.map(|o| o.to_i128().expect("class order fits a machine integer")))
            }
            QuotientRepr::Torsion(sub) => Ok(Some(sub.class_order(&flat)?)),
        }
    }

    /// A representative cocycle for every class (finite groups only).
    pub fn representatives(&self) -> Result<Vec<Cochain>> {
        let flats = match &self.sub {
            QuotientRepr::General(sub) => sub.representatives()?,
            QuotientRepr::Torsion(sub) => sub.representatives()?,
        };
        let mut out = Vec::new();
        for flat in flats {
            let small = to_i128_vec(&flat)?;
            out.push(Cochain::from_flat(self.n, self.degree, &self.module, &small)?);
        }
        Ok(out)
    }

    fn check(&self, z: &Cochain) -> Result<()> {
        if z.n != self.n || z.degree != self.degree || z.module != self.module {
            return Err(CycError::Mismatch("cochain does not live in this group".into()));
        }
        if !is_cocycle(z)? {
            return Err(CycError::NotACocycle);
        }
        Ok(())
    }
}

/// Compute H^k(Z/n, M) by integer linear algebra on the bar-resolution
/// coboundary matrices.
pub fn cohomology(n: usize, module: &GModule, degree: usize) -> Result<CohomologyGroup> {
    if n < 2 {
        return Err(CycError::BadGroupOrder(n));
    }
    if degree + 1 > MAX_DEGREE {
        return Err(CycError::DegreeOverflow(degree));
    }
    module.check_group_order(n)?;
    let d_out = coboundary_matrix(n, degree, module)?;
    let out_orders = linalg::vec_from_i128(&order_vector(n, degree + 1, module));
    let kernel_basis = linalg::kernel_mod_orders(&d_out, &out_orders);

    // numerator: coboundaries of C^{k-1} plus the coefficient relations
    let m = tuple_count(n, degree) * module.rank();
    let mut numerator_cols: Vec<Vec<Integer>> = Vec::new();
    if degree > 0 {
        let d_in = coboundary_matrix(n, degree - 1, module)?;
        let in_cols = if d_in.is_empty() { 0 } else { d_in[0].len() };
        for j in 0..in_cols {
            numerator_cols.push((0..m).map(|i| d_in[i][j].clone()).collect());
        }
    }
    let orders = order_vector(n, degree, module);
    for (j, &o) in orders.iter().enumerate() {
        if o != 0 {
            let mut col = vec![Integer::zero(); m];
            col[j] = Integer::from(o);
            numerator_cols.push(col);
        }
    }
    let mut numerator = linalg::zeros(m, numerator_cols.len());
    for (j, col) in numerator_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            numerator[i][j] = v.clone();
        }
    }
    // In degree >= 1 the group is annihilated by n, so for finite modules
    // the whole quotient computation runs mod n on machine integers.
    let finite = module.orders.iter().all(|&o| o != 0);
    let sub = if degree >= 1 && finite {
        QuotientRepr::Torsion(TorsionSubquotient::new(&kernel_basis, &numerator, n as i128)?)
    } else {
        QuotientRepr::General(Subquotient::new(kernel_basis, &numerator)?)
    };
    Ok(CohomologyGroup { n, degree, module: module.clone(), sub })
}

/// The carry 2-cocycle generating H^2(Z/n, Z): (a, b) -> 1 if a+b wraps.
pub fn carry_cocycle_z(n: usize) -> Result<Cochain> {
    Cochain::from_fn(n, 2, &GModule::integers(), |t| {
        vec![if t[0] + t[1] >= n { 1 } else { 0 }]
    })
}

/// The identity homomorphism Z/n -> Z/n as a 1-cocycle.
pub fn identity_one_cocycle(n: usize) -> Result<Cochain> {
    Cochain::from_fn(n, 1, &GModule::cyclic(n as i128), |t| vec![t[0] as i128])
}
