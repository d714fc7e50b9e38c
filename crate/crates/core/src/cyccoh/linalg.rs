//! Exact integer linear algebra for the cohomology engine: Smith normal
//! form with transform tracking, kernels of maps into quotient groups, and
//! subquotient presentations (kernel mod image) of finitely generated
//! abelian groups.
//!
//! Matrices are dense row-major `BigInt`, so coefficient growth during
//! elimination costs time but never correctness.  The kernel computation
//! for maps into finite quotients runs entirely modulo the exponent of the
//! quotient, which keeps the hot path bounded.

use crate::arith::Integer;
use num_integer::Integer as NumInteger;
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Mat = Vec<Vec<Integer>>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("group is infinite; enumeration is not possible")]
    InfiniteGroup,
    #[error("quotient label does not fit a machine integer")]
    LabelOverflow,
}

type Result<T> = std::result::Result<T, LinAlgError>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Integer::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Integer::one();
    }
    m
}

pub fn from_i128(rows: &[Vec<i128>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
        .collect()
}

pub fn vec_from_i128(v: &[i128]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

pub fn mat_vec(a: &Mat, x: &[Integer]) -> Vec<Integer> {
    a.iter()
        .map(|row| {
            let mut acc = Integer::zero();
            for (v, xi) in row.iter().zip(x.iter()) {
                if !v.is_zero() && !xi.is_zero() {
                    acc += v * xi;
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = zeros(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    let t = &a[i][k] * &b[k][j];
                    out[i][j] += t;
                }
            }
        }
    }
    out
}

/// Smith normal form u * a * v = s with unimodular u, v.  `u_inv` tracks
/// the inverse of u (used to read off generators of quotient groups).
pub struct Snf {
    pub s: Mat,
    pub u: Option<Mat>,
    pub u_inv: Option<Mat>,
    pub v: Option<Mat>,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Integer> {
        let n = self.s.len().min(if self.s.is_empty() { 0 } else { self.s[0].len() });
        (0..n).map(|i| self.s[i][i].clone()).collect()
    }
}

pub struct SnfOptions {
    pub track_u: bool,
    pub track_u_inv: bool,
    pub track_v: bool,
}

pub fn smith(a: &Mat, opts: SnfOptions) -> Snf {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut s = a.clone();
    let mut u = opts.track_u.then(|| identity(rows));
    let mut u_inv = opts.track_u_inv.then(|| identity(rows));
    let mut v = opts.track_v.then(|| identity(cols));

    // r_i -= q * r_k; on u_inv the inverse acts as c_k += q * c_i
    fn row_sub(s: &mut Mat, u: &mut Option<Mat>, u_inv: &mut Option<Mat>, i: usize, k: usize, q: &Integer) {
        if q.is_zero() {
            return;
        }
        let rk = s[k].clone();
        for (x, y) in s[i].iter_mut().zip(rk.iter()) {
            *x -= q * y;
        }
        if let Some(u) = u {
            let rk = u[k].clone();
            for (x, y) in u[i].iter_mut().zip(rk.iter()) {
                *x -= q * y;
            }
        }
        if let Some(ui) = u_inv {
            for r in ui.iter_mut() {
                let t = q * &r[i];
                r[k] += t;
            }
        }
    }
    fn col_sub(s: &mut Mat, v: &mut Option<Mat>, j: usize, k: usize, q: &Integer) {
        if q.is_zero() {
            return;
        }
        for row in s.iter_mut() {
            let t = q * &row[k];
            row[j] -= t;
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                let t = q * &row[k];
                row[j] -= t;
            }
        }
    }
    fn row_swap(s: &mut Mat, u: &mut Option<Mat>, u_inv: &mut Option<Mat>, i: usize, k: usize) {
        s.swap(i, k);
        if let Some(u) = u {
            u.swap(i, k);
        }
        if let Some(ui) = u_inv {
            for r in ui.iter_mut() {
                r.swap(i, k);
            }
        }
    }
    fn col_swap(s: &mut Mat, v: &mut Option<Mat>, j: usize, k: usize) {
        for row in s.iter_mut() {
            row.swap(j, k);
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
    }

    let dim = rows.min(cols);
    let mut k = 0;
    while k < dim {
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !s[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => s[i][j].abs() < s[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap(&mut s, &mut u, &mut u_inv, k, pi);
        col_swap(&mut s, &mut v, k, pj);

        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if !s[i][k].is_zero() {
                    let q = Euclid::div_euclid(&s[i][k], &s[k][k]);
                    row_sub(&mut s, &mut u, &mut u_inv, i, k, &q);
                    if !s[i][k].is_zero() {
                        row_swap(&mut s, &mut u, &mut u_inv, k, i);
                        clean = false;
                    }
                }
            }
            for j in k + 1..cols {
                if !s[k][j].is_zero() {
                    let q = Euclid::div_euclid(&s[k][j], &s[k][k]);
                    col_sub(&mut s, &mut v, j, k, &q);
                    if !s[k][j].is_zero() {
                        col_swap(&mut s, &mut v, k, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }

        // Divisibility: s[k][k] must divide the remaining block.
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&s[i][j] % &s[k][k]).is_zero() {
                    let ri = s[i].clone();
                    for (x, y) in s[k].iter_mut().zip(ri.iter()) {
                        *x += y;
                    }
                    if let Some(u) = &mut u {
                        let ri = u[i].clone();
                        for (x, y) in u[k].iter_mut().zip(ri.iter()) {
                            *x += y;
                        }
                    }
                    if let Some(ui) = &mut u_inv {
                        for r in ui.iter_mut() {
                            let t = r[k].clone();
                            r[i] -= t;
                        }
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if s[k][k].is_negative() {
            for x in s[k].iter_mut() {
                *x = -x.clone();
            }
            if let Some(u) = &mut u {
                for x in u[k].iter_mut() {
                    *x = -x.clone();
                }
            }
            if let Some(ui) = &mut u_inv {
                for r in ui.iter_mut() {
                    r[k] = -r[k].clone();
                }
            }
        }
        k += 1;
    }
    let rank = (0..dim).take_while(|&i| !s[i][i].is_zero()).count();
    Snf { s, u, u_inv, v, rank }
}

/// Basis (as columns) of { x : a * x = 0 over Z }.
pub fn kernel(a: &Mat) -> Mat {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let snf = smith(a, SnfOptions { track_u: false, track_u_inv: false, track_v: true });
    let v = snf.v.unwrap();
    let mut out = zeros(cols, cols - snf.rank);
    for (bi, j) in (snf.rank..cols).enumerate() {
        for (i, row) in v.iter().enumerate() {
            out[i][bi] = row[j].clone();
        }
    }
    out
}

/// One integer solution of a * x = b, if any.
pub fn solve(a: &Mat, b: &[Integer]) -> Option<Vec<Integer>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let snf = smith(a, SnfOptions { track_u: true, track_u_inv: false, track_v: true });
    let ub = mat_vec(snf.u.as_ref().unwrap(), b);
    let mut y = vec![Integer::zero(); cols];
    for (i, ubi) in ub.iter().enumerate() {
        if i < cols && !snf.s[i][i].is_zero() {
            let (q, r) = ubi.div_rem(&snf.s[i][i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(mat_vec(snf.v.as_ref().unwrap(), &y))
}

/// Lower-triangular basis of span(cols) + modulus * Z^m, computed with all
/// entries bounded by the modulus: start from modulus * I and insert one
/// spanning column at a time with invertible two-column transforms.
///
/// Entries stay below modulus^2 throughout, so the arithmetic runs on
/// machine integers.
pub fn hnf_basis_with_modulus(cols: &[Vec<i128>], modulus: i128) -> Vec<Vec<i128>> {
    let m = cols.len();
    let ncols = if m > 0 { cols[0].len() } else { 0 };
    // h starts as modulus * I; kept lower-triangular with positive diagonal
    let mut h = vec![vec![0i128; m]; m];
    for i in 0..m {
        h[i][i] = modulus;
    }
    for j in 0..ncols {
        let mut v: Vec<i128> = (0..m).map(|i| cols[i][j].rem_euclid(modulus)).collect();
        for i in 0..m {
            if v[i] == 0 {
                continue;
            }
            // combine column i of h with v on the pair of row-i entries
            let (g, x, y) = extended_gcd_i128(h[i][i], v[i]);
            let a0 = h[i][i] / g;
            let aj = v[i] / g;
            // determinant x*a0 + y*aj = 1: an invertible transform of the
            // column pair; residues of multiples of the modulus may be
            // dropped because modulus * Z^m stays inside the lattice
            for r in i..m {
                let hi = h[r][i];
                let vi = v[r];
                h[r][i] = (x * hi + y * vi).rem_euclid(modulus);
                v[r] = (a0 * vi - aj * hi).rem_euclid(modulus);
            }
            // the pivot itself must stay the exact gcd, not its residue
            h[i][i] = g;
            v[i] = 0;
        }
        debug_assert!(v.iter().all(|x| *x == 0));
    }
    // off-diagonal reduction: entries below a pivot reduced mod the pivot
    // of their own row, via invertible column operations
    for i in 0..m {
        for r in i + 1..m {
            if h[r][i] != 0 {
                let q = h[r][i].div_euclid(h[r][r]);
                if q != 0 {
                    for rr in r..m {
                        h[rr][i] -= q * h[rr][r];
                    }
                }
            }
        }
    }
    h
}

fn extended_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Basis of a column span (no modulus assumption).
pub fn lattice_basis(cols: &Mat) -> Mat {
    let m = cols.len();
    let snf = smith(cols, SnfOptions { track_u: false, track_u_inv: true, track_v: false });
    let diag = snf.diagonal();
    let u_inv = snf.u_inv.unwrap();
    let mut out = zeros(m, snf.rank);
    for j in 0..snf.rank {
        for i in 0..m {
            out[i][j] = &u_inv[i][j] * &diag[j];
        }
    }
    out
}

/// Basis of the lattice { x in Z^m : (d * x)_j = 0 mod orders[j] for all j },
/// where orders[j] = 0 demands exact vanishing.
///
/// When every order is positive the lattice contains N * Z^m for
/// N = lcm(orders), so it is carried as span(W) + N * Z^m with all entries
/// of W reduced mod N; constraints are folded in one row at a time on
/// machine integers, which keeps the working set at m x m with bounded
/// entries.
pub fn kernel_mod_orders(d: &Mat, orders: &[Integer]) -> Mat {
    let m = if d.is_empty() { 0 } else { d[0].len() };
    if orders.iter().any(|o| o.is_zero()) {
        return kernel_mod_orders_general(d, orders);
    }
    let mut modulus = Integer::one();
    for o in orders {
        modulus = &modulus / modulus.gcd(o) * o;
    }
    let modulus = modulus
        .to_i128()
        .expect("coefficient-order lcm fits a machine integer");
    // sparse rows of d with entries reduced per row order
    let mut w_cols: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    for (row, order_big) in d.iter().zip(orders.iter()) {
        let order = order_big.to_i128().expect("order fits a machine integer");
        let sparse: Vec<(usize, i128)> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.mod_floor(order_big).to_i128().unwrap()))
            .collect();
        if sparse.is_empty() {
            continue;
        }
        let c = w_cols[0].len();
        // w = row . W mod order
        let mut w = vec![0i128; c];
        for (j, wj) in w.iter_mut().enumerate() {
            let mut acc = 0i128;
            for &(k, rv) in &sparse {
                acc += rv * w_cols[k][j];
            }
            *wj = acc.rem_euclid(order);
        }
        // Unimodular column ops bringing w to (g, 0, ..., 0); W entries may
        // be reduced mod N freely since N * Z^m is part of the lattice.
        for j in 1..c {
            if w[j] == 0 {
                continue;
            }
            if w[0] == 0 {
                w.swap(0, j);
                for r in w_cols.iter_mut() {
                    r.swap(0, j);
                }
                continue;
            }
            let (g, x, y) = extended_gcd_i128(w[0], w[j]);
            let a0 = w[0] / g;
            let aj = w[j] / g;
            for r in w_cols.iter_mut() {
                let c0 = r[0];
                let cj = r[j];
                r[0] = (x * c0 + y * cj).rem_euclid(modulus);
                r[j] = (a0 * cj - aj * c0).rem_euclid(modulus);
            }
            // x*w0 + y*wj = g and a0*wj - aj*w0 = 0 exactly
            w[0] = g;
            w[j] = 0;
        }
        let g = w[0].rem_euclid(order);
        if g == 0 {
            continue;
        }
        let q = order / gcd_i128(g, order);
        if q != 1 {
            for r in w_cols.iter_mut() {
                r[0] = (r[0] * q).rem_euclid(modulus);
            }
        }
    }
    let h = hnf_basis_with_modulus(&w_cols, modulus);
    from_i128(&h)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// General (possibly infinite-order) case: kernel of the stacked integer
/// matrix [d | relations], projected back to the x-coordinates.
fn kernel_mod_orders_general(d: &Mat, orders: &[Integer]) -> Mat {
    let rows = d.len();
    let m = if rows > 0 { d[0].len() } else { 0 };
    let mut stacked = d.clone();
    for (j, o) in orders.iter().enumerate() {
        if !o.is_zero() {
            for (i, row) in stacked.iter_mut().enumerate() {
                row.push(if i == j { o.clone() } else { Integer::zero() });
            }
        }
    }
    let ker = kernel(&stacked);
    let kcols = if ker.is_empty() { 0 } else { ker[0].len() };
    let mut proj = zeros(m, kcols);
    for j in 0..kcols {
        for i in 0..m {
            proj[i][j] = ker[i][j].clone();
        }
    }
    lattice_basis(&proj)
}


/// Forward substitution in a lower-triangular basis with positive
/// diagonal; None when the vector is outside the lattice.
pub fn triangular_solve(t: &[Vec<i128>], z: &[Integer]) -> Option<Vec<Integer>> {
    let m = t.len();
    let mut residual: Vec<Integer> = z.to_vec();
    let mut coords = vec![Integer::zero(); m];
    for i in 0..m {
        let (q, r) = residual[i].div_rem(&Integer::from(t[i][i]));
        if !r.is_zero() {
            return None;
        }
        for row in i..m {
            if t[row][i] != 0 {
                let s = &q * Integer::from(t[row][i]);
                residual[row] -= s;
            }
        }
        coords[i] = q;
    }
    if residual.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Diagonalize a matrix over the moves that preserve the quotient
/// Z^r / (colspan + bound * Z^r): row and column operations plus entry
/// reduction mod bound.  Returns the diagonal entries reached.
fn modular_diagonalize(a: &[Vec<i128>], bound: i128) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut s: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(bound)).collect())
        .collect();
    let dim = rows.min(cols);
    let mut k = 0usize;
    let mut diag = Vec::new();
    while k < dim {
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if s[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| s[i][j].abs() < s[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap(k, pi);
        for row in s.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if s[i][k] % s[k][k] != 0 {
                    let q = s[i][k].div_euclid(s[k][k]);
                    for j in k..cols {
                        s[i][j] = (s[i][j] - q * s[k][j]).rem_euclid(bound);
                    }
                    s.swap(k, i);
                    clean = false;
                } else if s[i][k] != 0 {
                    let q = s[i][k] / s[k][k];
                    for j in k..cols {
                        s[i][j] = (s[i][j] - q * s[k][j]).rem_euclid(bound);
                    }
                }
            }
            for j in k + 1..cols {
                if s[k][j] % s[k][k] != 0 {
                    let q = s[k][j].div_euclid(s[k][k]);
                    for row in s.iter_mut().skip(k) {
                        let t = row[k];
                        row[j] = (row[j] - q * t).rem_euclid(bound);
                    }
                    for row in s.iter_mut().skip(k) {
                        row.swap(k, j);
                    }
                    clean = false;
                } else if s[k][j] != 0 {
                    let q = s[k][j] / s[k][k];
                    for row in s.iter_mut().skip(k) {
                        let t = row[k];
                        row[j] = (row[j] - q * t).rem_euclid(bound);
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(s[k][k]);
        k += 1;
    }
    // coordinates without a pivot only carry the implicit bound relation
    for _ in k..rows {
        diag.push(0);
    }
    diag
}

/// Invariant factors (ascending divisibility, 1s dropped) of the finite
/// group (+) Z/e_i given the cyclic orders e_i.
fn assemble_invariant_factors(mut orders: Vec<i128>) -> Vec<i128> {
    orders.retain(|&e| e != 1);
    if orders.is_empty() {
        return Vec::new();
    }
    // per-prime exponent lists
    let mut primes: Vec<i128> = Vec::new();
    for &e in &orders {
        let mut e = e;
        let mut p = 2;
        while p * p <= e {
            if e % p == 0 {
                if !primes.contains(&p) {
                    primes.push(p);
                }
                while e % p == 0 {
                    e /= p;
                }
            }
            p += 1;
        }
        if e > 1 && !primes.contains(&e) {
            primes.push(e);
        }
    }
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    let mut width = 0usize;
    for &p in &primes {
        let mut exps: Vec<u32> = orders
            .iter()
            .map(|&e| {
                let mut e = e;
                let mut a = 0;
                while e % p == 0 {
                    e /= p;
                    a += 1;
                }
                a
            })
            .filter(|&a| a > 0)
            .collect();
        exps.sort_unstable_by(|a, b| b.cmp(a)); // descending
        width = width.max(exps.len());
        per_prime.push(exps);
    }
    let mut factors = vec![1i128; width];
    for (pi, p) in primes.iter().enumerate() {
        for (slot, &a) in per_prime[pi].iter().enumerate() {
            factors[slot] *= p.pow(a);
        }
    }
    factors.sort_unstable(); // ascending divisibility holds by construction
    factors.retain(|&d| d != 1);
    factors
}

/// Subquotient K / N of a lattice pair with N known to contain
/// `bound * K`: all quotient arithmetic runs modulo the bound.
///
/// `basis` is the lower-triangular kernel basis (from
/// [`kernel_mod_orders`]); `numerator` columns must lie in K.
pub struct TorsionSubquotient {
    basis: Vec<Vec<i128>>,
    numer: Vec<Vec<i128>>, // triangular basis of N in K-coordinates
    bound: i128,
    divisors: Vec<i128>,
}

impl TorsionSubquotient {
    pub fn new(basis_big: &Mat, numerator: &Mat, bound: i128) -> Result<Self> {
        let m = basis_big.len();
        let basis: Vec<Vec<i128>> = basis_big
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.to_i128().ok_or(LinAlgError::LabelOverflow))
                    .collect::<Result<Vec<i128>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        // numerator generators in K-coordinates, reduced mod bound
        let ncols = if numerator.is_empty() { 0 } else { numerator[0].len() };
        let mut coord_cols: Vec<Vec<i128>> = vec![vec![0; ncols]; m];
        for j in 0..ncols {
            let col: Vec<Integer> = numerator.iter().map(|row| row[j].clone()).collect();
            let c = triangular_solve(&basis, &col).ok_or(LinAlgError::NotInLattice)?;
            for i in 0..m {
                coord_cols[i][j] = c[i].mod_floor(&Integer::from(bound)).to_i128().unwrap();
            }
        }
        let numer = hnf_basis_with_modulus(&coord_cols, bound);
        let diag = modular_diagonalize(&numer, bound);
        let orders: Vec<i128> = diag.iter().map(|&d| gcd_i128(d, bound)).collect();
        let divisors = assemble_invariant_factors(orders);
        Ok(TorsionSubquotient { basis, numer, bound, divisors })
    }

    pub fn divisors(&self) -> Vec<i128> {
        self.divisors.clone()
    }

    pub fn order(&self) -> i128 {
        self.numer.iter().enumerate().map(|(i, row)| row[i]).product()
    }

    /// K-coordinates of z reduced mod the bound; errors outside K.
    fn small_coords(&self, z: &[Integer]) -> Result<Vec<i128>> {
        let c = triangular_solve(&self.basis, z).ok_or(LinAlgError::NotInLattice)?;
        Ok(c
            .iter()
            .map(|x| x.mod_floor(&Integer::from(self.bound)).to_i128().unwrap())
            .collect())
    }

    /// Membership of a reduced coordinate vector in the numerator lattice.
    fn in_numerator(&self, coords: &[i128]) -> bool {
        let m = self.numer.len();
        let mut residual = coords.to_vec();
        for i in 0..m {
            if residual[i] % self.numer[i][i] != 0 {
                return false;
            }
            let q = residual[i] / self.numer[i][i];
            if q != 0 {
                for row in i..m {
                    residual[row] -= q * self.numer[row][i];
                }
            }
        }
        // the triangular pass zeroes everything exactly when inside
        residual.iter().all(|&x| x == 0)
    }

    pub fn is_zero_class(&self, z: &[Integer]) -> Result<bool> {
        let coords = self.small_coords(z)?;
        Ok(self.in_numerator(&coords))
    }

    pub fn class_order(&self, z: &[Integer]) -> Result<i128> {
        let coords = self.small_coords(z)?;
        for k in 1..=self.bound {
            if self.bound % k != 0 {
                continue;
            }
            let scaled: Vec<i128> = coords.iter().map(|&c| (c * k).rem_euclid(self.bound)).collect();
            if self.in_numerator(&scaled) {
                return Ok(k);
            }
        }
        Ok(self.bound)
    }

    /// One representative per class: the triangular box of the numerator
    /// basis, mapped through the kernel basis.
    pub fn representatives(&self) -> Result<Vec<Vec<Integer>>> {
        let m = self.numer.len();
        let total = self.order();
        if total > 100_000 {
            return Err(LinAlgError::InfiniteGroup);
        }
        let mut labels: Vec<Vec<i128>> = vec![vec![0; m]];
        for i in 0..m {
            let d = self.numer[i][i];
            if d == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(labels.len() * d as usize);
            for l in &labels {
                for v in 0..d {
                    let mut l2 = l.clone();
                    l2[i] = v;
                    next.push(l2);
                }
            }
            labels = next;
        }
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let mut vec = vec![Integer::zero(); self.basis.len()];
            for (i, &ci) in l.iter().enumerate() {
                if ci != 0 {
                    for (row, velem) in vec.iter_mut().enumerate() {
                        *velem += Integer::from(self.basis[row][i] * ci);
                    }
                }
            }
            out.push(vec);
        }
        Ok(out)
    }
}

/// Presentation of K / N where K is a full-column-rank lattice (columns of
/// `basis`) and N is spanned by `numerator` columns (all inside K).
pub struct Subquotient {
    basis: Mat, // m x r
    snf_basis: Snf,
    u: Mat,     // r x r, from the SNF of the numerator coefficients
    u_inv: Mat, // r x r
    diag: Vec<Integer>, // length r: invariant factors (1s kept, 0 = free)
}

impl Subquotient {
    pub fn new(basis: Mat, numerator: &Mat) -> Result<Self> {
        let r = if basis.is_empty() { 0 } else { basis[0].len() };
        let snf_basis = smith(
            &basis,
            SnfOptions { track_u: true, track_u_inv: false, track_v: true },
        );
        debug_assert_eq!(snf_basis.rank, r, "kernel basis must have full column rank");
        let ncols = if numerator.is_empty() { 0 } else { numerator[0].len() };
        let mut coeffs = zeros(r, ncols);
        for j in 0..ncols {
            let col: Vec<Integer> = numerator.iter().map(|row| row[j].clone()).collect();
            let c = solve_with_snf(&snf_basis, r, &col).ok_or(LinAlgError::NotInLattice)?;
            for i in 0..r {
                coeffs[i][j] = c[i].clone();
            }
        }
        let snf_n = smith(
            &coeffs,
            SnfOptions { track_u: true, track_u_inv: true, track_v: false },
        );
        let mut diag = vec![Integer::zero(); r];
        for (i, d) in snf_n.diagonal().into_iter().enumerate() {
            diag[i] = d.abs();
        }
        Ok(Subquotient {
            basis,
            snf_basis,
            u: snf_n.u.unwrap(),
            u_inv: snf_n.u_inv.unwrap(),
            diag,
        })
    }

    /// Invariant factors of the quotient with the trivial ones dropped;
    /// 0 denotes an infinite cyclic factor.
    pub fn divisors(&self) -> Vec<Integer> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn order(&self) -> Option<Integer> {
        let mut acc = Integer::one();
        for d in &self.diag {
            if d.is_zero() {
                return None;
            }
            acc *= d;
        }
        Some(acc)
    }

    /// Normal-form label of a vector's class; errors if it is outside K.
    pub fn coords(&self, z: &[Integer]) -> Result<Vec<Integer>> {
        let r = self.diag.len();
        let c = solve_with_snf(&self.snf_basis, r, z).ok_or(LinAlgError::NotInLattice)?;
        let y = mat_vec(&self.u, &c);
        let mut out = vec![Integer::zero(); r];
        for i in 0..r {
            out[i] = if self.diag[i].is_positive() { y[i].mod_floor(&self.diag[i]) } else { y[i].clone() };
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, z: &[Integer]) -> Result<bool> {
        Ok(self.coords(z)?.iter().all(|c| c.is_zero()))
    }

    /// Additive order of the class of z (None = infinite).
    pub fn class_order(&self, z: &[Integer]) -> Result<Option<Integer>> {
        let coords = self.coords(z)?;
        let mut ord = Integer::one();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.diag[i].is_zero() {
                return Ok(None);
            }
            let o = &self.diag[i] / c.gcd(&self.diag[i]);
            ord = &ord / ord.gcd(&o) * o;
        }
        Ok(Some(ord))
    }

    /// Representative vectors of every class; requires a finite quotient.
    pub fn representatives(&self) -> Result<Vec<Vec<Integer>>> {
        let r = self.diag.len();
        if self.diag.iter().any(|d| d.is_zero()) {
            return Err(LinAlgError::InfiniteGroup);
        }
        let m = self.basis.len();
        // generator i of the quotient corresponds to basis * u_inv[:, i]
        let mut gens = zeros(m, r);
        for i in 0..r {
            let col: Vec<Integer> = (0..r).map(|k| self.u_inv[k][i].clone()).collect();
            let g = mat_vec(&self.basis, &col);
            for (row, val) in g.into_iter().enumerate() {
                gens[row][i] = val;
            }
        }
        let mut labels: Vec<Vec<Integer>> = vec![vec![Integer::zero(); r]];
        for (i, d) in self.diag.iter().enumerate() {
            let dn = d.to_i128().ok_or(LinAlgError::LabelOverflow)?;
            let mut next = Vec::new();
            for l in &labels {
                for v in 0..dn {
                    let mut l2 = l.clone();
                    l2[i] = Integer::from(v);
                    next.push(l2);
                }
            }
            labels = next;
        }
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            out.push(mat_vec(&gens, &l));
        }
        Ok(out)
    }
}

/// Solve basis * c = z given a precomputed SNF of the (full column rank)
/// basis matrix.
fn solve_with_snf(snf: &Snf, r: usize, z: &[Integer]) -> Option<Vec<Integer>> {
    let uz = mat_vec(snf.u.as_ref().unwrap(), z);
    let mut y = vec![Integer::zero(); r];
    for (i, uzi) in uz.iter().enumerate() {
        if i < r {
            let (q, rem) = uzi.div_rem(&snf.s[i][i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !uzi.is_zero() {
            return None;
        }
    }
    Some(mat_vec(snf.v.as_ref().unwrap(), &y))
}
