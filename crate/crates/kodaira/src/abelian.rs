//! Exact finitely generated abelian group arithmetic.
//!
//! Everything here is built on arbitrary-precision integers: Smith normal
//! form with unimodular transforms, cokernels, discriminant groups of fiber
//! intersection matrices, and the handful of group operations the rest of the
//! crate needs (quotients, duals, element orders).

use crate::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows.iter().flatten().map(|&v| BigInt::from(v)).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Determinant by cofactor expansion; only used on small matrices.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        match n {
            0 => BigInt::one(),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut det = BigInt::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let minor = self.strike(0, j).determinant();
                    if j % 2 == 0 {
                        det += a * minor;
                    } else {
                        det -= a * minor;
                    }
                }
                det
            }
        }
    }

    fn strike(&self, row: usize, col: usize) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows - 1, self.cols - 1);
        let mut oi = 0;
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let mut oj = 0;
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                out.set(oi, oj, self.get(i, j).clone());
                oj += 1;
            }
            oi += 1;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, row: usize) {
        for j in 0..self.cols {
            let v = -self.get(row, j);
            self.set(row, j, v);
        }
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        // Entries fit in i64 everywhere in practice; emit numbers when possible.
        let numeric: Option<Vec<Vec<i64>>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.parse::<i64>().ok()).collect())
            .collect();
        match numeric {
            Some(n) => n.serialize(s),
            None => rows.serialize(s),
        }
    }
}

/// Result of the Smith normal form computation: `left * m * right` is
/// diagonal with the invariant factors on the diagonal (zeros last).
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub factors: Vec<BigUint>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

/// Smith normal form with unimodular transforms.
///
/// Pivoting is deterministic: the smallest-absolute-value nonzero entry of
/// the remaining submatrix, ties broken by row-major position.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut a = m.clone();
    let mut left = IntMatrix::identity(m.rows());
    let mut right = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());

    'outer: for t in 0..n {
        // Pick the pivot for step t; stop if the submatrix is zero.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..a.rows() {
            for j in t..a.cols() {
                if !a.get(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break 'outer };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..a.rows() {
                if !a.get(i, t).is_zero() {
                    let q = -a.get(i, t).div_floor(a.get(t, t));
                    a.add_row(i, t, &q);
                    left.add_row(i, t, &q);
                    if !a.get(i, t).is_zero() {
                        // Remainder is strictly smaller: promote it to pivot.
                        a.swap_rows(t, i);
                        left.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Clear row t right of the pivot.
            for j in t + 1..a.cols() {
                if !a.get(t, j).is_zero() {
                    let q = -a.get(t, j).div_floor(a.get(t, t));
                    a.add_col(j, t, &q);
                    right.add_col(j, t, &q);
                    if !a.get(t, j).is_zero() {
                        a.swap_cols(t, j);
                        right.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the rest of the submatrix by the pivot.
            let mut fixed = true;
            'divcheck: for i in t + 1..a.rows() {
                for j in t + 1..a.cols() {
                    if !a.get(i, j).mod_floor(a.get(t, t)).is_zero() {
                        a.add_row(t, i, &BigInt::one());
                        left.add_row(t, i, &BigInt::one());
                        fixed = false;
                        break 'divcheck;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let factors = (0..n)
        .map(|t| a.get(t, t).magnitude().clone())
        .collect();
    SmithNormalForm { factors, left, right }
}

/// Finitely generated abelian group in invariant-factor normal form:
/// `Z/d_1 + ... + Z/d_k + Z^free_rank` with `d_i | d_{i+1}` and every
/// `d_i >= 2`. The representation is unique, so equality is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    invariant_factors: Vec<BigUint>,
    free_rank: usize,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup { invariant_factors: vec![], free_rank: 0 }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            FgAbelianGroup { invariant_factors: vec![BigUint::from(n)], free_rank: 0 }
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { invariant_factors: vec![], free_rank: rank }
    }

    /// Build the normal form from an arbitrary list of cyclic orders
    /// (0 meaning an infinite cyclic factor, 1 factors dropped).
    pub fn from_orders(orders: &[u64]) -> Self {
        let big: Vec<BigUint> = orders.iter().map(|&d| BigUint::from(d)).collect();
        Self::from_big_orders(&big)
    }

    pub fn from_big_orders(orders: &[BigUint]) -> Self {
        let free_rank = orders.iter().filter(|d| d.is_zero()).count();
        let mut fac: Vec<BigUint> =
            orders.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        // Normalize to a divisibility chain via pairwise gcd/lcm passes.
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..fac.len() {
                for j in i + 1..fac.len() {
                    let (a, b) = (fac[i].clone(), fac[j].clone());
                    if !(&b % &a).is_zero() {
                        let g = a.gcd(&b);
                        let l = &a / &g * &b;
                        fac[i] = g;
                        fac[j] = l;
                        changed = true;
                    }
                }
            }
        }
        fac.retain(|d| !d.is_one());
        fac.sort();
        FgAbelianGroup { invariant_factors: fac, free_rank }
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders: Vec<BigUint> = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        let mut g = Self::from_big_orders(&orders);
        g.free_rank = self.free_rank + other.free_rank;
        g
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group; `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }

    pub fn is_cyclic(&self) -> bool {
        match self.free_rank {
            0 => self.invariant_factors.len() <= 1,
            1 => self.invariant_factors.is_empty(),
            _ => false,
        }
    }

    /// `Hom(G, Q/Z)`; defined only for finite groups.
    pub fn dual(&self) -> Result<FgAbelianGroup> {
        if self.free_rank > 0 {
            return Err(Error::InfiniteDual(self.free_rank));
        }
        Ok(self.clone())
    }

    /// Element with the given torsion residues and free coordinates.
    pub fn element(&self, torsion: &[i64], free: &[i64]) -> Result<GroupElement> {
        if torsion.len() != self.invariant_factors.len() || free.len() != self.free_rank {
            return Err(Error::ElementMismatch(format!(
                "expected {} torsion and {} free coordinates",
                self.invariant_factors.len(),
                self.free_rank
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&c, d)| BigInt::from(c).mod_floor(&BigInt::from_biguint(Sign::Plus, d.clone())))
            .map(|c| c.magnitude().clone())
            .collect();
        Ok(GroupElement {
            parent: self.clone(),
            torsion,
            free: free.iter().map(|&c| BigInt::from(c)).collect(),
        })
    }

    /// Quotient by the subgroup generated by the given elements.
    pub fn quotient(&self, generators: &[GroupElement]) -> Result<FgAbelianGroup> {
        for g in generators {
            if g.parent != *self {
                return Err(Error::ElementMismatch(
                    "quotient generator lies in a different group".into(),
                ));
            }
        }
        // Relation matrix: columns are the defining relations d_i e_i plus
        // the images of the generators; the quotient is its cokernel.
        let k = self.invariant_factors.len();
        let n = k + self.free_rank;
        let mut rel = IntMatrix::zero(n, k + generators.len());
        for (i, d) in self.invariant_factors.iter().enumerate() {
            rel.set(i, i, BigInt::from_biguint(Sign::Plus, d.clone()));
        }
        for (j, g) in generators.iter().enumerate() {
            for (i, c) in g.torsion.iter().enumerate() {
                rel.set(i, k + j, BigInt::from_biguint(Sign::Plus, c.clone()));
            }
            for (i, c) in g.free.iter().enumerate() {
                rel.set(k + i, k + j, c.clone());
            }
        }
        Ok(cokernel(&rel))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> =
            self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Element of an [`FgAbelianGroup`]: one reduced residue per invariant
/// factor plus one integer per free rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    parent: FgAbelianGroup,
    torsion: Vec<BigUint>,
    free: Vec<BigInt>,
}

impl GroupElement {
    pub fn parent(&self) -> &FgAbelianGroup {
        &self.parent
    }

    /// Exact order of the element; `None` means infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut ord = BigUint::one();
        for (c, d) in self.torsion.iter().zip(self.parent.invariant_factors.iter()) {
            let o = d / c.gcd(d);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }
}

/// `Z^rows / im(m)` in invariant-factor normal form.
pub fn cokernel(m: &IntMatrix) -> FgAbelianGroup {
    let snf = smith_normal_form(m);
    let mut orders: Vec<BigUint> = snf.factors;
    // Rows not reached by any invariant factor contribute free summands.
    orders.extend(std::iter::repeat_n(
        BigUint::zero(),
        m.rows() - m.rows().min(m.cols()),
    ));
    FgAbelianGroup::from_big_orders(&orders)
}

/// Primitive positive generator of the kernel of `m`, when the kernel is
/// one-dimensional and generated by a vector with all coordinates positive.
/// For a fiber intersection matrix this is the multiplicity (mark) vector.
pub fn positive_kernel_vector(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let n = m.cols();
    let rank = snf.factors.iter().filter(|d| !d.is_zero()).count();
    let kernel_dim = n - rank;
    if kernel_dim != 1 {
        return Err(Error::NonFiberMatrix(format!(
            "kernel has rank {kernel_dim}, expected 1"
        )));
    }
    // Columns of the right transform at zeroed diagonal positions span the kernel.
    let j = (0..n)
        .find(|&j| j >= snf.factors.len() || snf.factors[j].is_zero())
        .expect("kernel generator column exists");
    let mut v: Vec<BigInt> = (0..n).map(|i| snf.right.get(i, j).clone()).collect();
    if v.iter().any(|c| c.is_negative()) {
        if v.iter().any(|c| c.is_positive()) {
            return Err(Error::NonFiberMatrix(
                "kernel generator has mixed signs; not a multiplicity vector".into(),
            ));
        }
        for c in &mut v {
            *c = -&*c;
        }
    }
    if v.iter().any(|c| c.is_zero()) {
        return Err(Error::NonFiberMatrix(
            "kernel generator has a zero coordinate".into(),
        ));
    }
    Ok(v)
}

/// Discriminant group of a fiber intersection matrix: the middle cohomology
/// of `Z^n --q--> Z^n --deg--> Z`, where `deg` is the total-degree map
/// weighted by the multiplicity vector (the primitive positive kernel
/// generator of `q`). For reduced (cycle) matrices the weights are all 1 and
/// this is literally `ker(sum)/im(q)`.
pub fn discriminant_group(intersection: &IntMatrix) -> Result<FgAbelianGroup> {
    if !intersection.is_symmetric() {
        return Err(Error::InvalidMatrix("intersection matrix must be symmetric".into()));
    }
    let n = intersection.rows();
    if n == 0 {
        return Ok(FgAbelianGroup::trivial());
    }
    let a = positive_kernel_vector(intersection)?;
    // Rows must have total degree 0 against the multiplicity vector; by
    // symmetry this is automatic (q·a = 0 implies aᵀ·q = 0), but we keep the
    // explicit check as the advertised rejection of non-fiber matrices.
    for i in 0..n {
        let deg: BigInt = (0..n).map(|j| intersection.get(i, j) * &a[j]).sum();
        if !deg.is_zero() {
            return Err(Error::NonFiberMatrix(format!("row {i} has total degree {deg}")));
        }
    }
    if n == 1 {
        // Single component: the degree-zero sublattice is trivial.
        return Ok(FgAbelianGroup::trivial());
    }
    // Basis of ker(deg) in Z^n: columns of a unimodular W with a·W = (g, 0, ..., 0).
    let weight_row = {
        let mut w = IntMatrix::zero(1, n);
        for (j, c) in a.iter().enumerate() {
            w.set(0, j, c.clone());
        }
        w
    };
    let snf = smith_normal_form(&weight_row);
    let w = snf.right; // a · w = (g, 0, ..., 0)
    // Express each row of the intersection matrix in the kernel basis
    // (columns 1..n of w): solve w x = row, keep coordinates 1..n.
    let w_inv = unimodular_inverse(&w);
    let coords = w_inv.mul(&intersection.transpose()); // n × n; column j = coords of row j
    let mut rel = IntMatrix::zero(n - 1, n);
    for i in 1..n {
        for j in 0..n {
            rel.set(i - 1, j, coords.get(i, j).clone());
        }
    }
    // Coordinate 0 must vanish for every row (it is the total degree up to unit).
    for j in 0..n {
        debug_assert!(coords.get(0, j).is_zero());
    }
    Ok(cokernel(&rel))
}

/// Inverse of a unimodular integer matrix, via the adjugate.
fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let det = m.determinant();
    assert!(det.abs().is_one(), "matrix is not unimodular");
    let mut inv = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut c = m.strike(j, i).determinant();
            if (i + j) % 2 == 1 {
                c = -c;
            }
            if det.is_negative() {
                c = -c;
            }
            inv.set(i, j, c);
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntMatrix) -> Vec<u64> {
        smith_normal_form(m)
            .factors
            .iter()
            .map(|d| u64::try_from(d).unwrap())
            .collect()
    }

    /// Independent oracle: invariant factors from determinantal divisors,
    /// d_i = D_i / D_{i-1} with D_i the gcd of all i×i minors.
    fn determinantal_factors(m: &IntMatrix) -> Vec<u64> {
        let n = m.rows().min(m.cols());
        let mut divisors = vec![BigInt::one()];
        for k in 1..=n {
            let mut g = BigInt::zero();
            for rows in combinations(m.rows(), k) {
                for cols in combinations(m.cols(), k) {
                    let mut sub = IntMatrix::zero(k, k);
                    for (i, &r) in rows.iter().enumerate() {
                        for (j, &c) in cols.iter().enumerate() {
                            sub.set(i, j, m.get(r, c).clone());
                        }
                    }
                    g = g.gcd(&sub.determinant());
                }
            }
            divisors.push(g);
        }
        (1..=n)
            .map(|k| {
                if divisors[k].is_zero() {
                    0
                } else {
                    u64::try_from(&divisors[k] / &divisors[k - 1]).unwrap()
                }
            })
            .collect()
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![];
        let mut cur = vec![];
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    fn cycle_matrix(r: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(r, r);
        for i in 0..r {
            m.set(i, i, BigInt::from(-2));
        }
        if r == 2 {
            m.set(0, 1, BigInt::from(2));
            m.set(1, 0, BigInt::from(2));
        } else {
            for i in 0..r {
                let j = (i + 1) % r;
                m.set(i, j, BigInt::one());
                m.set(j, i, BigInt::one());
            }
        }
        m
    }

    #[test]
    fn snf_identity() {
        assert_eq!(factors(&IntMatrix::identity(2)), vec![1, 1]);
    }

    #[test]
    fn snf_a2_cartan() {
        let m = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(factors(&m), vec![1, 3]);
    }

    #[test]
    fn snf_cycle_3() {
        let m = cycle_matrix(3);
        assert_eq!(factors(&m), vec![1, 3, 0]);
    }

    #[test]
    fn snf_transforms_are_unimodular_and_diagonalize() {
        let cases = [
            IntMatrix::from_rows(&[vec![4, 6], vec![2, 8]]),
            IntMatrix::from_rows(&[vec![0, 0, 5], vec![3, 1, -2]]),
            IntMatrix::from_rows(&[vec![2], vec![4], vec![6]]),
            cycle_matrix(5),
        ];
        for m in cases {
            let snf = smith_normal_form(&m);
            assert!(snf.left.determinant().abs().is_one());
            assert!(snf.right.determinant().abs().is_one());
            let d = snf.left.mul(&m).mul(&snf.right);
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if i == j {
                        assert_eq!(
                            d.get(i, j).magnitude(),
                            &snf.factors[i],
                            "diagonal mismatch for {m:?}"
                        );
                    } else {
                        assert!(d.get(i, j).is_zero(), "off-diagonal residue in {d:?}");
                    }
                }
            }
            // Divisibility chain with zeros last.
            for w in snf.factors.windows(2) {
                if w[0].is_zero() {
                    assert!(w[1].is_zero());
                } else if !w[1].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_matches_determinantal_divisor_oracle() {
        // Deterministic LCG sweep over small random matrices.
        let mut state: u64 = 0x243F6A8885A308D3;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state
        };
        for trial in 0..500 {
            let rows = 1 + (next() % 4) as usize;
            let cols = 1 + (next() % 4) as usize;
            let mut m = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, BigInt::from((next() % 21) as i64 - 10));
                }
            }
            assert_eq!(
                factors(&m),
                determinantal_factors(&m),
                "trial {trial}: SNF disagrees with determinantal divisors for {m:?}"
            );
        }
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::identity(2)), FgAbelianGroup::trivial());
        let m = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(cokernel(&m), FgAbelianGroup::cyclic(3));
        let g = cokernel(&cycle_matrix(3));
        assert_eq!(g, FgAbelianGroup::cyclic(3).direct_sum(&FgAbelianGroup::free(1)));
    }

    #[test]
    fn cokernel_of_wide_and_tall_matrices() {
        // Z^1 / im(2x3) and Z^3 / im(3x1)
        let wide = IntMatrix::from_rows(&[vec![2, 4, 6]]);
        assert_eq!(cokernel(&wide), FgAbelianGroup::cyclic(2));
        let tall = IntMatrix::from_rows(&[vec![2], vec![0], vec![0]]);
        assert_eq!(
            cokernel(&tall),
            FgAbelianGroup::cyclic(2).direct_sum(&FgAbelianGroup::free(2))
        );
    }

    #[test]
    fn discriminant_of_cycles() {
        for r in 2..=12 {
            let g = discriminant_group(&cycle_matrix(r)).unwrap();
            assert_eq!(g, FgAbelianGroup::cyclic(r as u64), "cycle of length {r}");
        }
    }

    #[test]
    fn discriminant_of_single_component() {
        let m = IntMatrix::from_rows(&[vec![0]]);
        assert_eq!(discriminant_group(&m).unwrap(), FgAbelianGroup::trivial());
    }

    #[test]
    fn discriminant_rejects_nonsingular_matrix() {
        let m = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert!(discriminant_group(&m).is_err());
    }

    #[test]
    fn discriminant_of_weighted_star() {
        // Affine D-type star with marks (1,1,1,1,2,2,2): tails on the two end
        // chain nodes, chain of three doubled nodes.
        let m = IntMatrix::from_rows(&[
            vec![-2, 0, 0, 0, 1, 0, 0],
            vec![0, -2, 0, 0, 1, 0, 0],
            vec![0, 0, -2, 0, 0, 0, 1],
            vec![0, 0, 0, -2, 0, 0, 1],
            vec![1, 1, 0, 0, -2, 1, 0],
            vec![0, 0, 0, 0, 1, -2, 1],
            vec![0, 0, 1, 1, 0, 1, -2],
        ]);
        let g = discriminant_group(&m).unwrap();
        assert_eq!(g, FgAbelianGroup::from_orders(&[2, 2]));
    }

    #[test]
    fn group_normal_form_and_display() {
        let g = FgAbelianGroup::from_orders(&[4, 6]);
        assert_eq!(g, FgAbelianGroup::from_orders(&[2, 12]));
        assert_eq!(g.to_string(), "Z/2 + Z/12");
        assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
        assert_eq!(
            FgAbelianGroup::from_orders(&[3, 0, 0]).to_string(),
            "Z/3 + Z^2"
        );
        assert_eq!(FgAbelianGroup::from_orders(&[1, 1]), FgAbelianGroup::trivial());
    }

    #[test]
    fn group_ops() {
        let z4 = FgAbelianGroup::cyclic(4);
        assert_eq!(z4.dual().unwrap(), z4);
        assert!(FgAbelianGroup::free(1).dual().is_err());
        assert!(!FgAbelianGroup::from_orders(&[2, 2]).is_cyclic());
        assert!(FgAbelianGroup::cyclic(12).is_cyclic());
        assert!(FgAbelianGroup::free(1).is_cyclic());

        // Z/4 / <2> = Z/2
        let two = z4.element(&[2], &[]).unwrap();
        assert_eq!(z4.quotient(&[two]).unwrap(), FgAbelianGroup::cyclic(2));

        // Z^2 / <(2, 0)> = Z/2 + Z
        let zz = FgAbelianGroup::free(2);
        let e = zz.element(&[], &[2, 0]).unwrap();
        assert_eq!(
            zz.quotient(&[e]).unwrap(),
            FgAbelianGroup::cyclic(2).direct_sum(&FgAbelianGroup::free(1))
        );
    }

    #[test]
    fn element_orders() {
        let g = FgAbelianGroup::from_orders(&[2, 12]);
        let e = g.element(&[1, 4], &[]).unwrap();
        assert_eq!(e.order(), Some(BigUint::from(6u32)));
        let zero = g.element(&[0, 0], &[]).unwrap();
        assert_eq!(zero.order(), Some(BigUint::one()));
        let inf = FgAbelianGroup::free(1).element(&[], &[3]).unwrap();
        assert_eq!(inf.order(), None);
    }

    #[test]
    fn dual_is_involutive() {
        for orders in [vec![2], vec![2, 4], vec![3, 12], vec![2, 2, 2]] {
            let g = FgAbelianGroup::from_orders(&orders);
            assert_eq!(g.dual().unwrap().dual().unwrap(), g);
        }
    }
}
