//! Dense exact linear algebra over a prime field F_p.
//!
//! Everything downstream (strand dimensions, kernel oracles, closed-form
//! cross-checks) reduces to row reduction over F_p, so this module keeps the
//! toolkit small and deterministic: field elements carry their modulus,
//! matrices are dense row-major grids, and all eliminations pick the first
//! nonzero pivot so repeated runs produce identical bases.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, MulAssign, Neg, Sub, SubAssign};

/// Checks that `p` is an odd prime usable as a field modulus.
pub fn validate_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::NotOddPrime(p));
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= p {
        if p.is_multiple_of(f) {
            return Err(Error::NotOddPrime(p));
        }
        f += 2;
    }
    Ok(())
}

/// An element of F_p. Carries its modulus; mixing moduli is a bug and is
/// rejected by debug assertions.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    v: u64,
    p: u64,
}

impl FieldElem {
    pub fn new(v: u64, p: u64) -> FieldElem {
        FieldElem { v: v % p, p }
    }

    /// Builds an element from a signed integer, reducing mod p.
    pub fn from_i64(v: i64, p: u64) -> FieldElem {
        let m = v.rem_euclid(p as i64) as u64;
        FieldElem { v: m, p }
    }

    pub fn zero(p: u64) -> FieldElem {
        FieldElem { v: 0, p }
    }

    pub fn one(p: u64) -> FieldElem {
        FieldElem { v: 1 % p, p }
    }

    pub fn val(self) -> u64 {
        self.v
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> FieldElem {
        let mut base = self;
        let mut acc = FieldElem::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero: every caller inverts only
    /// pivots already checked to be nonzero.
    pub fn inv(self) -> FieldElem {
        assert!(!self.is_zero(), "inverse of zero in F_{}", self.p);
        self.pow(self.p - 2)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v + rhs.v;
        FieldElem {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v + self.p - rhs.v;
        FieldElem {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        debug_assert_eq!(self.p, rhs.p);
        let prod = (self.v as u128 * rhs.v as u128) % self.p as u128;
        FieldElem {
            v: prod as u64,
            p: self.p,
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
}

impl AddAssign for FieldElem {
    fn add_assign(&mut self, rhs: FieldElem) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElem {
    fn sub_assign(&mut self, rhs: FieldElem) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElem {
    fn mul_assign(&mut self, rhs: FieldElem) {
        *self = *self * rhs;
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// Square root in F_p by Tonelli-Shanks, with the direct exponent for
/// p = 3 mod 4. Returns the smaller representative's class arbitrarily
/// (whichever the algorithm lands on); `None` for non-residues.
pub fn sqrt_mod_p(a: FieldElem) -> Option<FieldElem> {
    let p = a.modulus();
    if a.is_zero() {
        return Some(a);
    }
    // Euler criterion.
    if a.pow((p - 1) / 2).val() != 1 {
        return None;
    }
    if p % 4 == 3 {
        let r = a.pow((p + 1) / 4);
        debug_assert_eq!(r * r, a);
        return Some(r);
    }
    // Write p-1 = q * 2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    // Deterministic scan for a quadratic non-residue.
    let mut z = FieldElem::new(2, p);
    while z.pow((p - 1) / 2).val() == 1 {
        z += FieldElem::one(p);
    }
    let mut m = s;
    let mut c = z.pow(q);
    let mut t = a.pow(q);
    let mut r = a.pow(q.div_ceil(2));
    while t.val() != 1 {
        // Find least 0 < i < m with t^(2^i) = 1.
        let mut i = 0u32;
        let mut t2 = t;
        while t2.val() != 1 {
            t2 = t2 * t2;
            i += 1;
        }
        let b = c.pow(1u64 << (m - i - 1));
        m = i;
        c = b * b;
        t *= c;
        r *= b;
    }
    debug_assert_eq!(r * r, a);
    Some(r)
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<FieldElem>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize, p: u64) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            p,
            data: vec![FieldElem::zero(p); rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> ExactMatrix {
        let mut m = ExactMatrix::zero(n, n, p);
        for k in 0..n {
            m[(k, k)] = FieldElem::one(p);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>, p: u64) -> Result<ExactMatrix> {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::Shape("ragged row lengths".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend(row);
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            p,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zero(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = ExactMatrix::zero(self.rows, rhs.cols, self.p);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let t = out[(r, c)] + a * rhs[(k, c)];
                    out[(r, c)] = t;
                }
            }
        }
        out
    }

    /// Stacks matrices vertically. All blocks must agree in column count.
    pub fn vstack(blocks: &[&ExactMatrix]) -> ExactMatrix {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        let p = blocks[0].p;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
        }
        ExactMatrix {
            rows,
            cols,
            p,
            data,
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns in
    /// ascending order. First-nonzero pivoting keeps the result canonical.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut sel = None;
            for r in row..self.rows {
                if !self[(r, col)].is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            self.swap_rows(row, sel);
            let inv = self[(row, col)].inv();
            for c in col..self.cols {
                let t = self[(row, c)] * inv;
                self[(row, c)] = t;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)];
                    for c in col..self.cols {
                        let t = self[(r, c)] - f * self[(row, c)];
                        self[(r, c)] = t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel { v : A v = 0 }, one vector per free
    /// column, ordered by ascending free column index.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = Some(k);
            }
            v
        };
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set[f].is_some() {
                continue;
            }
            let mut vec = vec![FieldElem::zero(self.p); self.cols];
            vec[f] = FieldElem::one(self.p);
            for (k, &c) in pivots.iter().enumerate() {
                vec[c] = -m[(k, f)];
            }
            basis.push(vec);
        }
        basis
    }

    /// Determinant by Gaussian elimination with first-nonzero pivoting.
    pub fn det(&self) -> FieldElem {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = FieldElem::one(self.p);
        for col in 0..m.cols {
            let mut sel = None;
            for r in col..m.rows {
                if !m[(r, col)].is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else {
                return FieldElem::zero(self.p);
            };
            if sel != col {
                m.swap_rows(col, sel);
                det = -det;
            }
            let pivot = m[(col, col)];
            det *= pivot;
            let inv = pivot.inv();
            for r in col + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)] * inv;
                for c in col..m.cols {
                    let t = m[(r, c)] - f * m[(col, c)];
                    m[(r, c)] = t;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = FieldElem;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} mod {}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// An incrementally built row space kept in reduced echelon form. This is
/// the workhorse for span dimensions, membership tests, and quotient-strand
/// normal forms: rows are fully reduced, pivots are 1 and sorted.
#[derive(Clone)]
pub struct RowSpace {
    p: u64,
    cols: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(cols: usize, p: u64) -> RowSpace {
        RowSpace {
            p,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns with no pivot, ascending. These index a basis of the
    /// quotient by the row space.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut flag = vec![false; self.cols];
        for &c in &self.pivots {
            flag[c] = true;
        }
        (0..self.cols).filter(|&c| !flag[c]).collect()
    }

    /// Reduces `v` modulo the row space in place (eliminates all pivot
    /// coordinates).
    pub fn reduce(&self, v: &mut [FieldElem]) {
        debug_assert_eq!(v.len(), self.cols);
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            let f = v[pc];
            if f.is_zero() {
                continue;
            }
            for c in pc..self.cols {
                if !row[c].is_zero() {
                    v[c] -= f * row[c];
                }
            }
        }
    }

    /// Adds a vector to the span. Returns true if the rank grew.
    pub fn add(&mut self, mut v: Vec<FieldElem>) -> bool {
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[lead].inv();
        for c in lead..self.cols {
            v[c] *= inv;
        }
        // Back-eliminate the new pivot from existing rows.
        for row in self.rows.iter_mut() {
            let f = row[lead];
            if f.is_zero() {
                continue;
            }
            for c in lead..self.cols {
                let t = row[c] - f * v[c];
                row[c] = t;
            }
        }
        let at = self
            .pivots
            .binary_search(&lead)
            .expect_err("duplicate pivot column");
        self.pivots.insert(at, lead);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// The stored reduced rows, one per pivot, in pivot order.
    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u64 = 101;

    fn fe(v: i64) -> FieldElem {
        FieldElem::from_i64(v, P)
    }

    fn mat(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| fe(v)).collect()).collect(),
            P,
        )
        .unwrap()
    }

    #[test]
    fn prime_validation_accepts_and_rejects() {
        assert!(validate_prime(101).is_ok());
        assert!(validate_prime(10007).is_ok());
        assert!(validate_prime(3).is_ok());
        assert!(validate_prime(2).is_err());
        assert!(validate_prime(9).is_err());
        assert!(validate_prime(1).is_err());
        assert!(validate_prime(10001).is_err()); // 73 * 137
    }

    #[test]
    fn field_arithmetic_exact_values() {
        assert_eq!((fe(77) + fe(50)).val(), 26);
        assert_eq!((fe(3) - fe(7)).val(), 97);
        assert_eq!((fe(17) * fe(6)).val(), 1);
        assert_eq!(fe(17).inv().val(), 6);
        assert_eq!((-fe(1)).val(), 100);
        assert_eq!(fe(2).pow(10).val(), 1024 % 101);
    }

    #[test]
    fn det_2x2_example() {
        assert_eq!(mat(&[&[2, 1], &[1, 2]]).det().val(), 3);
    }

    #[test]
    fn det_singular_is_zero() {
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).det().val(), 0);
    }

    #[test]
    fn rank_and_kernel_exact() {
        let m = mat(&[&[1, 0, 2], &[0, 1, 3], &[1, 1, 5]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(
            k[0].iter().map(|x| x.val()).collect::<Vec<_>>(),
            vec![(-2i64).rem_euclid(101) as u64, (-3i64).rem_euclid(101) as u64, 1]
        );
    }

    #[test]
    fn sqrt_examples() {
        // 101 = 5 mod 8, so 2 is a non-residue.
        assert!(sqrt_mod_p(fe(2)).is_none());
        let r = sqrt_mod_p(fe(4)).unwrap();
        assert!(r.val() == 2 || r.val() == 99);
        // p = 3 mod 4 shortcut path.
        let q = 10007;
        assert_eq!(q % 4, 3);
        let a = FieldElem::new(9, q);
        let r = sqrt_mod_p(a).unwrap();
        assert_eq!(r * r, a);
        // Tonelli-Shanks loop path: p = 1 mod 4.
        let a = FieldElem::new(58, 101); // 58 = 35^2 mod 101
        let r = sqrt_mod_p(a).unwrap();
        assert_eq!(r * r, a);
    }

    #[test]
    fn rowspace_membership_and_rank() {
        let mut rs = RowSpace::new(3, P);
        assert!(rs.add(vec![fe(1), fe(2), fe(3)]));
        assert!(rs.add(vec![fe(0), fe(1), fe(1)]));
        assert!(!rs.add(vec![fe(1), fe(3), fe(4)]));
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&[fe(2), fe(5), fe(7)]));
        assert!(!rs.contains(&[fe(0), fe(0), fe(1)]));
        assert_eq!(rs.free_cols(), vec![2]);
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                FieldElem::new(state >> 33, P)
            };
            let m = ExactMatrix::from_rows(
                (0..rows).map(|_| (0..cols).map(|_| next()).collect()).collect(),
                P,
            ).unwrap();
            let kern = m.kernel_basis();
            prop_assert_eq!(m.rank() + kern.len(), cols);
            for v in kern {
                for r in 0..rows {
                    let mut acc = FieldElem::zero(P);
                    for c in 0..cols {
                        acc += m[(r, c)] * v[c];
                    }
                    prop_assert!(acc.is_zero());
                }
            }
        }

        #[test]
        fn det_is_multiplicative(seed in any::<u64>()) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                FieldElem::new(state >> 33, P)
            };
            let rand_mat = |next: &mut dyn FnMut() -> FieldElem| ExactMatrix::from_rows(
                (0..4).map(|_| (0..4).map(|_| next()).collect()).collect(), P,
            ).unwrap();
            let a = rand_mat(&mut next);
            let b = rand_mat(&mut next);
            prop_assert_eq!(a.matmul(&b).det(), a.det() * b.det());
        }

        #[test]
        fn sqrt_of_square_roundtrips(v in 0u64..101) {
            let a = FieldElem::new(v, P);
            let sq = a * a;
            let r = sqrt_mod_p(sq).expect("squares are residues");
            prop_assert!(r == a || r == -a);
        }
    }
}
