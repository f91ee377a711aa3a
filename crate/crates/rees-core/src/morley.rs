//! Bilinear companion forms and the closed-form torsion elements they carry.
//!
//! For each column form `g_m` there is a pair of companion elements
//! `H_{1,m}, H_{2,m}` of the tensor square of the bigraded ring satisfying
//!
//! ```text
//! (x ⊗ 1 − 1 ⊗ x) H_{1,m} + (y ⊗ 1 − 1 ⊗ y) H_{2,m} = g_m ⊗ 1 − 1 ⊗ g_m.
//! ```
//!
//! The determinant of the 2×2 matrix they form expands, when grouped by the
//! right-hand tensor leg, into a family of quadratic-in-T forms
//! `q_{β,γ}` of bidegree `(δ − β − γ, 2)` where `δ = d − 2`.  This module
//! computes that expansion two independent ways — directly from the
//! determinant ([`morley_forms`]) and through a closed-form coefficient
//! window ([`q_forms`]) — plus a further specialization for quadratic first
//! columns ([`q_forms_d1_2`]).
//!
//! It also houses the combinatorial side of the story for canonical first
//! columns: the banded stencil a canonical column induces
//! ([`stencil_matrix`]), the closed-form catalog of its two syzygy columns
//! ([`syzygy_catalog`]), the map sending a stencil syzygy to a torsion
//! element ([`nu1`]), and the fully explicit generating set for the torsion
//! below the top window when the first column is quadratic
//! ([`explicit_generators`]).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{FieldElem, RowSpace};
use crate::hb::{Col1Shape, HBMatrix};
use crate::linkage::{delta_minors, sylvester_form};
use crate::oracle::{BidegreeMultiset, Oracle};
use crate::polyring::{BPoly, SMatrix, SPoly, TExp};

/// An element of the tensor square of the bigraded ring: a sum of terms
/// `v · x^a y^b ⊗ x^u y^w · T^e` keyed by `(a, b, u, w, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    p: u64,
    c: BTreeMap<(usize, usize, usize, usize, TExp), FieldElem>,
}

impl TensorPoly {
    pub fn zero(p: u64) -> TensorPoly {
        TensorPoly {
            p,
            c: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, key: (usize, usize, usize, usize, TExp)) -> FieldElem {
        self.c
            .get(&key)
            .copied()
            .unwrap_or_else(|| FieldElem::zero(self.p))
    }

    pub fn terms(
        &self,
    ) -> impl Iterator<Item = ((usize, usize, usize, usize, TExp), FieldElem)> + '_ {
        self.c.iter().map(|(k, v)| (*k, *v))
    }

    /// Accumulates a single term.
    pub fn add_term(&mut self, key: (usize, usize, usize, usize, TExp), v: FieldElem) {
        let cur = self.coeff(key) + v;
        if cur.is_zero() {
            self.c.remove(&key);
        } else {
            self.c.insert(key, cur);
        }
    }

    /// Accumulates `s · (x^a y^b ⊗ x^u y^w)` for a pure-T coefficient `s`.
    fn add_spoly_at(&mut self, left: (usize, usize), right: (usize, usize), s: &SPoly) {
        for (e, v) in s.terms() {
            self.add_term((left.0, left.1, right.0, right.1, e), v);
        }
    }

    pub fn add(&self, rhs: &TensorPoly) -> TensorPoly {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let mut out = self.clone();
        for (k, v) in rhs.terms() {
            out.add_term(k, v);
        }
        out
    }

    pub fn neg(&self) -> TensorPoly {
        let mut out = TensorPoly::zero(self.p);
        for (k, v) in self.terms() {
            out.add_term(k, -v);
        }
        out
    }

    pub fn sub(&self, rhs: &TensorPoly) -> TensorPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: FieldElem) -> TensorPoly {
        let mut out = TensorPoly::zero(self.p);
        for (k, v) in self.terms() {
            out.add_term(k, v * s);
        }
        out
    }

    pub fn mul(&self, rhs: &TensorPoly) -> TensorPoly {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let mut out = TensorPoly::zero(self.p);
        for ((a1, b1, u1, w1, e1), v1) in self.terms() {
            for ((a2, b2, u2, w2, e2), v2) in rhs.terms() {
                let e = (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2);
                out.add_term((a1 + a2, b1 + b2, u1 + u2, w1 + w2, e), v1 * v2);
            }
        }
        out
    }

    /// `f ⊗ 1`.
    pub fn from_left(f: &BPoly) -> TensorPoly {
        let (i, _) = f.bidegree();
        let mut out = TensorPoly::zero(f.modulus());
        for (w, e, v) in f.terms() {
            out.add_term((w, i - w, 0, 0, e), v);
        }
        out
    }

    /// `1 ⊗ f`.
    pub fn from_right(f: &BPoly) -> TensorPoly {
        let (i, _) = f.bidegree();
        let mut out = TensorPoly::zero(f.modulus());
        for (w, e, v) in f.terms() {
            out.add_term((0, 0, w, i - w, e), v);
        }
        out
    }

    /// `x ⊗ 1 − 1 ⊗ x` for `k = 0`, `y ⊗ 1 − 1 ⊗ y` for `k = 1`.
    pub fn commutator(p: u64, k: usize) -> TensorPoly {
        assert!(k < 2, "variable index {k} out of range");
        let one = FieldElem::one(p);
        let mut out = TensorPoly::zero(p);
        let e = (0, 0, 0);
        if k == 0 {
            out.add_term((1, 0, 0, 0, e), one);
            out.add_term((0, 0, 1, 0, e), -one);
        } else {
            out.add_term((0, 1, 0, 0, e), one);
            out.add_term((0, 0, 0, 1, e), -one);
        }
        out
    }
}

/// The 2×2 companion matrix `H = (H_{r,m})` of the column forms, indexed
/// `[r][m]` with both entries zero-based:
///
/// ```text
/// H_{1,m} = Σ_{ℓ=0}^{d_m} Σ_{β=0}^{ℓ−1}     c_{ℓ,m} · x^{ℓ−1−β} ⊗ x^β y^{d_m−ℓ},
/// H_{2,m} = Σ_{λ=0}^{d_m} Σ_{γ=0}^{d_m−1−λ} c_{λ,m} · x^λ y^{d_m−1−λ−γ} ⊗ y^γ.
/// ```
pub fn h_matrix(hb: &HBMatrix) -> [[TensorPoly; 2]; 2] {
    let p = hb.signed_minors()[0].modulus();
    let cc = hb.coeff_c();
    let mut h = [
        [TensorPoly::zero(p), TensorPoly::zero(p)],
        [TensorPoly::zero(p), TensorPoly::zero(p)],
    ];
    for m in 1..=2usize {
        let dm = hb.col_degree(m - 1);
        for ell in 0..=dm {
            let c = cc.c(ell, m);
            for beta in 0..ell {
                h[0][m - 1].add_spoly_at((ell - 1 - beta, 0), (beta, dm - ell), c);
            }
        }
        for lam in 0..=dm {
            let c = cc.c(lam, m);
            for gam in 0..dm.saturating_sub(lam) {
                h[1][m - 1].add_spoly_at((lam, dm - 1 - lam - gam), (0, gam), c);
            }
        }
    }
    h
}

/// Verifies the defining identity of the companion matrix for both columns:
/// `(x⊗1 − 1⊗x) H_{1,m} + (y⊗1 − 1⊗y) H_{2,m} = g_m ⊗ 1 − 1 ⊗ g_m`.
pub fn companion_identity_holds(hb: &HBMatrix) -> bool {
    let p = hb.signed_minors()[0].modulus();
    let h = h_matrix(hb);
    let cx = TensorPoly::commutator(p, 0);
    let cy = TensorPoly::commutator(p, 1);
    for m in 1..=2usize {
        let g = hb.g_form(m);
        let lhs = cx.mul(&h[0][m - 1]).add(&cy.mul(&h[1][m - 1]));
        let rhs = TensorPoly::from_left(&g).sub(&TensorPoly::from_right(&g));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Expands `det H = H_{1,1} H_{2,2} − H_{1,2} H_{2,1}` and groups terms by
/// the right-hand tensor leg `x^β y^γ`.  The value at key `(β, γ)` is the
/// left-hand form of bidegree `(δ − β − γ, 2)`.  Keys whose form would be
/// identically zero are omitted.
pub fn morley_forms(hb: &HBMatrix) -> BTreeMap<(usize, usize), BPoly> {
    let p = hb.signed_minors()[0].modulus();
    let delta = hb.delta();
    let h = h_matrix(hb);
    let det = h[0][0].mul(&h[1][1]).sub(&h[0][1].mul(&h[1][0]));
    let mut out: BTreeMap<(usize, usize), BPoly> = BTreeMap::new();
    for ((a, b, u, w, e), v) in det.terms() {
        assert_eq!(a + b + u + w, delta, "inhomogeneous determinant term");
        let f = out
            .entry((u, w))
            .or_insert_with(|| BPoly::zero(delta - u - w, 2, p));
        let cur = f.coeff(a, e) + v;
        f.set_coeff(a, e, cur);
    }
    out.retain(|_, f| !f.is_zero());
    out
}

/// The coefficient of `x^w y^{i−w} ⊗ x^β y^{δ−i−β}` in `det H`, as a signed
/// sum of products `c_{ℓ,1} c_{m,2}` over two sliding index windows.
fn morley_coeff(hb: &HBMatrix, w: usize, beta: usize, i: usize) -> SPoly {
    let p = hb.signed_minors()[0].modulus();
    let cc = hb.coeff_c();
    let (d1, d2) = (hb.d1(), hb.d2());
    let mut a = SPoly::zero(2, p);
    let sum = (w + 1 + beta) as i64;
    for ell in (beta + 1)..=d1 {
        let m = sum - ell as i64;
        if m >= 0 && m <= d2 as i64 && m <= d2 as i64 - 1 - i as i64 + w as i64 {
            a = a.add(&cc.c(ell, 1).mul(cc.c(m as usize, 2)));
        }
    }
    for ell in (beta + 1)..=d2 {
        let m = sum - ell as i64;
        if m >= 0 && m <= d1 as i64 && m <= d1 as i64 - 1 - i as i64 + w as i64 {
            a = a.sub(&cc.c(m as usize, 1).mul(cc.c(ell, 2)));
        }
    }
    a
}

/// The level-`i` forms `q_{β,δ−i−β}` for `β = 0..=δ−i`, each of bidegree
/// `(i, 2)`, assembled from the closed-form determinant coefficients.
pub fn q_forms(hb: &HBMatrix, i: usize) -> Vec<BPoly> {
    let delta = hb.delta();
    assert!(i <= delta, "level {i} exceeds {delta}");
    let p = hb.signed_minors()[0].modulus();
    let mut out = Vec::with_capacity(delta - i + 1);
    for beta in 0..=delta - i {
        let mut q = BPoly::zero(i, 2, p);
        for w in 0..=i {
            accumulate(&mut q, w, &morley_coeff(hb, w, beta, i));
        }
        out.push(q);
    }
    out
}

/// Adds the T-terms of `s` to `dst` at x-exponent `w`.
fn accumulate(dst: &mut BPoly, w: usize, s: &SPoly) {
    for (e, v) in s.terms() {
        let cur = dst.coeff(w, e) + v;
        dst.set_coeff(w, e, cur);
    }
}

/// The level-`i` forms specialized to a quadratic first column (`d₁ = 2`,
/// so `δ = d₂`), written directly in the first-column coefficients: for
/// `1 ≤ i ≤ d₂ − 1` and `0 ≤ β ≤ d₂ − i`,
///
/// ```text
/// q_{β,d₂−i−β} = [β=0] ( Σ_{w=0}^{i} c_{1,1} c_{w,2} x^w y^{i−w}
///                      + Σ_{w=1}^{i} c_{2,1} c_{w−1,2} x^w y^{i−w} )
///              + [β=1]   Σ_{w=0}^{i} c_{2,1} c_{w,2} x^w y^{i−w}
///              − [β≤d₂−i−1] c_{0,1} c_{i+1+β,2} x^i
///              − c_{1,1} c_{i+β,2} x^i  −  c_{0,1} c_{i+β,2} x^{i−1} y,
/// ```
///
/// with out-of-range second-column coefficients read as zero.  Agrees term
/// by term with [`q_forms`].
pub fn q_forms_d1_2(hb: &HBMatrix, i: usize) -> Result<Vec<BPoly>> {
    if hb.d1() != 2 {
        return Err(Error::OutOfScope(format!(
            "specialized level forms require a quadratic first column, got degree {}",
            hb.d1()
        )));
    }
    let d2 = hb.d2();
    if i < 1 || i > d2 - 1 {
        return Err(Error::OutOfScope(format!(
            "specialized level forms cover levels 1..={}, got {i}",
            d2 - 1
        )));
    }
    let p = hb.signed_minors()[0].modulus();
    let cc = hb.coeff_c();
    let c2 = |k: i64| -> SPoly {
        if k >= 0 && k <= d2 as i64 {
            cc.c(k as usize, 2).clone()
        } else {
            SPoly::zero(1, p)
        }
    };
    let c01 = cc.c(0, 1).clone();
    let c11 = cc.c(1, 1).clone();
    let c21 = cc.c(2, 1).clone();
    let mut out = Vec::with_capacity(d2 - i + 1);
    for beta in 0..=d2 - i {
        let b = beta as i64;
        let mut q = BPoly::zero(i, 2, p);
        if beta == 0 {
            for w in 0..=i {
                accumulate(&mut q, w, &c11.mul(&c2(w as i64)));
            }
            for w in 1..=i {
                accumulate(&mut q, w, &c21.mul(&c2(w as i64 - 1)));
            }
        }
        if beta == 1 {
            for w in 0..=i {
                accumulate(&mut q, w, &c21.mul(&c2(w as i64)));
            }
        }
        if beta < d2 - i {
            accumulate(&mut q, i, &c01.mul(&c2(i as i64 + 1 + b)).neg());
        }
        accumulate(&mut q, i, &c11.mul(&c2(i as i64 + b)).neg());
        accumulate(&mut q, i - 1, &c01.mul(&c2(i as i64 + b)).neg());
        out.push(q);
    }
    Ok(out)
}

/// The `(ℓ−2) × ℓ` banded stencil induced by a canonical first column: row
/// `r` carries the column's coefficient triple at positions `r, r+1, r+2`.
pub fn stencil_matrix(p: u64, ell: usize, shape: Col1Shape) -> SMatrix {
    assert!(ell >= 3, "stencil needs at least 3 columns, got {ell}");
    let triple = match shape {
        Col1Shape::X2Y2Xy => [
            SPoly::var(1, p),
            SPoly::var(2, p),
            SPoly::var(1, p),
        ],
        Col1Shape::Y2X2 => [SPoly::var(1, p), SPoly::zero(1, p), SPoly::var(2, p)],
    };
    SMatrix::from_fn(ell - 2, ell, move |r, c| {
        if c >= r && c - r <= 2 {
            triple[c - r].clone()
        } else {
            SPoly::zero(1, p)
        }
    })
}

/// The `(k−1) × k` truncation of the repeating `[T₁, T₂, T₁]` stencil,
/// obtained from the `k+1`-column stencil by dropping its last column.
fn b_matrix(p: u64, k: usize) -> SMatrix {
    assert!(k >= 2);
    let a = stencil_matrix(p, k + 1, Col1Shape::X2Y2Xy);
    SMatrix::from_fn(k - 1, k, |r, c| a.at(r, c).clone())
}

/// Reverses both the row and column order.
fn dagger(m: &SMatrix) -> SMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    SMatrix::from_fn(rows, cols, |r, c| m.at(rows - 1 - r, cols - 1 - c).clone())
}

/// The signed maximal minors of a `(k−1) × k` matrix: entry `s` (zero-based)
/// is `(−1)^s` times the determinant of the matrix with column `s` removed.
fn signed_maximal_minors(p: u64, m: &SMatrix) -> Vec<SPoly> {
    let k = m.ncols();
    assert_eq!(m.nrows() + 1, k, "expected one more column than rows");
    (0..k)
        .map(|skip| {
            let det = if k == 1 {
                SPoly::constant(p, FieldElem::one(p))
            } else {
                SMatrix::from_fn(k - 1, k - 1, |r, c| {
                    m.at(r, if c < skip { c } else { c + 1 }).clone()
                })
                .det()
            };
            if skip % 2 == 0 {
                det
            } else {
                det.neg()
            }
        })
        .collect()
}

/// `(−T₁)^a T₂^b`.
fn signed_t_power(p: u64, a: usize, b: usize) -> SPoly {
    let v = if a.is_multiple_of(2) {
        FieldElem::one(p)
    } else {
        -FieldElem::one(p)
    };
    SPoly::monomial(a + b, p, (a as u16, b as u16, 0), v)
}

/// The two syzygy columns of a canonical stencil, with the twists (T-degrees
/// of the corresponding kernel generators; entries have degree twist − 1).
#[derive(Clone, Debug)]
pub struct Catalog {
    pub columns: [Vec<SPoly>; 2],
    pub twists: [usize; 2],
}

/// Closed-form kernel catalog for the `(ℓ−2) × ℓ` canonical stencils,
/// `ℓ ≥ 3`.  Both columns annihilate [`stencil_matrix`] and together they
/// generate its full kernel; the twists always sum to `ℓ`.
pub fn syzygy_catalog(p: u64, ell: usize, shape: Col1Shape) -> Result<Catalog> {
    if ell < 3 {
        return Err(Error::OutOfScope(format!(
            "syzygy catalog covers stencils with at least 3 columns, got {ell}"
        )));
    }
    Ok(match shape {
        Col1Shape::X2Y2Xy => catalog_x2y2_xy(p, ell),
        Col1Shape::Y2X2 => catalog_y2_x2(p, ell),
    })
}

fn catalog_x2y2_xy(p: u64, ell: usize) -> Catalog {
    if ell.is_multiple_of(2) {
        let k = ell / 2;
        let m = signed_maximal_minors(p, &b_matrix(p, k));
        let z = || SPoly::zero(k - 1, p);
        // [m₁, …, m_k, 0, −m_k, …, −m₂]
        let mut c1: Vec<SPoly> = m.to_vec();
        c1.push(z());
        for t in 1..k {
            c1.push(m[k - t].neg());
        }
        // [−m₂, …, −m_k, 0, m_k, …, m₁]
        let mut c2: Vec<SPoly> = (1..k).map(|t| m[t].neg()).collect();
        c2.push(z());
        for t in 0..k {
            c2.push(m[k - 1 - t].clone());
        }
        Catalog {
            columns: [c1, c2],
            twists: [k, k],
        }
    } else {
        let k = (ell - 1) / 2;
        let m = if k == 1 {
            vec![SPoly::constant(p, FieldElem::one(p))]
        } else {
            signed_maximal_minors(p, &b_matrix(p, k))
        };
        let mm = signed_maximal_minors(p, &dagger(&b_matrix(p, k + 1)));
        // [m₁, …, m_k, 0, −m_k, …, −m₁]
        let mut c1: Vec<SPoly> = m.clone();
        c1.push(SPoly::zero(k - 1, p));
        for t in 0..k {
            c1.push(m[k - 1 - t].neg());
        }
        // [−M_{k−1}, …, −M₁, 0, M₁, …, M_{k+1}]
        let mut c2: Vec<SPoly> = (0..k - 1).map(|t| mm[k - 2 - t].neg()).collect();
        c2.push(SPoly::zero(k, p));
        for t in 0..=k {
            c2.push(mm[t].clone());
        }
        Catalog {
            columns: [c1, c2],
            twists: [k, k + 1],
        }
    }
}

fn catalog_y2_x2(p: u64, ell: usize) -> Catalog {
    if ell.is_multiple_of(2) {
        let k = ell / 2;
        let mut c1 = vec![SPoly::zero(k - 1, p); ell];
        let mut c2 = vec![SPoly::zero(k - 1, p); ell];
        for lam in 0..k {
            let v = signed_t_power(p, lam, k - 1 - lam);
            c1[2 * lam + 1] = v.clone();
            c2[2 * lam] = v;
        }
        Catalog {
            columns: [c1, c2],
            twists: [k, k],
        }
    } else {
        let k = (ell - 1) / 2;
        let mut c1 = vec![SPoly::zero(k - 1, p); ell];
        let mut c2 = vec![SPoly::zero(k, p); ell];
        for lam in 0..k {
            c1[2 * lam + 1] = signed_t_power(p, lam, k - 1 - lam);
        }
        for lam in 0..=k {
            c2[2 * lam] = signed_t_power(p, lam, k - lam);
        }
        Catalog {
            columns: [c1, c2],
            twists: [k, k + 1],
        }
    }
}

/// Sends a syzygy of the transposed first-column band matrix to a torsion
/// element: for `d₁ − 1 ≤ i ≤ δ` and a homogeneous vector `χ` of length
/// `d − 1 − i` with `Υᵀ_{d₂−1−i,1} χ = 0`, returns `Σ_β q_{β,δ−i−β} χ_β`.
pub fn nu1(hb: &HBMatrix, i: usize, chi: &[SPoly]) -> Result<BPoly> {
    let (d1, d2, delta) = (hb.d1(), hb.d2(), hb.delta());
    if i + 1 < d1 || i > delta {
        return Err(Error::OutOfScope(format!(
            "level {i} outside {}..={delta}",
            d1 - 1
        )));
    }
    let len = delta + 1 - i;
    if chi.len() != len {
        return Err(Error::BadInput(format!(
            "syzygy vector must have length {len}, got {}",
            chi.len()
        )));
    }
    let degrees: Vec<usize> = chi.iter().filter(|s| !s.is_zero()).map(|s| s.degree()).collect();
    if degrees.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::BadInput(
            "syzygy vector entries must share one degree".into(),
        ));
    }
    if i + 1 < d2 {
        let n = d2 - 1 - i;
        let ups = hb.upsilon(n, 1);
        for col in 0..n {
            let mut dot = SPoly::zero(0, hb.signed_minors()[0].modulus());
            for (row, x) in chi.iter().enumerate() {
                dot = dot.add(&ups.at(row, col).mul(x));
            }
            if !dot.is_zero() {
                return Err(Error::BadInput(
                    "vector is not a syzygy of the transposed band matrix".into(),
                ));
            }
        }
    }
    let qs = q_forms(hb, i);
    let p = hb.signed_minors()[0].modulus();
    let t = degrees.first().copied().unwrap_or(0);
    let mut out = BPoly::zero(i, 2 + t, p);
    for (q, x) in qs.iter().zip(chi) {
        if !x.is_zero() {
            out = out.add(&q.mul_spoly(x));
        }
    }
    Ok(out)
}

/// Confirms that on the whole top window `d₂ − 1 ≤ i ≤ δ` the level forms
/// and the elimination minors span the same `(d − 1 − i)`-dimensional
/// subspace of the symmetric-algebra strand `(i, 2)`, and that the single
/// top-level form is proportional to the content of the elimination pair.
pub fn morley_delta_check(hb: &HBMatrix) -> Result<bool> {
    let delta = hb.delta();
    let d = hb.d();
    let p = hb.signed_minors()[0].modulus();
    let mut oracle = Oracle::new(hb.clone());
    for i in hb.d2() - 1..=delta {
        let want = d - 1 - i;
        let minors = delta_minors(hb, i)?;
        let qs = q_forms(hb, i);
        let dim = oracle.sym_dim(i, 2);
        let mut span_m = RowSpace::new(dim, p);
        for f in &minors {
            span_m.add(oracle.sym_coords(f));
        }
        let mut span_q = RowSpace::new(dim, p);
        for f in &qs {
            span_q.add(oracle.sym_coords(f));
        }
        if span_m.rank() != want || span_q.rank() != want {
            return Ok(false);
        }
        if qs.iter().any(|f| !span_m.contains(&oracle.sym_coords(f))) {
            return Ok(false);
        }
        if minors
            .iter()
            .any(|f| !span_q.contains(&oracle.sym_coords(f)))
        {
            return Ok(false);
        }
    }
    let top = &q_forms(hb, delta)[0];
    Ok(oracle.sym_proportional(top, &sylvester_form(hb)))
}

/// The closed-form generating set for the torsion below the top window when
/// the first column is quadratic and in canonical shape.  Together with the
/// implicit equation and the level-`(d₂−1)` elimination minors these
/// generate the full torsion module.
#[derive(Clone, Debug)]
pub struct ExplicitGenerators {
    pub shape: Col1Shape,
    pub gens: Vec<((usize, usize), BPoly)>,
}

impl ExplicitGenerators {
    /// The multiset of bidegrees of the generators.
    pub fn bidegrees(&self) -> BidegreeMultiset {
        let mut m = BidegreeMultiset::new();
        for ((i, j), _) in &self.gens {
            m.add(*i, *j, 1);
        }
        m
    }
}

/// Builds the explicit generators for column degrees `(2, d₂)`, `d₂ ≥ 3`,
/// with the first column literally in one of the two canonical shapes.
/// One generator sits at `(i, (d₂ + 2 − i)/2)` for each `1 ≤ i ≤ d₂ − 2`
/// with `d₂ − i` even, plus one extra at `(1, (d₂ + 3)/2)` for odd `d₂` or
/// two extras at `(1, (d₂ + 2)/2)` for even `d₂`.
pub fn explicit_generators(hb: &HBMatrix) -> Result<ExplicitGenerators> {
    if hb.d1() != 2 || hb.d2() < 3 {
        return Err(Error::OutOfScope(format!(
            "explicit generators require column degrees (2, d2) with d2 >= 3, got ({}, {})",
            hb.d1(),
            hb.d2()
        )));
    }
    let shape = hb.col1_canonical_shape().ok_or_else(|| {
        Error::BadInput(
            "first column is not in canonical shape; normalize it first".into(),
        )
    })?;
    let d2 = hb.d2();
    let mut gens: Vec<((usize, usize), BPoly)> = Vec::new();
    for i in 1..=d2 - 2 {
        if !(d2 - i).is_multiple_of(2) {
            continue;
        }
        let g = match shape {
            Col1Shape::X2Y2Xy => {
                if i == d2 - 2 {
                    gen_mixed_top(hb)
                } else {
                    gen_mixed_even(hb, i)
                }
            }
            Col1Shape::Y2X2 => gen_split_even(hb, i),
        };
        gens.push(((i, (d2 - i + 2) / 2), g));
    }
    if d2 % 2 == 1 {
        let g = match shape {
            Col1Shape::X2Y2Xy => gen_mixed_odd_extra(hb),
            Col1Shape::Y2X2 => gen_split_odd_extra(hb),
        };
        gens.push(((1, (d2 + 3) / 2), g));
    } else {
        let (g, g2) = match shape {
            Col1Shape::X2Y2Xy => gen_mixed_even_extras(hb),
            Col1Shape::Y2X2 => gen_split_even_extras(hb),
        };
        gens.push(((1, (d2 + 2) / 2), g));
        gens.push(((1, (d2 + 2) / 2), g2));
    }
    gens.sort_by_key(|(bd, _)| *bd);
    for ((i, j), g) in &gens {
        debug_assert_eq!(g.bidegree(), (*i, *j));
    }
    Ok(ExplicitGenerators { shape, gens })
}

/// Second-column coefficient with out-of-range indices read as zero.
fn c2_of(hb: &HBMatrix) -> impl Fn(i64) -> SPoly + '_ {
    let cc = hb.coeff_c();
    let d2 = hb.d2() as i64;
    let p = hb.signed_minors()[0].modulus();
    move |k: i64| {
        if k >= 0 && k <= d2 {
            cc.c(k as usize, 2).clone()
        } else {
            SPoly::zero(1, p)
        }
    }
}

/// Mixed-shape generator at level `1 ≤ i ≤ d₂ − 4`, `d₂ − i` even, written
/// over the signed minors `m_β` of the `(d₂−i)/2`-column truncated stencil.
fn gen_mixed_even(hb: &HBMatrix, i: usize) -> BPoly {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let k = (d2 - i) / 2;
    let m = signed_maximal_minors(p, &b_matrix(p, k));
    let c2 = c2_of(hb);
    let t1 = SPoly::var(1, p);
    let t2 = SPoly::var(2, p);
    let mut g = BPoly::zero(i, k + 1, p);
    for w in 0..=i {
        accumulate(&mut g, w, &t2.mul(&c2(w as i64)).mul(&m[0]));
    }
    for w in 1..=i {
        accumulate(&mut g, w, &t1.mul(&c2(w as i64 - 1)).mul(&m[0]));
    }
    for w in 0..=i {
        accumulate(&mut g, w, &t1.mul(&c2(w as i64)).mul(&m[1]));
    }
    let mut s = SPoly::zero(k, p);
    for b in 2..=k {
        s = s.add(&c2((d2 + 2 - b) as i64).mul(&m[b - 1]));
    }
    for b in 1..=k {
        s = s.sub(&c2((b + i) as i64).mul(&m[b - 1]));
    }
    accumulate(&mut g, i, &t1.mul(&s));
    let mut s2 = SPoly::zero(k, p);
    for b in 1..=k {
        s2 = s2.add(&c2((d2 + 1 - b) as i64).sub(&c2((b + i - 1) as i64)).mul(&m[b - 1]));
    }
    accumulate(&mut g, i, &t2.mul(&s2));
    accumulate(&mut g, i - 1, &t1.mul(&s2));
    g
}

/// Mixed-shape generator at the top even level `i = d₂ − 2` (either parity
/// of `d₂`); the minor factors collapse to constants at this level.
fn gen_mixed_top(hb: &HBMatrix) -> BPoly {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let i = d2 - 2;
    let c2 = c2_of(hb);
    let t1 = SPoly::var(1, p);
    let t2 = SPoly::var(2, p);
    let mut g = BPoly::zero(i, 2, p);
    for w in 0..=d2 - 3 {
        accumulate(&mut g, w, &t2.mul(&c2(w as i64)));
    }
    for w in 1..=d2 - 2 {
        accumulate(&mut g, w, &t1.mul(&c2(w as i64 - 1)));
    }
    accumulate(&mut g, d2 - 2, &t1.mul(&c2(d2 as i64 - 1)).neg());
    accumulate(&mut g, d2 - 3, &t1.mul(&c2(d2 as i64 - 2)).neg());
    accumulate(&mut g, d2 - 2, &t2.mul(&c2(d2 as i64)));
    accumulate(&mut g, d2 - 3, &t1.mul(&c2(d2 as i64)));
    g
}

/// Mixed-shape extra generator at level 1 for odd `d₂`, written over the
/// signed minors `M_β` of the reversed `(d₂+1)/2`-column truncated stencil.
fn gen_mixed_odd_extra(hb: &HBMatrix) -> BPoly {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let kp = d2.div_ceil(2);
    let mm = signed_maximal_minors(p, &dagger(&b_matrix(p, kp)));
    let c2 = c2_of(hb);
    let t1 = SPoly::var(1, p);
    let t2 = SPoly::var(2, p);
    let mut g = BPoly::zero(1, (d2 + 3) / 2, p);
    if d2 == 3 {
        accumulate(&mut g, 0, &t1.mul(&c2(0)).mul(&mm[0]));
        accumulate(&mut g, 1, &t1.mul(&c2(1)).mul(&mm[0]));
    }
    if d2 >= 5 {
        let mb = &mm[(d2 - 3) / 2 - 1];
        accumulate(&mut g, 0, &t2.mul(&c2(0)).mul(mb).neg());
        accumulate(&mut g, 1, &t2.mul(&c2(1)).mul(mb).neg());
        accumulate(&mut g, 1, &t1.mul(&c2(0)).mul(mb).neg());
    }
    if d2 >= 7 {
        let mb = &mm[(d2 - 5) / 2 - 1];
        accumulate(&mut g, 0, &t1.mul(&c2(0)).mul(mb).neg());
        accumulate(&mut g, 1, &t1.mul(&c2(1)).mul(mb).neg());
    }
    for b in 1..=(d2 - 1) / 2 {
        let idx = (d2.div_ceil(2) + b) as i64;
        accumulate(&mut g, 1, &t1.mul(&c2(idx)).mul(&mm[b - 1]).neg());
    }
    for b in 1..=(d2 - 3) / 2 {
        let hi = (d2.div_ceil(2) - b) as i64;
        let lo = ((d2 - 1) / 2 - b) as i64;
        accumulate(&mut g, 1, &t1.mul(&c2(hi)).mul(&mm[b - 1]));
        accumulate(&mut g, 1, &t2.mul(&c2(lo)).mul(&mm[b - 1]));
        accumulate(&mut g, 0, &t1.mul(&c2(lo)).mul(&mm[b - 1]));
    }
    for b in 1..=d2.div_ceil(2) {
        let idx = ((d2 - 1) / 2 + b) as i64;
        accumulate(&mut g, 1, &t2.mul(&c2(idx)).mul(&mm[b - 1]).neg());
        accumulate(&mut g, 0, &t1.mul(&c2(idx)).mul(&mm[b - 1]).neg());
    }
    g
}

/// Mixed-shape pair of extra generators at level 1 for even `d₂`, over the
/// signed minors `m_β` of the `d₂/2`-column truncated stencil.
fn gen_mixed_even_extras(hb: &HBMatrix) -> (BPoly, BPoly) {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let k = d2 / 2;
    let m = signed_maximal_minors(p, &b_matrix(p, k));
    let c2 = c2_of(hb);
    let t1 = SPoly::var(1, p);
    let t2 = SPoly::var(2, p);
    let j = k + 1;
    let mut g = BPoly::zero(1, j, p);
    accumulate(&mut g, 0, &t2.mul(&c2(0)).mul(&m[0]));
    accumulate(&mut g, 1, &t2.mul(&c2(1)).mul(&m[0]));
    accumulate(&mut g, 1, &t1.mul(&c2(0)).mul(&m[0]));
    accumulate(&mut g, 0, &t1.mul(&c2(0)).mul(&m[1]));
    accumulate(&mut g, 1, &t1.mul(&c2(1)).mul(&m[1]));
    for b in 1..=k {
        accumulate(&mut g, 1, &t1.mul(&c2(1 + b as i64)).mul(&m[b - 1]).neg());
        accumulate(&mut g, 1, &t2.mul(&c2(b as i64)).mul(&m[b - 1]).neg());
        accumulate(&mut g, 0, &t1.mul(&c2(b as i64)).mul(&m[b - 1]).neg());
    }
    for b in 3..=k {
        accumulate(&mut g, 1, &t1.mul(&c2((d2 + 3 - b) as i64)).mul(&m[b - 1]));
    }
    for b in 2..=k {
        accumulate(&mut g, 1, &t2.mul(&c2((d2 + 2 - b) as i64)).mul(&m[b - 1]));
        accumulate(&mut g, 0, &t1.mul(&c2((d2 + 2 - b) as i64)).mul(&m[b - 1]));
    }
    let mut g2 = BPoly::zero(1, j, p);
    accumulate(&mut g2, 0, &t2.mul(&c2(0)).mul(&m[1]).neg());
    accumulate(&mut g2, 1, &t2.mul(&c2(1)).mul(&m[1]).neg());
    accumulate(&mut g2, 1, &t1.mul(&c2(0)).mul(&m[1]).neg());
    if d2 >= 6 {
        accumulate(&mut g2, 0, &t1.mul(&c2(0)).mul(&m[2]).neg());
        accumulate(&mut g2, 1, &t1.mul(&c2(1)).mul(&m[2]).neg());
    }
    for b in 2..=k {
        accumulate(&mut g2, 1, &t1.mul(&c2(b as i64)).mul(&m[b - 1]));
        accumulate(&mut g2, 1, &t2.mul(&c2(b as i64 - 1)).mul(&m[b - 1]));
        accumulate(&mut g2, 0, &t1.mul(&c2(b as i64 - 1)).mul(&m[b - 1]));
        accumulate(&mut g2, 1, &t1.mul(&c2((d2 - b + 2) as i64)).mul(&m[b - 1]).neg());
    }
    for b in 1..=k {
        accumulate(&mut g2, 1, &t2.mul(&c2((1 + d2 - b) as i64)).mul(&m[b - 1]).neg());
        accumulate(&mut g2, 0, &t1.mul(&c2((1 + d2 - b) as i64)).mul(&m[b - 1]).neg());
    }
    (g, g2)
}

/// Split-shape generator at level `1 ≤ i ≤ d₂ − 2`, `d₂ − i` even: a single
/// alternating T-power ladder.
fn gen_split_even(hb: &HBMatrix, i: usize) -> BPoly {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let h = (d2 - i) / 2;
    let c2 = c2_of(hb);
    let mut g = BPoly::zero(i, 1 + h, p);
    let top = signed_t_power(p, 0, h);
    for w in 0..=i {
        accumulate(&mut g, w, &c2(w as i64).mul(&top));
    }
    for lam in 1..=h {
        let t = signed_t_power(p, lam, h - lam);
        accumulate(&mut g, i - 1, &c2((i + 2 * lam - 1) as i64).mul(&t));
        accumulate(&mut g, i, &c2((i + 2 * lam) as i64).mul(&t));
    }
    g
}

/// Split-shape extra generator at level 1 for odd `d₂`.
fn gen_split_odd_extra(hb: &HBMatrix) -> BPoly {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let h = d2.div_ceil(2);
    let c2 = c2_of(hb);
    let mut g = BPoly::zero(1, 1 + h, p);
    for lam in 1..=h {
        accumulate(
            &mut g,
            0,
            &c2(2 * lam as i64 - 1).mul(&signed_t_power(p, lam, h - lam)),
        );
    }
    for lam in 0..=(d2 - 1) / 2 {
        accumulate(
            &mut g,
            1,
            &c2(2 * lam as i64).mul(&signed_t_power(p, lam, h - lam)),
        );
    }
    g
}

/// Split-shape pair of extra generators at level 1 for even `d₂`.
fn gen_split_even_extras(hb: &HBMatrix) -> (BPoly, BPoly) {
    let p = hb.signed_minors()[0].modulus();
    let d2 = hb.d2();
    let h = d2 / 2;
    let c2 = c2_of(hb);
    let mut g = BPoly::zero(1, 1 + h, p);
    for lam in 1..=h {
        accumulate(
            &mut g,
            0,
            &c2(2 * lam as i64 - 1).mul(&signed_t_power(p, lam, h - lam)),
        );
    }
    for lam in 0..=h {
        accumulate(
            &mut g,
            1,
            &c2(2 * lam as i64).mul(&signed_t_power(p, lam, h - lam)),
        );
    }
    let mut g2 = BPoly::zero(1, 1 + h, p);
    for lam in 0..=h {
        accumulate(
            &mut g2,
            0,
            &c2(2 * lam as i64).mul(&signed_t_power(p, lam, h - lam)),
        );
    }
    for lam in 0..=(d2 - 2) / 2 {
        accumulate(
            &mut g2,
            1,
            &c2(1 + 2 * lam as i64).mul(&signed_t_power(p, lam, h - lam)),
        );
    }
    (g, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hb::hb_from_coeff_lists;

    const P: u64 = 101;

    fn ex1() -> HBMatrix {
        hb_from_coeff_lists(
            P,
            &[
                [&[1, 0, 1], &[0, 0, 0, 0, 0]],
                [&[0, 1, 0], &[1, 0, 0, 0, 0]],
                [&[0, 0, 0], &[1, 0, 0, 0, 1]],
            ],
        )
        .unwrap()
    }

    fn ex2() -> HBMatrix {
        hb_from_coeff_lists(
            P,
            &[
                [&[1, 0, 0, 0], &[0, 0, 0, 0]],
                [&[0, 0, 0, 1], &[1, 0, 0, 0]],
                [&[0, 0, 0, 0], &[0, 0, 0, 1]],
            ],
        )
        .unwrap()
    }

    fn split_quintic() -> HBMatrix {
        // Columns [y^2, x^2, 0] and [0, y^3, x^3]: canonical split shape.
        hb_from_coeff_lists(
            P,
            &[
                [&[1, 0, 0], &[0, 0, 0, 0]],
                [&[0, 0, 1], &[1, 0, 0, 0]],
                [&[0, 0, 0], &[0, 0, 0, 1]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn companion_identity_on_references() {
        assert!(companion_identity_holds(&ex1()));
        assert!(companion_identity_holds(&ex2()));
        assert!(companion_identity_holds(&split_quintic()));
    }

    #[test]
    fn closed_form_matches_determinant_expansion() {
        for hb in [ex1(), ex2(), split_quintic()] {
            let delta = hb.delta();
            let table = morley_forms(&hb);
            for i in 0..=delta {
                let qs = q_forms(&hb, i);
                for (beta, q) in qs.iter().enumerate() {
                    let key = (beta, delta - i - beta);
                    match table.get(&key) {
                        Some(f) => assert_eq!(q, f, "level {i} beta {beta}"),
                        None => assert!(q.is_zero(), "level {i} beta {beta}"),
                    }
                }
            }
            let keyed: usize = table.len();
            let total: usize = (0..=delta)
                .map(|i| {
                    q_forms(&hb, i)
                        .iter()
                        .filter(|q| !q.is_zero())
                        .count()
                })
                .sum();
            assert_eq!(keyed, total);
        }
    }

    #[test]
    fn quadratic_column_specialization_agrees() {
        let hb = ex1();
        for i in 1..hb.d2() {
            assert_eq!(q_forms_d1_2(&hb, i).unwrap(), q_forms(&hb, i), "level {i}");
        }
        assert!(q_forms_d1_2(&ex2(), 1).is_err());
        assert!(q_forms_d1_2(&hb, 0).is_err());
        assert!(q_forms_d1_2(&hb, hb.d2()).is_err());
    }

    #[test]
    fn catalogs_annihilate_their_stencils() {
        for ell in 3..=9 {
            for shape in [Col1Shape::X2Y2Xy, Col1Shape::Y2X2] {
                let a = stencil_matrix(P, ell, shape);
                let cat = syzygy_catalog(P, ell, shape).unwrap();
                assert_eq!(cat.twists[0] + cat.twists[1], ell, "{shape} {ell}");
                for (col, twist) in cat.columns.iter().zip(cat.twists) {
                    assert_eq!(col.len(), ell);
                    for e in col.iter().filter(|e| !e.is_zero()) {
                        assert_eq!(e.degree(), twist - 1, "{shape} {ell}");
                    }
                    assert!(
                        a.mul_vec(col).iter().all(|s| s.is_zero()),
                        "{shape} stencil with {ell} columns"
                    );
                }
            }
        }
        assert!(syzygy_catalog(P, 2, Col1Shape::Y2X2).is_err());
    }

    #[test]
    fn level_forms_match_elimination_minors() {
        assert!(morley_delta_check(&ex1()).unwrap());
        assert!(morley_delta_check(&ex2()).unwrap());
        assert!(morley_delta_check(&split_quintic()).unwrap());
    }

    #[test]
    fn syzygy_push_produces_torsion() {
        let hb = ex1();
        let mut oracle = Oracle::new(hb.clone());
        // The first column is canonically shaped, so the stencil syzygies at
        // level i = 1 (a 4-column stencil) feed straight into the push map.
        let cat = syzygy_catalog(P, 4, Col1Shape::X2Y2Xy).unwrap();
        for col in &cat.columns {
            let f = nu1(&hb, 1, col).unwrap();
            assert!(!f.is_zero());
            assert!(oracle.a_contains(&f));
        }
        let bad = vec![SPoly::var(1, P); 4];
        assert!(nu1(&hb, 1, &bad).is_err());
    }

    #[test]
    fn explicit_generators_on_mixed_shape() {
        let hb = ex1();
        let gens = explicit_generators(&hb).unwrap();
        assert_eq!(gens.shape, Col1Shape::X2Y2Xy);
        assert_eq!(
            gens.bidegrees(),
            BidegreeMultiset::from_pairs(&[(1, 3, 2), (2, 2, 1)])
        );
        let mut oracle = Oracle::new(hb.clone());
        for (_, g) in &gens.gens {
            assert!(!g.is_zero());
            assert!(oracle.j_contains(g));
            assert!(oracle.a_contains(g));
        }
    }

    #[test]
    fn explicit_generators_on_split_shape() {
        let hb = split_quintic();
        let gens = explicit_generators(&hb).unwrap();
        assert_eq!(gens.shape, Col1Shape::Y2X2);
        assert_eq!(
            gens.bidegrees(),
            BidegreeMultiset::from_pairs(&[(1, 2, 1), (1, 3, 1)])
        );
        let mut oracle = Oracle::new(hb.clone());
        for (_, g) in &gens.gens {
            assert!(!g.is_zero());
            assert!(oracle.j_contains(g));
            assert!(oracle.a_contains(g));
        }
    }

    #[test]
    fn explicit_generators_complete() {
        // Together with the implicit equation and the top-window minors the
        // explicit generators fill the whole torsion module.
        let hb = ex1();
        let mut oracle = Oracle::new(hb.clone());
        let mut gens: Vec<BPoly> = explicit_generators(&hb)
            .unwrap()
            .gens
            .into_iter()
            .map(|(_, g)| g)
            .collect();
        gens.extend(oracle.j_strand(0, 6));
        gens.extend(delta_minors(&hb, hb.d2() - 1).unwrap());
        assert!(oracle.generates_torsion(&gens, hb.delta(), 6).unwrap());
    }

    #[test]
    fn explicit_generators_reject_non_canonical_columns() {
        // Valid matrix with quadratic first column not in canonical shape.
        let hb = hb_from_coeff_lists(
            P,
            &[
                [&[1, 0, 1], &[0, 0, 0, 0, 0]],
                [&[0, 3, 0], &[1, 0, 0, 0, 0]],
                [&[0, 0, 0], &[1, 0, 0, 0, 1]],
            ],
        )
        .unwrap();
        assert!(matches!(
            explicit_generators(&hb),
            Err(Error::BadInput(_))
        ));
        assert!(matches!(
            explicit_generators(&ex2()),
            Err(Error::OutOfScope(_))
        ));
    }
}
