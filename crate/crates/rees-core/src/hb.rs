//! 3x2 matrices of binary forms presenting height-two ideals of F_p[x, y].
//!
//! A valid matrix has column degrees d1 <= d2, its three signed maximal
//! minors h1, h2, h3 are coprime forms of degree d = d1 + d2, and they are
//! linearly independent, so the ideal (h1, h2, h3) is minimally generated by
//! the minors and the matrix is its full syzygy matrix.

use crate::error::{Error, Result};
use crate::exactlin::{sqrt_mod_p, validate_prime, ExactMatrix, FieldElem, RowSpace};
use crate::polyring::{gcd_biforms, BPoly, BiForm, SMatrix, SPoly, Strand};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The two canonical first-column shapes reachable when d1 = 2 and the first
/// column has a generalized zero: [x^2 + y^2, x y, 0] or [y^2, x^2, 0].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Col1Shape {
    #[serde(rename = "X2Y2_XY")]
    X2Y2Xy,
    #[serde(rename = "Y2_X2")]
    Y2X2,
}

impl fmt::Display for Col1Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Col1Shape::X2Y2Xy => write!(f, "X2Y2_XY"),
            Col1Shape::Y2X2 => write!(f, "Y2_X2"),
        }
    }
}

/// An invertible change of coordinates taking one presentation matrix to
/// another: a row operation on the left and a substitution
/// x -> m00 x + m01 y, y -> m10 x + m11 y applied to every entry.
#[derive(Clone, Debug)]
pub struct Col1Transform {
    pub row_ops: [[FieldElem; 3]; 3],
    pub var_sub: [[FieldElem; 2]; 2],
}

impl Col1Transform {
    pub fn identity(p: u64) -> Col1Transform {
        let z = FieldElem::zero(p);
        let o = FieldElem::one(p);
        Col1Transform {
            row_ops: [[o, z, z], [z, o, z], [z, z, o]],
            var_sub: [[o, z], [z, o]],
        }
    }

    /// Applies the transform to a matrix and revalidates the result.
    pub fn apply(&self, hb: &HBMatrix) -> Result<HBMatrix> {
        let p = hb.modulus();
        let mut rows: Vec<[BiForm; 2]> = Vec::with_capacity(3);
        for r in 0..3 {
            let mut new_row: Vec<BiForm> = Vec::with_capacity(2);
            for c in 0..2 {
                let mut acc = BiForm::zero(hb.col_degree(c), p);
                for (k, coef) in self.row_ops[r].iter().enumerate() {
                    acc = acc.add(&hb.entry(k, c).scale(*coef));
                }
                new_row.push(acc.substitute_linear(
                    self.var_sub[0][0],
                    self.var_sub[0][1],
                    self.var_sub[1][0],
                    self.var_sub[1][1],
                ));
            }
            rows.push([new_row[0].clone(), new_row[1].clone()]);
        }
        HBMatrix::new(p, [rows[0].clone(), rows[1].clone(), rows[2].clone()])
    }
}

/// Result of normalizing the first column to a canonical shape.
#[derive(Clone, Debug)]
pub struct CanonicalCol1 {
    pub hb: HBMatrix,
    pub shape: Col1Shape,
    pub transform: Col1Transform,
}

/// The linear forms c_{l,m} in S = F_p[T1, T2, T3] defined by
/// g_m = sum_l c_{l,m} x^l y^{d_m - l}, where [g1, g2] = [T1, T2, T3] phi.
#[derive(Clone)]
pub struct CoeffC {
    p: u64,
    cols: [Vec<SPoly>; 2],
}

impl CoeffC {
    /// c_{l,m} with m in {1, 2} matching the column of phi.
    pub fn c(&self, ell: usize, m: usize) -> &SPoly {
        assert!(m == 1 || m == 2, "column index {m} out of range");
        &self.cols[m - 1][ell]
    }

    pub fn col_degree(&self, m: usize) -> usize {
        assert!(m == 1 || m == 2);
        self.cols[m - 1].len() - 1
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The banded (d_m + n) x n matrix whose column j carries
    /// c_{0,m}, ..., c_{d_m,m} in rows j, ..., j + d_m. It represents
    /// multiplication by g_m from x,y-degree n - 1 into degree d_m + n - 1,
    /// with monomial bases ordered y-pure first.
    pub fn upsilon(&self, n: usize, m: usize) -> SMatrix {
        let dm = self.col_degree(m);
        let p = self.p;
        SMatrix::from_fn(dm + n, n, |r, c| {
            if r >= c && r - c <= dm {
                self.c(r - c, m).clone()
            } else {
                SPoly::zero(1, p)
            }
        })
    }
}

/// A validated 3x2 presentation matrix. Entries are stored row-major;
/// `entry(r, c)` is the row-r form of column c (0-indexed), with column 0 the
/// lower-degree column.
#[derive(Clone)]
pub struct HBMatrix {
    p: u64,
    d1: usize,
    d2: usize,
    entries: [[BiForm; 2]; 3],
    minors: [BiForm; 3],
}

impl HBMatrix {
    /// Validates and wraps a 3x2 matrix of binary forms. Columns are
    /// reordered if needed so the first column has the smaller degree.
    pub fn new(p: u64, mut entries: [[BiForm; 2]; 3]) -> Result<HBMatrix> {
        validate_prime(p)?;
        for row in &entries {
            for f in row {
                if f.modulus() != p {
                    return Err(Error::BadInput(
                        "matrix entries carry a different modulus than the ambient field"
                            .to_string(),
                    ));
                }
            }
        }
        let deg_col = |entries: &[[BiForm; 2]; 3], c: usize| -> Result<usize> {
            let d = entries[0][c].degree();
            for row in entries.iter() {
                if row[c].degree() != d {
                    return Err(Error::DegreeInconsistent(format!(
                        "column {c} mixes degrees {} and {}",
                        d,
                        row[c].degree()
                    )));
                }
            }
            Ok(d)
        };
        let mut d1 = deg_col(&entries, 0)?;
        let mut d2 = deg_col(&entries, 1)?;
        if d1 > d2 {
            for row in entries.iter_mut() {
                row.swap(0, 1);
            }
            std::mem::swap(&mut d1, &mut d2);
        }
        if d1 == 0 {
            return Err(Error::Shape(
                "column degrees must be positive; a degree-zero column contains units".to_string(),
            ));
        }
        let minors = Self::signed_minors_of(&entries);
        let g = gcd_biforms(&minors);
        if g.is_zero() || g.degree() > 0 {
            return Err(Error::NotHeightTwo);
        }
        // The minors must be linearly independent, so that they minimally
        // generate. Their common degree is d1 + d2.
        let d = d1 + d2;
        let mut rows = Vec::with_capacity(3);
        for h in &minors {
            let mut row = Vec::with_capacity(d + 1);
            for w in 0..=d {
                row.push(h.coeff(w));
            }
            rows.push(row);
        }
        let m = ExactMatrix::from_rows(rows, p)?;
        if m.rank() != 3 {
            return Err(Error::NotThreeGenerated);
        }
        Ok(HBMatrix {
            p,
            d1,
            d2,
            entries,
            minors,
        })
    }

    fn signed_minors_of(entries: &[[BiForm; 2]; 3]) -> [BiForm; 3] {
        let det = |a: &BiForm, b: &BiForm, c: &BiForm, d: &BiForm| a.mul(d).sub(&b.mul(c));
        let h1 = det(
            &entries[1][0],
            &entries[1][1],
            &entries[2][0],
            &entries[2][1],
        );
        let h2 = det(
            &entries[0][0],
            &entries[0][1],
            &entries[2][0],
            &entries[2][1],
        )
        .neg();
        let h3 = det(
            &entries[0][0],
            &entries[0][1],
            &entries[1][0],
            &entries[1][1],
        );
        [h1, h2, h3]
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn d(&self) -> usize {
        self.d1 + self.d2
    }

    /// delta = d - 2, the top x,y-degree of the kernel of Sym -> Rees.
    pub fn delta(&self) -> usize {
        self.d() - 2
    }

    pub fn col_degree(&self, c: usize) -> usize {
        if c == 0 {
            self.d1
        } else {
            self.d2
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> &BiForm {
        &self.entries[r][c]
    }

    /// The signed maximal minors (h1, h2, h3): h_k is (-1)^{k+1} times the
    /// determinant of the matrix with row k deleted.
    pub fn signed_minors(&self) -> &[BiForm; 3] {
        &self.minors
    }

    /// The coefficient forms c_{l,m} of g_m = sum_i T_i phi_{i,m}.
    pub fn coeff_c(&self) -> CoeffC {
        let p = self.p;
        let col = |c: usize, dm: usize| -> Vec<SPoly> {
            (0..=dm)
                .map(|ell| {
                    let mut s = SPoly::zero(1, p);
                    for (i, row) in self.entries.iter().enumerate() {
                        let v = row[c].coeff(ell);
                        if !v.is_zero() {
                            s = s.add(&SPoly::var(i + 1, p).scale(v));
                        }
                    }
                    s
                })
                .collect()
        };
        CoeffC {
            p,
            cols: [col(0, self.d1), col(1, self.d2)],
        }
    }

    /// g_m as an element of B of bidegree (d_m, 1); m in {1, 2}.
    pub fn g_form(&self, m: usize) -> BPoly {
        assert!(m == 1 || m == 2);
        let dm = self.col_degree(m - 1);
        let c = self.coeff_c();
        let mut g = BPoly::zero(dm, 1, self.p);
        for ell in 0..=dm {
            for (e, v) in c.c(ell, m).terms() {
                g.set_coeff(ell, e, v);
            }
        }
        g
    }

    pub fn upsilon(&self, n: usize, m: usize) -> SMatrix {
        self.coeff_c().upsilon(n, m)
    }

    /// Dimension of the span of the first-column entries inside the space of
    /// degree-d1 forms; this is the minimal number of generators of the ideal
    /// they generate.
    pub fn mu_col1(&self) -> usize {
        let mut span = RowSpace::new(self.d1 + 1, self.p);
        for row in &self.entries {
            let v: Vec<FieldElem> = (0..=self.d1).map(|w| row[0].coeff(w)).collect();
            span.add(v);
        }
        span.rank()
    }

    /// A generalized zero in the first column: some invertible row operation
    /// makes an entry of the d1-column vanish, i.e. the three entries span a
    /// space of dimension at most 2.
    pub fn generalized_zero_col1(&self) -> bool {
        self.mu_col1() <= 2
    }

    /// Minimal number of generators of the ideal of all six entries;
    /// meaningful as a single span dimension only when d1 = d2.
    pub fn mu_entries(&self) -> usize {
        assert_eq!(self.d1, self.d2, "entry span needs equal column degrees");
        let mut span = RowSpace::new(self.d1 + 1, self.p);
        for row in &self.entries {
            for c in 0..2 {
                let v: Vec<FieldElem> = (0..=self.d1).map(|w| row[c].coeff(w)).collect();
                span.add(v);
            }
        }
        span.rank()
    }

    /// For d1 = d2: the span dimension of the 2x2 minors of the
    /// (d1 + 1) x 2 matrix whose rows are (c_{l,1}, c_{l,2}); the minors are
    /// quadrics in S.
    pub fn mu_c_minors(&self) -> usize {
        assert_eq!(self.d1, self.d2, "coefficient minors need equal column degrees");
        let c = self.coeff_c();
        let basis = Strand::t_exps(2);
        let mut span = RowSpace::new(basis.len(), self.p);
        for ell in 0..self.d1 {
            for m in (ell + 1)..=self.d1 {
                let q = c.c(ell, 1).mul(c.c(m, 2)).sub(&c.c(m, 1).mul(c.c(ell, 2)));
                let v: Vec<FieldElem> = basis.iter().map(|&e| q.coeff(e)).collect();
                span.add(v);
            }
        }
        span.rank()
    }

    /// Detects a first column that literally equals one of the canonical
    /// shapes.
    pub fn col1_canonical_shape(&self) -> Option<Col1Shape> {
        if self.d1 != 2 {
            return None;
        }
        let p = self.p;
        let x2y2 = BiForm::from_coeffs(p, &[1, 0, 1]);
        let xy = BiForm::from_coeffs(p, &[0, 1, 0]);
        let y2 = BiForm::from_coeffs(p, &[1, 0, 0]);
        let x2 = BiForm::from_coeffs(p, &[0, 0, 1]);
        let col: Vec<&BiForm> = self.entries.iter().map(|r| &r[0]).collect();
        if *col[0] == x2y2 && *col[1] == xy && col[2].is_zero() {
            Some(Col1Shape::X2Y2Xy)
        } else if *col[0] == y2 && *col[1] == x2 && col[2].is_zero() {
            Some(Col1Shape::Y2X2)
        } else {
            None
        }
    }

    /// Normalizes the first column of a d1 = 2 matrix with a generalized
    /// zero to a canonical shape by row operations and a linear change of
    /// the variables x, y. Inputs already in canonical shape are returned
    /// unchanged; all other split inputs normalize to [y^2, x^2, 0]. When
    /// the two rank-one members of the quadric pencil are conjugate over a
    /// quadratic extension, normalization is impossible over F_p.
    pub fn canonicalize_col1(&self) -> Result<CanonicalCol1> {
        if self.d1 != 2 {
            return Err(Error::OutOfScope(
                "first-column normalization applies only when the smaller column degree is 2"
                    .to_string(),
            ));
        }
        let p = self.p;
        if let Some(shape) = self.col1_canonical_shape() {
            return Ok(CanonicalCol1 {
                hb: self.clone(),
                shape,
                transform: Col1Transform::identity(p),
            });
        }
        if !self.generalized_zero_col1() {
            return Err(Error::BadInput(
                "the first column has no generalized zero: its entries span all quadrics"
                    .to_string(),
            ));
        }
        // Left kernel vector u of the 3 x 3 coefficient matrix of the first
        // column; u applied to the rows zeroes the column-1 slot.
        let coeff_rows: Vec<Vec<FieldElem>> = self
            .entries
            .iter()
            .map(|r| (0..=2).map(|w| r[0].coeff(w)).collect())
            .collect();
        let m = ExactMatrix::from_rows(coeff_rows, p)?;
        let kernel = m.transpose().kernel_basis();
        let u = kernel
            .first()
            .ok_or_else(|| Error::Internal("missing left kernel on a rank-two column".into()))?
            .clone();
        // Two independent entries v_i, v_j of the first column.
        let mut pair = None;
        'outer: for i in 0..3 {
            for j in (i + 1)..3 {
                let mut span = RowSpace::new(3, p);
                span.add((0..=2).map(|w| self.entries[i][0].coeff(w)).collect());
                span.add((0..=2).map(|w| self.entries[j][0].coeff(w)).collect());
                if span.rank() == 2 {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (i, j) = pair.ok_or(Error::Internal(
            "first column has rank below two after validation".into(),
        ))?;
        let z = FieldElem::zero(p);
        let o = FieldElem::one(p);
        let mut perm = [[z; 3]; 3];
        perm[0][i] = o;
        perm[1][j] = o;
        perm[2] = [u[0], u[1], u[2]];
        let q1 = self.entries[i][0].clone();
        let q2 = self.entries[j][0].clone();
        // Discriminant of the pencil s q1 + t q2 as a quadratic form in
        // (s, t), sampled at (1,0), (0,1), (1,1).
        let disc = |f: &BiForm| {
            let a = f.coeff(2);
            let b = f.coeff(1);
            let c = f.coeff(0);
            b * b - FieldElem::new(4, p) * a * c
        };
        let alpha = disc(&q1);
        let gamma = disc(&q2);
        let beta = disc(&q1.add(&q2)) - alpha - gamma;
        if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
            return Err(Error::Internal(
                "pencil of first-column quadrics is entirely degenerate".into(),
            ));
        }
        let pencil_disc = beta * beta - FieldElem::new(4, p) * alpha * gamma;
        if pencil_disc.is_zero() {
            return Err(Error::Internal(
                "first-column pencil is tangent to the rank-one locus; the minors share a factor"
                    .into(),
            ));
        }
        let Some(root) = sqrt_mod_p(pencil_disc) else {
            return Err(Error::ExtensionRequired);
        };
        // The two rank-one members s q1 + t q2 at the projective roots of
        // alpha s^2 + beta s t + gamma t^2.
        let two_inv = FieldElem::new(2, p).inv();
        let roots: [(FieldElem, FieldElem); 2] = if !alpha.is_zero() {
            let inv2a = (FieldElem::new(2, p) * alpha).inv();
            [((-beta + root) * inv2a, o), ((-beta - root) * inv2a, o)]
        } else {
            [(o, z), (-gamma * beta.inv(), o)]
        };
        let mut line = [(z, z); 2];
        let mut scalar = [o; 2];
        for (k, &(s, t)) in roots.iter().enumerate() {
            let member = q1.scale(s).add(&q2.scale(t));
            let a = member.coeff(2);
            let b = member.coeff(1);
            if !a.is_zero() {
                // member = a (x + (b / 2a) y)^2
                line[k] = (o, b * two_inv * a.inv());
                scalar[k] = a;
            } else {
                // b^2 = 4ac = 0 forces member = c y^2.
                line[k] = (z, o);
                scalar[k] = member.coeff(0);
            }
        }
        // Row transform sending (rows i, j) to the scaled rank-one members.
        let mut pencil_rows = [[z; 3]; 3];
        pencil_rows[0][0] = roots[0].0 * scalar[0].inv();
        pencil_rows[0][1] = roots[0].1 * scalar[0].inv();
        pencil_rows[1][0] = roots[1].0 * scalar[1].inv();
        pencil_rows[1][1] = roots[1].1 * scalar[1].inv();
        pencil_rows[2][2] = o;
        let row_ops = mat3_mul(&pencil_rows, &perm, p);
        // Substitution sending line 1 to y and line 2 to x.
        let (a1, b1) = line[0];
        let (a2, b2) = line[1];
        let det = a1 * b2 - a2 * b1;
        if det.is_zero() {
            return Err(Error::Internal(
                "rank-one members of a split pencil share their line".into(),
            ));
        }
        let dinv = det.inv();
        let var_sub = [[-b1 * dinv, b2 * dinv], [a1 * dinv, -a2 * dinv]];
        let transform = Col1Transform { row_ops, var_sub };
        let hb = transform.apply(self)?;
        if hb.col1_canonical_shape() != Some(Col1Shape::Y2X2) {
            return Err(Error::Internal(
                "first-column normalization did not reach the canonical shape".into(),
            ));
        }
        Ok(CanonicalCol1 {
            hb,
            shape: Col1Shape::Y2X2,
            transform,
        })
    }
}

fn mat3_mul(a: &[[FieldElem; 3]; 3], b: &[[FieldElem; 3]; 3], p: u64) -> [[FieldElem; 3]; 3] {
    let z = FieldElem::zero(p);
    let mut out = [[z; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let mut acc = z;
            for k in 0..3 {
                acc += a[r][k] * b[k][c];
            }
            out[r][c] = acc;
        }
    }
    out
}

impl fmt::Display for HBMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            writeln!(f, "[{}, {}]", row[0], row[1])?;
        }
        Ok(())
    }
}

impl fmt::Debug for HBMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HBMatrix(d1={}, d2={})", self.d1, self.d2)
    }
}

/// Builds a matrix from per-entry coefficient lists indexed by x-exponent,
/// `lists[row][col]`; each list length fixes that entry's degree.
pub fn hb_from_coeff_lists(p: u64, lists: &[[&[i64]; 2]; 3]) -> Result<HBMatrix> {
    let mut entries: Vec<[BiForm; 2]> = Vec::with_capacity(3);
    for row in lists {
        let f0 = BiForm::from_coeffs(p, row[0]);
        let f1 = BiForm::from_coeffs(p, row[1]);
        entries.push([f0, f1]);
    }
    HBMatrix::new(p, [entries[0].clone(), entries[1].clone(), entries[2].clone()])
}

/// Builds the matrix whose column forms have the given T-linear coefficient
/// vectors: `c1[l]` is the coefficient of `x^l y^{d1-l}` in the first column
/// form and likewise for `c2`.  Inverse of [`HBMatrix::coeff_c`].
pub fn hb_from_coefficient_vectors(p: u64, c1: &[SPoly], c2: &[SPoly]) -> Result<HBMatrix> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::BadInput("empty coefficient vector".into()));
    }
    for c in c1.iter().chain(c2) {
        if !c.is_zero() && c.degree() != 1 {
            return Err(Error::BadInput(
                "coefficient vectors must be linear in T".into(),
            ));
        }
    }
    let build = |cs: &[SPoly], r: usize| -> BiForm {
        let dm = cs.len() - 1;
        let mut f = BiForm::zero(dm, p);
        for (l, c) in cs.iter().enumerate() {
            let mut e = [0u16; 3];
            e[r] = 1;
            f.set_coeff(l, c.coeff((e[0], e[1], e[2])));
        }
        f
    };
    let rows: [[BiForm; 2]; 3] = [
        [build(c1, 0), build(c2, 0)],
        [build(c1, 1), build(c2, 1)],
        [build(c1, 2), build(c2, 2)],
    ];
    HBMatrix::new(p, rows)
}
