//! Elimination matrices whose maximal minors generate the top strands of
//! the torsion of the symmetric algebra.
//!
//! For 1 <= ell <= d1 the matrix Psi_ell = [Lambda_ell | Xi_ell] has ell + 1
//! rows: Lambda_ell carries the Koszul relations on x, y and Xi_ell folds
//! the coefficients of g1, g2 into ell + 1 rows. Deleting one Lambda column
//! leaves a square matrix whose determinant lies in bidegree (d - 1 - ell, 2)
//! and is a torsion element; the ell such minors span the torsion strand
//! there. At ell = 1 the single minor is the classical bigraded Sylvester
//! form det Xi_1.

use crate::error::{Error, Result};
use crate::exactlin::FieldElem;
use crate::hb::HBMatrix;
use crate::polyring::BPoly;

/// The (ell + 1) x ell matrix with -x on the diagonal and y below it:
/// column c has -x in row c and y in row c + 1; entries have bidegree (1, 0).
pub fn lambda_matrix(p: u64, ell: usize) -> Vec<Vec<BPoly>> {
    let one = FieldElem::one(p);
    (0..=ell)
        .map(|r| {
            (0..ell)
                .map(|c| {
                    let mut f = BPoly::zero(1, 0, p);
                    if r == c {
                        f.set_coeff(1, (0, 0, 0), -one);
                    } else if r == c + 1 {
                        f.set_coeff(0, (0, 0, 0), one);
                    }
                    f
                })
                .collect()
        })
        .collect()
}

/// The (ell + 1) x 2 matrix folding g1, g2 into ell + 1 rows: the term
/// c_{w,m} x^w y^{d_m - w} of g_m contributes c_{w,m} x^{w-a} y^{d_m-w-ell+a}
/// to row a = min(w, ell) of column m - 1. Entries of column m - 1 have
/// bidegree (d_m - ell, 1).
pub fn xi_matrix(hb: &HBMatrix, ell: usize) -> Vec<Vec<BPoly>> {
    let p = hb.modulus();
    let c = hb.coeff_c();
    let mut rows: Vec<Vec<BPoly>> = (0..=ell)
        .map(|_| {
            (1..=2)
                .map(|m| BPoly::zero(hb.col_degree(m - 1) - ell, 1, p))
                .collect()
        })
        .collect();
    for m in 1..=2usize {
        let dm = hb.col_degree(m - 1);
        for w in 0..=dm {
            let cf = c.c(w, m);
            if cf.is_zero() {
                continue;
            }
            let a = w.min(ell);
            let xe = w - a;
            let f = &mut rows[a][m - 1];
            for (e, v) in cf.terms() {
                f.set_coeff(xe, e, f.coeff(xe, e) + v);
            }
        }
    }
    rows
}

/// The concatenation [Lambda_ell | Xi_ell], an (ell + 1) x (ell + 2) matrix.
pub struct PsiMatrix {
    ell: usize,
    rows: Vec<Vec<BPoly>>,
}

impl PsiMatrix {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn nrows(&self) -> usize {
        self.ell + 1
    }

    pub fn ncols(&self) -> usize {
        self.ell + 2
    }

    pub fn at(&self, r: usize, c: usize) -> &BPoly {
        &self.rows[r][c]
    }
}

pub fn psi_matrix(hb: &HBMatrix, ell: usize) -> Result<PsiMatrix> {
    if ell < 1 || ell > hb.d1() {
        return Err(Error::OutOfScope(format!(
            "elimination level {ell} outside 1..={}",
            hb.d1()
        )));
    }
    let lambda = lambda_matrix(hb.modulus(), ell);
    let xi = xi_matrix(hb, ell);
    let rows = lambda
        .into_iter()
        .zip(xi)
        .map(|(l, x)| l.into_iter().chain(x).collect())
        .collect();
    Ok(PsiMatrix { ell, rows })
}

/// Determinant of a square grid of B-elements by first-row expansion over a
/// column mask. The grid must be graded: all permutation products share one
/// bidegree, taken from the diagonal.
fn det_grid(rows: &[Vec<BPoly>]) -> BPoly {
    let n = rows.len();
    assert!(n > 0 && rows.iter().all(|r| r.len() == n));
    let p = rows[0][0].modulus();
    let (mut di, mut dj) = (0usize, 0usize);
    for (k, row) in rows.iter().enumerate() {
        let (a, b) = row[k].bidegree();
        di += a;
        dj += b;
    }
    fn go(rows: &[Vec<BPoly>], r: usize, mask: u32, acc: &BPoly) -> BPoly {
        if mask == 0 {
            return acc.clone();
        }
        let n = rows.len();
        let mut out: Option<BPoly> = None;
        let mut sign = false;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let e = &rows[r][c];
            if !e.is_zero() {
                let term = go(rows, r + 1, mask & !(1u32 << c), &acc.mul(e));
                let term = if sign { term.neg() } else { term };
                out = Some(match out {
                    None => term,
                    Some(o) => o.add(&term),
                });
            }
            sign = !sign;
        }
        out.unwrap_or_else(|| {
            // All remaining contributions vanish; keep the grid's bidegree.
            let (i, j) = acc.bidegree();
            let mut remaining = (0usize, 0usize);
            for k in r..n {
                let (a, b) = rows[k][k].bidegree();
                remaining.0 += a;
                remaining.1 += b;
            }
            BPoly::zero(i + remaining.0, j + remaining.1, rows[0][0].modulus())
        })
    }
    let unit = BPoly::from_biform(&crate::polyring::BiForm::from_coeffs(p, &[1]));
    let out = go(rows, 0, (1u32 << n) - 1, &unit);
    debug_assert_eq!(out.bidegree(), (di, dj));
    out
}

/// The d - 1 - i maximal minors of Psi_{d-1-i} that keep both Xi columns:
/// minor k deletes Lambda column k. Each has bidegree (i, 2); they span the
/// torsion strand there for d2 - 1 <= i <= d - 2.
pub fn delta_minors(hb: &HBMatrix, i: usize) -> Result<Vec<BPoly>> {
    let d = hb.d();
    if i + 1 >= d || d - 1 - i > hb.d1() {
        return Err(Error::OutOfScope(format!(
            "minor level {i} outside {}..={}",
            hb.d2() - 1,
            d - 2
        )));
    }
    let ell = d - 1 - i;
    let psi = psi_matrix(hb, ell)?;
    let mut out = Vec::with_capacity(ell);
    for k in 0..ell {
        let rows: Vec<Vec<BPoly>> = (0..psi.nrows())
            .map(|r| {
                (0..psi.ncols())
                    .filter(|&c| c != k)
                    .map(|c| psi.at(r, c).clone())
                    .collect()
            })
            .collect();
        let minor = det_grid(&rows);
        debug_assert_eq!(minor.bidegree(), (i, 2));
        out.push(minor);
    }
    Ok(out)
}

/// The bigraded Sylvester form det Xi_1, of bidegree (d - 2, 2); it spans
/// the top torsion strand.
pub fn sylvester_form(hb: &HBMatrix) -> BPoly {
    let xi = xi_matrix(hb, 1);
    let rows: Vec<Vec<BPoly>> = vec![xi[0].clone(), xi[1].clone()];
    det_grid(&rows)
}
