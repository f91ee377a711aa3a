//! Closed-form structure predictions: the rank chart of the torsion strands,
//! free-module twist tables, the generator-degree table, the balanced-degree
//! classification, and the sextic singularity classifier.
//!
//! Everything here is a *prediction* computed from the matrix data alone
//! (column degrees, first-column span, entry spans, minor spans); the
//! brute-force [`Oracle`](crate::oracle::Oracle) recomputes the same
//! quantities from first principles so the two sides can be compared.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{ExactMatrix, FieldElem};
use crate::hb::HBMatrix;
use crate::oracle::{BidegreeMultiset, Oracle};
use crate::polyring::{SMatrix, Strand};

/// The rank of the torsion module at xy-level `i` as a module over the
/// T-polynomial ring: `i + 1` on the low ramp, the smaller column degree on
/// the middle plateau, `δ − i + 1` on the top ramp, and `0` above `δ`.
pub fn chart_rank(hb: &HBMatrix, i: usize) -> usize {
    let (d1, d2, delta) = (hb.d1(), hb.d2(), hb.delta());
    if i > delta {
        0
    } else if i + 1 >= d2 {
        delta - i + 1
    } else if i + 1 >= d1 {
        d1
    } else {
        i + 1
    }
}

/// The linear-entry matrix whose graded kernel realizes the torsion at
/// xy-level `i ≤ δ` (with the T-grading shifted by two): the transposed
/// first-column band matrix on the middle plateau, the two transposed band
/// matrices stacked on the low ramp, and an empty matrix (full kernel) on
/// the top ramp.
pub fn chart_kernel_matrix(hb: &HBMatrix, i: usize) -> Result<SMatrix> {
    let (d1, d2, delta) = (hb.d1(), hb.d2(), hb.delta());
    if i > delta {
        return Err(Error::OutOfScope(format!(
            "torsion vanishes above level {delta}, got {i}"
        )));
    }
    let cols = hb.d() - 1 - i;
    if i + 1 >= d2 {
        return Ok(SMatrix::from_fn(0, cols, |_, _| unreachable!()));
    }
    let u1 = hb.upsilon(d2 - 1 - i, 1).transpose();
    if i + 1 >= d1 {
        return Ok(u1);
    }
    let u2 = hb.upsilon(d1 - 1 - i, 2).transpose();
    let split = u1.nrows();
    debug_assert_eq!(u1.ncols(), cols);
    debug_assert_eq!(u2.ncols(), cols);
    Ok(SMatrix::from_fn(split + u2.nrows(), cols, |r, c| {
        if r < split {
            u1.at(r, c).clone()
        } else {
            u2.at(r - split, c).clone()
        }
    }))
}

/// Dimension of the space of vectors with entries in the degree-`t` piece of
/// the T-polynomial ring annihilated by a matrix with linear entries.
pub fn linear_kernel_dim(m: &SMatrix, t: usize) -> usize {
    let (rows, cols) = (m.nrows(), m.ncols());
    let src = Strand::t_dim(t);
    if rows == 0 || cols == 0 {
        return cols * src;
    }
    let p = m.at(0, 0).modulus();
    let tgt = Strand::t_dim(t + 1);
    let exps = Strand::t_exps(t);
    let mut data = vec![vec![FieldElem::zero(p); cols * src] ; rows * tgt];
    for r in 0..rows {
        for c in 0..cols {
            let entry = m.at(r, c);
            if entry.is_zero() {
                continue;
            }
            assert_eq!(entry.degree(), 1, "kernel assembly needs linear entries");
            for (ek, v) in entry.terms() {
                for (s, e) in exps.iter().enumerate() {
                    let f = (e.0 + ek.0, e.1 + ek.1, e.2 + ek.2);
                    data[r * tgt + Strand::t_rank(f, t + 1)][c * src + s] += v;
                }
            }
        }
    }
    let mat = ExactMatrix::from_rows(data, p).expect("uniform assembly");
    cols * src - mat.rank()
}

/// The twists of the torsion module at level `i` when it is free: on the top
/// ramp (`d₂ − 1 ≤ i ≤ δ`) it is always free with all twists 2; on the
/// middle plateau (`d₁ − 1 ≤ i ≤ d₂ − 2`, which requires `d₁ < d₂`) it is
/// free when the first column has a generalized zero, with twists obtained
/// by dividing `d + d₁ − 1 − i` as evenly as possible into `d₁` parts.
/// Returned sorted ascending.
pub fn predicted_twists(hb: &HBMatrix, i: usize) -> Result<Vec<usize>> {
    let (d1, d2, delta) = (hb.d1(), hb.d2(), hb.delta());
    if i + 1 < d1 || i > delta {
        return Err(Error::OutOfScope(format!(
            "freeness predictions cover levels {}..={delta}, got {i}",
            d1 - 1
        )));
    }
    if i + 1 >= d2 {
        return Ok(vec![2; delta - i + 1]);
    }
    if !hb.generalized_zero_col1() {
        return Err(Error::OutOfScope(
            "plateau freeness requires a generalized zero in the first column".into(),
        ));
    }
    let n = hb.d() + d1 - 1 - i;
    let (alpha, beta) = (n / d1, n % d1);
    let mut twists = vec![alpha; d1 - beta];
    twists.extend(std::iter::repeat_n(alpha + 1, beta));
    Ok(twists)
}

/// Predicted bidegrees of the minimal generators of the torsion truncated at
/// x,y-level `d₁ − 1` (the submodule of elements of x,y-degree at least
/// `d₁ − 1`), as a module over the full bigraded ring.  For `d₁ ≤ 2` this
/// truncation determines all of the torsion; for larger `d₁` the full module
/// has additional generators at lower levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreePrediction {
    /// Generator bidegrees at levels `d₁ − 1` and the corner levels above.
    pub generators: BidegreeMultiset,
    /// Total degree of the parametrization (sum of the column degrees).
    pub d: usize,
}

impl DegreePrediction {
    /// The full multiset including the implicit equation at `(0, d/r)`,
    /// where `r` is the degree of the parametrization map.
    ///
    /// Intended for `d₁ ≥ 2`: when `d₁ = 1` the table itself already contains
    /// an entry at `(0, d)`, which *is* the implicit equation, so adding it
    /// again would double-count.
    pub fn with_implicit(&self, r: usize) -> Result<BidegreeMultiset> {
        if r == 0 || !self.d.is_multiple_of(r) {
            return Err(Error::BadInput(format!(
                "parametrization degree {r} must divide {}",
                self.d
            )));
        }
        let mut full = self.generators.clone();
        full.add(0, self.d / r, 1);
        Ok(full)
    }
}

/// The generator-degree table for distinct column degrees with a generalized
/// zero in the first column: writing `d = q·d₁ + r` with `0 ≤ r < d₁`, the
/// torsion needs `r` generators at `(d₁−1, q+1)`, `d₁−r` at `(d₁−1, q)`, and
/// one at each corner `(λ d₁ + r, q − λ)` for `1 ≤ λ ≤ q − 2`, plus the
/// implicit equation.
pub fn degree_table(hb: &HBMatrix) -> Result<DegreePrediction> {
    let (d1, d2, d) = (hb.d1(), hb.d2(), hb.d());
    if d1 == d2 {
        return Err(Error::OutOfScope(
            "the generator-degree table requires distinct column degrees".into(),
        ));
    }
    if !hb.generalized_zero_col1() {
        return Err(Error::OutOfScope(
            "the generator-degree table requires a generalized zero in the first column".into(),
        ));
    }
    let (q, r) = (d / d1, d % d1);
    let mut generators = BidegreeMultiset::new();
    generators.add(d1 - 1, q + 1, r);
    generators.add(d1 - 1, q, d1 - r);
    for lam in 1..=q.saturating_sub(2) {
        generators.add(lam * d1 + r, q - lam, 1);
    }
    Ok(DegreePrediction { generators, d })
}

/// Degree of the parametrization map, read off as `d` divided by the least
/// T-degree in which a pure-T equation of the ideal appears.
pub fn parametrization_degree(hb: &HBMatrix) -> usize {
    let d = hb.d();
    let mut oracle = Oracle::new(hb.clone());
    for j in 1..=d {
        if oracle.j_dim(0, j) > 0 {
            assert_eq!(d % j, 0, "implicit degree must divide {d}");
            return d / j;
        }
    }
    unreachable!("a pure-T equation exists in degree at most {d}")
}

/// Classification data for equal column degrees, keyed by the pair
/// `(μ₁, μ₂)` = (dimension of the span of the six matrix entries, dimension
/// of the span of the 2×2 coefficient minors).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedClass {
    pub mu_entries: usize,
    pub mu_minors: usize,
    /// Configuration label for the pencil of the two columns.
    pub label: &'static str,
    /// Twist → count for the minimal generators of the level-`(d₁−2)`
    /// torsion as a T-polynomial module.
    pub generator_twists: BTreeMap<usize, usize>,
    /// Twist → count for its first syzygies (empty when free).
    pub syzygy_twists: BTreeMap<usize, usize>,
}

impl BalancedClass {
    /// Whether the level-`(d₁−2)` torsion is a free module (exactly the
    /// classes with `μ₂ ≤ 4`).
    pub fn is_free(&self) -> bool {
        self.syzygy_twists.is_empty()
    }

    /// Hilbert function of the level-`(d₁−2)` torsion computed from the
    /// resolution data.
    pub fn hilbert(&self, j: usize) -> usize {
        let count = |table: &BTreeMap<usize, usize>| -> usize {
            table
                .iter()
                .map(|(t, n)| if j >= *t { n * Strand::t_dim(j - t) } else { 0 })
                .sum()
        };
        count(&self.generator_twists) - count(&self.syzygy_twists)
    }

    /// Birationality criterion for prime common column degree: the
    /// parametrization is birational exactly when `μ₁ ≥ 3`.
    pub fn birational_if_prime_degree(&self) -> bool {
        self.mu_entries >= 3
    }
}

fn twist_table(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs
        .iter()
        .filter(|(_, n)| *n > 0)
        .map(|&(t, n)| (t, n))
        .collect()
}

/// Classifies a matrix with equal column degrees by the invariant pair
/// `(μ₁, μ₂)` and returns the resolution data of its level-`(d₁−2)`
/// torsion.
pub fn balanced_class(hb: &HBMatrix) -> Result<BalancedClass> {
    let (d1, d2) = (hb.d1(), hb.d2());
    if d1 != d2 {
        return Err(Error::OutOfScope(
            "the balanced classification requires equal column degrees".into(),
        ));
    }
    let mu1 = hb.mu_entries();
    let mu2 = hb.mu_c_minors();
    type ClassRow = (&'static str, Vec<(usize, usize)>, Vec<(usize, usize)>);
    let (label, gens, syz): ClassRow =
        match (mu1, mu2) {
            (6, 6) => ("(empty,mu6)", vec![(2, d1 - 5), (3, 6)], vec![(4, 2)]),
            (5, 6) => ("(empty,mu5)", vec![(2, d1 - 4), (3, 3), (4, 1)], vec![(5, 1)]),
            (5, 5) => ("(c,mu5)", vec![(2, d1 - 4), (3, 4)], vec![(4, 1)]),
            (4, 6) => ("(empty,mu4)", vec![(2, d1 - 3), (4, 4)], vec![(5, 2)]),
            (4, 5) => ("(c,mu4)", vec![(2, d1 - 3), (3, 1), (4, 2)], vec![(5, 1)]),
            (4, 4) => ("(c,c)/(c:c)", vec![(2, d1 - 3), (3, 2)], vec![]),
            (3, 3) => ("(c,c,c)/(c:c,c)/(c:c:c)", vec![(2, d1 - 2), (4, 1)], vec![]),
            (2, 1) => ("mu2", vec![(2, d1 - 1)], vec![]),
            other => {
                return Err(Error::Internal(format!(
                    "entry/minor span dimensions {other:?} match no balanced class"
                )))
            }
        };
    Ok(BalancedClass {
        mu_entries: mu1,
        mu_minors: mu2,
        label,
        generator_twists: twist_table(&gens),
        syzygy_twists: twist_table(&syz),
    })
}

/// Full prediction for a birational degree-six parametrization: equation
/// bidegrees of the defining ideal beyond the two column relations, and the
/// multiplicity profile of the singular points of the curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SexticReport {
    pub col_degrees: (usize, usize),
    pub generalized_zero: bool,
    /// Dimension of the span of the 2×2 coefficient minors; only defined
    /// for equal column degrees.
    pub mu_minors: Option<usize>,
    /// Which of the seven classification rows applies.
    pub row: &'static str,
    /// Bidegrees of the defining equations other than the two column
    /// relations; includes the implicit equation at `(0, 6)`.
    pub equations: BidegreeMultiset,
    /// Multiplicity profile of the singular points: `(multiplicity, count)`,
    /// sorted by decreasing multiplicity.
    pub singularities: Vec<(usize, usize)>,
    /// `Σ count · m(m−1)/2` over the profile; always 10 for a rational
    /// sextic.
    pub noether_sum: usize,
}

/// Classifies a birational degree-six parametrization into one of the seven
/// rows of the sextic table.  Errors when the total degree is not six or the
/// parametrization is not birational onto its image.
pub fn sextic_classify(hb: &HBMatrix) -> Result<SexticReport> {
    let (d1, d2, d) = (hb.d1(), hb.d2(), hb.d());
    if d != 6 {
        return Err(Error::OutOfScope(format!(
            "the sextic table requires total degree 6, got {d}"
        )));
    }
    let r = parametrization_degree(hb);
    if r != 1 {
        return Err(Error::OutOfScope(format!(
            "the sextic table requires a birational parametrization; this one has degree {r}"
        )));
    }
    let gz = hb.generalized_zero_col1();
    let mu2 = if d1 == d2 { Some(hb.mu_c_minors()) } else { None };
    type SexticRow = (&'static str, Vec<(usize, usize, usize)>, Vec<(usize, usize)>);
    let (row, eqs, sing): SexticRow =
        match (d1, d2) {
            (1, 5) => (
                "(1,5)",
                vec![(1, 5, 1), (2, 4, 1), (3, 3, 1), (4, 2, 1)],
                vec![(5, 1)],
            ),
            (2, 4) if gz => ("(2,4) gz", vec![(1, 3, 2), (2, 2, 1)], vec![(4, 1), (2, 4)]),
            // In the no-generalized-zero case the three column-1 coefficient
            // forms are linearly independent, so the torsion vanishes in
            // bidegree (2,2); both elements of the rank-two free level at
            // x,y-degree 3 are then forced to be minimal generators, giving
            // multiplicity 2 at (3,2).
            (2, 4) => (
                "(2,4) no-gz",
                vec![(1, 4, 4), (2, 3, 3), (3, 2, 2)],
                vec![(2, 10)],
            ),
            (3, 3) => match mu2.unwrap() {
                6 => ("(3,3) mu2=6", vec![(1, 4, 4), (2, 2, 3)], vec![(2, 10)]),
                5 => (
                    "(3,3) mu2=5",
                    vec![(1, 3, 1), (1, 4, 2), (2, 2, 3)],
                    vec![(3, 1), (2, 7)],
                ),
                4 => (
                    "(3,3) mu2=4",
                    vec![(1, 3, 2), (2, 2, 3)],
                    vec![(3, 2), (2, 4)],
                ),
                3 => (
                    "(3,3) mu2=3",
                    vec![(1, 2, 1), (1, 4, 1), (2, 2, 1)],
                    vec![(3, 3), (2, 1)],
                ),
                other => {
                    return Err(Error::Internal(format!(
                        "minor span dimension {other} is impossible for a birational balanced sextic"
                    )))
                }
            },
            other => {
                return Err(Error::Internal(format!(
                    "column degrees {other:?} cannot sum to six"
                )))
            }
        };
    let mut equations = BidegreeMultiset::from_pairs(&eqs);
    equations.add(0, 6, 1);
    let noether_sum = sing.iter().map(|&(m, n)| n * m * (m - 1) / 2).sum();
    Ok(SexticReport {
        col_degrees: (d1, d2),
        generalized_zero: gz,
        mu_minors: mu2,
        row,
        equations,
        singularities: sing,
        noether_sum,
    })
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

    fn one_five() -> HBMatrix {
        // Columns [y, x, 0] and [0, y^5, x^5]: degrees (1, 5).
        hb_from_coeff_lists(
            P,
            &[
                [&[1, 0], &[0, 0, 0, 0, 0, 0]],
                [&[0, 1], &[1, 0, 0, 0, 0, 0]],
                [&[0, 0], &[0, 0, 0, 0, 0, 1]],
            ],
        )
        .unwrap()
    }

    fn no_gz_sextic() -> HBMatrix {
        // Columns [y^2, xy, x^2] and [x^4, 0, y^4]: quadratic first column
        // without a generalized zero.
        hb_from_coeff_lists(
            P,
            &[
                [&[1, 0, 0], &[0, 0, 0, 0, 1]],
                [&[0, 1, 0], &[0, 0, 0, 0, 0]],
                [&[0, 0, 1], &[1, 0, 0, 0, 0]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn chart_ranks_match_oracle_estimates() {
        for hb in [ex1(), ex2()] {
            let mut o = Oracle::new(hb.clone());
            for i in 0..=hb.delta() {
                assert_eq!(chart_rank(&hb, i), o.rank_estimate(i, 8), "level {i}");
            }
            assert_eq!(chart_rank(&hb, hb.delta() + 1), 0);
        }
    }

    #[test]
    fn chart_kernels_match_oracle_strands() {
        for hb in [ex1(), ex2()] {
            let mut o = Oracle::new(hb.clone());
            for i in 0..=hb.delta() {
                let m = chart_kernel_matrix(&hb, i).unwrap();
                for j in 2..=5 {
                    assert_eq!(
                        o.a_dim(i, j),
                        linear_kernel_dim(&m, j - 2),
                        "level {i} T-degree {j}"
                    );
                }
            }
            assert!(chart_kernel_matrix(&hb, hb.delta() + 1).is_err());
        }
    }

    #[test]
    fn twist_predictions_on_references() {
        let hb = ex1();
        assert_eq!(predicted_twists(&hb, 1).unwrap(), vec![3, 3]);
        assert_eq!(predicted_twists(&hb, 2).unwrap(), vec![2, 3]);
        assert_eq!(predicted_twists(&hb, 3).unwrap(), vec![2, 2]);
        assert_eq!(predicted_twists(&hb, 4).unwrap(), vec![2]);
        assert!(predicted_twists(&hb, 0).is_err());
        assert!(predicted_twists(&hb, 5).is_err());
        let hb = ex2();
        assert_eq!(predicted_twists(&hb, 2).unwrap(), vec![2, 2, 2]);
        assert_eq!(predicted_twists(&hb, 3).unwrap(), vec![2, 2]);
        assert_eq!(predicted_twists(&hb, 4).unwrap(), vec![2]);
        assert!(predicted_twists(&hb, 1).is_err());
    }

    #[test]
    fn degree_table_on_reference() {
        let pred = degree_table(&ex1()).unwrap();
        assert_eq!(
            pred.generators,
            BidegreeMultiset::from_pairs(&[(1, 3, 2), (2, 2, 1)])
        );
        assert_eq!(
            pred.with_implicit(1).unwrap(),
            BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 3, 2), (2, 2, 1)])
        );
        assert!(pred.with_implicit(4).is_err());
        assert!(degree_table(&ex2()).is_err());
        let no_gz = no_gz_sextic();
        assert!(!no_gz.generalized_zero_col1());
        assert!(degree_table(&no_gz).is_err());
    }

    #[test]
    fn degree_table_gives_the_truncated_generators() {
        use crate::oracle::GenWhich;
        // For column degree 2 the truncation at level 1 is the table itself.
        let hb = ex1();
        let mut o = Oracle::new(hb.clone());
        let table = degree_table(&hb).unwrap();
        assert_eq!(
            table.generators,
            o.minimal_generators(GenWhich::AAsBFrom(1), hb.delta(), 6)
        );
        // For column degree 1 the truncation base is level 0, so the table
        // describes the whole torsion; its entry at (0, d) is the implicit
        // equation itself.
        let hb = one_five();
        let mut o = Oracle::new(hb.clone());
        let table = degree_table(&hb).unwrap();
        assert_eq!(
            table.generators,
            BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 5, 1), (2, 4, 1), (3, 3, 1), (4, 2, 1)])
        );
        assert_eq!(
            table.generators,
            o.minimal_generators(GenWhich::AAsB, hb.delta(), 6)
        );
        // Column degrees (3, 5): the table sees only levels >= 2 and differs
        // from the generator list of the full torsion module.
        let hb = hb_from_coeff_lists(
            P,
            &[
                [&[1, 0, 0, 0], &[0, 0, 0, 0, 0, 0]],
                [&[0, 0, 0, 1], &[1, 0, 0, 0, 0, 0]],
                [&[0, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
            ],
        )
        .unwrap();
        let mut o = Oracle::new(hb.clone());
        let table = degree_table(&hb).unwrap();
        assert_eq!(
            table.generators,
            BidegreeMultiset::from_pairs(&[(2, 2, 1), (2, 3, 2)])
        );
        assert_eq!(
            table.generators,
            o.minimal_generators(GenWhich::AAsBFrom(2), hb.delta(), 8)
        );
        assert_ne!(
            table.generators,
            o.minimal_generators(GenWhich::AAsB, hb.delta(), 8)
        );
    }

    #[test]
    fn parametrization_degrees() {
        assert_eq!(parametrization_degree(&ex1()), 1);
        assert_eq!(parametrization_degree(&ex2()), 3);
        assert_eq!(parametrization_degree(&one_five()), 1);
    }

    #[test]
    fn balanced_classification_of_reference() {
        let class = balanced_class(&ex2()).unwrap();
        assert_eq!((class.mu_entries, class.mu_minors), (2, 1));
        assert_eq!(class.label, "mu2");
        assert!(class.is_free());
        assert!(!class.birational_if_prime_degree());
        assert_eq!(class.generator_twists, twist_table(&[(2, 2)]));
        let mut o = Oracle::new(ex2());
        for j in 0..=6 {
            assert_eq!(class.hilbert(j), o.a_dim(1, j), "T-degree {j}");
        }
        assert!(balanced_class(&ex1()).is_err());
    }

    #[test]
    fn sextic_rows_on_references() {
        let report = sextic_classify(&ex1()).unwrap();
        assert_eq!(report.row, "(2,4) gz");
        assert_eq!(
            report.equations,
            BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 3, 2), (2, 2, 1)])
        );
        assert_eq!(report.singularities, vec![(4, 1), (2, 4)]);
        assert_eq!(report.noether_sum, 10);

        let report = sextic_classify(&one_five()).unwrap();
        assert_eq!(report.row, "(1,5)");
        assert_eq!(
            report.equations,
            BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 5, 1), (2, 4, 1), (3, 3, 1), (4, 2, 1)])
        );
        assert_eq!(report.noether_sum, 10);

        // Non-birational balanced sextic is rejected.
        assert!(matches!(
            sextic_classify(&ex2()),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn sextic_no_gz_row_matches_oracle() {
        use crate::oracle::GenWhich;
        let hb = no_gz_sextic();
        let report = sextic_classify(&hb).unwrap();
        assert_eq!(report.row, "(2,4) no-gz");
        assert_eq!(
            report.equations,
            BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 4, 4), (2, 3, 3), (3, 2, 2)])
        );
        assert_eq!(report.singularities, vec![(2, 10)]);
        assert_eq!(report.noether_sum, 10);
        // The listed equations are the minimal generators of the full
        // defining ideal minus the two column relations.
        let mut o = Oracle::new(hb.clone());
        let mut actual = o.minimal_generators(GenWhich::JAsB, hb.d(), hb.d());
        assert!(actual.remove(hb.d1(), 1, 1));
        assert!(actual.remove(hb.d2(), 1, 1));
        assert_eq!(actual, report.equations);
    }

    #[test]
    fn graded_kernels_of_canonical_stencils_are_free() {
        use crate::hb::Col1Shape;
        use crate::morley::{stencil_matrix, syzygy_catalog};
        for ell in 3..=8 {
            for shape in [Col1Shape::X2Y2Xy, Col1Shape::Y2X2] {
                let m = stencil_matrix(P, ell, shape);
                let cat = syzygy_catalog(P, ell, shape).unwrap();
                for t in 0..=4usize {
                    let want: usize = cat
                        .twists
                        .iter()
                        .map(|&tw| {
                            if t + 1 >= tw {
                                Strand::t_dim(t + 1 - tw)
                            } else {
                                0
                            }
                        })
                        .sum();
                    assert_eq!(
                        linear_kernel_dim(&m, t),
                        want,
                        "{shape} stencil {ell} degree {t}"
                    );
                }
            }
        }
    }
}
