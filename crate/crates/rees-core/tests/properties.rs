//! Randomized invariants: every property here must hold for *all* valid
//! presentation matrices, so each test draws fresh random matrices (seeded
//! deterministic sampling) and checks the structural claims the closed-form
//! constructions rely on.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rees_core::fixtures::random_hb;
use rees_core::hb::Col1Shape;
use rees_core::linkage::delta_minors;
use rees_core::morley::{morley_delta_check, q_forms, q_forms_d1_2, stencil_matrix, syzygy_catalog};
use rees_core::polyring::Strand;
use rees_core::structure::{
    balanced_class, chart_rank, linear_kernel_dim, predicted_twists, sextic_classify,
};
use rees_core::{BidegreeMultiset, BiForm, GenWhich, HBMatrix, InputSpec, Oracle, RowSpace};

const P: u64 = 101;

/// Random valid matrix with 1 <= d1 <= d2 <= 4, d1 <= 3 (total degree <= 7).
fn arb_hb() -> impl Strategy<Value = HBMatrix> {
    (1usize..=3, 1usize..=4, any::<u64>())
        .prop_map(|(a, b, seed)| {
            let (d1, d2) = if a <= b { (a, b) } else { (b, a) };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_hb(P, d1, d2, &mut rng, 10_000).expect("sampling must succeed")
        })
}

/// Random valid matrix with a quadratic first column.
fn arb_hb_d1_2() -> impl Strategy<Value = HBMatrix> {
    (3usize..=5, any::<u64>()).prop_map(|(d2, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_hb(P, 2, d2, &mut rng, 10_000).expect("sampling must succeed")
    })
}

fn binom2(j: usize) -> usize {
    j * j.saturating_sub(1) / 2
}

fn dim_b(i: i64, j: i64) -> i64 {
    if i < 0 || j < 0 {
        0
    } else {
        (i + 1) * (j + 1) * (j + 2) / 2
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The signed maximal minors compose with the matrix columns to zero:
    /// they are syzygies of the presentation.
    #[test]
    fn minors_satisfy_presentation_relation(hb in arb_hb()) {
        let minors = hb.signed_minors();
        for c in 0..2 {
            let mut acc = BiForm::zero(hb.d() + hb.col_degree(c), P);
            for (r, m) in minors.iter().enumerate() {
                acc = acc.add(&m.mul(hb.entry(r, c)));
            }
            prop_assert!(acc.is_zero(), "column {c} does not annihilate");
        }
    }

    /// The minors have total degree d and no common factor (height two).
    #[test]
    fn minors_have_degree_d_and_no_common_factor(hb in arb_hb()) {
        let minors = hb.signed_minors();
        for m in minors {
            prop_assert_eq!(m.degree(), hb.d());
        }
        let g = rees_core::polyring::gcd_biforms(minors);
        prop_assert_eq!(g.degree(), 0, "minors share a factor");
    }

    /// The symmetric-algebra strand dimensions obey the inclusion-exclusion
    /// count of the two-relation presentation.
    #[test]
    fn sym_dims_match_koszul_count(hb in arb_hb()) {
        let (d1, d2, d) = (hb.d1() as i64, hb.d2() as i64, hb.d() as i64);
        let mut o = Oracle::new(hb);
        for i in 0..=6i64 {
            for j in 0..=4i64 {
                let expect = dim_b(i, j) - dim_b(i - d1, j - 1) - dim_b(i - d2, j - 1)
                    + dim_b(i - d, j - 2);
                prop_assert_eq!(o.sym_dim(i as usize, j as usize) as i64, expect);
            }
        }
    }

    /// Torsion vanishes above level delta = d - 2, and the top level has the
    /// binomial Hilbert function.
    #[test]
    fn torsion_vanishes_above_delta_and_top_is_binomial(hb in arb_hb()) {
        let delta = hb.delta();
        let mut o = Oracle::new(hb);
        for extra in 1..=2usize {
            for j in 0..=4usize {
                prop_assert_eq!(o.a_dim(delta + extra, j), 0);
            }
        }
        for j in 0..=4usize {
            prop_assert_eq!(o.a_dim(delta, j), binom2(j));
        }
    }

    /// The closed-form level ranks agree with second differences of the
    /// brute-force Hilbert function on every level.
    #[test]
    fn chart_ranks_match_second_differences(hb in arb_hb()) {
        let delta = hb.delta();
        let mut o = Oracle::new(hb.clone());
        let jmax = (hb.d() + 2).max(6);
        for i in 0..=delta + 1 {
            prop_assert_eq!(chart_rank(&hb, i), o.rank_estimate(i, jmax), "level {}", i);
        }
    }

    /// On every top-range level the elimination minors are defining
    /// equations, are torsion, and span the full T-degree-2 strand.
    #[test]
    fn elimination_minors_span_top_strands(hb in arb_hb()) {
        let (d, delta) = (hb.d(), hb.delta());
        let mut o = Oracle::new(hb.clone());
        for i in hb.d2() - 1..=delta {
            let minors = delta_minors(&hb, i).unwrap();
            prop_assert_eq!(minors.len(), d - 1 - i);
            let mut span = RowSpace::new(o.sym_dim(i, 2), P);
            for m in &minors {
                prop_assert!(o.j_contains(m));
                prop_assert!(o.a_contains(m));
                span.add(o.sym_coords(m));
            }
            prop_assert_eq!(span.rank(), d - 1 - i);
            prop_assert_eq!(o.a_dim(i, 2), d - 1 - i);
        }
    }

    /// Every torsion element is a defining equation: it dies under
    /// substituting the minors for the T variables.
    #[test]
    fn torsion_lies_in_the_defining_ideal(hb in arb_hb()) {
        let delta = hb.delta();
        let mut o = Oracle::new(hb);
        for i in 0..=delta {
            for j in 0..=3usize {
                for f in o.a_strand(i, j).clone() {
                    prop_assert!(o.j_contains(&f), "strand ({},{})", i, j);
                }
            }
        }
    }

    /// Torsion is an ideal-stable submodule: multiplying a torsion element
    /// by x or y lands in torsion again (or in zero past the top level).
    #[test]
    fn torsion_closed_under_xy_multiplication(hb in arb_hb()) {
        let delta = hb.delta();
        let mut o = Oracle::new(hb);
        for i in 0..delta {
            for j in 0..=3usize {
                for f in o.a_strand(i, j).clone() {
                    prop_assert!(o.a_contains(&f.mul_xy(1, 0)));
                    prop_assert!(o.a_contains(&f.mul_xy(0, 1)));
                }
            }
        }
    }

    /// Wherever the closed-form twist prediction applies it matches the
    /// brute-force minimal T-module generators and the level is free.
    #[test]
    fn predicted_twists_match_where_defined(hb in arb_hb()) {
        let delta = hb.delta();
        let mut o = Oracle::new(hb.clone());
        for i in 0..=delta {
            let Ok(twists) = predicted_twists(&hb, i) else { continue };
            let mut expected = BidegreeMultiset::new();
            for &t in &twists {
                expected.add(i, t, 1);
            }
            let actual = o.minimal_generators(GenWhich::AAsSPerI(i), i, 5);
            prop_assert_eq!(actual, expected, "level {}", i);
            prop_assert!(o.free_hilbert_match(i, &twists, 5), "level {}", i);
        }
    }

    /// A generator listed by the truncated scan is never reported below the
    /// base, and truncating at zero is the full scan.
    #[test]
    fn truncated_generator_scans_are_consistent(hb in arb_hb()) {
        let delta = hb.delta();
        let jmax = hb.d();
        let mut o = Oracle::new(hb.clone());
        let full = o.minimal_generators(GenWhich::AAsB, delta, jmax);
        let from0 = o.minimal_generators(GenWhich::AAsBFrom(0), delta, jmax);
        prop_assert_eq!(&full, &from0);
        let base = hb.d1().saturating_sub(1);
        let truncated = o.minimal_generators(GenWhich::AAsBFrom(base), delta, jmax);
        for ((i, _), n) in truncated.iter() {
            prop_assert!(i >= base && n > 0);
        }
        // Above the base, full-module generators are a subset: anything
        // minimal over the whole module stays minimal for the submodule.
        for ((i, j), n) in full.iter() {
            if i > base {
                let t: usize = truncated
                    .iter()
                    .filter(|&((a, b), _)| a == i && b == j)
                    .map(|(_, m)| m)
                    .sum();
                prop_assert!(t >= n, "lost generators at ({},{})", i, j);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The level-form span identity holds for every valid matrix.
    #[test]
    fn level_form_identity_on_random_matrices(hb in arb_hb()) {
        prop_assert!(morley_delta_check(&hb).unwrap());
    }

    /// For quadratic first columns the specialized level forms agree with
    /// the general windowed construction entry by entry.
    #[test]
    fn specialized_level_forms_agree(hb in arb_hb_d1_2()) {
        for i in 1..=hb.d2() - 1 {
            prop_assert_eq!(q_forms(&hb, i), q_forms_d1_2(&hb, i).unwrap(), "level {}", i);
        }
    }

    /// First-column normalization either fails honestly or produces a
    /// canonical column by an invertible transform that preserves the
    /// torsion generator degrees.
    #[test]
    fn canonicalization_normalizes_the_first_column(hb in arb_hb_d1_2()) {
        match hb.canonicalize_col1() {
            Err(_) => {
                // No generalized zero, or the two degenerate members of the
                // pencil live in a quadratic extension; nothing to check.
            }
            Ok(can) => {
                prop_assert_eq!(can.hb.col1_canonical_shape(), Some(can.shape));
                prop_assert!(can.hb.generalized_zero_col1());
                prop_assert_eq!(can.hb.d1(), hb.d1());
                prop_assert_eq!(can.hb.d2(), hb.d2());
                // The stored transform reproduces the canonical matrix.
                let again = can.transform.apply(&hb).unwrap();
                for r in 0..3 {
                    for c in 0..2 {
                        prop_assert_eq!(again.entry(r, c), can.hb.entry(r, c));
                    }
                }
                // Row operations and a linear change of x, y do not move
                // bigraded torsion dimensions.
                let mut before = Oracle::new(hb.clone());
                let mut after = Oracle::new(can.hb.clone());
                for i in 0..=hb.delta() {
                    for j in 0..=4usize {
                        prop_assert_eq!(before.a_dim(i, j), after.a_dim(i, j));
                    }
                }
            }
        }
    }

    /// Balanced matrices classify, and the classified resolution predicts
    /// the exact Hilbert function of the level d1-2 strand.
    #[test]
    fn balanced_class_hilbert_matches(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hb = random_hb(P, 3, 3, &mut rng, 10_000).unwrap();
        let class = balanced_class(&hb).unwrap();
        prop_assert!(class.mu_entries <= 4 && class.mu_minors <= 6);
        let mut o = Oracle::new(hb);
        for j in 0..=5usize {
            prop_assert_eq!(class.hilbert(j), o.a_dim(1, j), "T-degree {}", j);
        }
    }

    /// Whenever a random sextic parametrization classifies, its equations
    /// include the implicit sextic and the double points account for the
    /// full genus drop.
    #[test]
    fn sextic_classification_is_consistent(which in 0usize..3, seed in any::<u64>()) {
        let (d1, d2) = [(1, 5), (2, 4), (3, 3)][which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hb = random_hb(P, d1, d2, &mut rng, 10_000).unwrap();
        match sextic_classify(&hb) {
            Err(_) => {} // non-birational or otherwise out of scope
            Ok(report) => {
                prop_assert_eq!(report.noether_sum, 10);
                let genus: usize = report
                    .singularities
                    .iter()
                    .map(|&(m, n)| n * binom2(m))
                    .sum();
                prop_assert_eq!(genus, 10);
                let has_implicit = report
                    .equations
                    .iter()
                    .any(|((i, j), n)| i == 0 && j == 6 && n == 1);
                prop_assert!(has_implicit, "missing the implicit sextic");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The closed-form syzygy catalog annihilates its stencil and generates
    /// the full graded kernel over any odd prime field.
    #[test]
    fn catalog_annihilates_all_stencils(
        ell in 3usize..=12,
        even_shape in any::<bool>(),
        which_p in 0usize..4,
    ) {
        let p = [3u64, 5, 7, 101][which_p];
        let shape = if even_shape { Col1Shape::X2Y2Xy } else { Col1Shape::Y2X2 };
        let stencil = stencil_matrix(p, ell, shape);
        let cat = syzygy_catalog(p, ell, shape).unwrap();
        prop_assert_eq!(cat.twists[0] + cat.twists[1], ell);
        for col in &cat.columns {
            for entry in stencil.mul_vec(col) {
                prop_assert!(entry.is_zero());
            }
        }
        for t in 0..=3usize {
            let want: usize = cat
                .twists
                .iter()
                .map(|&tw| if t + 1 >= tw { Strand::t_dim(t + 1 - tw) } else { 0 })
                .sum();
            prop_assert_eq!(linear_kernel_dim(&stencil, t), want);
        }
    }

    /// The JSON input schema round-trips every valid matrix exactly.
    #[test]
    fn input_schema_roundtrips(hb in arb_hb()) {
        let spec = InputSpec::from_hb(&hb);
        let text = serde_json::to_string(&spec).unwrap();
        let back: InputSpec = serde_json::from_str(&text).unwrap();
        let hb2 = back.to_hb().unwrap();
        for r in 0..3 {
            for c in 0..2 {
                prop_assert_eq!(hb.entry(r, c), hb2.entry(r, c));
            }
        }
    }
}
