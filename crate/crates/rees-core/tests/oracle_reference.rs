//! Frozen brute-force outputs for the two reference matrices. These values
//! were computed once from the oracle's first-principles definitions and are
//! pinned here so any regression in the strand machinery is caught directly.

use rees_core::hb::hb_from_coeff_lists;
use rees_core::hb::HBMatrix;
use rees_core::oracle::{BidegreeMultiset, GenWhich, Oracle};

const P: u64 = 101;

fn ex1() -> HBMatrix {
    // Columns [x^2 + y^2, x y, 0] and [0, y^4, x^4 + y^4]: d1 = 2, d2 = 4.
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
    // Block matrix [[y^3, 0], [x^3, y^3], [0, x^3]]: d1 = d2 = 3.
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

#[test]
fn ex1_strand_dimensions() {
    let mut o = Oracle::new(ex1());
    let table: [[usize; 9]; 6] = [
        [0, 0, 0, 0, 0, 0, 1, 3, 6],
        [0, 0, 0, 2, 6, 12, 20, 30, 42],
        [0, 0, 1, 4, 9, 16, 25, 36, 49],
        [0, 0, 2, 6, 12, 20, 30, 42, 56],
        [0, 0, 1, 3, 6, 10, 15, 21, 28],
        [0, 0, 0, 0, 0, 0, 0, 0, 0],
    ];
    for (i, row) in table.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            assert_eq!(o.a_dim(i, j), want, "a_dim({i},{j})");
        }
    }
    for j in 1..=5 {
        assert_eq!(o.j_dim(0, j), 0);
    }
    assert_eq!(o.j_dim(0, 6), 1);
    assert_eq!(o.j_dim(0, 7), 3);
}

#[test]
fn ex1_generator_multisets() {
    let mut o = Oracle::new(ex1());
    assert_eq!(
        o.minimal_generators(GenWhich::AAsB, 5, 8),
        BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 3, 2), (2, 2, 1)])
    );
    assert_eq!(
        o.minimal_generators(GenWhich::JAsB, 6, 6),
        BidegreeMultiset::from_pairs(&[(0, 6, 1), (1, 3, 2), (2, 1, 1), (2, 2, 1), (4, 1, 1)])
    );
    let per_i: [&[(usize, usize, usize)]; 5] = [
        &[(0, 6, 1)],
        &[(1, 3, 2)],
        &[(2, 2, 1), (2, 3, 1)],
        &[(3, 2, 2)],
        &[(4, 2, 1)],
    ];
    for (i, want) in per_i.iter().enumerate() {
        assert_eq!(
            o.minimal_generators(GenWhich::AAsSPerI(i), 0, 8),
            BidegreeMultiset::from_pairs(want),
            "S-generators at i = {i}"
        );
    }
    for (i, want) in [1usize, 2, 2, 2, 1].iter().enumerate() {
        assert_eq!(o.rank_estimate(i, 8), *want, "rank at i = {i}");
    }
}

#[test]
fn ex1_is_birational() {
    let mut o = Oracle::new(ex1());
    let eq = o.resultant().unwrap();
    assert_eq!(eq.r, 1);
    assert_eq!(eq.f.degree(), 6);
}

#[test]
fn ex2_strand_dimensions_and_generators() {
    let mut o = Oracle::new(ex2());
    let table: [[usize; 7]; 6] = [
        [0, 0, 1, 3, 6, 10, 15],
        [0, 0, 2, 6, 12, 20, 30],
        [0, 0, 3, 9, 18, 30, 45],
        [0, 0, 2, 6, 12, 20, 30],
        [0, 0, 1, 3, 6, 10, 15],
        [0, 0, 0, 0, 0, 0, 0],
    ];
    for (i, row) in table.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            assert_eq!(o.a_dim(i, j), want, "a_dim({i},{j})");
        }
    }
    assert_eq!(
        o.minimal_generators(GenWhich::AAsB, 5, 6),
        BidegreeMultiset::from_pairs(&[(0, 2, 1)])
    );
    assert_eq!(
        o.minimal_generators(GenWhich::JAsB, 6, 6),
        BidegreeMultiset::from_pairs(&[(0, 2, 1), (3, 1, 2)])
    );
    for (i, k) in [1usize, 2, 3, 2, 1].iter().enumerate() {
        assert_eq!(
            o.minimal_generators(GenWhich::AAsSPerI(i), 0, 6),
            BidegreeMultiset::from_pairs(&[(i, 2, *k)]),
            "S-generators at i = {i}"
        );
    }
    assert_eq!(o.hb().mu_entries(), 2);
    assert_eq!(o.hb().mu_c_minors(), 1);
}
