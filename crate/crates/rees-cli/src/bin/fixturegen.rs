//! Regenerates the fixture manifest consumed by the test suite.
//!
//! The manifest mixes hand-written reference matrices (canonical first
//! columns, generalized-zero examples, the degree-six rows) with seeded
//! random searches for one representative of every balanced invariant class
//! at column degrees three and four.  Every candidate is re-validated here
//! before it is recorded, and every recorded entry carries the invariants the
//! brute-force machinery computed for it, so the committed file doubles as a
//! regression baseline.
//!
//! Usage: `fixturegen [OUT_PATH]` (default: `fixtures/manifest.json` at the
//! workspace root).

use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rees_core::fixtures::{
    compute_pins, random_hb, random_hb_in_spans, random_hb_with_rank_drops,
    random_hb_with_rank_drops_in_span, random_subspace,
};
use rees_core::hb::hb_from_coeff_lists;
use rees_core::structure::parametrization_degree;
use rees_core::{Col1Shape, Fixture, FixtureManifest, HBMatrix, InputSpec};

const P: u64 = 101;

/// Outer attempt cap for each class search; each attempt may itself retry
/// matrix validation a bounded number of times.
const SEARCH_ROUNDS: usize = 2000;

fn lit(rows: [[&[i64]; 2]; 3]) -> HBMatrix {
    hb_from_coeff_lists(P, &rows).expect("literal fixture must validate")
}

/// Seeded search for an equal-degree matrix with the given invariant pair,
/// optionally insisting on a degree-one parametrization.
fn search_balanced(
    d1: usize,
    mu1: usize,
    mu2: usize,
    birational: bool,
    seed: u64,
) -> Result<HBMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one_point = [[2u64, 3, 7]];
    let two_points = [[2u64, 3, 7], [5, 1, 4]];
    let full_span = mu1 == d1 + 1;
    for _ in 0..SEARCH_ROUNDS {
        let cand = if full_span {
            match mu2 {
                6 => random_hb(P, d1, d1, &mut rng, 50),
                5 => random_hb_with_rank_drops(P, d1, &one_point, &mut rng, 50),
                4 => random_hb_with_rank_drops(P, d1, &two_points, &mut rng, 50),
                _ => bail!("no construction for a full entry span with mu2 = {mu2}"),
            }
        } else {
            let basis = random_subspace(P, d1, mu1, &mut rng);
            match mu2 {
                5 => random_hb_with_rank_drops_in_span(P, &basis, &one_point, &mut rng, 50),
                4 => random_hb_with_rank_drops_in_span(P, &basis, &two_points, &mut rng, 50),
                _ => random_hb_in_spans(&basis, &basis, &mut rng, 50),
            }
        };
        let Ok(hb) = cand else { continue };
        if hb.mu_entries() != mu1 || hb.mu_c_minors() != mu2 {
            continue;
        }
        if birational && parametrization_degree(&hb) != 1 {
            continue;
        }
        return Ok(hb);
    }
    bail!("class search ({d1}; {mu1}, {mu2}) exhausted {SEARCH_ROUNDS} rounds")
}

/// Seeded search for a column-degree (2, 4) matrix whose first column has a
/// three-dimensional entry span (no generalized zero) and whose
/// parametrization is birational.
fn search_sextic_nogz(seed: u64) -> Result<HBMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SEARCH_ROUNDS {
        let Ok(hb) = random_hb(P, 2, 4, &mut rng, 50) else {
            continue;
        };
        if hb.generalized_zero_col1() || parametrization_degree(&hb) != 1 {
            continue;
        }
        return Ok(hb);
    }
    bail!("no-generalized-zero sextic search exhausted {SEARCH_ROUNDS} rounds")
}

struct Builder {
    fixtures: Vec<Fixture>,
}

impl Builder {
    /// Computes pins, runs the per-fixture expectations, and records the
    /// entry.  Search code has already filtered candidates, so a failure
    /// here means a literal matrix was transcribed wrong.
    fn push(&mut self, name: &str, hb: HBMatrix, check: impl Fn(&Fixture) -> Result<()>) -> Result<()> {
        let t0 = Instant::now();
        let fixture = Fixture {
            name: name.to_string(),
            input: InputSpec::from_hb(&hb),
            pins: compute_pins(&hb),
        };
        check(&fixture).with_context(|| format!("fixture {name} failed its expectations"))?;
        eprintln!(
            "{name}: d = ({}, {}), shape = {:?}, gz = {}, r = {}, balanced = {:?}, torsion = {} [{:.2?}]",
            fixture.pins.d1,
            fixture.pins.d2,
            fixture.pins.col1_shape,
            fixture.pins.generalized_zero,
            fixture.pins.parametrization_degree,
            fixture.pins.balanced,
            fixture.pins.torsion_generators,
            t0.elapsed(),
        );
        self.fixtures.push(fixture);
        Ok(())
    }
}

fn expect_canonical(
    shape: Col1Shape,
    d2: usize,
) -> impl Fn(&Fixture) -> Result<()> {
    move |f| {
        ensure!(f.pins.d1 == 2 && f.pins.d2 == d2, "column degrees");
        ensure!(f.pins.col1_shape == Some(shape), "canonical shape");
        ensure!(f.pins.generalized_zero, "generalized zero");
        ensure!(f.pins.parametrization_degree == 1, "degree-one parametrization");
        Ok(())
    }
}

fn expect_balanced(mu1: usize, mu2: usize, birational: bool) -> impl Fn(&Fixture) -> Result<()> {
    move |f| {
        ensure!(f.pins.balanced == Some((mu1, mu2)), "invariant pair");
        if birational {
            ensure!(f.pins.parametrization_degree == 1, "degree-one parametrization");
        }
        Ok(())
    }
}

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/manifest.json").to_string()
    });
    let total = Instant::now();
    let mut b = Builder { fixtures: Vec::new() };

    // Canonical first-column fixtures at column degree two, both shapes,
    // second column degree three through five.
    b.push(
        "canonical-mixed-2-3",
        lit([
            [&[1, 0, 1], &[0, 0, 0, 0]],
            [&[0, 1, 0], &[1, 0, 0, 0]],
            [&[0, 0, 0], &[1, 0, 0, 1]],
        ]),
        expect_canonical(Col1Shape::X2Y2Xy, 3),
    )?;
    b.push(
        "canonical-split-2-3",
        lit([
            [&[1, 0, 0], &[0, 0, 0, 0]],
            [&[0, 0, 1], &[1, 0, 0, 0]],
            [&[0, 0, 0], &[0, 0, 0, 1]],
        ]),
        expect_canonical(Col1Shape::Y2X2, 3),
    )?;
    b.push(
        "canonical-mixed-2-4",
        lit([
            [&[1, 0, 1], &[0, 0, 0, 0, 0]],
            [&[0, 1, 0], &[1, 0, 0, 0, 0]],
            [&[0, 0, 0], &[1, 0, 0, 0, 1]],
        ]),
        expect_canonical(Col1Shape::X2Y2Xy, 4),
    )?;
    // The plain block matrix with second column [0, y^4, x^4] parametrizes a
    // double cover (every minor is even in x), so its last entry carries an
    // extra x y^3 term to break the symmetry and restore a degree-one
    // parametrization.
    b.push(
        "canonical-split-2-4",
        lit([
            [&[1, 0, 0], &[0, 0, 0, 0, 0]],
            [&[0, 0, 1], &[1, 0, 0, 0, 0]],
            [&[0, 0, 0], &[0, 1, 0, 0, 1]],
        ]),
        expect_canonical(Col1Shape::Y2X2, 4),
    )?;
    b.push(
        "canonical-mixed-2-5",
        lit([
            [&[1, 0, 1], &[0, 0, 0, 0, 0, 0]],
            [&[0, 1, 0], &[1, 0, 0, 0, 0, 0]],
            [&[0, 0, 0], &[1, 0, 0, 0, 0, 1]],
        ]),
        expect_canonical(Col1Shape::X2Y2Xy, 5),
    )?;
    b.push(
        "canonical-split-2-5",
        lit([
            [&[1, 0, 0], &[0, 0, 0, 0, 0, 0]],
            [&[0, 0, 1], &[1, 0, 0, 0, 0, 0]],
            [&[0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        ]),
        expect_canonical(Col1Shape::Y2X2, 5),
    )?;

    // The double-cover matrix itself, kept as an edge case: the canonical
    // first column and the generalized zero are intact, but the
    // parametrization has degree two, so the free predictions that assume a
    // degree-one parametrization must not be applied to it.
    b.push(
        "split-2-4-nonbirational",
        lit([
            [&[1, 0, 0], &[0, 0, 0, 0, 0]],
            [&[0, 0, 1], &[1, 0, 0, 0, 0]],
            [&[0, 0, 0], &[0, 0, 0, 0, 1]],
        ]),
        |f| {
            ensure!((f.pins.d1, f.pins.d2) == (2, 4), "column degrees");
            ensure!(f.pins.col1_shape == Some(Col1Shape::Y2X2), "canonical shape");
            ensure!(f.pins.parametrization_degree == 2, "degree-two parametrization");
            Ok(())
        },
    )?;

    // Generalized zero with column degrees (3, 5).
    b.push(
        "gz-3-5",
        lit([
            [&[1, 0, 0, 0], &[0, 0, 0, 0, 0, 0]],
            [&[0, 0, 0, 1], &[1, 0, 0, 0, 0, 0]],
            [&[0, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        ]),
        |f| {
            ensure!((f.pins.d1, f.pins.d2) == (3, 5), "column degrees");
            ensure!(f.pins.generalized_zero, "generalized zero");
            Ok(())
        },
    )?;

    // Degree-six rows: column degrees (1, 5) and the (2, 4) matrix without a
    // generalized zero.
    b.push(
        "sextic-1-5",
        lit([
            [&[1, 0], &[0, 0, 0, 0, 0, 0]],
            [&[0, 1], &[1, 0, 0, 0, 0, 0]],
            [&[0, 0], &[0, 0, 0, 0, 0, 1]],
        ]),
        |f| {
            ensure!((f.pins.d1, f.pins.d2) == (1, 5), "column degrees");
            ensure!(f.pins.parametrization_degree == 1, "degree-one parametrization");
            Ok(())
        },
    )?;
    let nogz = {
        let candidate = lit([
            [&[1, 0, 0], &[0, 0, 0, 0, 1]],
            [&[0, 1, 0], &[0, 0, 0, 0, 0]],
            [&[0, 0, 1], &[1, 0, 0, 0, 0]],
        ]);
        if !candidate.generalized_zero_col1() && parametrization_degree(&candidate) == 1 {
            candidate
        } else {
            search_sextic_nogz(0x2400)?
        }
    };
    b.push("sextic-2-4-nogz", nogz, |f| {
        ensure!((f.pins.d1, f.pins.d2) == (2, 4), "column degrees");
        ensure!(!f.pins.generalized_zero, "no generalized zero");
        ensure!(f.pins.parametrization_degree == 1, "degree-one parametrization");
        Ok(())
    })?;

    // Balanced classes at column degree three.  The block-shift matrix is
    // the canonical two-generated example; the others are found by seeded
    // search.  All classes with at least three independent entries also
    // serve as degree-six rows, so those insist on a birational
    // parametrization.
    b.push(
        "balanced-3-2-1",
        lit([
            [&[1, 0, 0, 0], &[0, 0, 0, 0]],
            [&[0, 0, 0, 1], &[1, 0, 0, 0]],
            [&[0, 0, 0, 0], &[0, 0, 0, 1]],
        ]),
        expect_balanced(2, 1, false),
    )?;
    for (mu1, mu2, seed) in [(3usize, 3usize, 0x0333u64), (4, 4, 0x0344), (4, 5, 0x0345), (4, 6, 0x0346)] {
        b.push(
            &format!("balanced-3-{mu1}-{mu2}"),
            search_balanced(3, mu1, mu2, true, seed)?,
            expect_balanced(mu1, mu2, true),
        )?;
    }

    // Balanced classes at column degree four: every class attainable there.
    b.push(
        "balanced-4-2-1",
        lit([
            [&[1, 0, 0, 0, 0], &[0, 0, 0, 0, 0]],
            [&[0, 0, 0, 0, 1], &[1, 0, 0, 0, 0]],
            [&[0, 0, 0, 0, 0], &[0, 0, 0, 0, 1]],
        ]),
        expect_balanced(2, 1, false),
    )?;
    for (mu1, mu2, seed) in [
        (3usize, 3usize, 0x0433u64),
        (4, 4, 0x0444),
        (4, 5, 0x0445),
        (4, 6, 0x0446),
        (5, 5, 0x0455),
        (5, 6, 0x0456),
    ] {
        b.push(
            &format!("balanced-4-{mu1}-{mu2}"),
            search_balanced(4, mu1, mu2, false, seed)?,
            expect_balanced(mu1, mu2, false),
        )?;
    }

    let manifest = FixtureManifest { fixtures: b.fixtures };
    if let Some(dir) = std::path::Path::new(&out).parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(&out, manifest.to_json() + "\n").with_context(|| format!("writing {out}"))?;
    println!(
        "wrote {} fixtures to {out} in {:.2?}",
        manifest.fixtures.len(),
        total.elapsed()
    );
    Ok(())
}
