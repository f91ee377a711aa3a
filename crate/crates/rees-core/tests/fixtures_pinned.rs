//! Recomputes every invariant pinned in the committed fixture manifest and
//! checks the inputs cover the configurations the rest of the suite relies
//! on. A failure here means either the manifest was edited by hand or the
//! strand machinery changed behavior.

use std::path::Path;

use rees_core::fixtures::compute_pins;
use rees_core::FixtureManifest;

fn manifest() -> FixtureManifest {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/manifest.json");
    FixtureManifest::load(Path::new(path)).expect("manifest must load")
}

#[test]
fn pins_recompute_exactly() {
    let m = manifest();
    assert!(!m.fixtures.is_empty());
    for fx in &m.fixtures {
        let hb = fx
            .input
            .to_hb()
            .unwrap_or_else(|e| panic!("{}: invalid input: {e}", fx.name));
        let pins = compute_pins(&hb);
        assert_eq!(pins, fx.pins, "{}: pins drifted", fx.name);
    }
}

#[test]
fn manifest_covers_required_configurations() {
    let m = manifest();
    // Canonical first columns, both shapes, second column degree 3..=5.
    for shape in ["mixed", "split"] {
        for d2 in 3..=5 {
            let name = format!("canonical-{shape}-2-{d2}");
            let fx = m.get(&name).unwrap_or_else(|| panic!("missing {name}"));
            assert!(fx.pins.col1_shape.is_some(), "{name}: canonical shape");
            assert_eq!(fx.pins.parametrization_degree, 1, "{name}: birational");
        }
    }
    // One representative of every balanced class attainable at column
    // degrees three and four.
    let classes_3 = [(2, 1), (3, 3), (4, 4), (4, 5), (4, 6)];
    let classes_4 = [(2, 1), (3, 3), (4, 4), (4, 5), (4, 6), (5, 5), (5, 6)];
    for (d1, classes) in [(3, &classes_3[..]), (4, &classes_4[..])] {
        for &(mu1, mu2) in classes {
            let name = format!("balanced-{d1}-{mu1}-{mu2}");
            let fx = m.get(&name).unwrap_or_else(|| panic!("missing {name}"));
            assert_eq!(fx.pins.balanced, Some((mu1, mu2)), "{name}: class pair");
        }
    }
    // Degree-six rows beyond the balanced ones.
    assert_eq!(m.get("sextic-1-5").unwrap().pins.parametrization_degree, 1);
    let nogz = m.get("sextic-2-4-nogz").unwrap();
    assert!(!nogz.pins.generalized_zero);
    assert_eq!(nogz.pins.parametrization_degree, 1);
    // Larger generalized-zero spread and the double-cover edge case.
    assert!(m.get("gz-3-5").unwrap().pins.generalized_zero);
    assert_eq!(
        m.get("split-2-4-nonbirational").unwrap().pins.parametrization_degree,
        2
    );
}
