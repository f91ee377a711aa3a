//! Named input matrices with pinned invariants, serialized as JSON, plus the
//! seeded sampling helpers used to search for them.
//!
//! A manifest entry records the raw coefficient lists of a matrix together
//! with the invariants the brute-force machinery computed for it when it was
//! first found (column degrees, canonical-shape flag, generalized-zero flag,
//! parametrization degree, torsion generator bidegrees, and the balanced
//! invariant pair when applicable).  A regression test recomputes the pins
//! from scratch and compares.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::FieldElem;
use crate::hb::{hb_from_coefficient_vectors, Col1Shape, HBMatrix};
use crate::oracle::{BidegreeMultiset, GenWhich, Oracle};
use crate::polyring::{BiForm, SPoly};
use crate::structure::parametrization_degree;

/// Raw matrix input: prime and per-entry ascending-x coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSpec {
    pub p: u64,
    /// `rows[r][m]` lists the coefficients of `x^l y^{deg-l}` for entry
    /// `(r, m)`, ascending in `l`.
    pub rows: [[Vec<i64>; 2]; 3],
}

impl InputSpec {
    pub fn to_hb(&self) -> Result<HBMatrix> {
        let refs: [[&[i64]; 2]; 3] = [
            [&self.rows[0][0], &self.rows[0][1]],
            [&self.rows[1][0], &self.rows[1][1]],
            [&self.rows[2][0], &self.rows[2][1]],
        ];
        crate::hb::hb_from_coeff_lists(self.p, &refs)
    }

    pub fn from_hb(hb: &HBMatrix) -> InputSpec {
        let p = hb.signed_minors()[0].modulus();
        let list = |r: usize, c: usize| -> Vec<i64> {
            let f = hb.entry(r, c);
            (0..=hb.col_degree(c))
                .map(|w| f.coeff(w).val() as i64)
                .collect()
        };
        InputSpec {
            p,
            rows: [
                [list(0, 0), list(0, 1)],
                [list(1, 0), list(1, 1)],
                [list(2, 0), list(2, 1)],
            ],
        }
    }
}

/// Invariants recorded for a fixture when it was first found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixturePins {
    pub d1: usize,
    pub d2: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub col1_shape: Option<Col1Shape>,
    pub generalized_zero: bool,
    pub parametrization_degree: usize,
    /// Bidegrees of the minimal generators of the torsion over the full
    /// bigraded ring, computed over the window `i ≤ δ`, `j ≤ d`.
    pub torsion_generators: BidegreeMultiset,
    /// `(μ₁, μ₂)` for equal column degrees.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub balanced: Option<(usize, usize)>,
}

/// Recomputes the pinned invariants from scratch.
pub fn compute_pins(hb: &HBMatrix) -> FixturePins {
    let mut oracle = Oracle::new(hb.clone());
    let (d1, d2, d, delta) = (hb.d1(), hb.d2(), hb.d(), hb.delta());
    FixturePins {
        d1,
        d2,
        col1_shape: hb.col1_canonical_shape(),
        generalized_zero: hb.generalized_zero_col1(),
        parametrization_degree: parametrization_degree(hb),
        torsion_generators: oracle.minimal_generators(GenWhich::AAsB, delta, d),
        balanced: if d1 == d2 {
            Some((hb.mu_entries(), hb.mu_c_minors()))
        } else {
            None
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub input: InputSpec,
    pub pins: FixturePins,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureManifest {
    pub fixtures: Vec<Fixture>,
}

impl FixtureManifest {
    pub fn from_json(s: &str) -> Result<FixtureManifest> {
        serde_json::from_str(s).map_err(|e| Error::BadInput(format!("manifest parse: {e}")))
    }

    /// Pretty JSON with numeric leaf arrays kept on one line, so the file
    /// stays reviewable.
    pub fn to_json(&self) -> String {
        pretty_json(&serde_json::to_value(self).expect("manifest serialization"))
    }

    pub fn get(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name == name)
    }

    /// Loads and parses the manifest at the given path.
    pub fn load(path: &std::path::Path) -> Result<FixtureManifest> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::BadInput(format!("manifest read: {e}")))?;
        FixtureManifest::from_json(&s)
    }
}

/// Serializes a JSON value with two-space indentation, inlining any array
/// whose members are all scalars or scalar-only arrays.  Object keys come
/// out sorted, so equal values always produce identical bytes.
pub fn pretty_json(v: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent);
    let inner = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else if items.iter().all(inlineable) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&compact(item));
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&inner);
                    write_value(item, indent + 1, out);
                    if k + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&pad);
                out.push(']');
            }
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&inner);
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
        other => out.push_str(&compact(other)),
    }
}

fn inlineable(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        serde_json::Value::Object(_) => false,
        _ => true,
    }
}

fn compact(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("value serialization")
}

/// Uniform random binary form of degree `n` (possibly zero).
pub fn random_biform(p: u64, n: usize, rng: &mut impl Rng) -> BiForm {
    let mut f = BiForm::zero(n, p);
    for w in 0..=n {
        f.set_coeff(w, FieldElem::new(rng.gen_range(0..p), p));
    }
    f
}

/// Random combination of the given same-degree forms.
pub fn random_combination(basis: &[BiForm], rng: &mut impl Rng) -> BiForm {
    let p = basis[0].modulus();
    let n = basis[0].degree();
    let mut f = BiForm::zero(n, p);
    for b in basis {
        f = f.add(&b.scale(FieldElem::new(rng.gen_range(0..p), p)));
    }
    f
}

/// Random subspace of the degree-`n` forms with the exact given dimension,
/// returned as a basis.
pub fn random_subspace(p: u64, n: usize, dim: usize, rng: &mut impl Rng) -> Vec<BiForm> {
    assert!(dim <= n + 1);
    loop {
        let basis: Vec<BiForm> = (0..dim).map(|_| random_biform(p, n, rng)).collect();
        let mut span = crate::exactlin::RowSpace::new(n + 1, p);
        for b in &basis {
            span.add((0..=n).map(|w| b.coeff(w)).collect());
        }
        if span.rank() == dim {
            return basis;
        }
    }
}

/// Random uniformly drawn linear T-form.
pub fn random_linear(p: u64, rng: &mut impl Rng) -> SPoly {
    let mut f = SPoly::zero(1, p);
    for k in 0..3u16 {
        let mut e = [0u16; 3];
        e[k as usize] = 1;
        f.set_coeff((e[0], e[1], e[2]), FieldElem::new(rng.gen_range(0..p), p));
    }
    f
}

/// Random matrix with entries drawn from the given per-column spans;
/// retries until the maximal minors pass the height and rank checks.
pub fn random_hb_in_spans(
    span1: &[BiForm],
    span2: &[BiForm],
    rng: &mut impl Rng,
    max_tries: usize,
) -> Result<HBMatrix> {
    let p = span1[0].modulus();
    for _ in 0..max_tries {
        let rows: [[BiForm; 2]; 3] = [
            [random_combination(span1, rng), random_combination(span2, rng)],
            [random_combination(span1, rng), random_combination(span2, rng)],
            [random_combination(span1, rng), random_combination(span2, rng)],
        ];
        if let Ok(hb) = HBMatrix::new(p, rows) {
            return Ok(hb);
        }
    }
    Err(Error::BadInput(
        "no valid matrix found in the given spans".into(),
    ))
}

/// Random valid matrix with full-degree columns.
pub fn random_hb(p: u64, d1: usize, d2: usize, rng: &mut impl Rng, max_tries: usize) -> Result<HBMatrix> {
    for _ in 0..max_tries {
        let rows: [[BiForm; 2]; 3] = [
            [random_biform(p, d1, rng), random_biform(p, d2, rng)],
            [random_biform(p, d1, rng), random_biform(p, d2, rng)],
            [random_biform(p, d1, rng), random_biform(p, d2, rng)],
        ];
        if let Ok(hb) = HBMatrix::new(p, rows) {
            return Ok(hb);
        }
    }
    Err(Error::BadInput("no valid random matrix found".into()))
}

/// Random equal-degree matrix built directly from T-linear coefficient
/// vectors that are forced to drop rank at the given T-points: at each
/// point the second coefficient vector is a scalar multiple of the first.
/// Used to search for the non-generic balanced classes.
pub fn random_hb_with_rank_drops(
    p: u64,
    d: usize,
    points: &[[u64; 3]],
    rng: &mut impl Rng,
    max_tries: usize,
) -> Result<HBMatrix> {
    let basis: Vec<BiForm> = (0..=d)
        .map(|l| BiForm::monomial(d, p, l, FieldElem::one(p)))
        .collect();
    random_hb_with_rank_drops_in_span(p, &basis, points, rng, max_tries)
}

/// Like [`random_hb_with_rank_drops`], but with every matrix entry confined
/// to the span of the given equal-degree forms.  Coefficient vectors are
/// sampled in coordinates relative to the span; since the basis matrix is
/// injective, prescribing proportional columns in those coordinates is
/// equivalent to prescribing them for the assembled vectors, so the rank
/// drops survive the change of basis.
pub fn random_hb_with_rank_drops_in_span(
    p: u64,
    basis: &[BiForm],
    points: &[[u64; 3]],
    rng: &mut impl Rng,
    max_tries: usize,
) -> Result<HBMatrix> {
    assert!(!basis.is_empty() && !points.is_empty());
    let d = basis[0].degree();
    let k = basis.len();
    for _ in 0..max_tries {
        let cp1: Vec<SPoly> = (0..k).map(|_| random_linear(p, rng)).collect();
        let scales: Vec<FieldElem> = points
            .iter()
            .map(|_| FieldElem::new(rng.gen_range(1..p), p))
            .collect();
        // Solve for each coordinate of the second vector: prescribed values
        // at the drop points, free otherwise.  With at most two points the
        // solution space of each linear form is nonempty for points in
        // general position.
        let mut cp2 = Vec::with_capacity(k);
        let mut ok = true;
        for j in 0..k {
            match solve_linear_through(p, points, &scales, &cp1[j], rng) {
                Some(f) => cp2.push(f),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // Assemble degree-indexed vectors from the span coordinates.
        let assemble = |cp: &[SPoly]| -> Vec<SPoly> {
            (0..=d)
                .map(|l| {
                    let mut f = SPoly::zero(1, p);
                    for (j, b) in basis.iter().enumerate() {
                        f = f.add(&cp[j].scale(b.coeff(l)));
                    }
                    f
                })
                .collect()
        };
        if let Ok(hb) = hb_from_coefficient_vectors(p, &assemble(&cp1), &assemble(&cp2)) {
            return Ok(hb);
        }
    }
    Err(Error::BadInput(
        "no valid rank-constrained matrix found".into(),
    ))
}

/// Random linear T-form taking the value `scales[k] * target(points[k])` at
/// each point.
fn solve_linear_through(
    p: u64,
    points: &[[u64; 3]],
    scales: &[FieldElem],
    target: &SPoly,
    rng: &mut impl Rng,
) -> Option<SPoly> {
    use crate::exactlin::ExactMatrix;
    let vars: Vec<(u16, u16, u16)> = vec![(1, 0, 0), (0, 1, 0), (0, 0, 1)];
    // Unknown coefficients a_0..a_2 of the output form; one equation per
    // point.  Sample from the affine solution set.
    let rows: Vec<Vec<FieldElem>> = points
        .iter()
        .map(|pt| {
            (0..3)
                .map(|k| FieldElem::new(pt[k], p))
                .collect()
        })
        .collect();
    let rhs: Vec<FieldElem> = points
        .iter()
        .zip(scales)
        .map(|(pt, s)| {
            let t = [
                FieldElem::new(pt[0], p),
                FieldElem::new(pt[1], p),
                FieldElem::new(pt[2], p),
            ];
            *s * target.eval(t)
        })
        .collect();
    // Particular solution + random kernel element via augmented rref.
    let aug: Vec<Vec<FieldElem>> = rows
        .iter()
        .zip(&rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(*b);
            v
        })
        .collect();
    let m = ExactMatrix::from_rows(aug.clone(), p).ok()?;
    let mut red = m.clone();
    let pivots = red.rref_in_place();
    // Inconsistent system: pivot in the augmented column.
    if pivots.contains(&3) {
        return None;
    }
    let mut sol = [FieldElem::zero(p); 3];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = red.row(r)[3];
    }
    // Add a random homogeneous solution.
    let coeff = ExactMatrix::from_rows(rows, p).ok()?;
    for k in coeff.kernel_basis() {
        let s = FieldElem::new(rng.gen_range(0..p), p);
        for (i, v) in k.iter().enumerate() {
            sol[i] += *v * s;
        }
    }
    let mut f = SPoly::zero(1, p);
    for (i, e) in vars.iter().enumerate() {
        f.set_coeff(*e, sol[i]);
    }
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 101;

    #[test]
    fn input_spec_roundtrip() {
        let spec = InputSpec {
            p: P,
            rows: [
                [vec![1, 0, 1], vec![0, 0, 0, 0, 0]],
                [vec![0, 1, 0], vec![1, 0, 0, 0, 0]],
                [vec![0, 0, 0], vec![1, 0, 0, 0, 1]],
            ],
        };
        let hb = spec.to_hb().unwrap();
        assert_eq!(InputSpec::from_hb(&hb), spec);
        let json = serde_json::to_string(&spec).unwrap();
        let back: InputSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn manifest_roundtrip_and_lookup() {
        let spec = InputSpec {
            p: P,
            rows: [
                [vec![1, 0, 0, 0], vec![0, 0, 0, 0]],
                [vec![0, 0, 0, 1], vec![1, 0, 0, 0]],
                [vec![0, 0, 0, 0], vec![0, 0, 0, 1]],
            ],
        };
        let hb = spec.to_hb().unwrap();
        let manifest = FixtureManifest {
            fixtures: vec![Fixture {
                name: "block-cubic".into(),
                input: spec,
                pins: compute_pins(&hb),
            }],
        };
        let back = FixtureManifest::from_json(&manifest.to_json()).unwrap();
        assert_eq!(back, manifest);
        let fx = back.get("block-cubic").unwrap();
        assert_eq!(fx.pins.d1, 3);
        assert_eq!(fx.pins.parametrization_degree, 3);
        assert_eq!(fx.pins.balanced, Some((2, 1)));
        assert!(back.get("missing").is_none());
    }

    #[test]
    fn random_matrices_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let hb = random_hb(P, 2, 4, &mut rng, 100).unwrap();
        assert_eq!((hb.d1(), hb.d2()), (2, 4));
        let basis = random_subspace(P, 3, 3, &mut rng);
        let hb = random_hb_in_spans(&basis, &basis, &mut rng, 200).unwrap();
        assert_eq!((hb.d1(), hb.d2()), (3, 3));
        assert!(hb.mu_entries() <= 3);
    }

    #[test]
    fn rank_drop_constructions_bound_the_minor_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let one = random_hb_with_rank_drops(P, 3, &[[1, 2, 3]], &mut rng, 300).unwrap();
        assert!(one.mu_c_minors() <= 5);
        let two =
            random_hb_with_rank_drops(P, 3, &[[1, 2, 3], [5, 1, 4]], &mut rng, 300).unwrap();
        assert!(two.mu_c_minors() <= 4);
    }

    #[test]
    fn span_restricted_rank_drops_bound_both_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let basis = random_subspace(P, 4, 4, &mut rng);
        let hb =
            random_hb_with_rank_drops_in_span(P, &basis, &[[2, 3, 7]], &mut rng, 500).unwrap();
        assert_eq!((hb.d1(), hb.d2()), (4, 4));
        assert!(hb.mu_entries() <= 4);
        assert!(hb.mu_c_minors() <= 5);
    }
}
