//! Command-line interface for exact Rees-algebra computations over F_p.
//!
//! Input matrices are JSON objects with a prime `p` and a 3x2 grid of
//! coefficient lists (`rows[r][m][l]` is the coefficient of `x^l y^{deg-l}`
//! in entry `(r, m)`); `sample` emits one. Every subcommand accepts
//! `--format json` for machine-readable output with stable bytes. Timings go
//! to stderr only.

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use rees_core::exactlin::validate_prime;
use rees_core::fixtures::{pretty_json, random_hb};
use rees_core::linkage::delta_minors;
use rees_core::morley::{explicit_generators, morley_delta_check};
use rees_core::oracle::GenWhich;
use rees_core::polyring::TExp;
use rees_core::structure::{
    balanced_class, chart_rank, degree_table, parametrization_degree, predicted_twists,
    sextic_classify,
};
use rees_core::{
    BPoly, BidegreeMultiset, BiForm, Error, FieldElem, HBMatrix, InputSpec, Oracle, RowSpace,
};

#[derive(Parser)]
#[command(
    name = "rees",
    version,
    about = "Defining equations of Rees algebras of binary-form ideals over F_p",
    long_about = "Computes, from a 3x2 presentation matrix of binary forms over a prime field,\n\
                  the structure of the defining ideal of the Rees algebra of the ideal of\n\
                  maximal minors: torsion level ranks and generator degrees, explicit\n\
                  generator families, elimination minors, and classification reports, with a\n\
                  brute-force verifier for all of it."
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a matrix and print its basic invariants.
    Validate(InputArgs),
    /// Emit a random valid matrix as JSON.
    Sample(SampleArgs),
    /// Closed-form torsion profile: per-level ranks and generator twists.
    Adegrees(InputArgs),
    /// Explicit torsion generators (column degree two, canonical first column).
    Generators(InputArgs),
    /// Classify an equal-column-degree matrix by its invariant pair.
    #[command(visible_alias = "andy")]
    ClassifyBalanced(InputArgs),
    /// Classify a rational sextic: row, equations, singularity profile.
    ClassifySextic(InputArgs),
    /// Brute-force minimal generators of the torsion or the full ideal.
    Oracle(OracleArgs),
    /// Run every applicable closed-form construction against the oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Path to the matrix JSON (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    /// Degree of the first column.
    #[arg(long)]
    d1: usize,
    /// Degree of the second column.
    #[arg(long)]
    d2: usize,
    /// Odd prime field modulus.
    #[arg(long, default_value_t = 101)]
    prime: u64,
    /// Seed for the deterministic sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Which generators: the torsion over the full bigraded ring (a-b), the
    /// substitution-kernel ideal (j-b), or one torsion level as a
    /// T-polynomial module (a-s, requires --level).
    #[arg(long, value_enum, default_value_t = Which::AB)]
    which: Which,
    /// Torsion level for --which a-s.
    #[arg(long)]
    level: Option<usize>,
    /// Largest x,y-level scanned (default: delta, or d for j-b).
    #[arg(long)]
    imax: Option<usize>,
    /// Largest T-degree scanned (default: total minor degree d).
    #[arg(long)]
    jmax: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "a-b")]
    AB,
    #[value(name = "j-b")]
    JB,
    #[value(name = "a-s")]
    AS,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Largest T-degree used in the oracle comparisons.
    #[arg(long, default_value_t = 8)]
    jmax: usize,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Validate(a) => cmd_validate(a, cli.format),
        Cmd::Sample(a) => cmd_sample(a),
        Cmd::Adegrees(a) => cmd_adegrees(a, cli.format),
        Cmd::Generators(a) => cmd_generators(a, cli.format),
        Cmd::ClassifyBalanced(a) => cmd_classify_balanced(a, cli.format),
        Cmd::ClassifySextic(a) => cmd_classify_sextic(a, cli.format),
        Cmd::Oracle(a) => cmd_oracle(a, cli.format),
        Cmd::Verify(a) => cmd_verify(a, cli.format),
    }
}

/// Reads a matrix from a JSON file holding either a bare input object or a
/// manifest-style fixture (`{"input": {...}}`).
fn load_matrix(path: &Path) -> Result<HBMatrix> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).context("input is not valid JSON")?;
    let spec_value = if value.get("rows").is_some() {
        value
    } else if let Some(inner) = value.get("input") {
        inner.clone()
    } else {
        bail!("expected an object with `rows` (or a fixture with `input`)");
    };
    let spec: InputSpec =
        serde_json::from_value(spec_value).context("input does not match the matrix schema")?;
    spec.to_hb().map_err(|e| anyhow!("invalid matrix: {e}"))
}

fn emit(format: Format, value: &serde_json::Value, text: &str) {
    match format {
        Format::Json => println!("{}", pretty_json(value)),
        Format::Text => println!("{text}"),
    }
}

// ---------------------------------------------------------------------------
// Polynomial rendering (symmetric residues, deterministic term order).

fn mono_str(xw: usize, yw: usize, e: TExp) -> String {
    let mut parts = Vec::new();
    for (sym, pow) in [
        ("x", xw),
        ("y", yw),
        ("T1", e.0 as usize),
        ("T2", e.1 as usize),
        ("T3", e.2 as usize),
    ] {
        match pow {
            0 => {}
            1 => parts.push(sym.to_string()),
            k => parts.push(format!("{sym}^{k}")),
        }
    }
    parts.join("*")
}

fn append_term(out: &mut String, v: FieldElem, mono: &str) {
    let p = v.modulus();
    let (neg, mag) = if v.val() > p / 2 {
        (true, p - v.val())
    } else {
        (false, v.val())
    };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mag != 1 || mono.is_empty() {
        out.push_str(&mag.to_string());
        if !mono.is_empty() {
            out.push('*');
        }
    }
    out.push_str(mono);
}

fn fmt_biform(f: &BiForm) -> String {
    let n = f.degree();
    let mut out = String::new();
    for (w, v) in f.terms() {
        append_term(&mut out, v, &mono_str(w, n - w, (0, 0, 0)));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn fmt_bpoly(f: &BPoly) -> String {
    let (i, _) = f.bidegree();
    let mut out = String::new();
    for (w, e, v) in f.terms() {
        append_term(&mut out, v, &mono_str(w, i - w, e));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn fmt_multiset(m: &BidegreeMultiset) -> String {
    let items: Vec<String> = m
        .iter()
        .map(|((i, j), n)| {
            if n == 1 {
                format!("({i},{j})")
            } else {
                format!("({i},{j}) x{n}")
            }
        })
        .collect();
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn cmd_validate(a: &InputArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input)?;
    let p = hb.signed_minors()[0].modulus();
    let (d1, d2) = (hb.d1(), hb.d2());
    let minors = hb.signed_minors();
    let shape = hb.col1_canonical_shape();
    let gz = hb.generalized_zero_col1();
    let balanced = (d1 == d2).then(|| (hb.mu_entries(), hb.mu_c_minors()));

    let mut text = format!(
        "ok: 3x2 matrix over F_{p}, column degrees ({d1}, {d2}), delta = {}\n",
        hb.delta()
    );
    for (k, h) in minors.iter().enumerate() {
        text += &format!("h{} = {}\n", k + 1, fmt_biform(h));
    }
    text += &format!(
        "generalized zero in first column: {}\n",
        if gz { "yes" } else { "no" }
    );
    text += &format!(
        "canonical first-column shape: {}",
        shape.map_or("none".into(), |s| s.to_string())
    );
    if let Some((m1, m2)) = balanced {
        text += &format!("\nbalanced invariants (mu1, mu2): ({m1}, {m2})");
    }

    let value = json!({
        "p": p,
        "d1": d1,
        "d2": d2,
        "delta": hb.delta(),
        "minors": minors.iter().map(fmt_biform).collect::<Vec<_>>(),
        "generalized_zero": gz,
        "col1_shape": shape.map(|s| s.to_string()),
        "balanced": balanced.map(|(m1, m2)| vec![m1, m2]),
    });
    emit(format, &value, &text);
    Ok(0)
}

fn cmd_sample(a: &SampleArgs) -> Result<i32> {
    validate_prime(a.prime).map_err(|e| anyhow!("{e}"))?;
    if a.d1 == 0 || a.d2 == 0 {
        bail!("column degrees must be positive");
    }
    let (d1, d2) = if a.d1 <= a.d2 { (a.d1, a.d2) } else { (a.d2, a.d1) };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let hb = random_hb(a.prime, d1, d2, &mut rng, 10_000)
        .map_err(|e| anyhow!("sampling failed: {e}"))?;
    let spec = InputSpec::from_hb(&hb);
    println!("{}", pretty_json(&serde_json::to_value(&spec)?));
    Ok(0)
}

fn cmd_adegrees(a: &InputArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input)?;
    let delta = hb.delta();
    let mut rows = Vec::new();
    for i in 0..=delta {
        let twists = predicted_twists(&hb, i).ok();
        rows.push((i, chart_rank(&hb, i), twists));
    }

    let mut text = format!("torsion levels (delta = {delta}):\n  i  rank  generator twists\n");
    for (i, rank, twists) in &rows {
        let tw = match twists {
            Some(t) => t
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            None => "-".into(),
        };
        text += &format!("  {i}  {rank}     {tw}\n");
    }
    text += "every level above delta vanishes";

    let value = json!({
        "delta": delta,
        "levels": rows
            .iter()
            .map(|(i, rank, twists)| json!({"i": i, "rank": rank, "twists": twists}))
            .collect::<Vec<_>>(),
    });
    emit(format, &value, &text);
    Ok(0)
}

fn cmd_generators(a: &InputArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input)?;
    let gens = explicit_generators(&hb).map_err(|e| anyhow!("{e}"))?;
    let mut text = format!(
        "canonical shape {}, {} generators: {}\n",
        gens.shape,
        gens.gens.len(),
        fmt_multiset(&gens.bidegrees())
    );
    for ((i, j), f) in &gens.gens {
        text += &format!("({i},{j}): {}\n", fmt_bpoly(f));
    }
    let value = json!({
        "shape": gens.shape.to_string(),
        "generators": gens
            .gens
            .iter()
            .map(|((i, j), f)| json!({"i": i, "j": j, "form": fmt_bpoly(f)}))
            .collect::<Vec<_>>(),
    });
    emit(format, &value, text.trim_end());
    Ok(0)
}

fn cmd_classify_balanced(a: &InputArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input)?;
    let class = balanced_class(&hb).map_err(|e| anyhow!("{e}"))?;
    let hilbert: Vec<usize> = (0..=8).map(|j| class.hilbert(j)).collect();
    let fmt_twists = |m: &std::collections::BTreeMap<usize, usize>| {
        if m.is_empty() {
            "none".to_string()
        } else {
            m.iter()
                .map(|(t, n)| format!("twist {t}: {n}"))
                .collect::<Vec<_>>()
                .join(", ")
        }
    };
    let text = format!(
        "label: {}\nmu1 = {}, mu2 = {}\ngenerators: {}\nsyzygies: {}\nfree: {}\nhilbert function (level d1-2, j = 0..8): {}",
        class.label,
        class.mu_entries,
        class.mu_minors,
        fmt_twists(&class.generator_twists),
        fmt_twists(&class.syzygy_twists),
        if class.is_free() { "yes" } else { "no" },
        hilbert
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let value = json!({
        "label": class.label,
        "mu1": class.mu_entries,
        "mu2": class.mu_minors,
        "generator_twists": class.generator_twists,
        "syzygy_twists": class.syzygy_twists,
        "free": class.is_free(),
        "hilbert": hilbert,
    });
    emit(format, &value, &text);
    Ok(0)
}

fn cmd_classify_sextic(a: &InputArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input)?;
    let report = sextic_classify(&hb).map_err(|e| anyhow!("{e}"))?;
    let sing = report
        .singularities
        .iter()
        .map(|(m, n)| format!("{n} of multiplicity {m}"))
        .collect::<Vec<_>>()
        .join(", ");
    let text = format!(
        "row: {}\ncolumn degrees: ({}, {})\ngeneralized zero: {}\nequations: {}\nsingularities: {}\nsum of m(m-1)/2: {}",
        report.row,
        report.col_degrees.0,
        report.col_degrees.1,
        if report.generalized_zero { "yes" } else { "no" },
        fmt_multiset(&report.equations),
        sing,
        report.noether_sum
    );
    let value = serde_json::to_value(&report)?;
    emit(format, &value, &text);
    Ok(0)
}

fn cmd_oracle(a: &OracleArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input.input)?;
    let (d, delta) = (hb.d(), hb.delta());
    let which = match a.which {
        Which::AB => GenWhich::AAsB,
        Which::JB => GenWhich::JAsB,
        Which::AS => {
            let level = a
                .level
                .ok_or_else(|| anyhow!("--which a-s requires --level"))?;
            GenWhich::AAsSPerI(level)
        }
    };
    let imax = a.imax.unwrap_or(match a.which {
        Which::JB => d,
        _ => delta,
    });
    let jmax = a.jmax.unwrap_or(d);
    let t0 = Instant::now();
    let mut oracle = Oracle::new(hb);
    let gens = oracle.minimal_generators(which, imax, jmax);
    eprintln!("oracle scan took {:.2?}", t0.elapsed());

    let label = match a.which {
        Which::AB => "torsion generators over the bigraded ring".to_string(),
        Which::JB => "generators of the substitution-kernel ideal".to_string(),
        Which::AS => format!(
            "level-{} torsion generators as a T-module",
            a.level.unwrap()
        ),
    };
    let text = format!(
        "{label} (window i <= {imax}, j <= {jmax}):\n  {}",
        fmt_multiset(&gens)
    );
    let value = json!({
        "imax": imax,
        "jmax": jmax,
        "generators": gens,
    });
    emit(format, &value, &text);
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify: run whatever closed-form constructions apply and compare each with
// the brute-force computation.

enum Status {
    Pass,
    Fail(String),
    Skip(String),
}

struct Report {
    checks: Vec<(&'static str, Status)>,
}

impl Report {
    fn add(&mut self, name: &'static str, status: Status) {
        self.checks.push((name, status));
    }

    fn failed(&self) -> usize {
        self.checks
            .iter()
            .filter(|(_, s)| matches!(s, Status::Fail(_)))
            .count()
    }
}

fn cmd_verify(a: &VerifyArgs, format: Format) -> Result<i32> {
    let hb = load_matrix(&a.input.input)?;
    let t0 = Instant::now();
    let report = run_verify(&hb, a.jmax);
    eprintln!("verification took {:.2?}", t0.elapsed());

    let mut text = String::new();
    for (name, status) in &report.checks {
        let line = match status {
            Status::Pass => format!("{name}: pass"),
            Status::Fail(msg) => format!("{name}: FAIL ({msg})"),
            Status::Skip(msg) => format!("{name}: skipped ({msg})"),
        };
        text += &line;
        text.push('\n');
    }
    let failed = report.failed();
    text += &if failed == 0 {
        "all applicable checks passed".to_string()
    } else {
        format!("{failed} check(s) failed")
    };

    let value = json!({
        "checks": report
            .checks
            .iter()
            .map(|(name, status)| {
                let (state, detail) = match status {
                    Status::Pass => ("pass", None),
                    Status::Fail(m) => ("fail", Some(m.clone())),
                    Status::Skip(m) => ("skipped", Some(m.clone())),
                };
                json!({"name": name, "status": state, "detail": detail})
            })
            .collect::<Vec<_>>(),
        "passed": failed == 0,
    });
    emit(format, &value, &text);
    Ok(if failed == 0 { 0 } else { 1 })
}

fn run_verify(hb: &HBMatrix, jmax: usize) -> Report {
    let mut report = Report { checks: Vec::new() };
    let (d1, d2, d, delta) = (hb.d1(), hb.d2(), hb.d(), hb.delta());
    let jmax = jmax.max(4);
    let mut oracle = Oracle::new(hb.clone());

    // Level ranks from the chart versus second differences of the
    // brute-force Hilbert function (plus vanishing above delta).
    let mut bad = Vec::new();
    for i in 0..=delta + 1 {
        let predicted = chart_rank(hb, i);
        let actual = oracle.rank_estimate(i, jmax.max(d + 2));
        if predicted != actual {
            bad.push(format!("level {i}: chart {predicted}, oracle {actual}"));
        }
    }
    report.add(
        "level-ranks",
        if bad.is_empty() {
            Status::Pass
        } else {
            Status::Fail(bad.join("; "))
        },
    );

    // Predicted generator twists per level, where the closed form applies.
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for i in d1.saturating_sub(1)..=delta {
        let Ok(twists) = predicted_twists(hb, i) else {
            continue;
        };
        checked += 1;
        let mut expected = BidegreeMultiset::new();
        for &t in &twists {
            expected.add(i, t, 1);
        }
        let actual = oracle.minimal_generators(GenWhich::AAsSPerI(i), i, jmax.max(d));
        if actual != expected {
            bad.push(format!(
                "level {i}: predicted {expected}, oracle {actual}"
            ));
        } else if !oracle.free_hilbert_match(i, &twists, jmax.max(d)) {
            bad.push(format!("level {i}: free Hilbert function mismatch"));
        }
    }
    report.add(
        "level-twists",
        if checked == 0 {
            Status::Skip("no level admits the closed-form twist prediction".into())
        } else if bad.is_empty() {
            Status::Pass
        } else {
            Status::Fail(bad.join("; "))
        },
    );

    // Bigraded generator table (needs distinct degrees and a generalized
    // zero).  The table predicts the generators of the torsion truncated at
    // x,y-level d1 - 1, so compare against the truncated oracle.
    let r = parametrization_degree(hb);
    let table_status = match degree_table(hb) {
        Err(e) => Status::Skip(format!("{e}")),
        Ok(table) => {
            let actual = oracle.minimal_generators(
                GenWhich::AAsBFrom(d1.saturating_sub(1)),
                delta,
                jmax.max(d),
            );
            if actual == table.generators {
                Status::Pass
            } else {
                Status::Fail(format!(
                    "predicted {}, oracle {actual}",
                    table.generators
                ))
            }
        }
    };
    report.add("degree-table", table_status);

    // For degree-one parametrizations with d1 = 2, the truncated table plus
    // the implicit equation account for all of the torsion.
    let full_status = match degree_table(hb) {
        Err(e) => Status::Skip(format!("{e}")),
        Ok(_) if d1 != 2 => Status::Skip("full assembly needs column degree 2".into()),
        Ok(_) if r != 1 => Status::Skip(format!("parametrization degree {r}")),
        Ok(table) => match table.with_implicit(r) {
            Err(e) => Status::Fail(format!("{e}")),
            Ok(expected) => {
                let actual = oracle.minimal_generators(GenWhich::AAsB, delta, jmax.max(d));
                if actual == expected {
                    Status::Pass
                } else {
                    Status::Fail(format!("predicted {expected}, oracle {actual}"))
                }
            }
        },
    };
    report.add("degree-table-full", full_status);

    // Elimination minors span the top torsion strands.
    let mut bad = Vec::new();
    for i in d2.saturating_sub(1)..=delta {
        match delta_minors(hb, i) {
            Err(e) => bad.push(format!("level {i}: {e}")),
            Ok(minors) => {
                let dim = oracle.a_dim(i, 2);
                let mut span = RowSpace::new(oracle.sym_dim(i, 2), hb.signed_minors()[0].modulus());
                for m in &minors {
                    if !oracle.a_contains(m) {
                        bad.push(format!("level {i}: minor outside the torsion"));
                    }
                    span.add(oracle.sym_coords(m));
                }
                if span.rank() != dim || dim != d - 1 - i {
                    bad.push(format!(
                        "level {i}: span {} vs strand {dim} (expected {})",
                        span.rank(),
                        d - 1 - i
                    ));
                }
            }
        }
    }
    report.add(
        "elimination-minors",
        if bad.is_empty() {
            Status::Pass
        } else {
            Status::Fail(bad.join("; "))
        },
    );

    // Morley-form coefficients reproduce the same spans.
    report.add(
        "morley-forms",
        match morley_delta_check(hb) {
            Ok(true) => Status::Pass,
            Ok(false) => Status::Fail("span comparison failed".into()),
            Err(e) => Status::Fail(format!("{e}")),
        },
    );

    // Explicit generator family for column degree two.
    let explicit_status = match explicit_generators(hb) {
        Err(Error::OutOfScope(m)) | Err(Error::BadInput(m)) => Status::Skip(m),
        Err(e) => Status::Fail(format!("{e}")),
        Ok(gens) => {
            let mut bad = Vec::new();
            for ((i, j), f) in &gens.gens {
                if !oracle.j_contains(f) {
                    bad.push(format!("({i},{j}): does not vanish under substitution"));
                }
                if !oracle.a_contains(f) {
                    bad.push(format!("({i},{j}): not torsion"));
                }
            }
            if bad.is_empty() {
                let mut all: Vec<BPoly> = gens.gens.iter().map(|(_, f)| f.clone()).collect();
                all.extend(oracle.j_strand(0, d / r));
                if let Ok(minors) = delta_minors(hb, d2 - 1) {
                    all.extend(minors);
                }
                match oracle.generates_torsion(&all, delta, jmax.max(d)) {
                    Ok(true) => Status::Pass,
                    Ok(false) => Status::Fail(
                        "family plus implicit equation plus top minors does not generate".into(),
                    ),
                    Err(e) => Status::Fail(format!("{e}")),
                }
            } else {
                Status::Fail(bad.join("; "))
            }
        }
    };
    report.add("explicit-generators", explicit_status);

    // Balanced classification: Hilbert function of the level just below the
    // plateau.
    let balanced_status = match balanced_class(hb) {
        Err(Error::OutOfScope(m)) => Status::Skip(m),
        Err(e) => Status::Fail(format!("{e}")),
        Ok(class) => {
            let i = d1 - 2;
            let mut bad = Vec::new();
            for j in 0..=jmax {
                let predicted = class.hilbert(j);
                let actual = oracle.a_dim(i, j);
                if predicted != actual {
                    bad.push(format!("j = {j}: class {predicted}, oracle {actual}"));
                }
            }
            if bad.is_empty() {
                Status::Pass
            } else {
                Status::Fail(bad.join("; "))
            }
        }
    };
    report.add("balanced-class", balanced_status);

    // Sextic row: the defining equations other than the two column
    // relations.
    let sextic_status = match sextic_classify(hb) {
        Err(Error::OutOfScope(m)) => Status::Skip(m),
        Err(e) => Status::Fail(format!("{e}")),
        Ok(rep) => {
            let mut actual = oracle.minimal_generators(GenWhich::JAsB, d, jmax.max(d));
            let mut ok = actual.remove(d1, 1, 1) && actual.remove(d2, 1, 1);
            ok = ok && actual == rep.equations && rep.noether_sum == 10;
            if ok {
                Status::Pass
            } else {
                Status::Fail(format!(
                    "row {} predicted {}, oracle (without column relations) {}",
                    rep.row, rep.equations, actual
                ))
            }
        }
    };
    report.add("sextic-row", sextic_status);

    report
}
