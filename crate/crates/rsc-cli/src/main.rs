//! Command-line front end: ring diagnostics, the presented and coinvariant
//! models, bar homology, and the batch verification suites. Exit codes: 0 for
//! success, 1 for a violated identity or failed check, 2 for a usage error,
//! 3 for a request outside the size caps.

mod cache;
mod checks;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use rsc_core::abgrp::SparseMat;
use rsc_core::grpring::SquareClassGroup;
use rsc_core::homology::{
    relative_homology, relative_sl2_sm2, s_groups, sm2_checks, RelativePair,
};
use rsc_core::ring::{FiniteRing, UnitGroup};
use rsc_core::scissors::{is_field, k1mw, witt_data, RpBar};
use rsc_core::sl2::{enumerate_group, sl2_expected_order, verify_ge2_relations, Which};
use rsc_core::unimod::{build_complex, complex_homology, direct_models, enumerate_lines};
use rsc_core::{Caps, CoreError};

use crate::cache::Cache;
use crate::checks::{cached_group_homology, resolve, run_checks, Status, DEFAULT_CORPUS};
use crate::output::{group_json, print_value};

#[derive(Parser)]
#[command(
    name = "rsc",
    version,
    about = "Exact models of SL2 scissors-congruence invariants over finite commutative rings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Ring spec: gf:q (prime power), zmod:n, or prod:<spec>,<spec>,...
    #[arg(long, global = true, value_name = "SPEC")]
    ring: Option<String>,

    /// Ring corpus for verify, comma separated; a prod: entry must come
    /// last, or separate entries with ';'
    #[arg(long, global = true, value_name = "SPECS")]
    rings: Option<String>,

    /// Machine-readable JSON on stdout (deterministic, no timing fields)
    #[arg(long, global = true)]
    json: bool,

    /// CSV output (rp: relation matrix; verify: result rows)
    #[arg(long, global = true)]
    csv: bool,

    /// Override both bar-homology group-order caps (degree 2 and 3)
    #[arg(long, global = true, value_name = "N")]
    max_group_order: Option<usize>,

    /// Override the top degree for complex and bar-homology builds
    #[arg(long, global = true, value_name = "N")]
    max_degree: Option<usize>,

    /// Cache directory; default $RSC_CACHE_DIR, then the user cache dir
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Attach certifying data (boundary entries, orbit members, exactness rows)
    #[arg(long, global = true)]
    certificate: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural summary of a ring
    Ring,
    /// Unit group generators, square classes, and the symbol set W
    Units,
    /// Check the elementary-matrix relations
    Ge2,
    /// The unimodular-tuple complex: build, homology, orbits
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Presented refined scissors group
    Rp,
    /// Coinvariant models: scissors group, Grothendieck-Witt, fundamental ideal
    RpDirect,
    /// Presented Grothendieck-Witt chain and its filtration quotients
    Gw,
    /// Witt group
    Witt,
    /// Milnor-Witt K1 via the fiber square
    K1mw,
    /// Integral bar homology of a matrix group
    Homology {
        /// sl2 | e2 | sm2 | t | b
        #[arg(long, value_name = "NAME")]
        group: String,
        #[arg(long, value_name = "N")]
        dim: usize,
    },
    /// Relative integral homology of a pair of matrix groups
    RelHomology {
        /// sl2-sm2 | b-t | sm2-t
        #[arg(long, value_name = "PAIR")]
        pair: String,
        #[arg(long, value_name = "N")]
        dim: usize,
    },
    /// S_n = H_n(B, T) together with the splitting check
    SGroups {
        #[arg(long, value_name = "N")]
        dim: usize,
    },
    /// Monomial-subgroup homology report
    Sm2,
    /// Run a check suite (ge2, scissors, witt, homology, all) or one check
    Verify { name: String },
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Build the complex; confirm the boundary and the SL2 action commute
    Build,
    /// Reduced homology of the augmented complex at degree K
    Homology {
        #[arg(long, value_name = "K")]
        dim: usize,
    },
    /// SL2 orbits on the degree-N tuples
    Orbits {
        #[arg(long, value_name = "N")]
        dim: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                CoreError::Parse(_) => 2,
                CoreError::CapExceeded { .. } => 3,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

fn usage(msg: impl Into<String>) -> CoreError {
    CoreError::Parse(msg.into())
}

fn ring_of(cli: &Cli) -> Result<FiniteRing, CoreError> {
    let spec = cli
        .ring
        .as_deref()
        .ok_or_else(|| usage("--ring <SPEC> is required for this command"))?;
    FiniteRing::parse(spec)
}

fn caps_of(cli: &Cli) -> Caps {
    let mut caps = Caps::default();
    if let Some(n) = cli.max_group_order {
        caps.h2_group_order = n;
        caps.h3_group_order = n;
    }
    if let Some(n) = cli.max_degree {
        caps.max_degree = n;
    }
    caps
}

fn cache_of(cli: &Cli) -> Cache {
    Cache::new(cli.cache_dir.clone(), false)
}

fn big_value(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(n.to_string()),
    }
}

fn characteristic(r: &FiniteRing) -> u64 {
    let mut acc = r.one();
    let mut k = 1u64;
    while acc != r.zero() {
        acc = r.add(acc, r.one());
        k += 1;
    }
    k
}

fn sparse_triplets(m: &SparseMat<i64>) -> Value {
    let mut entries = Vec::new();
    for (j, col) in m.cols.iter().enumerate() {
        for (i, v) in col {
            entries.push(json!([i, j, v]));
        }
    }
    json!({"rows": m.rows, "cols": m.cols.len(), "entries": entries})
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A comma-separated ring list, except that a whole-string parse wins (so a
/// lone product spec keeps its commas) and a prod: entry absorbs the rest of
/// the list. ';' separates entries unambiguously.
fn parse_ring_list(s: &str) -> Result<Vec<FiniteRing>, CoreError> {
    if let Ok(r) = FiniteRing::parse(s) {
        return Ok(vec![r]);
    }
    let mut pieces: Vec<&str> = Vec::new();
    if s.contains(';') {
        pieces.extend(s.split(';'));
    } else {
        let mut rest = s;
        loop {
            if rest.starts_with("prod:") {
                pieces.push(rest);
                break;
            }
            match rest.find(',') {
                Some(i) => {
                    pieces.push(&rest[..i]);
                    rest = &rest[i + 1..];
                }
                None => {
                    pieces.push(rest);
                    break;
                }
            }
        }
    }
    pieces.iter().map(|p| FiniteRing::parse(p.trim())).collect()
}

fn run(cli: &Cli) -> Result<i32, CoreError> {
    if cli.json && cli.csv {
        return Err(usage("choose one of --json and --csv"));
    }
    if cli.rings.is_some() && !matches!(cli.cmd, Cmd::Verify { .. }) {
        return Err(usage("--rings applies to verify only; use --ring"));
    }
    if cli.csv && !matches!(cli.cmd, Cmd::Verify { .. } | Cmd::Rp) {
        return Err(usage("--csv is available for rp and verify only"));
    }
    match &cli.cmd {
        Cmd::Ring => cmd_ring(cli),
        Cmd::Units => cmd_units(cli),
        Cmd::Ge2 => cmd_ge2(cli),
        Cmd::Complex(sub) => match sub {
            ComplexCmd::Build => cmd_complex_build(cli),
            ComplexCmd::Homology { dim } => cmd_complex_homology(cli, *dim),
            ComplexCmd::Orbits { dim } => cmd_complex_orbits(cli, *dim),
        },
        Cmd::Rp => cmd_rp(cli),
        Cmd::RpDirect => cmd_rp_direct(cli),
        Cmd::Gw => cmd_gw(cli),
        Cmd::Witt => cmd_witt(cli),
        Cmd::K1mw => cmd_k1mw(cli),
        Cmd::Homology { group, dim } => cmd_homology(cli, group, *dim),
        Cmd::RelHomology { pair, dim } => cmd_rel_homology(cli, pair, *dim),
        Cmd::SGroups { dim } => cmd_s_groups(cli, *dim),
        Cmd::Sm2 => cmd_sm2(cli),
        Cmd::Verify { name } => cmd_verify(cli, name),
    }
}

fn cmd_ring(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let units = UnitGroup::new(&r);
    let sq = SquareClassGroup::new(&r, &units);
    let nlines = enumerate_lines(&r).len();
    let v = json!({
        "ring": r.spec().to_string(),
        "size": r.size(),
        "characteristic": characteristic(&r),
        "is_field": is_field(&r),
        "is_local": r.is_local(),
        "units": units.order(),
        "square_classes": sq.order(),
        "w_size": r.w_set().len(),
        "mu2_size": r.mu2().len(),
        "lines": nlines,
        "sl2_order": big_value(sl2_expected_order(&r)),
    });
    let human = format!(
        "ring {}: size {}, characteristic {}, field {}, local {}\n\
         units {}, square classes {}, |W| {}, |mu_2| {}\n\
         projective line size {}, |SL2| {}",
        r.spec(),
        r.size(),
        characteristic(&r),
        is_field(&r),
        r.is_local(),
        units.order(),
        sq.order(),
        r.w_set().len(),
        r.mu2().len(),
        nlines,
        sl2_expected_order(&r),
    );
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_units(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let units = UnitGroup::new(&r);
    let sq = SquareClassGroup::new(&r, &units);
    let gens: Vec<Value> = units
        .gens()
        .iter()
        .zip(units.orders().iter())
        .map(|(&g, &o)| json!({"element": r.label(g), "order": o}))
        .collect();
    let class_reps: Vec<String> = sq.classes().map(|c| r.label(sq.rep(c))).collect();
    let w: Vec<String> = r.w_set().iter().map(|&x| r.label(x)).collect();
    let v = json!({
        "ring": r.spec().to_string(),
        "order": units.order(),
        "generators": gens,
        "square_class_reps": class_reps,
        "w": w,
    });
    let gens_h: Vec<String> = units
        .gens()
        .iter()
        .zip(units.orders().iter())
        .map(|(&g, &o)| format!("{} (order {})", r.label(g), o))
        .collect();
    let human = format!(
        "A*({}) of order {}, generated by {}\nsquare class representatives: {}\nW = {{{}}}",
        r.spec(),
        units.order(),
        gens_h.join(", "),
        class_reps.join(", "),
        w.join(", "),
    );
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_ge2(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let rep = verify_ge2_relations(&r);
    let v = json!({
        "ring": rep.ring,
        "exhaustive": rep.exhaustive,
        "pairs_checked": rep.pairs_checked,
        "failures": rep.failures,
    });
    let mode = if rep.exhaustive { "exhaustive" } else { "sampled" };
    let human = if rep.ok() {
        format!(
            "relations hold on {} ({mode}): {} + {} + {} instances",
            rep.ring, rep.pairs_checked[0], rep.pairs_checked[1], rep.pairs_checked[2]
        )
    } else {
        format!("relation failures on {}:\n{}", rep.ring, rep.failures.join("\n"))
    };
    print_value(cli.json, &v, &human);
    Ok(if rep.ok() { 0 } else { 1 })
}

fn cmd_complex_build(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let part = build_complex(&r, caps.max_degree, &caps)?;
    let dims: Vec<usize> = (0..=part.top()).map(|k| part.basis(k).len()).collect();
    let equi = part.check_equivariance();
    let mut v = json!({
        "ring": r.spec().to_string(),
        "top": part.top(),
        "dims": dims,
        "boundary_squares_to_zero": true,
        "equivariant": equi,
    });
    let mut human = format!(
        "tuple complex over {} through degree {}: sizes {:?}\nboundary squares to zero: true\nSL2 action commutes with the boundary: {equi}",
        r.spec(),
        part.top(),
        dims,
    );
    if cli.certificate {
        let mut b = serde_json::Map::new();
        b.insert("0".into(), sparse_triplets(part.augmentation()));
        human.push_str("\ncertificate (degree row col value):");
        for (j, col) in part.augmentation().cols.iter().enumerate() {
            for (i, val) in col {
                human.push_str(&format!("\n0 {i} {j} {val}"));
            }
        }
        for k in 1..=part.top() {
            b.insert(k.to_string(), sparse_triplets(part.boundary(k)));
            for (j, col) in part.boundary(k).cols.iter().enumerate() {
                for (i, val) in col {
                    human.push_str(&format!("\n{k} {i} {j} {val}"));
                }
            }
        }
        v["boundaries"] = Value::Object(b);
    }
    print_value(cli.json, &v, &human);
    Ok(if equi { 0 } else { 1 })
}

fn cmd_complex_homology(cli: &Cli, dim: usize) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let h = complex_homology(&r, dim, &caps)?;
    print_value(
        cli.json,
        &group_json(&h),
        &format!("reduced H_{dim} of the tuple complex over {} = {}", r.spec(), h.describe()),
    );
    Ok(0)
}

fn cmd_complex_orbits(cli: &Cli, dim: usize) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let part = build_complex(&r, dim, &caps)?;
    let orbits = part.orbit_decomposition(dim);
    let rows: Vec<Value> = orbits
        .iter()
        .map(|o| {
            let mut row = json!({
                "rep": part.render_tuple(dim, o.rep),
                "size": o.members.len(),
                "stabilizer_order": o.stabilizer.len(),
            });
            if cli.certificate {
                let members: Vec<String> = o
                    .members
                    .iter()
                    .map(|&i| part.render_tuple(dim, i))
                    .collect();
                row["members"] = Value::from(members);
            }
            row
        })
        .collect();
    let v = json!({
        "ring": r.spec().to_string(),
        "dim": dim,
        "count": orbits.len(),
        "orbits": rows,
    });
    let mut human = format!(
        "{} SL2 orbits on degree-{dim} tuples over {}",
        orbits.len(),
        r.spec()
    );
    for o in &orbits {
        human.push_str(&format!(
            "\n{}  size {}  stabilizer order {}",
            part.render_tuple(dim, o.rep),
            o.members.len(),
            o.stabilizer.len()
        ));
        if cli.certificate {
            let members: Vec<String> = o
                .members
                .iter()
                .map(|&i| part.render_tuple(dim, i))
                .collect();
            human.push_str(&format!("\n  members: {}", members.join(" ")));
        }
    }
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_rp(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let rpb = RpBar::new(&r)?;
    if cli.csv {
        print!("{}", rpb.relations_csv());
        return Ok(0);
    }
    let v = json!({
        "ring": r.spec().to_string(),
        "group": group_json(rpb.group()),
        "rp1": group_json(rpb.rp1()),
        "symbols": rpb.w_symbols().len(),
        "pairs": rpb.pairs().len(),
        "generators": rpb.presentation().flat_dim(),
    });
    let human = format!(
        "refined scissors group over {} = {}\nkernel of lambda = {}\nsymbols |W| = {}, admissible pairs = {}, presentation generators = {}",
        r.spec(),
        rpb.group().describe(),
        rpb.rp1().describe(),
        rpb.w_symbols().len(),
        rpb.pairs().len(),
        rpb.presentation().flat_dim(),
    );
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_rp_direct(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let dm = direct_models(&r, &caps)?;
    let v = json!({
        "ring": r.spec().to_string(),
        "rp": group_json(dm.rp_group()),
        "gw": group_json(dm.gw_group()),
        "ideal": group_json(dm.fundamental_ideal().0),
    });
    let human = format!(
        "coinvariant models over {}: scissors group = {}, Grothendieck-Witt = {}, fundamental ideal = {}",
        r.spec(),
        dm.rp_group().describe(),
        dm.gw_group().describe(),
        dm.fundamental_ideal().0.describe(),
    );
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_gw(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let wd = witt_data(&r)?;
    let v = json!({
        "ring": r.spec().to_string(),
        "gw_bar": group_json(&wd.gw_bar),
        "i_bar": group_json(&wd.i_bar),
        "i_bar_sq": group_json(&wd.i_bar_sq),
        "i_mod_i2": group_json(&wd.i_mod_i2),
        "witt": group_json(&wd.witt),
    });
    let human = format!(
        "Grothendieck-Witt chain over {}:\nGWbar = {}\nIbar = {}\nIbar^2 = {}\nIbar/Ibar^2 = {}\nW = {}",
        r.spec(),
        wd.gw_bar.describe(),
        wd.i_bar.describe(),
        wd.i_bar_sq.describe(),
        wd.i_mod_i2.describe(),
        wd.witt.describe(),
    );
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_witt(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let wd = witt_data(&r)?;
    print_value(
        cli.json,
        &group_json(&wd.witt),
        &format!("W({}) = {}", r.spec(), wd.witt.describe()),
    );
    Ok(0)
}

fn cmd_k1mw(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let wd = witt_data(&r)?;
    let k = k1mw(&r, &wd)?;
    let ok = k.square_commutes && k.mw1_exact && k.mw2_exact;
    let v = json!({
        "ring": r.spec().to_string(),
        "group": group_json(&k.group),
        "square_commutes": k.square_commutes,
        "mw1_exact": k.mw1_exact,
        "mw2_exact": k.mw2_exact,
    });
    let human = format!(
        "Milnor-Witt K1 over {} = {}\nfiber square commutes: {}; sequence through Ibar^2 exact: {}; sequence through 2A* exact: {}",
        r.spec(),
        k.group.describe(),
        k.square_commutes,
        k.mw1_exact,
        k.mw2_exact,
    );
    print_value(cli.json, &v, &human);
    Ok(if ok { 0 } else { 1 })
}

fn parse_which(s: &str) -> Result<Which, CoreError> {
    Ok(match s {
        "sl2" => Which::Sl2,
        "e2" => Which::E2,
        "sm2" => Which::Sm2,
        "t" => Which::T,
        "b" => Which::B,
        other => {
            return Err(usage(format!(
                "unknown group {other}; expected sl2, e2, sm2, t, or b"
            )))
        }
    })
}

fn cmd_homology(cli: &Cli, group: &str, dim: usize) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let which = parse_which(group)?;
    let g = enumerate_group(&r, which, &caps)?;
    let cache = cache_of(cli);
    let h = cached_group_homology(&cache, &r, &g, dim, &caps)?;
    print_value(
        cli.json,
        &group_json(&h),
        &format!("H_{dim}({}({})) = {}", which.name(), r.spec(), h.describe()),
    );
    Ok(0)
}

fn cmd_rel_homology(cli: &Cli, pair: &str, dim: usize) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let (big, sub) = match pair {
        "sl2-sm2" => (Which::Sl2, Which::Sm2),
        "b-t" => (Which::B, Which::T),
        "sm2-t" => (Which::Sm2, Which::T),
        other => {
            return Err(usage(format!(
                "unknown pair {other}; expected sl2-sm2, b-t, or sm2-t"
            )))
        }
    };
    if pair == "sl2-sm2" && dim == 2 {
        let rep = relative_sl2_sm2(&r, &caps)?;
        let wd = witt_data(&r)?;
        let iso = rep.h[2].isomorphic(&wd.witt);
        let hyps: Vec<Value> = rep
            .hypotheses
            .iter()
            .map(|(h, v)| {
                json!({
                    "hypothesis": h,
                    "holds": match v {
                        Some(b) => Value::from(*b),
                        None => Value::Null,
                    },
                })
            })
            .collect();
        let mut v = json!({
            "ring": r.spec().to_string(),
            "pair": pair,
            "dim": dim,
            "group": group_json(&rep.h[2]),
            "witt": group_json(&wd.witt),
            "isomorphic_to_witt": iso,
            "les_ok": rep.les_ok,
            "hypotheses": hyps,
            "h0_units": group_json(&rep.h0_units),
        });
        let mut human = format!(
            "H_2(SL2({0}), SM2({0})) = {1}\nW({0}) = {2}; isomorphic: {iso}\nlong exact sequence consistent: {3}\nsurjection source H_0(A*, A) = {4}",
            r.spec(),
            rep.h[2].describe(),
            wd.witt.describe(),
            rep.les_ok,
            rep.h0_units.describe(),
        );
        for (name, hv) in &rep.hypotheses {
            let word = match hv {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "unknown",
            };
            human.push_str(&format!("\nhypothesis {name}: {word}"));
        }
        if cli.certificate {
            let rows: Vec<Value> = rep
                .les_report
                .iter()
                .map(|(p, e)| json!({"position": p, "exact": e}))
                .collect();
            v["les"] = Value::from(rows);
            for (p, e) in &rep.les_report {
                human.push_str(&format!("\nexact at {p}: {e}"));
            }
        }
        print_value(cli.json, &v, &human);
        return Ok(if rep.les_ok { 0 } else { 1 });
    }
    let bt = enumerate_group(&r, big, &caps)?;
    let st = enumerate_group(&r, sub, &caps)?;
    let h = relative_homology(&r, &bt, &st, dim, &caps)?;
    let mut v = json!({
        "ring": r.spec().to_string(),
        "pair": pair,
        "dim": dim,
        "group": group_json(&h),
    });
    let mut human = format!(
        "H_{dim}({}({2}), {}({2})) = {3}",
        big.name(),
        sub.name(),
        r.spec(),
        h.describe(),
    );
    if cli.certificate {
        let through = dim.min(2);
        let pair_c = RelativePair::trivial_coeffs(&r, &bt, &st, through + 1, &caps)?;
        let (_, report) = pair_c.les(through)?;
        let rows: Vec<Value> = report
            .iter()
            .map(|(p, e)| json!({"position": p, "exact": e}))
            .collect();
        v["les"] = Value::from(rows);
        for (p, e) in &report {
            human.push_str(&format!("\nexact at {p}: {e}"));
        }
    }
    print_value(cli.json, &v, &human);
    Ok(0)
}

fn cmd_s_groups(cli: &Cli, dim: usize) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let rep = s_groups(&r, dim, &caps)?;
    let v = json!({
        "ring": rep.ring,
        "n": rep.n,
        "s": group_json(&rep.s),
        "h_b": group_json(&rep.h_b),
        "h_t": group_json(&rep.h_t),
        "split_ok": rep.split_ok,
    });
    let human = format!(
        "S_{dim}({}) = {}\nH_{dim}(B) = {}, H_{dim}(T) = {}; H_{dim}(B) = H_{dim}(T) + S_{dim}: {}",
        rep.ring,
        rep.s.describe(),
        rep.h_b.describe(),
        rep.h_t.describe(),
        rep.split_ok,
    );
    print_value(cli.json, &v, &human);
    Ok(if rep.split_ok { 0 } else { 1 })
}

fn cmd_sm2(cli: &Cli) -> Result<i32, CoreError> {
    let r = ring_of(cli)?;
    let caps = caps_of(cli);
    let rep = sm2_checks(&r, &caps)?;
    let opt_group = |g: &Option<rsc_core::abgrp::FpAbelianGroup>| match g {
        Some(x) => group_json(x),
        None => Value::Null,
    };
    let failed = !rep.h1_order_matches || rep.h2_matches == Some(false);
    let v = json!({
        "ring": rep.ring,
        "sm2_order": rep.sm2_order,
        "h1": group_json(&rep.h1),
        "g_a_order": rep.g_a_order,
        "h1_order_matches": rep.h1_order_matches,
        "mu2_hypothesis": rep.mu2_hypothesis,
        "h2": opt_group(&rep.h2),
        "wedge_quotient": opt_group(&rep.wedge_quotient),
        "h2_matches": match rep.h2_matches {
            Some(b) => Value::from(b),
            None => Value::Null,
        },
        "skip_reason": match &rep.skip_reason {
            Some(s) => Value::from(s.clone()),
            None => Value::Null,
        },
    });
    let mut human = format!(
        "SM2({}) of order {}\nH_1 = {}; |H_1| = 2|G_A| = {}: {}\nmu_2 = {{1,-1}}: {}",
        rep.ring,
        rep.sm2_order,
        rep.h1.describe(),
        2 * rep.g_a_order,
        rep.h1_order_matches,
        rep.mu2_hypothesis,
    );
    match (&rep.h2, &rep.wedge_quotient, rep.h2_matches) {
        (Some(h2), Some(wq), Some(ok)) => human.push_str(&format!(
            "\nH_2 = {} vs wedge quotient {}: agree {}",
            h2.describe(),
            wq.describe(),
            ok
        )),
        _ => {
            if let Some(reason) = &rep.skip_reason {
                human.push_str(&format!("\nH_2 comparison skipped: {reason}"));
            }
        }
    }
    print_value(cli.json, &v, &human);
    Ok(if failed { 1 } else { 0 })
}

fn cmd_verify(cli: &Cli, name: &str) -> Result<i32, CoreError> {
    let names = resolve(name)
        .ok_or_else(|| usage(format!("unknown suite or check name: {name}")))?;
    if cli.ring.is_some() && cli.rings.is_some() {
        return Err(usage("use either --ring or --rings, not both"));
    }
    let rings: Vec<FiniteRing> = if let Some(list) = cli.rings.as_deref() {
        parse_ring_list(list)?
    } else if let Some(one) = cli.ring.as_deref() {
        vec![FiniteRing::parse(one)?]
    } else {
        DEFAULT_CORPUS
            .iter()
            .map(|s| FiniteRing::parse(s))
            .collect::<Result<Vec<_>, _>>()?
    };
    let caps = caps_of(cli);
    let cache = cache_of(cli);
    let t0 = Instant::now();
    let rows = run_checks(&names, &rings, &caps, &cache);
    let elapsed = t0.elapsed();
    let count = |s: Status| rows.iter().filter(|row| row.status == s).count();
    let failures = count(Status::Fail);
    if cli.csv {
        let mut out = String::from("check,ring,status,detail\n");
        for row in &rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.name,
                csv_field(&row.ring),
                row.status.as_str(),
                csv_field(&row.detail)
            ));
        }
        print!("{out}");
    } else if cli.json {
        let checks: Vec<Value> = rows
            .iter()
            .map(|row| {
                json!({
                    "name": row.name,
                    "ring": row.ring,
                    "status": row.status.as_str(),
                    "detail": row.detail,
                })
            })
            .collect();
        let mut counts = serde_json::Map::new();
        for row in &rows {
            let e = counts
                .entry(row.status.as_str().to_string())
                .or_insert(Value::from(0u64));
            *e = Value::from(e.as_u64().unwrap_or(0) + 1);
        }
        let v = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "suite": name,
            "rings": rings.iter().map(|r| r.spec().to_string()).collect::<Vec<_>>(),
            "checks": checks,
            "counts": Value::Object(counts),
            "failures": failures,
        });
        println!("{v}");
    } else {
        for row in &rows {
            println!(
                "{:<18} {:<26} {:<19} {}",
                row.status.as_str(),
                row.name,
                row.ring,
                row.detail
            );
        }
        println!(
            "\nverify {name}: {} rows; {} pass, {} fail, {} skipped, {} reported ({:.2}s)",
            rows.len(),
            count(Status::Pass),
            failures,
            count(Status::SkippedHypothesis) + count(Status::SkippedCap),
            count(Status::Reported),
            elapsed.as_secs_f64(),
        );
    }
    Ok(if failures > 0 { 1 } else { 0 })
}
