//! `cyclord` — command-line surface over the core library.
//!
//! Exit codes: 0 = pass, 1 = property violation (witness in the report),
//! 2 = input/usage error, 3 = enumeration budget exceeded. Reports are JSON
//! by default; `--format text` gives a one-line summary and `--format dot`
//! renders the graph views. `CYCLORD_BUDGET` (or `--budget`) overrides the
//! default enumeration budgets.

mod io;

use std::cmp::Ordering;
use std::fs;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use cyclord_core::completion::{
    build_quotient_system, inverse_limit_threads, novak_bracket, star_cover, star_refine,
    CompletionError,
};
use cyclord_core::convex::{intersect_intervals, is_convex, ConvexSet};
use cyclord_core::maps::{validate_cop_via_cycles, CopViolation, CycleEnumeration, MapError};
use cyclord_core::order::{
    classify_cut, verify_circular_axioms, Cut, CutClass, FiniteCircularOrder, FiniteLinearOrder,
    TernaryRelationTable,
};
use cyclord_core::split::{lex_product_circular, split_subset, verify_lex_clauses,
    verify_split_order_rules};
use cyclord_core::sturmian::{
    code_word, compare_orbit, compare_orbit_budgeted, orbit_cycle, rotation_action, sturmian_code,
    ArcEndpoint, IrrationalAngle, SturmianError,
};
use cyclord_core::suites::{run_all, run_suite, SweepOutcome, SUITES};
use cyclord_core::variation::{
    bv_family_tame_check, helly_select, independence_depth, jordan_decompose,
    lift_variation_bounds, oscillation_decompose, variation_circular, variation_circular_metric,
    variation_linear, variation_linear_metric, FunctionSequence, TameConfig, VariationError,
    VariationReport,
};
use cyclord_core::Host;

use crate::io::{
    circular_json, convex_json, dot_circular, dot_quotient_system, function_json, map_json,
    parse_arc_endpoint, parse_circular, parse_convex, parse_function, parse_index_spec,
    parse_linear, parse_map, parse_metric_function, parse_rational, parse_relation,
    print_rational, string_list, ParseError,
};

#[derive(Parser)]
#[command(name = "cyclord", version, about = "Finite circular orders: checks, covers, limits, variation, rotations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Enumeration budget override (also settable via CYCLORD_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized sweeps; echoed into every report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report format (default: json; sweep defaults to text).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the circular-order axioms on an order or a raw triple relation.
    CheckOrder { file: String },
    /// Check a map for circular-order preservation (bracket + fiber route).
    CopCheck {
        file: String,
        /// Cross-check against the cycle-enumeration route.
        #[arg(long)]
        via_cycles: bool,
    },
    /// Intersect two open intervals by endpoint case analysis.
    Intersect { file: String },
    /// Normalize a convex set, or test a member list for convexity.
    Convex {
        file: String,
        /// Report the complement instead.
        #[arg(long)]
        complement: bool,
    },
    /// Double the chosen points of a cycle into adjacent plus/minus pairs.
    Split { file: String },
    /// Lexicographic product of a cycle with a chain.
    Lexprod { file: String },
    /// Star cover induced by a cycle of points; optionally refine it.
    Starcover {
        file: String,
        /// Refine until the cover star-refines the original.
        #[arg(long)]
        refine: bool,
    },
    /// Compare the three-cut bracket against the host bracket.
    NovakCompare { file: String },
    /// Build the quotient system and its inverse limit.
    Invlimit { file: String },
    /// Total variation over a chain or cycle (rational or metric values).
    Variation {
        file: String,
        /// Also report the chain/cycle lift bounds at this split point.
        #[arg(long)]
        lift: Option<String>,
    },
    /// Decompose a chain function into a difference of nondecreasing parts.
    Jordan { file: String },
    /// Partition a chain into pieces of variation at most epsilon.
    Oscillation {
        file: String,
        #[arg(long)]
        epsilon: String,
    },
    /// Select a pointwise-stabilizing subsequence from a function sequence.
    Helly {
        file: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Independence depth of a function family, with optional variation bound.
    Independence {
        file: String,
        #[arg(long, default_value_t = 16)]
        max_depth: usize,
        /// Reject members whose variation exceeds this bound first.
        #[arg(long)]
        bound: Option<String>,
    },
    /// Exact rotation orbits: cycles, codings, comparisons, actions.
    Sturmian {
        #[command(subcommand)]
        cmd: SturmianCmd,
    },
    /// Run the property suites and print one line per suite.
    Sweep {
        /// Suite id, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cap the exhaustive size parameters.
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SturmianCmd {
    /// Circular order of the orbit points at the given indices.
    Cycle {
        #[arg(long)]
        alpha: String,
        /// Comma-separated indices; ranges like 0..9 are inclusive.
        #[arg(long, allow_hyphen_values = true)]
        indices: String,
        /// Indices to double into plus/minus pairs.
        #[arg(long, allow_hyphen_values = true)]
        split: Option<String>,
    },
    /// Binary word coding membership of the orbit in an arc.
    Code {
        #[arg(long)]
        alpha: String,
        /// Half-open arc `start:end`; endpoints are rationals or `<n>alpha`.
        #[arg(long)]
        arc: String,
        #[arg(long, allow_hyphen_values = true)]
        indices: String,
    },
    /// Decide which of two orbit points comes first in [0,1).
    Compare {
        #[arg(long)]
        alpha: String,
        #[arg(short, allow_hyphen_values = true)]
        m: i64,
        #[arg(short, allow_hyphen_values = true)]
        n: i64,
    },
    /// The index shift as a map between orbit cycles.
    Act {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        indices: String,
        #[arg(long, allow_hyphen_values = true)]
        split: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        shift: i64,
    },
}

enum CliError {
    Parse(String),
    Budget(String),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.0)
    }
}

fn from_map_err(e: MapError) -> CliError {
    match e {
        MapError::BudgetExceeded { needed, budget } => {
            CliError::Budget(format!("needs {needed} steps, budget {budget}"))
        }
        other => CliError::Parse(other.to_string()),
    }
}

fn from_variation_err(e: VariationError) -> CliError {
    match e {
        VariationError::BudgetExceeded { needed, budget } => {
            CliError::Budget(format!("needs {needed} steps, budget {budget}"))
        }
        VariationError::Map(m) => from_map_err(m),
        other => CliError::Parse(other.to_string()),
    }
}

fn from_completion_err(e: CompletionError) -> CliError {
    match e {
        CompletionError::Map(m) => from_map_err(m),
        other => CliError::Parse(other.to_string()),
    }
}

fn from_sturmian_err(e: SturmianError) -> CliError {
    match e {
        SturmianError::BudgetExceeded { reached, threshold } => CliError::Budget(format!(
            "convergent scale {reached} exceeded threshold {threshold}"
        )),
        SturmianError::Map(m) => from_map_err(m),
        SturmianError::Variation(v) => from_variation_err(v),
        other => CliError::Parse(other.to_string()),
    }
}

/// A finished report: whether the checked property held, and the rendered
/// body to print.
struct Report {
    pass: bool,
    body: String,
}

struct Ctx {
    budget: Option<u64>,
    seed: u64,
    format: Format,
}

impl Ctx {
    fn budget_or(&self, default: u64) -> u64 {
        self.budget.unwrap_or(default)
    }

    /// Attach the seed and pretty-print.
    fn render(&self, pass: bool, mut body: Value) -> Report {
        if let Some(obj) = body.as_object_mut() {
            obj.insert("seed".into(), json!(self.seed));
            obj.insert("pass".into(), json!(pass));
        }
        Report {
            pass,
            body: serde_json::to_string_pretty(&body).expect("reports serialize"),
        }
    }

    fn text(&self, pass: bool, line: impl Into<String>) -> Report {
        Report {
            pass,
            body: line.into(),
        }
    }
}

const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

fn read_input(path: &str) -> Result<Value, CliError> {
    let raw = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))?
    };
    serde_json::from_str(&raw).map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

fn get(v: &Value, key: &str) -> Result<Value, CliError> {
    v.get(key)
        .cloned()
        .ok_or_else(|| CliError::Parse(format!("input needs `{key}`")))
}

fn str_list(v: &Value, key: &str) -> Result<Vec<String>, CliError> {
    let arr = get(v, key)?;
    let arr = arr
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("`{key}` must be an array")))?;
    arr.iter()
        .map(|e| {
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::Parse(format!("`{key}` entries must be strings")))
        })
        .collect()
}

fn no_dot(format: Format) -> Result<(), CliError> {
    if format == Format::Dot {
        return Err(CliError::Parse(
            "dot output is not available for this command".into(),
        ));
    }
    Ok(())
}

fn convex_text(set: &ConvexSet) -> String {
    match set {
        ConvexSet::Empty => "empty".into(),
        ConvexSet::Full => "full".into(),
        ConvexSet::FullMinusPoint(p) => format!("full minus {p}"),
        ConvexSet::Interval {
            a,
            b,
            left_closed,
            right_closed,
        } => format!(
            "{}{a},{b}{}",
            if *left_closed { '[' } else { '(' },
            if *right_closed { ']' } else { ')' },
        ),
    }
}

fn variation_json(r: &VariationReport) -> Value {
    json!({
        "value": print_rational(&r.value),
        "witness": r.witness,
        "closed": r.closed,
    })
}

// ---------------------------------------------------------------------------
// Command handlers.

fn cmd_check_order(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    let kind = input
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Parse("input needs a `kind`".into()))?;
    let (rel, order) = match kind {
        "circular" => {
            let order = parse_circular(input)?;
            (TernaryRelationTable::from_order(&order), Some(order))
        }
        "relation" => (parse_relation(input)?, None),
        other => {
            return Err(CliError::Parse(format!(
                "check-order expects a circular order or a relation, got `{other}`"
            )))
        }
    };
    if ctx.format == Format::Dot {
        let order = order.ok_or_else(|| {
            CliError::Parse("dot output needs a circular order input".into())
        })?;
        return Ok(ctx.text(true, dot_circular(&order)));
    }
    let report = verify_circular_axioms(&rel);
    if ctx.format == Format::Text {
        let line = match &report.violation {
            None => "axioms: pass".to_string(),
            Some(v) => format!("axioms: fail ({}) — {}", v.axiom, v.note),
        };
        return Ok(ctx.text(report.pass, line));
    }
    let body = match report.violation {
        None => json!({
            "property": "order/axioms",
            "report": "axioms: pass",
            "elements": rel.elements(),
            "canonical": io::relation_json(&rel),
        }),
        Some(v) => json!({
            "property": "order/axioms",
            "report": format!("axioms: fail ({})", v.axiom),
            "axiom": v.axiom.to_string(),
            "witness": v.witness,
            "note": v.note,
        }),
    };
    Ok(ctx.render(report.pass, body))
}

fn cop_witness(v: &CopViolation) -> (String, Value) {
    match v {
        CopViolation::FiberNotConvex { value, fiber } => (
            format!("fiber of {value} not convex"),
            json!({ "kind": "fiber", "value": value, "fiber": fiber }),
        ),
        CopViolation::Bracket { triple, images } => (
            format!(
                "bracket [{}] maps to [{}] which is not a bracket",
                triple.join(", "),
                images.join(", ")
            ),
            json!({ "kind": "bracket", "triple": triple, "images": images }),
        ),
    }
}

fn cmd_cop_check(ctx: &Ctx, input: &Value, via_cycles: bool) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let mut map = parse_map(input)?;
    let report = map.validate_cop().map_err(from_map_err)?;
    let cycles_pass = if via_cycles {
        let budget = ctx.budget_or(DEFAULT_ENUM_BUDGET);
        let ok = validate_cop_via_cycles(&map, CycleEnumeration::Reduced, budget)
            .map_err(from_map_err)?;
        if ok != report.pass {
            return Ok(ctx.render(
                false,
                json!({
                    "property": "maps/cop-oracle",
                    "witness": "the bracket/fiber route and the cycle route disagree",
                    "bracket_route": report.pass,
                    "cycle_route": ok,
                }),
            ));
        }
        Some(ok)
    } else {
        None
    };
    if ctx.format == Format::Text {
        let line = match &report.violation {
            None => "cop: pass".to_string(),
            Some(v) => format!("cop: fail — {}", cop_witness(v).0),
        };
        return Ok(ctx.text(report.pass, line));
    }
    let mut body = json!({ "property": "maps/cop" });
    if let Some(ok) = cycles_pass {
        body["via_cycles"] = json!(ok);
    }
    if let Some(v) = &report.violation {
        let (line, witness) = cop_witness(v);
        body["report"] = json!(format!("cop: fail — {line}"));
        body["witness"] = witness;
    } else {
        body["report"] = json!("cop: pass");
    }
    Ok(ctx.render(report.pass, body))
}

fn cmd_intersect(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let order = parse_circular(&get(input, "order")?)?;
    let first = str_list(input, "first")?;
    let second = str_list(input, "second")?;
    let pair = |v: &[String]| -> Result<(String, String), CliError> {
        match v {
            [a, b] => Ok((a.clone(), b.clone())),
            _ => Err(CliError::Parse(
                "intervals are endpoint pairs [a, b]".into(),
            )),
        }
    };
    let (a1, b1) = pair(&first)?;
    let (a2, b2) = pair(&second)?;
    let result = intersect_intervals(&order, (&a1, &b1), (&a2, &b2))
        .map_err(|e| CliError::Parse(e.to_string()))?;
    if ctx.format == Format::Text {
        let parts: Vec<String> = result.components.iter().map(convex_text).collect();
        return Ok(ctx.text(
            true,
            format!("case {}: {}", result.case, if parts.is_empty() { "empty".into() } else { parts.join(" ∪ ") }),
        ));
    }
    Ok(ctx.render(
        true,
        json!({
            "property": "convex/intersect",
            "case": result.case.to_string(),
            "components": result.components.iter().map(convex_json).collect::<Vec<_>>(),
        }),
    ))
}

fn cmd_convex(ctx: &Ctx, input: &Value, complement: bool) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let order = parse_circular(&get(input, "order")?)?;
    let set = if let Some(set_v) = input.get("set") {
        parse_convex(set_v)?
    } else {
        let members = str_list(input, "members")?;
        let refs: Vec<&str> = members.iter().map(String::as_str).collect();
        match is_convex(&order, &refs).map_err(|e| CliError::Parse(e.to_string()))? {
            Some(set) => set,
            None => {
                if ctx.format == Format::Text {
                    return Ok(ctx.text(false, "not convex"));
                }
                return Ok(ctx.render(
                    false,
                    json!({
                        "property": "convex/normal-form",
                        "witness": "the member set is not convex",
                        "members": members,
                    }),
                ));
            }
        }
    };
    let set = if complement {
        set.complement(&order)
            .map_err(|e| CliError::Parse(e.to_string()))?
    } else {
        set.normalize(&order)
            .map_err(|e| CliError::Parse(e.to_string()))?
    };
    let members = set
        .member_elements(&order)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    if ctx.format == Format::Text {
        return Ok(ctx.text(true, convex_text(&set)));
    }
    Ok(ctx.render(
        true,
        json!({
            "property": "convex/normal-form",
            "set": convex_json(&set),
            "members": members,
        }),
    ))
}

fn cmd_split(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    let order = parse_circular(&get(input, "order")?)?;
    let split_set = str_list(input, "split")?;
    let refs: Vec<&str> = split_set.iter().map(String::as_str).collect();
    let space = split_subset(&order, &refs).map_err(|e| CliError::Parse(e.to_string()))?;
    if ctx.format == Format::Dot {
        return Ok(ctx.text(true, dot_circular(space.order())));
    }
    let rules = verify_split_order_rules(&space);
    if ctx.format == Format::Text {
        let line = format!("split order: {}", space.order().elements().join(" "));
        return Ok(ctx.text(rules, line));
    }
    Ok(ctx.render(
        rules,
        json!({
            "property": "split/structure",
            "order": circular_json(space.order()),
            "split_set": space.split_set(),
            "projection": map_json(space.projection()),
            "rules_ok": rules,
        }),
    ))
}

fn cmd_lexprod(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    let left = parse_circular(&get(input, "left")?)?;
    let right = parse_linear(&get(input, "right")?)?;
    let product =
        lex_product_circular(&left, &right).map_err(|e| CliError::Parse(e.to_string()))?;
    if ctx.format == Format::Dot {
        return Ok(ctx.text(true, dot_circular(product.order())));
    }
    let clauses = verify_lex_clauses(&product).map_err(|e| CliError::Parse(e.to_string()))?;
    if ctx.format == Format::Text {
        return Ok(ctx.text(
            clauses,
            format!("product: {}", product.order().elements().join(" ")),
        ));
    }
    Ok(ctx.render(
        clauses,
        json!({
            "property": "split/lex-product",
            "order": circular_json(product.order()),
            "pairs": product.components(),
            "clauses_ok": clauses,
        }),
    ))
}

fn cmd_starcover(ctx: &Ctx, input: &Value, refine: bool) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let order = parse_circular(&get(input, "order")?)?;
    let cycle = str_list(input, "cycle")?;
    let refs: Vec<&str> = cycle.iter().map(String::as_str).collect();
    let cover = star_cover(&order, &refs).map_err(from_completion_err)?;
    let covers = cover.covers(&order);
    if refine {
        let refined = star_refine(&order, &refs).map_err(from_completion_err)?;
        let refined_refs: Vec<&str> = refined.iter().map(String::as_str).collect();
        let fine = star_cover(&order, &refined_refs).map_err(from_completion_err)?;
        let ok = covers && fine.star_refines(&cover);
        if ctx.format == Format::Text {
            return Ok(ctx.text(ok, format!("refined: {}", refined.join(" "))));
        }
        return Ok(ctx.render(
            ok,
            json!({
                "property": "completion/star-covers",
                "cycle": cover.cycle(),
                "refined": refined,
                "star_refines": fine.star_refines(&cover),
            }),
        ));
    }
    if ctx.format == Format::Text {
        let parts: Vec<String> = cover.members().iter().map(convex_text).collect();
        return Ok(ctx.text(covers, format!("members: {}", parts.join(", "))));
    }
    Ok(ctx.render(
        covers,
        json!({
            "property": "completion/star-covers",
            "cycle": cover.cycle(),
            "members": cover.members().iter().map(convex_json).collect::<Vec<_>>(),
            "covers": covers,
        }),
    ))
}

fn point_cut(host: &FiniteCircularOrder, z: &str) -> Result<Cut, CliError> {
    let r = host.rank(z).map_err(|e| CliError::Parse(e.to_string()))?;
    let n = host.len();
    let walk: Vec<String> = (0..n)
        .map(|d| host.element((r + d) % n).to_string())
        .collect();
    let chain =
        FiniteLinearOrder::from_elements(walk).map_err(|e| CliError::Parse(e.to_string()))?;
    Cut::new(host.clone(), chain).map_err(|e| CliError::Parse(e.to_string()))
}

fn cmd_novak_compare(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let order = parse_circular(&get(input, "order")?)?;
    let (cuts, host_bracket): (Vec<Cut>, Option<bool>) = if input.get("points").is_some() {
        let points = str_list(input, "points")?;
        let [a, b, c]: [String; 3] = points
            .try_into()
            .map_err(|_| CliError::Parse("`points` must list three elements".into()))?;
        let host = order
            .bracket(&a, &b, &c)
            .map_err(|e| CliError::Parse(e.to_string()))?;
        (
            vec![
                point_cut(&order, &a)?,
                point_cut(&order, &b)?,
                point_cut(&order, &c)?,
            ],
            Some(host),
        )
    } else {
        let chains = get(input, "chains")?;
        let chains = chains
            .as_array()
            .ok_or_else(|| CliError::Parse("`chains` must be an array".into()))?;
        if chains.len() != 3 {
            return Err(CliError::Parse("`chains` must list three cuts".into()));
        }
        let mut cuts = Vec::with_capacity(3);
        for chain_v in chains {
            let walk = string_list(chain_v)?;
            let chain = FiniteLinearOrder::from_elements(walk)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            cuts.push(
                Cut::new(order.clone(), chain).map_err(|e| CliError::Parse(e.to_string()))?,
            );
        }
        (cuts, None)
    };
    let result = novak_bracket(&cuts[0], &cuts[1], &cuts[2]).map_err(from_completion_err)?;
    let bracket = result.is_some();
    let classes: Vec<String> = cuts
        .iter()
        .map(|c| match classify_cut(c) {
            Ok(CutClass::PointCut(z)) => format!("point cut at {z}"),
            Ok(CutClass::Gap) => "gap".to_string(),
            Err(e) => e.to_string(),
        })
        .collect();
    let agree = host_bracket.is_none_or(|h| h == bracket);
    if ctx.format == Format::Text {
        let line = match host_bracket {
            Some(h) => format!("bracket: {bracket} (host: {h})"),
            None => format!("bracket: {bracket}"),
        };
        return Ok(ctx.text(agree, line));
    }
    let mut body = json!({
        "property": "completion/novak",
        "bracket": bracket,
        "cuts": classes,
    });
    if let Some(triple) = result {
        let w = triple.witness();
        body["blocks"] = json!({ "a": w.a, "b": w.b, "d": w.d });
        body["verified"] = json!(triple.verify());
    }
    if let Some(h) = host_bracket {
        body["host_bracket"] = json!(h);
        if !agree {
            body["witness"] = json!("cut bracket disagrees with the host bracket");
        }
    }
    Ok(ctx.render(agree, body))
}

fn cmd_invlimit(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    let order = parse_circular(&get(input, "order")?)?;
    let supports_v = get(input, "supports")?;
    let supports_v = supports_v
        .as_array()
        .ok_or_else(|| CliError::Parse("`supports` must be an array".into()))?;
    let mut supports = Vec::with_capacity(supports_v.len());
    for s in supports_v {
        supports.push(string_list(s)?);
    }
    let system = build_quotient_system(&order, &supports).map_err(from_completion_err)?;
    if ctx.format == Format::Dot {
        return Ok(ctx.text(true, dot_quotient_system(&system)));
    }
    match inverse_limit_threads(&system) {
        Ok(limit) => {
            let threads: Vec<Vec<String>> = limit
                .threads()
                .iter()
                .map(|coords| {
                    coords
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| system.quotient(i).element(c).to_string())
                        .collect()
                })
                .collect();
            let same = limit.order().equivalent(&order);
            if ctx.format == Format::Text {
                return Ok(ctx.text(
                    same,
                    format!("cofinal: limit {}", limit.order().elements().join(" ")),
                ));
            }
            Ok(ctx.render(
                same,
                json!({
                    "property": "completion/inverse-limits",
                    "cofinal": true,
                    "limit": circular_json(limit.order()),
                    "matches_host": same,
                    "supports": (0..system.support_count()).map(|i| system.support(i)).collect::<Vec<_>>(),
                    "threads": threads,
                }),
            ))
        }
        Err(CompletionError::NotCofinal) => {
            if ctx.format == Format::Text {
                return Ok(ctx.text(true, "not cofinal"));
            }
            Ok(ctx.render(
                true,
                json!({
                    "property": "completion/inverse-limits",
                    "cofinal": false,
                    "supports": (0..system.support_count()).map(|i| system.support(i)).collect::<Vec<_>>(),
                }),
            ))
        }
        Err(e) => Err(from_completion_err(e)),
    }
}

fn cmd_variation(ctx: &Ctx, input: &Value, lift: Option<String>) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    if input.get("space").is_some() {
        let f = parse_metric_function(input)?;
        let report = match f.domain() {
            Host::Circular(_) => variation_circular_metric(&f).map_err(from_variation_err)?,
            Host::Linear(_) => variation_linear_metric(&f).map_err(from_variation_err)?,
        };
        let mut body = json!({
            "property": "variation/closed-form",
            "variation": variation_json(&report),
            "function": io::metric_function_json(&f),
        });
        let mut pass = true;
        if let Some(c) = lift {
            let bounds = cyclord_core::variation::lift_variation_bounds_metric(&f, &c)
                .map_err(from_variation_err)?;
            pass = bounds.ok;
            body["lift"] = json!({
                "chain": print_rational(&bounds.chain_variation),
                "circular": print_rational(&bounds.circular_variation),
                "diameter": print_rational(&bounds.diameter),
                "ok": bounds.ok,
            });
        }
        if ctx.format == Format::Text {
            return Ok(ctx.text(
                pass,
                format!(
                    "variation {} over {}",
                    print_rational(&report.value),
                    report.witness.join(" ")
                ),
            ));
        }
        return Ok(ctx.render(pass, body));
    }
    let f = parse_function(input)?;
    let report = match f.domain() {
        Host::Circular(_) => variation_circular(&f).map_err(from_variation_err)?,
        Host::Linear(_) => variation_linear(&f).map_err(from_variation_err)?,
    };
    let mut pass = true;
    let mut body = json!({
        "property": "variation/closed-form",
        "variation": variation_json(&report),
    });
    if let Some(c) = lift {
        let bounds = lift_variation_bounds(&f, &c).map_err(from_variation_err)?;
        pass = bounds.ok;
        body["lift"] = json!({
            "chain": print_rational(&bounds.chain_variation),
            "circular": print_rational(&bounds.circular_variation),
            "diameter": print_rational(&bounds.diameter),
            "ok": bounds.ok,
        });
    }
    if ctx.format == Format::Text {
        return Ok(ctx.text(
            pass,
            format!(
                "variation {} over {}",
                print_rational(&report.value),
                report.witness.join(" ")
            ),
        ));
    }
    Ok(ctx.render(pass, body))
}

fn cmd_jordan(ctx: &Ctx, input: &Value) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let f = parse_function(input)?;
    let (u, v) = jordan_decompose(&f).map_err(from_variation_err)?;
    let total = variation_linear(&f).map_err(from_variation_err)?;
    let n = f.domain().len();
    let recomposed = (0..n).all(|i| &(u.value(i) - v.value(i)) == f.value(i));
    let top_matches = n == 0 || u.value(n - 1) == &total.value;
    let pass = recomposed && top_matches;
    if ctx.format == Format::Text {
        return Ok(ctx.text(
            pass,
            format!(
                "u top {}; f = u - v: {recomposed}",
                print_rational(&total.value)
            ),
        ));
    }
    Ok(ctx.render(
        pass,
        json!({
            "property": "variation/jordan",
            "u": function_json(&u),
            "v": function_json(&v),
            "variation": print_rational(&total.value),
            "recomposes": recomposed,
        }),
    ))
}

fn cmd_oscillation(ctx: &Ctx, input: &Value, epsilon: &str) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let f = parse_function(input)?;
    let eps = parse_rational(epsilon)?;
    let pieces = oscillation_decompose(&f, &eps).map_err(from_variation_err)?;
    let total = variation_linear(&f).map_err(from_variation_err)?;
    let bound = (&total.value / &eps).floor().to_integer() + BigInt::from(1);
    let within = BigInt::from(pieces.len()) <= bound;
    // Per-piece variation must stay within epsilon.
    let mut piecewise_ok = true;
    for piece in &pieces {
        let mut acc = BigRational::zero();
        for w in piece.windows(2) {
            let a = f.value_of(&w[0]).map_err(from_variation_err)?;
            let b = f.value_of(&w[1]).map_err(from_variation_err)?;
            acc += (a - b).abs();
        }
        piecewise_ok &= acc <= eps;
    }
    let pass = within && piecewise_ok;
    if ctx.format == Format::Text {
        return Ok(ctx.text(
            pass,
            format!("pieces {} <= bound {bound}", pieces.len()),
        ));
    }
    Ok(ctx.render(
        pass,
        json!({
            "property": "variation/oscillation",
            "epsilon": print_rational(&eps),
            "pieces": pieces,
            "count": pieces.len(),
            "bound": bound.to_string(),
            "piecewise_ok": piecewise_ok,
        }),
    ))
}

fn cmd_helly(ctx: &Ctx, input: &Value, depth: usize) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let functions_v = get(input, "functions")?;
    let functions_v = functions_v
        .as_array()
        .ok_or_else(|| CliError::Parse("`functions` must be an array".into()))?;
    let mut members = Vec::with_capacity(functions_v.len());
    for f in functions_v {
        members.push(parse_function(f)?);
    }
    let periodic = input
        .get("periodic")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let seq = if periodic {
        FunctionSequence::periodic(members).map_err(from_variation_err)?
    } else {
        FunctionSequence::finite(members).map_err(from_variation_err)?
    };
    let selected = match helly_select(&seq, depth) {
        Ok(s) => s,
        Err(VariationError::InsufficientSurvivors { needed, found }) => {
            let body = json!({
                "property": "variation/helly",
                "witness": format!("only {found} indices survive selection, {needed} requested"),
            });
            return Ok(if ctx.format == Format::Text {
                ctx.text(false, format!("selection failed: {found} < {needed}"))
            } else {
                ctx.render(false, body)
            });
        }
        Err(e) => return Err(from_variation_err(e)),
    };
    let n = seq.domain().len();
    let constant = !selected.is_empty() && (0..n).all(|p| {
        selected
            .iter()
            .all(|&i| seq.member(i).value(p) == seq.member(selected[0]).value(p))
    });
    if ctx.format == Format::Text {
        let ids: Vec<String> = selected.iter().map(usize::to_string).collect();
        return Ok(ctx.text(
            constant,
            format!(
                "selected {} ({})",
                ids.join(" "),
                if constant { "pointwise constant" } else { "NOT constant" }
            ),
        ));
    }
    Ok(ctx.render(
        constant,
        json!({
            "property": "variation/helly",
            "depth": depth,
            "selected": selected,
            "pointwise_constant": constant,
        }),
    ))
}

fn cmd_independence(
    ctx: &Ctx,
    input: &Value,
    max_depth: usize,
    bound: Option<String>,
) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let functions_v = get(input, "functions")?;
    let functions_v = functions_v
        .as_array()
        .ok_or_else(|| CliError::Parse("`functions` must be an array".into()))?;
    let mut family = Vec::with_capacity(functions_v.len());
    for f in functions_v {
        family.push(parse_function(f)?);
    }
    let tame = if let Some(r) = bound {
        let config = TameConfig::new(parse_rational(&r)?);
        Some(bv_family_tame_check(&family, &config).map_err(from_variation_err)?)
    } else {
        None
    };
    let budget = ctx.budget_or(DEFAULT_ENUM_BUDGET);
    let (depth, thresholds) =
        independence_depth(&family, max_depth, budget).map_err(from_variation_err)?;
    if ctx.format == Format::Text {
        let at = thresholds
            .as_ref()
            .map(|(a, b)| format!(" at ({}, {})", print_rational(a), print_rational(b)))
            .unwrap_or_default();
        return Ok(ctx.text(true, format!("depth {depth}{at}")));
    }
    let mut body = json!({
        "property": "variation/independence",
        "depth": depth,
        "thresholds": thresholds
            .map(|(a, b)| json!([print_rational(&a), print_rational(&b)])),
    });
    if let Some(t) = tame {
        body["tame"] = json!(t);
    }
    Ok(ctx.render(true, body))
}

fn parse_angle(s: &str) -> Result<IrrationalAngle, CliError> {
    IrrationalAngle::parse(s).map_err(from_sturmian_err)
}

fn parse_split_spec(spec: &Option<String>) -> Result<Vec<i64>, CliError> {
    match spec {
        None => Ok(Vec::new()),
        Some(s) => Ok(parse_index_spec(s)?),
    }
}

fn endpoint_text(e: &ArcEndpoint) -> String {
    match e {
        ArcEndpoint::Rational(r) => print_rational(r),
        ArcEndpoint::Orbit(1) => "alpha".to_string(),
        ArcEndpoint::Orbit(n) => format!("{n}alpha"),
    }
}

fn cmd_sturmian(ctx: &Ctx, cmd: &SturmianCmd) -> Result<Report, CliError> {
    match cmd {
        SturmianCmd::Cycle {
            alpha,
            indices,
            split,
        } => {
            let angle = parse_angle(alpha)?;
            let indices = parse_index_spec(indices)?;
            let split = parse_split_spec(split)?;
            let cycle = orbit_cycle(&angle, &indices, &split).map_err(from_sturmian_err)?;
            if ctx.format == Format::Dot {
                return Ok(ctx.text(true, dot_circular(cycle.order())));
            }
            if ctx.format == Format::Text {
                return Ok(ctx.text(true, cycle.order().elements().join(" ")));
            }
            Ok(ctx.render(
                true,
                json!({
                    "property": "sturmian/cycle",
                    "alpha": angle.to_string(),
                    "order": circular_json(cycle.order()),
                }),
            ))
        }
        SturmianCmd::Code {
            alpha,
            arc,
            indices,
        } => {
            no_dot(ctx.format)?;
            let angle = parse_angle(alpha)?;
            let (start_s, end_s) = arc
                .split_once(':')
                .ok_or_else(|| CliError::Parse("arc must be `start:end`".into()))?;
            let start = parse_arc_endpoint(start_s)?;
            let end = parse_arc_endpoint(end_s)?;
            let indices = parse_index_spec(indices)?;
            let word = code_word(&angle, &start, &end, &indices).map_err(from_sturmian_err)?;
            if ctx.format == Format::Text {
                return Ok(ctx.text(true, word));
            }
            // The same arc coded on the orbit cycle has circular variation
            // at most 2; report it alongside the word.
            let cycle = orbit_cycle(&angle, &indices, &[]).map_err(from_sturmian_err)?;
            let coded = sturmian_code(&cycle, &start, &end).map_err(from_sturmian_err)?;
            let variation = variation_circular(&coded).map_err(from_variation_err)?;
            Ok(ctx.render(
                true,
                json!({
                    "property": "sturmian/code",
                    "alpha": angle.to_string(),
                    "arc": [endpoint_text(&start), endpoint_text(&end)],
                    "indices": indices,
                    "word": word,
                    "circular_variation": print_rational(&variation.value),
                }),
            ))
        }
        SturmianCmd::Compare { alpha, m, n } => {
            no_dot(ctx.format)?;
            let angle = parse_angle(alpha)?;
            let ordering = match ctx.budget {
                Some(b) => compare_orbit_budgeted(&angle, *m, *n, &BigInt::from(b))
                    .map_err(from_sturmian_err)?,
                None => compare_orbit(&angle, *m, *n).map_err(from_sturmian_err)?,
            };
            let word = match ordering {
                Ordering::Less => "less",
                Ordering::Greater => "greater",
                Ordering::Equal => "equal",
            };
            if ctx.format == Format::Text {
                return Ok(ctx.text(true, word));
            }
            Ok(ctx.render(
                true,
                json!({
                    "property": "sturmian/compare",
                    "alpha": angle.to_string(),
                    "m": m,
                    "n": n,
                    "order": word,
                }),
            ))
        }
        SturmianCmd::Act {
            alpha,
            indices,
            split,
            shift,
        } => {
            let angle = parse_angle(alpha)?;
            let indices = parse_index_spec(indices)?;
            let split = parse_split_spec(split)?;
            let cycle = orbit_cycle(&angle, &indices, &split).map_err(from_sturmian_err)?;
            let (target, map) = rotation_action(&cycle, *shift).map_err(from_sturmian_err)?;
            if ctx.format == Format::Dot {
                return Ok(ctx.text(true, dot_circular(target.order())));
            }
            if ctx.format == Format::Text {
                let pairs: Vec<String> = map
                    .pairs()
                    .into_iter()
                    .map(|(x, y)| format!("{x} -> {y}"))
                    .collect();
                return Ok(ctx.text(true, pairs.join(", ")));
            }
            Ok(ctx.render(
                true,
                json!({
                    "property": "sturmian/act",
                    "alpha": angle.to_string(),
                    "shift": shift,
                    "map": map_json(&map),
                }),
            ))
        }
    }
}

fn cmd_sweep(ctx: &Ctx, suite: &str, n_max: Option<usize>) -> Result<Report, CliError> {
    no_dot(ctx.format)?;
    let outcomes: Vec<SweepOutcome> = if suite == "all" {
        run_all(ctx.seed, n_max)
    } else {
        match run_suite(suite, ctx.seed, n_max) {
            Some(o) => vec![o],
            None => {
                let known: Vec<&str> = SUITES.iter().map(|(id, _)| *id).collect();
                return Err(CliError::Parse(format!(
                    "unknown suite `{suite}`; known: {}",
                    known.join(", ")
                )));
            }
        }
    };
    let pass = outcomes.iter().all(|o| o.pass);
    if ctx.format == Format::Json {
        return Ok(ctx.render(
            pass,
            json!({
                "n_max": n_max,
                "outcomes": outcomes
                    .iter()
                    .map(|o| json!({
                        "id": o.id,
                        "pass": o.pass,
                        "cases": o.cases,
                        "details": o.details,
                    }))
                    .collect::<Vec<_>>(),
            }),
        ));
    }
    let mut lines = vec![format!("sweep seed={}", ctx.seed)];
    for o in &outcomes {
        lines.push(format!(
            "{:<26} {} ({} cases) {}",
            o.id,
            if o.pass { "pass" } else { "FAIL" },
            o.cases,
            o.details
        ));
    }
    Ok(ctx.text(pass, lines.join("\n")))
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let env_budget = match std::env::var("CYCLORD_BUDGET") {
        Ok(s) => Some(
            s.parse::<u64>()
                .map_err(|_| CliError::Parse(format!("CYCLORD_BUDGET must be a u64, got `{s}`")))?,
        ),
        Err(_) => None,
    };
    let is_sweep = matches!(cli.command, Command::Sweep { .. });
    let ctx = Ctx {
        budget: cli.budget.or(env_budget),
        seed: cli.seed.unwrap_or(if is_sweep { 7 } else { 0 }),
        format: cli
            .format
            .unwrap_or(if is_sweep { Format::Text } else { Format::Json }),
    };
    match &cli.command {
        Command::CheckOrder { file } => cmd_check_order(&ctx, &read_input(file)?),
        Command::CopCheck { file, via_cycles } => {
            cmd_cop_check(&ctx, &read_input(file)?, *via_cycles)
        }
        Command::Intersect { file } => cmd_intersect(&ctx, &read_input(file)?),
        Command::Convex { file, complement } => {
            cmd_convex(&ctx, &read_input(file)?, *complement)
        }
        Command::Split { file } => cmd_split(&ctx, &read_input(file)?),
        Command::Lexprod { file } => cmd_lexprod(&ctx, &read_input(file)?),
        Command::Starcover { file, refine } => cmd_starcover(&ctx, &read_input(file)?, *refine),
        Command::NovakCompare { file } => cmd_novak_compare(&ctx, &read_input(file)?),
        Command::Invlimit { file } => cmd_invlimit(&ctx, &read_input(file)?),
        Command::Variation { file, lift } => {
            cmd_variation(&ctx, &read_input(file)?, lift.clone())
        }
        Command::Jordan { file } => cmd_jordan(&ctx, &read_input(file)?),
        Command::Oscillation { file, epsilon } => {
            cmd_oscillation(&ctx, &read_input(file)?, epsilon)
        }
        Command::Helly { file, depth } => cmd_helly(&ctx, &read_input(file)?, *depth),
        Command::Independence {
            file,
            max_depth,
            bound,
        } => cmd_independence(&ctx, &read_input(file)?, *max_depth, bound.clone()),
        Command::Sturmian { cmd } => cmd_sturmian(&ctx, cmd),
        Command::Sweep { suite, n_max } => cmd_sweep(&ctx, suite, *n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            println!("{}", report.body);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}
