//! JSON schemas for the domain types, canonical rational text, and DOT
//! rendering. Every printer pairs with a parser such that parsing a printed
//! value reproduces it exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use cyclord_core::convex::ConvexSet;
use cyclord_core::maps::{Host, OrderMap};
use cyclord_core::order::{FiniteCircularOrder, FiniteLinearOrder, TernaryRelationTable};
use cyclord_core::sturmian::ArcEndpoint;
use cyclord_core::variation::{MetricSampledFunction, RationalMetricSpace, SampledFunction};
use cyclord_core::QuotientSystem;

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

// ---------------------------------------------------------------------------
// Rationals: canonical `p/q` (reduced, positive denominator); plain integers
// print without the denominator.

pub fn print_rational(r: &BigRational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| ParseError(format!("bad numerator in `{s}`")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| ParseError(format!("bad denominator in `{s}`")))?;
    if q.is_zero() {
        return err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(p, q))
}

// ---------------------------------------------------------------------------
// Orders.

/// A bare JSON array of strings.
pub fn string_list(v: &Value) -> Result<Vec<String>, ParseError> {
    string_array(v, "list")
}

fn string_array(v: &Value, what: &str) -> Result<Vec<String>, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError(format!("{what} must be an array")))?;
    arr.iter()
        .map(|e| {
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| ParseError(format!("{what} entries must be strings")))
        })
        .collect()
}

pub fn parse_circular(v: &Value) -> Result<FiniteCircularOrder, ParseError> {
    match parse_host(v)? {
        Host::Circular(c) => Ok(c),
        Host::Linear(_) => err("expected a circular order"),
    }
}

pub fn parse_linear(v: &Value) -> Result<FiniteLinearOrder, ParseError> {
    match parse_host(v)? {
        Host::Linear(l) => Ok(l),
        Host::Circular(_) => err("expected a linear order"),
    }
}

/// `{"kind": "circular"|"linear", "elements": [...]}` — elements listed in
/// rank order.
pub fn parse_host(v: &Value) -> Result<Host, ParseError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ParseError("order needs a `kind`".into()))?;
    let elements = string_array(
        v.get("elements")
            .ok_or_else(|| ParseError("order needs `elements`".into()))?,
        "elements",
    )?;
    match kind {
        "circular" => Ok(Host::Circular(
            FiniteCircularOrder::from_elements(elements).map_err(|e| ParseError(e.to_string()))?,
        )),
        "linear" => Ok(Host::Linear(
            FiniteLinearOrder::from_elements(elements).map_err(|e| ParseError(e.to_string()))?,
        )),
        other => err(format!("unknown order kind `{other}`")),
    }
}

pub fn host_json(host: &Host) -> Value {
    let kind = match host {
        Host::Circular(_) => "circular",
        Host::Linear(_) => "linear",
    };
    json!({ "kind": kind, "elements": host.elements() })
}

pub fn circular_json(order: &FiniteCircularOrder) -> Value {
    json!({ "kind": "circular", "elements": order.elements() })
}

/// A raw ternary relation: `{"kind": "relation", "elements": [...],
/// "triples": [["a","b","c"], ...]}`.
pub fn parse_relation(v: &Value) -> Result<TernaryRelationTable, ParseError> {
    let elements = string_array(
        v.get("elements")
            .ok_or_else(|| ParseError("relation needs `elements`".into()))?,
        "elements",
    )?;
    let triples_v = v
        .get("triples")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError("relation needs `triples`".into()))?;
    let mut triples: Vec<[String; 3]> = Vec::with_capacity(triples_v.len());
    for t in triples_v {
        let t = string_array(t, "triple")?;
        let [a, b, c]: [String; 3] = t
            .try_into()
            .map_err(|_| ParseError("triples must have three entries".into()))?;
        triples.push([a, b, c]);
    }
    let refs: Vec<[&str; 3]> = triples
        .iter()
        .map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()])
        .collect();
    TernaryRelationTable::new(elements, &refs).map_err(|e| ParseError(e.to_string()))
}

pub fn relation_json(rel: &TernaryRelationTable) -> Value {
    let elements = rel.elements();
    let triples: Vec<[&str; 3]> = rel
        .triples()
        .into_iter()
        .map(|(i, j, k)| {
            [
                elements[i].as_str(),
                elements[j].as_str(),
                elements[k].as_str(),
            ]
        })
        .collect();
    json!({ "kind": "relation", "elements": elements, "triples": triples })
}

// ---------------------------------------------------------------------------
// Convex sets.

pub fn convex_json(set: &ConvexSet) -> Value {
    match set {
        ConvexSet::Empty => json!({ "type": "empty" }),
        ConvexSet::Full => json!({ "type": "full" }),
        ConvexSet::FullMinusPoint(p) => json!({ "type": "full-minus-point", "point": p }),
        ConvexSet::Interval {
            a,
            b,
            left_closed,
            right_closed,
        } => json!({
            "type": "interval",
            "a": a,
            "b": b,
            "left_closed": left_closed,
            "right_closed": right_closed,
        }),
    }
}

pub fn parse_convex(v: &Value) -> Result<ConvexSet, ParseError> {
    let ty = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| ParseError("convex set needs a `type`".into()))?;
    let field = |name: &str| -> Result<String, ParseError> {
        v.get(name)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| ParseError(format!("convex set needs `{name}`")))
    };
    match ty {
        "empty" => Ok(ConvexSet::Empty),
        "full" => Ok(ConvexSet::Full),
        "full-minus-point" => Ok(ConvexSet::FullMinusPoint(field("point")?)),
        "interval" => {
            let lc = v.get("left_closed").and_then(Value::as_bool).unwrap_or(false);
            let rc = v.get("right_closed").and_then(Value::as_bool).unwrap_or(false);
            ConvexSet::interval(field("a")?, field("b")?, lc, rc)
                .map_err(|e| ParseError(e.to_string()))
        }
        other => err(format!("unknown convex set type `{other}`")),
    }
}

// ---------------------------------------------------------------------------
// Maps.

/// `{"domain": order, "codomain": order, "table": {"x": "f(x)", ...}}`.
pub fn parse_map(v: &Value) -> Result<OrderMap, ParseError> {
    let domain = parse_host(
        v.get("domain")
            .ok_or_else(|| ParseError("map needs a `domain`".into()))?,
    )?;
    let codomain = parse_host(
        v.get("codomain")
            .ok_or_else(|| ParseError("map needs a `codomain`".into()))?,
    )?;
    let table = v
        .get("table")
        .and_then(Value::as_object)
        .ok_or_else(|| ParseError("map needs a `table` object".into()))?;
    let mut pairs = Vec::with_capacity(table.len());
    for (k, val) in table {
        let image = val
            .as_str()
            .ok_or_else(|| ParseError("table values must be strings".into()))?;
        pairs.push((k.clone(), image.to_string()));
    }
    OrderMap::new(domain, codomain, &pairs).map_err(|e| ParseError(e.to_string()))
}

pub fn map_json(map: &OrderMap) -> Value {
    let mut table = Map::new();
    for (x, y) in map.pairs() {
        table.insert(x, Value::String(y));
    }
    json!({
        "domain": host_json(map.domain()),
        "codomain": host_json(map.codomain()),
        "table": Value::Object(table),
    })
}

// ---------------------------------------------------------------------------
// Sampled functions and metric spaces.

/// `{"domain": order, "values": {"x": "p/q", ...}}`.
pub fn parse_function(v: &Value) -> Result<SampledFunction, ParseError> {
    let domain = parse_host(
        v.get("domain")
            .ok_or_else(|| ParseError("function needs a `domain`".into()))?,
    )?;
    let values = v
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| ParseError("function needs a `values` object".into()))?;
    let mut named = Vec::with_capacity(values.len());
    for (k, val) in values {
        let s = val
            .as_str()
            .ok_or_else(|| ParseError("values must be rational strings".into()))?;
        named.push((k.clone(), parse_rational(s)?));
    }
    SampledFunction::from_named(domain, &named).map_err(|e| ParseError(e.to_string()))
}

pub fn function_json(f: &SampledFunction) -> Value {
    let mut values = Map::new();
    for (i, e) in f.domain().elements().iter().enumerate() {
        values.insert(e.clone(), Value::String(print_rational(f.value(i))));
    }
    json!({
        "domain": host_json(f.domain()),
        "values": Value::Object(values),
    })
}

/// `{"labels": [...], "dist": [["0", "1/2", ...], ...]}`.
pub fn parse_metric(v: &Value) -> Result<RationalMetricSpace, ParseError> {
    let labels = string_array(
        v.get("labels")
            .ok_or_else(|| ParseError("metric needs `labels`".into()))?,
        "labels",
    )?;
    let rows = v
        .get("dist")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError("metric needs a `dist` matrix".into()))?;
    let mut dist = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| ParseError("dist rows must be arrays".into()))?;
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let s = cell
                .as_str()
                .ok_or_else(|| ParseError("distances must be rational strings".into()))?;
            out.push(parse_rational(s)?);
        }
        dist.push(out);
    }
    RationalMetricSpace::new(labels, dist).map_err(|e| ParseError(e.to_string()))
}

pub fn metric_json(space: &RationalMetricSpace) -> Value {
    let labels: Vec<&str> = (0..space.len()).map(|i| space.label(i)).collect();
    let dist: Vec<Vec<String>> = (0..space.len())
        .map(|i| {
            (0..space.len())
                .map(|j| print_rational(space.dist(i, j)))
                .collect()
        })
        .collect();
    json!({ "labels": labels, "dist": dist })
}

pub fn metric_function_json(f: &MetricSampledFunction) -> Value {
    let mut points = Map::new();
    for (i, e) in f.domain().elements().iter().enumerate() {
        points.insert(
            e.clone(),
            Value::String(f.space().label(f.point(i)).to_string()),
        );
    }
    json!({
        "domain": host_json(f.domain()),
        "space": metric_json(f.space()),
        "points": Value::Object(points),
    })
}

/// `{"domain": order, "space": metric, "points": {"x": "label", ...}}`.
pub fn parse_metric_function(v: &Value) -> Result<MetricSampledFunction, ParseError> {
    let domain = parse_host(
        v.get("domain")
            .ok_or_else(|| ParseError("metric function needs a `domain`".into()))?,
    )?;
    let space = parse_metric(
        v.get("space")
            .ok_or_else(|| ParseError("metric function needs a `space`".into()))?,
    )?;
    let points_obj = v
        .get("points")
        .and_then(Value::as_object)
        .ok_or_else(|| ParseError("metric function needs a `points` object".into()))?;
    let label_index = |label: &str| -> Result<usize, ParseError> {
        (0..space.len())
            .find(|&i| space.label(i) == label)
            .ok_or_else(|| ParseError(format!("unknown space label `{label}`")))
    };
    let mut points = vec![usize::MAX; domain.len()];
    for (k, val) in points_obj {
        let r = domain.rank(k).map_err(|e| ParseError(e.to_string()))?;
        let label = val
            .as_str()
            .ok_or_else(|| ParseError("points must be label strings".into()))?;
        points[r] = label_index(label)?;
    }
    if points.contains(&usize::MAX) {
        return err("every domain element needs a point");
    }
    MetricSampledFunction::new(domain, space, points).map_err(|e| ParseError(e.to_string()))
}

// ---------------------------------------------------------------------------
// Sturmian helpers.

/// Comma-separated indices with inclusive ranges: `0..9,12,-3`.
pub fn parse_index_spec(spec: &str) -> Result<Vec<i64>, ParseError> {
    let mut out = Vec::new();
    for token in spec.split(',').filter(|t| !t.trim().is_empty()) {
        let token = token.trim();
        if let Some((a, b)) = token.split_once("..") {
            let a: i64 = a
                .trim()
                .parse()
                .map_err(|_| ParseError(format!("bad index `{token}`")))?;
            let b: i64 = b
                .trim()
                .parse()
                .map_err(|_| ParseError(format!("bad index `{token}`")))?;
            if b < a {
                return err(format!("empty range `{token}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(
                token
                    .parse()
                    .map_err(|_| ParseError(format!("bad index `{token}`")))?,
            );
        }
    }
    if out.is_empty() {
        return err("no indices given");
    }
    Ok(out)
}

/// `alpha`, `3alpha`, `-2alpha` (orbit multiples) or a rational, reduced
/// into [0,1).
pub fn parse_arc_endpoint(s: &str) -> Result<ArcEndpoint, ParseError> {
    let s = s.trim();
    if let Some(prefix) = s.strip_suffix("alpha") {
        let prefix = prefix.trim_end_matches('*').trim();
        let n: i64 = if prefix.is_empty() {
            1
        } else {
            prefix
                .parse()
                .map_err(|_| ParseError(format!("bad orbit multiple `{s}`")))?
        };
        return Ok(ArcEndpoint::Orbit(n));
    }
    let r = parse_rational(s)?;
    let reduced = &r - r.floor();
    Ok(ArcEndpoint::Rational(reduced))
}

// ---------------------------------------------------------------------------
// DOT rendering.

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The cyclic successor graph.
pub fn dot_circular(order: &FiniteCircularOrder) -> String {
    let n = order.len();
    let mut out = String::from("digraph cycle {\n  rankdir=LR;\n");
    for i in 0..n {
        out.push_str(&format!(
            "  {} -> {};\n",
            dot_quote(order.element(i)),
            dot_quote(order.element((i + 1) % n)),
        ));
    }
    out.push_str("}\n");
    out
}

/// The bonding diagram: one node per quotient, arrows along the covering
/// subset relation, plus the projections from the host.
pub fn dot_quotient_system(system: &QuotientSystem) -> String {
    let m = system.support_count();
    let supports: Vec<Vec<String>> = (0..m).map(|i| system.support(i)).collect();
    let subset = |a: &[String], b: &[String]| a.iter().all(|x| b.contains(x));
    let name = |i: usize| format!("{{{}}}", supports[i].join(","));
    let mut out = String::from("digraph bondings {\n  rankdir=BT;\n");
    out.push_str(&format!(
        "  host [label={}];\n",
        dot_quote(&format!("host ({} points)", system.host().len()))
    ));
    for i in 0..m {
        out.push_str(&format!(
            "  q{i} [label={}];\n",
            dot_quote(&format!("{} ({} classes)", name(i), system.quotient(i).len()))
        ));
        out.push_str(&format!("  host -> q{i} [label=\"pi\"];\n"));
    }
    // Arrows only along covering pairs; longer bondings factor through them.
    for i in 0..m {
        for j in 0..m {
            if i == j || !subset(&supports[j], &supports[i]) {
                continue;
            }
            let covered = (0..m).any(|l| {
                l != i
                    && l != j
                    && subset(&supports[j], &supports[l])
                    && subset(&supports[l], &supports[i])
            });
            if !covered {
                out.push_str(&format!("  q{i} -> q{j} [label=\"bond\"];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}
