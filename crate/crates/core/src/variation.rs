//! Exact bounded-variation calculus: variation over chains and cycles,
//! Jordan decomposition, lift bounds through the split chain, oscillation
//! partitions, selection of pointwise-stable subsequences, and the
//! independence search behind the tameness check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::maps::{Host, MapError};
use crate::order::{FiniteCircularOrder, FiniteLinearOrder, OrderError};
use crate::split::{single_split, SplitError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VariationError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error("expected a {0} domain")]
    WrongDomainKind(&'static str),
    #[error("value list does not match the domain size")]
    LengthMismatch,
    #[error("no value for element `{0}`")]
    MissingValue(String),
    #[error("invalid metric: {0}")]
    MetricInvalid(&'static str),
    #[error("metric point index out of range")]
    PointOutOfRange,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("sequence has no members")]
    EmptySequence,
    #[error("only {found} indices survive selection, {needed} requested")]
    InsufficientSurvivors { needed: usize, found: usize },
    #[error("functions live on different domains")]
    DomainMismatch,
    #[error("search needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("member {index} rejected at the bounded-variation precondition: variation {variation} exceeds {bound}")]
    NotBoundedVariation {
        index: usize,
        variation: String,
        bound: String,
    },
}

/// A finite metric space with exact rational distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<BigRational>>,
}

impl RationalMetricSpace {
    pub fn new(
        labels: Vec<String>,
        dist: Vec<Vec<BigRational>>,
    ) -> Result<Self, VariationError> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(VariationError::MetricInvalid("matrix is not square"));
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(VariationError::MetricInvalid("nonzero diagonal"));
            }
            for j in 0..n {
                if dist[i][j].is_negative() {
                    return Err(VariationError::MetricInvalid("negative distance"));
                }
                if dist[i][j] != dist[j][i] {
                    return Err(VariationError::MetricInvalid("not symmetric"));
                }
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(VariationError::MetricInvalid(
                            "triangle inequality fails",
                        ));
                    }
                }
            }
        }
        Ok(RationalMetricSpace { labels, dist })
    }

    /// Points on the rational line with the absolute-value metric.
    pub fn from_line_points(values: &[BigRational]) -> Self {
        let labels = values.iter().map(|v| v.to_string()).collect();
        let dist = values
            .iter()
            .map(|a| values.iter().map(|b| (a - b).abs()).collect())
            .collect();
        RationalMetricSpace { labels, dist }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn dist(&self, i: usize, j: usize) -> &BigRational {
        &self.dist[i][j]
    }

    pub fn diameter(&self) -> BigRational {
        self.dist
            .iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }
}

/// A rational-valued function sampled on every element of a finite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledFunction {
    domain: Host,
    values: Vec<BigRational>,
}

impl SampledFunction {
    pub fn circular(
        order: FiniteCircularOrder,
        values: Vec<BigRational>,
    ) -> Result<Self, VariationError> {
        if values.len() != order.len() {
            return Err(VariationError::LengthMismatch);
        }
        Ok(SampledFunction {
            domain: Host::Circular(order),
            values,
        })
    }

    pub fn linear(
        order: FiniteLinearOrder,
        values: Vec<BigRational>,
    ) -> Result<Self, VariationError> {
        if values.len() != order.len() {
            return Err(VariationError::LengthMismatch);
        }
        Ok(SampledFunction {
            domain: Host::Linear(order),
            values,
        })
    }

    pub fn from_named(
        domain: Host,
        named: &[(String, BigRational)],
    ) -> Result<Self, VariationError> {
        let mut values = vec![None; domain.len()];
        for (name, v) in named {
            let r = domain.rank(name)?;
            values[r] = Some(v.clone());
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(r, v)| v.ok_or_else(|| VariationError::MissingValue(domain.element(r).to_string())))
            .collect::<Result<_, _>>()?;
        Ok(SampledFunction { domain, values })
    }

    pub fn domain(&self) -> &Host {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, rank: usize) -> &BigRational {
        &self.values[rank]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value_of(&self, element: &str) -> Result<&BigRational, VariationError> {
        Ok(&self.values[self.domain.rank(element)?])
    }

    /// Smallest interval containing the image, as (min, max).
    pub fn value_hull(&self) -> (BigRational, BigRational) {
        let min = self.values.iter().min().cloned().unwrap_or_else(BigRational::zero);
        let max = self.values.iter().max().cloned().unwrap_or_else(BigRational::zero);
        (min, max)
    }
}

/// A function into a metric space, stored as point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSampledFunction {
    domain: Host,
    space: RationalMetricSpace,
    points: Vec<usize>,
}

impl MetricSampledFunction {
    pub fn new(
        domain: Host,
        space: RationalMetricSpace,
        points: Vec<usize>,
    ) -> Result<Self, VariationError> {
        if points.len() != domain.len() {
            return Err(VariationError::LengthMismatch);
        }
        if points.iter().any(|&p| p >= space.len()) {
            return Err(VariationError::PointOutOfRange);
        }
        Ok(MetricSampledFunction {
            domain,
            space,
            points,
        })
    }

    pub fn domain(&self) -> &Host {
        &self.domain
    }

    pub fn space(&self) -> &RationalMetricSpace {
        &self.space
    }

    pub fn point(&self, rank: usize) -> usize {
        self.points[rank]
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    fn step(&self, i: usize, j: usize) -> BigRational {
        self.space.dist[self.points[i]][self.points[j]].clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationReport {
    pub value: BigRational,
    /// The chain (or cycle, when `closed`) achieving the value, in walk order.
    pub witness: Vec<String>,
    pub closed: bool,
}

fn line_step(values: &[BigRational], i: usize, j: usize) -> BigRational {
    (&values[i] - &values[j]).abs()
}

fn chain_report<F: Fn(usize, usize) -> BigRational>(
    domain: &Host,
    step: F,
) -> Result<VariationReport, VariationError> {
    let Host::Linear(order) = domain else {
        return Err(VariationError::WrongDomainKind("linear"));
    };
    let n = order.len();
    let mut total = BigRational::zero();
    for i in 1..n {
        total += step(i - 1, i);
    }
    Ok(VariationReport {
        value: total,
        witness: order.elements().to_vec(),
        closed: false,
    })
}

fn cycle_report<F: Fn(usize, usize) -> BigRational>(
    domain: &Host,
    step: F,
) -> Result<VariationReport, VariationError> {
    let Host::Circular(order) = domain else {
        return Err(VariationError::WrongDomainKind("circular"));
    };
    let n = order.len();
    let mut total = BigRational::zero();
    if n > 1 {
        for i in 1..n {
            total += step(i - 1, i);
        }
        total += step(n - 1, 0);
    }
    Ok(VariationReport {
        value: total,
        witness: order.elements().to_vec(),
        closed: true,
    })
}

/// Variation over a chain: the full-chain sum, which the triangle inequality
/// makes the supremum over all chains.
pub fn variation_linear(f: &SampledFunction) -> Result<VariationReport, VariationError> {
    chain_report(&f.domain, |i, j| line_step(&f.values, i, j))
}

/// Variation around a cycle: the full-cycle sum including the closing step.
pub fn variation_circular(f: &SampledFunction) -> Result<VariationReport, VariationError> {
    cycle_report(&f.domain, |i, j| line_step(&f.values, i, j))
}

pub fn variation_linear_metric(
    f: &MetricSampledFunction,
) -> Result<VariationReport, VariationError> {
    chain_report(&f.domain, |i, j| f.step(i, j))
}

pub fn variation_circular_metric(
    f: &MetricSampledFunction,
) -> Result<VariationReport, VariationError> {
    cycle_report(&f.domain, |i, j| f.step(i, j))
}

/// Write a chain function as a difference of two nondecreasing ones:
/// `u` is the running variation (0 at the bottom) and `v = u − f`.
pub fn jordan_decompose(
    f: &SampledFunction,
) -> Result<(SampledFunction, SampledFunction), VariationError> {
    let Host::Linear(order) = &f.domain else {
        return Err(VariationError::WrongDomainKind("linear"));
    };
    let n = order.len();
    let mut u = Vec::with_capacity(n);
    let mut acc = BigRational::zero();
    for i in 0..n {
        if i > 0 {
            acc += line_step(&f.values, i - 1, i);
        }
        u.push(acc.clone());
    }
    let v: Vec<BigRational> = u.iter().zip(&f.values).map(|(a, b)| a - b).collect();
    debug_assert!(u.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(v.windows(2).all(|w| w[0] <= w[1]));
    Ok((
        SampledFunction {
            domain: f.domain.clone(),
            values: u,
        },
        SampledFunction {
            domain: f.domain.clone(),
            values: v,
        },
    ))
}

/// Transport a circular-domain function onto the split chain at `c`:
/// the chain walks c⁻, then the rest of the cycle, then c⁺, and both split
/// labels carry the value at `c`.
pub fn split_circular_function(
    f: &SampledFunction,
    c: &str,
) -> Result<SampledFunction, VariationError> {
    let Host::Circular(order) = &f.domain else {
        return Err(VariationError::WrongDomainKind("circular"));
    };
    let split = single_split(order, c)?;
    let chain = split.chain().clone();
    let values: Vec<BigRational> = (0..chain.len())
        .map(|i| f.values[split.projection().image_rank(i)].clone())
        .collect();
    Ok(SampledFunction {
        domain: Host::Linear(chain),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftBounds {
    pub chain_variation: BigRational,
    pub circular_variation: BigRational,
    pub diameter: BigRational,
    pub ok: bool,
}

fn lift_bounds_from(
    chain: BigRational,
    circ: BigRational,
    diameter: BigRational,
) -> LiftBounds {
    let upper = &chain + &diameter;
    let ok = chain <= circ && circ <= upper;
    LiftBounds {
        chain_variation: chain,
        circular_variation: circ,
        diameter,
        ok,
    }
}

/// Compare the circular variation with the variation of the lift to the
/// split chain at `c`; the two can differ by at most the codomain diameter
/// (here the diameter of the value hull).
pub fn lift_variation_bounds(
    f: &SampledFunction,
    c: &str,
) -> Result<LiftBounds, VariationError> {
    let lifted = split_circular_function(f, c)?;
    let chain = variation_linear(&lifted)?.value;
    let circ = variation_circular(f)?.value;
    let (min, max) = f.value_hull();
    Ok(lift_bounds_from(chain, circ, max - min))
}

pub fn lift_variation_bounds_metric(
    f: &MetricSampledFunction,
    c: &str,
) -> Result<LiftBounds, VariationError> {
    let Host::Circular(order) = &f.domain else {
        return Err(VariationError::WrongDomainKind("circular"));
    };
    let split = single_split(order, c)?;
    let chain_order = split.chain().clone();
    let points: Vec<usize> = (0..chain_order.len())
        .map(|i| f.points[split.projection().image_rank(i)])
        .collect();
    let lifted =
        MetricSampledFunction::new(Host::Linear(chain_order), f.space.clone(), points)?;
    let chain = variation_linear_metric(&lifted)?.value;
    let circ = variation_circular_metric(f)?.value;
    Ok(lift_bounds_from(chain, circ, f.space.diameter()))
}

/// Greedy left-to-right partition of a chain into consecutive pieces whose
/// internal variation stays within ε; the count is at most ⌊Υ/ε⌋ + 1.
pub fn oscillation_decompose(
    f: &SampledFunction,
    epsilon: &BigRational,
) -> Result<Vec<Vec<String>>, VariationError> {
    if !epsilon.is_positive() {
        return Err(VariationError::NonPositiveEpsilon);
    }
    let Host::Linear(order) = &f.domain else {
        return Err(VariationError::WrongDomainKind("linear"));
    };
    let n = order.len();
    let mut pieces = Vec::new();
    let mut piece = Vec::new();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if !piece.is_empty() {
            let step = line_step(&f.values, i - 1, i);
            if &acc + &step > *epsilon {
                pieces.push(std::mem::take(&mut piece));
                acc = BigRational::zero();
            } else {
                acc += step;
            }
        }
        piece.push(order.element(i).to_string());
    }
    if !piece.is_empty() {
        pieces.push(piece);
    }
    Ok(pieces)
}

/// A sequence of functions over one domain; `periodic` sequences repeat
/// their members forever, which is how a lazily extended sequence is modeled
/// at finite scale.
#[derive(Debug, Clone)]
pub struct FunctionSequence {
    members: Vec<SampledFunction>,
    periodic: bool,
}

impl FunctionSequence {
    fn validated(
        members: Vec<SampledFunction>,
        periodic: bool,
    ) -> Result<Self, VariationError> {
        if members.is_empty() {
            return Err(VariationError::EmptySequence);
        }
        if members.iter().any(|m| m.domain != members[0].domain) {
            return Err(VariationError::DomainMismatch);
        }
        Ok(FunctionSequence { members, periodic })
    }

    pub fn finite(members: Vec<SampledFunction>) -> Result<Self, VariationError> {
        Self::validated(members, false)
    }

    pub fn periodic(members: Vec<SampledFunction>) -> Result<Self, VariationError> {
        Self::validated(members, true)
    }

    pub fn base_len(&self) -> usize {
        self.members.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn member(&self, i: usize) -> &SampledFunction {
        if self.periodic {
            &self.members[i % self.members.len()]
        } else {
            &self.members[i]
        }
    }

    pub fn domain(&self) -> &Host {
        self.members[0].domain()
    }

    /// How far selection looks: periodic sequences are consulted for
    /// depth + 1 full periods so that every member pattern recurs often
    /// enough to be selectable.
    pub fn horizon(&self, depth: usize) -> usize {
        if self.periodic {
            self.members.len() * (depth + 1)
        } else {
            self.members.len()
        }
    }
}

/// Select `depth` indices whose members agree at every domain point.
///
/// At each point, in rank order, the attained interval is bisected and the
/// half holding the majority of the surviving indices is kept (ties to the
/// lower half) until the survivors' values there coincide; the result is the
/// first `depth` survivors. On a periodic sequence this always succeeds.
pub fn helly_select(
    seq: &FunctionSequence,
    depth: usize,
) -> Result<Vec<usize>, VariationError> {
    let horizon = seq.horizon(depth);
    let mut survivors: Vec<usize> = (0..horizon).collect();
    let n_points = seq.domain().len();
    // Attained hull across the whole (finite-horizon) sequence.
    let mut lo_all: Option<BigRational> = None;
    let mut hi_all: Option<BigRational> = None;
    for i in 0..seq.base_len() {
        let (mn, mx) = seq.member(i).value_hull();
        lo_all = Some(lo_all.map_or(mn.clone(), |v| v.min(mn)));
        hi_all = Some(hi_all.map_or(mx.clone(), |v| v.max(mx)));
    }
    let (hull_lo, hull_hi) = (lo_all.unwrap(), hi_all.unwrap());
    let two = BigRational::from_integer(BigInt::from(2));
    for p in 0..n_points {
        let mut lo = hull_lo.clone();
        let mut hi = hull_hi.clone();
        loop {
            let first = seq.member(survivors[0]).value(p);
            if survivors.iter().all(|&i| seq.member(i).value(p) == first) {
                break;
            }
            let mid = (&lo + &hi) / &two;
            let lower: usize = survivors
                .iter()
                .filter(|&&i| *seq.member(i).value(p) <= mid)
                .count();
            if lower * 2 >= survivors.len() {
                survivors.retain(|&i| *seq.member(i).value(p) <= mid);
                hi = mid;
            } else {
                survivors.retain(|&i| *seq.member(i).value(p) > mid);
                lo = mid;
            }
        }
    }
    if survivors.len() < depth {
        return Err(VariationError::InsufficientSurvivors {
            needed: depth,
            found: survivors.len(),
        });
    }
    Ok(survivors[..depth].to_vec())
}

/// Quartile points of every gap between consecutive attained values — enough
/// candidates that any realizable strict threshold pair is represented.
fn threshold_candidates(family: &[&SampledFunction]) -> Vec<BigRational> {
    let mut attained: Vec<BigRational> = family
        .iter()
        .flat_map(|f| f.values.iter().cloned())
        .collect();
    attained.sort();
    attained.dedup();
    let four = BigRational::from_integer(BigInt::from(4));
    let mut out = Vec::new();
    for w in attained.windows(2) {
        let gap = &w[1] - &w[0];
        for q in 1..4 {
            out.push(&w[0] + &gap * BigRational::from_integer(BigInt::from(q)) / &four);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Point set over the domain as a bitmask (one u64 per 64 points).
#[derive(Clone)]
struct PointMask(Vec<u64>);

impl PointMask {
    fn full(n: usize) -> Self {
        let words = n.div_ceil(64);
        let mut bits = vec![u64::MAX; words];
        let tail = n % 64;
        if tail != 0 {
            bits[words - 1] = (1u64 << tail) - 1;
        }
        PointMask(bits)
    }

    fn from_pred(n: usize, pred: impl Fn(usize) -> bool) -> Self {
        let mut bits = vec![0u64; n.div_ceil(64)];
        for x in 0..n {
            if pred(x) {
                bits[x / 64] |= 1 << (x % 64);
            }
        }
        PointMask(bits)
    }

    fn intersect(&self, other: &PointMask) -> PointMask {
        PointMask(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn any(&self) -> bool {
        self.0.iter().any(|&w| w != 0)
    }
}

/// All 3^k below/above patterns realizable? Recursion over slots so a dead
/// branch (an unrealizable pattern prefix) is found without enumerating its
/// extensions. Each visited node costs one budget unit.
struct PatternSearch<'a> {
    below: &'a [Vec<PointMask>],
    above: &'a [Vec<PointMask>],
    ai: usize,
    bi: usize,
}

impl PatternSearch<'_> {
    fn all_realizable(
        &self,
        subset: &[usize],
        slot: usize,
        cur: &PointMask,
        budget_left: &mut u64,
    ) -> Result<bool, VariationError> {
        if *budget_left == 0 {
            return Err(VariationError::BudgetExceeded {
                needed: 1,
                budget: 0,
            });
        }
        *budget_left -= 1;
        if !cur.any() {
            return Ok(false);
        }
        if slot == subset.len() {
            return Ok(true);
        }
        let fi = subset[slot];
        Ok(self.all_realizable(subset, slot + 1, cur, budget_left)?
            && self.all_realizable(
                subset,
                slot + 1,
                &cur.intersect(&self.below[fi][self.ai]),
                budget_left,
            )?
            && self.all_realizable(
                subset,
                slot + 1,
                &cur.intersect(&self.above[fi][self.bi]),
                budget_left,
            )?)
    }
}

/// Largest k ≤ max_depth for which some k-subset and thresholds a < b make
/// every below-a/above-b pattern realizable; (1, None) when not even a pair
/// is independent. `budget` bounds the number of search-tree nodes visited.
pub fn independence_depth(
    family: &[SampledFunction],
    max_depth: usize,
    budget: u64,
) -> Result<(usize, Option<(BigRational, BigRational)>), VariationError> {
    if family.is_empty() {
        return Ok((0, None));
    }
    if family.iter().any(|f| f.domain != family[0].domain) {
        return Err(VariationError::DomainMismatch);
    }
    let refs: Vec<&SampledFunction> = family.iter().collect();
    let candidates = threshold_candidates(&refs);
    let m = family.len();
    let n = family[0].len();
    // Per function and candidate: where it stays strictly below / above.
    let below: Vec<Vec<PointMask>> = family
        .iter()
        .map(|f| {
            candidates
                .iter()
                .map(|a| PointMask::from_pred(n, |x| f.value(x) < a))
                .collect()
        })
        .collect();
    let above: Vec<Vec<PointMask>> = family
        .iter()
        .map(|f| {
            candidates
                .iter()
                .map(|b| PointMask::from_pred(n, |x| f.value(x) > b))
                .collect()
        })
        .collect();
    let full = PointMask::full(n);
    let mut budget_left = budget;
    let spent = |left: u64| VariationError::BudgetExceeded {
        needed: budget - left + 1,
        budget,
    };
    let top = max_depth.min(m);
    for k in (2..=top).rev() {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            // Thresholds: smallest a first, then widest corridor (largest b).
            let mut hit: Option<(BigRational, BigRational)> = None;
            'search: for (ai, a) in candidates.iter().enumerate() {
                for (bi, b) in candidates.iter().enumerate().rev() {
                    if a >= b {
                        break;
                    }
                    let search = PatternSearch {
                        below: &below,
                        above: &above,
                        ai,
                        bi,
                    };
                    let ok = search
                        .all_realizable(&subset, 0, &full, &mut budget_left)
                        .map_err(|_| spent(budget_left))?;
                    if ok {
                        hit = Some((a.clone(), b.clone()));
                        break 'search;
                    }
                }
            }
            if let Some(pair) = hit {
                return Ok((k, Some(pair)));
            }
            // Next k-subset in lexicographic order.
            let mut advanced = false;
            let mut i = k;
            while i > 0 {
                i -= 1;
                if subset[i] + (k - i) < m {
                    subset[i] += 1;
                    for j in i + 1..k {
                        subset[j] = subset[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok((1, None))
}

#[derive(Debug, Clone)]
pub struct TameConfig {
    pub r: BigRational,
    pub max_depth: usize,
    /// The family is tame when the independence depth of its monotone parts
    /// stays strictly below this.
    pub threshold: usize,
    pub budget: u64,
}

impl TameConfig {
    pub fn new(r: BigRational) -> Self {
        TameConfig {
            r,
            max_depth: 4,
            threshold: 2,
            budget: 50_000_000,
        }
    }
}

/// Check a family of bounded-variation functions for tameness: verify the
/// variation bound, split circular domains at the base point, decompose each
/// member into monotone parts, and search those parts for independence.
pub fn bv_family_tame_check(
    family: &[SampledFunction],
    config: &TameConfig,
) -> Result<bool, VariationError> {
    if family.is_empty() {
        return Ok(true);
    }
    if family.iter().any(|f| f.domain != family[0].domain) {
        return Err(VariationError::DomainMismatch);
    }
    let circular = matches!(family[0].domain, Host::Circular(_));
    for (index, f) in family.iter().enumerate() {
        let report = if circular {
            variation_circular(f)?
        } else {
            variation_linear(f)?
        };
        if report.value > config.r {
            return Err(VariationError::NotBoundedVariation {
                index,
                variation: report.value.to_string(),
                bound: config.r.to_string(),
            });
        }
    }
    let mut parts = Vec::with_capacity(family.len() * 2);
    for f in family {
        let chain_f = if circular {
            let Host::Circular(order) = &f.domain else { unreachable!() };
            let base = order.element(0).to_string();
            split_circular_function(f, &base)?
        } else {
            f.clone()
        };
        let (u, v) = jordan_decompose(&chain_f)?;
        parts.push(u);
        parts.push(v);
    }
    // Subfamilies of an independent family are independent, so whether the
    // depth reaches the threshold is decided by subsets of that size alone.
    let probe = config.max_depth.min(config.threshold);
    let (depth, _) = independence_depth(&parts, probe, config.budget)?;
    Ok(depth < config.threshold)
}
