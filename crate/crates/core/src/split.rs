//! Point-splitting constructions: doubling a subset of a circle into adjacent
//! label pairs, cutting a circle open at one point, lexicographic products,
//! and lifting automorphisms to split spaces.

use thiserror::Error;

use crate::maps::{Host, MapError, OrderMap};
use crate::order::{circ_from_linear, FiniteCircularOrder, FiniteLinearOrder, OrderError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("fiber over `{value}` has size {size}, expected {expected}")]
    FiberMismatch {
        value: String,
        size: usize,
        expected: usize,
    },
    #[error("split set not invariant: image of `{0}` leaves the set")]
    NotInvariant(String),
    #[error("projection is not circular-order preserving")]
    NotCop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplitSign {
    Minus,
    Zero,
    Plus,
}

/// A point of a split space: a host element with an optional side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitLabel {
    pub base: String,
    pub sign: SplitSign,
}

impl SplitLabel {
    pub fn zero(base: impl Into<String>) -> Self {
        SplitLabel {
            base: base.into(),
            sign: SplitSign::Zero,
        }
    }

    pub fn plus(base: impl Into<String>) -> Self {
        SplitLabel {
            base: base.into(),
            sign: SplitSign::Plus,
        }
    }

    pub fn minus(base: impl Into<String>) -> Self {
        SplitLabel {
            base: base.into(),
            sign: SplitSign::Minus,
        }
    }

    pub fn id(&self) -> String {
        match self.sign {
            SplitSign::Zero => self.base.clone(),
            SplitSign::Plus => format!("{}+", self.base),
            SplitSign::Minus => format!("{}-", self.base),
        }
    }
}

/// The circle with every point of a chosen subset doubled into an adjacent
/// pair. At each doubled slot the walk reads `a⁺` then `a⁻`, so that the open
/// interval from `a⁺` to `a⁻` is empty and `[a⁻, u, a⁺]` holds for every
/// outside point `u`.
#[derive(Debug, Clone)]
pub struct SplitSpace {
    host: FiniteCircularOrder,
    split_set: Vec<String>,
    labels: Vec<SplitLabel>,
    order: FiniteCircularOrder,
    projection: OrderMap,
}

impl SplitSpace {
    pub fn host(&self) -> &FiniteCircularOrder {
        &self.host
    }

    pub fn split_set(&self) -> &[String] {
        &self.split_set
    }

    pub fn labels(&self) -> &[SplitLabel] {
        &self.labels
    }

    pub fn order(&self) -> &FiniteCircularOrder {
        &self.order
    }

    /// The collapsing map onto the host, validated as order preserving.
    pub fn projection(&self) -> &OrderMap {
        &self.projection
    }
}

/// Double every point of `a_set`.
pub fn split_subset(
    host: &FiniteCircularOrder,
    a_set: &[&str],
) -> Result<SplitSpace, SplitError> {
    let mut in_set = vec![false; host.len()];
    for a in a_set {
        in_set[host.rank(a)?] = true;
    }
    let split_set: Vec<String> = (0..host.len())
        .filter(|&i| in_set[i])
        .map(|i| host.element(i).to_string())
        .collect();

    let mut labels = Vec::with_capacity(host.len() + split_set.len());
    for i in 0..host.len() {
        let e = host.element(i);
        if in_set[i] {
            labels.push(SplitLabel::plus(e));
            labels.push(SplitLabel::minus(e));
        } else {
            labels.push(SplitLabel::zero(e));
        }
    }
    let order = FiniteCircularOrder::from_elements(labels.iter().map(|l| l.id()))?;
    let pairs: Vec<(String, String)> = labels.iter().map(|l| (l.id(), l.base.clone())).collect();
    let mut projection = OrderMap::circular(order.clone(), host.clone(), &pairs)?;
    if !projection.validate_cop()?.pass {
        return Err(SplitError::NotCop);
    }
    let space = SplitSpace {
        host: host.clone(),
        split_set,
        labels,
        order,
        projection,
    };
    debug_assert!(verify_split_order_rules(&space));
    Ok(space)
}

/// Independent verifier: the split order must agree with the two defining
/// rules on every label triple — triples with pairwise-distinct projections
/// inherit the host bracket, and any triple containing a doubled pair
/// `{a⁻, a⁺}` is a rotation of `[a⁻, u, a⁺]`.
pub fn verify_split_order_rules(space: &SplitSpace) -> bool {
    let m = space.labels.len();
    let host = &space.host;
    let base_rank = |i: usize| host.rank(&space.labels[i].base).unwrap();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                let got = space.order.bracket_ranks(i, j, k);
                let (bi, bj, bk) = (base_rank(i), base_rank(j), base_rank(k));
                let expected = if bi != bj && bj != bk && bi != bk {
                    host.bracket_ranks(bi, bj, bk)
                } else {
                    // Exactly one doubled pair plus a third label: true iff
                    // the cyclic reading is minus, outsider, plus.
                    let tri = [i, j, k];
                    (0..3).any(|r| {
                        let (x, y, z) = (tri[r], tri[(r + 1) % 3], tri[(r + 2) % 3]);
                        space.labels[x].sign == SplitSign::Minus
                            && space.labels[z].sign == SplitSign::Plus
                            && space.labels[x].base == space.labels[z].base
                            && space.labels[y].base != space.labels[x].base
                    })
                };
                if got != expected {
                    return false;
                }
            }
        }
    }
    true
}

/// Cutting the circle open at one point `c`: the chain
/// `c⁻ < (host ∖ {c} walked from c) < c⁺` together with the collapse back
/// onto the host from the chain's circular closure.
#[derive(Debug, Clone)]
pub struct SingleSplit {
    chain: FiniteLinearOrder,
    projection: OrderMap,
}

impl SingleSplit {
    pub fn chain(&self) -> &FiniteLinearOrder {
        &self.chain
    }

    /// From the circular closure of the chain onto the host, validated.
    pub fn projection(&self) -> &OrderMap {
        &self.projection
    }
}

pub fn single_split(host: &FiniteCircularOrder, c: &str) -> Result<SingleSplit, SplitError> {
    let start = host.rank(c)?;
    let n = host.len();
    let mut ids = Vec::with_capacity(n + 1);
    let mut pairs = Vec::with_capacity(n + 1);
    let minus = SplitLabel::minus(c).id();
    ids.push(minus.clone());
    pairs.push((minus, c.to_string()));
    for step in 1..n {
        let e = host.element((start + step) % n).to_string();
        ids.push(e.clone());
        pairs.push((e.clone(), e));
    }
    let plus = SplitLabel::plus(c).id();
    ids.push(plus.clone());
    pairs.push((plus, c.to_string()));

    let chain = FiniteLinearOrder::from_elements(ids)?;
    let mut projection =
        OrderMap::circular(circ_from_linear(&chain), host.clone(), &pairs)?;
    if !projection.validate_cop()?.pass {
        return Err(SplitError::NotCop);
    }
    Ok(SingleSplit { chain, projection })
}

/// Does a candidate `(order, projection)` with the right fiber profile match
/// the split space? The match is a rank-preserving bijection commuting with
/// the projections, searched over all rotations; label names never matter.
pub fn verify_split_uniqueness(
    candidate: &FiniteCircularOrder,
    gamma: &OrderMap,
    a_set: &[&str],
) -> Result<bool, SplitError> {
    let host = gamma.codomain().as_circular()?.clone();
    if gamma.domain() != &Host::Circular(candidate.clone()) {
        return Err(SplitError::Map(MapError::DomainMismatch(
            "projection domain differs from the candidate order".to_string(),
        )));
    }
    let mut g = gamma.clone();
    if !g.validate_cop()?.pass {
        return Err(SplitError::NotCop);
    }
    let mut in_set = vec![false; host.len()];
    for a in a_set {
        in_set[host.rank(a)?] = true;
    }
    for j in 0..host.len() {
        let size = gamma.rank_table().iter().filter(|&&t| t == j).count();
        let expected = if in_set[j] { 2 } else { 1 };
        if size != expected {
            return Err(SplitError::FiberMismatch {
                value: host.element(j).to_string(),
                size,
                expected,
            });
        }
    }
    let space = split_subset(&host, a_set)?;
    let m = space.order.len();
    if candidate.len() != m {
        return Ok(false);
    }
    let target: Vec<usize> = space.projection.rank_table().to_vec();
    let cand: Vec<usize> = gamma.rank_table().to_vec();
    for shift in 0..m {
        if (0..m).all(|i| cand[i] == target[(i + shift) % m]) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Circular-by-linear lexicographic product.
#[derive(Debug, Clone)]
pub struct LexProduct {
    left: FiniteCircularOrder,
    right: FiniteLinearOrder,
    components: Vec<(String, String)>,
    order: FiniteCircularOrder,
}

impl LexProduct {
    pub fn left(&self) -> &FiniteCircularOrder {
        &self.left
    }

    pub fn right(&self) -> &FiniteLinearOrder {
        &self.right
    }

    /// Pairs in walk order.
    pub fn components(&self) -> &[(String, String)] {
        &self.components
    }

    pub fn order(&self) -> &FiniteCircularOrder {
        &self.order
    }

    pub fn pair_id(a: &str, x: &str) -> String {
        format!("({a},{x})")
    }

    /// Bracket of three pairs straight from the defining clauses, not from
    /// the materialized walk.
    pub fn bracket_by_clauses(
        &self,
        p1: (&str, &str),
        p2: (&str, &str),
        p3: (&str, &str),
    ) -> Result<bool, SplitError> {
        let (a, x) = p1;
        let (b, y) = p2;
        let (c, z) = p3;
        let ar = self.left.rank(a)?;
        let br = self.left.rank(b)?;
        let cr = self.left.rank(c)?;
        let xr = self.right.rank(x)?;
        let yr = self.right.rank(y)?;
        let zr = self.right.rank(z)?;
        Ok(if ar != br && br != cr && ar != cr {
            self.left.bracket_ranks(ar, br, cr)
        } else if ar == br && br != cr {
            xr < yr
        } else if br == cr && cr != ar {
            yr < zr
        } else if cr == ar && ar != br {
            zr < xr
        } else {
            // All three left components equal: the right components are
            // distinct and compare in the circular closure of the chain.
            (xr < yr && yr < zr) || (yr < zr && zr < xr) || (zr < xr && xr < yr)
        })
    }
}

pub fn lex_product_circular(
    left: &FiniteCircularOrder,
    right: &FiniteLinearOrder,
) -> Result<LexProduct, SplitError> {
    let mut components = Vec::with_capacity(left.len() * right.len());
    for i in 0..left.len() {
        for j in 0..right.len() {
            components.push((left.element(i).to_string(), right.element(j).to_string()));
        }
    }
    let order =
        FiniteCircularOrder::from_elements(components.iter().map(|(a, x)| LexProduct::pair_id(a, x)))?;
    let product = LexProduct {
        left: left.clone(),
        right: right.clone(),
        components,
        order,
    };
    debug_assert!(verify_lex_clauses(&product).unwrap_or(false));
    Ok(product)
}

/// The materialized walk agrees with the five defining clauses on every
/// triple of distinct pairs.
pub fn verify_lex_clauses(product: &LexProduct) -> Result<bool, SplitError> {
    let m = product.components.len();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                let p = |t: usize| {
                    let (a, x) = &product.components[t];
                    (a.as_str(), x.as_str())
                };
                let by_clauses = product.bracket_by_clauses(p(i), p(j), p(k))?;
                if by_clauses != product.order.bracket_ranks(i, j, k) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Lift automorphisms of the host to the split space: `g(a±) = (ga)±` and
/// `g(x) = gx` elsewhere. Each `g` must be an order-preserving bijection
/// keeping the split set invariant; each lift comes back validated and
/// commutes with the projection.
pub fn induce_action_on_split(
    space: &SplitSpace,
    action: &[OrderMap],
) -> Result<Vec<OrderMap>, SplitError> {
    let host = &space.host;
    let mut lifts = Vec::with_capacity(action.len());
    for g in action {
        if g.domain() != &Host::Circular(host.clone())
            || g.codomain() != &Host::Circular(host.clone())
        {
            return Err(SplitError::Map(MapError::DomainMismatch(
                "action maps must be automorphisms of the host".to_string(),
            )));
        }
        let mut gv = g.clone();
        if !gv.validate_cop()?.pass || !gv.is_bijective() {
            return Err(SplitError::NotCop);
        }
        for a in &space.split_set {
            let image = g.apply(a)?;
            if !space.split_set.iter().any(|b| b == image) {
                return Err(SplitError::NotInvariant(a.clone()));
            }
        }
        let pairs: Vec<(String, String)> = space
            .labels
            .iter()
            .map(|l| {
                let image_base = g.apply(&l.base)?.to_string();
                Ok((
                    l.id(),
                    SplitLabel {
                        base: image_base,
                        sign: l.sign,
                    }
                    .id(),
                ))
            })
            .collect::<Result<_, SplitError>>()?;
        let mut lift = OrderMap::circular(space.order.clone(), space.order.clone(), &pairs)?;
        if !lift.validate_cop()?.pass {
            return Err(SplitError::NotCop);
        }
        debug_assert!(space.labels.iter().all(|l| {
            let mid = lift.apply(&l.id()).unwrap().to_string();
            let through_lift = space.projection.apply(&mid).unwrap().to_string();
            let through_host = g.apply(&l.base).unwrap();
            through_lift == through_host
        }));
        lifts.push(lift);
    }
    Ok(lifts)
}

/// Linear analogue of subset splitting: each `a ∈ A` becomes the adjacent
/// chain pair `a⁻ < a⁺`.
#[derive(Debug, Clone)]
pub struct LinearSplit {
    chain: FiniteLinearOrder,
    labels: Vec<SplitLabel>,
    projection: OrderMap,
}

impl LinearSplit {
    pub fn chain(&self) -> &FiniteLinearOrder {
        &self.chain
    }

    pub fn labels(&self) -> &[SplitLabel] {
        &self.labels
    }

    /// Chain-to-chain collapse, validated monotone.
    pub fn projection(&self) -> &OrderMap {
        &self.projection
    }
}

pub fn split_subset_linear(
    host: &FiniteLinearOrder,
    a_set: &[&str],
) -> Result<LinearSplit, SplitError> {
    let mut in_set = vec![false; host.len()];
    for a in a_set {
        in_set[host.rank(a)?] = true;
    }
    let mut labels = Vec::new();
    for i in 0..host.len() {
        let e = host.element(i);
        if in_set[i] {
            labels.push(SplitLabel::minus(e));
            labels.push(SplitLabel::plus(e));
        } else {
            labels.push(SplitLabel::zero(e));
        }
    }
    let chain = FiniteLinearOrder::from_elements(labels.iter().map(|l| l.id()))?;
    let pairs: Vec<(String, String)> = labels.iter().map(|l| (l.id(), l.base.clone())).collect();
    let mut projection = OrderMap::linear(chain.clone(), host.clone(), &pairs)?;
    if !projection.validate_lop()? {
        return Err(SplitError::NotCop);
    }
    Ok(LinearSplit {
        chain,
        labels,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{verify_circular_axioms, TernaryRelationTable};

    fn subsets(n: usize) -> Vec<Vec<usize>> {
        (0..1u32 << n)
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
            .collect()
    }

    #[test]
    fn single_split_examples() {
        let c3 = FiniteCircularOrder::cyclic(3);
        let s = single_split(&c3, "0").unwrap();
        assert_eq!(s.chain().elements(), ["0-", "1", "2", "0+"]);
        assert_eq!(s.projection().apply("0-").unwrap(), "0");
        assert_eq!(s.projection().apply("0+").unwrap(), "0");
        assert_eq!(s.projection().apply("1").unwrap(), "1");

        let c1 = FiniteCircularOrder::cyclic(1);
        let s = single_split(&c1, "0").unwrap();
        assert_eq!(s.chain().elements(), ["0-", "0+"]);

        assert!(matches!(
            single_split(&c3, "9"),
            Err(SplitError::Order(OrderError::UnknownElement(_)))
        ));
    }

    #[test]
    fn single_split_interior_is_a_bijection_off_the_cut_point() {
        for n in 1..=7 {
            let host = FiniteCircularOrder::cyclic(n);
            for c in 0..n {
                let c = c.to_string();
                let s = single_split(&host, &c).unwrap();
                let interior = &s.chain().elements()[1..n];
                let mut images: Vec<&str> = interior
                    .iter()
                    .map(|e| s.projection().apply(e).unwrap())
                    .collect();
                images.sort_unstable();
                let mut rest: Vec<&str> = host
                    .elements()
                    .iter()
                    .map(|e| e.as_str())
                    .filter(|e| *e != c)
                    .collect();
                rest.sort_unstable();
                assert_eq!(images, rest);
            }
        }
    }

    #[test]
    fn split_c3_at_zero() {
        let c3 = FiniteCircularOrder::cyclic(3);
        let space = split_subset(&c3, &["0"]).unwrap();
        assert_eq!(space.order().elements(), ["0+", "0-", "1", "2"]);
        let displayed =
            FiniteCircularOrder::from_elements(["0-", "1", "2", "0+"]).unwrap();
        assert!(space.order().equivalent(&displayed));
        assert!(verify_split_order_rules(&space));
        assert!(verify_circular_axioms(&TernaryRelationTable::from_order(space.order())).pass);
    }

    #[test]
    fn split_empty_set_is_the_host() {
        for n in 1..=6 {
            let host = FiniteCircularOrder::cyclic(n);
            let space = split_subset(&host, &[]).unwrap();
            assert_eq!(space.order(), &host);
        }
    }

    #[test]
    fn split_both_points_of_c2() {
        let c2 = FiniteCircularOrder::cyclic(2);
        let space = split_subset(&c2, &["0", "1"]).unwrap();
        assert_eq!(space.order().len(), 4);
        for a in ["0", "1"] {
            assert_eq!(space.projection().fiber(a).unwrap().len(), 2);
        }
    }

    #[test]
    fn split_invariants_exhaustive() {
        for n in 1..=6 {
            let host = FiniteCircularOrder::cyclic(n);
            for subset in subsets(n) {
                let a_set: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
                let refs: Vec<&str> = a_set.iter().map(|s| s.as_str()).collect();
                let space = split_subset(&host, &refs).unwrap();
                assert_eq!(space.order().len(), n + a_set.len());
                assert!(verify_split_order_rules(&space));
                for j in 0..n {
                    let e = host.element(j);
                    let expected = if a_set.iter().any(|a| a == e) { 2 } else { 1 };
                    assert_eq!(space.projection().fiber(e).unwrap().len(), expected);
                }
                // The open interval from a⁺ to a⁻ is empty: they are cyclically
                // adjacent in that orientation.
                for a in &a_set {
                    let plus = space.order().rank(&SplitLabel::plus(a).id()).unwrap();
                    let minus = space.order().rank(&SplitLabel::minus(a).id()).unwrap();
                    assert_eq!(space.order().forward(plus, minus), 1, "a = {a}");
                }
            }
        }
    }

    #[test]
    fn uniqueness_accepts_the_construction_and_label_swaps() {
        for n in 2..=6 {
            let host = FiniteCircularOrder::cyclic(n);
            for subset in subsets(n).into_iter().filter(|s| !s.is_empty()) {
                let a_set: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
                let refs: Vec<&str> = a_set.iter().map(|s| s.as_str()).collect();
                let space = split_subset(&host, &refs).unwrap();
                assert!(verify_split_uniqueness(
                    space.order(),
                    space.projection(),
                    &refs
                )
                .unwrap());

                // Swap the two labels over the first split point: same walk
                // positions, names exchanged. The projection table is
                // untouched, so the canonical identification absorbs it.
                let a0 = &a_set[0];
                let swapped: Vec<String> = space
                    .order()
                    .elements()
                    .iter()
                    .map(|e| {
                        if e == &SplitLabel::plus(a0).id() {
                            SplitLabel::minus(a0).id()
                        } else if e == &SplitLabel::minus(a0).id() {
                            SplitLabel::plus(a0).id()
                        } else {
                            e.clone()
                        }
                    })
                    .collect();
                let swapped_order = FiniteCircularOrder::from_elements(swapped).unwrap();
                let pairs: Vec<(String, String)> = swapped_order
                    .elements()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.clone(), space.labels()[i].base.clone()))
                    .collect();
                let gamma =
                    OrderMap::circular(swapped_order.clone(), host.clone(), &pairs).unwrap();
                assert!(verify_split_uniqueness(&swapped_order, &gamma, &refs).unwrap());
            }
        }
    }

    #[test]
    fn uniqueness_rejects_oversized_fibers() {
        let host = FiniteCircularOrder::cyclic(3);
        let cand = FiniteCircularOrder::cyclic(5);
        let pairs: Vec<(String, String)> = [("0", "0"), ("1", "0"), ("2", "0"), ("3", "1"), ("4", "2")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let gamma = OrderMap::circular(cand.clone(), host, &pairs).unwrap();
        assert!(matches!(
            verify_split_uniqueness(&cand, &gamma, &["0"]),
            Err(SplitError::FiberMismatch { size: 3, .. })
        ));
    }

    #[test]
    fn lex_product_examples() {
        let c2 = FiniteCircularOrder::cyclic(2);
        let two = FiniteLinearOrder::chain(2);
        let p = lex_product_circular(&c2, &two).unwrap();
        assert_eq!(p.order().len(), 4);
        assert_eq!(
            p.order().elements(),
            ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
        );
        assert!(verify_lex_clauses(&p).unwrap());

        for n in 1..=5 {
            let cn = FiniteCircularOrder::cyclic(n);
            let one = FiniteLinearOrder::chain(1);
            let p = lex_product_circular(&cn, &one).unwrap();
            let walk: Vec<String> = p.components().iter().map(|(a, _)| a.clone()).collect();
            assert_eq!(walk, cn.elements());
        }

        for (n, m) in [(2, 2), (3, 2), (2, 3), (3, 3), (4, 3)] {
            let p = lex_product_circular(
                &FiniteCircularOrder::cyclic(n),
                &FiniteLinearOrder::chain(m),
            )
            .unwrap();
            assert!(verify_lex_clauses(&p).unwrap(), "({n},{m})");
        }
    }

    #[test]
    fn splitting_everything_is_the_sign_product() {
        let c3 = FiniteCircularOrder::cyclic(3);
        let signs = FiniteLinearOrder::from_elements(["-", "+"]).unwrap();
        let p = lex_product_circular(&c3, &signs).unwrap();
        let pairs: Vec<(String, String)> = p
            .order()
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), p.components()[i].0.clone()))
            .collect();
        let gamma = OrderMap::circular(p.order().clone(), c3, &pairs).unwrap();
        assert!(verify_split_uniqueness(p.order(), &gamma, &["0", "1", "2"]).unwrap());
    }

    #[test]
    fn action_lifts() {
        // The half-turn keeps {0, 3} invariant and lifts to the 8-point split.
        let c6 = FiniteCircularOrder::cyclic(6);
        let space = split_subset(&c6, &["0", "3"]).unwrap();
        assert_eq!(space.order().len(), 8);
        let lifts = induce_action_on_split(&space, &[OrderMap::rotation(&c6, 3)]).unwrap();
        assert_eq!(lifts.len(), 1);
        let lift = &lifts[0];
        assert!(lift.is_bijective());
        assert_eq!(lift.apply("0+").unwrap(), "3+");
        assert_eq!(lift.apply("3-").unwrap(), "0-");
        assert_eq!(lift.apply("1").unwrap(), "4");
        // Equivariance: projecting after lifting equals acting after
        // projecting.
        for l in space.labels() {
            let projected = space
                .projection()
                .apply(lift.apply(&l.id()).unwrap())
                .unwrap()
                .to_string();
            let direct = c6.element((c6.rank(&l.base).unwrap() + 3) % 6);
            assert_eq!(projected, direct, "label {}", l.id());
        }

        let ids = induce_action_on_split(&space, &[OrderMap::rotation(&c6, 0)]).unwrap();
        for e in space.order().elements() {
            assert_eq!(ids[0].apply(e).unwrap(), e);
        }

        let bad_space = split_subset(&c6, &["0"]).unwrap();
        assert!(matches!(
            induce_action_on_split(&bad_space, &[OrderMap::rotation(&c6, 1)]),
            Err(SplitError::NotInvariant(_))
        ));
    }

    #[test]
    fn single_split_circularization_matches_subset_split() {
        for n in 1..=6 {
            let host = FiniteCircularOrder::cyclic(n);
            for c in 0..n {
                let c = c.to_string();
                let s = single_split(&host, &c).unwrap();
                let closure = circ_from_linear(s.chain());
                assert!(verify_split_uniqueness(&closure, s.projection(), &[&c]).unwrap());
            }
        }
    }

    #[test]
    fn linear_split_matches_the_circular_one() {
        for n in 1..=5 {
            let host = FiniteLinearOrder::chain(n);
            for subset in subsets(n) {
                let a_set: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
                let refs: Vec<&str> = a_set.iter().map(|s| s.as_str()).collect();
                let ls = split_subset_linear(&host, &refs).unwrap();
                assert_eq!(ls.chain().len(), n + a_set.len());
                let closure = circ_from_linear(ls.chain());
                let circ_host = circ_from_linear(&host);
                let pairs: Vec<(String, String)> = ls
                    .labels()
                    .iter()
                    .map(|l| (l.id(), l.base.clone()))
                    .collect();
                let gamma = OrderMap::circular(closure.clone(), circ_host, &pairs).unwrap();
                assert!(verify_split_uniqueness(&closure, &gamma, &refs).unwrap());
            }
        }
    }
}
