//! Maps between finite ordered sets, with validation of the two
//! order-compatibility notions: bracket preservation with convex fibers on
//! circles, plain monotonicity on chains.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::convex::{is_convex, ConvexError, ConvexSet};
use crate::order::{
    circ_from_linear, is_cycle_ranks, FiniteCircularOrder, FiniteLinearOrder, OrderError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error("domain/codomain mismatch: {0}")]
    DomainMismatch(String),
    #[error("element `{0}` has no image")]
    MissingImage(String),
    #[error("element `{0}` assigned more than once")]
    DuplicateAssignment(String),
    #[error("map must be validated as {0} first")]
    NotValidated(&'static str),
    #[error("enumeration budget exceeded: needs {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("base map does not belong to the family")]
    NotInFamily,
}

/// Either kind of finite ordered host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Host {
    Circular(FiniteCircularOrder),
    Linear(FiniteLinearOrder),
}

impl Host {
    pub fn len(&self) -> usize {
        match self {
            Host::Circular(o) => o.len(),
            Host::Linear(o) => o.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> &[String] {
        match self {
            Host::Circular(o) => o.elements(),
            Host::Linear(o) => o.elements(),
        }
    }

    pub fn rank(&self, e: &str) -> Result<usize, OrderError> {
        match self {
            Host::Circular(o) => o.rank(e),
            Host::Linear(o) => o.rank(e),
        }
    }

    pub fn element(&self, rank: usize) -> &str {
        match self {
            Host::Circular(o) => o.element(rank),
            Host::Linear(o) => o.element(rank),
        }
    }

    pub fn as_circular(&self) -> Result<&FiniteCircularOrder, MapError> {
        match self {
            Host::Circular(o) => Ok(o),
            Host::Linear(_) => Err(MapError::DomainMismatch(
                "expected a circular order".to_string(),
            )),
        }
    }

    pub fn as_linear(&self) -> Result<&FiniteLinearOrder, MapError> {
        match self {
            Host::Linear(o) => Ok(o),
            Host::Circular(_) => Err(MapError::DomainMismatch(
                "expected a linear order".to_string(),
            )),
        }
    }
}

/// Validation state a map carries once checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validated {
    Unchecked,
    Cop,
    Lop,
}

/// A total map between two finite ordered hosts. The table is stored by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderMap {
    domain: Host,
    codomain: Host,
    table: Vec<usize>,
    validated: Validated,
}

/// Violation witness for circular-order preservation: either a bracket triple
/// whose image breaks the codomain bracket, or a point whose fiber is not
/// convex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopViolation {
    Bracket {
        triple: [String; 3],
        images: [String; 3],
    },
    FiberNotConvex {
        value: String,
        fiber: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopReport {
    pub pass: bool,
    pub violation: Option<CopViolation>,
}

/// How `validate_cop_via_cycles` enumerates cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleEnumeration {
    /// Injective cycles in canonical rotation, plus each with one entry
    /// doubled. Repeats beyond that collapse onto these patterns.
    Reduced,
    /// Every tuple over the domain up to length `|domain|`.
    Full,
}

impl OrderMap {
    pub fn new(domain: Host, codomain: Host, pairs: &[(String, String)]) -> Result<Self, MapError> {
        let n = domain.len();
        let mut table: Vec<Option<usize>> = vec![None; n];
        for (x, y) in pairs {
            let i = domain.rank(x)?;
            if table[i].is_some() {
                return Err(MapError::DuplicateAssignment(x.clone()));
            }
            table[i] = Some(codomain.rank(y)?);
        }
        let mut flat = Vec::with_capacity(n);
        for (i, slot) in table.into_iter().enumerate() {
            match slot {
                Some(j) => flat.push(j),
                None => return Err(MapError::MissingImage(domain.element(i).to_string())),
            }
        }
        Ok(OrderMap {
            domain,
            codomain,
            table: flat,
            validated: Validated::Unchecked,
        })
    }

    pub fn circular(
        domain: FiniteCircularOrder,
        codomain: FiniteCircularOrder,
        pairs: &[(String, String)],
    ) -> Result<Self, MapError> {
        Self::new(Host::Circular(domain), Host::Circular(codomain), pairs)
    }

    pub fn linear(
        domain: FiniteLinearOrder,
        codomain: FiniteLinearOrder,
        pairs: &[(String, String)],
    ) -> Result<Self, MapError> {
        Self::new(Host::Linear(domain), Host::Linear(codomain), pairs)
    }

    /// Build from a rank table: `table[i]` is the codomain rank of the image
    /// of the domain element of rank `i`.
    pub fn from_rank_table(
        domain: Host,
        codomain: Host,
        table: Vec<usize>,
    ) -> Result<Self, MapError> {
        if table.len() != domain.len() {
            return Err(MapError::MissingImage(format!(
                "table covers {} of {} elements",
                table.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= codomain.len()) {
            return Err(MapError::DomainMismatch(format!(
                "rank {bad} outside the codomain"
            )));
        }
        Ok(OrderMap {
            domain,
            codomain,
            table,
            validated: Validated::Unchecked,
        })
    }

    pub fn identity_circular(order: &FiniteCircularOrder) -> Self {
        OrderMap {
            domain: Host::Circular(order.clone()),
            codomain: Host::Circular(order.clone()),
            table: (0..order.len()).collect(),
            validated: Validated::Unchecked,
        }
    }

    /// `x ↦ x + k` by rank on a circular host.
    pub fn rotation(order: &FiniteCircularOrder, k: usize) -> Self {
        let n = order.len();
        OrderMap {
            domain: Host::Circular(order.clone()),
            codomain: Host::Circular(order.clone()),
            table: (0..n).map(|i| (i + k) % n).collect(),
            validated: Validated::Unchecked,
        }
    }

    pub fn constant(domain: Host, codomain: Host, value: &str) -> Result<Self, MapError> {
        let j = codomain.rank(value)?;
        Ok(OrderMap {
            table: vec![j; domain.len()],
            domain,
            codomain,
            validated: Validated::Unchecked,
        })
    }

    pub fn domain(&self) -> &Host {
        &self.domain
    }

    pub fn codomain(&self) -> &Host {
        &self.codomain
    }

    pub fn validated(&self) -> Validated {
        self.validated
    }

    pub fn rank_table(&self) -> &[usize] {
        &self.table
    }

    pub fn image_rank(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &str) -> Result<&str, MapError> {
        let i = self.domain.rank(x)?;
        Ok(self.codomain.element(self.table[i]))
    }

    pub fn image_ranks(&self) -> BTreeSet<usize> {
        self.table.iter().copied().collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.len() == self.codomain.len() && self.image_ranks().len() == self.table.len()
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        (0..self.table.len())
            .map(|i| {
                (
                    self.domain.element(i).to_string(),
                    self.codomain.element(self.table[i]).to_string(),
                )
            })
            .collect()
    }

    /// Fiber over a codomain element, in domain rank order.
    pub fn fiber(&self, value: &str) -> Result<Vec<String>, MapError> {
        let j = self.codomain.rank(value)?;
        Ok((0..self.table.len())
            .filter(|&i| self.table[i] == j)
            .map(|i| self.domain.element(i).to_string())
            .collect())
    }

    /// Check bracket preservation (on triples with pairwise-distinct images)
    /// and convexity of every fiber. Stamps the map on success.
    pub fn validate_cop(&mut self) -> Result<CopReport, MapError> {
        let report = self.cop_report()?;
        if report.pass {
            self.validated = Validated::Cop;
        }
        Ok(report)
    }

    fn cop_report(&self) -> Result<CopReport, MapError> {
        let dom = self.domain.as_circular()?;
        let cod = self.codomain.as_circular()?;
        let n = dom.len();
        // Bracket preservation: every increasing rank triple is a domain
        // bracket, and every domain bracket is a rotation of one.
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (fi, fj, fk) = (self.table[i], self.table[j], self.table[k]);
                    if fi == fj || fj == fk || fi == fk {
                        continue;
                    }
                    if !cod.bracket_ranks(fi, fj, fk) {
                        return Ok(CopReport {
                            pass: false,
                            violation: Some(CopViolation::Bracket {
                                triple: [
                                    dom.element(i).to_string(),
                                    dom.element(j).to_string(),
                                    dom.element(k).to_string(),
                                ],
                                images: [
                                    cod.element(fi).to_string(),
                                    cod.element(fj).to_string(),
                                    cod.element(fk).to_string(),
                                ],
                            }),
                        });
                    }
                }
            }
        }
        // Convex fibers, scanned in codomain rank order.
        for j in 0..cod.len() {
            let fiber: Vec<String> = (0..n)
                .filter(|&i| self.table[i] == j)
                .map(|i| dom.element(i).to_string())
                .collect();
            let refs: Vec<&str> = fiber.iter().map(|s| s.as_str()).collect();
            if is_convex(dom, &refs)?.is_none() {
                return Ok(CopReport {
                    pass: false,
                    violation: Some(CopViolation::FiberNotConvex {
                        value: cod.element(j).to_string(),
                        fiber,
                    }),
                });
            }
        }
        Ok(CopReport {
            pass: true,
            violation: None,
        })
    }

    /// Monotonicity between chains. Stamps the map on success.
    pub fn validate_lop(&mut self) -> Result<bool, MapError> {
        let _ = self.domain.as_linear()?;
        let _ = self.codomain.as_linear()?;
        let pass = self.table.windows(2).all(|w| w[0] <= w[1]);
        if pass {
            self.validated = Validated::Lop;
        }
        Ok(pass)
    }

    /// Image of the closed forward arc `[a, b]` as a set of codomain ranks.
    pub fn arc_image_ranks(&self, a: &str, b: &str) -> Result<BTreeSet<usize>, MapError> {
        let dom = self.domain.as_circular()?;
        let i = dom.rank(a)?;
        let j = dom.rank(b)?;
        let n = dom.len();
        let mut out = BTreeSet::new();
        let mut p = i;
        loop {
            out.insert(self.table[p]);
            if p == j {
                break;
            }
            p = (p + 1) % n;
        }
        Ok(out)
    }
}

/// Preimage of a convex set under a validated circular-order-preserving map,
/// in normal form. Convexity of the result is an invariant of such maps.
pub fn preimage_convex(f: &OrderMap, set: &ConvexSet) -> Result<ConvexSet, MapError> {
    if f.validated != Validated::Cop {
        return Err(MapError::NotValidated("cop"));
    }
    let dom = f.domain.as_circular()?;
    let cod = f.codomain.as_circular()?;
    let mut ranks = BTreeSet::new();
    for i in 0..dom.len() {
        if set.contains(cod, cod.element(f.table[i]))? {
            ranks.insert(i);
        }
    }
    let members: Vec<String> = ranks.iter().map(|&i| dom.element(i).to_string()).collect();
    let refs: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
    is_convex(dom, &refs)?
        .ok_or_else(|| MapError::DomainMismatch("fiber union is not convex".to_string()))
}

/// Cycle-transport check, the direct reading of order preservation: the image
/// of every cycle is again a cycle. `budget` caps the number of tuples
/// examined.
pub fn validate_cop_via_cycles(
    f: &OrderMap,
    enumeration: CycleEnumeration,
    budget: u64,
) -> Result<bool, MapError> {
    let dom = f.domain.as_circular()?;
    let cod = f.codomain.as_circular()?;
    let n = dom.len();
    let image_is_cycle = |ranks: &[usize]| -> bool {
        let image: Vec<usize> = ranks.iter().map(|&i| f.table[i]).collect();
        is_cycle_ranks(cod, &image)
    };
    match enumeration {
        CycleEnumeration::Reduced => {
            let subsets = (1u64 << n) - 1;
            let needed = subsets.saturating_mul(n as u64 + 1);
            if needed > budget {
                return Err(MapError::BudgetExceeded { needed, budget });
            }
            for mask in 1u32..(1 << n) {
                let ranks: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                // Increasing ranks form a cycle in the domain; rotations of a
                // tuple are cycles together, so one representative suffices.
                if !image_is_cycle(&ranks) {
                    return Ok(false);
                }
                for p in 0..ranks.len() {
                    let mut doubled = ranks.clone();
                    doubled.insert(p, ranks[p]);
                    debug_assert!(is_cycle_ranks(dom, &doubled));
                    if !image_is_cycle(&doubled) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        CycleEnumeration::Full => {
            let mut needed: u64 = 0;
            for len in 1..=n {
                needed = needed.saturating_add((n as u64).saturating_pow(len as u32));
            }
            if needed > budget {
                return Err(MapError::BudgetExceeded { needed, budget });
            }
            let mut tuple = Vec::new();
            fn rec(
                tuple: &mut Vec<usize>,
                max_len: usize,
                dom: &FiniteCircularOrder,
                check: &dyn Fn(&[usize]) -> bool,
            ) -> bool {
                if !tuple.is_empty() && is_cycle_ranks(dom, tuple) && !check(tuple) {
                    return false;
                }
                if tuple.len() == max_len {
                    return true;
                }
                for i in 0..dom.len() {
                    tuple.push(i);
                    if !rec(tuple, max_len, dom, check) {
                        return false;
                    }
                    tuple.pop();
                }
                true
            }
            Ok(rec(&mut tuple, n, dom, &image_is_cycle))
        }
    }
}

/// `|image| ≥ 3`: with bracket preservation already in hand, an image this
/// large forces convex fibers, so the full validation must pass.
pub fn cop1_suffices(f: &OrderMap) -> bool {
    f.image_ranks().len() >= 3
}

/// `f ∘ g`. Both maps must carry the same validation stamp; the composite
/// inherits it without re-checking (a debug re-validation must agree).
pub fn compose(f: &OrderMap, g: &OrderMap) -> Result<OrderMap, MapError> {
    if g.codomain != f.domain {
        return Err(MapError::DomainMismatch(
            "codomain of the inner map differs from domain of the outer".to_string(),
        ));
    }
    if g.validated == Validated::Unchecked || g.validated != f.validated {
        return Err(MapError::NotValidated("the same kind on both maps"));
    }
    let table: Vec<usize> = g.table.iter().map(|&i| f.table[i]).collect();
    let composite = OrderMap {
        domain: g.domain.clone(),
        codomain: f.codomain.clone(),
        table,
        validated: g.validated,
    };
    #[cfg(debug_assertions)]
    {
        let mut check = composite.clone();
        match composite.validated {
            Validated::Cop => debug_assert!(check.validate_cop()?.pass),
            Validated::Lop => debug_assert!(check.validate_lop()?),
            Validated::Unchecked => unreachable!(),
        }
    }
    Ok(composite)
}

/// A finite list of maps sharing domain and codomain.
#[derive(Debug, Clone)]
pub struct MapFamily {
    members: Vec<OrderMap>,
}

impl MapFamily {
    pub fn new(members: Vec<OrderMap>) -> Result<Self, MapError> {
        if let Some(first) = members.first() {
            for m in &members[1..] {
                if m.domain != first.domain || m.codomain != first.codomain {
                    return Err(MapError::DomainMismatch(
                        "family members must share domain and codomain".to_string(),
                    ));
                }
            }
        }
        Ok(MapFamily { members })
    }

    pub fn members(&self) -> &[OrderMap] {
        &self.members
    }

    pub fn contains_table(&self, candidate: &OrderMap) -> bool {
        self.members.iter().any(|m| m.table == candidate.table)
    }
}

/// Finite-scale pointwise-closedness witness. On a finite domain a pointwise
/// limit of a sequence from the family is eventually constant at every point,
/// hence coincides with a member outright; closedness says such a limit stays
/// order preserving. Returns the candidate's own validation verdict.
pub fn is_pointwise_limit_closed(family: &MapFamily, candidate: &OrderMap) -> Result<bool, MapError> {
    let verdict = candidate.cop_report()?.pass;
    if family.contains_table(candidate) {
        let all_cop = family
            .members
            .iter()
            .map(|m| m.cop_report().map(|r| r.pass))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .all(|b| b);
        debug_assert!(
            !all_cop || verdict,
            "a pointwise limit of order-preserving maps must be order preserving"
        );
    }
    Ok(verdict)
}

/// Smallest set of domain elements on which agreement with `p` pins down `p`
/// within the family. Ties go to the lexicographically first rank subset.
pub fn minimal_determining_set(
    p: &OrderMap,
    family: &MapFamily,
    max_domain: usize,
) -> Result<Vec<String>, MapError> {
    if !family.contains_table(p) {
        return Err(MapError::NotInFamily);
    }
    let n = p.domain.len();
    if n > max_domain || n > 30 {
        return Err(MapError::BudgetExceeded {
            needed: n as u64,
            budget: max_domain as u64,
        });
    }
    let others: Vec<&OrderMap> = family
        .members
        .iter()
        .filter(|q| q.table != p.table)
        .collect();
    let determines = |mask: u32| -> bool {
        others.iter().all(|q| {
            // Some point of the mask must separate q from p.
            (0..n).any(|i| mask & (1 << i) != 0 && q.table[i] != p.table[i])
        })
    };
    for size in 0..=n {
        // Masks of the given popcount in lexicographic order of the sorted
        // rank tuples they denote.
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size || !determines(mask) {
                continue;
            }
            let ranks: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if best.as_ref().is_none_or(|b| ranks < *b) {
                best = Some(ranks);
            }
        }
        if let Some(ranks) = best {
            return Ok(ranks
                .into_iter()
                .map(|i| p.domain.element(i).to_string())
                .collect());
        }
    }
    unreachable!("the full domain always determines a family member")
}

/// All maps between two circular hosts, by rank table in lexicographic order.
pub fn enumerate_circular_maps(
    domain: &FiniteCircularOrder,
    codomain: &FiniteCircularOrder,
) -> impl Iterator<Item = OrderMap> {
    let n = domain.len();
    let k = codomain.len();
    let total = (k as u64).checked_pow(n as u32).expect("table space overflow");
    let domain = domain.clone();
    let codomain = codomain.clone();
    (0..total).map(move |mut code| {
        let mut table = vec![0usize; n];
        for slot in table.iter_mut() {
            *slot = (code % k as u64) as usize;
            code /= k as u64;
        }
        OrderMap {
            domain: Host::Circular(domain.clone()),
            codomain: Host::Circular(codomain.clone()),
            table,
            validated: Validated::Unchecked,
        }
    })
}

/// A monotone map between chains transfers to the circular closures of its
/// endpoints unchanged.
pub fn circularize_lop(f: &OrderMap) -> Result<OrderMap, MapError> {
    let dom = circ_from_linear(f.domain.as_linear()?);
    let cod = circ_from_linear(f.codomain.as_linear()?);
    Ok(OrderMap {
        domain: Host::Circular(dom),
        codomain: Host::Circular(cod),
        table: f.table.clone(),
        validated: Validated::Unchecked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 10_000_000;

    fn two_value_alternating_map() -> OrderMap {
        // Four points around a circle, images alternating between two values.
        let c4 = FiniteCircularOrder::cyclic(4);
        OrderMap::from_rank_table(
            Host::Circular(c4.clone()),
            Host::Circular(c4),
            vec![1, 0, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn alternating_two_value_map_has_nonconvex_fiber() {
        let mut p = two_value_alternating_map();
        let report = p.validate_cop().unwrap();
        assert!(!report.pass);
        assert_eq!(
            report.violation,
            Some(CopViolation::FiberNotConvex {
                value: "0".to_string(),
                fiber: vec!["1".to_string(), "3".to_string()],
            })
        );
        assert_eq!(p.validated(), Validated::Unchecked);
        assert!(!validate_cop_via_cycles(&p, CycleEnumeration::Reduced, BUDGET).unwrap());
        assert!(!validate_cop_via_cycles(&p, CycleEnumeration::Full, BUDGET).unwrap());
        assert!(!cop1_suffices(&p));
    }

    #[test]
    fn identity_constant_rotation_pass() {
        let c5 = FiniteCircularOrder::cyclic(5);
        let mut id = OrderMap::identity_circular(&c5);
        assert!(id.validate_cop().unwrap().pass);
        assert_eq!(id.validated(), Validated::Cop);
        assert!(cop1_suffices(&id));

        let mut con =
            OrderMap::constant(Host::Circular(c5.clone()), Host::Circular(c5.clone()), "2")
                .unwrap();
        assert!(con.validate_cop().unwrap().pass);
        assert!(!cop1_suffices(&con));

        for k in 0..5 {
            let rot = OrderMap::rotation(&c5, k);
            assert!(validate_cop_via_cycles(&rot, CycleEnumeration::Reduced, BUDGET).unwrap());
        }
    }

    #[test]
    fn direct_and_cycle_validation_agree_exhaustively() {
        for (m, k) in [(3, 3), (4, 3), (3, 4), (4, 4)] {
            let dom = FiniteCircularOrder::cyclic(m);
            let cod = FiniteCircularOrder::cyclic(k);
            let mut cop_count = 0usize;
            for mut f in enumerate_circular_maps(&dom, &cod) {
                let direct = f.validate_cop().unwrap().pass;
                let reduced =
                    validate_cop_via_cycles(&f, CycleEnumeration::Reduced, BUDGET).unwrap();
                let full = validate_cop_via_cycles(&f, CycleEnumeration::Full, BUDGET).unwrap();
                assert_eq!(direct, reduced, "{:?}", f.rank_table());
                assert_eq!(direct, full, "{:?}", f.rank_table());
                cop_count += direct as usize;
            }
            assert!(cop_count > 0, "({m},{k}) admits order-preserving maps");
        }
    }

    #[test]
    fn large_image_with_bracket_preservation_forces_pass() {
        let c5 = FiniteCircularOrder::cyclic(5);
        for mut f in enumerate_circular_maps(&c5, &c5) {
            let report = f.validate_cop().unwrap();
            let bracket_ok = !matches!(report.violation, Some(CopViolation::Bracket { .. }));
            if bracket_ok && cop1_suffices(&f) {
                assert!(report.pass, "{:?}", f.rank_table());
            }
        }
    }

    #[test]
    fn preimage_examples() {
        let c5 = FiniteCircularOrder::cyclic(5);
        let mut con =
            OrderMap::constant(Host::Circular(c5.clone()), Host::Circular(c5.clone()), "2")
                .unwrap();
        con.validate_cop().unwrap();
        assert_eq!(
            preimage_convex(&con, &ConvexSet::singleton("2")).unwrap(),
            ConvexSet::Full
        );
        assert_eq!(
            preimage_convex(&con, &ConvexSet::singleton("3")).unwrap(),
            ConvexSet::Empty
        );

        let c6 = FiniteCircularOrder::cyclic(6);
        let mut r1 = OrderMap::rotation(&c6, 1);
        r1.validate_cop().unwrap();
        let pre = preimage_convex(&r1, &ConvexSet::open("0", "3").unwrap()).unwrap();
        assert!(pre.same_set(&ConvexSet::open("5", "2").unwrap(), &c6).unwrap());
        assert_eq!(pre, ConvexSet::closed("0", "1").unwrap());
    }

    #[test]
    fn preimage_not_validated_is_refused() {
        let c6 = FiniteCircularOrder::cyclic(6);
        let r1 = OrderMap::rotation(&c6, 1);
        assert!(matches!(
            preimage_convex(&r1, &ConvexSet::Full),
            Err(MapError::NotValidated(_))
        ));
    }

    #[test]
    fn preimages_of_intervals_are_convex_c6_to_c4() {
        let c6 = FiniteCircularOrder::cyclic(6);
        let c4 = FiniteCircularOrder::cyclic(4);
        let mut intervals = vec![ConvexSet::Empty, ConvexSet::Full];
        for i in 0..4 {
            intervals.push(ConvexSet::singleton(i.to_string()));
            intervals.push(ConvexSet::FullMinusPoint(i.to_string()));
            for j in 0..4 {
                if i == j {
                    continue;
                }
                for (lc, rc) in [(false, false), (true, false), (false, true), (true, true)] {
                    intervals
                        .push(ConvexSet::interval(i.to_string(), j.to_string(), lc, rc).unwrap());
                }
            }
        }
        let mut cop_total = 0usize;
        for mut f in enumerate_circular_maps(&c6, &c4) {
            if !f.validate_cop().unwrap().pass {
                continue;
            }
            cop_total += 1;
            for set in &intervals {
                let pre = preimage_convex(&f, set).unwrap();
                let members = pre.member_elements(&c6).unwrap();
                let refs: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
                assert!(is_convex(&c6, &refs).unwrap().is_some());
            }
        }
        assert!(cop_total > 0);
    }

    #[test]
    fn lop_examples() {
        let c3 = FiniteLinearOrder::chain(3);
        let mut id = OrderMap::linear(
            c3.clone(),
            c3.clone(),
            &[
                ("0".into(), "0".into()),
                ("1".into(), "1".into()),
                ("2".into(), "2".into()),
            ],
        )
        .unwrap();
        assert!(id.validate_lop().unwrap());
        assert_eq!(id.validated(), Validated::Lop);

        let mut rev = OrderMap::linear(
            c3.clone(),
            c3.clone(),
            &[
                ("0".into(), "2".into()),
                ("1".into(), "1".into()),
                ("2".into(), "0".into()),
            ],
        )
        .unwrap();
        assert!(!rev.validate_lop().unwrap());

        let mut squash = OrderMap::linear(
            c3.clone(),
            c3,
            &[
                ("0".into(), "1".into()),
                ("1".into(), "1".into()),
                ("2".into(), "2".into()),
            ],
        )
        .unwrap();
        assert!(squash.validate_lop().unwrap());
    }

    #[test]
    fn composition_inherits_validation() {
        let c6 = FiniteCircularOrder::cyclic(6);
        let mut r2 = OrderMap::rotation(&c6, 2);
        let mut r3 = OrderMap::rotation(&c6, 3);
        r2.validate_cop().unwrap();
        r3.validate_cop().unwrap();
        let r5 = compose(&r2, &r3).unwrap();
        assert_eq!(r5.validated(), Validated::Cop);
        assert_eq!(r5.rank_table(), OrderMap::rotation(&c6, 5).rank_table());

        let unchecked = OrderMap::rotation(&c6, 1);
        assert!(matches!(
            compose(&r2, &unchecked),
            Err(MapError::NotValidated(_))
        ));
    }

    #[test]
    fn composites_of_validated_maps_stay_valid() {
        let c5 = FiniteCircularOrder::cyclic(5);
        let mut cops: Vec<OrderMap> = Vec::new();
        for mut f in enumerate_circular_maps(&c5, &c5) {
            if f.validate_cop().unwrap().pass {
                cops.push(f);
            }
        }
        // Sample pairs on a fixed stride to keep the square tractable.
        for (a, f) in cops.iter().enumerate().step_by(7) {
            for (b, g) in cops.iter().enumerate().step_by(11) {
                let mut h = compose(f, g).unwrap();
                assert!(h.validate_cop().unwrap().pass, "pair ({a},{b})");
            }
        }
    }

    #[test]
    fn pointwise_limits_of_rotations_stay_inside() {
        let c5 = FiniteCircularOrder::cyclic(5);
        let rotations: Vec<OrderMap> = (0..5)
            .map(|k| {
                let mut r = OrderMap::rotation(&c5, k);
                r.validate_cop().unwrap();
                r
            })
            .collect();
        let family = MapFamily::new(rotations.clone()).unwrap();
        // On a finite domain an eventually-constant-per-point limit of family
        // members equals a member, so enumerating limits = enumerating members.
        for r in &rotations {
            assert!(is_pointwise_limit_closed(&family, r).unwrap());
        }

        let c4 = FiniteCircularOrder::cyclic(4);
        let family4 = MapFamily::new(
            (0..4)
                .map(|k| {
                    let mut r = OrderMap::rotation(&c4, k);
                    r.validate_cop().unwrap();
                    r
                })
                .collect(),
        )
        .unwrap();
        let bad = two_value_alternating_map();
        assert!(!is_pointwise_limit_closed(&family4, &bad).unwrap());
    }

    #[test]
    fn determining_sets() {
        // Singleton family: nothing to separate.
        let c4 = FiniteCircularOrder::cyclic(4);
        let id = OrderMap::identity_circular(&c4);
        let family = MapFamily::new(vec![id.clone()]).unwrap();
        assert!(minimal_determining_set(&id, &family, 12).unwrap().is_empty());

        // Constant map plus its one-point perturbations: every perturbed
        // point must be observed, so the answer is the domain minus the base
        // point.
        let c5 = FiniteCircularOrder::cyclic(5);
        let base =
            OrderMap::constant(Host::Circular(c5.clone()), Host::Circular(c5.clone()), "0")
                .unwrap();
        let mut members = vec![base.clone()];
        for b in 1..5 {
            let mut table = vec![0usize; 5];
            table[b] = b;
            members.push(
                OrderMap::from_rank_table(
                    Host::Circular(c5.clone()),
                    Host::Circular(c5.clone()),
                    table,
                )
                .unwrap(),
            );
        }
        let family = MapFamily::new(members).unwrap();
        assert_eq!(
            minimal_determining_set(&base, &family, 12).unwrap(),
            vec!["1", "2", "3", "4"]
        );

        // All monotone maps of a 3-chain: only the whole domain pins down the
        // identity.
        let chain = FiniteLinearOrder::chain(3);
        let mut monotone = Vec::new();
        for a in 0..3usize {
            for b in a..3 {
                for c in b..3 {
                    monotone.push(
                        OrderMap::from_rank_table(
                            Host::Linear(chain.clone()),
                            Host::Linear(chain.clone()),
                            vec![a, b, c],
                        )
                        .unwrap(),
                    );
                }
            }
        }
        let family = MapFamily::new(monotone).unwrap();
        let p = OrderMap::from_rank_table(
            Host::Linear(chain.clone()),
            Host::Linear(chain),
            vec![0, 1, 2],
        )
        .unwrap();
        let set = minimal_determining_set(&p, &family, 12).unwrap();
        assert_eq!(set, vec!["0", "1", "2"]);
        assert!(set.len() <= 3);
    }

    #[test]
    fn determining_set_requires_membership() {
        let c4 = FiniteCircularOrder::cyclic(4);
        let id = OrderMap::identity_circular(&c4);
        let rot = OrderMap::rotation(&c4, 1);
        let family = MapFamily::new(vec![rot]).unwrap();
        assert!(matches!(
            minimal_determining_set(&id, &family, 12),
            Err(MapError::NotInFamily)
        ));
    }

    #[test]
    fn arc_images_land_in_image_arcs() {
        for (m, k) in [(3, 3), (4, 3), (3, 4), (4, 4)] {
            let dom = FiniteCircularOrder::cyclic(m);
            let cod = FiniteCircularOrder::cyclic(k);
            for mut f in enumerate_circular_maps(&dom, &cod) {
                if !f.validate_cop().unwrap().pass {
                    continue;
                }
                for a in 0..m {
                    for b in 0..m {
                        if a == b || f.image_rank(a) == f.image_rank(b) {
                            continue;
                        }
                        let img =
                            f.arc_image_ranks(dom.element(a), dom.element(b)).unwrap();
                        let (fa, fb) = (f.image_rank(a), f.image_rank(b));
                        for y in img {
                            let inside =
                                y == fa || y == fb || cod.bracket_ranks(fa, y, fb);
                            assert!(inside, "map {:?} arc ({a},{b})", f.rank_table());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn removing_a_fiber_leaves_a_monotone_cut_map() {
        for (m, k) in [(3, 3), (4, 3), (3, 4), (4, 4)] {
            let dom = FiniteCircularOrder::cyclic(m);
            let cod = FiniteCircularOrder::cyclic(k);
            for mut f in enumerate_circular_maps(&dom, &cod) {
                if !f.validate_cop().unwrap().pass {
                    continue;
                }
                for z in 0..m {
                    let fz = f.image_rank(z);
                    // Walk the domain cut at z, skipping the fiber of f(z);
                    // image positions along the codomain cut at f(z) must be
                    // non-decreasing.
                    let mut last = 0usize;
                    for step in 0..m {
                        let i = (z + step) % m;
                        if f.image_rank(i) == fz {
                            continue;
                        }
                        let pos = cod.forward(fz, f.image_rank(i));
                        assert!(
                            pos >= last,
                            "map {:?} cut at {z} not monotone",
                            f.rank_table()
                        );
                        last = pos;
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_chain_maps_circularize() {
        for (m, k) in [(2, 2), (3, 3), (4, 3), (3, 5), (5, 4)] {
            let dom = FiniteLinearOrder::chain(m);
            let cod = FiniteLinearOrder::chain(k);
            // All monotone rank tables.
            let mut tables = vec![vec![]];
            for _ in 0..m {
                let mut next = Vec::new();
                for t in &tables {
                    let lo = *t.last().unwrap_or(&0usize);
                    for v in lo..k {
                        let mut t2: Vec<usize> = t.clone();
                        t2.push(v);
                        next.push(t2);
                    }
                }
                tables = next;
            }
            for table in tables {
                let mut f = OrderMap::from_rank_table(
                    Host::Linear(dom.clone()),
                    Host::Linear(cod.clone()),
                    table,
                )
                .unwrap();
                assert!(f.validate_lop().unwrap());
                let mut g = circularize_lop(&f).unwrap();
                assert!(g.validate_cop().unwrap().pass, "{:?}", f.rank_table());
            }
        }
    }
}
