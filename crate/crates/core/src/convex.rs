//! Convex subsets of a finite circular order.
//!
//! On a finite circle the convex sets are exactly: the empty set, the whole
//! circle, the circle minus one point, and the four interval flavours between
//! two endpoints. `ConvexSet` is the symbolic form; membership is always
//! evaluated against a host order.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::order::{FiniteCircularOrder, OrderError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvexError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("open interval with equal endpoints `{0}` is empty; use the closed singleton")]
    DegenerateInterval(String),
    #[error("subsets are not pairwise disjoint (shared element `{0}`)")]
    NotDisjoint(String),
    #[error("subset {0:?} is not convex")]
    NotConvex(Vec<String>),
    #[error("subset must be nonempty")]
    EmptySubset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvexSet {
    Empty,
    Full,
    /// The whole circle minus one point.
    FullMinusPoint(String),
    Interval {
        a: String,
        b: String,
        left_closed: bool,
        right_closed: bool,
    },
}

impl ConvexSet {
    /// Interval between two endpoints. Equal endpoints are only allowed fully
    /// closed (the singleton `[a, a] = {a}`); the other flavours with `a = b`
    /// would denote the empty set and are rejected.
    pub fn interval(
        a: impl Into<String>,
        b: impl Into<String>,
        left_closed: bool,
        right_closed: bool,
    ) -> Result<Self, ConvexError> {
        let (a, b) = (a.into(), b.into());
        if a == b && !(left_closed && right_closed) {
            return Err(ConvexError::DegenerateInterval(a));
        }
        Ok(ConvexSet::Interval {
            a,
            b,
            left_closed,
            right_closed,
        })
    }

    pub fn open(a: impl Into<String>, b: impl Into<String>) -> Result<Self, ConvexError> {
        Self::interval(a, b, false, false)
    }

    pub fn closed(a: impl Into<String>, b: impl Into<String>) -> Result<Self, ConvexError> {
        Self::interval(a, b, true, true)
    }

    pub fn singleton(a: impl Into<String>) -> Self {
        let a = a.into();
        ConvexSet::Interval {
            a: a.clone(),
            b: a,
            left_closed: true,
            right_closed: true,
        }
    }

    pub fn contains(&self, order: &FiniteCircularOrder, x: &str) -> Result<bool, ConvexError> {
        let xr = order.rank(x)?;
        Ok(match self {
            ConvexSet::Empty => false,
            ConvexSet::Full => true,
            ConvexSet::FullMinusPoint(u) => order.rank(u)? != xr,
            ConvexSet::Interval {
                a,
                b,
                left_closed,
                right_closed,
            } => {
                let ar = order.rank(a)?;
                let br = order.rank(b)?;
                if xr == ar && xr == br {
                    *left_closed && *right_closed
                } else if xr == ar {
                    *left_closed
                } else if xr == br {
                    *right_closed
                } else if ar == br {
                    false
                } else {
                    order.bracket_ranks(ar, xr, br)
                }
            }
        })
    }

    /// Member ranks in the host.
    pub fn member_ranks(
        &self,
        order: &FiniteCircularOrder,
    ) -> Result<BTreeSet<usize>, ConvexError> {
        let mut out = BTreeSet::new();
        for i in 0..order.len() {
            if self.contains(order, order.element(i))? {
                out.insert(i);
            }
        }
        Ok(out)
    }

    pub fn member_elements(
        &self,
        order: &FiniteCircularOrder,
    ) -> Result<Vec<String>, ConvexError> {
        Ok(self
            .member_ranks(order)?
            .into_iter()
            .map(|i| order.element(i).to_string())
            .collect())
    }

    /// Same member set over the given host.
    pub fn same_set(
        &self,
        other: &ConvexSet,
        order: &FiniteCircularOrder,
    ) -> Result<bool, ConvexError> {
        Ok(self.member_ranks(order)? == other.member_ranks(order)?)
    }

    /// Canonical shape for the member set: `Empty`, `Full`, `FullMinusPoint`,
    /// or the closed interval whose endpoints lie in the set.
    pub fn normalize(&self, order: &FiniteCircularOrder) -> Result<ConvexSet, ConvexError> {
        let ranks = self.member_ranks(order)?;
        Ok(normal_form_of_ranks(order, &ranks)
            .expect("members of a convex set form a cyclic run"))
    }

    /// Complement, normalized over the host. Complements of convex sets are
    /// convex, so this always yields a `ConvexSet`.
    pub fn complement(&self, order: &FiniteCircularOrder) -> Result<ConvexSet, ConvexError> {
        let members = self.member_ranks(order)?;
        let rest: BTreeSet<usize> = (0..order.len()).filter(|i| !members.contains(i)).collect();
        Ok(normal_form_of_ranks(order, &rest).expect("complement of a cyclic run is a cyclic run"))
    }
}

/// Normal form of an arbitrary rank set, when it is a cyclic run.
fn normal_form_of_ranks(order: &FiniteCircularOrder, ranks: &BTreeSet<usize>) -> Option<ConvexSet> {
    let n = order.len();
    if ranks.is_empty() {
        return Some(ConvexSet::Empty);
    }
    if ranks.len() == n {
        return Some(ConvexSet::Full);
    }
    if ranks.len() == n - 1 {
        let missing = (0..n).find(|i| !ranks.contains(i)).unwrap();
        return Some(ConvexSet::FullMinusPoint(order.element(missing).to_string()));
    }
    // A proper cyclic run has exactly one start: a member whose predecessor is
    // not a member.
    let starts: Vec<usize> = ranks
        .iter()
        .copied()
        .filter(|&i| !ranks.contains(&((i + n - 1) % n)))
        .collect();
    if starts.len() != 1 {
        return None;
    }
    let start = starts[0];
    let len = ranks.len();
    // Contiguity: all of start..start+len must be members.
    if !(0..len).all(|d| ranks.contains(&((start + d) % n))) {
        return None;
    }
    let end = (start + len - 1) % n;
    Some(ConvexSet::Interval {
        a: order.element(start).to_string(),
        b: order.element(end).to_string(),
        left_closed: true,
        right_closed: true,
    })
}

/// Convexity test straight from the definition: for every pair of members, one
/// of the two closed arcs between them stays inside the subset. Returns the
/// normal form when convex.
pub fn is_convex(
    order: &FiniteCircularOrder,
    subset: &[&str],
) -> Result<Option<ConvexSet>, ConvexError> {
    let mut ranks = BTreeSet::new();
    for e in subset {
        ranks.insert(order.rank(e)?);
    }
    let inside = |i: usize| ranks.contains(&i);
    let n = order.len();
    for &a in &ranks {
        for &b in &ranks {
            if a == b {
                continue;
            }
            let fwd_ok = {
                let mut i = (a + 1) % n;
                let mut ok = true;
                while i != b {
                    if !inside(i) {
                        ok = false;
                        break;
                    }
                    i = (i + 1) % n;
                }
                ok
            };
            let bwd_ok = {
                let mut i = (b + 1) % n;
                let mut ok = true;
                while i != a {
                    if !inside(i) {
                        ok = false;
                        break;
                    }
                    i = (i + 1) % n;
                }
                ok
            };
            if !fwd_ok && !bwd_ok {
                return Ok(None);
            }
        }
    }
    Ok(Some(
        normal_form_of_ranks(order, &ranks).expect("pairwise arc condition forces a cyclic run"),
    ))
}

/// Case labels for open-interval intersection, in dispatch order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntersectionCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl std::fmt::Display for IntersectionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IntersectionCase::A => "a",
            IntersectionCase::B => "b",
            IntersectionCase::C => "c",
            IntersectionCase::D => "d",
            IntersectionCase::E => "e",
            IntersectionCase::F => "f",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalIntersection {
    pub case: IntersectionCase,
    /// Open intervals, empties dropped, sorted by left-endpoint rank.
    pub components: Vec<ConvexSet>,
}

/// Intersection of two open intervals by endpoint case analysis (never by
/// point enumeration). Intervals are given by their endpoints and must each be
/// proper (`a != b`).
pub fn intersect_intervals(
    order: &FiniteCircularOrder,
    i1: (&str, &str),
    i2: (&str, &str),
) -> Result<IntervalIntersection, ConvexError> {
    let a1 = order.rank(i1.0)?;
    let b1 = order.rank(i1.1)?;
    let a2 = order.rank(i2.0)?;
    let b2 = order.rank(i2.1)?;
    if a1 == b1 {
        return Err(ConvexError::DegenerateInterval(i1.0.to_string()));
    }
    if a2 == b2 {
        return Err(ConvexError::DegenerateInterval(i2.0.to_string()));
    }

    // Membership in arcs between two *distinct* ranks.
    let oo = |x: usize, u: usize, v: usize| x != u && x != v && order.bracket_ranks(u, x, v);
    let co = |x: usize, u: usize, v: usize| x == u || oo(x, u, v);
    let oc = |x: usize, u: usize, v: usize| x == v || oo(x, u, v);
    let cc = |x: usize, u: usize, v: usize| x == u || x == v || oo(x, u, v);

    let (case, raw): (IntersectionCase, Vec<(usize, usize)>) =
        if co(a2, b1, a1) && oc(b2, a2, a1) {
            (IntersectionCase::A, vec![])
        } else if oc(a2, b1, a1) && co(b2, b1, a2) {
            (IntersectionCase::B, vec![(a1, b1)])
        } else if cc(a2, b1, a1) && cc(b2, a1, b1) {
            (IntersectionCase::C, vec![(a1, b2)])
        } else if oc(a2, a1, b1) && co(b2, a1, a2) {
            (IntersectionCase::D, vec![(a1, b2), (a2, b1)])
        } else if co(a2, a1, b1) && oc(b2, a2, b1) {
            (IntersectionCase::E, vec![(a2, b2)])
        } else if co(a2, a1, b1) && cc(b2, b1, a1) {
            (IntersectionCase::F, vec![(a2, b1)])
        } else {
            unreachable!("interval endpoint configuration escapes the six cases")
        };

    let mut components: Vec<(usize, usize)> = raw
        .into_iter()
        .filter(|&(u, v)| u != v && order.forward(u, v) != 1)
        .collect();
    components.sort_by_key(|&(u, _)| u);
    let components = components
        .into_iter()
        .map(|(u, v)| {
            ConvexSet::open(order.element(u), order.element(v))
                .expect("endpoints distinct after the empty filter")
        })
        .collect();
    Ok(IntervalIntersection { case, components })
}

/// Cyclic position of three pairwise-disjoint nonempty convex subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreePosition {
    /// `[A, B, C]`: every choice of representatives is in bracket position.
    Abc,
    /// `[A, C, B]` likewise.
    Acb,
}

pub fn three_convex_position(
    order: &FiniteCircularOrder,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<ThreePosition, ConvexError> {
    for s in [a, b, c] {
        if s.is_empty() {
            return Err(ConvexError::EmptySubset);
        }
        if is_convex(order, s)?.is_none() {
            return Err(ConvexError::NotConvex(
                s.iter().map(|x| x.to_string()).collect(),
            ));
        }
    }
    for (s, t) in [(a, b), (a, c), (b, c)] {
        for x in s {
            if t.contains(x) {
                return Err(ConvexError::NotDisjoint(x.to_string()));
            }
        }
    }
    let pos = if order.bracket(a[0], b[0], c[0])? {
        ThreePosition::Abc
    } else {
        ThreePosition::Acb
    };
    #[cfg(debug_assertions)]
    {
        // The representative choice cannot matter.
        for x in a {
            for y in b {
                for z in c {
                    debug_assert_eq!(
                        order.bracket(x, y, z)?,
                        pos == ThreePosition::Abc,
                        "inconsistent triple position for ({x}, {y}, {z})"
                    );
                }
            }
        }
    }
    Ok(pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: elementwise membership intersection.
    fn brute_intersection(
        order: &FiniteCircularOrder,
        i1: (&str, &str),
        i2: (&str, &str),
    ) -> BTreeSet<usize> {
        let s1 = ConvexSet::open(i1.0, i1.1).unwrap().member_ranks(order).unwrap();
        let s2 = ConvexSet::open(i2.0, i2.1).unwrap().member_ranks(order).unwrap();
        s1.intersection(&s2).copied().collect()
    }

    fn result_ranks(
        order: &FiniteCircularOrder,
        result: &IntervalIntersection,
    ) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for comp in &result.components {
            out.extend(comp.member_ranks(order).unwrap());
        }
        out
    }

    #[test]
    fn case_examples() {
        let c8 = FiniteCircularOrder::cyclic(8);
        let r = intersect_intervals(&c8, ("0", "5"), ("3", "1")).unwrap();
        assert_eq!(r.case, IntersectionCase::D);
        assert_eq!(r.components, vec![ConvexSet::open("3", "5").unwrap()]);
        assert_eq!(
            result_ranks(&c8, &r),
            brute_intersection(&c8, ("0", "5"), ("3", "1"))
        );

        let r = intersect_intervals(&c8, ("0", "4"), ("4", "0")).unwrap();
        assert_eq!(r.case, IntersectionCase::A);
        assert!(r.components.is_empty());

        let c12 = FiniteCircularOrder::cyclic(12);
        let r = intersect_intervals(&c12, ("0", "6"), ("4", "2")).unwrap();
        assert_eq!(r.case, IntersectionCase::D);
        assert_eq!(
            r.components,
            vec![
                ConvexSet::open("0", "2").unwrap(),
                ConvexSet::open("4", "6").unwrap()
            ]
        );
    }

    #[test]
    fn exhaustive_against_membership_oracle() {
        use std::collections::HashMap;
        let mut case_hits: HashMap<IntersectionCase, usize> = HashMap::new();
        for n in 3..=7 {
            let order = FiniteCircularOrder::cyclic(n);
            for a1 in 0..n {
                for b1 in 0..n {
                    if a1 == b1 {
                        continue;
                    }
                    for a2 in 0..n {
                        for b2 in 0..n {
                            if a2 == b2 {
                                continue;
                            }
                            let i1 = (order.element(a1).to_string(), order.element(b1).to_string());
                            let i2 = (order.element(a2).to_string(), order.element(b2).to_string());
                            let r = intersect_intervals(
                                &order,
                                (&i1.0, &i1.1),
                                (&i2.0, &i2.1),
                            )
                            .unwrap();
                            *case_hits.entry(r.case).or_default() += 1;
                            assert_eq!(
                                result_ranks(&order, &r),
                                brute_intersection(&order, (&i1.0, &i1.1), (&i2.0, &i2.1)),
                                "n={n} ({a1},{b1}) ∩ ({a2},{b2}) case {:?}",
                                r.case
                            );
                        }
                    }
                }
            }
        }
        assert_eq!(case_hits.len(), 6, "all six cases must occur: {case_hits:?}");
    }

    #[test]
    fn convexity_examples() {
        let c6 = FiniteCircularOrder::cyclic(6);
        let form = is_convex(&c6, &["1", "2", "3"]).unwrap().unwrap();
        assert_eq!(form, ConvexSet::closed("1", "3").unwrap());
        assert!(is_convex(&c6, &["0", "3"]).unwrap().is_none());
        assert_eq!(is_convex(&c6, &[]).unwrap().unwrap(), ConvexSet::Empty);
        assert_eq!(
            is_convex(&c6, &["0", "1", "2", "3", "4", "5"]).unwrap().unwrap(),
            ConvexSet::Full
        );
        assert_eq!(
            is_convex(&c6, &["1", "2", "3", "4", "5"]).unwrap().unwrap(),
            ConvexSet::FullMinusPoint("0".to_string())
        );
    }

    #[test]
    fn complement_of_convex_is_convex() {
        let c7 = FiniteCircularOrder::cyclic(7);
        let shapes = [
            ConvexSet::Empty,
            ConvexSet::Full,
            ConvexSet::FullMinusPoint("2".to_string()),
            ConvexSet::open("1", "5").unwrap(),
            ConvexSet::closed("1", "5").unwrap(),
            ConvexSet::interval("1", "5", true, false).unwrap(),
            ConvexSet::interval("1", "5", false, true).unwrap(),
            ConvexSet::singleton("3"),
        ];
        for s in &shapes {
            let comp = s.complement(&c7).unwrap();
            let members: Vec<String> = comp.member_elements(&c7).unwrap();
            let refs: Vec<&str> = members.iter().map(|x| x.as_str()).collect();
            assert!(is_convex(&c7, &refs).unwrap().is_some(), "{s:?}");
            // Double complement restores the member set.
            let back = comp.complement(&c7).unwrap();
            assert!(back.same_set(s, &c7).unwrap(), "{s:?}");
        }
    }

    #[test]
    fn open_singleton_rejected() {
        assert!(matches!(
            ConvexSet::open("3", "3"),
            Err(ConvexError::DegenerateInterval(_))
        ));
        assert_eq!(
            ConvexSet::singleton("3").member_elements(&FiniteCircularOrder::cyclic(5)).unwrap(),
            vec!["3".to_string()]
        );
    }

    #[test]
    fn three_position_examples() {
        let c9 = FiniteCircularOrder::cyclic(9);
        assert_eq!(
            three_convex_position(&c9, &["0", "1"], &["3"], &["6", "7"]).unwrap(),
            ThreePosition::Abc
        );
        assert_eq!(
            three_convex_position(&c9, &["0", "1"], &["6", "7"], &["3"]).unwrap(),
            ThreePosition::Acb
        );
        assert!(matches!(
            three_convex_position(&c9, &["0", "1"], &["1", "2"], &["5"]),
            Err(ConvexError::NotDisjoint(_))
        ));
        assert!(matches!(
            three_convex_position(&c9, &["0", "4"], &["2"], &["6"]),
            Err(ConvexError::NotConvex(_))
        ));
    }

    #[test]
    fn singleton_neighbourhoods_witness_openness() {
        let c5 = FiniteCircularOrder::cyclic(5);
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let (a, b, c) = (i.to_string(), j.to_string(), k.to_string());
                    let expected = if c5.bracket(&a, &b, &c).unwrap() {
                        ThreePosition::Abc
                    } else {
                        ThreePosition::Acb
                    };
                    assert_eq!(
                        three_convex_position(&c5, &[&a], &[&b], &[&c]).unwrap(),
                        expected
                    );
                }
            }
        }
    }
}
