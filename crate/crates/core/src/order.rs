//! Finite circular and linear orders.
//!
//! A finite circular order is stored as a rank walk: `elements[i]` is the point
//! of rank `i`, and the ternary bracket is derived from rank arithmetic. Raw
//! ternary-relation tables appear only as *verifier input*: anything the rest of
//! the crate builds on is rank-backed by construction.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("elements must be pairwise distinct")]
    NotDistinct,
    #[error("triple ({0}, {1}, {2}) repeats a coordinate")]
    MalformedTriple(String, String, String),
    #[error("empty host")]
    EmptyHost,
    #[error("linear order is not a cut of the host: {0}")]
    NotACut(String),
}

/// Circular order on finitely many named points, identified by its rank walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCircularOrder {
    elements: Vec<String>,
    index: HashMap<String, usize>,
}

/// Linear order on finitely many named points, identified by its rank walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLinearOrder {
    elements: Vec<String>,
    index: HashMap<String, usize>,
}

fn build_index(elements: &[String]) -> Result<HashMap<String, usize>, OrderError> {
    let mut index = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(OrderError::DuplicateElement(e.clone()));
        }
    }
    Ok(index)
}

impl FiniteCircularOrder {
    pub fn from_elements<I, S>(elements: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let index = build_index(&elements)?;
        Ok(Self { elements, index })
    }

    /// The standard cycle `C_n` with elements `"0" .. "n-1"` in rank order.
    pub fn cyclic(n: usize) -> Self {
        Self::from_elements((0..n).map(|i| i.to_string())).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn rank(&self, e: &str) -> Result<usize, OrderError> {
        self.index
            .get(e)
            .copied()
            .ok_or_else(|| OrderError::UnknownElement(e.to_string()))
    }

    pub fn contains(&self, e: &str) -> bool {
        self.index.contains_key(e)
    }

    pub fn element(&self, rank: usize) -> &str {
        &self.elements[rank]
    }

    /// Forward rank distance from `i` to `j` (0 when equal).
    pub fn forward(&self, i: usize, j: usize) -> usize {
        let n = self.len();
        (j + n - i) % n
    }

    /// Rank-level bracket: `[i, j, k]` iff walking forward from `i` meets `j`
    /// strictly before `k`. Ranks must be pairwise distinct.
    pub fn bracket_ranks(&self, i: usize, j: usize, k: usize) -> bool {
        debug_assert!(i != j && j != k && i != k);
        self.forward(i, j) < self.forward(i, k)
    }

    /// `[a, b, c]` for pairwise-distinct named points.
    pub fn bracket(&self, a: &str, b: &str, c: &str) -> Result<bool, OrderError> {
        let (i, j, k) = (self.rank(a)?, self.rank(b)?, self.rank(c)?);
        if i == j || j == k || i == k {
            return Err(OrderError::NotDistinct);
        }
        Ok(self.bracket_ranks(i, j, k))
    }

    /// Cut the circle at `z`: the linear order with `z` least and
    /// `a < b  iff  [z, a, b]`.
    pub fn cut_at(&self, z: &str) -> Result<Cut, OrderError> {
        let r = self.rank(z)?;
        let n = self.len();
        let chain: Vec<String> = (0..n)
            .map(|d| self.elements[(r + d) % n].clone())
            .collect();
        Ok(Cut {
            host: self.clone(),
            chain: FiniteLinearOrder::from_elements(chain).expect("rotation keeps distinctness"),
        })
    }

    /// Same cyclic order, rank walks allowed to start at different points.
    pub fn equivalent(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        let Some(&shift) = other.index.get(&self.elements[0]) else {
            return false;
        };
        let n = self.len();
        (0..n).all(|d| self.elements[d] == other.elements[(shift + d) % n])
    }

    /// All nonempty subsets in host-cyclic order (canonical rank-sorted walks):
    /// exactly the injective cycles up to rotation.
    pub fn injective_cycles(&self) -> Vec<Vec<String>> {
        let n = self.len();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let cycle: Vec<String> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.elements[i].clone())
                .collect();
            out.push(cycle);
        }
        out
    }
}

impl FiniteLinearOrder {
    pub fn from_elements<I, S>(elements: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let index = build_index(&elements)?;
        Ok(Self { elements, index })
    }

    /// The standard chain with elements `"0" .. "n-1"`.
    pub fn chain(n: usize) -> Self {
        Self::from_elements((0..n).map(|i| i.to_string())).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn rank(&self, e: &str) -> Result<usize, OrderError> {
        self.index
            .get(e)
            .copied()
            .ok_or_else(|| OrderError::UnknownElement(e.to_string()))
    }

    pub fn contains(&self, e: &str) -> bool {
        self.index.contains_key(e)
    }

    pub fn element(&self, rank: usize) -> &str {
        &self.elements[rank]
    }

    pub fn lt(&self, a: &str, b: &str) -> Result<bool, OrderError> {
        Ok(self.rank(a)? < self.rank(b)?)
    }

    pub fn least(&self) -> Option<&str> {
        self.elements.first().map(|s| s.as_str())
    }

    pub fn greatest(&self) -> Option<&str> {
        self.elements.last().map(|s| s.as_str())
    }
}

/// Standard circularization: `[x, y, z]` iff `x<y<z` or `y<z<x` or `z<x<y`.
/// On rank walks that is simply "reuse the walk as a cyclic walk".
pub fn circ_from_linear(linear: &FiniteLinearOrder) -> FiniteCircularOrder {
    FiniteCircularOrder::from_elements(linear.elements().iter().cloned())
        .expect("linear order has distinct elements")
}

/// A linear order on all points of a circular host, compatible with the host:
/// every increasing triple satisfies the host bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    host: FiniteCircularOrder,
    chain: FiniteLinearOrder,
}

impl Cut {
    /// Validates compatibility: `a < b < c` in the chain implies `[a, b, c]`.
    pub fn new(host: FiniteCircularOrder, chain: FiniteLinearOrder) -> Result<Self, OrderError> {
        if host.len() != chain.len() {
            return Err(OrderError::NotACut("element counts differ".into()));
        }
        for e in chain.elements() {
            if !host.contains(e) {
                return Err(OrderError::UnknownElement(e.clone()));
            }
        }
        let n = chain.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (a, b, c) = (chain.element(i), chain.element(j), chain.element(k));
                    if !host.bracket(a, b, c)? {
                        return Err(OrderError::NotACut(format!(
                            "{a} < {b} < {c} in the chain but [{a}, {b}, {c}] fails"
                        )));
                    }
                }
            }
        }
        Ok(Self { host, chain })
    }

    pub fn host(&self) -> &FiniteCircularOrder {
        &self.host
    }

    pub fn chain(&self) -> &FiniteLinearOrder {
        &self.chain
    }
}

/// Classification of a cut. Finite nonempty chains always have a least element,
/// so `Gap` never occurs at this scale; it exists to name the other case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutClass {
    PointCut(String),
    Gap,
}

pub fn classify_cut(cut: &Cut) -> Result<CutClass, OrderError> {
    match cut.chain().least() {
        Some(z) => Ok(CutClass::PointCut(z.to_string())),
        None => Err(OrderError::EmptyHost),
    }
}

/// Cycle test for a tuple of host points (repeats allowed):
/// (1) index triples in cyclic position with pairwise-distinct values must be
///     in host-cyclic position, and
/// (2) equal entries must form one contiguous cyclic block.
pub fn is_cycle(host: &FiniteCircularOrder, tuple: &[&str]) -> Result<bool, OrderError> {
    let ranks: Vec<usize> = tuple
        .iter()
        .map(|e| host.rank(e))
        .collect::<Result<_, _>>()?;
    Ok(is_cycle_ranks(host, &ranks))
}

pub(crate) fn is_cycle_ranks(host: &FiniteCircularOrder, ranks: &[usize]) -> bool {
    let m = ranks.len();
    // (2) contiguity of repeats: for every equal pair, one of the two cyclic
    // index blocks between them must be constant.
    for i in 0..m {
        for k in (i + 1)..m {
            if ranks[i] == ranks[k] {
                let fwd = (i..=k).all(|t| ranks[t] == ranks[i]);
                let bwd = (k..m).chain(0..=i).all(|t| ranks[t] == ranks[i]);
                if !fwd && !bwd {
                    return false;
                }
            }
        }
    }
    // (1) cyclic index triples with distinct values land in host position.
    // [i, j, k] in C_m iff (j - i) mod m < (k - i) mod m.
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                if (j + m - i) % m >= (k + m - i) % m {
                    continue;
                }
                let (x, y, z) = (ranks[i], ranks[j], ranks[k]);
                if x != y && y != z && x != z && !host.bracket_ranks(x, y, z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Explicit ternary relation over a named universe; verifier input only.
#[derive(Debug, Clone)]
pub struct TernaryRelationTable {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    present: Vec<bool>,
}

impl TernaryRelationTable {
    pub fn new<I, S>(elements: I, triples: &[[&str; 3]]) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let index = build_index(&elements)?;
        let n = elements.len();
        let mut table = Self {
            elements,
            index,
            present: vec![false; n * n * n],
        };
        for t in triples {
            table.insert(t[0], t[1], t[2])?;
        }
        Ok(table)
    }

    /// Every triple `[a, b, c]` derived from the order's rank walk.
    pub fn from_order(order: &FiniteCircularOrder) -> Self {
        let n = order.len();
        let elements = order.elements().to_vec();
        let index = build_index(&elements).expect("order elements distinct");
        let mut present = vec![false; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && i != k && order.bracket_ranks(i, j, k) {
                        present[(i * n + j) * n + k] = true;
                    }
                }
            }
        }
        Self {
            elements,
            index,
            present,
        }
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn insert(&mut self, a: &str, b: &str, c: &str) -> Result<(), OrderError> {
        let (i, j, k) = self.lookup(a, b, c)?;
        let pos = self.pos(i, j, k);
        self.present[pos] = true;
        Ok(())
    }

    pub fn remove(&mut self, a: &str, b: &str, c: &str) -> Result<(), OrderError> {
        let (i, j, k) = self.lookup(a, b, c)?;
        let pos = self.pos(i, j, k);
        self.present[pos] = false;
        Ok(())
    }

    fn lookup(&self, a: &str, b: &str, c: &str) -> Result<(usize, usize, usize), OrderError> {
        let i = *self
            .index
            .get(a)
            .ok_or_else(|| OrderError::UnknownElement(a.to_string()))?;
        let j = *self
            .index
            .get(b)
            .ok_or_else(|| OrderError::UnknownElement(b.to_string()))?;
        let k = *self
            .index
            .get(c)
            .ok_or_else(|| OrderError::UnknownElement(c.to_string()))?;
        if i == j || j == k || i == k {
            return Err(OrderError::MalformedTriple(
                a.to_string(),
                b.to_string(),
                c.to_string(),
            ));
        }
        Ok((i, j, k))
    }

    fn pos(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n() + j) * self.n() + k
    }

    pub fn contains_ranks(&self, i: usize, j: usize, k: usize) -> bool {
        self.present[self.pos(i, j, k)]
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.present[self.pos(i, j, k)] {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    fn name(&self, i: usize) -> String {
        self.elements[i].clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Cyclicity,
    Asymmetry,
    Transitivity,
    Totality,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Cyclicity => "Cyclicity",
            Axiom::Asymmetry => "Asymmetry",
            Axiom::Transitivity => "Transitivity",
            Axiom::Totality => "Totality",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Concrete triples exhibiting the failure (present or required-but-absent).
    pub witness: Vec<[String; 3]>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub pass: bool,
    pub violation: Option<AxiomViolation>,
}

/// Check the four circular-order axioms on a raw triple table.
///
/// Scan order: Asymmetry, Totality, Transitivity, Cyclicity — the first failing
/// scan names the axiom. A perturbed relation may violate several axioms at
/// once; the report's witness always genuinely violates the named one.
pub fn verify_circular_axioms(rel: &TernaryRelationTable) -> AxiomReport {
    let n = rel.n();
    let fail = |axiom, witness, note: String| AxiomReport {
        pass: false,
        violation: Some(AxiomViolation {
            axiom,
            witness,
            note,
        }),
    };

    let triples = rel.triples();

    // Asymmetry: [a,b,c] forbids (c,b,a).
    for &(i, j, k) in &triples {
        if rel.contains_ranks(k, j, i) {
            let (a, b, c) = (rel.name(i), rel.name(j), rel.name(k));
            return fail(
                Axiom::Asymmetry,
                vec![
                    [a.clone(), b.clone(), c.clone()],
                    [c.clone(), b.clone(), a.clone()],
                ],
                format!("both ({a}, {b}, {c}) and its reverse are present"),
            );
        }
    }

    // Totality: distinct a,b,c admit [a,b,c] or [a,c,b].
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                if !rel.contains_ranks(i, j, k) && !rel.contains_ranks(i, k, j) {
                    let (a, b, c) = (rel.name(i), rel.name(j), rel.name(k));
                    return fail(
                        Axiom::Totality,
                        vec![[a.clone(), b.clone(), c.clone()]],
                        format!("neither ({a}, {b}, {c}) nor ({a}, {c}, {b}) is present"),
                    );
                }
            }
        }
    }

    // Transitivity: [a,b,c] and [a,c,d] force [a,b,d].
    for &(i, j, k) in &triples {
        for d in 0..n {
            if d == i || d == j || d == k {
                continue;
            }
            if rel.contains_ranks(i, k, d) && !rel.contains_ranks(i, j, d) {
                let (a, b, c, dd) = (rel.name(i), rel.name(j), rel.name(k), rel.name(d));
                return fail(
                    Axiom::Transitivity,
                    vec![
                        [a.clone(), b.clone(), c.clone()],
                        [a.clone(), c.clone(), dd.clone()],
                        [a.clone(), b.clone(), dd.clone()],
                    ],
                    format!(
                        "({a}, {b}, {c}) and ({a}, {c}, {dd}) are present but ({a}, {b}, {dd}) is not"
                    ),
                );
            }
        }
    }

    // Cyclicity: [a,b,c] forces [b,c,a].
    for &(i, j, k) in &triples {
        if !rel.contains_ranks(j, k, i) {
            let (a, b, c) = (rel.name(i), rel.name(j), rel.name(k));
            return fail(
                Axiom::Cyclicity,
                vec![[a.clone(), b.clone(), c.clone()]],
                format!("({a}, {b}, {c}) is present but its rotation ({b}, {c}, {a}) is not"),
            );
        }
    }

    AxiomReport {
        pass: true,
        violation: None,
    }
}

/// Re-check that `violation.witness` genuinely violates `violation.axiom`
/// against the table; used by sweeps to certify reports.
pub fn witness_violates(rel: &TernaryRelationTable, violation: &AxiomViolation) -> bool {
    let rank_of = |e: &str| rel.index.get(e).copied();
    let get = |t: &[String; 3]| -> Option<(usize, usize, usize)> {
        Some((rank_of(&t[0])?, rank_of(&t[1])?, rank_of(&t[2])?))
    };
    match violation.axiom {
        Axiom::Asymmetry => {
            let [t, r] = &violation.witness[..] else {
                return false;
            };
            let (Some((i, j, k)), Some((ri, rj, rk))) = (get(t), get(r)) else {
                return false;
            };
            (ri, rj, rk) == (k, j, i)
                && rel.contains_ranks(i, j, k)
                && rel.contains_ranks(k, j, i)
        }
        Axiom::Totality => {
            let [t] = &violation.witness[..] else {
                return false;
            };
            let Some((i, j, k)) = get(t) else { return false };
            i != j
                && j != k
                && i != k
                && !rel.contains_ranks(i, j, k)
                && !rel.contains_ranks(i, k, j)
        }
        Axiom::Transitivity => {
            let [t1, t2, t3] = &violation.witness[..] else {
                return false;
            };
            let (Some((a, b, c)), Some((a2, c2, d)), Some((a3, b3, d3))) =
                (get(t1), get(t2), get(t3))
            else {
                return false;
            };
            a == a2
                && a == a3
                && c == c2
                && b == b3
                && d == d3
                && rel.contains_ranks(a, b, c)
                && rel.contains_ranks(a, c, d)
                && !rel.contains_ranks(a, b, d)
        }
        Axiom::Cyclicity => {
            let [t] = &violation.witness[..] else {
                return false;
            };
            let Some((i, j, k)) = get(t) else { return false };
            rel.contains_ranks(i, j, k) && !rel.contains_ranks(j, k, i)
        }
    }
}
