//! Exact model of an irrational circle rotation: lazy comparison of orbit
//! points through continued-fraction enclosures, finite orbit cycles with
//! optional split labels, the shift action between snapshots, and 0/1 arc
//! codings.

use std::cell::RefCell;
use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::maps::{MapError, OrderMap};
use crate::order::{FiniteCircularOrder, OrderError};
use crate::split::SplitSign;
use crate::variation::{SampledFunction, VariationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SturmianError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Variation(#[from] VariationError),
    #[error("bad angle: {0}")]
    BadAngle(String),
    #[error("index {0} appears twice")]
    DuplicateIndex(i64),
    #[error("split index {0} is not in the orbit set")]
    SplitNotInOrbit(i64),
    #[error("orbit index set must be nonempty")]
    EmptyIndices,
    #[error("comparing an index with itself")]
    NotDistinct(i64),
    #[error("refinement budget exhausted at convergent-denominator product {reached} (threshold {threshold})")]
    BudgetExceeded { reached: String, threshold: String },
}

/// An irrational angle in [0,1) given by its continued fraction: a finite
/// head and an eventually-periodic tail. Convergents are cached append-only.
#[derive(Debug, Clone)]
pub struct IrrationalAngle {
    head: Vec<u64>,
    period: Vec<u64>,
    convergents: RefCell<Vec<(BigInt, BigInt)>>,
}

impl PartialEq for IrrationalAngle {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.period == other.period
    }
}
impl Eq for IrrationalAngle {}

impl IrrationalAngle {
    pub fn new(head: Vec<u64>, period: Vec<u64>) -> Result<Self, SturmianError> {
        if head.is_empty() {
            return Err(SturmianError::BadAngle(
                "need at least the integer part".into(),
            ));
        }
        if period.is_empty() {
            return Err(SturmianError::BadAngle(
                "a rational angle is not allowed: give a periodic tail".into(),
            ));
        }
        if head[1..].iter().chain(period.iter()).any(|&a| a == 0) {
            return Err(SturmianError::BadAngle(
                "continued-fraction coefficients past the first must be ≥ 1".into(),
            ));
        }
        // Canonical form: primitive period, then absorb matching trailing
        // head coefficients by rotating the period. Equal angles written
        // differently (e.g. `[0;1,1,(1)]` vs `[0;(1)]`) compare equal.
        let mut head = head;
        let mut period = period;
        for d in 1..=period.len() / 2 {
            if period.len().is_multiple_of(d) && (d..period.len()).all(|i| period[i] == period[i % d]) {
                period.truncate(d);
                break;
            }
        }
        while head.len() > 1 && head.last() == period.last() {
            head.pop();
            let last = period.pop().unwrap();
            period.insert(0, last);
        }
        Ok(IrrationalAngle {
            head,
            period,
            convergents: RefCell::new(Vec::new()),
        })
    }

    /// 1/φ = [0; 1, 1, 1, …].
    pub fn golden() -> Self {
        IrrationalAngle::new(vec![0], vec![1]).unwrap()
    }

    /// Syntax: `[a0;a1,a2,(b1,b2)]` — parenthesized block repeats forever —
    /// or `[a0;a1,a1,...]` where the trailing `...` repeats the last
    /// coefficient.
    pub fn parse(text: &str) -> Result<Self, SturmianError> {
        let bad = |msg: &str| SturmianError::BadAngle(format!("{msg}: `{text}`"));
        let t = text.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| bad("angle must be bracketed"))?;
        let (a0, rest) = t.split_once(';').ok_or_else(|| bad("missing `;`"))?;
        let a0: u64 = a0.trim().parse().map_err(|_| bad("bad integer part"))?;
        let mut head = vec![a0];
        let rest = rest.trim();
        let (head_part, period) = if let Some(open) = rest.find('(') {
            let close = rest.rfind(')').ok_or_else(|| bad("unclosed `(`"))?;
            let inside = &rest[open + 1..close];
            let period = inside
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| bad("bad coefficient")))
                .collect::<Result<Vec<_>, _>>()?;
            (rest[..open].trim_end_matches([',', ' ']), period)
        } else if let Some(repeating) = rest.strip_suffix("...") {
            let toks: Vec<&str> = repeating
                .trim_end_matches([',', ' '])
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .collect();
            let last = toks.last().ok_or_else(|| bad("no repeating coefficient"))?;
            let last: u64 = last.trim().parse().map_err(|_| bad("bad coefficient"))?;
            return {
                for tok in &toks {
                    head.push(tok.trim().parse().map_err(|_| bad("bad coefficient"))?);
                }
                IrrationalAngle::new(head, vec![last])
            };
        } else {
            return Err(bad("angle must be irrational: add `(period)` or `...`"));
        };
        for tok in head_part.split(',').filter(|s| !s.trim().is_empty()) {
            head.push(tok.trim().parse().map_err(|_| bad("bad coefficient"))?);
        }
        IrrationalAngle::new(head, period)
    }

    fn coefficient(&self, k: usize) -> u64 {
        if k < self.head.len() {
            self.head[k]
        } else {
            self.period[(k - self.head.len()) % self.period.len()]
        }
    }

    /// (p_k, q_k) with the standard recurrence.
    pub fn convergent(&self, k: usize) -> (BigInt, BigInt) {
        let mut cache = self.convergents.borrow_mut();
        while cache.len() <= k {
            let i = cache.len();
            let a = BigInt::from(self.coefficient(i));
            let (p1, q1) = if i >= 1 {
                cache[i - 1].clone()
            } else {
                (BigInt::one(), BigInt::zero())
            };
            let (p2, q2) = if i >= 2 {
                cache[i - 2].clone()
            } else if i == 1 {
                (BigInt::one(), BigInt::zero())
            } else {
                (BigInt::zero(), BigInt::one())
            };
            cache.push((&a * &p1 + p2, &a * &q1 + q2));
        }
        cache[k].clone()
    }

    /// Rational interval with the angle strictly inside, from consecutive
    /// convergents; width 1/(q_k·q_{k+1}).
    pub fn bracket(&self, k: usize) -> (BigRational, BigRational) {
        let (p0, q0) = self.convergent(k);
        let (p1, q1) = self.convergent(k + 1);
        let c0 = BigRational::new(p0, q0);
        let c1 = BigRational::new(p1, q1);
        if c0 < c1 {
            (c0, c1)
        } else {
            (c1, c0)
        }
    }

    /// Enclosure of {n·α}, or None while the product n·α straddles an
    /// integer at this precision.
    fn fractional_enclosure(
        &self,
        n: i64,
        k: usize,
    ) -> Option<(BigRational, BigRational)> {
        if n == 0 {
            return Some((BigRational::zero(), BigRational::zero()));
        }
        let (a_lo, a_hi) = self.bracket(k);
        let nn = BigRational::from_integer(BigInt::from(n));
        let (x, y) = (&nn * a_lo, &nn * a_hi);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let f_lo = lo.floor();
        if f_lo != hi.floor() {
            return None;
        }
        Some((lo - &f_lo, hi - f_lo))
    }
}

impl std::fmt::Display for IrrationalAngle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{};", self.head[0])?;
        for (i, a) in self.head[1..].iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        if self.head.len() > 1 {
            write!(f, ",")?;
        }
        write!(f, "(")?;
        for (i, a) in self.period.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")]")
    }
}

/// A position on the circle: an exact rational in [0,1) or the fractional
/// part of an orbit multiple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcEndpoint {
    Rational(BigRational),
    Orbit(i64),
}

fn default_threshold(scale: &BigInt) -> BigInt {
    let scale = if scale.is_zero() {
        BigInt::one()
    } else {
        scale.abs()
    };
    BigInt::from(4) * scale * (BigInt::one() << 64)
}

fn endpoint_scale(e: &ArcEndpoint) -> BigInt {
    match e {
        ArcEndpoint::Rational(q) => q.denom().abs(),
        ArcEndpoint::Orbit(n) => BigInt::from(n.unsigned_abs()),
    }
}

/// Compare two circle positions exactly by refining their enclosures until
/// they separate (or both are exact). Equality is only reachable between
/// exact positions and between equal orbit indices; an exhausted budget
/// never reports it.
fn circle_cmp(
    alpha: &IrrationalAngle,
    x: &ArcEndpoint,
    y: &ArcEndpoint,
    threshold: &BigInt,
) -> Result<Ordering, SturmianError> {
    use ArcEndpoint::*;
    match (x, y) {
        (Rational(a), Rational(b)) => return Ok(a.cmp(b)),
        (Orbit(m), Orbit(n)) if m == n => return Ok(Ordering::Equal),
        _ => {}
    }
    let enclosure = |e: &ArcEndpoint, k: usize| -> Option<(BigRational, BigRational)> {
        match e {
            Rational(q) => Some((q.clone(), q.clone())),
            Orbit(n) => alpha.fractional_enclosure(*n, k),
        }
    };
    let mut k = 0;
    loop {
        if let (Some((lo1, hi1)), Some((lo2, hi2))) = (enclosure(x, k), enclosure(y, k)) {
            let exact1 = lo1 == hi1;
            let exact2 = lo2 == hi2;
            if exact1 && exact2 {
                return Ok(lo1.cmp(&lo2));
            }
            // An irrational value sits strictly inside its enclosure, so a
            // shared endpoint still separates.
            if hi1 <= lo2 {
                return Ok(Ordering::Less);
            }
            if hi2 <= lo1 {
                return Ok(Ordering::Greater);
            }
        }
        let (_, q0) = alpha.convergent(k);
        let (_, q1) = alpha.convergent(k + 1);
        let product = q0 * q1;
        if product > *threshold {
            return Err(SturmianError::BudgetExceeded {
                reached: product.to_string(),
                threshold: threshold.to_string(),
            });
        }
        k += 1;
    }
}

/// Decide {m·α} vs {n·α} for distinct indices. The default refinement budget
/// stops once q_k·q_{k+1} exceeds 4·max(|m|,|n|,1)·2⁶⁴.
pub fn compare_orbit(
    alpha: &IrrationalAngle,
    m: i64,
    n: i64,
) -> Result<Ordering, SturmianError> {
    let scale = BigInt::from(m.unsigned_abs().max(n.unsigned_abs()).max(1));
    compare_orbit_budgeted(alpha, m, n, &default_threshold(&scale))
}

pub fn compare_orbit_budgeted(
    alpha: &IrrationalAngle,
    m: i64,
    n: i64,
    threshold: &BigInt,
) -> Result<Ordering, SturmianError> {
    if m == n {
        return Err(SturmianError::NotDistinct(m));
    }
    let ord = circle_cmp(
        alpha,
        &ArcEndpoint::Orbit(m),
        &ArcEndpoint::Orbit(n),
        threshold,
    )?;
    debug_assert_ne!(ord, Ordering::Equal);
    Ok(ord)
}

/// A labeled orbit point: index n, optionally carrying a split side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub index: i64,
    pub side: SplitSign,
}

impl OrbitPoint {
    pub fn id(&self) -> String {
        match self.side {
            SplitSign::Minus => format!("{}-", self.index),
            SplitSign::Zero => self.index.to_string(),
            SplitSign::Plus => format!("{}+", self.index),
        }
    }
}

/// A finite snapshot of the rotation orbit: the circular order certified by
/// exact comparison, with split indices contributing adjacent ± pairs.
#[derive(Debug, Clone)]
pub struct OrbitCycle {
    alpha: IrrationalAngle,
    order: FiniteCircularOrder,
    points: Vec<OrbitPoint>,
}

impl OrbitCycle {
    pub fn alpha(&self) -> &IrrationalAngle {
        &self.alpha
    }

    pub fn order(&self) -> &FiniteCircularOrder {
        &self.order
    }

    /// Points aligned with the order's ranks.
    pub fn points(&self) -> &[OrbitPoint] {
        &self.points
    }

    pub fn indices(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .points
            .iter()
            .filter(|p| p.side != SplitSign::Minus)
            .map(|p| p.index)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn split_indices(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .points
            .iter()
            .filter(|p| p.side == SplitSign::Plus)
            .map(|p| p.index)
            .collect();
        out.sort_unstable();
        out
    }
}

/// Order the given indices by fractional part and build the cycle; split
/// indices contribute their + label immediately before their − label.
pub fn orbit_cycle(
    alpha: &IrrationalAngle,
    indices: &[i64],
    split: &[i64],
) -> Result<OrbitCycle, SturmianError> {
    if indices.is_empty() {
        return Err(SturmianError::EmptyIndices);
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(SturmianError::DuplicateIndex(w[0]));
    }
    for s in split {
        if !sorted.contains(s) {
            return Err(SturmianError::SplitNotInOrbit(*s));
        }
    }
    // Sort by fractional part; exact comparison cannot tie on distinct
    // indices, so any comparison error aborts the sort via the buffer.
    let mut failure: Option<SturmianError> = None;
    sorted.sort_by(|&a, &b| match compare_orbit(alpha, a, b) {
        Ok(ord) => ord,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut points = Vec::new();
    for n in sorted {
        if split.contains(&n) {
            points.push(OrbitPoint {
                index: n,
                side: SplitSign::Plus,
            });
            points.push(OrbitPoint {
                index: n,
                side: SplitSign::Minus,
            });
        } else {
            points.push(OrbitPoint {
                index: n,
                side: SplitSign::Zero,
            });
        }
    }
    let order = FiniteCircularOrder::from_elements(points.iter().map(|p| p.id()))?;
    Ok(OrbitCycle {
        alpha: alpha.clone(),
        order,
        points,
    })
}

/// The shift n ↦ n+k as a map from this snapshot onto the shifted one;
/// split sides are preserved. Returns the target cycle and the validated
/// order-preserving map.
pub fn rotation_action(
    cycle: &OrbitCycle,
    k: i64,
) -> Result<(OrbitCycle, OrderMap), SturmianError> {
    let indices: Vec<i64> = cycle.indices().iter().map(|n| n + k).collect();
    let split: Vec<i64> = cycle.split_indices().iter().map(|n| n + k).collect();
    let target = orbit_cycle(&cycle.alpha, &indices, &split)?;
    let pairs: Vec<(String, String)> = cycle
        .points
        .iter()
        .map(|p| {
            let image = OrbitPoint {
                index: p.index + k,
                side: p.side,
            };
            (p.id(), image.id())
        })
        .collect();
    let mut map = OrderMap::circular(cycle.order.clone(), target.order.clone(), &pairs)?;
    let ok = map.validate_cop()?.pass;
    assert!(
        ok && map.is_bijective(),
        "the shift must carry the snapshot order onto the shifted one"
    );
    Ok((target, map))
}

/// Is the position inside the half-open arc [start, end) read forward on
/// the circle? An arc with equal endpoints is empty.
pub fn arc_contains(
    alpha: &IrrationalAngle,
    start: &ArcEndpoint,
    end: &ArcEndpoint,
    pos: &ArcEndpoint,
) -> Result<bool, SturmianError> {
    let scale = endpoint_scale(start)
        .max(endpoint_scale(end))
        .max(endpoint_scale(pos));
    let threshold = default_threshold(&scale);
    let se = circle_cmp(alpha, start, end, &threshold)?;
    if se == Ordering::Equal {
        return Ok(false);
    }
    let sp = circle_cmp(alpha, start, pos, &threshold)?;
    let pe = circle_cmp(alpha, pos, end, &threshold)?;
    let after_start = sp != Ordering::Greater;
    let before_end = pe == Ordering::Less;
    Ok(if se == Ordering::Less {
        after_start && before_end
    } else {
        // The arc wraps through 0.
        after_start || before_end
    })
}

/// The 0/1 coding of the arc [start, end) sampled on an orbit snapshot;
/// split labels take the value of their underlying point.
pub fn sturmian_code(
    cycle: &OrbitCycle,
    start: &ArcEndpoint,
    end: &ArcEndpoint,
) -> Result<SampledFunction, SturmianError> {
    let values = cycle
        .points
        .iter()
        .map(|p| {
            arc_contains(&cycle.alpha, start, end, &ArcEndpoint::Orbit(p.index)).map(|inside| {
                if inside {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampledFunction::circular(cycle.order.clone(), values)?)
}

/// Convenience: the coding word over plain indices in index order.
pub fn code_word(
    alpha: &IrrationalAngle,
    start: &ArcEndpoint,
    end: &ArcEndpoint,
    indices: &[i64],
) -> Result<String, SturmianError> {
    indices
        .iter()
        .map(|&n| {
            arc_contains(alpha, start, end, &ArcEndpoint::Orbit(n))
                .map(|inside| if inside { '1' } else { '0' })
        })
        .collect()
}
