//! Arithmetic in the simplex category.
//!
//! Objects are the finite nonempty ordinals `[n] = {0 < 1 < ... < n}`,
//! morphisms are monotone maps. A map is *active* when it preserves both
//! endpoints and *inert* when it is distance preserving; every map factors
//! uniquely as an active map followed by an inert map. Active maps out of
//! `[k]` correspond to compositions (ordered tuples) of naturals of length
//! `k`, which is the codec the free construction is built on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cat::{CatArrow, CatError, FiniteCategory};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplexError {
    #[error("a monotone map needs at least one value")]
    Empty,
    #[error("values {values:?} are not weakly increasing")]
    NotMonotone { values: Vec<usize> },
    #[error("value {value} exceeds target ordinal [{target}]")]
    ValueOutOfRange { value: usize, target: usize },
    #[error("cannot compose: first map lands in [{first_target}], second starts at [{second_source}]")]
    CompositionMismatch {
        first_target: usize,
        second_source: usize,
    },
    #[error("map is not active: endpoint {endpoint} maps to {value}, not {expected}")]
    NotActive {
        endpoint: usize,
        value: usize,
        expected: usize,
    },
    #[error("map is not inert: gap after position {position}")]
    NotInert { position: usize },
    #[error("index {index} out of range for {what} on [{n}]")]
    IndexOutOfRange {
        index: usize,
        what: &'static str,
        n: usize,
    },
    #[error("[{n}] has no {what}")]
    NoSuchGenerator { what: &'static str, n: usize },
    #[error("generating square candidate failed the pushout check: {0}")]
    NotAPushout(String),
    #[error("category assembly failed: {0}")]
    Category(#[from] CatError),
}

/// A monotone map `[m] -> [n]`; `values[i]` is the image of `i` and
/// `m = values.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrdinalMap", into = "RawOrdinalMap")]
pub struct OrdinalMap {
    values: Vec<usize>,
    target: usize,
}

#[derive(Serialize, Deserialize)]
struct RawOrdinalMap {
    source: usize,
    target: usize,
    values: Vec<usize>,
}

impl TryFrom<RawOrdinalMap> for OrdinalMap {
    type Error = String;

    fn try_from(raw: RawOrdinalMap) -> Result<Self, String> {
        if raw.values.len() != raw.source + 1 {
            return Err(format!(
                "source [{}] needs {} values, got {}",
                raw.source,
                raw.source + 1,
                raw.values.len()
            ));
        }
        OrdinalMap::new(raw.values, raw.target).map_err(|e| e.to_string())
    }
}

impl From<OrdinalMap> for RawOrdinalMap {
    fn from(map: OrdinalMap) -> Self {
        RawOrdinalMap {
            source: map.source(),
            target: map.target,
            values: map.values,
        }
    }
}

impl fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]->[{}]:({})", self.source(), self.target, vals.join(","))
    }
}

impl OrdinalMap {
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self, SimplexError> {
        if values.is_empty() {
            return Err(SimplexError::Empty);
        }
        for pair in values.windows(2) {
            if pair[0] > pair[1] {
                return Err(SimplexError::NotMonotone { values });
            }
        }
        let last = *values.last().unwrap();
        if last > target {
            return Err(SimplexError::ValueOutOfRange {
                value: last,
                target,
            });
        }
        Ok(OrdinalMap { values, target })
    }

    pub fn identity(n: usize) -> Self {
        OrdinalMap {
            values: (0..=n).collect(),
            target: n,
        }
    }

    /// Coface `d^i : [n-1] -> [n]`, the injection missing `i`.
    pub fn coface(i: usize, n: usize) -> Result<Self, SimplexError> {
        if n == 0 {
            return Err(SimplexError::NoSuchGenerator { what: "coface into [0]... cofaces land in [n] with n >= 1", n });
        }
        if i > n {
            return Err(SimplexError::IndexOutOfRange { index: i, what: "coface", n });
        }
        let values = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
        Ok(OrdinalMap { values, target: n })
    }

    /// Codegeneracy `s^i : [n+1] -> [n]`, the surjection repeating `i`.
    pub fn codegeneracy(i: usize, n: usize) -> Result<Self, SimplexError> {
        if i > n {
            return Err(SimplexError::IndexOutOfRange { index: i, what: "codegeneracy", n });
        }
        let values = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
        Ok(OrdinalMap { values, target: n })
    }

    /// The bottom coface `d^0 : [n-1] -> [n]`, `i -> i+1`.
    pub fn outer_bottom(n: usize) -> Result<Self, SimplexError> {
        Self::coface(0, n)
    }

    /// The top coface `d^n : [n-1] -> [n]`, `i -> i`.
    pub fn outer_top(n: usize) -> Result<Self, SimplexError> {
        if n == 0 {
            return Err(SimplexError::NoSuchGenerator { what: "outer top coface", n });
        }
        Self::coface(n, n)
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.target == self.source() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Active: both endpoints are preserved.
    pub fn is_active(&self) -> bool {
        self.values[0] == 0 && *self.values.last().unwrap() == self.target
    }

    /// Inert: distance preserving, i.e. consecutive values step by one.
    pub fn is_inert(&self) -> bool {
        self.values.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn is_surjective(&self) -> bool {
        let mut expect = 0;
        for &v in &self.values {
            if v == expect {
                expect += 1;
            } else if v > expect {
                return false;
            }
        }
        expect == self.target + 1
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    /// All monotone maps `[m] -> [n]` in lexicographic order of value lists.
    pub fn enumerate(m: usize, n: usize) -> Vec<OrdinalMap> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(m + 1);
        fn rec(out: &mut Vec<OrdinalMap>, current: &mut Vec<usize>, m: usize, n: usize) {
            if current.len() == m + 1 {
                out.push(OrdinalMap {
                    values: current.clone(),
                    target: n,
                });
                return;
            }
            let lo = current.last().copied().unwrap_or(0);
            for v in lo..=n {
                current.push(v);
                rec(out, current, m, n);
                current.pop();
            }
        }
        rec(&mut out, &mut current, m, n);
        out
    }

    /// Decomposes into generators: `self = cofaces ∘ codegeneracies`, with the
    /// codegeneracies applied first. Cofaces are listed in application order
    /// (ascending missing values), codegeneracies likewise.
    pub fn generator_word(&self) -> GeneratorWord {
        let mut codegeneracies = Vec::new();
        for j in 0..self.source() {
            if self.values[j] == self.values[j + 1] {
                codegeneracies.push(j);
            }
        }
        // After collapsing repeats the map is injective with the same image;
        // missing values become cofaces, inserted smallest first.
        let mut cofaces = Vec::new();
        let mut image = self.values.clone();
        image.dedup();
        let mut it = image.iter().peekable();
        for v in 0..=self.target {
            match it.peek() {
                Some(&&w) if w == v => {
                    it.next();
                }
                _ => cofaces.push(v),
            }
        }
        GeneratorWord {
            codegeneracies,
            cofaces,
            source: self.source(),
            target: self.target,
        }
    }
}

/// Normal form of a monotone map as codegeneracies followed by cofaces.
///
/// Reading `codegeneracies = [j1 < ... < jq]` and `cofaces = [c1 < ... < cp]`,
/// the map is `d^{cp} ∘ ... ∘ d^{c1} ∘ s^{j1} ∘ ... ∘ s^{jq}` where the
/// rightmost factor applies first; each `d^{ck}` is taken in the ordinal it
/// acts on at that point of the composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub codegeneracies: Vec<usize>,
    pub cofaces: Vec<usize>,
    pub source: usize,
    pub target: usize,
}

impl GeneratorWord {
    /// Recomposes the word into a monotone map; inverse of
    /// [`OrdinalMap::generator_word`].
    pub fn to_map(&self) -> Result<OrdinalMap, SimplexError> {
        let mut acc = OrdinalMap::identity(self.source);
        // s^{j1} ∘ ... ∘ s^{jq} applies the largest index first when peeling
        // from the right, so walk the list in reverse.
        for (step, &j) in self.codegeneracies.iter().rev().enumerate() {
            let s = OrdinalMap::codegeneracy(j, self.source - 1 - step)?;
            acc = compose(&acc, &s)?;
        }
        let mut n = self.source - self.codegeneracies.len();
        for &c in &self.cofaces {
            n += 1;
            let d = OrdinalMap::coface(c, n)?;
            acc = compose(&acc, &d)?;
        }
        Ok(acc)
    }
}

/// `first` applied, then `second`: the pointwise composite
/// `i -> second(first(i))`.
pub fn compose(first: &OrdinalMap, second: &OrdinalMap) -> Result<OrdinalMap, SimplexError> {
    if first.target != second.source() {
        return Err(SimplexError::CompositionMismatch {
            first_target: first.target,
            second_source: second.source(),
        });
    }
    let values = first.values.iter().map(|&v| second.values[v]).collect();
    Ok(OrdinalMap {
        values,
        target: second.target,
    })
}

/// An endpoint-preserving monotone map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActiveMap(OrdinalMap);

impl ActiveMap {
    pub fn new(map: OrdinalMap) -> Result<Self, SimplexError> {
        if map.values[0] != 0 {
            return Err(SimplexError::NotActive {
                endpoint: 0,
                value: map.values[0],
                expected: 0,
            });
        }
        let last = *map.values.last().unwrap();
        if last != map.target {
            return Err(SimplexError::NotActive {
                endpoint: map.source(),
                value: last,
                expected: map.target,
            });
        }
        Ok(ActiveMap(map))
    }

    pub fn as_map(&self) -> &OrdinalMap {
        &self.0
    }

    pub fn into_map(self) -> OrdinalMap {
        self.0
    }

    /// The unique active map `[1] -> [k]`.
    pub fn long(k: usize) -> ActiveMap {
        ActiveMap(OrdinalMap {
            values: vec![0, k],
            target: k,
        })
    }
}

/// A distance-preserving monotone map, `(d^top)^b ∘ (d^bot)^a` with
/// `a = f(0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InertMap(OrdinalMap);

impl InertMap {
    pub fn new(map: OrdinalMap) -> Result<Self, SimplexError> {
        for (pos, w) in map.values.windows(2).enumerate() {
            if w[1] != w[0] + 1 {
                return Err(SimplexError::NotInert { position: pos });
            }
        }
        Ok(InertMap(map))
    }

    /// The inert `[m] -> [n]` with bottom offset `a`; needs `a + m <= n`.
    pub fn from_offset(a: usize, m: usize, n: usize) -> Result<Self, SimplexError> {
        if a + m > n {
            return Err(SimplexError::ValueOutOfRange { value: a + m, target: n });
        }
        Ok(InertMap(OrdinalMap {
            values: (a..=a + m).collect(),
            target: n,
        }))
    }

    pub fn as_map(&self) -> &OrdinalMap {
        &self.0
    }

    pub fn into_map(self) -> OrdinalMap {
        self.0
    }

    /// Number of bottom cofaces in the normal form, `f(0)`.
    pub fn bottom_offset(&self) -> usize {
        self.0.values[0]
    }

    /// Number of top cofaces in the normal form, `n - m - f(0)`.
    pub fn top_offset(&self) -> usize {
        self.0.target - self.0.values.last().unwrap()
    }
}

/// The unique active-inert factorisation `f = inert ∘ active`.
pub fn factorize(f: &OrdinalMap) -> (ActiveMap, InertMap) {
    let base = f.values[0];
    let active_target = f.values.last().unwrap() - base;
    let active = ActiveMap(OrdinalMap {
        values: f.values.iter().map(|&v| v - base).collect(),
        target: active_target,
    });
    let inert = InertMap(OrdinalMap {
        values: (base..=base + active_target).collect(),
        target: f.target,
    });
    (active, inert)
}

/// All inert maps `[m] -> [n]`; there are `n - m + 1` when `m <= n` and none
/// otherwise.
pub fn inert_homset(m: usize, n: usize) -> Vec<InertMap> {
    if m > n {
        return Vec::new();
    }
    (0..=n - m)
        .map(|a| InertMap::from_offset(a, m, n).unwrap())
        .collect()
}

/// A composition: an ordered tuple of naturals. Encodes an active map out of
/// `[len]` by successive partial sums.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Canonical encoding: parts joined by commas, empty tuple is "".
    pub fn encode(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn decode(text: &str) -> Result<Self, SimplexError> {
        if text.is_empty() {
            return Ok(Composition::default());
        }
        let parts: Result<Vec<usize>, _> = text.split(',').map(|p| p.trim().parse()).collect();
        match parts {
            Ok(parts) => Ok(Composition { parts }),
            Err(_) => Err(SimplexError::NotMonotone { values: vec![] }),
        }
    }

    /// The active map `[k] -> [weight]` with `α(i) = n_1 + ... + n_i`.
    pub fn to_active(&self) -> ActiveMap {
        let mut values = Vec::with_capacity(self.parts.len() + 1);
        let mut acc = 0;
        values.push(0);
        for &p in &self.parts {
            acc += p;
            values.push(acc);
        }
        ActiveMap(OrdinalMap {
            values,
            target: acc,
        })
    }

    /// Inverse of [`Composition::to_active`]: consecutive differences.
    pub fn from_active(map: &ActiveMap) -> Self {
        let v = &map.0.values;
        Composition {
            parts: v.windows(2).map(|w| w[1] - w[0]).collect(),
        }
    }

    /// All compositions of `weight` into exactly `len` parts (zeros allowed).
    pub fn enumerate_exact(weight: usize, len: usize) -> Vec<Composition> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(len);
        fn rec(out: &mut Vec<Composition>, current: &mut Vec<usize>, rest: usize, len: usize) {
            if current.len() == len {
                if rest == 0 {
                    out.push(Composition { parts: current.clone() });
                }
                return;
            }
            let slots_left = len - current.len();
            if slots_left == 1 {
                current.push(rest);
                rec(out, current, 0, len);
                current.pop();
                return;
            }
            for v in 0..=rest {
                current.push(v);
                rec(out, current, rest - v, len);
                current.pop();
            }
        }
        rec(&mut out, &mut current, weight, len);
        out
    }

    /// All compositions of length `len` and weight at most `max_weight`.
    pub fn enumerate_bounded(len: usize, max_weight: usize) -> Vec<Composition> {
        (0..=max_weight)
            .flat_map(|w| Self::enumerate_exact(w, len))
            .collect()
    }
}

/// The inert edge inclusion `ρ_i : [1] -> [k]` onto `{i-1, i}`, `1 <= i <= k`.
pub fn inert_rho(i: usize, k: usize) -> Result<InertMap, SimplexError> {
    if i == 0 || i > k {
        return Err(SimplexError::IndexOutOfRange { index: i, what: "edge inclusion", n: k });
    }
    InertMap::from_offset(i - 1, 1, k)
}

/// The inert factor of `α ∘ ρ_i`; its source is `[n_i]` where `n_i` is the
/// `i`-th part of the composition of `α`.
pub fn gamma(alpha: &ActiveMap, i: usize) -> Result<InertMap, SimplexError> {
    let rho = inert_rho(i, alpha.as_map().source())?;
    let composite = compose(rho.as_map(), alpha.as_map())?;
    Ok(factorize(&composite).1)
}

/// A pushout of an active generator along an outer coface, the shape of
/// square the decomposition-space condition turns into a pullback.
///
/// The span is `[m'] <-inert- [m] -active-> [n]` and the square closes at
/// `[n']` via `pushout_inert : [n] -> [n']` and
/// `pushout_active : [m'] -> [n']`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSquare {
    pub active_leg: ActiveMap,
    pub inert_leg: InertMap,
    pub pushout_active: ActiveMap,
    pub pushout_inert: InertMap,
}

impl GeneratingSquare {
    /// Largest ordinal among the four corners. For a codegeneracy square the
    /// inert corner `[m+1]` exceeds the closure `[m]`, so this is the max of
    /// the inert corner and the closure rather than the closure alone.
    pub fn max_object(&self) -> usize {
        self.inert_leg
            .as_map()
            .target()
            .max(self.pushout_inert.as_map().target())
    }

    /// Both legs of the cocone as maps `[m] -> [n']`; equal iff the square
    /// commutes.
    pub fn commutes(&self) -> bool {
        let via_active = compose(self.active_leg.as_map(), self.pushout_inert.as_map());
        let via_inert = compose(self.inert_leg.as_map(), self.pushout_active.as_map());
        match (via_active, via_inert) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Brute-force pushout check: every commuting cocone on the span with
    /// apex `[c]`, `c <= max_apex`, factors uniquely through the closure.
    pub fn verify_pushout(&self, max_apex: usize) -> Result<(), SimplexError> {
        if !self.commutes() {
            return Err(SimplexError::NotAPushout("square does not commute".into()));
        }
        let g = self.active_leg.as_map();
        let f = self.inert_leg.as_map();
        let g2 = self.pushout_active.as_map();
        let f2 = self.pushout_inert.as_map();
        let n_prime = f2.target();
        for c in 0..=max_apex {
            for p in OrdinalMap::enumerate(g.target(), c) {
                for q in OrdinalMap::enumerate(f.target(), c) {
                    let via_g = compose(g, &p).unwrap();
                    let via_f = compose(f, &q).unwrap();
                    if via_g != via_f {
                        continue;
                    }
                    // Mediating maps u : [n'] -> [c] with u∘f2 = p, u∘g2 = q,
                    // counted by propagating both constraints pointwise.
                    let mut determined: Vec<Option<usize>> = vec![None; n_prime + 1];
                    let mut consistent = true;
                    for (i, &v) in f2.values().iter().enumerate() {
                        determined[v] = Some(p.apply(i));
                    }
                    for (i, &v) in g2.values().iter().enumerate() {
                        match determined[v] {
                            Some(w) if w != q.apply(i) => consistent = false,
                            _ => determined[v] = Some(q.apply(i)),
                        }
                    }
                    let count = if !consistent {
                        0
                    } else {
                        count_monotone_extensions(&determined, c)
                    };
                    if count != 1 {
                        return Err(SimplexError::NotAPushout(format!(
                            "cocone (p={p}, q={q}) admits {count} mediating maps"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Number of monotone total extensions `[len-1] -> [c]` of a partial
/// assignment.
fn count_monotone_extensions(partial: &[Option<usize>], c: usize) -> usize {
    fn rec(partial: &[Option<usize>], pos: usize, prev: usize, c: usize) -> usize {
        if pos == partial.len() {
            return 1;
        }
        match partial[pos] {
            Some(v) => {
                if v >= prev {
                    rec(partial, pos + 1, v, c)
                } else {
                    0
                }
            }
            None => (prev..=c)
                .map(|v| rec(partial, pos + 1, v, c))
                .sum(),
        }
    }
    rec(partial, 0, 0, c)
}

/// All generating squares whose active leg `g : [m] -> [n]` is a single inner
/// coface or codegeneracy with `m, n <= span_bound`, paired with both outer
/// cofaces `[m] -> [m+1]`. Closures are computed by formula and certified by
/// the brute-force pushout check with apexes up to `span_bound + 2`.
pub fn generating_squares(span_bound: usize) -> Result<Vec<GeneratingSquare>, SimplexError> {
    let mut squares = Vec::new();
    for m in 1..=span_bound {
        let mut active_legs = Vec::new();
        if m < span_bound {
            for i in 1..=m {
                active_legs.push(OrdinalMap::coface(i, m + 1)?);
            }
        }
        for i in 0..m {
            active_legs.push(OrdinalMap::codegeneracy(i, m - 1)?);
        }
        for g in active_legs {
            let n = g.target();
            for bottom in [true, false] {
                let f = if bottom {
                    OrdinalMap::outer_bottom(m + 1)?
                } else {
                    OrdinalMap::outer_top(m + 1)?
                };
                let g_prime = if bottom {
                    // New bottom point maps to the new bottom point.
                    let mut values = vec![0];
                    values.extend(g.values().iter().map(|&v| v + 1));
                    OrdinalMap::new(values, n + 1)?
                } else {
                    let mut values = g.values().to_vec();
                    values.push(n + 1);
                    OrdinalMap::new(values, n + 1)?
                };
                let f_prime = if bottom {
                    OrdinalMap::outer_bottom(n + 1)?
                } else {
                    OrdinalMap::outer_top(n + 1)?
                };
                let square = GeneratingSquare {
                    active_leg: ActiveMap::new(g.clone())?,
                    inert_leg: InertMap::new(f)?,
                    pushout_active: ActiveMap::new(g_prime)?,
                    pushout_inert: InertMap::new(f_prime)?,
                };
                square.verify_pushout(span_bound + 2)?;
                squares.push(square);
            }
        }
    }
    Ok(squares)
}

pub(crate) fn composition_object_name(c: &Composition) -> String {
    format!("({})", c.encode())
}

pub(crate) fn map_values_name(g: &OrdinalMap) -> String {
    g.values()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The category of active maps `[k] -> [n]` (`k <= k_max`, `n <= n_max`) and
/// commutative squares with arbitrary top leg and inert bottom leg. An arrow
/// into `α` is determined by its top leg `g`, the bottom being the inert part
/// of `α ∘ g`; objects are named by their compositions, arrows by
/// `"tgt|top-values"`.
pub fn active_arrow_category(k_max: usize, n_max: usize) -> Result<FiniteCategory, SimplexError> {
    let mut objects = Vec::new();
    let mut object_comp = Vec::new();
    for k in 0..=k_max {
        for c in Composition::enumerate_bounded(k, n_max) {
            objects.push(composition_object_name(&c));
            object_comp.push(c);
        }
    }
    let object_index: BTreeMap<String, usize> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.clone(), i))
        .collect();

    let mut arrows = Vec::new();
    let mut arrow_tops = Vec::new();
    let mut arrow_key: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    let mut by_src = vec![Vec::new(); objects.len()];
    let mut identities = vec![usize::MAX; objects.len()];
    for (tgt, comp) in object_comp.iter().enumerate() {
        let alpha = comp.to_active();
        let k = comp.len();
        for k_src in 0..=k_max {
            for top in OrdinalMap::enumerate(k_src, k) {
                let (src_active, _) = factorize(&compose(&top, alpha.as_map()).unwrap());
                let src_comp = Composition::from_active(&src_active);
                let src = object_index[&composition_object_name(&src_comp)];
                let name = format!("{}|{}", objects[tgt], map_values_name(&top));
                let idx = arrows.len();
                arrows.push(CatArrow { name, src, tgt });
                arrow_key.insert((tgt, top.values().to_vec()), idx);
                by_src[src].push(idx);
                if src == tgt && top.is_identity() {
                    identities[tgt] = idx;
                }
                arrow_tops.push(top);
            }
        }
    }

    let mut compose_table = BTreeMap::new();
    for (first_idx, first) in arrows.iter().enumerate() {
        for &second_idx in &by_src[first.tgt] {
            let second_tgt = arrows[second_idx].tgt;
            let combined = compose(&arrow_tops[first_idx], &arrow_tops[second_idx]).unwrap();
            let composite = arrow_key[&(second_tgt, combined.values().to_vec())];
            compose_table.insert((first_idx, second_idx), composite);
        }
    }

    Ok(FiniteCategory::new(objects, arrows, identities, compose_table)?)
}

/// The inert part of the simplex category on objects `0..=bound`, arrows
/// named `"m->n@a"` with `a` the bottom offset.
pub fn delta_inert_category(bound: usize) -> Result<FiniteCategory, SimplexError> {
    let objects: Vec<String> = (0..=bound).map(|n| n.to_string()).collect();
    let mut arrows = Vec::new();
    let mut key: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (m, identity) in identities.iter_mut().enumerate() {
        for n in m..=bound {
            for inert in inert_homset(m, n) {
                let a = inert.bottom_offset();
                let idx = arrows.len();
                arrows.push(CatArrow {
                    name: inert_arrow_name(m, n, a),
                    src: m,
                    tgt: n,
                });
                key.insert((m, n, a), idx);
                if m == n {
                    *identity = idx;
                }
            }
        }
    }
    let mut compose_table = BTreeMap::new();
    for (&(m, n, a), &i) in &key {
        for (&(n2, p, a2), &j) in &key {
            if n2 != n {
                continue;
            }
            compose_table.insert((i, j), key[&(m, p, a + a2)]);
        }
    }
    Ok(FiniteCategory::new(objects, arrows, identities, compose_table)?)
}

/// Canonical arrow name used by [`delta_inert_category`].
pub fn inert_arrow_name(m: usize, n: usize, a: usize) -> String {
    format!("{m}->{n}@{a}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn om(values: &[usize], target: usize) -> OrdinalMap {
        OrdinalMap::new(values.to_vec(), target).unwrap()
    }

    #[test]
    fn composition_of_outer_cofaces() {
        // d^0 : [0] -> [1] then d^0 : [1] -> [2] sends 0 to 2.
        let first = OrdinalMap::coface(0, 1).unwrap();
        let second = OrdinalMap::coface(0, 2).unwrap();
        let c = compose(&first, &second).unwrap();
        assert_eq!(c, om(&[2], 2));
    }

    #[test]
    fn rejects_non_monotone_and_out_of_range() {
        assert!(matches!(
            OrdinalMap::new(vec![1, 0], 2),
            Err(SimplexError::NotMonotone { .. })
        ));
        assert!(matches!(
            OrdinalMap::new(vec![0, 3], 2),
            Err(SimplexError::ValueOutOfRange { .. })
        ));
        assert!(matches!(OrdinalMap::new(vec![], 2), Err(SimplexError::Empty)));
    }

    #[test]
    fn factorize_worked_example() {
        // (1,3) : [1] -> [3] = inert (1,2,3) after active (0,2).
        let f = om(&[1, 3], 3);
        let (active, inert) = factorize(&f);
        assert_eq!(active.as_map(), &om(&[0, 2], 2));
        assert_eq!(inert.as_map(), &om(&[1, 2, 3], 3));
        let back = compose(active.as_map(), inert.as_map()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn factorization_is_unique_exhaustively() {
        // Independent oracle: enumerate every (active, inert) pair through
        // every middle object and count how many compose to f.
        for m in 0..=4usize {
            for n in 0..=4usize {
                for f in OrdinalMap::enumerate(m, n) {
                    let mut hits = 0;
                    for mid in 0..=n {
                        for a in OrdinalMap::enumerate(m, mid) {
                            if !a.is_active() {
                                continue;
                            }
                            for i in OrdinalMap::enumerate(mid, n) {
                                if i.is_inert() && compose(&a, &i).unwrap() == f {
                                    hits += 1;
                                }
                            }
                        }
                    }
                    assert_eq!(hits, 1, "active-inert factorizations of {f}");
                    let (a, i) = factorize(&f);
                    assert!(a.as_map().is_active());
                    assert!(i.as_map().is_inert());
                    assert_eq!(compose(a.as_map(), i.as_map()).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn monotone_map_counts() {
        // #Hom([m],[n]) = C(n+m+1, m+1).
        fn binom(n: usize, k: usize) -> usize {
            if k > n {
                return 0;
            }
            let mut r = 1usize;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        }
        for m in 0..=4 {
            for n in 0..=4 {
                assert_eq!(
                    OrdinalMap::enumerate(m, n).len(),
                    binom(n + m + 1, m + 1),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn active_maps_are_compositions() {
        // Act(k) against ℕ^k: the codec is a bijection onto the active part
        // of each homset.
        for k in 0..=3usize {
            for n in 0..=4usize {
                let active: Vec<OrdinalMap> = OrdinalMap::enumerate(k, n)
                    .into_iter()
                    .filter(|f| f.is_active())
                    .collect();
                let comps: Vec<Composition> = Composition::enumerate_exact(n, k);
                assert_eq!(active.len(), comps.len(), "k={k} n={n}");
                for c in &comps {
                    let alpha = c.to_active();
                    assert!(active.contains(alpha.as_map()));
                    assert_eq!(&Composition::from_active(&alpha), c);
                }
            }
        }
        // Act(0) is the singleton identity on [0].
        assert_eq!(Composition::enumerate_exact(0, 0).len(), 1);
        assert!(Composition::enumerate_exact(1, 0).is_empty());
    }

    #[test]
    fn composition_codec_worked_example() {
        let c = Composition::new(vec![2, 3]);
        assert_eq!(c.to_active().as_map(), &om(&[0, 2, 5], 5));
        assert_eq!(c.encode(), "2,3");
        assert_eq!(Composition::decode("2,3").unwrap(), c);
        assert_eq!(Composition::decode("").unwrap(), Composition::default());
    }

    #[test]
    fn inert_homset_counts() {
        for m in 0..=6usize {
            for n in 0..=6usize {
                let hom = inert_homset(m, n);
                let expected = if m <= n { n - m + 1 } else { 0 };
                assert_eq!(hom.len(), expected, "m={m} n={n}");
                // Each is (d^top)^b ∘ (d^bot)^a and determined by f(0).
                for f in &hom {
                    assert_eq!(
                        f.bottom_offset() + m + f.top_offset(),
                        n,
                        "offsets of {}",
                        f.as_map()
                    );
                }
            }
        }
    }

    #[test]
    fn outer_cofaces_generate_inerts() {
        // (d^top)^b ∘ (d^bot)^a reproduces every inert map.
        for m in 0..=3usize {
            for n in m..=5usize {
                for f in inert_homset(m, n) {
                    let a = f.bottom_offset();
                    let b = f.top_offset();
                    let mut acc = OrdinalMap::identity(m);
                    for step in 0..a {
                        acc = compose(&acc, &OrdinalMap::outer_bottom(m + step + 1).unwrap())
                            .unwrap();
                    }
                    for step in 0..b {
                        acc = compose(&acc, &OrdinalMap::outer_top(m + a + step + 1).unwrap())
                            .unwrap();
                    }
                    assert_eq!(&acc, f.as_map());
                }
            }
        }
    }

    #[test]
    fn gamma_restricts_to_parts() {
        // γ_i of the active map of (n_1,...,n_k) has source [n_i].
        let alpha = Composition::new(vec![2, 0, 3]).to_active();
        for (i, expected) in [(1, 2), (2, 0), (3, 3)] {
            let g = gamma(&alpha, i).unwrap();
            assert_eq!(g.as_map().source(), expected, "part {i}");
        }
        // Frozen value: γ_1 is the inert (0,1,2) into [5].
        let g1 = gamma(&alpha, 1).unwrap();
        assert_eq!(g1.as_map(), &om(&[0, 1, 2], 5));
        let g3 = gamma(&alpha, 3).unwrap();
        assert_eq!(g3.as_map(), &om(&[2, 3, 4, 5], 5));
    }

    #[test]
    fn generating_square_worked_example() {
        // Active d^1 : [1] -> [2] against inert d^bot : [1] -> [2] closes at
        // [3] with legs d^bot : [2] -> [3] and d^2 : [2] -> [3].
        let squares = generating_squares(2).unwrap();
        let g = OrdinalMap::coface(1, 2).unwrap();
        let f = OrdinalMap::outer_bottom(2).unwrap();
        let square = squares
            .iter()
            .find(|s| s.active_leg.as_map() == &g && s.inert_leg.as_map() == &f)
            .expect("square present");
        assert_eq!(
            square.pushout_inert.as_map(),
            &OrdinalMap::outer_bottom(3).unwrap()
        );
        assert_eq!(
            square.pushout_active.as_map(),
            &OrdinalMap::coface(2, 3).unwrap()
        );
    }

    #[test]
    fn generating_squares_at_span_one() {
        // Only the codegeneracy spans fit: s^0 : [1] -> [0] against both
        // outer cofaces, with pushed-out inert legs [0] -> [1].
        let squares = generating_squares(1).unwrap();
        assert_eq!(squares.len(), 2);
        for s in &squares {
            assert_eq!(s.active_leg.as_map(), &OrdinalMap::codegeneracy(0, 0).unwrap());
            assert_eq!(s.pushout_inert.as_map().source(), 0);
            assert_eq!(s.pushout_inert.as_map().target(), 1);
        }
    }

    #[test]
    fn generating_squares_all_verify() {
        // The formula-built closures really are pushouts (checked in the
        // constructor); count the families at span 3.
        let squares = generating_squares(3).unwrap();
        // m=1: s^0 with 2 inerts, d^1:[1]->[2] with 2; m=2: s^0,s^1 and
        // d^1,d^2:[2]->[3] with 2 each; m=3: s^0,s^1,s^2 with 2 each.
        assert_eq!(squares.len(), 2 + 2 + 4 + 4 + 6);
        for s in squares {
            assert!(s.commutes());
        }
    }

    #[test]
    fn generator_word_roundtrip_exhaustive() {
        for m in 0..=3usize {
            for n in 0..=3usize {
                for f in OrdinalMap::enumerate(m, n) {
                    let word = f.generator_word();
                    assert_eq!(word.to_map().unwrap(), f, "word of {f}");
                }
            }
        }
    }

    #[test]
    fn long_edge_maps() {
        assert_eq!(ActiveMap::long(0).as_map(), &om(&[0, 0], 0));
        assert_eq!(ActiveMap::long(3).as_map(), &om(&[0, 3], 3));
    }

    #[test]
    fn serde_roundtrip_and_validation() {
        let f = om(&[1, 3], 3);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"source":1,"target":3,"values":[1,3]}"#);
        let back: OrdinalMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let bad: Result<OrdinalMap, _> =
            serde_json::from_str(r#"{"source":1,"target":3,"values":[3,1]}"#);
        assert!(bad.is_err());
        let mismatched: Result<OrdinalMap, _> =
            serde_json::from_str(r#"{"source":2,"target":3,"values":[1,3]}"#);
        assert!(mismatched.is_err());
    }

    #[test]
    fn delta_inert_small_is_a_category() {
        let cat = delta_inert_category(4).unwrap();
        cat.validate_associativity().unwrap();
        assert_eq!(cat.objects().len(), 5);
        let m = cat.object_index("1").unwrap();
        let n = cat.object_index("3").unwrap();
        assert_eq!(cat.hom(m, n).len(), 3);
        assert_eq!(cat.hom(n, m).len(), 0);
    }

    #[test]
    fn active_arrow_category_small_is_a_category() {
        let cat = active_arrow_category(2, 3).unwrap();
        cat.validate_associativity().unwrap();
        // Morphisms into an object over [k] are the maps [k'] -> [k], so the
        // hom-sets out of the empty composition have size one each.
        let empty = cat.object_index("()").unwrap();
        for (tgt, name) in cat.objects().iter().enumerate() {
            let k = Composition::decode(&name[1..name.len() - 1]).unwrap().len();
            let _ = k;
            let out = cat.hom(empty, tgt);
            let expected: usize = cat
                .arrows()
                .iter()
                .filter(|a| a.tgt == tgt && a.src == empty)
                .count();
            assert_eq!(out.len(), expected, "{name}");
        }
    }

    proptest! {
        #[test]
        fn composition_codec_roundtrip(parts in proptest::collection::vec(0usize..7, 0..6)) {
            let c = Composition::new(parts);
            let alpha = c.to_active();
            prop_assert!(alpha.as_map().is_active());
            prop_assert_eq!(Composition::from_active(&alpha), c.clone());
            prop_assert_eq!(Composition::decode(&c.encode()).unwrap(), c);
        }

        #[test]
        fn factorize_composes_back(values in proptest::collection::vec(0usize..6, 1..6)) {
            let mut sorted = values;
            sorted.sort_unstable();
            let target = *sorted.last().unwrap() + 1;
            let f = OrdinalMap::new(sorted, target).unwrap();
            let (a, i) = factorize(&f);
            prop_assert_eq!(compose(a.as_map(), i.as_map()).unwrap(), f);
        }
    }
}
