//! Presheaves on the inert simplex category and the free simplicial set
//! they generate.
//!
//! An [`InertPresheaf`] is a graded family of finite sets `A_0 .. A_budget`
//! with two face maps `d_bot, d_top : A_n -> A_{n-1}` subject to the single
//! relation `d_top . d_bot = d_bot . d_top`. The free construction [`free`]
//! builds a simplicial set whose `k`-simplices are pairs of a length-`k`
//! composition and an element of the matching grade; it comes with a
//! projection to the nerve of `(N,+)` that is CULF, and [`recover_presheaf`]
//! inverts the construction by reading the fibers of that projection.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::checks::{is_pullback, CheckReport, SetSquare};
use crate::simplex::{Composition, SimplexError};
use crate::sset::{b_nat, Level, SimplicialMap, SsetError, TruncatedSimplicialSet};

#[derive(Debug, Error)]
pub enum PresheafError {
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error("simplex arithmetic: {0}")]
    Simplex(#[from] SimplexError),
    #[error("budget {have} too small, need {needed}")]
    BudgetTooSmall { needed: usize, have: usize },
    #[error("bad free-simplex encoding {0:?}")]
    BadEncoding(String),
    #[error("no 2-simplex over {pattern:?} with long edge {key:?}")]
    MissingLift { key: String, pattern: String },
    #[error("several 2-simplices over {pattern:?} with long edge {key:?}")]
    AmbiguousLift { key: String, pattern: String },
    #[error("face relation fails: {0}")]
    RelationFailure(String),
    #[error("not a presheaf map: {0}")]
    NotPresheafMap(String),
    #[error("the source of the projection is not the given simplicial set")]
    SourceMismatch,
}

/// A presheaf on the inert simplex category: graded sets with two
/// commuting face maps. The relation itself is checked by
/// [`validate_presheaf`], not at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InertPresheaf {
    budget: usize,
    levels: Vec<Level>,
    /// `d_bot[n]` is the table for `A_n -> A_{n-1}`; index 0 is unused.
    d_bot: Vec<Vec<usize>>,
    d_top: Vec<Vec<usize>>,
}

impl InertPresheaf {
    pub fn new(
        budget: usize,
        level_elems: Vec<Vec<String>>,
        d_bot_fn: impl Fn(usize, &str) -> String,
        d_top_fn: impl Fn(usize, &str) -> String,
    ) -> Result<InertPresheaf, PresheafError> {
        assert_eq!(level_elems.len(), budget + 1, "one level per grade 0..=budget");
        let levels: Vec<Level> = level_elems
            .into_iter()
            .enumerate()
            .map(|(n, elems)| Level::from_names_at(elems, n))
            .collect::<Result<_, _>>()?;
        let mut d_bot = vec![Vec::new()];
        let mut d_top = vec![Vec::new()];
        for n in 1..=budget {
            let mut bot = Vec::with_capacity(levels[n].len());
            let mut top = Vec::with_capacity(levels[n].len());
            for key in levels[n].keys() {
                bot.push(resolve(&levels[n - 1], d_bot_fn(n, key), "d_bot", n, key)?);
                top.push(resolve(&levels[n - 1], d_top_fn(n, key), "d_top", n, key)?);
            }
            d_bot.push(bot);
            d_top.push(top);
        }
        Ok(InertPresheaf { budget, levels, d_bot, d_top })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn d_bot(&self, n: usize, e: usize) -> usize {
        self.d_bot[n][e]
    }

    pub fn d_top(&self, n: usize, e: usize) -> usize {
        self.d_top[n][e]
    }

    /// `d_bot` applied `p` times starting from grade `n`.
    pub fn d_bot_power(&self, n: usize, p: usize, e: usize) -> usize {
        (0..p).fold(e, |e, s| self.d_bot[n - s][e])
    }

    /// `d_top` applied `p` times starting from grade `n`.
    pub fn d_top_power(&self, n: usize, p: usize, e: usize) -> usize {
        (0..p).fold(e, |e, s| self.d_top[n - s][e])
    }

    /// Key-level view of [`InertPresheaf::d_bot`]; panics on unknown keys.
    pub fn d_bot_key(&self, n: usize, key: &str) -> &str {
        let e = self.levels[n].position(key).expect("key at this grade");
        self.levels[n - 1].key(self.d_bot[n][e])
    }

    /// Key-level view of [`InertPresheaf::d_top`]; panics on unknown keys.
    pub fn d_top_key(&self, n: usize, key: &str) -> &str {
        let e = self.levels[n].position(key).expect("key at this grade");
        self.levels[n - 1].key(self.d_top[n][e])
    }
}

fn resolve(
    level: &Level,
    image: String,
    op: &str,
    n: usize,
    key: &str,
) -> Result<usize, PresheafError> {
    level.position(&image).ok_or_else(|| {
        SsetError::UnknownImage { op: op.to_string(), level: n, key: key.to_string(), image }
            .into()
    })
}

impl Serialize for InertPresheaf {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("InertPresheaf", 4)?;
        s.serialize_field("budget", &self.budget)?;
        let levels: Vec<&[String]> = self.levels.iter().map(|l| l.keys()).collect();
        s.serialize_field("levels", &levels)?;
        let by_keys = |tables: &[Vec<usize>]| -> BTreeMap<String, Vec<String>> {
            (1..=self.budget)
                .map(|n| {
                    let images = tables[n]
                        .iter()
                        .map(|&e| self.levels[n - 1].key(e).to_string())
                        .collect();
                    (n.to_string(), images)
                })
                .collect()
        };
        s.serialize_field("d_bot", &by_keys(&self.d_bot))?;
        s.serialize_field("d_top", &by_keys(&self.d_top))?;
        s.end()
    }
}

/// The single relation of the inert simplex category, elementwise:
/// `d_top . d_bot = d_bot . d_top` out of every grade `n >= 2`.
pub fn validate_presheaf(a: &InertPresheaf) -> CheckReport {
    let mut witnesses = Vec::new();
    for n in 2..=a.budget() {
        for e in 0..a.level(n).len() {
            let lhs = a.d_top(n - 1, a.d_bot(n, e));
            let rhs = a.d_bot(n - 1, a.d_top(n, e));
            if lhs != rhs {
                witnesses.push(format!(
                    "d_top d_bot != d_bot d_top at grade {n} on {:?}",
                    a.level(n).key(e)
                ));
            }
        }
    }
    CheckReport::from_witnesses(witnesses)
}

/// A simplex of the free simplicial set on a presheaf: a composition
/// recording the active map and an element of the grade its weight selects.
/// Encodes as `"comp|elem"`; the composition part never contains `'|'`, so
/// decoding splits at the first pipe and the element may contain pipes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSimplex {
    pub comp: Composition,
    pub elem: String,
}

impl FreeSimplex {
    pub fn encode(&self) -> String {
        format!("{}|{}", self.comp.encode(), self.elem)
    }

    pub fn decode(s: &str) -> Result<FreeSimplex, PresheafError> {
        let (comp, elem) = s
            .split_once('|')
            .ok_or_else(|| PresheafError::BadEncoding(s.to_string()))?;
        let comp =
            Composition::decode(comp).map_err(|_| PresheafError::BadEncoding(s.to_string()))?;
        Ok(FreeSimplex { comp, elem: elem.to_string() })
    }

    /// Degeneracies insert zero parts and never touch the element, so a
    /// simplex is degenerate exactly when its composition has a zero part.
    pub fn is_nondegenerate(&self) -> bool {
        !self.comp.parts().contains(&0)
    }
}

/// The free simplicial set on a presheaf, truncated at `n`: level `k` holds
/// every `FreeSimplex` with a length-`k` composition of weight within the
/// budget. Inner faces merge adjacent parts; the bottom face drops the first
/// part applying that many `d_bot`, the top face drops the last part
/// applying `d_top`; degeneracies insert a zero part.
pub fn free(a: &InertPresheaf, n: usize) -> Result<TruncatedSimplicialSet, PresheafError> {
    let levels: Vec<Vec<(String, usize)>> = (0..=n)
        .map(|k| {
            Composition::enumerate_bounded(k, a.budget())
                .into_iter()
                .flat_map(|comp| {
                    let w = comp.weight();
                    a.level(w).keys().iter().map(move |elem| {
                        (FreeSimplex { comp: comp.clone(), elem: elem.clone() }.encode(), w)
                    })
                })
                .collect()
        })
        .collect();
    let face = |k: usize, i: usize, key: &str| -> String {
        let fs = FreeSimplex::decode(key).expect("free levels hold valid encodings");
        let parts = fs.comp.parts();
        let w = fs.comp.weight();
        let e = a.level(w).position(&fs.elem).expect("element of the matching grade");
        let (new_parts, new_elem) = if i == 0 {
            let dropped = parts[0];
            let img = a.d_bot_power(w, dropped, e);
            (parts[1..].to_vec(), a.level(w - dropped).key(img).to_string())
        } else if i == k {
            let dropped = parts[k - 1];
            let img = a.d_top_power(w, dropped, e);
            (parts[..k - 1].to_vec(), a.level(w - dropped).key(img).to_string())
        } else {
            let mut p = parts.to_vec();
            p[i - 1] += p[i];
            p.remove(i);
            (p, fs.elem)
        };
        FreeSimplex { comp: Composition::new(new_parts), elem: new_elem }.encode()
    };
    let degeneracy = |_k: usize, i: usize, key: &str| -> String {
        let fs = FreeSimplex::decode(key).expect("free levels hold valid encodings");
        let mut p = fs.comp.parts().to_vec();
        p.insert(i, 0);
        FreeSimplex { comp: Composition::new(p), elem: fs.elem }.encode()
    };
    Ok(TruncatedSimplicialSet::from_parts(n, a.budget(), levels, face, degeneracy)?)
}

/// The projection `free(A) -> b_nat(n, w)` forgetting the element. Requires
/// `w` at least the presheaf budget so every composition in the source
/// exists in the target.
pub fn culf_projection(
    a: &InertPresheaf,
    n: usize,
    w: usize,
) -> Result<SimplicialMap, PresheafError> {
    if w < a.budget() {
        return Err(PresheafError::BudgetTooSmall { needed: a.budget(), have: w });
    }
    let x = free(a, n)?;
    let y = b_nat(n, w);
    Ok(SimplicialMap::new(&x, &y, |_, key| {
        key.split_once('|').expect("free encoding").0.to_string()
    })?)
}

/// A grading-preserving family of functions commuting with both faces.
#[derive(Debug, Clone)]
pub struct PresheafMap {
    source: InertPresheaf,
    target: InertPresheaf,
    components: Vec<Vec<usize>>,
}

impl PresheafMap {
    pub fn new(
        source: &InertPresheaf,
        target: &InertPresheaf,
        map: impl Fn(usize, &str) -> String,
    ) -> Result<PresheafMap, PresheafError> {
        if source.budget() != target.budget() {
            return Err(PresheafError::NotPresheafMap(format!(
                "budgets differ: {} and {}",
                source.budget(),
                target.budget()
            )));
        }
        let mut components = Vec::with_capacity(source.budget() + 1);
        for n in 0..=source.budget() {
            let mut comp = Vec::with_capacity(source.level(n).len());
            for key in source.level(n).keys() {
                comp.push(resolve(target.level(n), map(n, key), "component", n, key)?);
            }
            components.push(comp);
        }
        let phi = PresheafMap {
            source: source.clone(),
            target: target.clone(),
            components,
        };
        for n in 1..=source.budget() {
            for e in 0..source.level(n).len() {
                let bot_ok =
                    phi.components[n - 1][source.d_bot(n, e)] == target.d_bot(n, phi.components[n][e]);
                let top_ok =
                    phi.components[n - 1][source.d_top(n, e)] == target.d_top(n, phi.components[n][e]);
                if !bot_ok || !top_ok {
                    return Err(PresheafError::NotPresheafMap(format!(
                        "faces do not commute at grade {n} on {:?}",
                        source.level(n).key(e)
                    )));
                }
            }
        }
        Ok(phi)
    }

    pub fn identity(a: &InertPresheaf) -> PresheafMap {
        PresheafMap {
            source: a.clone(),
            target: a.clone(),
            components: (0..=a.budget())
                .map(|n| (0..a.level(n).len()).collect())
                .collect(),
        }
    }

    pub fn source(&self) -> &InertPresheaf {
        &self.source
    }

    pub fn target(&self) -> &InertPresheaf {
        &self.target
    }

    pub fn apply(&self, n: usize, e: usize) -> usize {
        self.components[n][e]
    }

    /// `self` followed by `other`; middle levels must agree elementwise.
    pub fn then(&self, other: &PresheafMap) -> Result<PresheafMap, PresheafError> {
        for n in 0..=self.target.budget().min(other.source.budget()) {
            if self.target.level(n).keys() != other.source.level(n).keys() {
                return Err(PresheafError::NotPresheafMap("middle levels differ".into()));
            }
        }
        Ok(PresheafMap {
            source: self.source.clone(),
            target: other.target.clone(),
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(n, comp)| comp.iter().map(|&e| other.components[n][e]).collect())
                .collect(),
        })
    }

    pub fn is_levelwise_bijective(&self) -> bool {
        self.components.iter().enumerate().all(|(n, comp)| {
            let mut seen = vec![false; self.target.level(n).len()];
            comp.len() == seen.len() && comp.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
        })
    }
}

/// The simplicial map `free(source) -> free(target)` applying a presheaf map
/// to the element and keeping the composition.
pub fn map_free(phi: &PresheafMap, n: usize) -> Result<SimplicialMap, PresheafError> {
    let x = free(phi.source(), n)?;
    let y = free(phi.target(), n)?;
    Ok(SimplicialMap::new(&x, &y, |_, key| {
        let fs = FreeSimplex::decode(key).expect("free encoding");
        let w = fs.comp.weight();
        let e = phi.source().level(w).position(&fs.elem).expect("graded element");
        FreeSimplex {
            comp: fs.comp,
            elem: phi.target().level(w).key(phi.apply(w, e)).to_string(),
        }
        .encode()
    })?)
}

/// Reads a presheaf back off a simplicial set equipped with a projection to
/// the nerve of `(N,+)`: grade `n` is the fiber of the projection over the
/// 1-simplex `(n)`, `d_top` of `x` is `d_2` of the unique 2-simplex over
/// `(n-1,1)` with long edge `x`, and `d_bot` is `d_0` of the unique
/// 2-simplex over `(1,n-1)`. Uniqueness of those lifts is asserted and
/// failure reported, so this doubles as a certification that the projection
/// really is CULF on the given levels.
pub fn recover_presheaf(
    x: &TruncatedSimplicialSet,
    phi: &SimplicialMap,
) -> Result<InertPresheaf, PresheafError> {
    if phi.source() != x {
        return Err(PresheafError::SourceMismatch);
    }
    if x.truncation() < 2 {
        return Err(SsetError::TruncationTooSmall { needed: 2, have: x.truncation() }.into());
    }
    let y = phi.target();
    let budget = y.weight_bound();

    let grade_of = |key: &str, level: usize| -> Result<Vec<usize>, PresheafError> {
        Composition::decode(key)
            .map(|c| c.parts().to_vec())
            .map_err(|_| {
                SsetError::UnknownElement { level, key: key.to_string() }.into()
            })
    };
    let mut levels: Vec<Vec<String>> = vec![Vec::new(); budget + 1];
    for e in 0..x.level(1).len() {
        let img = y.level(1).key(phi.apply(1, e));
        let parts = grade_of(img, 1)?;
        if parts.len() != 1 {
            return Err(SsetError::UnknownElement { level: 1, key: img.to_string() }.into());
        }
        levels[parts[0]].push(x.level(1).key(e).to_string());
    }

    // For each 2-simplex over (n-1,1) or (1,n-1), record it under its long
    // edge; uniqueness of these lifts is what CULF-ness guarantees.
    let mut top_lift: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut bot_lift: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in 0..x.level(2).len() {
        let parts = grade_of(y.level(2).key(phi.apply(2, s)), 2)?;
        if parts.len() != 2 {
            continue;
        }
        let long = x.face(2, 1, s);
        if parts[1] == 1 {
            top_lift.entry(long).or_default().push(s);
        }
        if parts[0] == 1 {
            bot_lift.entry(long).or_default().push(s);
        }
    }
    let unique = |lifts: &BTreeMap<usize, Vec<usize>>,
                  e: usize,
                  pattern: String|
     -> Result<usize, PresheafError> {
        match lifts.get(&e).map(|v| v.as_slice()) {
            Some([s]) => Ok(*s),
            Some([]) | None => {
                Err(PresheafError::MissingLift { key: x.level(1).key(e).to_string(), pattern })
            }
            Some(_) => {
                Err(PresheafError::AmbiguousLift { key: x.level(1).key(e).to_string(), pattern })
            }
        }
    };
    let mut d_top_of: BTreeMap<String, String> = BTreeMap::new();
    let mut d_bot_of: BTreeMap<String, String> = BTreeMap::new();
    for (n, fiber) in levels.iter().enumerate().skip(1) {
        for key in fiber {
            let e = x.level(1).position(key).expect("fiber elements are 1-simplices");
            let s = unique(&top_lift, e, format!("({},1)", n - 1))?;
            d_top_of.insert(key.clone(), x.level(1).key(x.face(2, 2, s)).to_string());
            let s = unique(&bot_lift, e, format!("(1,{})", n - 1))?;
            d_bot_of.insert(key.clone(), x.level(1).key(x.face(2, 0, s)).to_string());
        }
    }
    InertPresheaf::new(
        budget,
        levels,
        |_, key| d_bot_of[key].clone(),
        |_, key| d_top_of[key].clone(),
    )
}

/// Both round trips of the free/recover equivalence at once: recovering
/// from the free simplicial set and its projection gives back the
/// presheaf (up to stripping the grade prefix from recovered keys), and
/// the free simplicial set on the recovery is isomorphic to the original
/// one over the nerve.
pub fn check_roundtrip(a: &InertPresheaf, truncation: usize) -> Result<CheckReport, PresheafError> {
    let x = free(a, truncation)?;
    let proj = culf_projection(a, truncation, a.budget())?;
    let recovered = recover_presheaf(&x, &proj)?;
    let mut witnesses = Vec::new();
    let strip = |key: &str| key.split_once('|').expect("recovered keys carry a grade").1.to_string();
    match PresheafMap::new(&recovered, a, |_, key| strip(key)) {
        Ok(iso) if iso.is_levelwise_bijective() => {}
        Ok(_) => witnesses.push("recover(free(A)) maps to A but not bijectively".to_string()),
        Err(e) => witnesses.push(format!("recover(free(A)) does not match A: {e}")),
    }
    let refree = free(&recovered, truncation)?;
    let rename = |key: &str| {
        let (comp, elem) = key.split_once('|').expect("free keys");
        format!("{comp}|{}", strip(elem))
    };
    match SimplicialMap::new(&refree, &x, |_, key| rename(key)) {
        Ok(iso) if iso.is_levelwise_bijective() => {}
        Ok(_) => witnesses.push("free(recover(X)) maps to X but not bijectively".to_string()),
        Err(e) => witnesses.push(format!("free(recover(X)) does not match X: {e}")),
    }
    Ok(CheckReport::from_witnesses(witnesses))
}

/// The binary sheaf condition: for every `m + n` within budget, restricting
/// to the first `m` and last `n` units is a bijection onto the compatible
/// pairs over grade zero.
pub fn check_sheaf(a: &InertPresheaf) -> CheckReport {
    let relation = validate_presheaf(a);
    if !relation.is_pass() {
        return relation;
    }
    let mut witnesses = Vec::new();
    for m in 0..=a.budget() {
        for n in 0..=(a.budget() - m) {
            let total = m + n;
            let p_to_b: Vec<usize> =
                (0..a.level(total).len()).map(|e| a.d_top_power(total, n, e)).collect();
            let p_to_c: Vec<usize> =
                (0..a.level(total).len()).map(|e| a.d_bot_power(total, m, e)).collect();
            let b_to_d: Vec<usize> =
                (0..a.level(m).len()).map(|e| a.d_bot_power(m, m, e)).collect();
            let c_to_d: Vec<usize> =
                (0..a.level(n).len()).map(|e| a.d_top_power(n, n, e)).collect();
            let square = SetSquare {
                p: a.level(total),
                b: a.level(m),
                c: a.level(n),
                d: a.level(0),
                p_to_b: &p_to_b,
                p_to_c: &p_to_c,
                b_to_d: &b_to_d,
                c_to_d: &c_to_d,
                context: format!("sheaf(m={m},n={n})"),
            };
            match is_pullback(&square) {
                Ok(report) => witnesses.extend(report.witnesses),
                Err(e) => witnesses.push(e.to_string()),
            }
        }
    }
    CheckReport::from_witnesses(witnesses)
}

/// Cross-validation variant of [`check_sheaf`]: the `k`-ary condition for
/// every composition of length up to `k_max`, mirroring the tuples the Segal
/// checker enumerates on the free space.
pub fn check_sheaf_kary(a: &InertPresheaf, k_max: usize) -> CheckReport {
    let relation = validate_presheaf(a);
    if !relation.is_pass() {
        return relation;
    }
    let mut witnesses = Vec::new();
    for k in 2..=k_max {
        for comp in Composition::enumerate_bounded(k, a.budget()) {
            let parts = comp.parts();
            let total = comp.weight();
            // Slice each element into the k graded pieces the composition
            // prescribes.
            let mut image: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for e in 0..a.level(total).len() {
                let mut tuple = Vec::with_capacity(k);
                let mut after: usize = total;
                let mut dropped_before = 0;
                for &p in parts {
                    after -= p;
                    let trimmed = a.d_top_power(total, after, e);
                    tuple.push(a.d_bot_power(total - after, dropped_before, trimmed));
                    dropped_before += p;
                }
                if let Some(&first) = image.get(&tuple) {
                    witnesses.push(format!(
                        "sheaf {:?}: {:?} and {:?} slice identically",
                        parts,
                        a.level(total).key(first),
                        a.level(total).key(e)
                    ));
                } else {
                    image.insert(tuple, e);
                }
            }
            let mut tuple = Vec::with_capacity(k);
            enumerate_compatible(a, parts, 0, &mut tuple, &mut |tuple| {
                if !image.contains_key(tuple) {
                    let names: Vec<&str> = tuple
                        .iter()
                        .zip(parts)
                        .map(|(&e, &p)| a.level(p).key(e))
                        .collect();
                    witnesses.push(format!(
                        "sheaf {:?}: tuple ({}) has no preimage",
                        parts,
                        names.join(" ; ")
                    ));
                }
            });
        }
    }
    CheckReport::from_witnesses(witnesses)
}

fn enumerate_compatible(
    a: &InertPresheaf,
    parts: &[usize],
    pos: usize,
    tuple: &mut Vec<usize>,
    visit: &mut impl FnMut(&Vec<usize>),
) {
    if pos == parts.len() {
        visit(tuple);
        return;
    }
    for e in 0..a.level(parts[pos]).len() {
        if pos > 0 {
            let prev = tuple[pos - 1];
            let join_left = a.d_bot_power(parts[pos - 1], parts[pos - 1], prev);
            let join_right = a.d_top_power(parts[pos], parts[pos], e);
            if join_left != join_right {
                continue;
            }
        }
        tuple.push(e);
        enumerate_compatible(a, parts, pos + 1, tuple, visit);
        tuple.pop();
    }
}

/// Grades shift up by one; the new grade zero is a point and both faces out
/// of grade one collapse to it.
pub fn shift_up(a: &InertPresheaf) -> InertPresheaf {
    let mut levels: Vec<Vec<String>> = vec![vec!["*".to_string()]];
    for n in 0..=a.budget() {
        levels.push(a.level(n).keys().to_vec());
    }
    InertPresheaf::new(
        a.budget() + 1,
        levels,
        |n, key| {
            if n == 1 {
                "*".to_string()
            } else {
                let e = a.level(n - 1).position(key).unwrap();
                a.level(n - 2).key(a.d_bot(n - 1, e)).to_string()
            }
        },
        |n, key| {
            if n == 1 {
                "*".to_string()
            } else {
                let e = a.level(n - 1).position(key).unwrap();
                a.level(n - 2).key(a.d_top(n - 1, e)).to_string()
            }
        },
    )
    .expect("shifted faces stay within levels")
}

/// Grades shift down by `d`, discarding everything below grade `d`.
pub fn shift_down(a: &InertPresheaf, d: usize) -> Result<InertPresheaf, PresheafError> {
    if a.budget() < d {
        return Err(PresheafError::BudgetTooSmall { needed: d, have: a.budget() });
    }
    let levels: Vec<Vec<String>> =
        (d..=a.budget()).map(|n| a.level(n).keys().to_vec()).collect();
    InertPresheaf::new(
        a.budget() - d,
        levels,
        |n, key| {
            let e = a.level(n + d).position(key).unwrap();
            a.level(n + d - 1).key(a.d_bot(n + d, e)).to_string()
        },
        |n, key| {
            let e = a.level(n + d).position(key).unwrap();
            a.level(n + d - 1).key(a.d_top(n + d, e)).to_string()
        },
    )
}

/// Empties every grade above `r`, keeping the budget. Faces out of the
/// emptied grades are vacuously total.
pub fn truncate_paths(a: &InertPresheaf, r: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=a.budget())
        .map(|n| if n <= r { a.level(n).keys().to_vec() } else { Vec::new() })
        .collect();
    InertPresheaf::new(
        a.budget(),
        levels,
        |n, key| {
            let e = a.level(n).position(key).unwrap();
            a.level(n - 1).key(a.d_bot(n, e)).to_string()
        },
        |n, key| {
            let e = a.level(n).position(key).unwrap();
            a.level(n - 1).key(a.d_top(n, e)).to_string()
        },
    )
    .expect("kept faces land in kept grades")
}

/// Re-grades so the old grade `lo` sits at grade zero, keeping grades up to
/// the old `hi`. Grades beyond the original budget come out empty, which
/// deliberately records the cutoff instead of hiding it.
pub fn window(a: &InertPresheaf, lo: usize, hi: usize) -> Result<InertPresheaf, PresheafError> {
    if hi < lo || a.budget() < hi - lo {
        return Err(PresheafError::BudgetTooSmall { needed: hi.saturating_sub(lo), have: a.budget() });
    }
    let levels: Vec<Vec<String>> = (lo..=hi)
        .map(|n| if n <= a.budget() { a.level(n).keys().to_vec() } else { Vec::new() })
        .collect();
    InertPresheaf::new(
        hi - lo,
        levels,
        |n, key| {
            let e = a.level(n + lo).position(key).unwrap();
            a.level(n + lo - 1).key(a.d_bot(n + lo, e)).to_string()
        },
        |n, key| {
            let e = a.level(n + lo).position(key).unwrap();
            a.level(n + lo - 1).key(a.d_top(n + lo, e)).to_string()
        },
    )
}

/// Adapter for carriers with a single face map at grade one (both faces
/// coincide there) and ordinary pairs of faces above; fails when the
/// resulting presheaf violates the commutation relation.
pub fn from_restriction_l_species(
    budget: usize,
    level_elems: Vec<Vec<String>>,
    bottom_face: impl Fn(&str) -> String,
    d_bot_fn: impl Fn(usize, &str) -> String,
    d_top_fn: impl Fn(usize, &str) -> String,
) -> Result<InertPresheaf, PresheafError> {
    let a = InertPresheaf::new(
        budget,
        level_elems,
        |n, key| if n == 1 { bottom_face(key) } else { d_bot_fn(n, key) },
        |n, key| if n == 1 { bottom_face(key) } else { d_top_fn(n, key) },
    )?;
    let report = validate_presheaf(&a);
    if !report.is_pass() {
        return Err(PresheafError::RelationFailure(report.witnesses.join("; ")));
    }
    Ok(a)
}
