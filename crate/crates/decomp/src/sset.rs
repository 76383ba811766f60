//! Truncated simplicial sets with finite, weight-budgeted levels.
//!
//! A [`TruncatedSimplicialSet`] stores levels `X_0 .. X_N` as sorted lists of
//! canonical element encodings together with face and degeneracy tables of
//! element indices. Arbitrary monotone maps act through
//! [`TruncatedSimplicialSet::apply_map`], which factors the map into
//! generators and chains the tables.
//!
//! Infinite families (the nerve of `(N,+)`, free spaces on word-like
//! presheaves) are represented by the sub-level-set of simplices of weight at
//! most a budget `W`. Faces never increase weight and degeneracies preserve
//! it, so budgeted levels are closed under all operators. Each element
//! carries its weight; the Segal checker is the one consumer that needs it
//! (to know which gluing tuples the budget licenses). A budget of zero with
//! all weights zero means "no budget": every tuple is in scope.

use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::simplex::{Composition, OrdinalMap, SimplexError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SsetError {
    #[error("level {level} contains {key:?} twice")]
    DuplicateElement { level: usize, key: String },
    #[error("operator {op} at level {level} sends {key:?} to unknown element {image:?}")]
    UnknownImage {
        op: String,
        level: usize,
        key: String,
        image: String,
    },
    #[error("element {key:?} at level {level} has weight {weight} over the bound {bound}")]
    WeightOverBound {
        level: usize,
        key: String,
        weight: usize,
        bound: usize,
    },
    #[error("unknown element {key:?} at level {level}")]
    UnknownElement { level: usize, key: String },
    #[error("needs truncation at least {needed}, have {have}")]
    TruncationTooSmall { needed: usize, have: usize },
    #[error("the maps have different truncations: {0} and {1}")]
    TruncationMismatch(usize, usize),
    #[error("not a simplicial map: {0}")]
    NotSimplicial(String),
    #[error("map composition needs matching middle object")]
    MiddleMismatch,
    #[error("simplex arithmetic: {0}")]
    Simplex(#[from] SimplexError),
}

/// One level: sorted unique encodings, per-element weights, and a reverse
/// index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    keys: Vec<String>,
    weights: Vec<usize>,
    index: HashMap<String, usize>,
}

impl Level {
    fn new(mut elems: Vec<(String, usize)>, level: usize) -> Result<Level, SsetError> {
        elems.sort();
        let mut index = HashMap::with_capacity(elems.len());
        let mut keys = Vec::with_capacity(elems.len());
        let mut weights = Vec::with_capacity(elems.len());
        for (key, weight) in elems {
            if index.insert(key.clone(), keys.len()).is_some() {
                return Err(SsetError::DuplicateElement { level, key });
            }
            keys.push(key);
            weights.push(weight);
        }
        Ok(Level { keys, weights, index })
    }

    /// A standalone finite set (all weights zero), mainly for pullback
    /// checks outside a simplicial set.
    pub fn from_names(names: Vec<String>) -> Result<Level, SsetError> {
        Level::from_names_at(names, 0)
    }

    /// Like [`Level::from_names`] with a level number for error reporting.
    pub fn from_names_at(names: Vec<String>, level: usize) -> Result<Level, SsetError> {
        Level::new(names.into_iter().map(|k| (k, 0)).collect(), level)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> &str {
        &self.keys[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn position(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }
}

/// Which operator table a perturbation touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Face,
    Degeneracy,
}

/// Address of one entry in an operator table, for mutation testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableEntry {
    pub op: OpKind,
    /// Level the operator is applied at.
    pub level: usize,
    /// Operator index `i` (face `d_i` or degeneracy `s_i`).
    pub index: usize,
    /// Element position within the level.
    pub elem: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSimplicialSet {
    truncation: usize,
    weight_bound: usize,
    levels: Vec<Level>,
    /// `faces[k][i][e]`: position of `d_i` of element `e` of `X_k`, `1 <= k`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[k][i][e]`: position of `s_i(e)`, `k < truncation`.
    degeneracies: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    /// Builds levels and operator tables from element enumerations and
    /// operator actions on encodings. Verifies that every operator lands on a
    /// listed element and that weights respect the bound; simplicial
    /// identities are deliberately *not* verified here (that is what the
    /// checkers are for).
    pub fn from_parts(
        truncation: usize,
        weight_bound: usize,
        level_elems: Vec<Vec<(String, usize)>>,
        face: impl Fn(usize, usize, &str) -> String,
        degeneracy: impl Fn(usize, usize, &str) -> String,
    ) -> Result<Self, SsetError> {
        assert_eq!(
            level_elems.len(),
            truncation + 1,
            "need one element list per level"
        );
        let mut levels = Vec::with_capacity(truncation + 1);
        for (k, elems) in level_elems.into_iter().enumerate() {
            let level = Level::new(elems, k)?;
            for i in 0..level.len() {
                if level.weight(i) > weight_bound {
                    return Err(SsetError::WeightOverBound {
                        level: k,
                        key: level.key(i).to_string(),
                        weight: level.weight(i),
                        bound: weight_bound,
                    });
                }
            }
            levels.push(level);
        }
        let mut faces = vec![Vec::new(); truncation + 1];
        for k in 1..=truncation {
            let mut tables = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let mut table = Vec::with_capacity(levels[k].len());
                for e in 0..levels[k].len() {
                    let image = face(k, i, levels[k].key(e));
                    let pos = levels[k - 1].position(&image).ok_or_else(|| {
                        SsetError::UnknownImage {
                            op: format!("d_{i}"),
                            level: k,
                            key: levels[k].key(e).to_string(),
                            image: image.clone(),
                        }
                    })?;
                    table.push(pos);
                }
                tables.push(table);
            }
            faces[k] = tables;
        }
        let mut degeneracies = vec![Vec::new(); truncation + 1];
        for k in 0..truncation {
            let mut tables = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let mut table = Vec::with_capacity(levels[k].len());
                for e in 0..levels[k].len() {
                    let image = degeneracy(k, i, levels[k].key(e));
                    let pos = levels[k + 1].position(&image).ok_or_else(|| {
                        SsetError::UnknownImage {
                            op: format!("s_{i}"),
                            level: k,
                            key: levels[k].key(e).to_string(),
                            image: image.clone(),
                        }
                    })?;
                    table.push(pos);
                }
                tables.push(table);
            }
            degeneracies[k] = tables;
        }
        Ok(TruncatedSimplicialSet {
            truncation,
            weight_bound,
            levels,
            faces,
            degeneracies,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn weight_bound(&self) -> usize {
        self.weight_bound
    }

    pub fn level(&self, k: usize) -> &Level {
        &self.levels[k]
    }

    /// `d_i` of element `e` at level `k`.
    pub fn face(&self, k: usize, i: usize, e: usize) -> usize {
        self.faces[k][i][e]
    }

    /// `s_i` of element `e` at level `k`.
    pub fn degeneracy(&self, k: usize, i: usize, e: usize) -> usize {
        self.degeneracies[k][i][e]
    }

    pub fn face_table(&self, k: usize, i: usize) -> &[usize] {
        &self.faces[k][i]
    }

    pub fn degeneracy_table(&self, k: usize, i: usize) -> &[usize] {
        &self.degeneracies[k][i]
    }

    /// Contravariant action of an arbitrary monotone map: the table of
    /// `X(f) : X_{target(f)} -> X_{source(f)}`, computed by factoring `f`
    /// into generators.
    pub fn apply_map(&self, f: &OrdinalMap) -> Result<Vec<usize>, SsetError> {
        if f.target() > self.truncation {
            return Err(SsetError::TruncationTooSmall {
                needed: f.target(),
                have: self.truncation,
            });
        }
        let word = f.generator_word();
        if f.source() > self.truncation {
            return Err(SsetError::TruncationTooSmall {
                needed: f.source(),
                have: self.truncation,
            });
        }
        let mut table: Vec<usize> = (0..self.levels[f.target()].len()).collect();
        let mut level = f.target();
        for &c in word.cofaces.iter().rev() {
            let face = &self.faces[level][c];
            for slot in table.iter_mut() {
                *slot = face[*slot];
            }
            level -= 1;
        }
        for &j in word.codegeneracies.iter() {
            let degen = &self.degeneracies[level][j];
            for slot in table.iter_mut() {
                *slot = degen[*slot];
            }
            level += 1;
        }
        debug_assert_eq!(level, f.source());
        Ok(table)
    }

    /// The long edge map `X_k -> X_1`: the action of the unique active
    /// `[1] -> [k]`.
    pub fn long_edge_table(&self, k: usize) -> Result<Vec<usize>, SsetError> {
        self.apply_map(crate::simplex::ActiveMap::long(k).as_map())
    }

    /// True when element `e` of `X_k` lies in the image of some degeneracy.
    pub fn is_degenerate(&self, k: usize, e: usize) -> bool {
        if k == 0 {
            return false;
        }
        (0..k).any(|i| self.degeneracies[k - 1][i].contains(&e))
    }

    /// All operator-table entry addresses, for mutation sampling.
    pub fn table_entries(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for k in 1..=self.truncation {
            for i in 0..=k {
                for e in 0..self.levels[k].len() {
                    out.push(TableEntry { op: OpKind::Face, level: k, index: i, elem: e });
                }
            }
        }
        for k in 0..self.truncation {
            for i in 0..=k {
                for e in 0..self.levels[k].len() {
                    out.push(TableEntry { op: OpKind::Degeneracy, level: k, index: i, elem: e });
                }
            }
        }
        out
    }

    /// Copy with a single operator-table entry rewired to `new_value`
    /// (a position in the appropriate adjacent level). For negative-control
    /// tests.
    pub fn with_perturbed_entry(&self, entry: TableEntry, new_value: usize) -> Self {
        let mut copy = self.clone();
        match entry.op {
            OpKind::Face => copy.faces[entry.level][entry.index][entry.elem] = new_value,
            OpKind::Degeneracy => {
                copy.degeneracies[entry.level][entry.index][entry.elem] = new_value
            }
        }
        copy
    }

    /// Size of the level an operator entry points into.
    pub fn entry_codomain_size(&self, entry: TableEntry) -> usize {
        match entry.op {
            OpKind::Face => self.levels[entry.level - 1].len(),
            OpKind::Degeneracy => self.levels[entry.level + 1].len(),
        }
    }

    /// Current value of an operator entry.
    pub fn entry_value(&self, entry: TableEntry) -> usize {
        match entry.op {
            OpKind::Face => self.faces[entry.level][entry.index][entry.elem],
            OpKind::Degeneracy => self.degeneracies[entry.level][entry.index][entry.elem],
        }
    }
}

impl Serialize for TruncatedSimplicialSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TruncatedSimplicialSet", 5)?;
        s.serialize_field("truncation", &self.truncation)?;
        s.serialize_field("weight_bound", &self.weight_bound)?;
        let levels: Vec<&[String]> = self.levels.iter().map(|l| l.keys()).collect();
        s.serialize_field("levels", &levels)?;
        s.serialize_field("faces", &self.faces)?;
        s.serialize_field("degeneracies", &self.degeneracies)?;
        s.end()
    }
}

/// The nerve of the additive monoid of naturals, truncated and budgeted:
/// level `k` holds the compositions of length `k` and weight at most
/// `weight_bound`. Inner faces add adjacent parts, outer faces drop the first
/// or last part, degeneracies insert a zero.
pub fn b_nat(truncation: usize, weight_bound: usize) -> TruncatedSimplicialSet {
    let levels = (0..=truncation)
        .map(|k| {
            Composition::enumerate_bounded(k, weight_bound)
                .into_iter()
                .map(|c| (c.encode(), c.weight()))
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::from_parts(
        truncation,
        weight_bound,
        levels,
        |_, i, key| {
            let c = Composition::decode(key).unwrap();
            bn_face(&c, i).encode()
        },
        |_, i, key| {
            let c = Composition::decode(key).unwrap();
            bn_degeneracy(&c, i).encode()
        },
    )
    .expect("nerve tables are closed within the budget")
}

/// `d_i` on a composition of length `k`: drop the first part (`i = 0`), the
/// last (`i = k`), or add parts `i` and `i+1` (1-based) otherwise.
pub fn bn_face(c: &Composition, i: usize) -> Composition {
    let parts = c.parts();
    let k = parts.len();
    assert!(k >= 1 && i <= k);
    let mut out = Vec::with_capacity(k - 1);
    if i == 0 {
        out.extend_from_slice(&parts[1..]);
    } else if i == k {
        out.extend_from_slice(&parts[..k - 1]);
    } else {
        out.extend_from_slice(&parts[..i - 1]);
        out.push(parts[i - 1] + parts[i]);
        out.extend_from_slice(&parts[i + 1..]);
    }
    Composition::new(out)
}

/// `s_i` on a composition: insert a zero part after position `i` vertices,
/// i.e. between parts `i` and `i+1`.
pub fn bn_degeneracy(c: &Composition, i: usize) -> Composition {
    let parts = c.parts();
    assert!(i <= parts.len());
    let mut out = Vec::with_capacity(parts.len() + 1);
    out.extend_from_slice(&parts[..i]);
    out.push(0);
    out.extend_from_slice(&parts[i..]);
    Composition::new(out)
}

/// The terminal simplicial set at a truncation: singleton levels.
pub fn point(truncation: usize) -> TruncatedSimplicialSet {
    b_nat(truncation, 0)
}

/// The doubling functor behind edgewise subdivision: on objects
/// `[n] -> [2n+1]` (the join of `[n]` reversed with `[n]`), on maps
/// `Q(g)(i) = n - g(m-i)` on the first block and `Q(g)(m+1+j) = n+1+g(j)` on
/// the second.
pub fn edgewise_double(g: &OrdinalMap) -> OrdinalMap {
    let m = g.source();
    let n = g.target();
    let mut values = Vec::with_capacity(2 * m + 2);
    for i in 0..=m {
        values.push(n - g.apply(m - i));
    }
    for j in 0..=m {
        values.push(n + 1 + g.apply(j));
    }
    OrdinalMap::new(values, 2 * n + 1).expect("doubled map is monotone")
}

/// Edgewise subdivision: `sd(X)_k = X_{2k+1}`, operators given by the action
/// of the doubled generators. Face `i` at level `k` is
/// `d_{k-i} ∘ d_{k+1+i}` upstairs, so 1-simplices of `sd(X)` pick out the
/// twisted-arrow structure of `X`.
///
/// The output carries no weight budget: a budget cut on `X` bounds the *last*
/// vertex of a subdivided gluing tuple, so the levels of `sd(X)` are closed
/// under Segal gluing as they stand.
pub fn edgewise(x: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet, SsetError> {
    if x.truncation() == 0 {
        return Err(SsetError::TruncationTooSmall { needed: 1, have: 0 });
    }
    let truncation = (x.truncation() - 1) / 2;
    let mut face_tables: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for k in 1..=truncation {
        let mut rows = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let doubled = edgewise_double(&OrdinalMap::coface(i, k)?);
            rows.push(x.apply_map(&doubled)?);
        }
        face_tables.push(rows);
    }
    let mut degen_tables: Vec<Vec<Vec<usize>>> = Vec::new();
    for k in 0..truncation {
        let mut rows = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let doubled = edgewise_double(&OrdinalMap::codegeneracy(i, k)?);
            rows.push(x.apply_map(&doubled)?);
        }
        degen_tables.push(rows);
    }
    let levels: Vec<Vec<(String, usize)>> = (0..=truncation)
        .map(|k| {
            x.level(2 * k + 1)
                .keys()
                .iter()
                .map(|key| (key.clone(), 0))
                .collect()
        })
        .collect();
    // Rebuilding levels re-sorts identically (keys are reused), so the
    // precomputed index tables remain valid.
    TruncatedSimplicialSet::from_parts(
        truncation,
        0,
        levels,
        |k, i, key| {
            let e = x.level(2 * k + 1).position(key).unwrap();
            x.level(2 * k - 1).key(face_tables[k][i][e]).to_string()
        },
        |k, i, key| {
            let e = x.level(2 * k + 1).position(key).unwrap();
            x.level(2 * k + 3).key(degen_tables[k][i][e]).to_string()
        },
    )
}

/// A level-indexed family of functions commuting with faces and
/// degeneracies. Validated at construction.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: TruncatedSimplicialSet,
    target: TruncatedSimplicialSet,
    components: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(
        source: &TruncatedSimplicialSet,
        target: &TruncatedSimplicialSet,
        map: impl Fn(usize, &str) -> String,
    ) -> Result<Self, SsetError> {
        if source.truncation() != target.truncation() {
            return Err(SsetError::TruncationMismatch(
                source.truncation(),
                target.truncation(),
            ));
        }
        let mut components = Vec::with_capacity(source.truncation() + 1);
        for k in 0..=source.truncation() {
            let mut comp = Vec::with_capacity(source.level(k).len());
            for e in 0..source.level(k).len() {
                let image = map(k, source.level(k).key(e));
                let pos = target.level(k).position(&image).ok_or_else(|| {
                    SsetError::UnknownImage {
                        op: format!("component {k}"),
                        level: k,
                        key: source.level(k).key(e).to_string(),
                        image,
                    }
                })?;
                comp.push(pos);
            }
            components.push(comp);
        }
        let map = SimplicialMap {
            source: source.clone(),
            target: target.clone(),
            components,
        };
        map.validate_commutation()?;
        Ok(map)
    }

    fn validate_commutation(&self) -> Result<(), SsetError> {
        for k in 1..=self.source.truncation() {
            for i in 0..=k {
                for e in 0..self.source.level(k).len() {
                    let lhs = self.components[k - 1][self.source.face(k, i, e)];
                    let rhs = self.target.face(k, i, self.components[k][e]);
                    if lhs != rhs {
                        return Err(SsetError::NotSimplicial(format!(
                            "d_{i} of {:?} at level {k} does not commute",
                            self.source.level(k).key(e)
                        )));
                    }
                }
            }
        }
        for k in 0..self.source.truncation() {
            for i in 0..=k {
                for e in 0..self.source.level(k).len() {
                    let lhs = self.components[k + 1][self.source.degeneracy(k, i, e)];
                    let rhs = self.target.degeneracy(k, i, self.components[k][e]);
                    if lhs != rhs {
                        return Err(SsetError::NotSimplicial(format!(
                            "s_{i} of {:?} at level {k} does not commute",
                            self.source.level(k).key(e)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimplicialMap {
            source: x.clone(),
            target: x.clone(),
            components: (0..=x.truncation())
                .map(|k| (0..x.level(k).len()).collect())
                .collect(),
        }
    }

    pub fn source(&self) -> &TruncatedSimplicialSet {
        &self.source
    }

    pub fn target(&self) -> &TruncatedSimplicialSet {
        &self.target
    }

    pub fn component(&self, k: usize) -> &[usize] {
        &self.components[k]
    }

    pub fn apply(&self, k: usize, e: usize) -> usize {
        self.components[k][e]
    }

    /// `self` followed by `other`; the middle objects must have identical
    /// level encodings.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap, SsetError> {
        for k in 0..=self.target.truncation().min(other.source.truncation()) {
            if self.target.level(k).keys() != other.source.level(k).keys() {
                return Err(SsetError::MiddleMismatch);
            }
        }
        if self.target.truncation() != other.source.truncation() {
            return Err(SsetError::MiddleMismatch);
        }
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: other.target.clone(),
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(k, comp)| comp.iter().map(|&e| other.components[k][e]).collect())
                .collect(),
        })
    }

    /// Componentwise bijectivity, the data side of being an isomorphism.
    pub fn is_levelwise_bijective(&self) -> bool {
        self.components.iter().enumerate().all(|(k, comp)| {
            let mut hit = vec![false; self.target.level(k).len()];
            comp.len() == hit.len() && {
                for &e in comp {
                    if hit[e] {
                        return false;
                    }
                    hit[e] = true;
                }
                true
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{compose, ActiveMap};

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

    #[test]
    fn bn_level_sizes() {
        // Level k of the budgeted nerve has C(W+k, k) compositions.
        let x = b_nat(4, 6);
        for k in 0..=4 {
            assert_eq!(x.level(k).len(), binom(6 + k, k), "level {k}");
        }
    }

    #[test]
    fn bn_face_semantics() {
        let c = Composition::decode("2,0,3").unwrap();
        assert_eq!(bn_face(&c, 0).encode(), "0,3");
        assert_eq!(bn_face(&c, 1).encode(), "2,3");
        assert_eq!(bn_face(&c, 2).encode(), "2,3");
        assert_eq!(bn_face(&c, 3).encode(), "2,0");
        assert_eq!(bn_degeneracy(&c, 0).encode(), "0,2,0,3");
        assert_eq!(bn_degeneracy(&c, 2).encode(), "2,0,0,3");
        assert_eq!(bn_degeneracy(&c, 3).encode(), "2,0,3,0");
    }

    #[test]
    fn apply_map_matches_tables_and_identity() {
        let x = b_nat(3, 4);
        for k in 1..=3usize {
            for i in 0..=k {
                let table = x.apply_map(&OrdinalMap::coface(i, k).unwrap()).unwrap();
                assert_eq!(&table, x.face_table(k, i));
            }
        }
        for k in 0..3usize {
            for i in 0..=k {
                let table = x.apply_map(&OrdinalMap::codegeneracy(i, k).unwrap()).unwrap();
                assert_eq!(&table, x.degeneracy_table(k, i));
            }
        }
        let id = x.apply_map(&OrdinalMap::identity(2)).unwrap();
        assert_eq!(id, (0..x.level(2).len()).collect::<Vec<_>>());
    }

    #[test]
    fn apply_map_is_contravariantly_functorial() {
        // X(g ∘ f) = X(f) ∘ X(g) for every composable pair within reach.
        let x = b_nat(3, 3);
        for m in 0..=3usize {
            for mid in 0..=3usize {
                for n in 0..=3usize {
                    for f in OrdinalMap::enumerate(m, mid) {
                        for g in OrdinalMap::enumerate(mid, n) {
                            let combined = compose(&f, &g).unwrap();
                            let t_combined = x.apply_map(&combined).unwrap();
                            let t_f = x.apply_map(&f).unwrap();
                            let t_g = x.apply_map(&g).unwrap();
                            let chained: Vec<usize> =
                                (0..x.level(n).len()).map(|e| t_f[t_g[e]]).collect();
                            assert_eq!(t_combined, chained, "f={f} g={g}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn long_edge_on_nerve_is_total_weight() {
        let x = b_nat(3, 5);
        let table = x.long_edge_table(3).unwrap();
        for (e, &long) in table.iter().enumerate() {
            let c = Composition::decode(x.level(3).key(e)).unwrap();
            assert_eq!(
                x.level(1).key(long),
                &c.weight().to_string(),
                "long edge of {}",
                c.encode()
            );
        }
    }

    #[test]
    fn edgewise_levels_and_arrow_semantics() {
        // sd(X)_k = X_{2k+1}; the face conventions make a 1-simplex
        // (a, m, b) an arrow from (m) to (a+m+b).
        let x = b_nat(5, 4);
        let sd = edgewise(&x).unwrap();
        assert_eq!(sd.truncation(), 2);
        for k in 0..=2 {
            assert_eq!(sd.level(k).keys(), x.level(2 * k + 1).keys());
        }
        let arrow = sd.level(1).position("1,2,1").unwrap();
        let tgt = sd.face(1, 0, arrow);
        let src = sd.face(1, 1, arrow);
        assert_eq!(sd.level(0).key(src), "2");
        assert_eq!(sd.level(0).key(tgt), "4");
        // Identity arrow of (n) is (0, n, 0).
        let obj = sd.level(0).position("3").unwrap();
        assert_eq!(sd.level(1).key(sd.degeneracy(0, 0, obj)), "0,3,0");
    }

    #[test]
    fn edgewise_faces_factor_through_double_outer_faces() {
        // d_i at subdivided level k equals d_{k-i} ∘ d_{k+1+i} upstairs.
        let x = b_nat(5, 3);
        let sd = edgewise(&x).unwrap();
        for k in 1..=2usize {
            for i in 0..=k {
                for e in 0..sd.level(k).len() {
                    let up = x.level(2 * k + 1).position(sd.level(k).key(e)).unwrap();
                    let first = x.face(2 * k + 1, k + 1 + i, up);
                    let second = x.face(2 * k, k - i, first);
                    assert_eq!(
                        x.level(2 * k - 1).key(second),
                        sd.level(k - 1).key(sd.face(k, i, e))
                    );
                }
            }
        }
    }

    #[test]
    fn edgewise_composition_is_concatenation() {
        // The middle face of a subdivided 2-simplex composes its two arrows.
        let x = b_nat(5, 5);
        let sd = edgewise(&x).unwrap();
        let sigma = sd.level(2).position("1,1,1,1,1").unwrap();
        // Reading (a2,a1,m,b1,b2): arrows (a1,m,b1) = 1,1,1 then
        // (a2,a1+m+b1,b2) = 1,3,1; composite (a1+a2, m, b1+b2) = 2,1,2.
        assert_eq!(sd.level(1).key(sd.face(2, 2, sigma)), "1,1,1");
        assert_eq!(sd.level(1).key(sd.face(2, 0, sigma)), "1,3,1");
        assert_eq!(sd.level(1).key(sd.face(2, 1, sigma)), "2,1,2");
    }

    #[test]
    fn degenerate_detection_on_nerve() {
        let x = b_nat(2, 3);
        for e in 0..x.level(2).len() {
            let c = Composition::decode(x.level(2).key(e)).unwrap();
            let has_zero = c.parts().contains(&0);
            assert_eq!(x.is_degenerate(2, e), has_zero, "{}", c.encode());
        }
    }

    #[test]
    fn simplicial_map_rejects_non_commuting_assignment() {
        let x = b_nat(2, 2);
        // Collapsing weights mod 2 does not commute with inner faces.
        let bad = SimplicialMap::new(&x, &x, |_, key| {
            let c = Composition::decode(key).unwrap();
            let parts: Vec<usize> = c.parts().iter().map(|p| p % 2).collect();
            Composition::new(parts).encode()
        });
        assert!(bad.is_err());
    }

    #[test]
    fn terminal_map_is_simplicial() {
        let x = b_nat(3, 3);
        let pt = point(3);
        let f = SimplicialMap::new(&x, &pt, |k, _| {
            Composition::new(vec![0; k]).encode()
        })
        .unwrap();
        assert!(!f.is_levelwise_bijective());
        let id = SimplicialMap::identity(&x);
        let composite = id.then(&f).unwrap();
        assert_eq!(composite.component(1), f.component(1));
    }

    #[test]
    fn perturbation_changes_exactly_one_entry() {
        let x = b_nat(2, 2);
        let entry = TableEntry { op: OpKind::Face, level: 2, index: 1, elem: 0 };
        let old = x.entry_value(entry);
        let new = (old + 1) % x.entry_codomain_size(entry);
        let y = x.with_perturbed_entry(entry, new);
        assert_eq!(y.face(2, 1, 0), new);
        assert_eq!(y.face(2, 0, 0), x.face(2, 0, 0));
    }

    #[test]
    fn long_edge_of_vertices_is_degenerate_edge() {
        let x = b_nat(2, 3);
        let table = x.apply_map(ActiveMap::long(0).as_map()).unwrap();
        for (e, &long) in table.iter().enumerate() {
            assert_eq!(long, x.degeneracy(0, 0, e));
        }
    }
}
