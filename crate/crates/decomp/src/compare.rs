//! Category comparisons: the twisted-arrow category of the nerve of `(N,+)`
//! against the inert simplex category, and the active-arrow category against
//! the category of elements of that nerve.
//!
//! Both comparisons build honest [`FiniteCategory`] values on each side and
//! check an explicit functor for being an isomorphism, reporting every
//! defect rather than just a boolean.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cat::{isomorphism_defects, CatArrow, CatError, FiniteCategory};
use crate::checks::CheckReport;
use crate::simplex::{
    active_arrow_category, compose, delta_inert_category,
    inert_arrow_name, map_values_name, Composition, OrdinalMap, SimplexError,
};
use crate::sset::{b_nat, edgewise, SsetError, TruncatedSimplicialSet};

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("category construction: {0}")]
    Cat(#[from] CatError),
    #[error("simplicial set: {0}")]
    Sset(#[from] SsetError),
    #[error("simplex arithmetic: {0}")]
    Simplex(#[from] SimplexError),
    #[error("no composite for {first:?} then {second:?}: {reason}")]
    NoComposite {
        first: String,
        second: String,
        reason: String,
    },
}

/// The category presented by a 2-truncated Segal-like simplicial set:
/// objects are the 0-simplices, arrows the 1-simplices (source `d_1`,
/// target `d_0`), and composition is read off the unique 2-simplex with the
/// given outer faces. Fails when a composable pair has no filler or more
/// than one (i.e. when the input is not Segal in degree 2).
pub fn segal_category(x: &TruncatedSimplicialSet) -> Result<FiniteCategory, CompareError> {
    if x.truncation() < 2 {
        return Err(SsetError::TruncationTooSmall { needed: 2, have: x.truncation() }.into());
    }
    let objects: Vec<String> = x.level(0).keys().to_vec();
    let src_tbl = x.face_table(1, 1);
    let tgt_tbl = x.face_table(1, 0);
    let arrows: Vec<CatArrow> = x
        .level(1)
        .keys()
        .iter()
        .enumerate()
        .map(|(e, name)| CatArrow { name: name.clone(), src: src_tbl[e], tgt: tgt_tbl[e] })
        .collect();
    let identities: Vec<usize> = (0..objects.len()).map(|v| x.degeneracy(0, 0, v)).collect();

    let mut filler: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for s in 0..x.level(2).len() {
        let key = (x.face(2, 2, s), x.face(2, 0, s));
        if let Some(prev) = filler.insert(key, s) {
            return Err(CompareError::NoComposite {
                first: x.level(1).key(key.0).to_string(),
                second: x.level(1).key(key.1).to_string(),
                reason: format!(
                    "two fillers {:?} and {:?}",
                    x.level(2).key(prev),
                    x.level(2).key(s)
                ),
            });
        }
    }
    let mut compose_table = BTreeMap::new();
    for (i, f) in arrows.iter().enumerate() {
        for (j, g) in arrows.iter().enumerate() {
            if f.tgt != g.src {
                continue;
            }
            match filler.get(&(i, j)) {
                Some(&s) => {
                    compose_table.insert((i, j), x.face(2, 1, s));
                }
                None => {
                    return Err(CompareError::NoComposite {
                        first: f.name.clone(),
                        second: g.name.clone(),
                        reason: "no filler".into(),
                    })
                }
            }
        }
    }
    let category = FiniteCategory::new(objects, arrows, identities, compose_table)?;
    category.validate_associativity()?;
    Ok(category)
}

/// The twisted-arrow category of a simplicial set, i.e. [`segal_category`]
/// of its edgewise subdivision. Needs truncation at least 5 so the
/// subdivision reaches degree 2.
pub fn twisted_arrow_category(
    x: &TruncatedSimplicialSet,
) -> Result<FiniteCategory, CompareError> {
    if x.truncation() < 5 {
        return Err(SsetError::TruncationTooSmall { needed: 5, have: x.truncation() }.into());
    }
    segal_category(&edgewise(x)?)
}

/// Compares the twisted-arrow category of the nerve of `(N,+)` (truncated at
/// `n`, weights up to `w`) with the inert simplex category on `0..=w`. The
/// functor sends the 3-simplex `(a,m,b)` to the inert map `[m] -> [a+m+b]`
/// with bottom offset `a`, and the report records every isomorphism defect.
pub fn compare_tw_bn_with_delta_inert(n: usize, w: usize) -> Result<CheckReport, CompareError> {
    let tw = twisted_arrow_category(&b_nat(n, w))?;
    let delta = delta_inert_category(w)?;
    let defects = isomorphism_defects(
        &tw,
        &delta,
        |object| object.to_string(),
        |arrow| {
            let c = Composition::decode(arrow).expect("arrow names are compositions");
            let (a, m, b) = (c.parts()[0], c.parts()[1], c.parts()[2]);
            inert_arrow_name(m, a + m + b, a)
        },
    );
    Ok(CheckReport::from_witnesses(defects))
}

fn element_object_name(k: usize, key: &str) -> String {
    format!("{k}:{key}")
}

fn element_arrow_name(k: usize, key: &str, g: &OrdinalMap) -> String {
    format!("{}|{}", element_object_name(k, key), map_values_name(g))
}

/// The category of elements of a truncated simplicial set: objects are all
/// simplices, and a morphism into `(k, x)` is an ordinal map `g : [j] -> [k]`
/// starting at `(j, X(g)(x))`. Objects are named `"k:key"`, arrows
/// `"k:key|g-values"`.
pub fn elements_category(x: &TruncatedSimplicialSet) -> Result<FiniteCategory, CompareError> {
    let mut objects = Vec::new();
    let mut first_of_level = Vec::new();
    for k in 0..=x.truncation() {
        first_of_level.push(objects.len());
        for key in x.level(k).keys() {
            objects.push(element_object_name(k, key));
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_g: Vec<OrdinalMap> = Vec::new();
    let mut arrow_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for k in 0..=x.truncation() {
        for j in 0..=x.truncation() {
            for g in OrdinalMap::enumerate(j, k) {
                let table = x.apply_map(&g)?;
                for (e, &img) in table.iter().enumerate() {
                    let tgt = first_of_level[k] + e;
                    let src = first_of_level[j] + img;
                    let name = element_arrow_name(k, x.level(k).key(e), &g);
                    let idx = arrows.len();
                    arrow_index.insert(name.clone(), idx);
                    arrows.push(CatArrow { name, src, tgt });
                    if g.is_identity() {
                        identities[tgt] = idx;
                    }
                    arrow_g.push(g.clone());
                }
            }
        }
    }
    // Composite of (g1 at x) after (g2 at z), where X(g2)(z) = x, is
    // (g2 . g1 at z): restrict z along g2 first, then along g1.
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (i, a) in arrows.iter().enumerate() {
        by_src[a.src].push(i);
    }
    let mut compose_table = BTreeMap::new();
    for (i, f) in arrows.iter().enumerate() {
        for &j in &by_src[f.tgt] {
            let h = compose(&arrow_g[i], &arrow_g[j])?;
            let tgt = &arrows[j];
            let level_key = objects[tgt.tgt]
                .split_once(':')
                .expect("object names carry levels")
                .1;
            let name = element_arrow_name(arrow_g[j].target(), level_key, &h);
            compose_table.insert((i, j), arrow_index[&name]);
        }
    }
    Ok(FiniteCategory::new(objects, arrows, identities, compose_table)?)
}

/// Compares the active-arrow category (bounded at sources `[k]`, `k <=
/// k_max`, and targets `[n]`, `n <= n_max`) with the category of elements of
/// the nerve of `(N,+)` truncated at `k_max` with weight bound `n_max`.
/// Objects correspond by reading an active map as its composition; an arrow
/// into `alpha` with top leg `g` corresponds to `g` acting on that
/// composition.
pub fn compare_active_arrows_with_el_bn(
    k_max: usize,
    n_max: usize,
) -> Result<CheckReport, CompareError> {
    let from = active_arrow_category(k_max, n_max)?;
    let to = elements_category(&b_nat(k_max, n_max))?;
    let translate_object = |name: &str| -> String {
        let enc = name
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .expect("active objects are parenthesized compositions");
        let c = Composition::decode(enc).expect("active objects decode");
        element_object_name(c.len(), enc)
    };
    let defects = isomorphism_defects(
        &from,
        &to,
        translate_object,
        |arrow| {
            let (obj, top) = arrow.split_once('|').expect("arrow names carry a top leg");
            format!("{}|{}", translate_object(obj), top)
        },
    );
    Ok(CheckReport::from_witnesses(defects))
}
