//! A minimal container for finitely presented categories.
//!
//! Comparison routines need to hand around concrete categories (objects,
//! hom-sets, identities, a composition table) and check that two of them are
//! isomorphic. Nothing here knows about simplicial sets; names are opaque
//! strings chosen by the constructors.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("arrow {arrow:?} references object index {index} out of range")]
    BadObjectIndex { arrow: String, index: usize },
    #[error("identity of object {object:?} is not an endo-arrow on it")]
    BadIdentity { object: String },
    #[error("composition table misses the composable pair ({first:?}, {second:?})")]
    MissingComposite { first: String, second: String },
    #[error("composite of ({first:?}, {second:?}) has wrong endpoints")]
    BadComposite { first: String, second: String },
    #[error("identity law fails at arrow {arrow:?}")]
    IdentityLaw { arrow: String },
    #[error("associativity fails at ({f:?}, {g:?}, {h:?})")]
    Associativity { f: String, g: String, h: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatArrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// Objects, arrows, identities and a total composition table.
///
/// `compose` is keyed by `(first, second)` where `first: a -> b` is applied
/// before `second: b -> c`.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<CatArrow>,
    identities: Vec<usize>,
    compose: BTreeMap<(usize, usize), usize>,
    object_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl FiniteCategory {
    /// Builds the category and checks well-formedness: names are unique, the
    /// table is total on composable pairs, endpoints line up, and the unit
    /// laws hold. Associativity is checked separately by [`Self::validate_associativity`]
    /// because it is cubic in arrow count.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<CatArrow>,
        identities: Vec<usize>,
        compose: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self, CatError> {
        let mut object_index = HashMap::new();
        for (i, name) in objects.iter().enumerate() {
            if object_index.insert(name.clone(), i).is_some() {
                return Err(CatError::DuplicateName(name.clone()));
            }
        }
        let mut arrow_index = HashMap::new();
        for (i, arrow) in arrows.iter().enumerate() {
            if arrow.src >= objects.len() || arrow.tgt >= objects.len() {
                return Err(CatError::BadObjectIndex {
                    arrow: arrow.name.clone(),
                    index: arrow.src.max(arrow.tgt),
                });
            }
            if arrow_index.insert(arrow.name.clone(), i).is_some() {
                return Err(CatError::DuplicateName(arrow.name.clone()));
            }
        }
        if identities.len() != objects.len() {
            return Err(CatError::BadIdentity {
                object: "<missing>".into(),
            });
        }
        for (obj, &id) in identities.iter().enumerate() {
            let a = &arrows[id];
            if a.src != obj || a.tgt != obj {
                return Err(CatError::BadIdentity {
                    object: objects[obj].clone(),
                });
            }
        }
        let cat = FiniteCategory {
            objects,
            arrows,
            identities,
            compose,
            object_index,
            arrow_index,
        };
        cat.validate_units()?;
        Ok(cat)
    }

    fn arrows_by_src(&self) -> Vec<Vec<usize>> {
        let mut by_src = vec![Vec::new(); self.objects.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            by_src[a.src].push(i);
        }
        by_src
    }

    fn validate_units(&self) -> Result<(), CatError> {
        let by_src = self.arrows_by_src();
        for (i, f) in self.arrows.iter().enumerate() {
            for &j in &by_src[f.tgt] {
                let g = &self.arrows[j];
                let Some(&c) = self.compose.get(&(i, j)) else {
                    return Err(CatError::MissingComposite {
                        first: f.name.clone(),
                        second: g.name.clone(),
                    });
                };
                let comp = &self.arrows[c];
                if comp.src != f.src || comp.tgt != g.tgt {
                    return Err(CatError::BadComposite {
                        first: f.name.clone(),
                        second: g.name.clone(),
                    });
                }
            }
            if self.compose.get(&(self.identities[f.src], i)) != Some(&i)
                || self.compose.get(&(i, self.identities[f.tgt])) != Some(&i)
            {
                return Err(CatError::IdentityLaw {
                    arrow: f.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// Exhaustive associativity check; use on small instances.
    pub fn validate_associativity(&self) -> Result<(), CatError> {
        let by_src = self.arrows_by_src();
        for (i, f) in self.arrows.iter().enumerate() {
            for &j in &by_src[f.tgt] {
                let g = &self.arrows[j];
                let fg = self.compose[&(i, j)];
                for &k in &by_src[g.tgt] {
                    let h = &self.arrows[k];
                    let gh = self.compose[&(j, k)];
                    if self.compose[&(fg, k)] != self.compose[&(i, gh)] {
                        return Err(CatError::Associativity {
                            f: f.name.clone(),
                            g: g.name.clone(),
                            h: h.name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[CatArrow] {
        &self.arrows
    }

    pub fn identity_of(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    /// Arrow indices from `src` to `tgt`, in arrow-list order.
    pub fn hom(&self, src: usize, tgt: usize) -> Vec<usize> {
        self.arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| a.src == src && a.tgt == tgt)
            .map(|(i, _)| i)
            .collect()
    }

    /// Composite of `first: a -> b` followed by `second: b -> c`.
    pub fn composite(&self, first: usize, second: usize) -> Option<usize> {
        self.compose.get(&(first, second)).copied()
    }
}

/// Checks that an object map and an arrow map (given by name) form an
/// isomorphism of categories. Returns human-readable defect descriptions,
/// empty when the maps are a genuine isomorphism.
pub fn isomorphism_defects(
    from: &FiniteCategory,
    to: &FiniteCategory,
    object_map: impl Fn(&str) -> String,
    arrow_map: impl Fn(&str) -> String,
) -> Vec<String> {
    let mut defects = Vec::new();
    let mut obj_images = vec![None; from.objects.len()];
    let mut hit_objects = vec![false; to.objects.len()];
    for (i, name) in from.objects.iter().enumerate() {
        let image = object_map(name);
        match to.object_index(&image) {
            Some(j) => {
                if hit_objects[j] {
                    defects.push(format!("object map not injective at {name:?} -> {image:?}"));
                }
                hit_objects[j] = true;
                obj_images[i] = Some(j);
            }
            None => defects.push(format!("object {name:?} maps to unknown {image:?}")),
        }
    }
    for (j, hit) in hit_objects.iter().enumerate() {
        if !hit {
            defects.push(format!("object {:?} not in the image", to.objects()[j]));
        }
    }
    let mut arrow_images = vec![None; from.arrows.len()];
    let mut hit_arrows = vec![false; to.arrows.len()];
    for (i, arrow) in from.arrows.iter().enumerate() {
        let image = arrow_map(&arrow.name);
        match to.arrow_index(&image) {
            Some(j) => {
                if hit_arrows[j] {
                    defects.push(format!(
                        "arrow map not injective at {:?} -> {image:?}",
                        arrow.name
                    ));
                }
                hit_arrows[j] = true;
                arrow_images[i] = Some(j);
                let img = &to.arrows()[j];
                if obj_images[arrow.src] != Some(img.src) || obj_images[arrow.tgt] != Some(img.tgt)
                {
                    defects.push(format!("arrow {:?} image has wrong endpoints", arrow.name));
                }
            }
            None => defects.push(format!("arrow {:?} maps to unknown {image:?}", arrow.name)),
        }
    }
    for (j, hit) in hit_arrows.iter().enumerate() {
        if !hit {
            defects.push(format!("arrow {:?} not in the image", to.arrows()[j].name));
        }
    }
    if !defects.is_empty() {
        return defects;
    }
    for (i, &id) in from.identities.iter().enumerate() {
        if arrow_images[id] != Some(to.identity_of(obj_images[i].unwrap())) {
            defects.push(format!(
                "identity of {:?} not preserved",
                from.objects()[i]
            ));
        }
    }
    for (i, f) in from.arrows.iter().enumerate() {
        for (j, g) in from.arrows.iter().enumerate() {
            if f.tgt != g.src {
                continue;
            }
            let lhs = from.composite(i, j).and_then(|c| arrow_images[c]);
            let rhs = to.composite(arrow_images[i].unwrap(), arrow_images[j].unwrap());
            if lhs != rhs {
                defects.push(format!(
                    "composition not preserved at ({:?}, {:?})",
                    f.name, g.name
                ));
            }
        }
    }
    defects
}
