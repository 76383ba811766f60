//! The named example registry: each entry pairs a presheaf constructor
//! with default bounds and an element syntax, so callers (and the command
//! line) can address every worked example uniformly by name.

use thiserror::Error;

use crate::presheaf::{
    culf_projection, free, truncate_paths, window, InertPresheaf, PresheafError,
};
use crate::sset::{SimplicialMap, TruncatedSimplicialSet};
use crate::zoo::{
    decode_word, dyck_by_baseline, dyck_by_height, encode_word, is_dyck, layered_linear,
    noncrossing_partitions, packed_words, packed_words_by_symbols, parking_f_basis,
    parking_g_basis, permutations_fqsym, qsym, quiver_paths, words, NCPartition, Quiver,
    ZooError,
};

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown example {name:?}; available: {available}")]
    UnknownExample { name: String, available: String },
    #[error("example {example:?} does not accept element {text:?}: {reason}")]
    BadElement { example: String, text: String, reason: String },
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Zoo(#[from] ZooError),
}

/// How a registered example spells its elements on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementSyntax {
    /// The single point element `*`.
    Star,
    /// Juxtaposed letters, `abc`.
    Letters,
    /// Comma-separated positive integers, `2,3,1`.
    Numbers,
    /// Digit blocks sorted by minimum, `1|24|3`.
    Partition,
    /// A `U`/`D` step string.
    Steps,
    /// A vertex name or comma-separated edge names.
    Path,
}

impl ElementSyntax {
    /// Normalize raw text to the canonical key, or explain the failure.
    fn normalize(&self, text: &str) -> Result<String, String> {
        match self {
            ElementSyntax::Star => {
                if text == "*" {
                    Ok(text.to_string())
                } else {
                    Err("the only element is *".to_string())
                }
            }
            ElementSyntax::Letters | ElementSyntax::Path => Ok(text.to_string()),
            ElementSyntax::Numbers => decode_word(text)
                .map(|w| encode_word(&w))
                .map_err(|e| e.to_string()),
            ElementSyntax::Partition => {
                NCPartition::decode(text).map(|p| p.encode()).map_err(|e| e.to_string())
            }
            ElementSyntax::Steps => {
                if is_dyck(text) {
                    Ok(text.to_string())
                } else {
                    Err("not a balanced U/D path".to_string())
                }
            }
        }
    }
}

/// A presheaf addressed by name, with its element syntax.
pub struct RegisteredExample {
    name: String,
    summary: &'static str,
    syntax: ElementSyntax,
    presheaf: InertPresheaf,
}

impl RegisteredExample {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn summary(&self) -> &'static str {
        self.summary
    }

    pub fn syntax(&self) -> ElementSyntax {
        self.syntax
    }

    pub fn presheaf(&self) -> &InertPresheaf {
        &self.presheaf
    }

    /// The free simplicial set on the presheaf, with the presheaf budget
    /// as weight bound.
    pub fn free_space(&self, truncation: usize) -> Result<TruncatedSimplicialSet, PresheafError> {
        free(&self.presheaf, truncation)
    }

    /// The projection of the free simplicial set to the nerve of the
    /// additive monoid.
    pub fn projection(&self, truncation: usize) -> Result<SimplicialMap, PresheafError> {
        culf_projection(&self.presheaf, truncation, self.presheaf.budget())
    }

    /// Canonicalize raw element text under this example's syntax.
    pub fn normalize_element(&self, text: &str) -> Result<String, RegistryError> {
        self.syntax.normalize(text).map_err(|reason| RegistryError::BadElement {
            example: self.name.clone(),
            text: text.to_string(),
            reason,
        })
    }

    /// Every `(grade, position)` at which the element occurs.
    pub fn locate_element(&self, text: &str) -> Result<Vec<(usize, usize)>, RegistryError> {
        let key = self.normalize_element(text)?;
        let hits: Vec<(usize, usize)> = (0..=self.presheaf.budget())
            .filter_map(|n| self.presheaf.level(n).position(&key).map(|e| (n, e)))
            .collect();
        if hits.is_empty() {
            return Err(RegistryError::BadElement {
                example: self.name.clone(),
                text: text.to_string(),
                reason: "no grade contains this element".to_string(),
            });
        }
        Ok(hits)
    }
}

/// Names and one-line summaries of every registered example.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("terminal", "the one-element presheaf; free space is the nerve of (N, +)"),
    ("words", "words over a letter alphabet under deconcatenation"),
    ("nonempty-words", "words regraded to start at length 1; top level empties out"),
    ("qsym", "monomial basis of quasi-symmetric functions"),
    ("layered", "layered linear orders by fiber sizes"),
    ("nc", "noncrossing partitions"),
    ("permutations", "permutations with standardized deconcatenation"),
    ("packed", "packed words graded by length"),
    ("packed-symbols", "packed words graded by symbol count"),
    ("parking", "parking functions graded by length"),
    ("parking-g", "parking functions graded by breakpoint count"),
    ("dyck-height", "Dyck paths graded by height under strip clipping"),
    ("dyck-baseline", "Dyck paths as words of irreducible factors"),
    ("paths", "composable edge paths in a two-vertex graph"),
    ("paths-truncated", "the same paths cut off at length 1"),
];

pub fn example_names() -> Vec<&'static str> {
    EXAMPLES.iter().map(|(n, _)| *n).collect()
}

fn two_vertex_quiver() -> Quiver {
    Quiver::new(&["x", "y"], &[("a", "x", "x"), ("b", "x", "y")])
        .expect("fixed quiver is well formed")
}

fn terminal(budget: usize) -> InertPresheaf {
    InertPresheaf::new(
        budget,
        vec![vec!["*".to_string()]; budget + 1],
        |_, _| "*".to_string(),
        |_, _| "*".to_string(),
    )
    .expect("the terminal presheaf is total")
}

/// Build a registered example. `bound` overrides the primary size knob
/// (budget, weight bound, or maximum length, as appropriate); `alphabet`
/// applies to the letter-word examples only.
pub fn build(
    name: &str,
    bound: Option<usize>,
    alphabet: Option<&str>,
) -> Result<RegisteredExample, RegistryError> {
    let letters: Vec<char> = alphabet.unwrap_or("ab").chars().collect();
    let (syntax, presheaf) = match name {
        "terminal" => (ElementSyntax::Star, terminal(bound.unwrap_or(6))),
        "words" => (ElementSyntax::Letters, words(&letters, bound.unwrap_or(4))),
        "nonempty-words" => {
            let maxlen = bound.unwrap_or(4);
            let base = words(&letters, maxlen);
            (ElementSyntax::Letters, window(&base, 1, maxlen + 1)?)
        }
        "qsym" => (ElementSyntax::Numbers, qsym(bound.unwrap_or(5))),
        "layered" => (ElementSyntax::Numbers, layered_linear(bound.unwrap_or(5))),
        "nc" => (ElementSyntax::Partition, noncrossing_partitions(bound.unwrap_or(5))),
        "permutations" => (ElementSyntax::Numbers, permutations_fqsym(bound.unwrap_or(4))),
        "packed" => (ElementSyntax::Numbers, packed_words(bound.unwrap_or(4))),
        "packed-symbols" => {
            let b = bound.unwrap_or(4);
            (ElementSyntax::Numbers, packed_words_by_symbols(b, b))
        }
        "parking" => (ElementSyntax::Numbers, parking_f_basis(bound.unwrap_or(4))),
        "parking-g" => (ElementSyntax::Numbers, parking_g_basis(bound.unwrap_or(4))),
        "dyck-height" => (ElementSyntax::Steps, dyck_by_height(bound.unwrap_or(3), 10)),
        "dyck-baseline" => (ElementSyntax::Steps, dyck_by_baseline(6, bound.unwrap_or(3))),
        "paths" => {
            (ElementSyntax::Path, quiver_paths(&two_vertex_quiver(), bound.unwrap_or(4)))
        }
        "paths-truncated" => {
            let base = quiver_paths(&two_vertex_quiver(), 4);
            (ElementSyntax::Path, truncate_paths(&base, bound.unwrap_or(1)))
        }
        _ => {
            return Err(RegistryError::UnknownExample {
                name: name.to_string(),
                available: example_names().join(", "),
            })
        }
    };
    let summary = EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .expect("every buildable name is listed");
    Ok(RegisteredExample { name: name.to_string(), summary, syntax, presheaf })
}

/// All examples at their default bounds.
pub fn build_all() -> Vec<RegisteredExample> {
    example_names()
        .into_iter()
        .map(|n| build(n, None, None).expect("defaults are valid"))
        .collect()
}
