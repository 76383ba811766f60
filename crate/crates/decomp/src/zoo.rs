//! A catalogue of inert presheaves whose free simplicial sets carry
//! deconcatenation-style comultiplications: graph paths, words,
//! quasi-symmetric and word-quasi-symmetric bases, permutations, parking
//! functions in two bases, noncrossing partitions, Dyck paths graded two
//! ways, layered linear orders, and the presheaf of nondegenerate simplices
//! of an arbitrary simplicial set.
//!
//! Element encodings double as the command-line syntax: letter words are
//! juxtaposed (`abc`), numeric words are comma-separated (`2,3,1`),
//! partitions list blocks sorted by minimum (`1|24|3`), Dyck paths are
//! `U`/`D` strings.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::presheaf::InertPresheaf;
use crate::simplex::Composition;
use crate::sset::TruncatedSimplicialSet;

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("{0:?} is not a partition of an initial segment: {1}")]
    NotAPartition(String, String),
    #[error("blocks {first:?} and {second:?} cross")]
    Crossing { first: String, second: String },
    #[error("cannot parse element {0:?}")]
    BadElement(String),
    #[error(
        "outer face {face} of nondegenerate {key:?} at level {level} is degenerate"
    )]
    OuterFace { level: usize, key: String, face: usize },
}

/// Encode a numeric word as comma-separated letters; the empty word is the
/// empty string.
pub fn encode_word(w: &[usize]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Parse a comma-separated numeric word.
pub fn decode_word(text: &str) -> Result<Vec<usize>, ZooError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| p.parse().map_err(|_| ZooError::BadElement(text.to_string())))
        .collect()
}

fn positive_words(len: usize, max_weight: usize) -> Vec<Vec<usize>> {
    Composition::enumerate_bounded(len, max_weight)
        .into_iter()
        .filter(|c| c.parts().iter().all(|&p| p > 0))
        .map(|c| c.parts().to_vec())
        .collect()
}

// ---------------------------------------------------------------------------
// Graph paths

/// A finite directed graph with named vertices and edges.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<(String, usize, usize)>,
}

impl Quiver {
    /// Build from vertex names and `(edge name, source, target)` triples.
    pub fn new(
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Quiver, ZooError> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| ZooError::UnknownVertex(name.to_string()))
        };
        let edges = edges
            .iter()
            .map(|(name, src, tgt)| Ok((name.to_string(), index(src)?, index(tgt)?)))
            .collect::<Result<_, ZooError>>()?;
        Ok(Quiver { vertices, edges })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
}

/// The path presheaf of a graph: grade `n` holds the composable `n`-tuples
/// of edges (vertices at grade 0); the bottom face drops the first edge,
/// the top face the last.
pub fn quiver_paths(g: &Quiver, budget: usize) -> InertPresheaf {
    let edge_index = |name: &str| g.edges.iter().position(|(e, _, _)| e == name).unwrap();
    let mut levels: Vec<Vec<String>> = vec![g.vertices.clone()];
    let mut paths: Vec<Vec<usize>> = g.edges.iter().enumerate().map(|(i, _)| vec![i]).collect();
    for _ in 1..=budget {
        levels.push(
            paths
                .iter()
                .map(|p| {
                    p.iter().map(|&e| g.edges[e].0.clone()).collect::<Vec<_>>().join(",")
                })
                .collect(),
        );
        paths = paths
            .into_iter()
            .flat_map(|p| {
                let last_tgt = g.edges[*p.last().unwrap()].2;
                g.edges
                    .iter()
                    .enumerate()
                    .filter(move |(_, (_, src, _))| *src == last_tgt)
                    .map(move |(i, _)| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    InertPresheaf::new(
        budget,
        levels,
        |n, key| {
            // Drop the first edge; a single edge restricts to its target.
            if n == 1 {
                g.vertices[g.edges[edge_index(key)].2].clone()
            } else {
                key.split_once(',').unwrap().1.to_string()
            }
        },
        |n, key| {
            if n == 1 {
                g.vertices[g.edges[edge_index(key)].1].clone()
            } else {
                key.rsplit_once(',').unwrap().0.to_string()
            }
        },
    )
    .expect("path faces stay within the enumerated levels")
}

// ---------------------------------------------------------------------------
// Words and quasi-symmetric bases

/// Words over a letter alphabet, graded by length; faces delete the first
/// or last letter.
pub fn words(alphabet: &[char], maxlen: usize) -> InertPresheaf {
    let mut levels: Vec<Vec<String>> = vec![vec![String::new()]];
    for n in 1..=maxlen {
        levels.push(
            levels[n - 1]
                .iter()
                .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
                .collect(),
        );
    }
    InertPresheaf::new(
        maxlen,
        levels,
        |_, w| w.chars().skip(1).collect(),
        |_, w| {
            let mut w = w.to_string();
            w.pop();
            w
        },
    )
    .expect("letter deletion stays within the enumerated levels")
}

/// Words over positive integers graded by length, with total letter sum at
/// most `weight_bound`; the monomial basis of quasi-symmetric functions
/// under deconcatenation.
pub fn qsym(weight_bound: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=weight_bound)
        .map(|n| positive_words(n, weight_bound).iter().map(|w| encode_word(w)).collect())
        .collect();
    InertPresheaf::new(
        weight_bound,
        levels,
        |_, w| {
            let mut w = decode_word(w).unwrap();
            w.remove(0);
            encode_word(&w)
        },
        |_, w| {
            let mut w = decode_word(w).unwrap();
            w.pop();
            encode_word(&w)
        },
    )
    .expect("letter deletion stays within the enumerated levels")
}

/// The monomial quasi-symmetric function of a word, truncated to
/// `num_vars` variables: one exponent vector per strictly increasing
/// placement of the letters, each with coefficient 1.
pub fn monomial_expand(word: &[usize], num_vars: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let k = word.len();
    if k > num_vars {
        return out;
    }
    let mut choice: Vec<usize> = (0..k).collect();
    loop {
        let mut expt = vec![0; num_vars];
        for (slot, &var) in choice.iter().enumerate() {
            expt[var] = word[slot];
        }
        out.push(expt);
        // Advance to the next k-subset of {0..num_vars} in ascending order.
        let mut i = k;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if choice[i] < num_vars - (k - i) {
                choice[i] += 1;
                for j in i + 1..k {
                    choice[j] = choice[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Packing, standardization, and the word-quasi-symmetric bases

/// Relabel the distinct letters order-preservingly onto `1..k`.
pub fn pack(w: &[usize]) -> Vec<usize> {
    let distinct: BTreeSet<usize> = w.iter().copied().collect();
    let rank = |x: usize| distinct.iter().position(|&d| d == x).unwrap() + 1;
    w.iter().map(|&x| rank(x)).collect()
}

/// The standard permutation of a word: rank letters by value, breaking
/// ties left to right. Agrees with [`pack`] on words with distinct
/// letters and always outputs a permutation.
pub fn standardize(w: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| (w[i], i));
    let mut out = vec![0; w.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank + 1;
    }
    out
}

fn all_words(max_letter: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=max_letter).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Packed words graded by length; faces delete the first or last letter
/// and repack.
pub fn packed_words(maxlen: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=maxlen)
        .map(|n| {
            all_words(n.max(1), n)
                .into_iter()
                .filter(|w| pack(w) == *w)
                .map(|w| encode_word(&w))
                .collect()
        })
        .collect();
    InertPresheaf::new(
        maxlen,
        levels,
        |_, w| {
            let w = decode_word(w).unwrap();
            encode_word(&pack(&w[1..]))
        },
        |_, w| {
            let w = decode_word(w).unwrap();
            encode_word(&pack(&w[..w.len() - 1]))
        },
    )
    .expect("packing lands among the packed words")
}

/// Packed words graded by the number of distinct symbols, with lengths
/// capped by `max_len` to keep every grade finite. The top face deletes
/// every occurrence of the largest symbol; the bottom face deletes every
/// occurrence of the smallest and shifts the rest down.
pub fn packed_words_by_symbols(max_symbols: usize, max_len: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=max_symbols)
        .map(|n| {
            let mut out = Vec::new();
            for len in n..=max_len {
                out.extend(
                    all_words(n.max(1), len)
                        .into_iter()
                        .filter(|w| {
                            pack(w) == *w
                                && w.iter().copied().collect::<BTreeSet<_>>().len() == n
                        })
                        .map(|w| encode_word(&w)),
                );
            }
            out.sort();
            out
        })
        .collect();
    InertPresheaf::new(
        max_symbols,
        levels,
        |_, w| {
            let w = decode_word(w).unwrap();
            let kept: Vec<usize> = w.iter().filter(|&&x| x > 1).map(|&x| x - 1).collect();
            encode_word(&kept)
        },
        |_, w| {
            let w = decode_word(w).unwrap();
            let top = *w.iter().max().unwrap();
            let kept: Vec<usize> = w.iter().copied().filter(|&x| x < top).collect();
            encode_word(&kept)
        },
    )
    .expect("symbol deletion lands among the packed words")
}

/// Permutations as words, graded by length; faces delete the first or last
/// letter and standardize.
pub fn permutations_fqsym(maxlen: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=maxlen)
        .map(|n| {
            all_words(n.max(1), n)
                .into_iter()
                .filter(|w| {
                    w.iter().copied().collect::<BTreeSet<_>>().len() == w.len()
                })
                .map(|w| encode_word(&w))
                .collect()
        })
        .collect();
    InertPresheaf::new(
        maxlen,
        levels,
        |_, w| {
            let w = decode_word(w).unwrap();
            encode_word(&standardize(&w[1..]))
        },
        |_, w| {
            let w = decode_word(w).unwrap();
            encode_word(&standardize(&w[..w.len() - 1]))
        },
    )
    .expect("standardization lands among the permutations")
}

// ---------------------------------------------------------------------------
// Parking functions

/// A word over positive integers parks when its ascending reordering `m`
/// satisfies `m_i <= i`.
pub fn is_parking(w: &[usize]) -> bool {
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    sorted.iter().enumerate().all(|(i, &m)| m <= i + 1)
}

/// Normalize a word to a parking function: while some threshold `i` has
/// fewer than `i` letters at or below it, decrement every letter above the
/// least such threshold. Terminates because the letter sum strictly
/// decreases; fixes parking functions.
pub fn parkify(w: &[usize]) -> Vec<usize> {
    let mut w = w.to_vec();
    loop {
        let failing = (1..=w.len()).find(|&i| w.iter().filter(|&&x| x <= i).count() < i);
        match failing {
            None => return w,
            Some(v) => {
                for x in w.iter_mut() {
                    if *x > v {
                        *x -= 1;
                    }
                }
            }
        }
    }
}

/// The breakpoints of a word of length `n`: those `b` in `0..=n` with
/// exactly `b` letters at or below `b`. A parking function of length `n`
/// always has both `0` and `n`.
pub fn breakpoints(w: &[usize]) -> Vec<usize> {
    (0..=w.len())
        .filter(|&b| w.iter().filter(|&&x| x <= b).count() == b)
        .collect()
}

fn parking_functions(len: usize) -> Vec<Vec<usize>> {
    all_words(len.max(1), len).into_iter().filter(|w| is_parking(w)).collect()
}

/// Parking functions graded by length; faces delete the first or last
/// letter and parkify.
pub fn parking_f_basis(maxlen: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=maxlen)
        .map(|n| parking_functions(n).iter().map(|w| encode_word(w)).collect())
        .collect();
    InertPresheaf::new(
        maxlen,
        levels,
        |_, w| {
            let w = decode_word(w).unwrap();
            encode_word(&parkify(&w[1..]))
        },
        |_, w| {
            let w = decode_word(w).unwrap();
            encode_word(&parkify(&w[..w.len() - 1]))
        },
    )
    .expect("parkification lands among the parking functions")
}

/// Bottom face in the breakpoint grading: delete every letter at or below
/// the second breakpoint and shift the rest down past it.
pub fn g_basis_d_bot(w: &[usize]) -> Vec<usize> {
    let b1 = breakpoints(w)[1];
    w.iter().filter(|&&x| x > b1).map(|&x| x - b1).collect()
}

/// Top face in the breakpoint grading: delete every letter above the
/// next-to-last breakpoint.
pub fn g_basis_d_top(w: &[usize]) -> Vec<usize> {
    let bs = breakpoints(w);
    let cut = bs[bs.len() - 2];
    w.iter().copied().filter(|&x| x <= cut).collect()
}

/// Parking functions graded by their breakpoint count (grade `n` holds
/// those with `n + 1` breakpoints), with lengths capped by `weight_bound`
/// to keep every grade finite. Grade 0 holds exactly the empty function.
pub fn parking_g_basis(weight_bound: usize) -> InertPresheaf {
    let mut levels: Vec<Vec<String>> = vec![Vec::new(); weight_bound + 1];
    for len in 0..=weight_bound {
        for w in parking_functions(len) {
            let grade = breakpoints(&w).len() - 1;
            levels[grade].push(encode_word(&w));
        }
    }
    for level in levels.iter_mut() {
        level.sort();
    }
    InertPresheaf::new(
        weight_bound,
        levels,
        |_, w| encode_word(&g_basis_d_bot(&decode_word(w).unwrap())),
        |_, w| encode_word(&g_basis_d_top(&decode_word(w).unwrap())),
    )
    .expect("breakpoint clipping lands among the parking functions")
}

// ---------------------------------------------------------------------------
// Noncrossing partitions

/// A set partition of `{1..n}` with no crossing pair of blocks, encoded as
/// digit blocks sorted by minimum: `1|24|3`. The digit encoding restricts
/// the ground set to `n <= 9`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCPartition {
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Validate that the blocks partition `{1..n}` and are noncrossing:
    /// no `a < c < b < d` with `a, b` in one block and `c, d` in another.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<NCPartition, ZooError> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .filter(|b| !b.is_empty())
            .collect();
        blocks.sort_by_key(|b| b[0]);
        let all: Vec<usize> = {
            let mut v: Vec<usize> = blocks.iter().flatten().copied().collect();
            v.sort_unstable();
            v
        };
        let shown = |blocks: &[Vec<usize>]| {
            blocks
                .iter()
                .map(|b| b.iter().map(|x| x.to_string()).collect::<String>())
                .collect::<Vec<_>>()
                .join("|")
        };
        if all.iter().enumerate().any(|(i, &x)| x != i + 1) {
            return Err(ZooError::NotAPartition(
                shown(&blocks),
                "elements must be 1..n without repetition".to_string(),
            ));
        }
        if all.len() > 9 {
            return Err(ZooError::NotAPartition(
                shown(&blocks),
                "digit encoding supports at most 9 elements".to_string(),
            ));
        }
        for (i, first) in blocks.iter().enumerate() {
            for second in &blocks[i + 1..] {
                let crossing = first.iter().any(|&a| {
                    first.iter().any(|&b| {
                        second
                            .iter()
                            .any(|&c| second.iter().any(|&d| a < c && c < b && b < d))
                    })
                });
                if crossing {
                    return Err(ZooError::Crossing {
                        first: first.iter().map(|x| x.to_string()).collect(),
                        second: second.iter().map(|x| x.to_string()).collect(),
                    });
                }
            }
        }
        Ok(NCPartition { blocks })
    }

    pub fn encode(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<String>())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn decode(text: &str) -> Result<NCPartition, ZooError> {
        if text.is_empty() {
            return NCPartition::new(Vec::new());
        }
        let blocks = text
            .split('|')
            .map(|b| {
                b.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .filter(|&d| d > 0)
                            .map(|d| d as usize)
                            .ok_or_else(|| ZooError::BadElement(text.to_string()))
                    })
                    .collect::<Result<Vec<usize>, ZooError>>()
            })
            .collect::<Result<Vec<_>, ZooError>>()?;
        NCPartition::new(blocks)
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Delete the largest element from its block.
    pub fn delete_top(&self) -> NCPartition {
        let n = self.ground_size();
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| x != n).collect())
            .collect();
        NCPartition::new(blocks).expect("a subpartition stays noncrossing")
    }

    /// Delete the element 1 and shift the rest down.
    pub fn delete_bottom(&self) -> NCPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| x != 1).map(|x| x - 1).collect())
            .collect();
        NCPartition::new(blocks).expect("a subpartition stays noncrossing")
    }
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for x in 1..=n {
        out = out
            .into_iter()
            .flat_map(|p| {
                let mut extended: Vec<Vec<Vec<usize>>> = (0..p.len())
                    .map(|i| {
                        let mut q = p.clone();
                        q[i].push(x);
                        q
                    })
                    .collect();
                let mut fresh = p.clone();
                fresh.push(vec![x]);
                extended.push(fresh);
                extended
            })
            .collect();
    }
    out
}

/// Noncrossing partitions graded by ground-set size; the top face deletes
/// the largest element, the bottom face deletes 1 and shifts down.
pub fn noncrossing_partitions(max_n: usize) -> InertPresheaf {
    assert!(max_n <= 9, "digit encoding supports at most 9 elements");
    let levels: Vec<Vec<String>> = (0..=max_n)
        .map(|n| {
            let mut keys: Vec<String> = set_partitions(n)
                .into_iter()
                .filter_map(|blocks| NCPartition::new(blocks).ok())
                .map(|p| p.encode())
                .collect();
            keys.sort();
            keys.dedup();
            keys
        })
        .collect();
    InertPresheaf::new(
        max_n,
        levels,
        |_, key| NCPartition::decode(key).unwrap().delete_bottom().encode(),
        |_, key| NCPartition::decode(key).unwrap().delete_top().encode(),
    )
    .expect("deletion lands among the noncrossing partitions")
}

// ---------------------------------------------------------------------------
// Dyck paths

/// Nonnegative prefix sums returning to zero, over steps `U` and `D`.
pub fn is_dyck(path: &str) -> bool {
    let mut h: i64 = 0;
    for c in path.chars() {
        match c {
            'U' => h += 1,
            'D' => h -= 1,
            _ => return false,
        }
        if h < 0 {
            return false;
        }
    }
    h == 0
}

/// The maximum height reached by a Dyck path.
pub fn dyck_height(path: &str) -> usize {
    let mut h = 0i64;
    let mut max = 0i64;
    for c in path.chars() {
        h += if c == 'U' { 1 } else { -1 };
        max = max.max(h);
    }
    max as usize
}

/// Delete every step lying above the clip height (steps spanning heights
/// `clip` to `clip + 1` or higher) and concatenate what remains.
pub fn dyck_clip_top(path: &str, clip: usize) -> String {
    let clip = clip as i64;
    let mut h = 0i64;
    let mut out = String::new();
    for c in path.chars() {
        let next = h + if c == 'U' { 1 } else { -1 };
        if h.max(next) <= clip {
            out.push(c);
        }
        h = next;
    }
    out
}

/// Delete every step lying below height 1 (steps spanning heights 0 to 1)
/// and concatenate the remaining excursions, implicitly shifting down.
pub fn dyck_clip_bottom(path: &str) -> String {
    let mut h = 0i64;
    let mut out = String::new();
    for c in path.chars() {
        let next = h + if c == 'U' { 1 } else { -1 };
        if h.min(next) >= 1 {
            out.push(c);
        }
        h = next;
    }
    out
}

fn dyck_paths(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier: Vec<(String, i64)> = vec![(String::new(), 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (p, h) in frontier {
            next.push((format!("{p}U"), h + 1));
            if h > 0 {
                next.push((format!("{p}D"), h - 1));
            }
        }
        out.extend(next.iter().filter(|(_, h)| *h == 0).map(|(p, _)| p.clone()));
        frontier = next;
    }
    out.sort();
    out
}

/// Dyck paths of length at most `max_len` graded by exact height; the top
/// face clips the strip above height `n - 1`, the bottom face the strip
/// below height 1.
pub fn dyck_by_height(max_height: usize, max_len: usize) -> InertPresheaf {
    let pool = dyck_paths(max_len);
    let levels: Vec<Vec<String>> = (0..=max_height)
        .map(|n| pool.iter().filter(|p| dyck_height(p) == n).cloned().collect())
        .collect();
    InertPresheaf::new(
        max_height,
        levels,
        |_, p| dyck_clip_bottom(p),
        |n, p| dyck_clip_top(p, n - 1),
    )
    .expect("clipping lands among the shorter Dyck paths")
}

/// The Dyck paths touching the baseline only at their endpoints, up to the
/// given length.
pub fn irreducible_dyck_paths(max_len: usize) -> Vec<String> {
    dyck_paths(max_len)
        .into_iter()
        .filter(|p| !p.is_empty())
        .filter(|p| {
            let mut h = 0i64;
            p.chars().take(p.len() - 1).all(|c| {
                h += if c == 'U' { 1 } else { -1 };
                h > 0
            })
        })
        .collect()
}

/// Split a Dyck path at its baseline returns into irreducible factors.
pub fn dyck_factorize(path: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut h = 0i64;
    let mut current = String::new();
    for c in path.chars() {
        h += if c == 'U' { 1 } else { -1 };
        current.push(c);
        if h == 0 {
            out.push(std::mem::take(&mut current));
        }
    }
    out
}

/// Dyck paths graded by their number of irreducible factors, each factor
/// of length at most `max_irr_len`: the word construction over the
/// alphabet of irreducible paths. Faces drop the first or last factor.
pub fn dyck_by_baseline(max_irr_len: usize, maxlen: usize) -> InertPresheaf {
    let alphabet = irreducible_dyck_paths(max_irr_len);
    let mut levels: Vec<Vec<String>> = vec![vec![String::new()]];
    for n in 1..=maxlen {
        let mut next: Vec<String> = levels[n - 1]
            .iter()
            .flat_map(|w| alphabet.iter().map(move |irr| format!("{w}{irr}")))
            .collect();
        next.sort();
        levels.push(next);
    }
    InertPresheaf::new(
        maxlen,
        levels,
        |_, p| dyck_factorize(p)[1..].concat(),
        |_, p| {
            let f = dyck_factorize(p);
            f[..f.len() - 1].concat()
        },
    )
    .expect("dropping a factor stays within the enumerated lengths")
}

// ---------------------------------------------------------------------------
// Layered linear orders

/// Surjective monotone maps out of a linear order, encoded by their fiber
/// sizes as positive compositions and graded by the number of layers;
/// faces delete the bottom or top layer. Canonically isomorphic to
/// [`qsym`].
pub fn layered_linear(weight_bound: usize) -> InertPresheaf {
    let levels: Vec<Vec<String>> = (0..=weight_bound)
        .map(|n| positive_words(n, weight_bound).iter().map(|w| encode_word(w)).collect())
        .collect();
    InertPresheaf::new(
        weight_bound,
        levels,
        |_, w| {
            let mut w = decode_word(w).unwrap();
            w.remove(0);
            encode_word(&w)
        },
        |_, w| {
            let mut w = decode_word(w).unwrap();
            w.pop();
            encode_word(&w)
        },
    )
    .expect("deleting a layer stays within the weight bound")
}

// ---------------------------------------------------------------------------
// Nondegenerate simplices

/// The nerve of the chain `0 < 1 < ... < top`: level `k` holds the weakly
/// increasing `(k+1)`-tuples, encoded comma-separated.
pub fn nerve_of_chain(top: usize, truncation: usize) -> TruncatedSimplicialSet {
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..=top).map(|v| vec![v]).collect()];
    for k in 1..=truncation {
        chains.push(
            chains[k - 1]
                .iter()
                .flat_map(|c| {
                    (*c.last().unwrap()..=top).map(move |v| {
                        let mut d = c.clone();
                        d.push(v);
                        d
                    })
                })
                .collect(),
        );
    }
    let levels: Vec<Vec<(String, usize)>> = chains
        .iter()
        .map(|level| level.iter().map(|c| (encode_word(c), 0)).collect())
        .collect();
    TruncatedSimplicialSet::from_parts(
        truncation,
        0,
        levels,
        |_, i, key| {
            let mut c = decode_word(key).unwrap();
            c.remove(i);
            encode_word(&c)
        },
        |_, i, key| {
            let mut c = decode_word(key).unwrap();
            c.insert(i, c[i]);
            encode_word(&c)
        },
    )
    .expect("chain faces are total")
}

/// The presheaf of nondegenerate simplices: grade `n` holds the
/// nondegenerate `n`-simplices with the outer faces `d_0`, `d_n` as bottom
/// and top. Errors when some outer face of a nondegenerate simplex is
/// degenerate, naming the witness.
pub fn nondeg_j(x: &TruncatedSimplicialSet) -> Result<InertPresheaf, ZooError> {
    let nondeg = |k: usize| {
        (0..x.level(k).len())
            .filter(|&e| !x.is_degenerate(k, e))
            .map(|e| x.level(k).key(e).to_string())
            .collect::<Vec<_>>()
    };
    for k in 1..=x.truncation() {
        for e in 0..x.level(k).len() {
            if x.is_degenerate(k, e) {
                continue;
            }
            for face in [0, k] {
                if x.is_degenerate(k - 1, x.face(k, face, e)) {
                    return Err(ZooError::OuterFace {
                        level: k,
                        key: x.level(k).key(e).to_string(),
                        face,
                    });
                }
            }
        }
    }
    let levels: Vec<Vec<String>> = (0..=x.truncation()).map(nondeg).collect();
    Ok(InertPresheaf::new(
        x.truncation(),
        levels,
        |n, key| {
            let e = x.level(n).position(key).expect("key from this level");
            x.level(n - 1).key(x.face(n, 0, e)).to_string()
        },
        |n, key| {
            let e = x.level(n).position(key).expect("key from this level");
            x.level(n - 1).key(x.face(n, n, e)).to_string()
        },
    )
    .expect("outer faces of nondegenerate simplices were just certified"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{check_decomposition, check_segal};
    use crate::coalgebra::comult;
    use crate::presheaf::{free, validate_presheaf, PresheafMap};
    use crate::sset::b_nat;

    #[test]
    fn word_faces_delete_first_and_last_letters() {
        let a = words(&['a', 'b', 'c'], 3);
        assert_eq!(a.d_bot_key(3, "abc"), "bc");
        assert_eq!(a.d_top_key(3, "abc"), "ab");
        assert_eq!(a.d_top_key(2, a.d_bot_key(3, "abc")), "b");
        assert_eq!(a.d_bot_key(2, a.d_top_key(3, "abc")), "b");
        let two = words(&['a', 'b'], 3);
        assert_eq!(two.level(3).len(), 8);
        assert!(validate_presheaf(&a).is_pass());
    }

    #[test]
    fn loop_quiver_paths_match_the_nerve_of_the_additive_monoid() {
        let g = Quiver::new(&["x"], &[("a", "x", "x")]).unwrap();
        let a = quiver_paths(&g, 4);
        for n in 0..=4 {
            assert_eq!(a.level(n).len(), 1, "one length-{n} path");
        }
        let x = free(&a, 3).unwrap();
        let y = b_nat(3, 4);
        for k in 0..=3 {
            assert_eq!(x.level(k).len(), y.level(k).len());
        }
    }

    #[test]
    fn two_vertex_quiver_has_no_composable_pair() {
        let g = Quiver::new(&["a", "b"], &[("e", "a", "b")]).unwrap();
        let a = quiver_paths(&g, 3);
        assert_eq!(a.level(1).len(), 1);
        assert_eq!(a.level(2).len(), 0);
        assert!(validate_presheaf(&a).is_pass());
    }

    #[test]
    fn free_path_space_is_segal() {
        let g = Quiver::new(&["x", "y"], &[("a", "x", "x"), ("b", "x", "y")]).unwrap();
        let a = quiver_paths(&g, 4);
        let x = free(&a, 3).unwrap();
        assert!(check_segal(&x).is_pass());
        assert!(check_decomposition(&x).is_pass());
    }

    #[test]
    fn qsym_levels_and_monomial_element() {
        let a = qsym(3);
        assert_eq!(a.level(1).len(), 3);
        let x = free(&a, 2).unwrap();
        assert_eq!(x.level(1).len(), 8, "all words of weight at most 3");
        let big = qsym(11);
        assert!(big.level(5).position("2,3,1,1,4").is_some());
        let sum: usize = decode_word("2,3,1,1,4").unwrap().iter().sum();
        assert_eq!(sum, 11);
    }

    #[test]
    fn monomial_comultiplication_deconcatenates_into_six_terms() {
        let x = free(&qsym(11), 2).unwrap();
        let delta = comult(&x, "5|2,3,1,1,4").unwrap();
        assert_eq!(delta.len(), 6);
        let one = num::BigRational::from_integer(1.into());
        assert_eq!(delta.coeff(&["2|2,3".to_string(), "3|1,1,4".to_string()]), one);
        assert_eq!(delta.coeff(&["0|".to_string(), "5|2,3,1,1,4".to_string()]), one);
    }

    #[test]
    fn monomial_expansion_fixtures() {
        assert_eq!(monomial_expand(&[], 2), vec![vec![0, 0]]);
        assert_eq!(monomial_expand(&[2], 2), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(monomial_expand(&[1, 1], 2), vec![vec![1, 1]]);
        assert_eq!(monomial_expand(&[1, 2], 3).len(), 3);
        assert_eq!(monomial_expand(&[1, 1, 1], 2), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn packing_and_standardization_normalize_words() {
        assert_eq!(pack(&[2, 5, 2]), vec![1, 2, 1]);
        assert_eq!(pack(&[]), Vec::<usize>::new());
        assert_eq!(standardize(&[2, 3]), vec![1, 2]);
        assert_eq!(standardize(&[3, 1]), vec![2, 1]);
        assert_eq!(standardize(&[1, 1]), vec![1, 2]);
        for len in 0..=4usize {
            for w in all_words(4, len) {
                assert_eq!(pack(&pack(&w)), pack(&w), "pack idempotent on {w:?}");
                assert_eq!(
                    standardize(&standardize(&w)),
                    standardize(&w),
                    "standardize idempotent on {w:?}"
                );
                assert_eq!(parkify(&parkify(&w)), parkify(&w));
                assert!(is_parking(&parkify(&w)), "parkify({w:?}) parks");
            }
        }
    }

    #[test]
    fn packed_word_spaces_validate() {
        let by_len = packed_words(4);
        assert_eq!(
            (0..=4).map(|n| by_len.level(n).len()).collect::<Vec<_>>(),
            vec![1, 1, 3, 13, 75],
            "Fubini numbers"
        );
        assert_eq!(by_len.d_bot_key(3, "1,2,1"), "2,1");
        assert!(validate_presheaf(&by_len).is_pass());
        let by_sym = packed_words_by_symbols(3, 4);
        assert_eq!(by_sym.d_top_key(2, "1,2,1"), "1,1");
        assert!(validate_presheaf(&by_sym).is_pass());
    }

    #[test]
    fn permutation_faces_standardize() {
        let a = permutations_fqsym(4);
        assert_eq!(a.level(3).len(), 6);
        assert_eq!(a.d_top_key(3, "2,3,1"), "1,2");
        assert_eq!(a.d_bot_key(3, "2,3,1"), "2,1");
        assert!(validate_presheaf(&a).is_pass());
    }

    #[test]
    fn parkification_fixtures() {
        assert_eq!(parkify(&[1, 1]), vec![1, 1]);
        assert_eq!(parkify(&[3]), vec![1]);
        assert_eq!(parkify(&[1, 3, 3]), vec![1, 2, 2]);
    }

    #[test]
    fn parking_function_spaces_validate() {
        let f = parking_f_basis(4);
        assert_eq!(
            (0..=4).map(|n| f.level(n).len()).collect::<Vec<_>>(),
            vec![1, 1, 3, 16, 125],
            "(n+1)^(n-1)"
        );
        assert!(validate_presheaf(&f).is_pass());
        let g = parking_g_basis(4);
        assert_eq!(g.level(0).len(), 1, "only the empty function has one breakpoint");
        assert!(validate_presheaf(&g).is_pass());
    }

    #[test]
    fn breakpoint_fixture_and_g_basis_faces() {
        let w = decode_word("1,6,2,4,3,6,1,6,6").unwrap();
        assert!(is_parking(&w));
        assert_eq!(breakpoints(&w), vec![0, 5, 9]);
        assert_eq!(breakpoints(&w).len() - 1, 2, "level 2 in the breakpoint grading");
        assert_eq!(g_basis_d_bot(&w), vec![1, 1, 1, 1]);
        assert_eq!(g_basis_d_top(&w), vec![1, 2, 4, 3, 1]);
    }

    #[test]
    fn noncrossing_fixtures() {
        assert!(NCPartition::decode("1|24|3").is_ok());
        assert!(matches!(
            NCPartition::new(vec![vec![1, 3], vec![2, 4]]),
            Err(ZooError::Crossing { .. })
        ));
        let p = NCPartition::decode("1|24|3").unwrap();
        assert_eq!(p.delete_top().encode(), "1|2|3");
        assert_eq!(p.delete_bottom().encode(), "13|2");
        let a = noncrossing_partitions(5);
        assert_eq!(
            (0..=5).map(|n| a.level(n).len()).collect::<Vec<_>>(),
            vec![1, 1, 2, 5, 14, 42],
            "Catalan numbers"
        );
        assert!(validate_presheaf(&a).is_pass());
    }

    #[test]
    fn noncrossing_closed_under_faces_up_to_seven() {
        let a = noncrossing_partitions(7);
        for n in 1..=7 {
            for key in a.level(n).keys() {
                let p = NCPartition::decode(key).unwrap();
                assert!(NCPartition::new(p.delete_top().blocks.clone()).is_ok());
                assert!(NCPartition::new(p.delete_bottom().blocks.clone()).is_ok());
            }
        }
        assert!(validate_presheaf(&a).is_pass());
    }

    #[test]
    fn dyck_clipping_reproduces_the_worked_path() {
        let p = "UDUUUUDUDDDUDD";
        assert!(is_dyck(p));
        assert_eq!(dyck_height(p), 4);
        assert_eq!(dyck_clip_bottom(p), "UUUDUDDDUD");
        assert_eq!(dyck_clip_top(p, 3), "UDUUUDDUDD");
        assert_eq!(dyck_height(&dyck_clip_bottom(p)), 3);
        assert_eq!(dyck_height(&dyck_clip_top(p, 3)), 3);
    }

    #[test]
    fn dyck_clipping_commutes_and_lowers_height() {
        for p in dyck_paths(10) {
            assert!(is_dyck(&p));
            let h = dyck_height(&p);
            if h >= 1 {
                assert_eq!(dyck_height(&dyck_clip_top(&p, h - 1)), h - 1);
                assert_eq!(dyck_height(&dyck_clip_bottom(&p)), h - 1);
            }
            if h >= 2 {
                assert_eq!(
                    dyck_clip_top(&dyck_clip_bottom(&p), h - 2),
                    dyck_clip_bottom(&dyck_clip_top(&p, h - 1)),
                    "clip order on {p}"
                );
            }
        }
    }

    #[test]
    fn dyck_spaces_validate() {
        let by_height = dyck_by_height(3, 10);
        assert_eq!(by_height.level(0).len(), 1);
        assert!(validate_presheaf(&by_height).is_pass());
        assert_eq!(
            irreducible_dyck_paths(6),
            vec!["UD", "UUDD", "UUDUDD", "UUUDDD"]
        );
        let baseline = dyck_by_baseline(6, 3);
        assert_eq!(baseline.level(1).len(), 4);
        assert_eq!(baseline.level(2).len(), 16);
        assert_eq!(baseline.d_bot_key(2, "UDUUDD"), "UUDD");
        assert!(validate_presheaf(&baseline).is_pass());
        for p in dyck_paths(8) {
            assert_eq!(dyck_factorize(&p).concat(), p, "factorization splits {p}");
            assert!(dyck_factorize(&p).iter().all(|f| {
                irreducible_dyck_paths(8).contains(f)
            }));
        }
    }

    #[test]
    fn layered_orders_match_the_monomial_basis() {
        let layered = layered_linear(5);
        let base = qsym(5);
        assert_eq!(layered.level(0).len(), 1, "the empty map");
        let iso = PresheafMap::new(&layered, &base, |_, key| key.to_string()).unwrap();
        assert!(iso.is_levelwise_bijective());
    }

    #[test]
    fn nondegenerate_simplices_of_the_nerve_are_positive_compositions() {
        let a = nondeg_j(&b_nat(5, 5)).unwrap();
        let base = qsym(5);
        let iso = PresheafMap::new(&a, &base, |_, key| key.to_string()).unwrap();
        assert!(iso.is_levelwise_bijective());
        let chain = nondeg_j(&nerve_of_chain(3, 3)).unwrap();
        assert_eq!(chain.level(1).len(), 6, "order pairs in a 4-element chain");
        assert!(validate_presheaf(&chain).is_pass());
    }

    #[test]
    fn outer_face_violations_are_reported() {
        use crate::sset::TruncatedSimplicialSet;
        // One vertex, one nondegenerate loop f, and an extra nondegenerate
        // 2-simplex whose outer face is the degenerate edge.
        let levels = vec![
            vec![("v".to_string(), 0)],
            vec![("e0".to_string(), 0), ("f".to_string(), 0)],
            vec![
                ("s0e0".to_string(), 0),
                ("s0f".to_string(), 0),
                ("s1f".to_string(), 0),
                ("bad".to_string(), 0),
            ],
        ];
        let x = TruncatedSimplicialSet::from_parts(
            2,
            0,
            levels,
            |k, i, key| match (k, key, i) {
                (1, _, _) => "v".to_string(),
                (2, "s0e0", _) => "e0".to_string(),
                (2, "s0f", 2) => "e0".to_string(),
                (2, "s0f", _) => "f".to_string(),
                (2, "s1f" | "bad", 0) => "e0".to_string(),
                (2, "s1f" | "bad", _) => "f".to_string(),
                _ => unreachable!(),
            },
            |k, i, key| match (k, key, i) {
                (0, _, _) => "e0".to_string(),
                (1, "e0", _) => "s0e0".to_string(),
                (1, "f", 0) => "s0f".to_string(),
                (1, "f", _) => "s1f".to_string(),
                _ => unreachable!(),
            },
        )
        .unwrap();
        assert!(crate::checks::check_simplicial_identities(&x).is_pass());
        match nondeg_j(&x) {
            Err(ZooError::OuterFace { level: 2, key, face: 0 }) => assert_eq!(key, "bad"),
            other => panic!("expected an outer-face violation, got {other:?}"),
        }
    }

    type Splitter = fn(&str, usize) -> (String, String);

    #[test]
    fn deconcatenation_oracle_matches_free_comultiplication() {
        use num::BigRational;
        let cases: Vec<(InertPresheaf, Splitter)> = vec![
            (words(&['a', 'b'], 3), |w, i| (w[..i].to_string(), w[i..].to_string())),
            (qsym(3), |w, i| {
                let letters = decode_word(w).unwrap();
                (encode_word(&letters[..i]), encode_word(&letters[i..]))
            }),
            (dyck_by_baseline(4, 3), |w, i| {
                let f = dyck_factorize(w);
                (f[..i].concat(), f[i..].concat())
            }),
        ];
        for (a, split) in cases {
            let x = free(&a, 2).unwrap();
            for n in 0..=a.budget() {
                for key in a.level(n).keys() {
                    let enc = format!("{n}|{key}");
                    let delta = comult(&x, &enc).unwrap();
                    let mut expected = crate::coalgebra::TensorComb::zero();
                    for i in 0..=n {
                        let (l, r) = split(key, i);
                        expected.add(
                            vec![format!("{i}|{l}"), format!("{}|{}", n - i, r)],
                            BigRational::from_integer(1.into()),
                        );
                    }
                    assert_eq!(delta, expected, "splittings of {key:?} at grade {n}");
                }
            }
        }
    }
}
