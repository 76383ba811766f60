//! Checkers for simplicial identities, pullback squares, and the
//! decomposition-space, Segal, and CULF conditions.
//!
//! Every checker returns a [`CheckReport`]: a verdict plus concrete witnesses
//! on failure, in a deterministic order. Witnesses name the offending
//! identity or square together with the elements exhibiting the violation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::simplex::{generating_squares, inert_rho, ActiveMap, OrdinalMap};
use crate::sset::{Level, SimplicialMap, SsetError, TruncatedSimplicialSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport { verdict: Verdict::Pass, witnesses: Vec::new() }
    }

    pub fn from_witnesses(witnesses: Vec<String>) -> Self {
        let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
        CheckReport { verdict, witnesses }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// All simplicial identities that fit inside the truncation, checked
/// elementwise through the tables.
pub fn check_simplicial_identities(x: &TruncatedSimplicialSet) -> CheckReport {
    let mut witnesses = Vec::new();
    let n = x.truncation();
    // d_i d_j = d_{j-1} d_i for i < j, on X_k with k >= 2.
    for k in 2..=n {
        for j in 1..=k {
            for i in 0..j {
                for e in 0..x.level(k).len() {
                    let lhs = x.face(k - 1, i, x.face(k, j, e));
                    let rhs = x.face(k - 1, j - 1, x.face(k, i, e));
                    if lhs != rhs {
                        witnesses.push(format!(
                            "d_{i} d_{j} != d_{} d_{i} at level {k} on {:?}",
                            j - 1,
                            x.level(k).key(e)
                        ));
                    }
                }
            }
        }
    }
    // s_i s_j = s_{j+1} s_i for i <= j, landing in X_{k+2}.
    for k in 0..n.saturating_sub(1) {
        for j in 0..=k {
            for i in 0..=j {
                for e in 0..x.level(k).len() {
                    let lhs = x.degeneracy(k + 1, i, x.degeneracy(k, j, e));
                    let rhs = x.degeneracy(k + 1, j + 1, x.degeneracy(k, i, e));
                    if lhs != rhs {
                        witnesses.push(format!(
                            "s_{i} s_{j} != s_{} s_{i} at level {k} on {:?}",
                            j + 1,
                            x.level(k).key(e)
                        ));
                    }
                }
            }
        }
    }
    // Mixed identities on X_k (apply s_j then d_i), for k + 1 <= truncation.
    for k in 0..n {
        for j in 0..=k {
            for i in 0..=k + 1 {
                for e in 0..x.level(k).len() {
                    let via = x.face(k + 1, i, x.degeneracy(k, j, e));
                    let expected = if i == j || i == j + 1 {
                        e
                    } else if i < j {
                        x.degeneracy(k - 1, j - 1, x.face(k, i, e))
                    } else {
                        x.degeneracy(k - 1, j, x.face(k, i - 1, e))
                    };
                    if via != expected {
                        witnesses.push(format!(
                            "d_{i} s_{j} law fails at level {k} on {:?}",
                            x.level(k).key(e)
                        ));
                    }
                }
            }
        }
    }
    CheckReport::from_witnesses(witnesses)
}

/// A commutative square of finite sets
///
/// ```text
///   P --p_to_b--> B
///   |             |
/// p_to_c        b_to_d
///   v             v
///   C --c_to_d--> D
/// ```
///
/// together with the element names used in witnesses.
pub struct SetSquare<'a> {
    pub p: &'a Level,
    pub b: &'a Level,
    pub c: &'a Level,
    pub d: &'a Level,
    pub p_to_b: &'a [usize],
    pub p_to_c: &'a [usize],
    pub b_to_d: &'a [usize],
    pub c_to_d: &'a [usize],
    /// Prefixed to every witness, e.g. which square this is.
    pub context: String,
}

/// Is the canonical map `P -> B x_D C` a bijection? Errors when the square
/// does not commute (the comparison would be meaningless). The verdict is
/// invariant under transposing the square.
pub fn is_pullback(square: &SetSquare) -> Result<CheckReport, SsetError> {
    for e in 0..square.p.len() {
        if square.b_to_d[square.p_to_b[e]] != square.c_to_d[square.p_to_c[e]] {
            return Err(SsetError::NotSimplicial(format!(
                "{}: square does not commute at {:?}",
                square.context,
                square.p.key(e)
            )));
        }
    }
    let mut witnesses = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in 0..square.p.len() {
        let pair = (square.p_to_b[e], square.p_to_c[e]);
        if let Some(&first) = seen.get(&pair) {
            witnesses.push(format!(
                "{}: {:?} and {:?} both map to ({:?}, {:?})",
                square.context,
                square.p.key(first),
                square.p.key(e),
                square.b.key(pair.0),
                square.c.key(pair.1),
            ));
        } else {
            seen.insert(pair, e);
        }
    }
    // Scan fibers over D rather than all of B x C; candidate pairs agree on
    // their image, so only same-fiber pairs can lack a preimage.
    let mut c_by_d: Vec<Vec<usize>> = vec![Vec::new(); square.d.len()];
    for c in 0..square.c.len() {
        c_by_d[square.c_to_d[c]].push(c);
    }
    for b in 0..square.b.len() {
        for &c in &c_by_d[square.b_to_d[b]] {
            if !seen.contains_key(&(b, c)) {
                witnesses.push(format!(
                    "{}: pair ({:?}, {:?}) over {:?} has no preimage",
                    square.context,
                    square.b.key(b),
                    square.c.key(c),
                    square.d.key(square.b_to_d[b]),
                ));
            }
        }
    }
    Ok(CheckReport::from_witnesses(witnesses))
}

/// The decomposition-space condition: the simplicial identities hold and
/// every generating active-inert pushout square that fits inside the
/// truncation is carried to a pullback of level sets.
pub fn check_decomposition(x: &TruncatedSimplicialSet) -> CheckReport {
    let identities = check_simplicial_identities(x);
    if !identities.is_pass() {
        return identities;
    }
    let mut witnesses = Vec::new();
    let squares = generating_squares(x.truncation()).expect("generating squares are well-formed");
    for square in &squares {
        if square.max_object() > x.truncation() {
            continue;
        }
        let g = square.active_leg.as_map();
        let f = square.inert_leg.as_map();
        let g2 = square.pushout_active.as_map();
        let f2 = square.pushout_inert.as_map();
        let context = format!(
            "square(active {g}, inert {f})"
        );
        let p_to_b = match x.apply_map(f2) {
            Ok(t) => t,
            Err(e) => {
                witnesses.push(format!("{context}: {e}"));
                continue;
            }
        };
        let p_to_c = x.apply_map(g2).expect("within truncation");
        let b_to_d = x.apply_map(g).expect("within truncation");
        let c_to_d = x.apply_map(f).expect("within truncation");
        let set_square = SetSquare {
            p: x.level(f2.target()),
            b: x.level(g.target()),
            c: x.level(f.target()),
            d: x.level(g.source()),
            p_to_b: &p_to_b,
            p_to_c: &p_to_c,
            b_to_d: &b_to_d,
            c_to_d: &c_to_d,
            context,
        };
        match is_pullback(&set_square) {
            Ok(report) => witnesses.extend(report.witnesses),
            Err(e) => witnesses.push(e.to_string()),
        }
    }
    CheckReport::from_witnesses(witnesses)
}

/// The Segal condition: for `2 <= k <= N` the edge-restriction map from
/// `X_k` to tuples of composable 1-simplices is a bijection onto the tuples
/// the weight budget licenses (total weight within bound; with no budget,
/// all tuples).
pub fn check_segal(x: &TruncatedSimplicialSet) -> CheckReport {
    let mut witnesses = Vec::new();
    if x.truncation() < 2 {
        return CheckReport::pass();
    }
    let src: Vec<usize> = x.face_table(1, 1).to_vec();
    let tgt: Vec<usize> = x.face_table(1, 0).to_vec();
    let mut edges_by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, &s) in src.iter().enumerate() {
        edges_by_src.entry(s).or_default().push(e);
    }
    for k in 2..=x.truncation() {
        let rho: Vec<Vec<usize>> = (1..=k)
            .map(|i| x.apply_map(inert_rho(i, k).unwrap().as_map()).expect("within truncation"))
            .collect();
        let mut image: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for e in 0..x.level(k).len() {
            let tuple: Vec<usize> = rho.iter().map(|t| t[e]).collect();
            if let Some(&first) = image.get(&tuple) {
                witnesses.push(format!(
                    "k={k}: {:?} and {:?} restrict to the same edge tuple",
                    x.level(k).key(first),
                    x.level(k).key(e)
                ));
            } else {
                image.insert(tuple, e);
            }
        }
        // Enumerate licensed composable tuples, pruning by remaining weight.
        let bound = x.weight_bound();
        let mut tuple = Vec::with_capacity(k);
        enumerate_chains(
            x,
            &edges_by_src,
            &tgt,
            k,
            bound,
            None,
            0,
            &mut tuple,
            &mut |tuple| {
                if !image.contains_key(tuple) {
                    let names: Vec<&str> =
                        tuple.iter().map(|&e| x.level(1).key(e)).collect();
                    witnesses.push(format!(
                        "k={k}: composable tuple ({}) has no filler",
                        names.join(" ; ")
                    ));
                }
            },
        );
        // Fillers must also stay inside the licensed set.
        for (tuple, e) in &image {
            let total: usize = tuple.iter().map(|&t| x.level(1).weight(t)).sum();
            if total > bound {
                witnesses.push(format!(
                    "k={k}: {:?} restricts outside the weight budget",
                    x.level(k).key(*e)
                ));
                continue;
            }
            for w in tuple.windows(2) {
                if tgt[w[0]] != src[w[1]] {
                    witnesses.push(format!(
                        "k={k}: {:?} restricts to a non-composable tuple",
                        x.level(k).key(*e)
                    ));
                    break;
                }
            }
        }
    }
    CheckReport::from_witnesses(witnesses)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_chains(
    x: &TruncatedSimplicialSet,
    edges_by_src: &BTreeMap<usize, Vec<usize>>,
    tgt: &[usize],
    k: usize,
    bound: usize,
    endpoint: Option<usize>,
    used: usize,
    tuple: &mut Vec<usize>,
    visit: &mut impl FnMut(&Vec<usize>),
) {
    if tuple.len() == k {
        visit(tuple);
        return;
    }
    let candidates: Box<dyn Iterator<Item = usize> + '_> = match endpoint {
        Some(v) => match edges_by_src.get(&v) {
            Some(list) => Box::new(list.iter().copied()),
            None => Box::new(std::iter::empty()),
        },
        None => Box::new(0..x.level(1).len()),
    };
    for e in candidates {
        let w = x.level(1).weight(e);
        if used + w > bound {
            continue;
        }
        tuple.push(e);
        enumerate_chains(x, edges_by_src, tgt, k, bound, Some(tgt[e]), used + w, tuple, visit);
        tuple.pop();
    }
}

/// The CULF condition for a simplicial map, in the long-edge form: for each
/// `1 <= k <= N` the square comparing `X_k` with the pullback of
/// `X_1 -> Y_1 <- Y_k` along the unique active `[1] -> [k]` must be a
/// pullback.
pub fn check_culf(f: &SimplicialMap) -> CheckReport {
    let x = f.source();
    let y = f.target();
    let mut witnesses = Vec::new();
    for k in 1..=x.truncation() {
        let long = ActiveMap::long(k);
        let long_x = x.apply_map(long.as_map()).expect("within truncation");
        let long_y = y.apply_map(long.as_map()).expect("within truncation");
        let square = SetSquare {
            p: x.level(k),
            b: x.level(1),
            c: y.level(k),
            d: y.level(1),
            p_to_b: &long_x,
            p_to_c: f.component(k),
            b_to_d: f.component(1),
            c_to_d: &long_y,
            context: format!("culf square k={k}"),
        };
        match is_pullback(&square) {
            Ok(report) => witnesses.extend(report.witnesses),
            Err(e) => witnesses.push(e.to_string()),
        }
    }
    CheckReport::from_witnesses(witnesses)
}

/// Cross-validation variant of [`check_culf`]: every naturality square on an
/// active map `[a] -> [b]` within the truncation, not just the long edges.
pub fn check_culf_all_active(f: &SimplicialMap) -> CheckReport {
    let x = f.source();
    let y = f.target();
    let mut witnesses = Vec::new();
    for a in 0..=x.truncation() {
        for b in 0..=x.truncation() {
            for alpha in OrdinalMap::enumerate(a, b) {
                if !alpha.is_active() || alpha.is_identity() {
                    continue;
                }
                let t_x = x.apply_map(&alpha).expect("within truncation");
                let t_y = y.apply_map(&alpha).expect("within truncation");
                let square = SetSquare {
                    p: x.level(b),
                    b: x.level(a),
                    c: y.level(b),
                    d: y.level(a),
                    p_to_b: &t_x,
                    p_to_c: f.component(b),
                    b_to_d: f.component(a),
                    c_to_d: &t_y,
                    context: format!("culf square on {alpha}"),
                };
                match is_pullback(&square) {
                    Ok(report) => witnesses.extend(report.witnesses),
                    Err(e) => witnesses.push(e.to_string()),
                }
            }
        }
    }
    CheckReport::from_witnesses(witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{b_nat, point, OpKind, TableEntry};

    #[test]
    fn nerve_passes_everything() {
        let x = b_nat(4, 4);
        assert!(check_simplicial_identities(&x).is_pass());
        assert!(check_decomposition(&x).is_pass());
        assert!(check_segal(&x).is_pass());
    }

    #[test]
    fn point_passes_everything() {
        let x = point(3);
        assert!(check_simplicial_identities(&x).is_pass());
        assert!(check_decomposition(&x).is_pass());
        assert!(check_segal(&x).is_pass());
    }

    #[test]
    fn edgewise_nerve_is_segal() {
        let x = b_nat(5, 4);
        let sd = crate::sset::edgewise(&x).unwrap();
        assert!(check_simplicial_identities(&sd).is_pass());
        assert!(check_segal(&sd).is_pass());
    }

    #[test]
    fn perturbed_nerve_fails_with_witness() {
        let x = b_nat(3, 2);
        let entry = TableEntry { op: OpKind::Face, level: 2, index: 1, elem: 0 };
        let old = x.entry_value(entry);
        let mutated = x.with_perturbed_entry(entry, (old + 1) % x.level(1).len());
        let identities = check_simplicial_identities(&mutated);
        let decomposition = check_decomposition(&mutated);
        assert!(!identities.is_pass() || !decomposition.is_pass());
        assert!(!decomposition.witnesses.is_empty());
    }

    #[test]
    fn pullback_worked_examples() {
        let p = Level::from_names(vec!["p0".into(), "p1".into()]).unwrap();
        let b = Level::from_names(vec!["b0".into(), "b1".into()]).unwrap();
        let c = Level::from_names(vec!["c0".into(), "c1".into()]).unwrap();
        let d = Level::from_names(vec!["d0".into(), "d1".into()]).unwrap();
        // Genuine pullback: P = B x_D C with D split evenly.
        let square = SetSquare {
            p: &p,
            b: &b,
            c: &c,
            d: &d,
            p_to_b: &[0, 1],
            p_to_c: &[0, 1],
            b_to_d: &[0, 1],
            c_to_d: &[0, 1],
            context: "test".into(),
        };
        assert!(is_pullback(&square).unwrap().is_pass());
        // Missing pair: same data but P only hits one of them.
        let p_small = Level::from_names(vec!["p0".into()]).unwrap();
        let square = SetSquare {
            p: &p_small,
            b: &b,
            c: &c,
            d: &d,
            p_to_b: &[0],
            p_to_c: &[0],
            b_to_d: &[0, 1],
            c_to_d: &[0, 1],
            context: "test".into(),
        };
        let report = is_pullback(&square).unwrap();
        assert!(!report.is_pass());
        assert!(report.witnesses[0].contains("no preimage"));
        // Non-commuting square errors out.
        let square = SetSquare {
            p: &p,
            b: &b,
            c: &c,
            d: &d,
            p_to_b: &[0, 1],
            p_to_c: &[0, 1],
            b_to_d: &[0, 1],
            c_to_d: &[1, 0],
            context: "test".into(),
        };
        assert!(is_pullback(&square).is_err());
    }

    #[test]
    fn pullback_verdict_is_transpose_invariant() {
        // Exhaust tiny squares; whenever both orientations commute the
        // verdicts agree.
        let names = |n: usize, tag: &str| {
            Level::from_names((0..n).map(|i| format!("{tag}{i}")).collect()).unwrap()
        };
        let p = names(2, "p");
        let b = names(2, "b");
        let c = names(2, "c");
        let d = names(2, "d");
        let maps = |len: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            for bits in 0..(1 << len) {
                out.push((0..len).map(|i| (bits >> i) & 1).collect());
            }
            out
        };
        for p_to_b in maps(2) {
            for p_to_c in maps(2) {
                for b_to_d in maps(2) {
                    for c_to_d in maps(2) {
                        let square = SetSquare {
                            p: &p, b: &b, c: &c, d: &d,
                            p_to_b: &p_to_b, p_to_c: &p_to_c,
                            b_to_d: &b_to_d, c_to_d: &c_to_d,
                            context: "fwd".into(),
                        };
                        let transposed = SetSquare {
                            p: &p, b: &c, c: &b, d: &d,
                            p_to_b: &p_to_c, p_to_c: &p_to_b,
                            b_to_d: &c_to_d, c_to_d: &b_to_d,
                            context: "transposed".into(),
                        };
                        match (is_pullback(&square), is_pullback(&transposed)) {
                            (Ok(r1), Ok(r2)) => assert_eq!(r1.is_pass(), r2.is_pass()),
                            (Err(_), Err(_)) => {}
                            _ => panic!("commutation is not transpose invariant"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn terminal_projection_is_not_culf() {
        let x = b_nat(3, 2);
        let pt = point(3);
        let f = SimplicialMap::new(&x, &pt, |k, _| {
            crate::simplex::Composition::new(vec![0; k]).encode()
        })
        .unwrap();
        let report = check_culf(&f);
        assert!(!report.is_pass());
        assert!(report.witnesses.iter().any(|w| w.contains("k=2")));
        let full = check_culf_all_active(&f);
        assert_eq!(report.is_pass(), full.is_pass());
    }

    #[test]
    fn identity_map_is_culf() {
        let x = b_nat(3, 3);
        let id = SimplicialMap::identity(&x);
        assert!(check_culf(&id).is_pass());
        assert!(check_culf_all_active(&id).is_pass());
    }

    #[test]
    fn segal_catches_a_missing_filler() {
        // Remove nothing but shrink the budget semantics: a nerve whose level
        // 2 misses one composable pair is not Segal. Simulate by perturbing a
        // face entry so some tuple loses its unique filler.
        let x = b_nat(2, 2);
        let entry = TableEntry { op: OpKind::Face, level: 2, index: 0, elem: 0 };
        let old = x.entry_value(entry);
        let mutated = x.with_perturbed_entry(entry, (old + 1) % x.level(1).len());
        assert!(!check_segal(&mutated).is_pass());
    }
}
