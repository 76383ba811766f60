//! The incidence coalgebra of a truncated simplicial set over exact
//! rationals: comultiplication by 2-simplex splitting, the counit supported
//! on degenerate edges, convolution of scalar functions, the length
//! filtration, and the Möbius function computed two independent ways.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::checks::CheckReport;
use crate::simplex::ActiveMap;
use crate::sset::{SsetError, TruncatedSimplicialSet};

#[derive(Debug, Error)]
pub enum CoalgebraError {
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error("no 1-simplex {0:?}")]
    UnknownEdge(String),
    #[error("length of {key:?} is at least {at_least}, beyond the requested bound {bound}")]
    LengthNotCertified {
        key: String,
        at_least: usize,
        bound: usize,
    },
    #[error("length filtration violated: splitting {long:?} produced {left:?} of no smaller length")]
    FiltrationViolation { long: String, left: String },
}

/// A finite linear combination of tensors of 1-simplices with exact
/// rational coefficients. The tensor arity is uniform in practice (1 for
/// elements, 2 for comultiplications, 3 for coassociativity checks); zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorComb {
    terms: BTreeMap<Vec<String>, BigRational>,
}

impl TensorComb {
    pub fn zero() -> TensorComb {
        TensorComb::default()
    }

    pub fn singleton(key: Vec<String>) -> TensorComb {
        let mut t = TensorComb::zero();
        t.add(key, BigRational::one());
        t
    }

    pub fn add(&mut self, key: Vec<String>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .expect("just zeroed");
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[String], &BigRational)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[String]) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }
}

impl Serialize for TensorComb {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair<'a> {
            left: &'a str,
            right: &'a str,
            coeff: String,
        }
        #[derive(Serialize)]
        struct General<'a> {
            factors: &'a [String],
            coeff: String,
        }
        let mut s = serializer.serialize_struct("TensorComb", 1)?;
        if self.terms.keys().all(|k| k.len() == 2) {
            let pairs: Vec<Pair> = self
                .terms
                .iter()
                .map(|(k, c)| Pair { left: &k[0], right: &k[1], coeff: c.to_string() })
                .collect();
            s.serialize_field("terms", &pairs)?;
        } else {
            let general: Vec<General> = self
                .terms
                .iter()
                .map(|(k, c)| General { factors: k, coeff: c.to_string() })
                .collect();
            s.serialize_field("terms", &general)?;
        }
        s.end()
    }
}

/// A total assignment of exact rationals to the 1-simplices of a fixed
/// truncated simplicial set, indexed by level-1 positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionFunction {
    values: Vec<BigRational>,
}

impl ConvolutionFunction {
    pub fn from_fn(
        x: &TruncatedSimplicialSet,
        f: impl Fn(usize, &str) -> BigRational,
    ) -> ConvolutionFunction {
        ConvolutionFunction {
            values: (0..x.level(1).len()).map(|e| f(e, x.level(1).key(e))).collect(),
        }
    }

    pub fn value(&self, e: usize) -> &BigRational {
        &self.values[e]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Serialization view keyed by element encoding.
    pub fn keyed<'a>(&'a self, x: &'a TruncatedSimplicialSet) -> KeyedFunction<'a> {
        KeyedFunction { f: self, x }
    }
}

pub struct KeyedFunction<'a> {
    f: &'a ConvolutionFunction,
    x: &'a TruncatedSimplicialSet,
}

impl Serialize for KeyedFunction<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Values<'a>(&'a KeyedFunction<'a>);
        impl Serialize for Values<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut m = serializer.serialize_map(Some(self.0.f.values.len()))?;
                for (e, v) in self.0.f.values.iter().enumerate() {
                    m.serialize_entry(self.0.x.level(1).key(e), &v.to_string())?;
                }
                m.end()
            }
        }
        let mut s = serializer.serialize_struct("ConvolutionFunction", 1)?;
        s.serialize_field("values", &Values(self))?;
        s.end()
    }
}

fn edge_index(x: &TruncatedSimplicialSet, key: &str) -> Result<usize, CoalgebraError> {
    x.level(1)
        .position(key)
        .ok_or_else(|| CoalgebraError::UnknownEdge(key.to_string()))
}

/// The comultiplication of one 1-simplex: the sum of `d_2 ⊗ d_0` over the
/// 2-simplices whose long edge (`d_1`) is the given element. Repeated
/// tensors accumulate coefficients.
pub fn comult(x: &TruncatedSimplicialSet, key: &str) -> Result<TensorComb, CoalgebraError> {
    if x.truncation() < 2 {
        return Err(SsetError::TruncationTooSmall { needed: 2, have: x.truncation() }.into());
    }
    let f = edge_index(x, key)?;
    let mut out = TensorComb::zero();
    for s in 0..x.level(2).len() {
        if x.face(2, 1, s) == f {
            out.add(
                vec![
                    x.level(1).key(x.face(2, 2, s)).to_string(),
                    x.level(1).key(x.face(2, 0, s)).to_string(),
                ],
                BigRational::one(),
            );
        }
    }
    Ok(out)
}

/// Iterated comultiplication: `n_factors - 1` applications of the binary
/// one, expanding the leftmost factor each time. `n_factors = 1` returns the
/// element itself as a 1-tensor.
pub fn comult_iterate(
    x: &TruncatedSimplicialSet,
    key: &str,
    n_factors: usize,
) -> Result<TensorComb, CoalgebraError> {
    assert!(n_factors >= 1, "a tensor has at least one factor");
    edge_index(x, key)?;
    let mut current = TensorComb::singleton(vec![key.to_string()]);
    for _ in 1..n_factors {
        let mut next = TensorComb::zero();
        for (factors, coeff) in current.terms() {
            let expanded = comult(x, &factors[0])?;
            for (pair, c) in expanded.terms() {
                let mut key = pair.to_vec();
                key.extend_from_slice(&factors[1..]);
                next.add(key, coeff * c);
            }
        }
        current = next;
    }
    Ok(current)
}

/// The counit: 1 on degenerate 1-simplices (the `s_0`-image of the
/// vertices), 0 elsewhere.
pub fn counit(x: &TruncatedSimplicialSet, key: &str) -> Result<BigRational, CoalgebraError> {
    let f = edge_index(x, key)?;
    let degenerate = (0..x.level(0).len()).any(|v| x.degeneracy(0, 0, v) == f);
    Ok(if degenerate { BigRational::one() } else { BigRational::zero() })
}

/// Coassociativity `(Δ ⊗ id)Δ = (id ⊗ Δ)Δ` and both counit laws
/// `(ε ⊗ id)Δ = id = (id ⊗ ε)Δ`, verified on each sampled 1-simplex.
pub fn check_coassoc(
    x: &TruncatedSimplicialSet,
    sample: &[String],
) -> Result<CheckReport, CoalgebraError> {
    if x.truncation() < 3 {
        return Err(SsetError::TruncationTooSmall { needed: 3, have: x.truncation() }.into());
    }
    let mut witnesses = Vec::new();
    for key in sample {
        let delta = comult(x, key)?;
        let mut lhs = TensorComb::zero();
        let mut rhs = TensorComb::zero();
        for (pair, c) in delta.terms() {
            for (inner, d) in comult(x, &pair[0])?.terms() {
                lhs.add(vec![inner[0].clone(), inner[1].clone(), pair[1].clone()], c * d);
            }
            for (inner, d) in comult(x, &pair[1])?.terms() {
                rhs.add(vec![pair[0].clone(), inner[0].clone(), inner[1].clone()], c * d);
            }
        }
        if lhs != rhs {
            witnesses.push(format!("coassociativity fails at {key:?}"));
        }
        let mut left_counit = TensorComb::zero();
        let mut right_counit = TensorComb::zero();
        for (pair, c) in delta.terms() {
            left_counit.add(vec![pair[1].clone()], c * counit(x, &pair[0])?);
            right_counit.add(vec![pair[0].clone()], c * counit(x, &pair[1])?);
        }
        let expected = TensorComb::singleton(vec![key.clone()]);
        if left_counit != expected {
            witnesses.push(format!("left counit law fails at {key:?}"));
        }
        if right_counit != expected {
            witnesses.push(format!("right counit law fails at {key:?}"));
        }
    }
    Ok(CheckReport::from_witnesses(witnesses))
}

/// Convolution: `(φ ∗ ψ)(f) = Σ φ(d_2 σ) ψ(d_0 σ)` over the 2-simplices
/// with long edge `f`.
pub fn convolve(
    x: &TruncatedSimplicialSet,
    phi: &ConvolutionFunction,
    psi: &ConvolutionFunction,
) -> Result<ConvolutionFunction, CoalgebraError> {
    if x.truncation() < 2 {
        return Err(SsetError::TruncationTooSmall { needed: 2, have: x.truncation() }.into());
    }
    let mut values = vec![BigRational::zero(); x.level(1).len()];
    for s in 0..x.level(2).len() {
        let f = x.face(2, 1, s);
        values[f] += phi.value(x.face(2, 2, s)) * psi.value(x.face(2, 0, s));
    }
    Ok(ConvolutionFunction { values })
}

/// The constant-1 function.
pub fn zeta(x: &TruncatedSimplicialSet) -> ConvolutionFunction {
    ConvolutionFunction::from_fn(x, |_, _| BigRational::one())
}

/// The counit as a convolution function (the unit of convolution).
pub fn epsilon(x: &TruncatedSimplicialSet) -> ConvolutionFunction {
    let mut values = vec![BigRational::zero(); x.level(1).len()];
    for v in 0..x.level(0).len() {
        values[x.degeneracy(0, 0, v)] = BigRational::one();
    }
    ConvolutionFunction { values }
}

/// The outcome of measuring the length filtration within a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    /// The maximum is attained strictly below the truncation.
    Certified(usize),
    /// A nondegenerate simplex at the truncation itself has this long edge,
    /// so the true length may be anything at least this.
    AtLeast(usize),
}

/// The length of a 1-simplex: the largest `k` such that some nondegenerate
/// `k`-simplex has it as long edge. Saturation at the truncation is
/// reported, never silently clamped.
pub fn length(x: &TruncatedSimplicialSet, key: &str) -> Result<Length, CoalgebraError> {
    let f = edge_index(x, key)?;
    for k in (0..=x.truncation()).rev() {
        let long = x.apply_map(ActiveMap::long(k).as_map())?;
        for (e, &le) in long.iter().enumerate() {
            if le == f && !x.is_degenerate(k, e) {
                return Ok(if k == x.truncation() {
                    Length::AtLeast(k)
                } else {
                    Length::Certified(k)
                });
            }
        }
    }
    // Unreachable for honest inputs: every edge is the long edge of itself
    // or, when degenerate, of its vertex.
    Ok(Length::Certified(0))
}

fn certified_lengths(
    x: &TruncatedSimplicialSet,
    bound: usize,
) -> Result<Vec<usize>, CoalgebraError> {
    (0..x.level(1).len())
        .map(|e| {
            let key = x.level(1).key(e);
            match length(x, key)? {
                Length::Certified(k) if k <= bound => Ok(k),
                Length::Certified(k) => Err(CoalgebraError::LengthNotCertified {
                    key: key.to_string(),
                    at_least: k,
                    bound,
                }),
                Length::AtLeast(k) => Err(CoalgebraError::LengthNotCertified {
                    key: key.to_string(),
                    at_least: k,
                    bound,
                }),
            }
        })
        .collect()
}

/// The Möbius function: the convolution inverse of [`zeta`], computed by
/// recursion over the length filtration,
/// `μ(f) = ε(f) − Σ μ(d_2 σ)` over 2-simplices with long edge `f` whose
/// `d_0` is nondegenerate. Every 1-simplex must have certified length at
/// most `up_to_length`, which in turn must sit strictly below the
/// truncation; otherwise the recursion cannot be completed honestly and an
/// error names the first offending element.
pub fn mobius(
    x: &TruncatedSimplicialSet,
    up_to_length: usize,
) -> Result<ConvolutionFunction, CoalgebraError> {
    if x.truncation() < up_to_length + 1 {
        return Err(SsetError::TruncationTooSmall {
            needed: up_to_length + 1,
            have: x.truncation(),
        }
        .into());
    }
    let lengths = certified_lengths(x, up_to_length)?;
    let eps = epsilon(x);
    let mut order: Vec<usize> = (0..x.level(1).len()).collect();
    order.sort_by_key(|&e| lengths[e]);
    // Group the splitting simplices by long edge once.
    let mut proper: Vec<Vec<usize>> = vec![Vec::new(); x.level(1).len()];
    for s in 0..x.level(2).len() {
        if !x.is_degenerate(1, x.face(2, 0, s)) {
            proper[x.face(2, 1, s)].push(s);
        }
    }
    let mut values = vec![BigRational::zero(); x.level(1).len()];
    for &f in &order {
        let mut v = eps.value(f).clone();
        for &s in &proper[f] {
            let left = x.face(2, 2, s);
            if lengths[left] >= lengths[f] {
                return Err(CoalgebraError::FiltrationViolation {
                    long: x.level(1).key(f).to_string(),
                    left: x.level(1).key(left).to_string(),
                });
            }
            v -= &values[left];
        }
        values[f] = v;
    }
    Ok(ConvolutionFunction { values })
}

/// The number of nondegenerate `k`-simplices with the given long edge, for
/// each `k` up to the truncation.
pub fn phi_counts(x: &TruncatedSimplicialSet, key: &str) -> Result<Vec<usize>, CoalgebraError> {
    let f = edge_index(x, key)?;
    let mut counts = Vec::with_capacity(x.truncation() + 1);
    for k in 0..=x.truncation() {
        let long = x.apply_map(ActiveMap::long(k).as_map())?;
        counts.push(
            (0..x.level(k).len())
                .filter(|&e| long[e] == f && !x.is_degenerate(k, e))
                .count(),
        );
    }
    Ok(counts)
}

/// The Möbius function computed as the alternating sum
/// `Σ (−1)^k φ_k(f)` of nondegenerate simplex counts, under the same length
/// certification as [`mobius`]. Used to cross-validate the recursion.
pub fn mobius_alternating(
    x: &TruncatedSimplicialSet,
    up_to_length: usize,
) -> Result<ConvolutionFunction, CoalgebraError> {
    if x.truncation() < up_to_length + 1 {
        return Err(SsetError::TruncationTooSmall {
            needed: up_to_length + 1,
            have: x.truncation(),
        }
        .into());
    }
    certified_lengths(x, up_to_length)?;
    let mut values = Vec::with_capacity(x.level(1).len());
    for e in 0..x.level(1).len() {
        let counts = phi_counts(x, x.level(1).key(e))?;
        let mut v = BigRational::zero();
        for (k, &c) in counts.iter().enumerate() {
            let term = BigRational::from_integer(c.into());
            if k % 2 == 0 {
                v += term;
            } else {
                v -= term;
            }
        }
        values.push(v);
    }
    Ok(ConvolutionFunction { values })
}
