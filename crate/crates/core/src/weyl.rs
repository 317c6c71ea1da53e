//! Weyl group elements as words in simple reflections.
//!
//! Words act right-to-left: the word `[i, j]` is `s_i s_j`, so it applies
//! `s_j` first. The full group is never materialized; only minimal coset
//! representatives and parabolic longest elements are.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::grading::ZGrading;
use crate::rootsys::{RootSystem, RootVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("longest element requested for an empty set of simple roots")]
    EmptySupport,
    #[error("coset enumeration needs marks in {{0,1}}, got {0:?}")]
    NonStandard(Vec<u32>),
    #[error("expected {expected} marks, got {got}")]
    MarksLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The product `self * other`.
    pub fn then(&self, other: &WeylWord) -> WeylWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        WeylWord(letters)
    }

    pub fn inverse(&self) -> WeylWord {
        WeylWord(self.0.iter().rev().copied().collect())
    }

    /// 1-based letters, for display.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }
}

pub fn act(rs: &RootSystem, w: &WeylWord, v: &RootVec) -> RootVec {
    w.0.iter().rev().fold(v.clone(), |acc, &j| rs.reflect(j, &acc))
}

/// `N(w) = {γ ∈ Δ⁺ : w(γ) < 0}` as a set of positive-root indices.
pub fn inversion_set(rs: &RootSystem, w: &WeylWord) -> BitSet {
    rs.positive_roots()
        .iter()
        .enumerate()
        .filter(|(_, g)| act(rs, w, g).is_negative())
        .map(|(i, _)| i)
        .collect()
}

pub fn length(rs: &RootSystem, w: &WeylWord) -> usize {
    inversion_set(rs, w).len()
}

pub fn is_reduced(rs: &RootSystem, w: &WeylWord) -> bool {
    length(rs, w) == w.len()
}

/// A subset of `Δ⁺` is closed if it contains every root that is a sum of two of its members.
pub fn is_closed(rs: &RootSystem, set: &BitSet) -> bool {
    let members = set.to_vec();
    members.iter().all(|&a| {
        members.iter().all(|&b| match rs.index_of(&rs.root(a).add(rs.root(b))) {
            Some(c) => set.contains(c),
            None => true,
        })
    })
}

/// Reduced word for the longest element of the parabolic subgroup generated
/// by `{s_j : j ∈ support}`.
///
/// Starts from `v = 2ρ` of the parabolic subsystem and reflects by any `s_j`
/// with `<v, α_j^∨> > 0` until `v = -2ρ`.
pub fn longest_element(rs: &RootSystem, support: &[usize]) -> Result<WeylWord, WeylError> {
    if support.is_empty() {
        return Err(WeylError::EmptySupport);
    }
    let in_support = |r: &RootVec| r.0.iter().enumerate().all(|(i, &c)| c == 0 || support.contains(&i));
    let mut v = RootVec::zero(rs.rank());
    for r in rs.positive_roots().iter().filter(|r| in_support(r)) {
        v = v.add(r);
    }
    let mut applied = Vec::new();
    while let Some(&j) = support.iter().find(|&&j| rs.pairing(&v, j) > 0) {
        v = rs.reflect(j, &v);
        applied.push(j);
    }
    // v_final = s_{j_k} ... s_{j_1} v_0, so the word reads in reverse order of application.
    applied.reverse();
    Ok(WeylWord(applied))
}

/// A minimal-length representative of a coset `w W(0)`.
#[derive(Debug, Clone, Serialize)]
pub struct CosetRep {
    pub word: WeylWord,
    pub length: usize,
    /// Inversion set over positive-root indices.
    #[serde(skip)]
    pub inv_set: BitSet,
    /// `w(h̃)` in fundamental-coweight coordinates, `<α_i, w(h̃)>`.
    #[serde(skip)]
    pub coweight: Vec<i32>,
}

/// All of `W⁰ = {w : w(Δ(0)⁺) ⊂ Δ⁺}` for a standard grading.
pub fn coset_reps(g: &ZGrading) -> Result<Vec<CosetRep>, WeylError> {
    coset_reps_for_marks(g.root_system(), g.marks())
}

/// Breadth-first search over the `W`-orbit of the defining coweight, which
/// has stabiliser `W(0)` when all marks are 0 or 1. Representatives come out
/// sorted by length.
pub fn coset_reps_for_marks(rs: &RootSystem, marks: &[u32]) -> Result<Vec<CosetRep>, WeylError> {
    let n = rs.rank();
    if marks.len() != n {
        return Err(WeylError::MarksLength { expected: n, got: marks.len() });
    }
    if marks.iter().any(|&m| m > 1) {
        return Err(WeylError::NonStandard(marks.to_vec()));
    }
    let cartan = rs.cartan();
    let start: Vec<i32> = marks.iter().map(|&m| m as i32).collect();
    let identity_images: Vec<RootVec> = rs.positive_roots().to_vec();

    let mut seen: HashMap<Vec<i32>, ()> = HashMap::new();
    seen.insert(start.clone(), ());
    let mut out = vec![CosetRep { word: WeylWord::identity(), length: 0, inv_set: BitSet::new(), coweight: start.clone() }];
    let mut layer: Vec<(usize, Vec<RootVec>)> = vec![(0, identity_images)];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (idx, images) in &layer {
            let parent = out[*idx].clone();
            for j in 0..n {
                if parent.coweight[j] <= 0 {
                    continue;
                }
                let cj = parent.coweight[j];
                let coweight: Vec<i32> = (0..n).map(|i| parent.coweight[i] - cj * cartan[j][i]).collect();
                if seen.contains_key(&coweight) {
                    continue;
                }
                seen.insert(coweight.clone(), ());
                let imgs: Vec<RootVec> = images.iter().map(|v| rs.reflect(j, v)).collect();
                let inv_set: BitSet = imgs.iter().enumerate().filter(|(_, v)| v.is_negative()).map(|(i, _)| i).collect();
                let mut letters = vec![j];
                letters.extend_from_slice(parent.word.letters());
                out.push(CosetRep { word: WeylWord(letters), length: parent.length + 1, inv_set, coweight });
                next.push((out.len() - 1, imgs));
            }
        }
        layer = next;
    }
    Ok(out)
}

/// `Σ_w t^{ℓ(w)}` over a list of representatives.
pub fn poincare_polynomial(reps: &[CosetRep]) -> crate::poly::IntPoly {
    let max = reps.iter().map(|r| r.length).max().unwrap_or(0);
    let mut c = vec![0i128; max + 1];
    for r in reps {
        c[r.length] += 1;
    }
    crate::poly::IntPoly::new(c)
}
