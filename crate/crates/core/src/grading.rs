//! ℤ-gradings from marks on simple roots, their level sets `Δ(i)`, and the
//! weight poset `Δ(1)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::poset::{FinitePoset, PosetError};
use crate::rootsys::{RootSystem, RootSystemError, RootVec};
use crate::weyl::{self, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("expected {expected} marks, got {got}")]
    MarksLength { expected: usize, got: usize },
    #[error("at least one mark must be positive")]
    AllZero,
    #[error("A1 has no extra-special grading (Δ(1) would be empty)")]
    NoExtraSpecial,
    #[error("Δ(1) is empty for marks {0:?}")]
    EmptyDelta1(Vec<u32>),
    #[error("operation requires the extra-special grading")]
    NotExtraSpecial,
    #[error("operation requires a standard grading (marks in {{0,1}})")]
    NotStandard,
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A ℤ-grading of a simple Lie algebra, `g = ⊕ g(i)`, given by the values of
/// the grading element on the simple roots.
#[derive(Clone)]
pub struct ZGrading {
    rs: Arc<RootSystem>,
    marks: Vec<u32>,
    /// Level of each positive root, in root-system order.
    pos_level: Vec<u32>,
}

impl ZGrading {
    pub fn new(rs: Arc<RootSystem>, marks: Vec<u32>) -> Result<Self, GradingError> {
        if marks.len() != rs.rank() {
            return Err(GradingError::MarksLength { expected: rs.rank(), got: marks.len() });
        }
        if marks.iter().all(|&m| m == 0) {
            return Err(GradingError::AllZero);
        }
        let pos_level = rs
            .positive_roots()
            .iter()
            .map(|r| r.0.iter().zip(&marks).map(|(&c, &m)| c as u32 * m).sum())
            .collect();
        Ok(ZGrading { rs, marks, pos_level })
    }

    /// The grading concentrated on a single simple root (0-based index).
    pub fn single_node(rs: Arc<RootSystem>, node: usize) -> Result<Self, GradingError> {
        let mut marks = vec![0; rs.rank()];
        if node >= marks.len() {
            return Err(RootSystemError::BadIndex { index: node, rank: rs.rank() }.into());
        }
        marks[node] = 1;
        Self::new(rs, marks)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    pub fn level_of(&self, v: &RootVec) -> i32 {
        v.0.iter().zip(&self.marks).map(|(&c, &m)| c * m as i32).sum()
    }

    /// Level of the positive root with the given index.
    pub fn positive_level(&self, root: usize) -> u32 {
        self.pos_level[root]
    }

    /// Indices of positive roots in `Δ(k)`, `k ≥ 0`.
    pub fn positive_in_level(&self, k: u32) -> BitSet {
        self.pos_level.iter().enumerate().filter(|(_, &l)| l == k).map(|(i, _)| i).collect()
    }

    /// `Δ(i)` for any integer `i`, including negative roots.
    pub fn level(&self, i: i32) -> Vec<RootVec> {
        let roots = self.rs.positive_roots();
        let mut out: Vec<RootVec> = Vec::new();
        if i <= 0 {
            out.extend(roots.iter().zip(&self.pos_level).filter(|(_, &l)| l as i32 == -i).map(|(r, _)| r.neg()));
        }
        if i >= 0 {
            out.extend(roots.iter().zip(&self.pos_level).filter(|(_, &l)| l as i32 == i).map(|(r, _)| r.clone()));
        }
        out
    }

    pub fn max_level(&self) -> u32 {
        self.pos_level.iter().copied().max().unwrap_or(0)
    }

    pub fn is_standard(&self) -> bool {
        self.marks.iter().all(|&m| m <= 1)
    }

    /// `Some(k)` for a standard grading with exactly `k` marks equal to 1.
    pub fn standard_k(&self) -> Option<usize> {
        self.is_standard().then(|| self.marks.iter().filter(|&&m| m == 1).count())
    }

    /// `Π(0)`, as 0-based simple indices.
    pub fn pi0(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&i| self.marks[i] == 0).collect()
    }

    /// `Π(1)`, as 0-based simple indices.
    pub fn pi1(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&i| self.marks[i] == 1).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.max_level() == 1
    }

    pub fn is_extra_special(&self) -> bool {
        extra_special_marks(&self.rs).is_ok_and(|m| m == self.marks)
    }

    /// e.g. `E7[1,0,0,0,0,0,0]`.
    pub fn label(&self) -> String {
        let m: Vec<String> = self.marks.iter().map(|m| m.to_string()).collect();
        format!("{}[{}]", self.rs.stype(), m.join(","))
    }
}

impl fmt::Debug for ZGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZGrading({})", self.label())
    }
}

/// Gradings with `Δ(2) = ∅`: one per simple root with `[θ:α_i] = 1`.
pub fn abelian_gradings(rs: &Arc<RootSystem>) -> Vec<ZGrading> {
    (0..rs.rank())
        .filter(|&i| rs.theta().0[i] == 1)
        .map(|i| ZGrading::single_node(rs.clone(), i).expect("valid node"))
        .collect()
}

/// All gradings with a single mark equal to 1.
pub fn one_standard_gradings(rs: &Arc<RootSystem>) -> Vec<ZGrading> {
    (0..rs.rank()).map(|i| ZGrading::single_node(rs.clone(), i).expect("valid node")).collect()
}

/// Marks `(α_i, θ∨)`.
pub fn extra_special_marks(rs: &RootSystem) -> Result<Vec<u32>, GradingError> {
    if rs.rank() == 1 {
        return Err(GradingError::NoExtraSpecial);
    }
    (0..rs.rank())
        .map(|i| Ok(rs.coroot_pairing(&rs.simple_root(i), rs.theta())? as u32))
        .collect()
}

/// The grading with `Δ(2) = {θ}` and `Δ(i) = {γ : (γ, θ∨) = i}`.
pub fn extra_special_grading(rs: &Arc<RootSystem>) -> Result<ZGrading, GradingError> {
    ZGrading::new(rs.clone(), extra_special_marks(rs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    /// `#Δ(1) = dim g(1)`.
    pub delta1: usize,
    pub delta0_positive: usize,
    pub rank: usize,
    /// `#Δ(0) + rank`.
    pub dim_g0: usize,
    pub dim_g1: usize,
}

/// `Δ(1)` as a graded poset, with elements ordered by (height, coefficients).
#[derive(Debug, Clone)]
pub struct WeightPoset {
    pub grading: ZGrading,
    pub elements: Vec<RootVec>,
    /// Positive-root index of each element.
    pub root_index: Vec<usize>,
    pub poset: FinitePoset,
    pub dims: Dims,
    /// Action of the longest element of `W(0)` on element indices.
    pub w0: Vec<usize>,
}

pub fn delta1_poset(g: &ZGrading) -> Result<WeightPoset, GradingError> {
    let rs = g.root_system();
    let root_index: Vec<usize> = g.positive_in_level(1).to_vec();
    if root_index.is_empty() {
        return Err(GradingError::EmptyDelta1(g.marks.clone()));
    }
    let elements: Vec<RootVec> = root_index.iter().map(|&i| rs.root(i).clone()).collect();
    let pos_of = |v: &RootVec| elements.iter().position(|e| e == v);
    let pi0 = g.pi0();
    let mut covers = Vec::new();
    for (x, e) in elements.iter().enumerate() {
        for &j in &pi0 {
            if let Some(y) = pos_of(&e.add(&rs.simple_root(j))) {
                covers.push((x, y));
            }
        }
    }
    let poset = FinitePoset::new(elements.len(), covers, elements.iter().map(|e| e.height()).collect())?;
    let delta0_positive = g.positive_in_level(0).len();
    let dims = Dims {
        delta1: elements.len(),
        delta0_positive,
        rank: rs.rank(),
        dim_g0: 2 * delta0_positive + rs.rank(),
        dim_g1: elements.len(),
    };
    let w0 = if pi0.is_empty() {
        (0..elements.len()).collect()
    } else {
        let word = weyl::longest_element(rs, &pi0)?;
        elements
            .iter()
            .map(|e| pos_of(&weyl::act(rs, &word, e)).expect("W(0) preserves Δ(1)"))
            .collect()
    };
    Ok(WeightPoset { grading: g.clone(), elements, root_index, poset, dims, w0 })
}

/// `w₀` of `W(0)` acting on `Δ(1)`, as a permutation of element indices.
pub fn w0_action_on_delta1(g: &ZGrading) -> Result<Vec<usize>, GradingError> {
    Ok(delta1_poset(g)?.w0)
}

#[derive(Debug, Serialize)]
struct WeightPosetJson<'a> {
    #[serde(rename = "type")]
    stype: String,
    marks: &'a [u32],
    elements: &'a [RootVec],
    covers: Vec<[usize; 2]>,
    rank: &'a [i32],
    level_sizes: Vec<usize>,
    dims: Dims,
}

impl WeightPoset {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, v: &RootVec) -> Option<usize> {
        self.elements.iter().position(|e| e == v)
    }

    /// Image of a subset under the `w₀` permutation.
    pub fn apply_w0(&self, set: &BitSet) -> BitSet {
        set.iter().map(|x| self.w0[x]).collect()
    }

    /// For each element `γ`, the index of `θ - γ` when that lies in `Δ(1)`.
    pub fn theta_partner(&self) -> Vec<Option<usize>> {
        let theta = self.grading.root_system().theta();
        self.elements.iter().map(|e| self.index_of(&theta.sub(e))).collect()
    }

    /// Compact coefficient labels such as `012211` when every coefficient is a digit.
    pub fn labels(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|e| {
                if e.0.iter().all(|&c| (0..10).contains(&c)) {
                    e.0.iter().map(|c| c.to_string()).collect()
                } else {
                    e.to_string()
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WeightPosetJson {
            stype: self.grading.root_system().stype().to_string(),
            marks: self.grading.marks(),
            elements: &self.elements,
            covers: self.poset.covers().iter().map(|&(a, b)| [a, b]).collect(),
            rank: self.poset.ranks(),
            level_sizes: self.poset.level_sizes(),
            dims: self.dims,
        })
        .expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        self.poset.to_dot(&self.grading.label(), &self.labels())
    }
}
