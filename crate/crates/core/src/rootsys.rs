//! Finite reduced irreducible root systems with exact integer data.
//!
//! Simple roots are indexed from 0 in the API; user-facing numbering (CLI,
//! JSON) is 1-based. The numbering of the Dynkin diagrams follows the
//! Onishchik–Vinberg tables rather than Bourbaki for the exceptional types:
//!
//! | type | diagram (1-based)                                   | Bourbaki labels of nodes 1..n |
//! |------|-----------------------------------------------------|-------------------------------|
//! | A_n  | chain 1 - 2 - ... - n                                | same                          |
//! | B_n  | chain, α_n short                                     | same                          |
//! | C_n  | chain, α_n long                                      | same                          |
//! | D_n  | chain 1 - ... - (n-2), with n-1 and n on node n-2    | same                          |
//! | E6   | chain 1 - 2 - 3 - 4 - 5, node 6 on node 3            | 1 3 4 5 6 2                   |
//! | E7   | chain 1 - ... - 6, node 7 on node 4                  | 7 6 5 4 3 1 2                 |
//! | E8   | chain 1 - ... - 7, node 8 on node 5                  | 8 7 6 5 4 3 1 2               |
//! | F4   | 1 - 2 => 3 - 4, α1 and α2 long                       | same                          |
//! | G2   | α1 short, α2 long                                    | same                          |
//!
//! With this numbering the highest root of E6 is `(1,2,3,2,1,2)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid root system {family}{rank}: {constraint}")]
    InvalidType { family: Family, rank: usize, constraint: &'static str },
    #[error("cannot parse root system type {0:?} (expected e.g. A3, E7, G2)")]
    Parse(String),
    #[error("simple index {index} out of range for rank {rank}")]
    BadIndex { index: usize, rank: usize },
    #[error("{0} is not a root")]
    NotARoot(RootVec),
    #[error("{0} has {1} positive roots, more than the supported {max}", max = BitSet::CAPACITY)]
    TooLarge(SimpleType, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let bad = |constraint| Err(RootSystemError::InvalidType { family, rank, constraint });
        match family {
            _ if rank == 0 => bad("rank must be positive"),
            Family::B | Family::C if rank < 2 => bad("B and C require rank >= 2"),
            Family::D if rank < 4 => bad("D requires rank >= 4"),
            Family::E if !(6..=8).contains(&rank) => bad("E requires rank 6, 7 or 8"),
            Family::F if rank != 4 => bad("F requires rank 4"),
            Family::G if rank != 2 => bad("G requires rank 2"),
            _ => Ok(SimpleType { family, rank }),
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Type of the dual root system.
    pub fn dual(&self) -> SimpleType {
        let family = match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            f => f,
        };
        SimpleType { family, rank: self.rank }
    }

    /// Every valid type with rank in `1..=max_rank`, in a fixed order.
    pub fn all_up_to(max_rank: usize) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for family in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
            for rank in 1..=max_rank {
                if let Ok(t) = SimpleType::new(family, rank) {
                    out.push(t);
                }
            }
        }
        out
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_err = || RootSystemError::Parse(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(parse_err()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| parse_err())?;
        SimpleType::new(family, rank)
    }
}

impl Serialize for SimpleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SimpleType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coordinates of a vector of the root lattice in the basis of simple roots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVec(pub Vec<i32>);

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = 1;
        v
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> RootVec {
        RootVec(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Coordinates used for sign tests: `1` for positive, `-1` for negative, `0` otherwise.
    pub fn sign(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl fmt::Debug for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    stype: SimpleType,
    /// `cartan[i][j] = <α_j, α_i^∨>`.
    cartan: Vec<Vec<i32>>,
    /// Symmetrizer: `(α_i, α_j) = dsym[i] * cartan[i][j]`; short roots have `dsym = 1`.
    dsym: Vec<i32>,
    positive: Vec<RootVec>,
    index: HashMap<RootVec, usize>,
    theta: usize,
    h: usize,
    h_star: usize,
    exponents: Vec<usize>,
    long: BitSet,
}

fn cartan_for(stype: SimpleType) -> Vec<Vec<i32>> {
    let n = stype.rank;
    let mut a = vec![vec![0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    // (i, j, a_ij, a_ji), 0-based
    let mut edges: Vec<(usize, usize, i32, i32)> = Vec::new();
    let chain = |len: usize, edges: &mut Vec<(usize, usize, i32, i32)>| {
        for i in 1..len {
            edges.push((i - 1, i, -1, -1));
        }
    };
    match stype.family {
        Family::A => chain(n, &mut edges),
        Family::B => {
            chain(n - 1, &mut edges);
            edges.push((n - 2, n - 1, -1, -2));
        }
        Family::C => {
            chain(n - 1, &mut edges);
            edges.push((n - 2, n - 1, -2, -1));
        }
        Family::D => {
            chain(n - 1, &mut edges);
            edges.push((n - 3, n - 1, -1, -1));
        }
        Family::E => {
            chain(n - 1, &mut edges);
            let branch = n - 4;
            edges.push((branch, n - 1, -1, -1));
        }
        Family::F => {
            edges.push((0, 1, -1, -1));
            edges.push((1, 2, -1, -2));
            edges.push((2, 3, -1, -1));
        }
        Family::G => edges.push((0, 1, -3, -1)),
    }
    for (i, j, aij, aji) in edges {
        a[i][j] = aij;
        a[j][i] = aji;
    }
    a
}

/// Solve `d_i a_ij = d_j a_ji` along the (connected) Dynkin diagram and
/// normalize so the shortest roots get `d = 1`.
fn symmetrizer(cartan: &[Vec<i32>]) -> Vec<i32> {
    let n = cartan.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    d[0] = Some(Ratio::from_integer(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let di = d[i].unwrap();
        for j in 0..n {
            if j != i && cartan[i][j] != 0 && d[j].is_none() {
                d[j] = Some(di * Ratio::new(cartan[i][j] as i64, cartan[j][i] as i64));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Ratio<i64>> = d.into_iter().map(|x| x.expect("Dynkin diagram is connected")).collect();
    let min = *d.iter().min().unwrap();
    d.iter()
        .map(|x| {
            let r = x / min;
            assert!(r.is_integer(), "non-integral symmetrizer");
            *r.numer() as i32
        })
        .collect()
}

impl RootSystem {
    pub fn new(stype: SimpleType) -> Result<Self, RootSystemError> {
        let stype = SimpleType::new(stype.family, stype.rank)?;
        Self::from_cartan(stype, cartan_for(stype))
    }

    pub fn parse(s: &str) -> Result<Self, RootSystemError> {
        Self::new(s.parse()?)
    }

    fn from_cartan(stype: SimpleType, cartan: Vec<Vec<i32>>) -> Result<Self, RootSystemError> {
        let n = stype.rank;
        let dsym = symmetrizer(&cartan);

        // Closure of Π under the simple reflections.
        let mut seen: HashMap<RootVec, ()> = HashMap::new();
        let mut queue: VecDeque<RootVec> = (0..n).map(|i| RootVec::simple(n, i)).collect();
        for r in &queue {
            seen.insert(r.clone(), ());
        }
        while let Some(v) = queue.pop_front() {
            for j in 0..n {
                let p: i32 = (0..n).map(|i| v.0[i] * cartan[j][i]).sum();
                if p == 0 {
                    continue;
                }
                let mut w = v.clone();
                w.0[j] -= p;
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), ());
                    queue.push_back(w);
                }
            }
        }
        let mut positive: Vec<RootVec> = seen.into_keys().filter(RootVec::is_positive).collect();
        positive.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        if positive.len() > BitSet::CAPACITY {
            return Err(RootSystemError::TooLarge(stype, positive.len()));
        }
        let index: HashMap<RootVec, usize> = positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let max_height = positive.iter().map(RootVec::height).max().unwrap();
        let tops: Vec<usize> = (0..positive.len()).filter(|&i| positive[i].height() == max_height).collect();
        assert_eq!(tops.len(), 1, "highest root is unique");
        let theta = tops[0];
        let h = max_height as usize + 1;

        let mut hist = vec![0usize; h];
        for r in &positive {
            hist[r.height() as usize] += 1;
        }
        let mut exponents: Vec<usize> = (1..=n).map(|j| (1..h).filter(|&k| hist[k] >= j).count()).collect();
        exponents.sort_unstable();

        let dmax = *dsym.iter().max().unwrap();
        let mut rs = RootSystem {
            stype,
            cartan,
            dsym,
            positive,
            index,
            theta,
            h,
            h_star: 0,
            exponents,
            long: BitSet::new(),
        };
        rs.long = (0..rs.positive.len()).filter(|&i| rs.half_norm(&rs.positive[i]) == dmax).collect();
        rs.h_star = rs.coroot_coeffs(&rs.positive[theta]).height() as usize + 1;
        Ok(rs)
    }

    pub fn stype(&self) -> SimpleType {
        self.stype
    }

    pub fn rank(&self) -> usize {
        self.stype.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn dsym(&self) -> &[i32] {
        &self.dsym
    }

    /// Positive roots sorted by (height, coefficient vector).
    pub fn positive_roots(&self) -> &[RootVec] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn root(&self, i: usize) -> &RootVec {
        &self.positive[i]
    }

    /// Index of a positive root.
    pub fn index_of(&self, v: &RootVec) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &RootVec) -> bool {
        self.index.contains_key(v) || self.index.contains_key(&v.neg())
    }

    pub fn simple_root(&self, i: usize) -> RootVec {
        RootVec::simple(self.rank(), i)
    }

    pub fn theta(&self) -> &RootVec {
        &self.positive[self.theta]
    }

    pub fn theta_index(&self) -> usize {
        self.theta
    }

    /// Coxeter number.
    pub fn h(&self) -> usize {
        self.h
    }

    /// Dual Coxeter number, `1 + ht(θ^∨)` in the dual system.
    pub fn h_star(&self) -> usize {
        self.h_star
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    fn check_index(&self, j: usize) -> Result<(), RootSystemError> {
        if j < self.rank() {
            Ok(())
        } else {
            Err(RootSystemError::BadIndex { index: j, rank: self.rank() })
        }
    }

    /// `<v, α_j^∨>`.
    pub fn pairing(&self, v: &RootVec, j: usize) -> i32 {
        v.0.iter().zip(&self.cartan[j]).map(|(c, a)| c * a).sum()
    }

    pub fn try_pairing(&self, v: &RootVec, j: usize) -> Result<i32, RootSystemError> {
        self.check_index(j)?;
        Ok(self.pairing(v, j))
    }

    /// The invariant form `(u, v) = Σ u_i v_j d_i a_ij`.
    pub fn inner(&self, u: &RootVec, v: &RootVec) -> i32 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if u.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += u.0[i] * v.0[j] * self.dsym[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// `(v, v) / 2`; equals `1` on short roots.
    pub fn half_norm(&self, v: &RootVec) -> i32 {
        self.inner(v, v) / 2
    }

    /// `<γ, μ^∨> = 2(γ, μ)/(μ, μ)`.
    pub fn coroot_pairing(&self, gamma: &RootVec, mu: &RootVec) -> Result<i32, RootSystemError> {
        if !self.is_root(mu) {
            return Err(RootSystemError::NotARoot(mu.clone()));
        }
        let num = 2 * self.inner(gamma, mu);
        let den = self.inner(mu, mu);
        debug_assert_eq!(num % den, 0);
        Ok(num / den)
    }

    /// `s_j(v) = v - <v, α_j^∨> α_j`.
    pub fn reflect(&self, j: usize, v: &RootVec) -> RootVec {
        let mut w = v.clone();
        w.0[j] -= self.pairing(v, j);
        w
    }

    /// `s_μ(v) = v - <v, μ^∨> μ` for a root `μ`.
    pub fn reflect_by(&self, mu: &RootVec, v: &RootVec) -> Result<RootVec, RootSystemError> {
        let p = self.coroot_pairing(v, mu)?;
        Ok(RootVec(v.0.iter().zip(&mu.0).map(|(a, b)| a - p * b).collect()))
    }

    pub fn is_long(&self, i: usize) -> bool {
        self.long.contains(i)
    }

    /// Long positive roots as a subset of root indices.
    pub fn long_positive(&self) -> BitSet {
        self.long
    }

    /// Long simple roots `Π_l`. In simply laced types every root is long.
    pub fn long_simple_roots(&self) -> Vec<usize> {
        let dmax = *self.dsym.iter().max().unwrap();
        (0..self.rank()).filter(|&i| self.dsym[i] == dmax).collect()
    }

    /// Coordinates of `v^∨ = 2v/(v,v)` in the basis of simple coroots.
    pub fn coroot_coeffs(&self, v: &RootVec) -> RootVec {
        let d = self.half_norm(v);
        RootVec(
            v.0.iter()
                .zip(&self.dsym)
                .map(|(&c, &di)| {
                    debug_assert_eq!((c * di) % d, 0);
                    c * di / d
                })
                .collect(),
        )
    }

    /// The dual root system (transposed Cartan matrix) together with the map
    /// sending the index of a positive root `γ` to the index of `γ^∨`.
    pub fn dual(&self) -> (RootSystem, Vec<usize>) {
        let n = self.rank();
        let cartan_t: Vec<Vec<i32>> = (0..n).map(|i| (0..n).map(|j| self.cartan[j][i]).collect()).collect();
        let dual = RootSystem::from_cartan(self.stype.dual(), cartan_t).expect("dual of a valid system");
        let map = self
            .positive
            .iter()
            .map(|r| dual.index_of(&self.coroot_coeffs(r)).expect("coroot is a root of the dual"))
            .collect();
        (dual, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::parse(s).unwrap()
    }

    #[test]
    fn rejects_bad_types() {
        for s in ["B1", "C1", "D3", "E5", "E9", "F3", "G3", "A0"] {
            assert!(matches!(s.parse::<SimpleType>(), Err(RootSystemError::InvalidType { .. })), "{s}");
        }
        assert!(matches!("X3".parse::<SimpleType>(), Err(RootSystemError::Parse(_))));
        assert!(matches!("E".parse::<SimpleType>(), Err(RootSystemError::Parse(_))));
    }

    #[test]
    fn a3_basics() {
        let a3 = rs("A3");
        assert_eq!(a3.num_positive(), 6);
        assert_eq!(a3.h(), 4);
        assert_eq!(a3.theta(), &RootVec(vec![1, 1, 1]));
        assert_eq!(a3.exponents(), &[1, 2, 3]);
        assert_eq!(a3.reflect(1, &a3.simple_root(0)), RootVec(vec![1, 1, 0]));
    }

    #[test]
    fn g2_basics() {
        let g2 = rs("G2");
        assert_eq!(g2.num_positive(), 6);
        assert_eq!((g2.h(), g2.h_star()), (6, 4));
        assert_eq!(g2.theta(), &RootVec(vec![3, 2]));
        assert_eq!(g2.exponents(), &[1, 5]);
        assert_eq!(g2.long_simple_roots(), vec![1]);
        assert_eq!(g2.dsym(), &[1, 3]);
    }

    #[test]
    fn e6_theta_in_table_numbering() {
        assert_eq!(rs("E6").theta(), &RootVec(vec![1, 2, 3, 2, 1, 2]));
    }

    #[test]
    fn f4_symmetrizer() {
        assert_eq!(rs("F4").dsym(), &[2, 2, 1, 1]);
        assert_eq!(rs("F4").theta(), &RootVec(vec![2, 3, 4, 2]));
    }

    #[test]
    fn pairings() {
        let a2 = rs("A2");
        let a1 = a2.simple_root(0);
        assert_eq!(a2.pairing(&a1, 0), 2);
        assert_eq!(a2.pairing(&a1, 1), -1);
        assert_eq!(a2.coroot_pairing(&a1, a2.theta()), Ok(1));
        assert!(a2.try_pairing(&a1, 2).is_err());
        assert!(a2.coroot_pairing(&a1, &RootVec(vec![2, 0])).is_err());
        let g2 = rs("G2");
        for j in 0..2 {
            assert!(g2.pairing(g2.theta(), j) >= 0);
        }
    }

    #[test]
    fn theta_coroot_pairing_is_two() {
        for t in SimpleType::all_up_to(8) {
            let r = RootSystem::new(t).unwrap();
            assert_eq!(r.coroot_pairing(r.theta(), r.theta()), Ok(2), "{t}");
        }
    }

    #[test]
    fn c3_extra_special_level_count() {
        let c3 = rs("C3");
        let n = c3
            .positive_roots()
            .iter()
            .filter(|g| c3.coroot_pairing(g, c3.theta()) == Ok(1))
            .count();
        assert_eq!(n, 2 * c3.h_star() - 4);
        assert_eq!(n, 4);
    }

    #[test]
    fn long_simple() {
        assert_eq!(rs("A4").long_simple_roots(), vec![0, 1, 2, 3]);
        assert_eq!(rs("C4").long_simple_roots(), vec![3]);
        assert_eq!(rs("B4").long_simple_roots(), vec![0, 1, 2]);
    }

    #[test]
    fn duals() {
        let (c3, _) = rs("B3").dual();
        assert_eq!(c3.stype().to_string(), "C3");
        let e7 = rs("E7");
        let (d, map) = e7.dual();
        assert_eq!(d.stype(), e7.stype());
        assert_eq!(d.root(map[e7.theta_index()]).height() as usize, e7.h() - 1);
        let g2 = rs("G2");
        let (d, map) = g2.dual();
        assert_eq!(d.root(map[g2.theta_index()]).height(), 3);
    }

    #[test]
    fn reflection_is_involution_and_permutes_roots() {
        for t in ["B4", "F4", "G2", "E6"] {
            let r = rs(t);
            for v in r.positive_roots() {
                for j in 0..r.rank() {
                    let w = r.reflect(j, v);
                    assert!(r.is_root(&w));
                    assert_eq!(&r.reflect(j, &w), v);
                }
            }
            assert_eq!(r.reflect(0, &r.simple_root(0)), r.simple_root(0).neg());
        }
    }
}
