//! Finite graded posets: ideals, antichains, generating polynomials, rank
//! statistics, standard constructions, and isomorphism testing.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::poly::IntPoly;
use crate::rootsys::RootSystem;

/// Default bound on the number of ideals an enumeration may visit.
pub const DEFAULT_IDEAL_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("poset has {0} elements; at most {max} are supported", max = BitSet::CAPACITY)]
    TooLarge(usize),
    #[error("rank vector has length {got}, expected {expected}")]
    RankLength { expected: usize, got: usize },
    #[error("cover ({0}, {1}) refers to an element outside the poset")]
    CoverOutOfRange(usize, usize),
    #[error("cover ({0}, {1}) listed twice")]
    DuplicateCover(usize, usize),
    #[error("cover ({lower}, {upper}) does not raise the rank by one ({rl} -> {ru})")]
    RankMismatch { lower: usize, upper: usize, rl: i32, ru: i32 },
    #[error("ideal enumeration exceeded the cap of {0} ideals")]
    CapExceeded(usize),
    #[error("{0:?} is not an upper ideal")]
    NotUpperIdeal(BitSet),
    #[error("{0:?} is not an antichain")]
    NotAntichain(BitSet),
    #[error("chain product needs at least one positive dimension")]
    EmptyDims,
}

/// Finite poset given by its cover relation and a rank function.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    size: usize,
    covers: Vec<(usize, usize)>,
    rank: Vec<i32>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    above: Vec<BitSet>,
    below: Vec<BitSet>,
    /// Elements by decreasing rank; a linear extension of the dual order.
    top_down: Vec<usize>,
}

/// On-disk poset format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetFile {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
    pub rank: Vec<i32>,
}

impl FinitePoset {
    /// `covers` lists pairs `(x, y)` with `y` covering `x`.
    pub fn new(size: usize, covers: Vec<(usize, usize)>, rank: Vec<i32>) -> Result<Self, PosetError> {
        if size > BitSet::CAPACITY {
            return Err(PosetError::TooLarge(size));
        }
        if rank.len() != size {
            return Err(PosetError::RankLength { expected: size, got: rank.len() });
        }
        let mut up = vec![BitSet::new(); size];
        let mut down = vec![BitSet::new(); size];
        for &(x, y) in &covers {
            if x >= size || y >= size {
                return Err(PosetError::CoverOutOfRange(x, y));
            }
            if rank[y] != rank[x] + 1 {
                return Err(PosetError::RankMismatch { lower: x, upper: y, rl: rank[x], ru: rank[y] });
            }
            if up[x].contains(y) {
                return Err(PosetError::DuplicateCover(x, y));
            }
            up[x].insert(y);
            down[y].insert(x);
        }
        // Covers raise rank by exactly one, so the relation is acyclic and
        // already transitively reduced.
        let mut top_down: Vec<usize> = (0..size).collect();
        top_down.sort_by(|&a, &b| rank[b].cmp(&rank[a]).then(a.cmp(&b)));
        let mut above = vec![BitSet::new(); size];
        for &x in &top_down {
            let mut s = BitSet::new();
            for y in up[x].iter() {
                s = s.union(&above[y]).with(y);
            }
            above[x] = s;
        }
        let mut below = vec![BitSet::new(); size];
        for &x in top_down.iter().rev() {
            let mut s = BitSet::new();
            for y in down[x].iter() {
                s = s.union(&below[y]).with(y);
            }
            below[x] = s;
        }
        let mut covers = covers;
        covers.sort_unstable();
        Ok(FinitePoset { size, covers, rank, up, down, above, below, top_down })
    }

    /// Builds a poset from covers alone, ranking each element by the length
    /// of the longest chain below it. Fails if the result is not graded.
    pub fn from_covers(size: usize, covers: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        let mut indeg = vec![0usize; size];
        let mut succ = vec![Vec::new(); size];
        for &(x, y) in &covers {
            if x >= size || y >= size {
                return Err(PosetError::CoverOutOfRange(x, y));
            }
            indeg[y] += 1;
            succ[x].push(y);
        }
        let mut rank = vec![1i32; size];
        let mut queue: Vec<usize> = (0..size).filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = queue.pop() {
            for &y in &succ[x] {
                rank[y] = rank[y].max(rank[x] + 1);
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push(y);
                }
            }
        }
        Self::new(size, covers, rank)
    }

    pub fn from_file(f: &PosetFile) -> Result<Self, PosetError> {
        Self::new(f.size, f.covers.iter().map(|c| (c[0], c[1])).collect(), f.rank.clone())
    }

    pub fn to_file(&self) -> PosetFile {
        PosetFile { size: self.size, covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(), rank: self.rank.clone() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn rank(&self, x: usize) -> i32 {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[i32] {
        &self.rank
    }

    pub fn elements(&self) -> BitSet {
        BitSet::full(self.size)
    }

    pub fn up_covers(&self, x: usize) -> BitSet {
        self.up[x]
    }

    pub fn down_covers(&self, x: usize) -> BitSet {
        self.down[x]
    }

    /// `x ≤ y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.above[x].contains(y)
    }

    /// Strict up-set `{y : y > x}`.
    pub fn strictly_above(&self, x: usize) -> BitSet {
        self.above[x]
    }

    pub fn strictly_below(&self, x: usize) -> BitSet {
        self.below[x]
    }

    pub fn min_of(&self, set: &BitSet) -> BitSet {
        set.iter().filter(|&x| self.below[x].is_disjoint(set)).collect()
    }

    pub fn max_of(&self, set: &BitSet) -> BitSet {
        set.iter().filter(|&x| self.above[x].is_disjoint(set)).collect()
    }

    pub fn minimal_elements(&self) -> BitSet {
        self.min_of(&self.elements())
    }

    pub fn maximal_elements(&self) -> BitSet {
        self.max_of(&self.elements())
    }

    pub fn is_upper_ideal(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.up[x].is_subset(set))
    }

    pub fn is_lower_ideal(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.down[x].is_subset(set))
    }

    pub fn is_antichain(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.above[x].is_disjoint(set))
    }

    /// `I(Γ)`, the upper ideal generated by a subset.
    pub fn upper_closure(&self, set: &BitSet) -> BitSet {
        set.iter().fold(*set, |acc, x| acc.union(&self.above[x]))
    }

    /// `I₋(Γ)`, the lower ideal generated by a subset.
    pub fn lower_closure(&self, set: &BitSet) -> BitSet {
        set.iter().fold(*set, |acc, x| acc.union(&self.below[x]))
    }

    pub fn antichain_of_ideal(&self, ideal: &BitSet) -> Result<BitSet, PosetError> {
        if !ideal.is_subset(&self.elements()) || !self.is_upper_ideal(ideal) {
            return Err(PosetError::NotUpperIdeal(*ideal));
        }
        Ok(self.min_of(ideal))
    }

    pub fn ideal_of_antichain(&self, antichain: &BitSet) -> Result<BitSet, PosetError> {
        if !antichain.is_subset(&self.elements()) || !self.is_antichain(antichain) {
            return Err(PosetError::NotAntichain(*antichain));
        }
        Ok(self.upper_closure(antichain))
    }

    /// Lazily enumerate all upper ideals, each exactly once.
    pub fn upper_ideal_iter(&self) -> UpperIdeals<'_> {
        UpperIdeals { poset: self, stack: vec![(0, BitSet::new())] }
    }

    /// All upper ideals, failing if there are more than `cap`.
    pub fn upper_ideals(&self, cap: usize) -> Result<Vec<BitSet>, PosetError> {
        let mut out = Vec::new();
        for ideal in self.upper_ideal_iter() {
            if out.len() == cap {
                return Err(PosetError::CapExceeded(cap));
            }
            out.push(ideal);
        }
        Ok(out)
    }

    /// All antichains, as minimal sets of the upper ideals.
    pub fn antichains(&self, cap: usize) -> Result<Vec<BitSet>, PosetError> {
        Ok(self.upper_ideals(cap)?.iter().map(|i| self.min_of(i)).collect())
    }

    /// `(M_P(t), N_P(t))`.
    pub fn polynomials(&self, cap: usize) -> Result<(IntPoly, IntPoly), PosetError> {
        let mut m = vec![0i128; self.size + 1];
        let mut n = vec![0i128; self.size + 1];
        let mut count = 0usize;
        for ideal in self.upper_ideal_iter() {
            count += 1;
            if count > cap {
                return Err(PosetError::CapExceeded(cap));
            }
            m[ideal.len()] += 1;
            n[self.min_of(&ideal).len()] += 1;
        }
        Ok((IntPoly::new(m), IntPoly::new(n)))
    }

    /// Number of upper ideals of each cardinality.
    pub fn m_polynomial(&self, cap: usize) -> Result<IntPoly, PosetError> {
        Ok(self.polynomials(cap)?.0)
    }

    /// Number of antichains of each size.
    pub fn n_polynomial(&self, cap: usize) -> Result<IntPoly, PosetError> {
        Ok(self.polynomials(cap)?.1)
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        if self.size == 0 {
            return Vec::new();
        }
        let lo = *self.rank.iter().min().unwrap();
        let hi = *self.rank.iter().max().unwrap();
        let mut sizes = vec![0; (hi - lo + 1) as usize];
        for &r in &self.rank {
            sizes[(r - lo) as usize] += 1;
        }
        sizes
    }

    pub fn rank_profile(&self, cap: usize) -> Result<RankProfile, PosetError> {
        let level_sizes = self.level_sizes();
        let max_level = level_sizes.iter().copied().max().unwrap_or(0);
        let max_antichain = self.n_polynomial(cap)?.degree().unwrap_or(0);
        let symmetric = level_sizes.iter().eq(level_sizes.iter().rev());
        let peak = level_sizes.iter().position(|&s| s == max_level).unwrap_or(0);
        let unimodal = level_sizes[..=peak.min(level_sizes.len().saturating_sub(1))].windows(2).all(|w| w[0] <= w[1])
            && level_sizes[peak..].windows(2).all(|w| w[0] >= w[1]);
        Ok(RankProfile {
            unique_max_level: level_sizes.iter().filter(|&&s| s == max_level).count() == 1,
            level_sizes,
            symmetric,
            unimodal,
            sperner: max_antichain == max_level,
            max_antichain,
        })
    }

    /// Connected components of the Hasse diagram, each sorted, ordered by smallest element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.size];
        let mut out = Vec::new();
        for s in 0..self.size {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for y in self.up[x].union(&self.down[x]).iter() {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subposet on `elements` (in the given order). Covers of the
    /// subposet are the covers of `self` between retained elements, which is
    /// correct for convex subsets such as connected components.
    pub fn subposet(&self, elements: &[usize]) -> FinitePoset {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let covers = self
            .covers
            .iter()
            .filter_map(|(x, y)| Some((*pos.get(x)?, *pos.get(y)?)))
            .collect();
        let rank = elements.iter().map(|&x| self.rank[x]).collect();
        FinitePoset::new(elements.len(), covers, rank).expect("subposet of a valid poset")
    }

    pub fn disjoint_union(&self, other: &FinitePoset) -> Result<FinitePoset, PosetError> {
        let off = self.size;
        let mut covers = self.covers.clone();
        covers.extend(other.covers.iter().map(|&(a, b)| (a + off, b + off)));
        let mut rank = self.rank.clone();
        rank.extend_from_slice(&other.rank);
        FinitePoset::new(self.size + other.size, covers, rank)
    }

    /// Cartesian product with the product order. Elements are ordered
    /// `(x, y) ↦ x * other.size() + y`; rank is `rank(x) + rank(y) - 1`.
    pub fn product(&self, other: &FinitePoset) -> Result<FinitePoset, PosetError> {
        let m = other.size;
        let idx = |x: usize, y: usize| x * m + y;
        let mut covers = Vec::new();
        let mut rank = vec![0; self.size * m];
        for x in 0..self.size {
            for y in 0..m {
                rank[idx(x, y)] = self.rank[x] + other.rank[y] - 1;
                for x2 in self.up[x].iter() {
                    covers.push((idx(x, y), idx(x2, y)));
                }
                for y2 in other.up[y].iter() {
                    covers.push((idx(x, y), idx(x, y2)));
                }
            }
        }
        FinitePoset::new(self.size * m, covers, rank)
    }

    /// The `n`-element chain `C_n`, ranks `1..=n`.
    pub fn chain(n: usize) -> FinitePoset {
        FinitePoset::new(n, (1..n).map(|i| (i - 1, i)).collect(), (1..=n as i32).collect()).expect("chain")
    }

    /// `n` pairwise incomparable elements of rank 1.
    pub fn antichain_poset(n: usize) -> FinitePoset {
        FinitePoset::new(n, Vec::new(), vec![1; n]).expect("antichain")
    }

    /// `C_{d_1} × ... × C_{d_k}` with rank `1 + Σ coordinates`; elements sorted
    /// by (rank, coordinate tuple).
    pub fn chain_product(dims: &[usize]) -> Result<FinitePoset, PosetError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(PosetError::EmptyDims);
        }
        let total: usize = dims.iter().product();
        if total > BitSet::CAPACITY {
            return Err(PosetError::TooLarge(total));
        }
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for &d in dims {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..d).map(move |c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        tuples.sort_by(|a, b| a.iter().sum::<usize>().cmp(&b.iter().sum::<usize>()).then_with(|| a.cmp(b)));
        let pos: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut covers = Vec::new();
        for (i, t) in tuples.iter().enumerate() {
            for (k, &d) in dims.iter().enumerate() {
                if t[k] + 1 < d {
                    let mut u = t.clone();
                    u[k] += 1;
                    covers.push((i, pos[&u]));
                }
            }
        }
        let rank = tuples.iter().map(|t| 1 + t.iter().sum::<usize>() as i32).collect();
        FinitePoset::new(total, covers, rank)
    }

    /// The Boolean algebra `B^n` of subsets of an `n`-set.
    pub fn boolean_algebra(n: usize) -> Result<FinitePoset, PosetError> {
        Self::chain_product(&vec![2; n])
    }

    /// `Δ⁺` with `γ` covering `μ` iff `γ - μ` is simple; rank is the height.
    pub fn positive_root_poset(rs: &RootSystem) -> FinitePoset {
        let roots = rs.positive_roots();
        let mut covers = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            for j in 0..rs.rank() {
                if let Some(k) = rs.index_of(&r.add(&rs.simple_root(j))) {
                    covers.push((i, k));
                }
            }
        }
        FinitePoset::new(roots.len(), covers, roots.iter().map(|r| r.height()).collect()).expect("root poset")
    }

    /// Graphviz rendering of the Hasse diagram, one layer per rank.
    pub fn to_dot(&self, name: &str, labels: &[String]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        let _ = writeln!(s, "  rankdir=BT;");
        let _ = writeln!(s, "  node [shape=circle, fontsize=10];");
        let mut levels: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for x in 0..self.size {
            levels.entry(self.rank[x]).or_default().push(x);
        }
        for x in 0..self.size {
            let label = labels.get(x).cloned().unwrap_or_else(|| x.to_string());
            let _ = writeln!(s, "  n{x} [label=\"{label}\"];");
        }
        for (r, xs) in &levels {
            let names: Vec<String> = xs.iter().map(|x| format!("n{x}")).collect();
            let _ = writeln!(s, "  {{ rank=same; {} }} // rank {r}", names.join("; "));
        }
        for &(x, y) in &self.covers {
            let _ = writeln!(s, "  n{x} -> n{y};");
        }
        s.push_str("}\n");
        s
    }
}

/// Depth-first include/exclude search over a top-down linear extension.
///
/// An element may be included only when all of its upper covers already are,
/// so every branch is an upper ideal and no ideal is produced twice.
pub struct UpperIdeals<'a> {
    poset: &'a FinitePoset,
    stack: Vec<(usize, BitSet)>,
}

impl Iterator for UpperIdeals<'_> {
    type Item = BitSet;

    fn next(&mut self) -> Option<BitSet> {
        let p = self.poset;
        while let Some((pos, set)) = self.stack.pop() {
            if pos == p.size {
                return Some(set);
            }
            let x = p.top_down[pos];
            self.stack.push((pos + 1, set));
            if p.up[x].is_subset(&set) {
                self.stack.push((pos + 1, set.with(x)));
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub level_sizes: Vec<usize>,
    pub symmetric: bool,
    pub unimodal: bool,
    pub sperner: bool,
    pub unique_max_level: bool,
    pub max_antichain: usize,
}

/// Outcome of evaluating `∏ (1 - t^{r+1}) / (1 - t^r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductFormula {
    Polynomial(IntPoly),
    /// The rational function is not a polynomial: `numerator = quotient * denominator + remainder`
    /// after cancelling common factors.
    NotPolynomial { numerator: IntPoly, denominator: IntPoly, quotient: IntPoly, remainder: IntPoly },
}

impl ProductFormula {
    pub fn polynomial(&self) -> Option<&IntPoly> {
        match self {
            ProductFormula::Polynomial(p) => Some(p),
            ProductFormula::NotPolynomial { .. } => None,
        }
    }
}

/// `∏_i (1 - t^{num_i}) / ∏_j (1 - t^{den_j})` with common factors cancelled first.
pub fn cyclotomic_ratio(num: &[usize], den: &[usize]) -> ProductFormula {
    let mut balance: BTreeMap<usize, i64> = BTreeMap::new();
    for &k in num {
        *balance.entry(k).or_default() += 1;
    }
    for &k in den {
        *balance.entry(k).or_default() -= 1;
    }
    let mut numerator = IntPoly::one();
    let mut denominator = IntPoly::one();
    for (&k, &e) in &balance {
        let f = IntPoly::one_minus_t_pow(k);
        if e > 0 {
            numerator = &numerator * &f.pow(e as u32);
        } else if e < 0 {
            denominator = &denominator * &f.pow((-e) as u32);
        }
    }
    let (quotient, remainder) = numerator.div_rem(&denominator);
    if remainder.is_zero() {
        ProductFormula::Polynomial(quotient)
    } else {
        ProductFormula::NotPolynomial { numerator, denominator, quotient, remainder }
    }
}

/// `∏_{r ∈ ranks} (1 - t^{r+1}) / (1 - t^r)`.
pub fn product_formula(ranks: &[u32]) -> ProductFormula {
    assert!(ranks.iter().all(|&r| r > 0), "ranks must be positive");
    let num: Vec<usize> = ranks.iter().map(|&r| r as usize + 1).collect();
    let den: Vec<usize> = ranks.iter().map(|&r| r as usize).collect();
    cyclotomic_ratio(&num, &den)
}

/// `∏ (r+1)/r`, the formal value at `t = 1`.
pub fn product_formula_at_one(ranks: &[u32]) -> Ratio<i128> {
    ranks.iter().fold(Ratio::from_integer(1), |acc, &r| acc * Ratio::new(r as i128 + 1, r as i128))
}

fn q_factorial(r: usize) -> Vec<usize> {
    (1..=r).collect()
}

/// MacMahon's generating function for plane partitions in a `k × m × n` box,
/// `(t)_1⋯(t)_{k-1} (t)_{m+n}⋯(t)_{m+n+k-1} / ((t)_m⋯(t)_{m+k-1} (t)_n⋯(t)_{n+k-1})`
/// with `(t)_r = (1-t)(1-t²)⋯(1-t^r)`.
pub fn macmahon(k: usize, m: usize, n: usize) -> IntPoly {
    assert!(k > 0 && m > 0 && n > 0, "box sides must be positive");
    let mut num = Vec::new();
    let mut den = Vec::new();
    for r in 1..k {
        num.extend(q_factorial(r));
    }
    for r in (m + n)..(m + n + k) {
        num.extend(q_factorial(r));
    }
    for r in m..(m + k) {
        den.extend(q_factorial(r));
    }
    for r in n..(n + k) {
        den.extend(q_factorial(r));
    }
    match cyclotomic_ratio(&num, &den) {
        ProductFormula::Polynomial(p) => p,
        ProductFormula::NotPolynomial { .. } => unreachable!("MacMahon's formula is a polynomial"),
    }
}

/// Structural fingerprint of an element used to prune isomorphism search.
fn signature(p: &FinitePoset, comp_min_rank: &[i32], x: usize) -> (usize, usize, i32, usize, usize) {
    (p.down[x].len(), p.up[x].len(), p.rank[x] - comp_min_rank[x], p.below[x].len(), p.above[x].len())
}

fn component_min_ranks(p: &FinitePoset) -> Vec<i32> {
    let mut out = vec![0; p.size];
    for comp in p.components() {
        let lo = comp.iter().map(|&x| p.rank[x]).min().unwrap();
        for x in comp {
            out[x] = lo;
        }
    }
    out
}

/// Checks that `map` is a bijection carrying the covers of `p` exactly onto the covers of `q`.
pub fn is_cover_isomorphism(p: &FinitePoset, q: &FinitePoset, map: &[usize]) -> bool {
    if p.size != q.size || map.len() != p.size {
        return false;
    }
    let image: BitSet = map.iter().copied().filter(|&y| y < q.size).collect();
    if image.len() != p.size {
        return false;
    }
    let mut mapped: Vec<(usize, usize)> = p.covers.iter().map(|&(a, b)| (map[a], map[b])).collect();
    mapped.sort_unstable();
    mapped == q.covers
}

/// Decide whether `p ≅ q`. With a hint, only the given map is checked;
/// otherwise a backtracking search pairs elements with equal signatures,
/// extending along the Hasse diagram so that constraints propagate early.
pub fn isomorphic(p: &FinitePoset, q: &FinitePoset, hint: Option<&[usize]>) -> bool {
    if let Some(map) = hint {
        return is_cover_isomorphism(p, q, map);
    }
    find_isomorphism(p, q).is_some()
}

pub fn find_isomorphism(p: &FinitePoset, q: &FinitePoset) -> Option<Vec<usize>> {
    if p.size != q.size || p.covers.len() != q.covers.len() {
        return None;
    }
    let (pm, qm) = (component_min_ranks(p), component_min_ranks(q));
    let psig: Vec<_> = (0..p.size).map(|x| signature(p, &pm, x)).collect();
    let qsig: Vec<_> = (0..q.size).map(|x| signature(q, &qm, x)).collect();
    let mut a = psig.clone();
    let mut b = qsig.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    // Visit order: breadth-first through each component.
    let mut order = Vec::with_capacity(p.size);
    for comp in p.components() {
        let mut seen = BitSet::singleton(comp[0]);
        let mut queue = vec![comp[0]];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for y in p.up[x].union(&p.down[x]).iter() {
                if !seen.contains(y) {
                    seen.insert(y);
                    queue.push(y);
                }
            }
            i += 1;
        }
        order.extend(queue);
    }
    let mut map = vec![usize::MAX; p.size];
    let mut used = BitSet::new();
    if extend(p, q, &psig, &qsig, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    p: &FinitePoset,
    q: &FinitePoset,
    psig: &[(usize, usize, i32, usize, usize)],
    qsig: &[(usize, usize, i32, usize, usize)],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut BitSet,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    // Prefer candidates adjacent to an already mapped neighbour.
    let anchor = p.up[x].union(&p.down[x]).iter().find(|&y| map[y] != usize::MAX);
    let candidates: Vec<usize> = match anchor {
        Some(y) => q.up[map[y]].union(&q.down[map[y]]).iter().collect(),
        None => (0..q.size).collect(),
    };
    for c in candidates {
        if used.contains(c) || psig[x] != qsig[c] {
            continue;
        }
        let consistent = p.up[x].iter().chain(p.down[x].iter()).all(|y| {
            let my = map[y];
            my == usize::MAX || (p.up[x].contains(y) == q.up[c].contains(my) && p.down[x].contains(y) == q.down[c].contains(my))
        }) && (0..p.size).filter(|&y| map[y] != usize::MAX).all(|y| {
            // non-neighbours must map to non-neighbours
            let adj_p = p.up[x].contains(y) || p.down[x].contains(y);
            let adj_q = q.up[c].contains(map[y]) || q.down[c].contains(map[y]);
            adj_p == adj_q
        });
        if !consistent {
            continue;
        }
        map[x] = c;
        used.insert(c);
        if extend(p, q, psig, qsig, order, depth + 1, map, used) {
            return true;
        }
        map[x] = usize::MAX;
        used.remove(c);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = DEFAULT_IDEAL_CAP;

    fn ints(c: &[i64]) -> IntPoly {
        IntPoly::from_ints(c)
    }

    /// Oracle: test every subset for upward closure.
    fn brute_force_upper_ideals(p: &FinitePoset) -> Vec<BitSet> {
        assert!(p.size() <= 20);
        let mut out: Vec<BitSet> = (0u64..1 << p.size())
            .map(|mask| (0..p.size()).filter(|i| mask >> i & 1 == 1).collect::<BitSet>())
            .filter(|s| s.iter().all(|x| (0..p.size()).all(|y| !p.le(x, y) || s.contains(y))))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(FinitePoset::new(2, vec![(0, 1)], vec![1]), Err(PosetError::RankLength { .. })));
        assert!(matches!(FinitePoset::new(2, vec![(0, 2)], vec![1, 2]), Err(PosetError::CoverOutOfRange(0, 2))));
        assert!(matches!(FinitePoset::new(2, vec![(0, 1)], vec![1, 3]), Err(PosetError::RankMismatch { .. })));
        assert!(matches!(FinitePoset::new(2, vec![(0, 1), (0, 1)], vec![1, 2]), Err(PosetError::DuplicateCover(0, 1))));
        assert!(matches!(FinitePoset::new(300, vec![], vec![1; 300]), Err(PosetError::TooLarge(300))));
    }

    #[test]
    fn empty_poset_has_one_ideal() {
        let p = FinitePoset::new(0, vec![], vec![]).unwrap();
        assert_eq!(p.upper_ideals(CAP).unwrap(), vec![BitSet::new()]);
        assert_eq!(p.m_polynomial(CAP).unwrap(), IntPoly::one());
    }

    #[test]
    fn chain_ideals() {
        for n in 1..8 {
            assert_eq!(FinitePoset::chain(n).upper_ideals(CAP).unwrap().len(), n + 1);
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let posets = [
            FinitePoset::chain_product(&[2, 3]).unwrap(),
            FinitePoset::boolean_algebra(3).unwrap(),
            FinitePoset::positive_root_poset(&RootSystem::parse("B3").unwrap()),
            FinitePoset::chain(3).disjoint_union(&FinitePoset::chain_product(&[2, 2]).unwrap()).unwrap(),
        ];
        for p in &posets {
            let mut got = p.upper_ideals(CAP).unwrap();
            got.sort();
            assert_eq!(got, brute_force_upper_ideals(p));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let b4 = FinitePoset::boolean_algebra(4).unwrap();
        assert_eq!(b4.upper_ideals(100), Err(PosetError::CapExceeded(100)));
        assert!(b4.polynomials(167).is_err());
        assert!(b4.polynomials(168).is_ok());
    }

    #[test]
    fn ideal_antichain_round_trip() {
        let p = FinitePoset::chain_product(&[2, 3]).unwrap();
        let ideals = p.upper_ideals(CAP).unwrap();
        assert_eq!(ideals.len(), 10);
        for i in &ideals {
            let a = p.antichain_of_ideal(i).unwrap();
            assert!(p.is_antichain(&a));
            assert_eq!(&p.ideal_of_antichain(&a).unwrap(), i);
        }
        assert_eq!(p.antichain_of_ideal(&p.elements()).unwrap(), p.minimal_elements());
        assert_eq!(p.ideal_of_antichain(&BitSet::new()).unwrap(), BitSet::new());
        assert!(p.antichain_of_ideal(&BitSet::singleton(0)).is_err());
        assert!(p.ideal_of_antichain(&p.elements()).is_err());
    }

    #[test]
    fn grid_polynomials() {
        let p = FinitePoset::chain_product(&[2, 2]).unwrap();
        let (m, n) = p.polynomials(CAP).unwrap();
        assert_eq!(m, ints(&[1, 1, 2, 1, 1]));
        assert_eq!(n, ints(&[1, 4, 1]));
    }

    #[test]
    fn boolean_cube_polynomials() {
        let b4 = FinitePoset::boolean_algebra(4).unwrap();
        let (m, n) = b4.polynomials(CAP).unwrap();
        assert_eq!(m.eval(1), 168);
        assert_eq!(n, ints(&[1, 16, 55, 64, 25, 6, 1]));
        let prof = b4.rank_profile(CAP).unwrap();
        assert_eq!(prof.level_sizes, vec![1, 4, 6, 4, 1]);
        assert!(prof.unique_max_level && prof.symmetric && prof.unimodal && prof.sperner);
        assert_eq!(FinitePoset::boolean_algebra(3).unwrap().m_polynomial(CAP).unwrap().eval(1), 20);
    }

    #[test]
    fn chain_profile() {
        let prof = FinitePoset::chain(5).rank_profile(CAP).unwrap();
        assert_eq!(prof.level_sizes, vec![1; 5]);
        assert!(!prof.unique_max_level);
    }

    #[test]
    fn product_formula_cases() {
        assert_eq!(product_formula(&[1, 2, 2, 3]), ProductFormula::Polynomial(ints(&[1, 1, 2, 1, 1])));
        let mut b4 = vec![1];
        b4.extend([2; 4]);
        b4.extend([3; 6]);
        b4.extend([4; 4]);
        b4.push(5);
        assert!(matches!(product_formula(&b4), ProductFormula::NotPolynomial { .. }));
        assert_eq!(product_formula_at_one(&b4), Ratio::new(500, 3));
    }

    #[test]
    fn catalan_via_exponents() {
        // ∏ (h + m_i + 1)/(m_i + 1) for A3: h = 4, exponents 1,2,3
        let a3 = RootSystem::parse("A3").unwrap();
        let num: Vec<usize> = a3.exponents().iter().map(|m| a3.h() + m + 1).collect();
        let den: Vec<usize> = a3.exponents().iter().map(|m| m + 1).collect();
        let p = cyclotomic_ratio(&num, &den);
        assert_eq!(p.polynomial().unwrap().eval(1), 14);
    }

    #[test]
    fn macmahon_small_cases() {
        for n in 1..6 {
            assert_eq!(macmahon(1, 1, n), IntPoly::t_integer(n + 1));
        }
        assert_eq!(macmahon(2, 2, 2).eval(1), 20);
        assert_eq!(macmahon(2, 2, 2), FinitePoset::boolean_algebra(3).unwrap().m_polynomial(CAP).unwrap());
    }

    #[test]
    fn disjoint_union_multiplicativity() {
        let p = FinitePoset::chain_product(&[2, 3]).unwrap();
        let q = FinitePoset::boolean_algebra(3).unwrap();
        let u = p.disjoint_union(&q).unwrap();
        let (mp, np) = p.polynomials(CAP).unwrap();
        let (mq, nq) = q.polynomials(CAP).unwrap();
        let (mu, nu) = u.polynomials(CAP).unwrap();
        assert_eq!(mu, &mp * &mq);
        assert_eq!(nu, &np * &nq);
        assert_eq!(u.components().len(), 2);
    }

    #[test]
    fn isomorphisms() {
        let a = FinitePoset::chain_product(&[2, 3]).unwrap();
        let b = FinitePoset::chain_product(&[3, 2]).unwrap();
        assert!(isomorphic(&a, &b, None));
        assert!(!isomorphic(&FinitePoset::chain(2), &FinitePoset::antichain_poset(2), None));
        let c2 = FinitePoset::chain(2);
        assert!(isomorphic(&c2.product(&FinitePoset::chain(3)).unwrap(), &a, None));
        // identity hint on itself, swapped hint rejected
        let id: Vec<usize> = (0..a.size()).collect();
        assert!(isomorphic(&a, &a, Some(&id)));
        let mut bad = id.clone();
        bad.swap(0, 5);
        assert!(!isomorphic(&a, &a, Some(&bad)));
        assert!(!isomorphic(&FinitePoset::chain_product(&[2, 4]).unwrap(), &FinitePoset::chain_product(&[2, 2, 2]).unwrap(), None));
    }

    #[test]
    fn positive_root_poset_extremes() {
        let a3 = RootSystem::parse("A3").unwrap();
        let p = FinitePoset::positive_root_poset(&a3);
        assert_eq!(p.minimal_elements().to_vec(), vec![0, 1, 2]);
        assert_eq!(p.maximal_elements().to_vec(), vec![a3.theta_index()]);
        assert_eq!(p.upper_ideals(CAP).unwrap().len(), 14);
    }

    #[test]
    fn dot_has_layers_and_edges() {
        let p = FinitePoset::chain_product(&[2, 2]).unwrap();
        let dot = p.to_dot("grid", &[]);
        assert_eq!(dot.matches(" -> ").count(), 4);
        assert_eq!(dot.matches("rank=same").count(), 3);
    }

    #[test]
    fn file_round_trip() {
        let p = FinitePoset::boolean_algebra(3).unwrap();
        let json = serde_json::to_string(&p.to_file()).unwrap();
        let back: PosetFile = serde_json::from_str(&json).unwrap();
        let q = FinitePoset::from_file(&back).unwrap();
        assert_eq!(q.covers(), p.covers());
        assert_eq!(q.ranks(), p.ranks());
    }
}
