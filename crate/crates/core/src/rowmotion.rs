//! The reverse operator `𝔛(Γ) = max(P ∖ I(Γ))` on antichains, its orbits,
//! and the structures it interacts with on weight posets: the duality
//! `I ↦ I*`, the factorization `𝔛 = w₀ ∘ ∗`, and Lagrangian ideals.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::grading::{GradingError, WeightPoset};
use crate::poset::{FinitePoset, PosetError};

/// Serializes an exact rational as `{"num": .., "den": ..}`.
pub fn serialize_ratio<S: Serializer>(r: &Ratio<i128>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Ratio", 2)?;
    st.serialize_field("num", r.numer())?;
    st.serialize_field("den", r.denom())?;
    st.end()
}

pub fn ratio_json(r: &Ratio<i128>) -> serde_json::Value {
    serde_json::json!({ "num": r.numer(), "den": r.denom() })
}

fn step_unchecked(p: &FinitePoset, gamma: &BitSet) -> BitSet {
    p.max_of(&p.elements().difference(&p.upper_closure(gamma)))
}

fn inverse_step_unchecked(p: &FinitePoset, gamma: &BitSet) -> BitSet {
    p.min_of(&p.elements().difference(&p.lower_closure(gamma)))
}

/// `𝔛(Γ) = max(P ∖ I(Γ))`.
pub fn step(p: &FinitePoset, gamma: &BitSet) -> Result<BitSet, PosetError> {
    if !gamma.is_subset(&p.elements()) || !p.is_antichain(gamma) {
        return Err(PosetError::NotAntichain(*gamma));
    }
    Ok(step_unchecked(p, gamma))
}

/// `𝔛⁻¹(Γ) = min(P ∖ I₋(Γ))`.
pub fn inverse_step(p: &FinitePoset, gamma: &BitSet) -> Result<BitSet, PosetError> {
    if !gamma.is_subset(&p.elements()) || !p.is_antichain(gamma) {
        return Err(PosetError::NotAntichain(*gamma));
    }
    Ok(inverse_step_unchecked(p, gamma))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitStats {
    pub size: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub avg_antichain_size: Ratio<i128>,
    #[serde(serialize_with = "serialize_ratio")]
    pub avg_ideal_size: Ratio<i128>,
    /// Number of Lagrangian upper ideals `I(Γ)` in the orbit; only for extra-special gradings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lagrangian_count: Option<usize>,
    /// The antichains `Γ, 𝔛(Γ), 𝔛²(Γ), …` of the orbit.
    #[serde(skip)]
    pub antichains: Vec<BitSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub num_antichains: usize,
    pub orbit_sizes: Vec<usize>,
    /// `ord(𝔛)`, the lcm of the orbit sizes.
    pub order: u64,
    pub per_orbit: Vec<OrbitStats>,
}

impl OrbitReport {
    /// Orbit sizes in non-increasing order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.orbit_sizes.clone();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Whether a statistic has the same average on every orbit.
    pub fn antichain_homomesic(&self) -> bool {
        self.per_orbit.windows(2).all(|w| w[0].avg_antichain_size == w[1].avg_antichain_size)
    }

    pub fn ideal_homomesic(&self) -> bool {
        self.per_orbit.windows(2).all(|w| w[0].avg_ideal_size == w[1].avg_ideal_size)
    }

    /// The orbit containing a given antichain.
    pub fn orbit_of(&self, gamma: &BitSet) -> Option<&OrbitStats> {
        self.per_orbit.iter().find(|o| o.antichains.contains(gamma))
    }

    /// Per-orbit listings as JSON, with 0-based element indices.
    pub fn verbose_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        let listings: Vec<Vec<Vec<usize>>> =
            self.per_orbit.iter().map(|o| o.antichains.iter().map(|a| a.to_vec()).collect()).collect();
        for (o, l) in v["per_orbit"].as_array_mut().unwrap().iter_mut().zip(listings) {
            o["antichains"] = serde_json::json!(l);
        }
        v
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Orbit decomposition of `𝔛` on all antichains, iterating from unvisited
/// antichains in enumeration order.
pub fn orbits(p: &FinitePoset, cap: usize) -> Result<OrbitReport, PosetError> {
    orbits_with(p, cap, None)
}

/// As [`orbits`], counting the ideals `I(Γ)` that satisfy `lagrangian`.
pub fn orbits_with(
    p: &FinitePoset,
    cap: usize,
    lagrangian: Option<&dyn Fn(&BitSet) -> bool>,
) -> Result<OrbitReport, PosetError> {
    let antichains = p.antichains(cap)?;
    let mut seen: HashMap<BitSet, ()> = HashMap::with_capacity(antichains.len());
    let mut per_orbit = Vec::new();
    for start in &antichains {
        if seen.contains_key(start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = *start;
        loop {
            seen.insert(cur, ());
            orbit.push(cur);
            cur = step_unchecked(p, &cur);
            if cur == *start {
                break;
            }
        }
        let size = orbit.len() as i128;
        let ideals: Vec<BitSet> = orbit.iter().map(|a| p.upper_closure(a)).collect();
        let sum_a: i128 = orbit.iter().map(|a| a.len() as i128).sum();
        let sum_i: i128 = ideals.iter().map(|i| i.len() as i128).sum();
        per_orbit.push(OrbitStats {
            size: orbit.len(),
            avg_antichain_size: Ratio::new(sum_a, size),
            avg_ideal_size: Ratio::new(sum_i, size),
            lagrangian_count: lagrangian.map(|f| ideals.iter().filter(|i| f(i)).count()),
            antichains: orbit,
        });
    }
    let orbit_sizes: Vec<usize> = per_orbit.iter().map(|o| o.size).collect();
    let order = orbit_sizes.iter().fold(1u64, |l, &s| l / gcd(l, s as u64) * s as u64);
    Ok(OrbitReport { num_antichains: antichains.len(), orbit_sizes, order, per_orbit })
}

/// `I* = Δ(1) ∖ w₀(I)`.
pub fn star_dual(wp: &WeightPoset, ideal: &BitSet) -> Result<BitSet, GradingError> {
    if !ideal.is_subset(&wp.poset.elements()) || !wp.poset.is_upper_ideal(ideal) {
        return Err(PosetError::NotUpperIdeal(*ideal).into());
    }
    Ok(wp.poset.elements().difference(&wp.apply_w0(ideal)))
}

/// Checks `𝔛(Γ) = w₀(min(I(Γ)*))` for every antichain.
pub fn factorization_check(wp: &WeightPoset, cap: usize) -> Result<bool, GradingError> {
    let p = &wp.poset;
    for gamma in p.antichains(cap)? {
        let dual = star_dual(wp, &p.upper_closure(&gamma))?;
        let rhs = wp.apply_w0(&p.min_of(&dual));
        if step_unchecked(p, &gamma) != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_extra_special(wp: &WeightPoset) -> Result<Vec<usize>, GradingError> {
    if !wp.grading.is_extra_special() {
        return Err(GradingError::NotExtraSpecial);
    }
    Ok(wp.theta_partner().into_iter().map(|p| p.expect("Δ(1) pairs up under γ ↦ θ - γ")).collect())
}

fn lagrangian_by_definition(wp: &WeightPoset, partner: &[usize], s: &BitSet) -> bool {
    let h_star = wp.grading.root_system().h_star();
    s.len() + 2 == h_star && s.iter().all(|x| !s.contains(partner[x]))
}

fn lagrangian_by_reflection(wp: &WeightPoset, partner: &[usize], s: &BitSet) -> bool {
    // −s_θ(γ) = θ − γ on Δ(1)
    let image: BitSet = s.iter().map(|x| partner[x]).collect();
    *s == wp.poset.elements().difference(&image)
}

/// A subset of `Δ(1)` of size `h* − 2` containing no pair summing to `θ`.
///
/// Panics if the two equivalent characterizations disagree.
pub fn is_lagrangian(wp: &WeightPoset, s: &BitSet) -> Result<bool, GradingError> {
    let partner = require_extra_special(wp)?;
    let a = lagrangian_by_definition(wp, &partner, s);
    let b = lagrangian_by_reflection(wp, &partner, s);
    assert_eq!(a, b, "Lagrangian characterizations disagree on {s:?}");
    Ok(a)
}

/// All Lagrangian upper ideals of an extra-special `Δ(1)`.
pub fn lagrangian_ideals(wp: &WeightPoset, cap: usize) -> Result<Vec<BitSet>, GradingError> {
    let partner = require_extra_special(wp)?;
    let mut out = Vec::new();
    for ideal in wp.poset.upper_ideals(cap)? {
        let a = lagrangian_by_definition(wp, &partner, &ideal);
        assert_eq!(a, lagrangian_by_reflection(wp, &partner, &ideal));
        if a {
            out.push(ideal);
        }
    }
    Ok(out)
}

/// Orbits of `𝔛` on `Δ(1)`, with Lagrangian counts for extra-special gradings.
pub fn weight_poset_orbits(wp: &WeightPoset, cap: usize) -> Result<OrbitReport, GradingError> {
    if wp.grading.is_extra_special() {
        let partner = require_extra_special(wp)?;
        let f = |i: &BitSet| lagrangian_by_definition(wp, &partner, i);
        Ok(orbits_with(&wp.poset, cap, Some(&f))?)
    } else {
        Ok(orbits(&wp.poset, cap)?)
    }
}
