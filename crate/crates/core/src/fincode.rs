//! The coding `α ↦ L_α` of ordinals by finite sets of ordinals.
//!
//! `L_α` is the exponent set of α's base-2 normal form. The coding turns the
//! ordinals into a lattice under formal inclusion `⊑`, and that lattice is
//! what partial sums, cones and the `D(η)` sets are built on.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ordinal::{Ordinal, Universe};

/// A finite set of ordinals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FinOrdSet(BTreeSet<Ordinal>);

impl FinOrdSet {
    pub fn new() -> Self {
        FinOrdSet::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &Ordinal) -> bool {
        self.0.contains(a)
    }

    pub fn insert(&mut self, a: Ordinal) -> bool {
        self.0.insert(a)
    }

    /// Ascending order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Ordinal> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &FinOrdSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &FinOrdSet) -> FinOrdSet {
        FinOrdSet(self.0.union(&other.0).cloned().collect())
    }
}

impl FromIterator<Ordinal> for FinOrdSet {
    fn from_iter<I: IntoIterator<Item = Ordinal>>(iter: I) -> Self {
        FinOrdSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FinOrdSet {
    type Item = &'a Ordinal;
    type IntoIter = std::collections::btree_set::Iter<'a, Ordinal>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Renders in descending order, e.g. `{w, 3, 1}`.
impl fmt::Display for FinOrdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinOrdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `L_α`.
pub fn decode(a: &Ordinal) -> FinOrdSet {
    a.exponents().into_iter().collect()
}

/// `Σ_{γ∈S} 2^γ`.
pub fn encode(s: &FinOrdSet) -> Result<Ordinal> {
    Ordinal::from_exponents(s.iter())
}

/// `α ⊑ β`.
pub fn formal_subset(a: &Ordinal, b: &Ordinal) -> bool {
    a.formal_le(b)
}

/// `α ⊏ β`.
pub fn formal_strict_subset(a: &Ordinal, b: &Ordinal) -> bool {
    a != b && a.formal_le(b)
}

/// `α ⊲ β`.
pub fn formal_member(a: &Ordinal, b: &Ordinal) -> bool {
    a.formal_in(b)
}

/// `α ∨ β`.
pub fn join(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.join(b)
}

/// `α ∧ β`.
pub fn meet(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.meet(b)
}

/// `2^{η·2}·α + 2^η·ξ + ξ`, the generic element of `D(η)`.
pub fn d_element(eta: &Ordinal, alpha: &Ordinal, xi: &Ordinal) -> Result<Ordinal> {
    let eta2 = eta.ord_sum(eta)?;
    let top = Ordinal::shift_mul(&eta2, alpha)?;
    let mid = Ordinal::shift_mul(eta, xi)?;
    top.ord_sum(&mid)?.ord_sum(xi)
}

/// Decides one instance of criterion (C):
/// `2^θ·α + β ⊑ δ  ⇔  2^θ·α ⊑ δ ∧ β ⊑ δ`, for `β < 2^θ`.
pub fn criterion_c(theta: &Ordinal, alpha: &Ordinal, beta: &Ordinal, delta: &Ordinal) -> Result<bool> {
    if beta >= &theta.pow2()? {
        return Err(Error::precondition(format!("{beta} is not below 2^({theta})")));
    }
    let head = Ordinal::shift_mul(theta, alpha)?;
    let lhs = head.ord_sum(beta)?.formal_le(delta);
    let rhs = head.formal_le(delta) && beta.formal_le(delta);
    Ok(lhs == rhs)
}

/// Decides one instance of criterion (D): with `δ = 2^{η·2}·α + 2^η·ξ + ξ`,
/// `2^η·γ + β ⊑ δ  ⇔  γ ⊑ δ ∧ β ⊑ δ`, for `β, γ, ξ < 2^η`.
pub fn criterion_d(
    eta: &Ordinal,
    alpha: &Ordinal,
    xi: &Ordinal,
    gamma: &Ordinal,
    beta: &Ordinal,
) -> Result<bool> {
    let cap = eta.pow2()?;
    for (name, v) in [("beta", beta), ("gamma", gamma), ("xi", xi)] {
        if v >= &cap {
            return Err(Error::precondition(format!("{name} = {v} is not below 2^({eta})")));
        }
    }
    let delta = d_element(eta, alpha, xi)?;
    let lhs = Ordinal::shift_mul(eta, gamma)?.ord_sum(beta)?.formal_le(&delta);
    let rhs = gamma.formal_le(&delta) && beta.formal_le(&delta);
    Ok(lhs == rhs)
}

/// Generators of the cone filter and of the superfine filter base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FilterBaseSet {
    /// `C(θ) = {δ : θ ⊑ δ}`.
    Cone(Ordinal),
    /// `D(η)`.
    D(Ordinal),
    /// `D(η, θ) = D(η) ∩ C(θ)`.
    DCone(Ordinal, Ordinal),
}

impl fmt::Display for FilterBaseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterBaseSet::Cone(t) => write!(f, "C({t})"),
            FilterBaseSet::D(e) => write!(f, "D({e})"),
            FilterBaseSet::DCone(e, t) => write!(f, "D({e}, {t})"),
        }
    }
}

/// `δ ∈ D(η)`: `δ` splits as `2^{η·2}·α + 2^η·ξ + ξ` for some `ξ < 2^η`.
pub fn in_d(eta: &Ordinal, delta: &Ordinal) -> Result<bool> {
    let eta2 = eta.ord_sum(eta)?;
    let (_, rest) = delta.split(&eta2)?;
    let (mid, low) = rest.split(eta)?;
    Ok(mid == low)
}

pub fn in_filter_base(s: &FilterBaseSet, delta: &Ordinal) -> Result<bool> {
    match s {
        FilterBaseSet::Cone(theta) => Ok(theta.formal_le(delta)),
        FilterBaseSet::D(eta) => in_d(eta, delta),
        FilterBaseSet::DCone(eta, theta) => Ok(theta.formal_le(delta) && in_d(eta, delta)?),
    }
}

/// A constructive common element of a finite family of filter-base sets:
/// start from the join of all cone parameters and close the exponent set
/// under the `D(η)` mirror `x ↔ η + x` for `x < η`.
pub fn solve_filter_base(sets: &[FilterBaseSet], universe: &Universe) -> Result<Ordinal> {
    let mut seed = Ordinal::zero();
    let mut etas = Vec::new();
    for s in sets {
        match s {
            FilterBaseSet::Cone(t) => seed = seed.join(t),
            FilterBaseSet::D(e) => etas.push(e.clone()),
            FilterBaseSet::DCone(e, t) => {
                seed = seed.join(t);
                etas.push(e.clone());
            }
        }
    }
    let mut elems: BTreeSet<Ordinal> = seed.exponents().into_iter().collect();
    let bounds = etas
        .iter()
        .map(|e| Ok((e.clone(), e.ord_sum(e)?)))
        .collect::<Result<Vec<_>>>()?;
    let cap = universe.exponent_cap.max(64) * 64;
    let mut work: Vec<Ordinal> = elems.iter().cloned().collect();
    while let Some(x) = work.pop() {
        for (eta, eta2) in &bounds {
            let image = if &x < eta {
                eta.ord_sum(&x)?
            } else if &x < eta2 {
                eta.left_sub(&x)?
            } else {
                continue;
            };
            if elems.insert(image.clone()) {
                work.push(image);
            }
        }
        universe.charge(bounds.len() as u128, "filter-base closure")?;
        if elems.len() > cap {
            return Err(Error::budget(format!(
                "filter-base closure exceeds {cap} exponents; the sets may have empty intersection"
            )));
        }
    }
    let delta = Ordinal::from_exponents(&elems)?;
    debug_assert!(sets.iter().all(|s| in_filter_base(s, &delta).unwrap_or(false)));
    Ok(delta)
}

/// Codes over a finite exponent set `E`, indexed by bitmask: bit `i` of the
/// mask selects the `i`-th smallest element of `E`. Mask order coincides
/// with ordinal order and mask inclusion with `⊑`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpace {
    elems: Vec<Ordinal>,
    singles: Vec<Ordinal>,
}

impl CodeSpace {
    pub fn new(e: &FinOrdSet, universe: &Universe) -> Result<Self> {
        universe.check_subsets(e.len(), "code space")?;
        let elems: Vec<Ordinal> = e.iter().cloned().collect();
        let singles = elems.iter().map(|x| x.pow2()).collect::<Result<Vec<_>>>()?;
        Ok(CodeSpace { elems, singles })
    }

    /// `|E|`.
    pub fn rank(&self) -> usize {
        self.elems.len()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.elems.len()
    }

    pub fn elements(&self) -> &[Ordinal] {
        &self.elems
    }

    pub fn code(&self, mask: u64) -> Ordinal {
        let mut out = Ordinal::zero();
        for (i, s) in self.singles.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out = out.join(s);
            }
        }
        out
    }

    /// Inverse of [`CodeSpace::code`]; `None` if `a` uses exponents outside `E`.
    pub fn mask_of(&self, a: &Ordinal) -> Option<u64> {
        let mut mask = 0u64;
        for e in a.exponents() {
            mask |= 1 << self.elems.binary_search(&e).ok()?;
        }
        Some(mask)
    }

    pub fn iter(&self) -> impl Iterator<Item = Ordinal> + '_ {
        (0..self.size()).map(|m| self.code(m))
    }
}

/// All `2^{|E|}` codes `α` with `L_α ⊆ E`, increasing.
pub fn enumerate_universe(e: &FinOrdSet, universe: &Universe) -> Result<Vec<Ordinal>> {
    Ok(CodeSpace::new(e, universe)?.iter().collect())
}

/// `{α : L_α ⊆ X}` restricted to the codes over `E`.
pub fn hat(x: impl Fn(&Ordinal) -> bool, e: &FinOrdSet, universe: &Universe) -> Result<Vec<Ordinal>> {
    let inside: FinOrdSet = e.iter().filter(|a| x(a)).cloned().collect();
    enumerate_universe(&inside, universe)
}

/// `δ_0 ⊏ δ_1 ⊏ …` with `L_{δ_n}` the `n` smallest elements of `E`.
pub fn cofinal_chain(e: &FinOrdSet, universe: &Universe) -> Result<Vec<Ordinal>> {
    let space = CodeSpace::new(e, universe)?;
    Ok((0..=space.rank()).map(|k| space.code((1u64 << k) - 1)).collect())
}

/// `|{γ ⊑ δ : γ < β}|`.
///
/// `γ < β` iff the largest element of `L_γ △ L_β` lies in `L_β`; grouping by
/// that element gives `Σ_i [b_1, …, b_{i-1} ∈ L_δ] · 2^{|L_δ ∩ b_i|}` over the
/// exponents `b_1 > b_2 > …` of `β`.
pub fn count_below(beta: &Ordinal, delta: &Ordinal) -> BigUint {
    let mut total = BigUint::zero();
    for b in beta.exponents() {
        total += BigUint::one() << delta.exponents_below(&b);
        if !b.formal_in(delta) {
            break;
        }
    }
    total
}

/// `|[lo, hi) ∩ δ̂|` where `δ̂ = {γ : γ ⊑ δ}`.
pub fn count_in(lo: &Ordinal, hi: &Ordinal, delta: &Ordinal) -> BigUint {
    if lo >= hi {
        return BigUint::zero();
    }
    count_below(hi, delta) - count_below(lo, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }
    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn set(xs: &[Ordinal]) -> FinOrdSet {
        xs.iter().cloned().collect()
    }

    #[test]
    fn decode_examples() {
        assert!(decode(&n(0)).is_empty());
        assert_eq!(decode(&n(6)), set(&[n(2), n(1)]));
        assert_eq!(decode(&w()), set(&[w()]));
        assert_eq!(decode(&w()).to_string(), "{w}");
        assert_eq!(encode(&set(&[w(), n(0)])).unwrap(), w().succ().unwrap());
    }

    #[test]
    fn formal_relations() {
        assert!(formal_subset(&n(0), &w()));
        assert!(!formal_subset(&n(5), &n(6)));
        assert!(formal_member(&n(2), &n(6)));
        assert!(!formal_member(&n(0), &n(6)));
        assert!(formal_member(&w(), &w()));
        assert!(formal_strict_subset(&n(2), &n(6)));
        assert!(!formal_strict_subset(&n(6), &n(6)));
    }

    #[test]
    fn join_meet_examples() {
        assert_eq!(join(&n(5), &n(6)), n(7));
        assert_eq!(meet(&n(5), &n(6)), n(4));
        assert_eq!(join(&w(), &n(1)), w().succ().unwrap());
        let a = w().ord_mul(&n(3)).unwrap();
        assert_eq!(join(&a, &a), a);
    }

    #[test]
    fn criteria_small_instances() {
        assert!(criterion_c(&n(4), &n(0), &n(0), &n(0)).unwrap());
        assert!(criterion_c(&n(0), &n(0), &n(1), &n(0)).is_err());
        let eta = n(2);
        let xi = n(3);
        for gamma in 0..4 {
            for beta in 0..4 {
                assert!(criterion_d(&eta, &n(1), &xi, &n(gamma), &n(beta)).unwrap());
            }
        }
        assert!(criterion_d(&eta, &n(1), &n(4), &n(0), &n(0)).is_err());
    }

    #[test]
    fn filter_base_membership() {
        assert!(in_filter_base(&FilterBaseSet::Cone(n(0)), &n(123)).unwrap());
        assert!(in_filter_base(&FilterBaseSet::D(n(1)), &n(7)).unwrap());
        assert!(!in_filter_base(&FilterBaseSet::D(n(1)), &n(5)).unwrap());
        assert!(in_filter_base(&FilterBaseSet::Cone(n(6)), &n(7)).unwrap());
        assert!(!in_filter_base(&FilterBaseSet::Cone(n(6)), &n(5)).unwrap());
        // δ = 2^{ω·2} + 2^ω·3 + 3 lies in D(ω)
        let d = d_element(&w(), &n(1), &n(3)).unwrap();
        assert!(in_d(&w(), &d).unwrap());
        assert!(!in_d(&w(), &d.join(&n(4))).unwrap());
    }

    #[test]
    fn solver_finds_common_elements() {
        let u = Universe::default();
        let fam = vec![
            FilterBaseSet::Cone(n(5)),
            FilterBaseSet::D(n(1)),
            FilterBaseSet::D(n(2)),
            FilterBaseSet::DCone(w(), n(8)),
        ];
        let d = solve_filter_base(&fam, &u).unwrap();
        for s in &fam {
            assert!(in_filter_base(s, &d).unwrap(), "{s} misses {d}");
        }
    }

    #[test]
    fn universes_and_chains() {
        let u = Universe::default();
        assert_eq!(enumerate_universe(&FinOrdSet::new(), &u).unwrap(), vec![n(0)]);
        assert_eq!(
            enumerate_universe(&set(&[n(1), n(0)]), &u).unwrap(),
            vec![n(0), n(1), n(2), n(3)]
        );
        let finite = hat(|a| a < &w(), &set(&[w(), n(0)]), &u).unwrap();
        assert_eq!(finite, vec![n(0), n(1)]);
        assert_eq!(cofinal_chain(&set(&[n(1), n(0)]), &u).unwrap(), vec![n(0), n(1), n(3)]);
        assert_eq!(cofinal_chain(&FinOrdSet::new(), &u).unwrap(), vec![n(0)]);
        assert_eq!(cofinal_chain(&set(&[w()]), &u).unwrap(), vec![n(0), w()]);
        let big: FinOrdSet = (0..30).map(n).collect();
        assert!(matches!(enumerate_universe(&big, &u), Err(Error::Budget(_))));
    }

    #[test]
    fn prefix_counts_match_enumeration() {
        let u = Universe::default();
        let e = set(&[n(0), n(1), n(3), w(), w().succ().unwrap()]);
        let space = CodeSpace::new(&e, &u).unwrap();
        let probes = [n(0), n(1), n(5), n(9), w(), w().succ().unwrap(), w().ord_mul(&n(2)).unwrap()];
        for delta in space.iter() {
            let below: Vec<Ordinal> = enumerate_universe(&decode(&delta), &u).unwrap();
            for beta in &probes {
                let brute = below.iter().filter(|g| *g < beta).count();
                assert_eq!(count_below(beta, &delta), BigUint::from(brute), "β={beta} δ={delta}");
            }
        }
    }
}
