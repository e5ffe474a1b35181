//! Two-colourings of `⊏`-ordered pairs over a finite universe of codes:
//! 0-chains, homogeneous sets, product partitions and finite-intersection
//! checks for filter-base families.
//!
//! Everything here is a finite shadow of an infinitary statement, so
//! negative answers only ever hold at the scale of the chosen universe.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fincode::{in_filter_base, solve_filter_base, CodeSpace, FilterBaseSet, FinOrdSet};
use crate::numerosity::{partial_count, PointSet};
use crate::ordinal::{Ordinal, Universe};

/// Largest universe a partition may live on.
pub const MAX_PARTITION_EXPONENTS: usize = 12;

/// `G: [codes over E]²_⊏ → {0, 1}`, stored densely by mask pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition2 {
    e: FinOrdSet,
    space: CodeSpace,
    bits: Vec<u64>,
}

/// Outcome of [`Partition2::homogeneous_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneous {
    /// A 1-homogeneous set containing a maximal `⊏`-chain, hence cofinal.
    Found { set: Vec<Ordinal>, color: u8 },
    /// No such set at this scale; the longest 0-chain is the obstruction.
    Obstruction { chain: Vec<Ordinal> },
}

fn is_strict_subset(a: u64, b: u64) -> bool {
    a != b && a & !b == 0
}

impl Partition2 {
    /// Colours every pair `a ⊏ b` (given as masks) by `f`.
    pub fn from_masks(e: &FinOrdSet, universe: &Universe, f: impl Fn(u64, u64) -> u8) -> Result<Self> {
        if e.len() > MAX_PARTITION_EXPONENTS {
            return Err(Error::budget(format!(
                "partition universe of {} exponents exceeds {MAX_PARTITION_EXPONENTS}",
                e.len()
            )));
        }
        let space = CodeSpace::new(e, universe)?;
        universe.charge(1u128 << (2 * space.rank()), "partition")?;
        let size = space.size();
        let mut bits = vec![0u64; ((size * size) as usize).div_ceil(64)];
        for b in 0..size {
            // proper submasks of b
            let mut a = b;
            while a != 0 {
                a = (a - 1) & b;
                if f(a, b) != 0 {
                    let i = (a * size + b) as usize;
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Partition2 { e: e.clone(), space, bits })
    }

    /// Colours every pair `α ⊏ β` by `f(α, β)`.
    pub fn from_fn(e: &FinOrdSet, universe: &Universe, f: impl Fn(&Ordinal, &Ordinal) -> u8) -> Result<Self> {
        let codes: Vec<Ordinal> = CodeSpace::new(e, universe)?.iter().collect();
        Self::from_masks(e, universe, |a, b| f(&codes[a as usize], &codes[b as usize]))
    }

    pub fn constant(e: &FinOrdSet, universe: &Universe, color: u8) -> Result<Self> {
        Self::from_masks(e, universe, |_, _| color)
    }

    /// `G_ψ(α, β) = 0` iff `ψ(α) > ψ(β)`.
    pub fn g_psi(psi: &BTreeMap<Ordinal, u64>, e: &FinOrdSet, universe: &Universe) -> Result<Self> {
        let space = CodeSpace::new(e, universe)?;
        let vals = space
            .iter()
            .map(|a| {
                psi.get(&a)
                    .copied()
                    .ok_or_else(|| Error::precondition(format!("psi undefined at {a}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Self::from_masks(e, universe, |a, b| u8::from(vals[a as usize] <= vals[b as usize]))
    }

    pub fn universe(&self) -> &FinOrdSet {
        &self.e
    }

    pub fn codes(&self) -> &CodeSpace {
        &self.space
    }

    /// The colour of `(a, b)` by mask; `None` unless `a ⊏ b`.
    pub fn color_mask(&self, a: u64, b: u64) -> Option<u8> {
        if !is_strict_subset(a, b) || b >= self.space.size() {
            return None;
        }
        let i = (a * self.space.size() + b) as usize;
        Some((self.bits[i / 64] >> (i % 64) & 1) as u8)
    }

    pub fn color(&self, a: &Ordinal, b: &Ordinal) -> Option<u8> {
        self.color_mask(self.space.mask_of(a)?, self.space.mask_of(b)?)
    }

    fn strict_pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let size = self.space.size();
        (0..size).flat_map(move |b| {
            let mut subs = Vec::new();
            let mut a = b;
            while a != 0 {
                a = (a - 1) & b;
                subs.push((a, b));
            }
            subs
        })
    }

    /// All pairs coloured 0, as masks.
    pub fn zero_pairs(&self) -> Vec<(u64, u64)> {
        self.strict_pairs().filter(|&(a, b)| self.color_mask(a, b) == Some(0)).collect()
    }

    /// For each mask, the longest 0-chain starting there and its successor.
    fn chain_table(&self, universe: &Universe) -> Result<(Vec<usize>, Vec<Option<u64>>)> {
        let n = self.space.rank() as u32;
        universe.charge(3u128.pow(n), "0-chain search")?;
        let size = self.space.size();
        let full = size - 1;
        let mut len = vec![1usize; size as usize];
        let mut next = vec![None; size as usize];
        for a in (0..size).rev() {
            // proper supersets of a
            let free = full & !a;
            let mut s = free;
            while s != 0 {
                let b = a | s;
                if self.color_mask(a, b) == Some(0) && len[b as usize] + 1 > len[a as usize] {
                    len[a as usize] = len[b as usize] + 1;
                    next[a as usize] = Some(b);
                }
                s = (s - 1) & free;
            }
        }
        Ok((len, next))
    }

    fn walk(&self, start: u64, next: &[Option<u64>], maxlen: usize) -> Vec<Ordinal> {
        let mut chain = vec![self.space.code(start)];
        let mut cur = start;
        while chain.len() < maxlen {
            let Some(b) = next[cur as usize] else { break };
            chain.push(self.space.code(b));
            cur = b;
        }
        chain
    }

    /// A 0-chain of exactly `maxlen` codes, first by code order of its
    /// start; `None` means none exists in this universe.
    pub fn find_zero_chain(&self, maxlen: usize, universe: &Universe) -> Result<Option<Vec<Ordinal>>> {
        if maxlen == 0 {
            return Ok(Some(Vec::new()));
        }
        let (len, next) = self.chain_table(universe)?;
        Ok((0..self.space.size())
            .find(|&a| len[a as usize] >= maxlen)
            .map(|a| self.walk(a, &next, maxlen)))
    }

    /// A longest 0-chain (a single code if there are no 0-pairs).
    pub fn longest_zero_chain(&self, universe: &Universe) -> Result<Vec<Ordinal>> {
        let (len, next) = self.chain_table(universe)?;
        let best = (0..self.space.size()).max_by_key(|&a| (len[a as usize], std::cmp::Reverse(a))).unwrap_or(0);
        Ok(self.walk(best, &next, usize::MAX))
    }

    /// Looks for a 1-homogeneous set that contains a maximal `⊏`-chain
    /// `0 ⊏ … ⊏ top` through every rank, so every code lies below a member.
    ///
    /// A greedy pass over codes in descending order comes first; if its
    /// result holds no full chain, maximal chains are searched exhaustively
    /// and the winner is extended greedily.
    pub fn homogeneous_search(&self, universe: &Universe) -> Result<Homogeneous> {
        let size = self.space.size();
        let compatible = |h: &[u64], c: u64| {
            h.iter().all(|&x| {
                if is_strict_subset(c, x) {
                    self.color_mask(c, x) == Some(1)
                } else if is_strict_subset(x, c) {
                    self.color_mask(x, c) == Some(1)
                } else {
                    true
                }
            })
        };
        let extend = |mut h: Vec<u64>| {
            for c in (0..size).rev() {
                if !h.contains(&c) && compatible(&h, c) {
                    h.push(c);
                }
            }
            h
        };
        let greedy = extend(Vec::new());
        let chosen = if self.has_full_chain(&greedy) {
            Some(greedy)
        } else {
            self.homogeneous_chain(universe)?.map(extend)
        };
        Ok(match chosen {
            Some(mut h) => {
                h.sort_unstable();
                Homogeneous::Found {
                    set: h.into_iter().map(|m| self.space.code(m)).collect(),
                    color: 1,
                }
            }
            None => Homogeneous::Obstruction {
                chain: self.longest_zero_chain(universe)?,
            },
        })
    }

    fn has_full_chain(&self, h: &[u64]) -> bool {
        let n = self.space.rank();
        let mut reach: Vec<u64> = h.iter().copied().filter(|&m| m == 0).collect();
        for _ in 0..n {
            reach = h
                .iter()
                .copied()
                .filter(|&c| reach.iter().any(|&r| is_strict_subset(r, c) && (c & !r).count_ones() == 1))
                .collect();
        }
        !reach.is_empty()
    }

    /// A 1-homogeneous maximal chain, by depth-first search.
    fn homogeneous_chain(&self, universe: &Universe) -> Result<Option<Vec<u64>>> {
        let n = self.space.rank();
        let full = self.space.size() - 1;
        let mut steps: u128 = 0;
        let mut chain = vec![0u64];
        fn dfs(p: &Partition2, chain: &mut Vec<u64>, full: u64, steps: &mut u128, universe: &Universe) -> Result<bool> {
            let cur = *chain.last().expect("chain starts at 0");
            if cur == full {
                return Ok(true);
            }
            let mut free = full & !cur;
            while free != 0 {
                let bit = free & free.wrapping_neg();
                free &= free - 1;
                let c = cur | bit;
                *steps += chain.len() as u128;
                universe.charge(*steps, "homogeneous chain search")?;
                if chain.iter().all(|&x| p.color_mask(x, c) == Some(1)) {
                    chain.push(c);
                    if dfs(p, chain, full, steps, universe)? {
                        return Ok(true);
                    }
                    chain.pop();
                }
            }
            Ok(false)
        }
        let found = n == 0 || dfs(self, &mut chain, full, &mut steps, universe)?;
        Ok(found.then_some(chain))
    }

    /// Colour 1 iff every component gives colour 1.
    pub fn product(parts: &[Partition2], universe: &Universe) -> Result<Partition2> {
        let Some(first) = parts.first() else {
            return Err(Error::precondition("product of no partitions"));
        };
        if parts.iter().any(|p| p.e != first.e) {
            return Err(Error::precondition("partitions live on different universes"));
        }
        Self::from_masks(&first.e, universe, |a, b| {
            u8::from(parts.iter().all(|p| p.color_mask(a, b) == Some(1)))
        })
    }
}

impl fmt::Debug for Partition2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition2 on {} with {} zero pairs", self.e, self.zero_pairs().len())
    }
}

/// `Q^>_{AB}`: `β` with `|A ∩ β̂| > |B ∩ β̂|`.
pub fn q_member(a: &PointSet, b: &PointSet, beta: &Ordinal, universe: &Universe) -> Result<bool> {
    Ok(partial_count(a, beta, universe)? > partial_count(b, beta, universe)?)
}

/// A set of indices tested for the finite intersection property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FipFamily {
    Base(FilterBaseSet),
    Q(PointSet, PointSet),
}

impl FipFamily {
    pub fn contains(&self, delta: &Ordinal, universe: &Universe) -> Result<bool> {
        match self {
            FipFamily::Base(s) => in_filter_base(s, delta),
            FipFamily::Q(a, b) => q_member(a, b, delta, universe),
        }
    }
}

impl fmt::Display for FipFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FipFamily::Base(s) => write!(f, "{s}"),
            FipFamily::Q(a, b) => write!(f, "Q({a}, {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FipVerdict {
    Found(Ordinal),
    /// Nothing in the universe lies in every set; this does not refute the
    /// finite intersection property.
    InconclusiveAtScale,
}

/// A common element of the families. Cones and `D(η)` sets alone are solved
/// constructively; otherwise, or when the constructive closure does not
/// stabilise, the codes over `E` are searched in increasing order.
pub fn fip_check(families: &[FipFamily], e: &FinOrdSet, universe: &Universe) -> Result<FipVerdict> {
    let bases: Option<Vec<FilterBaseSet>> = families
        .iter()
        .map(|f| match f {
            FipFamily::Base(s) => Some(s.clone()),
            FipFamily::Q(..) => None,
        })
        .collect();
    if let Some(bases) = bases {
        match solve_filter_base(&bases, universe) {
            Ok(delta) => return Ok(FipVerdict::Found(delta)),
            Err(Error::Budget(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let space = CodeSpace::new(e, universe)?;
    for delta in space.iter() {
        let mut all = true;
        for f in families {
            if !f.contains(&delta, universe)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(FipVerdict::Found(delta));
        }
    }
    Ok(FipVerdict::InconclusiveAtScale)
}
