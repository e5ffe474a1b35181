//! Exact arithmetic on ordinals below ε₀.
//!
//! Every ordinal has a unique base-2 normal form `α = 2^{α_1} + … + 2^{α_n}`
//! with `α_1 > … > α_n`. Each exponent splits uniquely as `ω·q + r` with `r`
//! finite, and `2^{ω·q + r} = ω^q · 2^r`. An [`Ordinal`] stores its exponents
//! grouped by the quotient `q`: the group for `q` is a bitset whose set bits
//! are the offsets `r`. Read as a number, the bitset is the coefficient of
//! `ω^q` in Cantor normal form, so both views are available without
//! conversion. Grouping is what keeps the recursion well founded: `ω` is its
//! own only exponent, but its quotient is `1 < ω`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the nesting depth of exponents.
pub const DEFAULT_MAX_DEPTH: usize = 8;

/// Largest finite offset `r` admitted inside an infinite group.
pub const MAX_OFFSET: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Group {
    /// Quotient `q ≥ 1`; the group contributes `ω^q · mult`.
    degree: Ordinal,
    /// Nonzero; bit `r` set means `ω·q + r` is an exponent.
    mult: BigUint,
}

/// An ordinal below ε₀ in grouped base-2 normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    /// Strictly decreasing degrees, all `≥ 1`.
    groups: Vec<Group>,
    /// The finite part; its set bits are the finite exponents.
    fin: u64,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        Ordinal {
            groups: Vec::new(),
            fin: n,
        }
    }

    pub fn omega() -> Self {
        Ordinal::monomial(Ordinal::one(), BigUint::one())
    }

    /// `ω^degree · mult`.
    pub fn monomial(degree: Ordinal, mult: BigUint) -> Self {
        if mult.is_zero() {
            return Ordinal::zero();
        }
        if degree.is_zero() {
            return Ordinal::nat(mult.to_u64().expect("finite monomial exceeds u64"));
        }
        Ordinal {
            groups: vec![Group { degree, mult }],
            fin: 0,
        }
    }

    /// `ω^degree`.
    pub fn omega_pow(degree: Ordinal) -> Self {
        Ordinal::monomial(degree, BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty() && self.fin == 0
    }

    pub fn is_finite(&self) -> bool {
        self.groups.is_empty()
    }

    /// True for limit ordinals (not for 0).
    pub fn is_limit(&self) -> bool {
        !self.groups.is_empty() && self.fin == 0
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.is_finite().then_some(self.fin)
    }

    pub fn finite_part(&self) -> u64 {
        self.fin
    }

    /// Nesting depth of the exponent tower; naturals have depth 0.
    pub fn depth(&self) -> usize {
        self.groups
            .iter()
            .map(|g| 1 + g.degree.depth())
            .max()
            .unwrap_or(0)
    }

    /// Cantor normal form terms `(degree, coefficient)`, highest degree first,
    /// with the finite part reported at degree 0.
    pub fn cnf(&self) -> Vec<(Ordinal, BigUint)> {
        let mut out: Vec<(Ordinal, BigUint)> = self
            .groups
            .iter()
            .map(|g| (g.degree.clone(), g.mult.clone()))
            .collect();
        if self.fin > 0 {
            out.push((Ordinal::zero(), BigUint::from(self.fin)));
        }
        out
    }

    /// Inverse of [`Ordinal::cnf`]. Degrees must be strictly decreasing;
    /// zero coefficients are dropped.
    pub fn from_cnf(terms: Vec<(Ordinal, BigUint)>) -> Result<Self> {
        let mut groups = Vec::with_capacity(terms.len());
        let mut fin = 0u64;
        for (degree, mult) in terms {
            if mult.is_zero() {
                continue;
            }
            if degree.is_zero() {
                fin = mult
                    .to_u64()
                    .ok_or_else(|| Error::budget("finite part exceeds 2^64"))?;
            } else {
                if mult.bits() > MAX_OFFSET + 1 {
                    return Err(Error::budget(format!(
                        "coefficient of ω^{degree} has more than {MAX_OFFSET} bits"
                    )));
                }
                groups.push(Group { degree, mult });
            }
        }
        debug_assert!(groups.windows(2).all(|w| w[0].degree > w[1].degree));
        let out = Ordinal { groups, fin };
        out.check_depth()?;
        Ok(out)
    }

    fn check_depth(&self) -> Result<()> {
        let depth = self.depth();
        if depth > DEFAULT_MAX_DEPTH {
            return Err(Error::budget(format!(
                "nesting depth {depth} exceeds limit {DEFAULT_MAX_DEPTH}"
            )));
        }
        Ok(())
    }

    fn coeff_at(&self, degree: &Ordinal) -> BigUint {
        if degree.is_zero() {
            return BigUint::from(self.fin);
        }
        self.groups
            .iter()
            .find(|g| &g.degree == degree)
            .map(|g| g.mult.clone())
            .unwrap_or_default()
    }

    /// Degree of the leading Cantor term (0 for finite ordinals).
    pub fn leading_degree(&self) -> Ordinal {
        self.groups
            .first()
            .map(|g| g.degree.clone())
            .unwrap_or_default()
    }

    /// Splits an exponent value `e` into `(q, r)` with `e = ω·q + r`.
    pub fn exponent_parts(&self) -> Result<(Ordinal, u64)> {
        let mut groups = Vec::with_capacity(self.groups.len());
        let mut fin = 0u64;
        for g in &self.groups {
            match g.degree.as_u64() {
                Some(1) => {
                    fin = g
                        .mult
                        .to_u64()
                        .ok_or_else(|| Error::budget("exponent quotient exceeds 2^64"))?;
                }
                Some(d) => groups.push(Group {
                    degree: Ordinal::nat(d - 1),
                    mult: g.mult.clone(),
                }),
                None => groups.push(g.clone()),
            }
        }
        Ok((Ordinal { groups, fin }, self.fin))
    }

    /// The exponent value `ω·q + r`.
    pub fn from_parts(q: &Ordinal, r: u64) -> Result<Ordinal> {
        let mut groups = Vec::with_capacity(q.groups.len() + 1);
        for g in &q.groups {
            let degree = match g.degree.as_u64() {
                Some(d) => Ordinal::nat(
                    d.checked_add(1)
                        .ok_or_else(|| Error::budget("degree exceeds 2^64"))?,
                ),
                None => g.degree.clone(),
            };
            groups.push(Group {
                degree,
                mult: g.mult.clone(),
            });
        }
        if q.fin > 0 {
            groups.push(Group {
                degree: Ordinal::one(),
                mult: BigUint::from(q.fin),
            });
        }
        Ok(Ordinal { groups, fin: r })
    }

    /// The canonical ordinal `Σ 2^{e}` over a multiset of exponents;
    /// repeated exponents carry (`2^δ + 2^δ = 2^{δ+1}`).
    pub fn from_exponents<'a, I>(exponents: I) -> Result<Ordinal>
    where
        I: IntoIterator<Item = &'a Ordinal>,
    {
        let mut fin: u64 = 0;
        let mut acc: BTreeMap<Ordinal, BigUint> = BTreeMap::new();
        for e in exponents {
            let (q, r) = e.exponent_parts()?;
            if q.is_zero() {
                let bit = 1u64
                    .checked_shl(r as u32)
                    .filter(|_| r < 64)
                    .ok_or_else(|| Error::budget("finite part exceeds 2^64"))?;
                fin = fin
                    .checked_add(bit)
                    .ok_or_else(|| Error::budget("finite part exceeds 2^64"))?;
            } else {
                if r > MAX_OFFSET {
                    return Err(Error::budget(format!(
                        "exponent offset {r} exceeds {MAX_OFFSET}"
                    )));
                }
                *acc.entry(q).or_default() += BigUint::one() << r;
            }
        }
        let mut terms: Vec<(Ordinal, BigUint)> = acc.into_iter().rev().collect();
        terms.push((Ordinal::zero(), BigUint::from(fin)));
        Ordinal::from_cnf(terms)
    }

    /// The base-2 exponents, strictly decreasing.
    pub fn exponents(&self) -> Vec<Ordinal> {
        let mut out = Vec::with_capacity(self.exponent_count() as usize);
        for g in &self.groups {
            for r in bits_descending(&g.mult) {
                out.push(Ordinal::from_parts(&g.degree, r).expect("offset of a stored group"));
            }
        }
        let mut f = self.fin;
        while f != 0 {
            let r = 63 - f.leading_zeros() as u64;
            out.push(Ordinal::nat(r));
            f &= !(1u64 << r);
        }
        out
    }

    /// `|L_α|`.
    pub fn exponent_count(&self) -> u64 {
        self.groups.iter().map(|g| g.mult.count_ones()).sum::<u64>() + self.fin.count_ones() as u64
    }

    /// `|L_α ∩ bound|`: how many exponents lie strictly below `bound`.
    pub fn exponents_below(&self, bound: &Ordinal) -> u64 {
        let mut count = 0u64;
        for g in &self.groups {
            // exponents ω·q + r for the set bits r of this group
            let base = Ordinal::from_parts(&g.degree, 0).expect("stored group");
            if &base >= bound {
                continue;
            }
            let (bound_head, bound_fin) = bound.limit_split();
            if bound_head == base {
                count += count_bits_below(&g.mult, bound_fin);
            } else {
                count += g.mult.count_ones();
            }
        }
        count += match bound.as_u64() {
            None => self.fin.count_ones() as u64,
            Some(b) if b >= 64 => self.fin.count_ones() as u64,
            Some(b) => (self.fin & ((1u64 << b) - 1)).count_ones() as u64,
        };
        count
    }

    /// `2^α`.
    pub fn pow2(&self) -> Result<Ordinal> {
        Ordinal::from_exponents(std::iter::once(self))
    }

    /// Natural (Hessenberg) sum `α ⊕ β`.
    pub fn nat_sum(&self, other: &Ordinal) -> Result<Ordinal> {
        if self.groups.is_empty() && other.groups.is_empty() {
            return self
                .fin
                .checked_add(other.fin)
                .map(Ordinal::nat)
                .ok_or_else(|| Error::budget("finite part exceeds 2^64"));
        }
        let mut terms = Vec::with_capacity(self.groups.len() + other.groups.len() + 1);
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.groups, &other.groups);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.degree.cmp(&y.degree),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    terms.push((a[i].degree.clone(), a[i].mult.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    terms.push((b[j].degree.clone(), b[j].mult.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    terms.push((a[i].degree.clone(), &a[i].mult + &b[j].mult));
                    i += 1;
                    j += 1;
                }
            }
        }
        let fin = self
            .fin
            .checked_add(other.fin)
            .ok_or_else(|| Error::budget("finite part exceeds 2^64"))?;
        terms.push((Ordinal::zero(), BigUint::from(fin)));
        Ordinal::from_cnf(terms)
    }

    /// Natural (Hessenberg) product `α ⊗ β`: `2^δ ⊗ 2^ε = 2^{δ⊕ε}` extended
    /// bilinearly, i.e. `ω^a·c ⊗ ω^b·d = ω^{a⊕b}·cd`.
    pub fn nat_prod(&self, other: &Ordinal) -> Result<Ordinal> {
        if self.groups.is_empty() && other.groups.is_empty() {
            return self
                .fin
                .checked_mul(other.fin)
                .map(Ordinal::nat)
                .ok_or_else(|| Error::budget("finite part exceeds 2^64"));
        }
        let mut acc: BTreeMap<Ordinal, BigUint> = BTreeMap::new();
        let (lhs, rhs) = (self.cnf(), other.cnf());
        for (da, ca) in &lhs {
            for (db, cb) in &rhs {
                *acc.entry(da.nat_sum(db)?).or_default() += ca * cb;
            }
        }
        Ordinal::from_cnf(acc.into_iter().rev().collect())
    }

    /// Ordinary ordinal sum `α + β`.
    pub fn ord_sum(&self, other: &Ordinal) -> Result<Ordinal> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lead = other.leading_degree();
        let mut terms: Vec<(Ordinal, BigUint)> = self
            .cnf()
            .into_iter()
            .filter(|(d, _)| d > &lead)
            .collect();
        let mut rest = other.cnf().into_iter();
        let (d, c) = rest.next().expect("nonzero");
        let merged = c + self.coeff_at(&lead);
        terms.push((d, merged));
        terms.extend(rest);
        Ordinal::from_cnf(terms)
    }

    /// Ordinary ordinal product `α · β`.
    pub fn ord_mul(&self, other: &Ordinal) -> Result<Ordinal> {
        if self.is_zero() || other.is_zero() {
            return Ok(Ordinal::zero());
        }
        let lhs = self.cnf();
        let (lead_deg, lead_coeff) = lhs[0].clone();
        let mut out = Ordinal::zero();
        for (d, c) in other.cnf() {
            let piece = if d.is_zero() {
                let mut terms = vec![(lead_deg.clone(), &lead_coeff * &c)];
                terms.extend(lhs[1..].iter().cloned());
                Ordinal::from_cnf(terms)?
            } else {
                Ordinal::from_cnf(vec![(lead_deg.ord_sum(&d)?, c)])?
            };
            out = out.ord_sum(&piece)?;
        }
        Ok(out)
    }

    /// The unique `ε` with `self + ε = target`; fails if `self > target`.
    pub fn left_sub(&self, target: &Ordinal) -> Result<Ordinal> {
        let (a, b) = (self.cnf(), target.cnf());
        let mut i = 0;
        while i < a.len() && i < b.len() && a[i] == b[i] {
            i += 1;
        }
        if i == a.len() {
            return Ordinal::from_cnf(b[i..].to_vec());
        }
        let too_big = || Error::precondition(format!("{self} exceeds {target}"));
        let Some((db, cb)) = b.get(i) else {
            return Err(too_big());
        };
        let (da, ca) = &a[i];
        match da.cmp(db) {
            Ordering::Less => Ordinal::from_cnf(b[i..].to_vec()),
            Ordering::Equal if ca < cb => {
                let mut terms = vec![(db.clone(), cb - ca)];
                terms.extend(b[i + 1..].iter().cloned());
                Ordinal::from_cnf(terms)
            }
            _ => Err(too_big()),
        }
    }

    /// `2^θ · γ = Σ 2^{θ + γ_i}` over the exponents `γ_i` of `γ`.
    pub fn shift_mul(theta: &Ordinal, gamma: &Ordinal) -> Result<Ordinal> {
        let exps = gamma
            .exponents()
            .iter()
            .map(|g| theta.ord_sum(g))
            .collect::<Result<Vec<_>>>()?;
        Ordinal::from_exponents(&exps)
    }

    /// `(γ, δ)` with `self = 2^θ·γ + δ` and `δ < 2^θ`.
    pub fn split(&self, theta: &Ordinal) -> Result<(Ordinal, Ordinal)> {
        let mut high = Vec::new();
        let mut low = Vec::new();
        for e in self.exponents() {
            if &e >= theta {
                high.push(theta.left_sub(&e)?);
            } else {
                low.push(e);
            }
        }
        Ok((Ordinal::from_exponents(&high)?, Ordinal::from_exponents(&low)?))
    }

    /// `(λ, k)` with `self = λ + k`, `λ` zero or a limit, `k` finite.
    pub fn limit_split(&self) -> (Ordinal, u64) {
        let mut lambda = self.clone();
        lambda.fin = 0;
        (lambda, self.fin)
    }

    /// `self + 1`.
    pub fn succ(&self) -> Result<Ordinal> {
        self.ord_sum(&Ordinal::one())
    }

    // Lattice structure of the coding α ↦ L_α.

    /// `L_self ⊆ L_other`.
    pub fn formal_le(&self, other: &Ordinal) -> bool {
        if self.fin & !other.fin != 0 {
            return false;
        }
        let mut j = 0;
        for g in &self.groups {
            while j < other.groups.len() && other.groups[j].degree > g.degree {
                j += 1;
            }
            match other.groups.get(j) {
                Some(h) if h.degree == g.degree => {
                    if (&g.mult & &h.mult) != g.mult {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    /// `self ∈ L_other`.
    pub fn formal_in(&self, other: &Ordinal) -> bool {
        let Ok((q, r)) = self.exponent_parts() else {
            return false;
        };
        if q.is_zero() {
            return r < 64 && other.fin & (1u64 << r) != 0;
        }
        other
            .groups
            .iter()
            .find(|g| g.degree == q)
            .is_some_and(|g| g.mult.bit(r))
    }

    /// Encoding of `L_self ∪ L_other`.
    pub fn join(&self, other: &Ordinal) -> Ordinal {
        self.combine(other, |a, b| a | b, |a, b| a | b, true)
    }

    /// Encoding of `L_self ∩ L_other`.
    pub fn meet(&self, other: &Ordinal) -> Ordinal {
        self.combine(other, |a, b| a & b, |a, b| a & b, false)
    }

    fn combine(
        &self,
        other: &Ordinal,
        big: impl Fn(&BigUint, &BigUint) -> BigUint,
        small: impl Fn(u64, u64) -> u64,
        keep_unpaired: bool,
    ) -> Ordinal {
        let mut groups = Vec::new();
        let (a, b) = (&self.groups, &other.groups);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.degree.cmp(&y.degree),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    if keep_unpaired {
                        groups.push(a[i].clone());
                    }
                    i += 1;
                }
                Ordering::Less => {
                    if keep_unpaired {
                        groups.push(b[j].clone());
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let mult = big(&a[i].mult, &b[j].mult);
                    if !mult.is_zero() {
                        groups.push(Group {
                            degree: a[i].degree.clone(),
                            mult,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ordinal {
            groups,
            fin: small(self.fin, other.fin),
        }
    }

    /// Renders the base-2 normal form, e.g. `2^(w + 1) + 2^(0)`.
    pub fn base2_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.exponents()
            .iter()
            .map(|e| format!("2^({e})"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn bits_descending(n: &BigUint) -> impl Iterator<Item = u64> + '_ {
    (0..n.bits()).rev().filter(move |&r| n.bit(r))
}

fn count_bits_below(n: &BigUint, bound: u64) -> u64 {
    if bound >= n.bits() {
        return n.count_ones();
    }
    let mask = (BigUint::one() << bound) - BigUint::one();
    (n & mask).count_ones()
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.groups.iter().zip(&other.groups) {
            let ord = a.degree.cmp(&b.degree).then_with(|| a.mult.cmp(&b.mult));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.groups
            .len()
            .cmp(&other.groups.len())
            .then(self.fin.cmp(&other.fin))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

/// Cantor normal form with ASCII `w` for ω, e.g. `w^2 + w*2 + 3`.
impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.cnf() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if d.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            if d != Ordinal::one() {
                if d.is_finite() || d == Ordinal::omega() {
                    write!(f, "^{d}")?;
                } else {
                    write!(f, "^({d})")?;
                }
            }
            if !c.is_one() {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The κ-surrogate: an exclusive bound on indices plus the caps that keep
/// enumerations desk-sized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub bound: Ordinal,
    /// Cap on elementary enumeration steps.
    pub work_budget: u64,
    /// Cap on `|E|` for subset enumeration.
    pub exponent_cap: usize,
}

impl Default for Universe {
    fn default() -> Self {
        Universe {
            // ω^ω^ω
            bound: Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::omega())),
            work_budget: 1 << 24,
            exponent_cap: 24,
        }
    }
}

impl Universe {
    pub fn with_work_budget(work_budget: u64) -> Self {
        Universe {
            work_budget,
            ..Universe::default()
        }
    }

    /// Fails unless `steps` elementary steps fit in the work budget.
    pub fn charge(&self, steps: u128, what: &str) -> Result<()> {
        if steps > self.work_budget as u128 {
            return Err(Error::budget(format!(
                "{what} needs {steps} steps, budget is {}",
                self.work_budget
            )));
        }
        Ok(())
    }

    /// Fails unless `2^n` subsets may be enumerated.
    pub fn check_subsets(&self, n: usize, what: &str) -> Result<()> {
        if n > self.exponent_cap || n >= 127 {
            return Err(Error::budget(format!(
                "{what}: {n} exponents exceed the cap of {}",
                self.exponent_cap
            )));
        }
        self.charge(1u128 << n, what)
    }

    pub fn contains(&self, a: &Ordinal) -> bool {
        a < &self.bound
    }
}
