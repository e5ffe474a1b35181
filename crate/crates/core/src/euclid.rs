//! Euclidean integers generated by ordinals.
//!
//! A value is a finite combination `Σ c_λ·Ψ(2^λ)` over keys `λ` that are zero
//! or limits; `Ψ(2^{λ+k}) = 2^k·Ψ(2^λ)` folds every other exponent onto its
//! limit part, so the representation is canonical. Its partial sum at an
//! index `δ` is `Σ c_λ·2^{|L_δ ∩ λ|}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fincode::{d_element, FinOrdSet};
use crate::numerosity::{partial_count, PointSet};
use crate::ordinal::{Ordinal, Universe, MAX_OFFSET};
use crate::scalar::Scalar;
use crate::sequence::StepSequence;

/// Largest `|L_δ ∩ λ|` for which `2^{|L_δ ∩ λ|}` is materialised.
pub const MAX_PARTIAL_EXPONENT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(n: &BigInt) -> Sign {
        match n.sign() {
            num_bigint::Sign::Minus => Sign::Neg,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Pos,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "NEG",
            Sign::Zero => "ZERO",
            Sign::Pos => "POS",
        })
    }
}

/// Every `δ ⊒ theta` has partial sums of the claimed sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignWitness {
    pub theta: Ordinal,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EuclideanInt<S: Scalar> {
    coeffs: BTreeMap<Ordinal, S>,
}

impl<S: Scalar> Default for EuclideanInt<S> {
    fn default() -> Self {
        EuclideanInt {
            coeffs: BTreeMap::new(),
        }
    }
}

fn fit<S: Scalar>(b: &BigInt) -> Result<S> {
    S::from_bigint(b).ok_or_else(|| Error::budget(format!("coefficient {b} does not fit the scalar type")))
}

impl<S: Scalar> EuclideanInt<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(S::one())
    }

    /// `n·Ψ(1)`.
    pub fn from_int(n: S) -> Self {
        let mut z = Self::zero();
        z.add_term(Ordinal::zero(), n);
        z
    }

    /// `c·Ψ(2^e)` for any exponent `e`, folded onto `e`'s limit part.
    pub fn monomial(e: &Ordinal, c: S) -> Result<Self> {
        let (lambda, k) = e.limit_split();
        if k > MAX_OFFSET {
            return Err(Error::budget(format!("fold offset {k} exceeds {MAX_OFFSET}")));
        }
        let scaled = c.to_bigint() << k;
        let mut z = Self::zero();
        z.add_term(lambda, fit(&scaled)?);
        Ok(z)
    }

    /// `Ψ(α)`: the Cantor term `ω^d·c` is `c·Ψ(2^{ω·d})`.
    pub fn psi(a: &Ordinal) -> Result<Self> {
        let mut z = Self::zero();
        for (d, c) in a.cnf() {
            let key = Ordinal::omega().ord_mul(&d)?;
            let key = if d.is_zero() { Ordinal::zero() } else { key };
            z.add_term(key, fit(&BigInt::from(c))?);
        }
        Ok(z)
    }

    fn add_term(&mut self, key: Ordinal, c: S) {
        debug_assert!(key.is_zero() || key.is_limit());
        let slot = self.coeffs.entry(key).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Keys with nonzero coefficients, ascending.
    pub fn coeffs(&self) -> &BTreeMap<Ordinal, S> {
        &self.coeffs
    }

    pub fn coeff(&self, key: &Ordinal) -> S {
        self.coeffs.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn top_key(&self) -> Option<&Ordinal> {
        self.coeffs.keys().next_back()
    }

    /// Monoid-ring product: keys combine by the natural sum.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut z = Self::zero();
        for (l, a) in &self.coeffs {
            for (m, b) in &other.coeffs {
                z.add_term(l.nat_sum(m)?, a.clone() * b.clone());
            }
        }
        Ok(z)
    }

    /// `Σ c_λ·2^{|L_δ ∩ λ|}`.
    pub fn partial_sum(&self, delta: &Ordinal) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (l, c) in &self.coeffs {
            let k = delta.exponents_below(l);
            if k > MAX_PARTIAL_EXPONENT {
                return Err(Error::budget(format!("2^{k} is too large to materialise")));
            }
            total += c.to_bigint() << k;
        }
        Ok(total)
    }

    /// The sign, decided by the coefficient at the largest key.
    ///
    /// The witness lists `B` consecutive ordinals from the second largest key
    /// upward, where `2^B` exceeds the sum of the other coefficients' sizes:
    /// any `δ` containing them has `2^{|L_δ∩λ*|} ≥ 2^B·2^{|L_δ∩λ|}` for every
    /// lower key `λ`, so the top term dominates.
    pub fn sign(&self) -> (Sign, SignWitness) {
        let mut rev = self.coeffs.iter().rev();
        let Some((_, top)) = rev.next() else {
            return (Sign::Zero, SignWitness { theta: Ordinal::zero() });
        };
        let sign = if top.is_positive() { Sign::Pos } else { Sign::Neg };
        let Some((second, _)) = self.coeffs.iter().rev().nth(1) else {
            return (sign, SignWitness { theta: Ordinal::zero() });
        };
        let rest: BigInt = rev.map(|(_, c)| c.to_bigint().abs()).sum();
        let b = rest.magnitude().bits();
        let run = (0..b)
            .map(|i| second.ord_sum(&Ordinal::nat(i)))
            .collect::<Result<Vec<_>>>()
            .expect("sign witness run is within the ordinal caps");
        let theta = Ordinal::from_exponents(&run).expect("sign witness run is within the ordinal caps");
        (sign, SignWitness { theta })
    }

    pub fn compare(&self, other: &Self) -> (Ordering, SignWitness) {
        let (s, w) = (self.clone() - other.clone()).sign();
        (s.to_ordering(), w)
    }

    /// `Σ c_λ·χ_{[0, 2^λ)}`, a sequence whose counting function equals
    /// the partial sums on the fold witness cone.
    pub fn representative(&self) -> Result<StepSequence<S>> {
        let mut out = StepSequence::zero();
        for (l, c) in &self.coeffs {
            let piece = StepSequence::interval(Ordinal::zero(), l.pow2()?, c.clone())?;
            out = StepSequence::linear_combo(&S::one(), &out, &S::one(), &piece);
        }
        Ok(out)
    }

    /// `Σ_α x_α` for a step sequence: `v·(Ψ(hi) − Ψ(lo))` per piece plus one
    /// unit per override correction.
    pub fn from_step(x: &StepSequence<S>) -> Result<Self> {
        let mut z = Self::zero();
        for (lo, hi, v) in x.pieces() {
            let span = Self::psi(hi)? - Self::psi(lo)?;
            z = z + span.mul(&Self::from_int(v.clone()))?;
        }
        for (a, v) in x.overrides() {
            z = z + Self::from_int(v.clone() - x.base_value(a));
        }
        Ok(z)
    }
}

/// The cone on which `Σ_{β⊑δ} χ_{[0,α)}(β) = partial_sum(Ψ(α), δ)`: every
/// exponent `λ+k` of `α` together with the run `λ, …, λ+k−1` below it.
pub fn psi_witness(a: &Ordinal) -> Result<Ordinal> {
    let mut elems = BTreeSet::new();
    for e in a.exponents() {
        let (lambda, k) = e.limit_split();
        for i in 0..k {
            elems.insert(lambda.ord_sum(&Ordinal::nat(i))?);
        }
        elems.insert(e);
    }
    Ordinal::from_exponents(&elems)
}

/// The cone on which the counting function of `x` equals the partial sums
/// of `from_step(x)`.
pub fn step_witness<S: Scalar>(x: &StepSequence<S>) -> Result<Ordinal> {
    let mut theta = Ordinal::zero();
    for (lo, hi, _) in x.pieces() {
        theta = theta.join(&psi_witness(lo)?).join(&psi_witness(hi)?);
    }
    for a in x.overrides().keys() {
        theta = theta.join(a);
    }
    Ok(theta)
}

impl<S: Scalar> Add for EuclideanInt<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.coeffs {
            self.add_term(k, c);
        }
        self
    }
}

impl<S: Scalar> Neg for EuclideanInt<S> {
    type Output = Self;
    fn neg(self) -> Self {
        EuclideanInt {
            coeffs: self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<S: Scalar> Sub for EuclideanInt<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + -rhs
    }
}

impl<S: Scalar> PartialOrd for EuclideanInt<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for EuclideanInt<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other).0
    }
}

/// Terms `c*P(λ)` by descending key, `P(0)` elided: `2*P(w) - 3`.
impl<S: Scalar> fmt::Display for EuclideanInt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if k.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "P({k})")?;
            } else {
                write!(f, "{mag}*P({k})")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for EuclideanInt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Indices `δ ∈ D(η) ∩ C(θ)` on which `λ ↦ |L_δ ∩ λ|` is additive under the
/// natural sum for the given keys, so partial sums there are multiplicative.
///
/// Writing a key as `ω·q`, the count below it is `s·Σ c_d·m^{j(d)}` over the
/// Cantor terms `ω^d·c_d` of `q`, with `j(d)` the rank of `d` among all
/// degrees present and `m` above every coefficient. This is linear in the
/// coefficients, hence additive, and strictly increasing on the keys. Each
/// gap between keys is filled with the required number of elements, the
/// cone's own elements first; `ξ` is the resulting code and `η` a limit
/// above everything, giving `δ = 2^{η·2}·α + 2^η·ξ + ξ`.
///
/// Returns up to `count` indices; fewer when larger scales exceed the
/// representable finite part.
pub fn coherent_indices(keys: &[Ordinal], theta: &Ordinal, count: usize) -> Result<Vec<Ordinal>> {
    let mut ks: BTreeSet<Ordinal> = keys.iter().cloned().collect();
    ks.insert(Ordinal::zero());
    for k in &ks {
        if !(k.is_zero() || k.is_limit()) {
            return Err(Error::precondition(format!("{k} is not zero or a limit")));
        }
    }
    let qs: Vec<Ordinal> = ks.iter().map(|k| k.exponent_parts().map(|(q, _)| q)).collect::<Result<_>>()?;
    let degrees: BTreeSet<Ordinal> = qs.iter().flat_map(|q| q.cnf().into_iter().map(|t| t.0)).collect();
    let degrees: Vec<Ordinal> = degrees.into_iter().collect();
    let m = qs
        .iter()
        .flat_map(|q| q.cnf().into_iter().map(|t| t.1))
        .max()
        .unwrap_or_default()
        + 1u32;
    let weight = |q: &Ordinal| -> BigUint {
        q.cnf()
            .into_iter()
            .map(|(d, c)| {
                let j = degrees.binary_search(&d).expect("degree collected above");
                c * num_traits::pow(m.clone(), j)
            })
            .sum()
    };
    let ks: Vec<Ordinal> = ks.into_iter().collect();
    let theta_elems = theta.exponents();
    let in_gap = |i: usize| -> Vec<Ordinal> {
        theta_elems
            .iter()
            .filter(|e| *e >= &ks[i] && ks.get(i + 1).is_none_or(|hi| *e < hi))
            .cloned()
            .collect()
    };
    let need = (0..ks.len()).map(|i| in_gap(i).len()).max().unwrap_or(0) + 1;
    let variant_at = |variant: usize| -> Result<Ordinal> {
        let scale = BigUint::from(need + variant);
        let target: Vec<BigUint> = ks.iter().map(|k| {
            let (q, _) = k.exponent_parts().expect("checked above");
            &scale * weight(&q)
        }).collect();
        let mut elems: BTreeSet<Ordinal> = theta_elems.iter().cloned().collect();
        for i in 0..ks.len() - 1 {
            let gap = (&target[i + 1] - &target[i])
                .to_u64()
                .filter(|g| *g <= MAX_OFFSET)
                .ok_or_else(|| Error::budget("coherent index gap too large"))?;
            let mut placed = in_gap(i).len() as u64;
            let mut off = 0u64;
            while placed < gap {
                let e = ks[i].ord_sum(&Ordinal::nat(off))?;
                if elems.insert(e) {
                    placed += 1;
                }
                off += 1;
            }
        }
        let xi = Ordinal::from_exponents(&elems)?;
        let top = elems.iter().next_back().cloned().unwrap_or_default().max(ks[ks.len() - 1].clone());
        let eta = top.limit_split().0.ord_sum(&Ordinal::omega())?;
        d_element(&eta, &Ordinal::nat(variant as u64 + 1), &xi)
    };
    // larger scales need more room, so the first one that does not fit ends the list
    let mut out = Vec::with_capacity(count);
    for variant in 0..count {
        match variant_at(variant) {
            Ok(d) => out.push(d),
            Err(Error::Budget(_)) if !out.is_empty() => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Symbolic partial sums: expressions whose value at an index `δ` is an
/// exact integer even when no Euclidean integer in normal form denotes them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialSumExpr {
    Const(BigInt),
    /// `|X ∩ δ̂|` for a one-dimensional point set `X`.
    CountIn(PointSet),
    /// The partial sums of a Euclidean integer.
    Euclid(EuclideanInt<BigInt>),
    Add(Box<PartialSumExpr>, Box<PartialSumExpr>),
    Sub(Box<PartialSumExpr>, Box<PartialSumExpr>),
    Mul(Box<PartialSumExpr>, Box<PartialSumExpr>),
    Pow2(Box<PartialSumExpr>),
    PowBase(Box<PartialSumExpr>, Box<PartialSumExpr>),
}

/// Verdict of a sampled comparison; `None` is UNKNOWN.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledVerdict {
    pub verdict: Option<Ordering>,
    pub samples: usize,
}

impl PartialSumExpr {
    pub fn constant(n: i64) -> Self {
        PartialSumExpr::Const(BigInt::from(n))
    }

    /// The value at `δ`.
    pub fn eval(&self, delta: &Ordinal, universe: &Universe) -> Result<BigInt> {
        use PartialSumExpr::*;
        let exponent = |e: &PartialSumExpr| -> Result<u32> {
            let v = e.eval(delta, universe)?;
            if v.is_negative() {
                return Err(Error::precondition(format!("negative exponent {v}")));
            }
            v.to_u32()
                .filter(|k| (*k as u64) <= MAX_PARTIAL_EXPONENT)
                .ok_or_else(|| Error::budget(format!("exponent {v} too large")))
        };
        Ok(match self {
            Const(c) => c.clone(),
            CountIn(x) => partial_count(x, delta, universe)?,
            Euclid(z) => z.partial_sum(delta)?,
            Add(a, b) => a.eval(delta, universe)? + b.eval(delta, universe)?,
            Sub(a, b) => a.eval(delta, universe)? - b.eval(delta, universe)?,
            Mul(a, b) => a.eval(delta, universe)? * b.eval(delta, universe)?,
            Pow2(e) => BigInt::one() << exponent(e)?,
            PowBase(b, e) => {
                let k = exponent(e)?;
                let base = b.eval(delta, universe)?;
                universe.charge(k as u128 * (base.bits() as u128 + 1), "power")?;
                num_traits::pow(base, k as usize)
            }
        })
    }

    /// The normal form, when the expression only uses ring operations on
    /// constants and Euclidean integers.
    pub fn as_euclid(&self) -> Option<EuclideanInt<BigInt>> {
        use PartialSumExpr::*;
        match self {
            Const(c) => Some(EuclideanInt::from_int(c.clone())),
            Euclid(z) => Some(z.clone()),
            Add(a, b) => Some(a.as_euclid()? + b.as_euclid()?),
            Sub(a, b) => Some(a.as_euclid()? - b.as_euclid()?),
            Mul(a, b) => a.as_euclid()?.mul(&b.as_euclid()?).ok(),
            CountIn(_) | Pow2(_) | PowBase(..) => None,
        }
    }

    /// Every ordinal the expression mentions.
    pub fn ordinals(&self) -> Vec<Ordinal> {
        use PartialSumExpr::*;
        match self {
            Const(_) => Vec::new(),
            CountIn(x) => x.endpoints(),
            Euclid(z) => z.coeffs().keys().cloned().collect(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | PowBase(a, b) => {
                let mut v = a.ordinals();
                v.extend(b.ordinals());
                v
            }
            Pow2(a) => a.ordinals(),
        }
    }

    /// Compares by sampling: a verdict is returned only when the sign of
    /// `e1 − e2` is the same at every index of every chain past its first
    /// half; otherwise UNKNOWN. Such verdicts are heuristic.
    pub fn compare_sampled(
        e1: &PartialSumExpr,
        e2: &PartialSumExpr,
        chains: &[Vec<Ordinal>],
        universe: &Universe,
    ) -> Result<SampledVerdict> {
        if e1 == e2 {
            return Ok(SampledVerdict {
                verdict: Some(Ordering::Equal),
                samples: 0,
            });
        }
        let mut seen: Option<Ordering> = None;
        let mut samples = 0;
        for chain in chains {
            for delta in &chain[chain.len() / 2..] {
                let d = e1.eval(delta, universe)? - e2.eval(delta, universe)?;
                let s = Sign::of(&d).to_ordering();
                samples += 1;
                if seen.is_some_and(|prev| prev != s) {
                    return Ok(SampledVerdict { verdict: None, samples });
                }
                seen = Some(s);
            }
        }
        Ok(SampledVerdict { verdict: seen, samples })
    }
}

/// Increasing `⊏`-chains through the codes over `E ∪ {0, …, extra−1}`,
/// adding elements in several orders.
pub fn sample_chains(e: &FinOrdSet, extra: u64) -> Vec<Vec<Ordinal>> {
    let mut elems: Vec<Ordinal> = e.iter().cloned().collect();
    elems.extend((0..extra).map(Ordinal::nat));
    elems.sort();
    elems.dedup();
    let n = elems.len();
    let mut orders: Vec<Vec<usize>> = vec![(0..n).collect(), (0..n).rev().collect()];
    orders.push((0..n).step_by(2).chain((1..n).step_by(2)).collect());
    orders.push((1..n).step_by(2).chain((0..n).step_by(2)).rev().collect());
    orders
        .into_iter()
        .map(|order| {
            let mut acc = Ordinal::zero();
            let mut chain = vec![acc.clone()];
            for i in order {
                acc = acc.join(&elems[i].pow2().expect("element of a finite universe"));
                chain.push(acc.clone());
            }
            chain
        })
        .collect()
}

impl fmt::Display for PartialSumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PartialSumExpr::*;
        match self {
            Const(c) => write!(f, "{c}"),
            CountIn(x) => write!(f, "#({x})"),
            Euclid(z) => write!(f, "({z})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Pow2(e) => write!(f, "2^{e}"),
            PowBase(b, e) => write!(f, "{b}^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = EuclideanInt<BigInt>;

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }
    fn w() -> Ordinal {
        Ordinal::omega()
    }
    fn wk(k: u64) -> Ordinal {
        w().ord_mul(&n(k)).unwrap()
    }
    fn w2() -> Ordinal {
        w().ord_mul(&w()).unwrap()
    }
    fn psi(a: &Ordinal) -> E {
        E::psi(a).unwrap()
    }
    fn int(k: i64) -> E {
        E::from_int(BigInt::from(k))
    }
    fn exps(xs: &[Ordinal]) -> Ordinal {
        Ordinal::from_exponents(xs).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&n(5)), int(5));
        assert_eq!(psi(&w().succ().unwrap()), psi(&w()) + int(1));
        assert_eq!(psi(&wk(2)).coeffs().len(), 1);
        assert_eq!(psi(&wk(2)).coeff(&w()), BigInt::from(2));
        assert_eq!(psi(&w2()).to_string(), "P(w*2)");
        assert_eq!(E::monomial(&w().succ().unwrap(), BigInt::one()).unwrap(), psi(&wk(2)));
    }

    #[test]
    fn ring_examples() {
        assert_eq!(psi(&w()).mul(&psi(&w())).unwrap(), psi(&w2()));
        let a = psi(&wk(3)) - int(4);
        assert_eq!(a.mul(&E::one()).unwrap(), a);
        assert!((psi(&w()) + -psi(&w())).is_zero());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(int(-7).sign(), (Sign::Neg, SignWitness { theta: n(0) }));
        let (s, wit) = (psi(&w()) - int(1_000_000)).sign();
        assert_eq!(s, Sign::Pos);
        assert_eq!(wit.theta, n((1 << 20) - 1));
        let z = psi(&w()).mul(&int(3)).unwrap() - psi(&w2());
        assert_eq!(z.sign().0, Sign::Neg);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(psi(&w().succ().unwrap()).compare(&psi(&wk(2))).0, Ordering::Less);
        let a = psi(&w()) - int(3);
        assert_eq!(a.compare(&a).0, Ordering::Equal);
        for k in [0, 1, 1000, u64::MAX] {
            assert_eq!(psi(&w()).compare(&psi(&n(k))).0, Ordering::Greater);
        }
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(E::one().partial_sum(&n(77)).unwrap(), BigInt::one());
        let d = exps(&[w(), n(3), n(1)]);
        assert_eq!(psi(&w()).partial_sum(&d).unwrap(), BigInt::from(4));
        let d2 = exps(&[w().succ().unwrap(), w(), n(2)]);
        assert_eq!(psi(&w2()).partial_sum(&d2).unwrap(), BigInt::from(8));
    }

    #[test]
    fn from_step_examples() {
        let chi = |lo, hi| StepSequence::<BigInt>::indicator(lo, hi).unwrap();
        assert_eq!(E::from_step(&chi(n(0), w())).unwrap(), psi(&w()));
        assert_eq!(E::from_step(&chi(w(), wk(2))).unwrap(), psi(&w()));
        assert_eq!(E::from_step(&chi(n(3), w())).unwrap(), psi(&w()) - int(3));
        let x = StepSequence::new(
            vec![(n(0), w(), BigInt::from(2))],
            [(n(3), BigInt::from(7))].into(),
        )
        .unwrap();
        assert_eq!(E::from_step(&x).unwrap(), psi(&w()).mul(&int(2)).unwrap() + int(5));
    }

    #[test]
    fn display_forms() {
        assert_eq!((psi(&w()).mul(&int(2)).unwrap() - int(3)).to_string(), "2*P(w) - 3");
        assert_eq!((int(-1) - psi(&w2())).to_string(), "-P(w*2) - 1");
        assert_eq!(E::zero().to_string(), "0");
    }

    #[test]
    fn coherent_indices_are_multiplicative() {
        let a = psi(&w()) - int(3);
        let b = psi(&w2()).mul(&int(2)).unwrap() + psi(&w());
        let ab = a.mul(&b).unwrap();
        let keys: Vec<Ordinal> = [&a, &b, &ab].iter().flat_map(|z| z.coeffs().keys().cloned()).collect();
        let theta = psi_witness(&wk(3)).unwrap();
        let idx = coherent_indices(&keys, &theta, 5).unwrap();
        assert_eq!(idx.len(), 5);
        for d in idx {
            assert!(theta.formal_le(&d));
            let lhs = ab.partial_sum(&d).unwrap();
            let rhs = a.partial_sum(&d).unwrap() * b.partial_sum(&d).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn expression_eval_and_sampling() {
        let u = Universe::default();
        let five = PartialSumExpr::constant(5);
        assert_eq!(five.eval(&n(9), &u).unwrap(), BigInt::from(5));
        let x = PartialSumExpr::Euclid(psi(&w()));
        let p = PartialSumExpr::Pow2(Box::new(x.clone()));
        let d = exps(&[w(), n(3), n(1)]);
        assert_eq!(p.eval(&d, &u).unwrap(), BigInt::from(16));
        let v = PartialSumExpr::compare_sampled(&p, &p, &[], &u).unwrap();
        assert_eq!(v.verdict, Some(Ordering::Equal));
        let chains = sample_chains(&[w()].into_iter().collect(), 6);
        let v = PartialSumExpr::compare_sampled(&p, &x, &chains, &u).unwrap();
        assert_eq!(v.verdict, Some(Ordering::Greater));
    }
}
