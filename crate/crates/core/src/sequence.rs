//! Finitely presented sequences of integers indexed by ordinals, and their
//! counting functions `f_x(δ) = Σ_{β⊑δ} x_β`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fincode::{count_in, CodeSpace, FinOrdSet};
use crate::ordinal::{Ordinal, Universe};
use crate::scalar::Scalar;

/// A sequence that is constant on finitely many half-open intervals, with
/// finitely many pointwise overrides, and zero elsewhere.
///
/// Stored canonically: pieces are sorted, disjoint, nonzero and maximal;
/// an override never repeats the value it replaces.
#[derive(Clone, PartialEq, Eq)]
pub struct StepSequence<S: Scalar> {
    pieces: Vec<(Ordinal, Ordinal, S)>,
    overrides: BTreeMap<Ordinal, S>,
}

impl<S: Scalar> Default for StepSequence<S> {
    fn default() -> Self {
        StepSequence {
            pieces: Vec::new(),
            overrides: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> StepSequence<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from arbitrary pieces; fails if two pieces overlap or one is empty.
    pub fn new(pieces: Vec<(Ordinal, Ordinal, S)>, overrides: BTreeMap<Ordinal, S>) -> Result<Self> {
        let mut pieces = pieces;
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        for p in &pieces {
            if p.0 >= p.1 {
                return Err(Error::precondition(format!("empty interval [{}, {})", p.0, p.1)));
            }
        }
        for w in pieces.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::precondition(format!(
                    "intervals [{}, {}) and [{}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let mut x = StepSequence {
            pieces,
            overrides,
        };
        x.normalize();
        Ok(x)
    }

    /// `v` on `[lo, hi)`.
    pub fn interval(lo: Ordinal, hi: Ordinal, v: S) -> Result<Self> {
        Self::new(vec![(lo, hi, v)], BTreeMap::new())
    }

    /// The characteristic sequence of `[lo, hi)`.
    pub fn indicator(lo: Ordinal, hi: Ordinal) -> Result<Self> {
        Self::interval(lo, hi, S::one())
    }

    /// `v` at the single point `a`.
    pub fn point(a: Ordinal, v: S) -> Self {
        let mut x = Self::zero();
        x.overrides.insert(a, v);
        x.normalize();
        x
    }

    pub fn pieces(&self) -> &[(Ordinal, Ordinal, S)] {
        &self.pieces
    }

    pub fn overrides(&self) -> &BTreeMap<Ordinal, S> {
        &self.overrides
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty() && self.overrides.is_empty()
    }

    fn normalize(&mut self) {
        let mut merged: Vec<(Ordinal, Ordinal, S)> = Vec::with_capacity(self.pieces.len());
        for (lo, hi, v) in self.pieces.drain(..) {
            if v.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.1 == lo && last.2 == v => last.1 = hi,
                _ => merged.push((lo, hi, v)),
            }
        }
        self.pieces = merged;
        let overrides = std::mem::take(&mut self.overrides);
        self.overrides = overrides
            .into_iter()
            .filter(|(a, v)| *v != self.base_value(a))
            .collect();
    }

    /// The value at `a` ignoring overrides.
    pub fn base_value(&self, a: &Ordinal) -> S {
        let i = self.pieces.partition_point(|p| &p.0 <= a);
        match i.checked_sub(1).map(|j| &self.pieces[j]) {
            Some((_, hi, v)) if a < hi => v.clone(),
            _ => S::zero(),
        }
    }

    /// `x_α`.
    pub fn value_at(&self, a: &Ordinal) -> S {
        match self.overrides.get(a) {
            Some(v) => v.clone(),
            None => self.base_value(a),
        }
    }

    /// `Σ_{β⊑δ} x_β`, in closed form: each piece contributes its value times
    /// `|[lo, hi) ∩ δ̂|` and each override its correction when `α ⊑ δ`.
    pub fn counting(&self, delta: &Ordinal) -> BigInt {
        let mut total = BigInt::zero();
        for (lo, hi, v) in &self.pieces {
            total += v.to_bigint() * BigInt::from(count_in(lo, hi, delta));
        }
        for (a, v) in &self.overrides {
            if a.formal_le(delta) {
                total += v.to_bigint() - self.base_value(a).to_bigint();
            }
        }
        total
    }

    /// `Σ_{β⊑δ} x_β` by enumerating all `2^{|L_δ|}` indices `β ⊑ δ`.
    pub fn counting_brute(&self, delta: &Ordinal, universe: &Universe) -> Result<BigInt> {
        let e: FinOrdSet = delta.exponents().into_iter().collect();
        let space = CodeSpace::new(&e, universe)?;
        Ok(space.iter().map(|b| self.value_at(&b).to_bigint()).sum())
    }

    /// `u·x + v·y`.
    pub fn linear_combo(u: &S, x: &Self, v: &S, y: &Self) -> Self {
        let mut cuts: Vec<Ordinal> = x
            .pieces
            .iter()
            .chain(&y.pieces)
            .flat_map(|p| [p.0.clone(), p.1.clone()])
            .collect();
        cuts.sort();
        cuts.dedup();
        let combine = |a: S, b: S| u.clone() * a + v.clone() * b;
        let pieces = cuts
            .windows(2)
            .map(|w| {
                let val = combine(x.base_value(&w[0]), y.base_value(&w[0]));
                (w[0].clone(), w[1].clone(), val)
            })
            .collect();
        let overrides = x
            .overrides
            .keys()
            .chain(y.overrides.keys())
            .map(|a| (a.clone(), combine(x.value_at(a), y.value_at(a))))
            .collect();
        let mut out = StepSequence { pieces, overrides };
        out.normalize();
        out
    }

    /// `y` with `y_{2^η·γ+α} = x_α` and zero elsewhere; `x` must vanish from `2^η` on.
    pub fn translate(&self, eta: &Ordinal, gamma: &Ordinal) -> Result<Self> {
        let cap = eta.pow2()?;
        let escapes = self.pieces.last().is_some_and(|p| p.1 > cap)
            || self.overrides.iter().any(|(a, v)| a >= &cap && !v.is_zero());
        if escapes {
            return Err(Error::precondition(format!("sequence does not vanish from 2^({eta}) on")));
        }
        let shift = Ordinal::shift_mul(eta, gamma)?;
        let pieces = self
            .pieces
            .iter()
            .map(|(lo, hi, v)| Ok((shift.ord_sum(lo)?, shift.ord_sum(hi)?, v.clone())))
            .collect::<Result<Vec<_>>>()?;
        let overrides = self
            .overrides
            .iter()
            .filter(|(a, _)| *a < &cap)
            .map(|(a, v)| Ok((shift.ord_sum(a)?, v.clone())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut out = StepSequence { pieces, overrides };
        out.normalize();
        Ok(out)
    }

    /// The restriction to `[lo, hi)`.
    pub fn restrict(&self, lo: &Ordinal, hi: &Ordinal) -> Self {
        let pieces = self
            .pieces
            .iter()
            .filter_map(|(a, b, v)| {
                let a = a.max(lo).clone();
                let b = b.min(hi).clone();
                (a < b).then(|| (a, b, v.clone()))
            })
            .collect();
        let overrides = self
            .overrides
            .iter()
            .filter(|(a, _)| *a >= lo && *a < hi)
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect();
        let mut out = StepSequence { pieces, overrides };
        out.normalize();
        out
    }

    /// Values at every code of `space`, indexed by mask.
    fn values_on(&self, space: &CodeSpace) -> Vec<BigInt> {
        space.iter().map(|a| self.value_at(&a).to_bigint()).collect()
    }
}

/// `Σ_{α∨β⊑δ} x_α·y_β`.
///
/// When the pairs fit the work budget the double sum is enumerated grouped by
/// the join `γ = α∨β` and checked against the factored form
/// `f_x(δ)·f_y(δ)`; otherwise only the factored form is computed.
pub fn product_partial<S: Scalar>(
    x: &StepSequence<S>,
    y: &StepSequence<S>,
    delta: &Ordinal,
    universe: &Universe,
) -> Result<BigInt> {
    let factored = x.counting(delta) * y.counting(delta);
    let n = delta.exponent_count();
    if n > universe.exponent_cap as u64 || universe.charge(1u128 << (2 * n), "product_partial").is_err() {
        return Ok(factored);
    }
    let e: FinOrdSet = delta.exponents().into_iter().collect();
    let space = CodeSpace::new(&e, universe)?;
    let (xs, ys) = (x.values_on(&space), y.values_on(&space));
    let mut grouped = BigInt::zero();
    for gamma in 0..space.size() {
        // α ⊆ γ, β = (γ∖α) ∪ s with s ⊆ α
        let mut alpha = gamma;
        loop {
            if !xs[alpha as usize].is_zero() {
                let rest = gamma & !alpha;
                let mut s = alpha;
                loop {
                    grouped += &xs[alpha as usize] * &ys[(rest | s) as usize];
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & alpha;
                }
            }
            if alpha == 0 {
                break;
            }
            alpha = (alpha - 1) & gamma;
        }
    }
    assert_eq!(grouped, factored, "grouped double sum disagrees with its factorisation");
    Ok(grouped)
}

/// `Σ_{ε⊑δ} z_ε` for the linearised sequence `z_{2^η·β+γ} = x_β·y_γ`
/// (`x`, `y` supported below `2^η`).
pub fn linearized_counting<S: Scalar>(
    x: &StepSequence<S>,
    y: &StepSequence<S>,
    eta: &Ordinal,
    delta: &Ordinal,
    universe: &Universe,
) -> Result<BigInt> {
    let e: FinOrdSet = delta.exponents().into_iter().collect();
    let space = CodeSpace::new(&e, universe)?;
    let cap = eta.pow2()?;
    let mut total = BigInt::zero();
    for eps in space.iter() {
        let (beta, gamma) = eps.split(eta)?;
        if beta < cap {
            total += x.value_at(&beta).to_bigint() * y.value_at(&gamma).to_bigint();
        }
    }
    Ok(total)
}

/// Möbius inversion on the codes over `E`: the unique `x` with
/// `Σ_{β⊑α} x_β = ψ(α)` for every code `α` over `E`.
pub fn from_counting<S: Scalar>(
    psi: &BTreeMap<Ordinal, S>,
    e: &FinOrdSet,
    universe: &Universe,
) -> Result<BTreeMap<Ordinal, S>> {
    let space = CodeSpace::new(e, universe)?;
    universe.charge((space.rank() as u128 + 1) << space.rank(), "from_counting")?;
    let codes: Vec<Ordinal> = space.iter().collect();
    let mut vals = codes
        .iter()
        .map(|a| {
            psi.get(a)
                .cloned()
                .ok_or_else(|| Error::precondition(format!("psi undefined at {a}")))
        })
        .collect::<Result<Vec<S>>>()?;
    for i in 0..space.rank() {
        let bit = 1usize << i;
        for m in 0..vals.len() {
            if m & bit != 0 {
                let lower = vals[m ^ bit].clone();
                vals[m] = vals[m].clone() - lower;
            }
        }
    }
    Ok(codes.into_iter().zip(vals).collect())
}

/// Pieces as `[lo,hi):v` joined by ` + `, overrides as `@a:v`; `0` if empty.
impl<S: Scalar> fmt::Display for StepSequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts = self
            .pieces
            .iter()
            .map(|(lo, hi, v)| format!("[{lo},{hi}):{v}"))
            .chain(self.overrides.iter().map(|(a, v)| format!("@{a}:{v}")));
        f.write_str(&parts.collect::<Vec<_>>().join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for StepSequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
