//! Numerosities of finite-dimensional ordinal point sets.
//!
//! A point set is a finite union of boxes `[lo_1, hi_1) × … × [lo_n, hi_n)`
//! per dimension. Sets are kept canonical by recursive slab decomposition:
//! the first coordinate is cut exactly where the cross-section changes, and
//! each cross-section is canonical in one dimension less. Equal sets thus
//! have equal representations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::euclid::{psi_witness, EuclideanInt, PartialSumExpr, Sign};
use crate::fincode::{count_in, CodeSpace, FinOrdSet};
use crate::ordinal::{Ordinal, Universe};

type EuclidInt = EuclideanInt<BigInt>;

/// `[lo, hi)` with `lo < hi`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: Ordinal,
    hi: Ordinal,
}

impl Interval {
    pub fn new(lo: Ordinal, hi: Ordinal) -> Result<Self> {
        if lo >= hi {
            return Err(Error::precondition(format!("empty interval [{lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    /// `[a, a+1)`.
    pub fn unit(a: Ordinal) -> Result<Self> {
        let hi = a.succ()?;
        Ok(Interval { lo: a, hi })
    }

    pub fn lo(&self) -> &Ordinal {
        &self.lo
    }

    pub fn hi(&self) -> &Ordinal {
        &self.hi
    }

    /// The single point, if the interval has one element.
    pub fn as_point(&self) -> Option<&Ordinal> {
        (self.lo.succ().ok().as_ref() == Some(&self.hi)).then_some(&self.lo)
    }

    fn covers(&self, lo: &Ordinal, hi: &Ordinal) -> bool {
        &self.lo <= lo && hi <= &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A box: one interval per coordinate.
pub type OrdBox = Vec<Interval>;

/// A finite-dimensional point set in canonical form.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PointSet {
    dims: BTreeMap<usize, Vec<OrdBox>>,
}

/// Tails of the boxes whose first interval covers `[lo, hi)`.
fn section<'a>(s: &[&'a [Interval]], lo: &Ordinal, hi: &Ordinal) -> Vec<&'a [Interval]> {
    s.iter().filter(|bx| bx[0].covers(lo, hi)).map(|bx| &bx[1..]).collect()
}

/// Canonical form of a boolean combination of two box unions of dimension `n`.
fn combine(a: &[&[Interval]], b: &[&[Interval]], n: usize, op: fn(bool, bool) -> bool) -> Vec<OrdBox> {
    if n == 0 {
        return if op(!a.is_empty(), !b.is_empty()) {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut cuts: Vec<&Ordinal> = a.iter().chain(b).flat_map(|bx| [&bx[0].lo, &bx[0].hi]).collect();
    cuts.sort();
    cuts.dedup();
    let mut out: Vec<OrdBox> = Vec::new();
    // the previous slab: (lo, hi, canonical cross-section)
    let mut prev: Option<(Ordinal, Ordinal, Vec<OrdBox>)> = None;
    let flush = |slab: (Ordinal, Ordinal, Vec<OrdBox>), out: &mut Vec<OrdBox>| {
        for tail in slab.2 {
            let mut bx = Vec::with_capacity(n);
            bx.push(Interval {
                lo: slab.0.clone(),
                hi: slab.1.clone(),
            });
            bx.extend(tail);
            out.push(bx);
        }
    };
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let sec = combine(&section(a, lo, hi), &section(b, lo, hi), n - 1, op);
        match prev.as_mut() {
            Some(p) if &p.1 == lo && p.2 == sec => p.1 = hi.clone(),
            _ => {
                if let Some(p) = prev.take() {
                    flush(p, &mut out);
                }
                if !sec.is_empty() {
                    prev = Some((lo.clone(), hi.clone(), sec));
                }
            }
        }
    }
    if let Some(p) = prev {
        flush(p, &mut out);
    }
    out
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet::default()
    }

    /// The one-dimensional set `[lo, hi)`.
    pub fn interval(lo: Ordinal, hi: Ordinal) -> Result<Self> {
        Ok(Self::from_boxes(vec![vec![Interval::new(lo, hi)?]]))
    }

    /// A single tuple; a one-element tuple is a point of the ordinal line.
    pub fn tuple(t: Vec<Ordinal>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::precondition("tuples have at least one coordinate"));
        }
        let bx = t.into_iter().map(Interval::unit).collect::<Result<OrdBox>>()?;
        Ok(Self::from_boxes(vec![bx]))
    }

    /// The union of arbitrary (possibly overlapping) boxes of any dimensions.
    pub fn from_boxes(boxes: Vec<OrdBox>) -> Self {
        let mut by_dim: BTreeMap<usize, Vec<OrdBox>> = BTreeMap::new();
        for bx in boxes {
            if !bx.is_empty() {
                by_dim.entry(bx.len()).or_default().push(bx);
            }
        }
        let dims = by_dim
            .into_iter()
            .map(|(n, bs)| {
                let refs: Vec<&[Interval]> = bs.iter().map(|b| b.as_slice()).collect();
                (n, combine(&refs, &[], n, |x, _| x))
            })
            .filter(|(_, bs)| !bs.is_empty())
            .collect();
        PointSet { dims }
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Populated dimensions, ascending.
    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.dims.keys().copied()
    }

    /// The canonical disjoint boxes of dimension `n`.
    pub fn boxes(&self, n: usize) -> &[OrdBox] {
        self.dims.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn all_boxes(&self) -> impl Iterator<Item = &OrdBox> {
        self.dims.values().flatten()
    }

    /// The boxes of dimension `n` consisting of a single tuple.
    pub fn tuples(&self, n: usize) -> Vec<Vec<Ordinal>> {
        self.boxes(n)
            .iter()
            .filter_map(|bx| bx.iter().map(|iv| iv.as_point().cloned()).collect())
            .collect()
    }

    fn zip_with(&self, other: &Self, op: fn(bool, bool) -> bool) -> Self {
        let mut dims = BTreeMap::new();
        for n in self.dims().chain(other.dims()) {
            if dims.contains_key(&n) {
                continue;
            }
            let a: Vec<&[Interval]> = self.boxes(n).iter().map(|b| b.as_slice()).collect();
            let b: Vec<&[Interval]> = other.boxes(n).iter().map(|b| b.as_slice()).collect();
            dims.insert(n, combine(&a, &b, n, op));
        }
        dims.retain(|_, v: &mut Vec<OrdBox>| !v.is_empty());
        PointSet { dims }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Cartesian product; coordinates concatenate and dimensions add.
    pub fn product(&self, other: &Self) -> Self {
        let boxes = self
            .all_boxes()
            .flat_map(|a| other.all_boxes().map(move |b| a.iter().chain(b).cloned().collect()))
            .collect();
        Self::from_boxes(boxes)
    }

    /// Applies a coordinate permutation per dimension: coordinate `i` of the
    /// image is coordinate `perm[i]` of the source.
    pub fn permute(&self, perms: &BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        let mut boxes = Vec::new();
        for (n, bs) in &self.dims {
            let perm = match perms.get(n) {
                Some(p) => p.clone(),
                None => (0..*n).collect(),
            };
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..*n).collect::<Vec<_>>() {
                return Err(Error::precondition(format!("{perm:?} is not a permutation of {n} coordinates")));
            }
            boxes.extend(bs.iter().map(|bx| perm.iter().map(|&i| bx[i].clone()).collect()));
        }
        Ok(Self::from_boxes(boxes))
    }

    /// Every interval endpoint, ascending and without repeats.
    pub fn endpoints(&self) -> Vec<Ordinal> {
        let mut v: Vec<Ordinal> = self
            .all_boxes()
            .flatten()
            .flat_map(|iv| [iv.lo.clone(), iv.hi.clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// `𝔫(A) = Σ_boxes Π_i (Ψ(hi_i) − Ψ(lo_i))`.
    pub fn num(&self) -> Result<EuclidInt> {
        let mut total = EuclidInt::zero();
        for bx in self.all_boxes() {
            let mut term = EuclidInt::one();
            for iv in bx {
                term = term.mul(&(EuclidInt::psi(&iv.hi)? - EuclidInt::psi(&iv.lo)?))?;
            }
            total = total + term;
        }
        Ok(total)
    }

    /// The cone beyond which `partial_count` agrees with the partial sums of
    /// `num` in one dimension (and, at coherent indices, in all dimensions).
    pub fn witness(&self) -> Result<Ordinal> {
        self.endpoints()
            .iter()
            .try_fold(Ordinal::zero(), |acc, e| Ok(acc.join(&psi_witness(e)?)))
    }
}

/// `|{ᾱ ∈ A : ᾱ_1 ∨ … ∨ ᾱ_n ⊑ δ}|`; since the join lies below `δ` exactly when
/// every coordinate does, each box contributes `Π_i |[lo_i, hi_i) ∩ δ̂|`.
pub fn partial_count(a: &PointSet, delta: &Ordinal, universe: &Universe) -> Result<BigInt> {
    let nboxes = a.all_boxes().count() as u128;
    universe.charge(nboxes, "partial_count")?;
    let mut total = BigInt::zero();
    for bx in a.all_boxes() {
        let mut term = BigInt::one();
        for iv in bx {
            term *= BigInt::from(count_in(&iv.lo, &iv.hi, delta));
        }
        total += term;
    }
    Ok(total)
}

/// `partial_count` by enumerating `δ̂` and testing each coordinate.
pub fn partial_count_brute(a: &PointSet, delta: &Ordinal, universe: &Universe) -> Result<BigInt> {
    let e: FinOrdSet = delta.exponents().into_iter().collect();
    let below: Vec<Ordinal> = CodeSpace::new(&e, universe)?.iter().collect();
    let mut total = BigInt::zero();
    for bx in a.all_boxes() {
        let mut term = BigInt::one();
        for iv in bx {
            term *= below.iter().filter(|g| **g >= iv.lo && **g < iv.hi).count();
        }
        total += term;
    }
    Ok(total)
}

/// `ω^q·c` for the key `ω·q` (or `c` for the key 0).
fn block(key: &Ordinal, c: &BigInt) -> Result<Ordinal> {
    let (q, _) = key.exponent_parts()?;
    Ordinal::from_cnf(vec![(q, c.magnitude().clone())])
}

/// A one-dimensional set with numerosity `z`, for `z ≥ 0`.
///
/// Keys are processed from the top: a positive coefficient extends the right
/// end of an interval by `ω^q·c`, a negative one moves its left end up by
/// `ω^q·|c|`. The result is a single interval `[start, end)`.
pub fn realize(z: &EuclidInt) -> Result<PointSet> {
    let (sign, _) = z.sign();
    if sign == Sign::Neg {
        return Err(Error::precondition(format!("{z} is negative")));
    }
    let (mut start, mut end) = (Ordinal::zero(), Ordinal::zero());
    for (key, c) in z.coeffs().iter().rev() {
        let b = block(key, c)?;
        if c.is_positive() {
            end = end.ord_sum(&b)?;
        } else {
            start = start.ord_sum(&b)?;
        }
    }
    if start == end {
        return Ok(PointSet::empty());
    }
    PointSet::interval(start, end)
}

/// A set `C` disjoint from `A ∪ B` with `𝔫(A) + 𝔫(C) = 𝔫(B)`, for `𝔫(A) < 𝔫(B)`.
///
/// `realize(𝔫(B) − 𝔫(A))` is shifted past every point of `A` and `B` by
/// `ω^q` for `q` above all degrees involved, which leaves numerosities intact.
pub fn diff_witness(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    let (na, nb) = (a.num()?, b.num()?);
    if na.compare(&nb).0 != std::cmp::Ordering::Less {
        return Err(Error::precondition(format!("{na} is not below {nb}")));
    }
    let base = realize(&(nb - na))?;
    let top = a
        .endpoints()
        .iter()
        .chain(b.endpoints().iter())
        .chain(base.endpoints().iter())
        .map(|e| e.leading_degree())
        .max()
        .unwrap_or_default();
    let shift = Ordinal::omega_pow(top.succ()?);
    let boxes = base
        .boxes(1)
        .iter()
        .map(|bx| Ok(vec![Interval::new(shift.ord_sum(&bx[0].lo)?, shift.ord_sum(&bx[0].hi)?)?]))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet::from_boxes(boxes))
}

/// Whether permuting coordinates preserves the numerosity.
pub fn congruence_check(a: &PointSet, perms: &BTreeMap<usize, Vec<usize>>) -> Result<bool> {
    Ok(a.permute(perms)?.num()? == a.num()?)
}

/// `2^{𝔫(X)}` as the partial-sum expression `2^{|X ∩ δ̂|}`: finite subsets of
/// `X` labelled by their join lie below `δ` exactly when they lie in `X ∩ δ̂`.
pub fn finset_num(x: &PointSet) -> PartialSumExpr {
    if x.is_empty() {
        return PartialSumExpr::constant(1);
    }
    PartialSumExpr::Pow2(Box::new(PartialSumExpr::CountIn(x.clone())))
}

/// `𝔪(Y)^{𝔫(X)}` for finite partial functions `X → Y`: `(1 + |Y ∩ δ̂|)^{|X ∩ δ̂|}`.
pub fn finmap_num(x: &PointSet, y: &PointSet) -> PartialSumExpr {
    let base = PartialSumExpr::Add(
        Box::new(PartialSumExpr::constant(1)),
        Box::new(PartialSumExpr::CountIn(y.clone())),
    );
    PartialSumExpr::PowBase(Box::new(base), Box::new(PartialSumExpr::CountIn(x.clone())))
}

/// Renders dimensions ascending; boxes are intervals joined by ` >< `, and
/// single points are collected into one `{…}` literal per dimension.
impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut parts = Vec::new();
        for (n, bs) in &self.dims {
            let mut points = Vec::new();
            for bx in bs {
                match bx.iter().map(|iv| iv.as_point()).collect::<Option<Vec<_>>>() {
                    Some(t) if *n == 1 => points.push(t[0].to_string()),
                    Some(t) => points.push(format!(
                        "({})",
                        t.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ")
                    )),
                    None => parts.push(bx.iter().map(|iv| iv.to_string()).collect::<Vec<_>>().join(" >< ")),
                }
            }
            if !points.is_empty() {
                parts.push(format!("{{{}}}", points.join(", ")));
            }
        }
        f.write_str(&parts.join(" | "))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Size of a finite one-dimensional set, if it is finite.
pub fn finite_size(a: &PointSet) -> Option<u64> {
    let z = a.num().ok()?;
    if z.coeffs().keys().any(|k| !k.is_zero()) {
        return None;
    }
    z.coeff(&Ordinal::zero()).to_u64()
}
