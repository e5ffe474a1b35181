#![allow(dead_code)]

pub mod goldens;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use ordcalc::{EuclidInt, Ordinal, PointSet, Sequence};
use proptest::prelude::*;
use rand::Rng;

/// Textbook Cantor normal form `Σ ω^e·c` with strictly decreasing exponents
/// and positive coefficients, used as an oracle for the grouped base-2 form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf(pub Vec<(Cnf, u64)>);

impl Cnf {
    pub fn zero() -> Cnf {
        Cnf(Vec::new())
    }

    pub fn nat(n: u64) -> Cnf {
        if n == 0 {
            Cnf::zero()
        } else {
            Cnf(vec![(Cnf::zero(), n)])
        }
    }

    pub fn omega() -> Cnf {
        Cnf(vec![(Cnf::nat(1), 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Sorts terms descending and merges equal exponents.
    pub fn normalize(mut terms: Vec<(Cnf, u64)>) -> Cnf {
        terms.retain(|t| t.1 != 0);
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Cnf, u64)> = Vec::new();
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        Cnf(out)
    }

    pub fn add(&self, other: &Cnf) -> Cnf {
        let Some((lead, c)) = other.0.first() else {
            return self.clone();
        };
        let mut out: Vec<(Cnf, u64)> = self.0.iter().filter(|t| &t.0 > lead).cloned().collect();
        let carry = self.0.iter().find(|t| &t.0 == lead).map_or(0, |t| t.1);
        out.push((lead.clone(), c + carry));
        out.extend(other.0[1..].iter().cloned());
        Cnf(out)
    }

    pub fn nat_sum(&self, other: &Cnf) -> Cnf {
        Cnf::normalize(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn nat_prod(&self, other: &Cnf) -> Cnf {
        let mut terms = Vec::new();
        for (a, c) in &self.0 {
            for (b, d) in &other.0 {
                terms.push((a.nat_sum(b), c * d));
            }
        }
        Cnf::normalize(terms)
    }

    pub fn mul(&self, other: &Cnf) -> Cnf {
        if self.is_zero() || other.is_zero() {
            return Cnf::zero();
        }
        let (lead, lc) = &self.0[0];
        let mut out = Cnf::zero();
        for (e, c) in &other.0 {
            let piece = if e.is_zero() {
                let mut t = vec![(lead.clone(), lc * c)];
                t.extend(self.0[1..].iter().cloned());
                Cnf(t)
            } else {
                Cnf(vec![(lead.add(e), *c)])
            };
            out = out.add(&piece);
        }
        out
    }

    /// `ω·self`, computed termwise as `ω^{1+e}`.
    pub fn omega_times(&self) -> Cnf {
        Cnf(self.0.iter().map(|(e, c)| (Cnf::nat(1).add(e), *c)).collect())
    }

    /// The exponents `ω·e + i` of the base-2 expansion, descending.
    pub fn base2_exponents(&self) -> Vec<Cnf> {
        let mut out = Vec::new();
        for (e, c) in &self.0 {
            let head = e.omega_times();
            for i in (0..64).rev() {
                if c >> i & 1 == 1 {
                    out.push(head.add(&Cnf::nat(i)));
                }
            }
        }
        out
    }

    /// `2^self = ω^q·2^r` for `self = ω·q + r`.
    pub fn pow2(&self) -> Cnf {
        let r = self.0.iter().find(|t| t.0.is_zero()).map_or(0, |t| t.1);
        let q: Vec<(Cnf, u64)> = self
            .0
            .iter()
            .filter(|t| !t.0.is_zero())
            .map(|(e, c)| (e.minus_one_left(), *c))
            .collect();
        Cnf(vec![(Cnf(q), 1u64 << r)])
    }

    /// The `e'` with `1 + e' = e`, for `e ≥ 1`.
    fn minus_one_left(&self) -> Cnf {
        match self.0.as_slice() {
            [(z, n)] if z.is_zero() => Cnf::nat(n - 1),
            _ => self.clone(),
        }
    }

    pub fn to_ordinal(&self) -> Ordinal {
        Ordinal::from_cnf(self.0.iter().map(|(e, c)| (e.to_ordinal(), BigUint::from(*c))).collect())
            .expect("oracle value within caps")
    }

    pub fn from_ordinal(a: &Ordinal) -> Cnf {
        Cnf(a.cnf()
            .iter()
            .map(|(e, c)| (Cnf::from_ordinal(e), c.to_u64().expect("small coefficient")))
            .collect())
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn arb_cnf(depth: u32) -> BoxedStrategy<Cnf> {
    let leaf = (0u64..12).prop_map(Cnf::nat);
    leaf.prop_recursive(depth, 16, 3, |inner| {
        prop::collection::vec((inner, 1u64..5), 0..4).prop_map(Cnf::normalize)
    })
    .boxed()
}

pub fn arb_ordinal() -> BoxedStrategy<Ordinal> {
    arb_cnf(2).prop_map(|c| c.to_ordinal()).boxed()
}

pub fn n(k: u64) -> Ordinal {
    Ordinal::nat(k)
}

pub fn w() -> Ordinal {
    Ordinal::omega()
}

/// `ω·a + b`.
pub fn wl(a: u64, b: u64) -> Ordinal {
    Ordinal::from_cnf(vec![(n(1), BigUint::from(a)), (n(0), BigUint::from(b))]).unwrap()
}

/// `ω^k`.
pub fn wp(k: u64) -> Ordinal {
    Ordinal::omega_pow(n(k))
}

pub fn sum(xs: &[Ordinal]) -> Ordinal {
    xs.iter().fold(Ordinal::zero(), |acc, x| acc.ord_sum(x).unwrap())
}

/// Exponent pool mixing finite exponents, limits and their successors.
pub fn exponent_pool() -> Vec<Ordinal> {
    vec![
        n(0),
        n(1),
        n(2),
        w(),
        wl(1, 1),
        wl(2, 0),
        wl(2, 1),
        wp(2),
        sum(&[wp(2), n(1)]),
        sum(&[wp(2), w()]),
        sum(&[wp(2), wl(1, 1)]),
        wp(3),
    ]
}

/// A code whose exponents are a random subset of `pool`.
pub fn random_code<R: Rng>(rng: &mut R, pool: &[Ordinal]) -> Ordinal {
    let picked: Vec<&Ordinal> = pool.iter().filter(|_| rng.gen_bool(0.4)).collect();
    Ordinal::from_exponents(picked).unwrap()
}

/// Ordinals used as interval endpoints.
pub fn endpoint_pool() -> Vec<Ordinal> {
    vec![
        n(0),
        n(1),
        n(2),
        n(3),
        n(5),
        w(),
        wl(1, 1),
        wl(1, 3),
        wl(2, 0),
        wl(2, 1),
        wp(2),
        sum(&[wp(2), w()]),
        sum(&[wp(2), n(2)]),
    ]
}

fn random_interval<R: Rng>(rng: &mut R, pool: &[Ordinal]) -> (Ordinal, Ordinal) {
    loop {
        let a = pool[rng.gen_range(0..pool.len())].clone();
        let b = pool[rng.gen_range(0..pool.len())].clone();
        if a < b {
            return (a, b);
        }
    }
}

/// A union of up to three intervals and a few points, in one dimension.
pub fn random_set1<R: Rng>(rng: &mut R) -> PointSet {
    let pool = endpoint_pool();
    let mut s = PointSet::empty();
    for _ in 0..rng.gen_range(1..=3) {
        let (a, b) = random_interval(rng, &pool);
        s = s.union(&PointSet::interval(a, b).unwrap());
    }
    for _ in 0..rng.gen_range(0..=2) {
        s = s.union(&PointSet::tuple(vec![n(rng.gen_range(0..12))]).unwrap());
    }
    s
}

/// A union of up to three boxes in two dimensions.
pub fn random_set2<R: Rng>(rng: &mut R) -> PointSet {
    let pool = endpoint_pool();
    let mut s = PointSet::empty();
    for _ in 0..rng.gen_range(1..=3) {
        let (a, b) = random_interval(rng, &pool);
        let (c, d) = random_interval(rng, &pool);
        let bx = PointSet::interval(a, b).unwrap().product(&PointSet::interval(c, d).unwrap());
        s = s.union(&bx);
    }
    s
}

pub fn random_set<R: Rng>(rng: &mut R) -> PointSet {
    if rng.gen_bool(0.6) {
        random_set1(rng)
    } else {
        random_set2(rng)
    }
}

/// Pieces between random endpoints below `cap`, plus a few overrides.
pub fn random_sequence<R: Rng>(rng: &mut R, cap: &Ordinal) -> Sequence {
    let mut cuts: Vec<Ordinal> = endpoint_pool()
        .into_iter()
        .filter(|e| e <= cap)
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    cuts.sort();
    cuts.dedup();
    let pieces = cuts
        .windows(2)
        .map(|p| (p[0].clone(), p[1].clone(), BigInt::from(rng.gen_range(-3..=3))))
        .collect();
    let mut overrides = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=2) {
        let k = rng.gen_range(0..8u64);
        if &n(k) < cap {
            overrides.insert(n(k), BigInt::from(rng.gen_range(-4..=4)));
        }
    }
    Sequence::new(pieces, overrides).unwrap()
}

pub fn limit_keys() -> Vec<Ordinal> {
    vec![
        n(0),
        w(),
        wl(2, 0),
        wl(3, 0),
        wp(2),
        sum(&[wp(2), w()]),
        sum(&[wp(2), wp(2)]),
        wp(3),
    ]
}

/// A nonzero Euclidean integer with up to four keys and `|c| ≤ 256`.
pub fn random_eint<R: Rng>(rng: &mut R) -> EuclidInt {
    let keys = limit_keys();
    loop {
        let mut z = EuclidInt::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let k = &keys[rng.gen_range(0..keys.len())];
            let c = rng.gen_range(-256i64..=256);
            z = z + EuclidInt::monomial(k, BigInt::from(c)).unwrap();
        }
        if !z.is_zero() {
            return z;
        }
    }
}

/// Every key of the products `Ψ`-factors of `A` may combine with: the keys
/// of each endpoint and all their pairwise natural sums.
pub fn num_keys(a: &PointSet) -> Vec<Ordinal> {
    let mut base: Vec<Ordinal> = Vec::new();
    for e in a.endpoints() {
        base.extend(EuclidInt::psi(&e).unwrap().coeffs().keys().cloned());
    }
    base.extend(a.num().unwrap().coeffs().keys().cloned());
    base.sort();
    base.dedup();
    let mut out = base.clone();
    for x in &base {
        for y in &base {
            out.push(x.nat_sum(y).unwrap());
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn map_of<K: Ord + Clone, V: Clone>(pairs: &[(K, V)]) -> BTreeMap<K, V> {
    pairs.iter().cloned().collect()
}

/// Checks one JSON output line against the published schema:
/// `{verb, result, witness?, verdict_quality: exact|heuristic}` and nothing else.
pub fn check_schema(json: &str, verb: &str, text: &str) -> Result<(), String> {
    let v: serde_json::Value = serde_json::from_str(json).map_err(|e| format!("not json: {e}"))?;
    let obj = v.as_object().ok_or("not an object")?;
    for k in obj.keys() {
        if !["verb", "result", "witness", "verdict_quality"].contains(&k.as_str()) {
            return Err(format!("unexpected key {k}"));
        }
    }
    if obj.get("verb").and_then(|x| x.as_str()) != Some(verb) {
        return Err(format!("verb is not {verb}"));
    }
    if obj.get("result").and_then(|x| x.as_str()) != Some(text) {
        return Err("result differs from the text output".into());
    }
    if obj.get("witness").is_some_and(|x| !x.is_string()) {
        return Err("witness is not a string".into());
    }
    match obj.get("verdict_quality").and_then(|x| x.as_str()) {
        Some("exact") | Some("heuristic") => Ok(()),
        _ => Err("verdict_quality is not exact or heuristic".into()),
    }
}
