//! Command language of the `ordcalc` binary: tokenizer, parser and runner.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::euclid::{sample_chains, EuclideanInt, PartialSumExpr};
use crate::fincode::{cofinal_chain, decode, FilterBaseSet, FinOrdSet};
use crate::numerosity::{diff_witness, finmap_num, finset_num, partial_count, realize, Interval, PointSet};
use crate::ordinal::{Ordinal, Universe};
use crate::partition::{fip_check, FipFamily, FipVerdict, Homogeneous, Partition2};
use crate::sequence::StepSequence;
use crate::Error;

type EuclidInt = EuclideanInt<BigInt>;
type Sequence = StepSequence<BigInt>;

/// Environment variable holding the work budget.
pub const BUDGET_VAR: &str = "ORDCALC_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    /// 1-based character column.
    pub column: usize,
    pub expected: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: expected {}", self.column, self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Syntax(SyntaxError),
    Engine(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) => 2,
            CliError::Engine(Error::Budget(_)) => 3,
            CliError::Engine(Error::Precondition(_)) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Syntax(e) => write!(f, "{e}"),
            CliError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(BigUint),
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 21] = [
    "(+)", "(x)", "><", "+", "-", "*", "^", "(", ")", "[", "]", ",", "{", "}", "|", "&", "\\", "#", ":", "@", "=",
];

fn tokenize(input: &str) -> CliResult<Vec<(Tok, usize)>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Nat(digits.parse().expect("ascii digits")), start + 1));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start + 1));
            continue;
        }
        for sym in SYMBOLS {
            let len = sym.chars().count();
            if i + len <= chars.len() && chars[i..i + len].iter().copied().eq(sym.chars()) {
                out.push((Tok::Sym(sym), i + 1));
                i += len;
                continue 'outer;
            }
        }
        return Err(CliError::Syntax(SyntaxError {
            column: i + 1,
            expected: format!("a token, found `{c}`"),
        }));
    }
    Ok(out)
}

/// Kinds of `ψ` for the `partition` verb.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiKind {
    /// `|L_α|`
    Card,
    /// `|E| − |L_α|`
    Anticard,
    /// `|L_α| mod 2`
    Parity,
    /// `0`
    Const,
}

impl PsiKind {
    fn name(self) -> &'static str {
        match self {
            PsiKind::Card => "card",
            PsiKind::Anticard => "anticard",
            PsiKind::Parity => "parity",
            PsiKind::Const => "const",
        }
    }
}

/// What `num` and `count` act on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Set(PointSet),
    Seq(Sequence),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Ord(Ordinal),
    Nf(Ordinal),
    Cmp(PartialSumExpr, PartialSumExpr),
    Num(Operand),
    Count(Operand, Ordinal),
    Code(Ordinal),
    Chain(FinOrdSet),
    Realize(EuclidInt),
    Diff(PointSet, PointSet),
    Partition(PsiKind, FinOrdSet),
    Fip(Vec<FipFamily>, Option<FinOrdSet>),
    Eval(PartialSumExpr, Ordinal),
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Ord(_) => "ord",
            Command::Nf(_) => "nf",
            Command::Cmp(..) => "cmp",
            Command::Num(_) => "num",
            Command::Count(..) => "count",
            Command::Code(_) => "code",
            Command::Chain(_) => "chain",
            Command::Realize(_) => "realize",
            Command::Diff(..) => "diff",
            Command::Partition(..) => "partition",
            Command::Fip(..) => "fip",
            Command::Eval(..) => "eval",
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn fail<T>(&self, expected: &str) -> CliResult<T> {
        let found = match self.peek() {
            Some(t) => format!(", found {t}"),
            None => ", found end of input".to_string(),
        };
        Err(CliError::Syntax(SyntaxError {
            column: self.column(),
            expected: format!("{expected}{found}"),
        }))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> CliResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn expect_ident(&mut self, s: &str) -> CliResult<()> {
        if self.is_ident(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn expect_end(&self) -> CliResult<()> {
        if self.peek().is_some() {
            return self.fail("end of input");
        }
        Ok(())
    }

    fn nat(&mut self) -> CliResult<BigUint> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("a natural number"),
        }
    }

    // ord := prod (("+" | "(+)") prod)*
    fn ord(&mut self) -> CliResult<Ordinal> {
        let mut acc = self.ord_prod()?;
        loop {
            if self.eat_sym("+") {
                acc = acc.ord_sum(&self.ord_prod()?)?;
            } else if self.eat_sym("(+)") {
                acc = acc.nat_sum(&self.ord_prod()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    // prod := pow (("*" | "(x)") pow)*
    fn ord_prod(&mut self) -> CliResult<Ordinal> {
        let mut acc = self.ord_pow()?;
        loop {
            if self.eat_sym("*") {
                acc = acc.ord_mul(&self.ord_pow()?)?;
            } else if self.eat_sym("(x)") {
                acc = acc.nat_prod(&self.ord_pow()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    // pow := "w" "^" atom | "2" "^" atom | atom
    fn ord_pow(&mut self) -> CliResult<Ordinal> {
        let base = self.ord_atom()?;
        if !self.eat_sym("^") {
            return Ok(base);
        }
        let exp = self.ord_atom()?;
        if base == Ordinal::omega() {
            Ok(Ordinal::omega_pow(exp))
        } else if base == Ordinal::nat(2) {
            Ok(exp.pow2()?)
        } else {
            Err(CliError::Syntax(SyntaxError {
                column: self.column(),
                expected: "a power of `w` or `2`".to_string(),
            }))
        }
    }

    // atom := NAT | "w" | "(" ord ")"
    fn ord_atom(&mut self) -> CliResult<Ordinal> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let Some(k) = n.to_u64() else {
                    return Err(Error::budget(format!("{n} exceeds the finite-part cap")).into());
                };
                self.pos += 1;
                Ok(Ordinal::nat(k))
            }
            Some(Tok::Ident(s)) if s == "w" => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let o = self.ord()?;
                self.expect_sym(")")?;
                Ok(o)
            }
            _ => self.fail("an ordinal"),
        }
    }

    // "{" [ord ("," ord)*] "}"
    fn ord_set(&mut self) -> CliResult<FinOrdSet> {
        self.expect_sym("{")?;
        let mut s = FinOrdSet::new();
        if self.eat_sym("}") {
            return Ok(s);
        }
        loop {
            s.insert(self.ord()?);
            if self.eat_sym("}") {
                return Ok(s);
            }
            self.expect_sym(",")?;
        }
    }

    /// An index: an ordinal, or `{…}` listing its exponents.
    fn index(&mut self) -> CliResult<Ordinal> {
        if self.is_sym("{") {
            let s = self.ord_set()?;
            Ok(crate::fincode::encode(&s)?)
        } else {
            self.ord()
        }
    }

    // set := term (("|" | "\") term)*
    fn set(&mut self) -> CliResult<PointSet> {
        let mut acc = self.set_term()?;
        loop {
            if self.eat_sym("|") {
                acc = acc.union(&self.set_term()?);
            } else if self.eat_sym("\\") {
                acc = acc.difference(&self.set_term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := factor ("&" factor)*
    fn set_term(&mut self) -> CliResult<PointSet> {
        let mut acc = self.set_factor()?;
        while self.eat_sym("&") {
            acc = acc.intersect(&self.set_factor()?);
        }
        Ok(acc)
    }

    // factor := atom ("><" atom)*
    fn set_factor(&mut self) -> CliResult<PointSet> {
        let mut acc = self.set_atom()?;
        while self.eat_sym("><") {
            acc = acc.product(&self.set_atom()?);
        }
        Ok(acc)
    }

    // atom := "[" ord "," ord ")" | "{" [tuple ("," tuple)*] "}" | "(" set ")"
    fn set_atom(&mut self) -> CliResult<PointSet> {
        if self.eat_sym("[") {
            let lo = self.ord()?;
            self.expect_sym(",")?;
            let hi = self.ord()?;
            self.expect_sym(")")?;
            return Ok(PointSet::from_boxes(vec![vec![Interval::new(lo, hi)?]]));
        }
        if self.eat_sym("{") {
            let mut acc = PointSet::empty();
            if self.eat_sym("}") {
                return Ok(acc);
            }
            loop {
                acc = acc.union(&PointSet::tuple(self.tuple()?)?);
                if self.eat_sym("}") {
                    return Ok(acc);
                }
                self.expect_sym(",")?;
            }
        }
        if self.eat_sym("(") {
            let s = self.set()?;
            self.expect_sym(")")?;
            return Ok(s);
        }
        self.fail("a set")
    }

    // tuple := "(" ord ("," ord)* ")" | ord
    fn tuple(&mut self) -> CliResult<Vec<Ordinal>> {
        if !self.is_sym("(") {
            return Ok(vec![self.ord()?]);
        }
        self.pos += 1;
        let mut t = vec![self.ord()?];
        while self.eat_sym(",") {
            t.push(self.ord()?);
        }
        self.expect_sym(")")?;
        Ok(t)
    }

    // seq := piece ("+" piece)* ; piece := "[" ord "," ord ")" ":" INT | "@" ord ":" INT
    fn sequence(&mut self) -> CliResult<Sequence> {
        let mut pieces = Vec::new();
        let mut overrides = BTreeMap::new();
        loop {
            if self.eat_sym("@") {
                let a = self.ord()?;
                self.expect_sym(":")?;
                overrides.insert(a, self.int()?);
            } else {
                self.expect_sym("[")?;
                let lo = self.ord()?;
                self.expect_sym(",")?;
                let hi = self.ord()?;
                self.expect_sym(")")?;
                self.expect_sym(":")?;
                pieces.push((lo, hi, self.int()?));
            }
            if !self.eat_sym("+") {
                return Ok(StepSequence::new(pieces, overrides)?);
            }
        }
    }

    fn int(&mut self) -> CliResult<BigInt> {
        let neg = self.eat_sym("-");
        let n = BigInt::from(self.nat()?);
        Ok(if neg { -n } else { n })
    }

    /// A step sequence if the input looks like one, else a point set.
    fn operand(&mut self) -> CliResult<Operand> {
        let start = self.pos;
        if self.is_sym("@") {
            return Ok(Operand::Seq(self.sequence()?));
        }
        if self.is_sym("[") {
            // `[a,b):` opens a sequence
            let mut depth = 0usize;
            let mut k = 0;
            while let Some(t) = self.peek_at(k) {
                match t {
                    Tok::Sym("(") | Tok::Sym("[") => depth += 1,
                    Tok::Sym(")") => {
                        depth -= 1;
                        if depth == 0 {
                            if self.peek_at(k + 1) == Some(&Tok::Sym(":")) {
                                return Ok(Operand::Seq(self.sequence()?));
                            }
                            break;
                        }
                    }
                    _ => {}
                }
                k += 1;
            }
        }
        self.pos = start;
        Ok(Operand::Set(self.set()?))
    }

    // pexpr := pterm (("+" | "-") pterm)*
    fn pexpr(&mut self) -> CliResult<PartialSumExpr> {
        let mut acc = self.pterm()?;
        loop {
            if self.eat_sym("+") {
                acc = PartialSumExpr::Add(Box::new(acc), Box::new(self.pterm()?));
            } else if self.eat_sym("-") {
                acc = PartialSumExpr::Sub(Box::new(acc), Box::new(self.pterm()?));
            } else {
                return Ok(simplify(acc));
            }
        }
    }

    // pterm := pfactor ("*" pfactor)*
    fn pterm(&mut self) -> CliResult<PartialSumExpr> {
        let mut acc = self.pfactor()?;
        while self.eat_sym("*") {
            acc = PartialSumExpr::Mul(Box::new(acc), Box::new(self.pfactor()?));
        }
        Ok(acc)
    }

    // pfactor := "-" pfactor | patom ["^" pfactor]
    fn pfactor(&mut self) -> CliResult<PartialSumExpr> {
        if self.eat_sym("-") {
            let inner = self.pfactor()?;
            return Ok(PartialSumExpr::Sub(Box::new(PartialSumExpr::constant(0)), Box::new(inner)));
        }
        let base = self.patom()?;
        if !self.eat_sym("^") {
            return Ok(base);
        }
        let exp = self.pfactor()?;
        Ok(if base == PartialSumExpr::constant(2) {
            PartialSumExpr::Pow2(Box::new(exp))
        } else {
            PartialSumExpr::PowBase(Box::new(base), Box::new(exp))
        })
    }

    // patom := INT | "P(" ord ")" | "psi(" ord ")" | "n(" set ")" | "#" set-atom
    //        | "finset(" set ")" | "finmap(" set "," set ")" | "(" pexpr ")"
    fn patom(&mut self) -> CliResult<PartialSumExpr> {
        let call = |p: &mut Parser, name: &str| -> CliResult<bool> {
            if p.is_ident(name) && p.peek_at(1) == Some(&Tok::Sym("(")) {
                p.pos += 2;
                return Ok(true);
            }
            Ok(false)
        };
        if let Some(Tok::Nat(n)) = self.peek() {
            let n = BigInt::from(n.clone());
            self.pos += 1;
            return Ok(PartialSumExpr::Const(n));
        }
        if call(self, "P")? {
            let e = self.ord()?;
            self.expect_sym(")")?;
            return Ok(PartialSumExpr::Euclid(EuclidInt::monomial(&e, BigInt::one())?));
        }
        if call(self, "psi")? {
            let a = self.ord()?;
            self.expect_sym(")")?;
            return Ok(PartialSumExpr::Euclid(EuclidInt::psi(&a)?));
        }
        if call(self, "n")? {
            let s = self.set()?;
            self.expect_sym(")")?;
            return Ok(PartialSumExpr::Euclid(s.num()?));
        }
        if call(self, "finset")? {
            let s = self.one_dim_set()?;
            self.expect_sym(")")?;
            return Ok(finset_num(&s));
        }
        if call(self, "finmap")? {
            let x = self.one_dim_set()?;
            self.expect_sym(",")?;
            let y = self.one_dim_set()?;
            self.expect_sym(")")?;
            return Ok(finmap_num(&x, &y));
        }
        if self.eat_sym("#") {
            let col = self.column();
            let s = self.set_atom()?;
            return Ok(PartialSumExpr::CountIn(one_dim(s, col)?));
        }
        if self.eat_sym("(") {
            let e = self.pexpr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        self.fail("an expression")
    }

    fn one_dim_set(&mut self) -> CliResult<PointSet> {
        let col = self.column();
        let s = self.set()?;
        one_dim(s, col)
    }

    fn family(&mut self) -> CliResult<FipFamily> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) if ["C", "D", "Q"].contains(&s.as_str()) => s.clone(),
            _ => return self.fail("`C(..)`, `D(..)` or `Q(..)`"),
        };
        self.pos += 1;
        self.expect_sym("(")?;
        let fam = match name.as_str() {
            "C" => FipFamily::Base(FilterBaseSet::Cone(self.ord()?)),
            "D" => {
                let eta = self.ord()?;
                if self.eat_sym(",") {
                    FipFamily::Base(FilterBaseSet::DCone(eta, self.ord()?))
                } else {
                    FipFamily::Base(FilterBaseSet::D(eta))
                }
            }
            _ => {
                let a = self.one_dim_set()?;
                self.expect_sym(",")?;
                let b = self.one_dim_set()?;
                FipFamily::Q(a, b)
            }
        };
        self.expect_sym(")")?;
        Ok(fam)
    }
}

fn one_dim(s: PointSet, column: usize) -> CliResult<PointSet> {
    if s.dims().any(|n| n != 1) {
        return Err(CliError::Syntax(SyntaxError {
            column,
            expected: "a one-dimensional set".to_string(),
        }));
    }
    Ok(s)
}

/// Folds ring operations on Euclidean integers so that inputs such as
/// `2*P(w) - 3` become a single normal form.
fn simplify(e: PartialSumExpr) -> PartialSumExpr {
    match e.as_euclid() {
        Some(z) => PartialSumExpr::Euclid(z),
        None => e,
    }
}

/// Parses one command line.
pub fn parse(input: &str) -> CliResult<Command> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: input.chars().count() + 1,
    };
    let verb = match p.peek() {
        Some(Tok::Ident(v)) => v.clone(),
        _ => return p.fail("a verb"),
    };
    p.pos += 1;
    let cmd = match verb.as_str() {
        "ord" => Command::Ord(p.ord()?),
        "nf" => Command::Nf(p.ord()?),
        "code" => Command::Code(p.ord()?),
        "chain" => Command::Chain(p.ord_set()?),
        "cmp" => {
            let a = p.pexpr()?;
            p.eat_sym(",");
            Command::Cmp(a, p.pexpr()?)
        }
        "num" => Command::Num(p.operand()?),
        "count" => {
            let x = p.operand()?;
            p.expect_ident("at")?;
            Command::Count(x, p.index()?)
        }
        "realize" => {
            let col = p.column();
            match p.pexpr()?.as_euclid() {
                Some(z) => Command::Realize(z),
                None => {
                    return Err(CliError::Syntax(SyntaxError {
                        column: col,
                        expected: "a Euclidean integer".to_string(),
                    }))
                }
            }
        }
        "diff" => {
            let a = p.set()?;
            p.eat_sym(",");
            Command::Diff(a, p.set()?)
        }
        "partition" => {
            let kind = match p.peek() {
                Some(Tok::Ident(k)) => match k.as_str() {
                    "card" => PsiKind::Card,
                    "anticard" => PsiKind::Anticard,
                    "parity" => PsiKind::Parity,
                    "const" => PsiKind::Const,
                    _ => return p.fail("`card`, `anticard`, `parity` or `const`"),
                },
                _ => return p.fail("`card`, `anticard`, `parity` or `const`"),
            };
            p.pos += 1;
            p.expect_ident("on")?;
            Command::Partition(kind, p.ord_set()?)
        }
        "fip" => {
            let mut fams = vec![p.family()?];
            while p.eat_sym("&") {
                fams.push(p.family()?);
            }
            let e = if p.is_ident("in") {
                p.pos += 1;
                Some(p.ord_set()?)
            } else {
                None
            };
            Command::Fip(fams, e)
        }
        "eval" => {
            let e = p.pexpr()?;
            p.expect_ident("at")?;
            Command::Eval(e, p.index()?)
        }
        _ => {
            p.pos -= 1;
            return p.fail("one of ord, nf, cmp, num, count, code, chain, realize, diff, partition, fip, eval");
        }
    };
    p.expect_end()?;
    Ok(cmd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quality {
    Exact,
    Heuristic,
}

/// The result of a command, in the shape of the JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Output {
    pub verb: String,
    pub result: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub verdict_quality: Quality,
}

impl Output {
    fn exact(verb: &str, result: impl ToString) -> Self {
        Output {
            verb: verb.to_string(),
            result: result.to_string(),
            witness: None,
            verdict_quality: Quality::Exact,
        }
    }

    fn with_witness(mut self, w: impl ToString) -> Self {
        self.witness = Some(w.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("output serialises")
    }

    /// The text rendering.
    pub fn text(&self) -> String {
        self.result.clone()
    }
}

fn verdict(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "LT",
        Ordering::Equal => "EQ",
        Ordering::Greater => "GT",
    }
}

/// Exponents and limit runs of every ordinal an expression mentions.
fn sampling_universe(exprs: &[&PartialSumExpr]) -> CliResult<FinOrdSet> {
    let mut e = FinOrdSet::new();
    for x in exprs {
        for o in x.ordinals() {
            for ex in o.exponents() {
                let (lambda, k) = ex.limit_split();
                e.insert(lambda.clone());
                for i in 0..k.min(4) {
                    e.insert(lambda.ord_sum(&Ordinal::nat(i))?);
                }
            }
            if o.is_limit() {
                e.insert(o.clone());
            }
        }
    }
    Ok(e)
}

/// Runs a parsed command.
pub fn run(cmd: &Command, universe: &Universe) -> CliResult<Output> {
    let verb = cmd.verb();
    Ok(match cmd {
        Command::Ord(a) => Output::exact(verb, a),
        Command::Nf(a) => Output::exact(verb, a.base2_string()),
        Command::Code(a) => Output::exact(verb, decode(a)),
        Command::Chain(e) => {
            let lines: Vec<String> = cofinal_chain(e, universe)?
                .iter()
                .map(|d| format!("{d} {}", decode(d)))
                .collect();
            Output::exact(verb, lines.join("\n"))
        }
        Command::Cmp(a, b) => match (a.as_euclid(), b.as_euclid()) {
            (Some(x), Some(y)) => {
                let (o, w) = x.compare(&y);
                Output::exact(verb, format!("{}, witness θ={}", verdict(o), w.theta)).with_witness(w.theta)
            }
            _ => {
                let e = sampling_universe(&[a, b])?;
                let chains = sample_chains(&e, 8);
                let v = PartialSumExpr::compare_sampled(a, b, &chains, universe)?;
                let word = v.verdict.map_or("UNKNOWN", verdict);
                Output {
                    verb: verb.to_string(),
                    result: format!("{word}, heuristic over {} samples", v.samples),
                    witness: None,
                    verdict_quality: Quality::Heuristic,
                }
            }
        },
        Command::Num(Operand::Set(s)) => Output::exact(verb, s.num()?),
        Command::Num(Operand::Seq(x)) => {
            let w = crate::euclid::step_witness(x)?;
            Output::exact(verb, EuclidInt::from_step(x)?).with_witness(w)
        }
        Command::Count(Operand::Set(s), d) => Output::exact(verb, partial_count(s, d, universe)?),
        Command::Count(Operand::Seq(x), d) => Output::exact(verb, x.counting(d)),
        Command::Realize(z) => Output::exact(verb, realize(z)?),
        Command::Diff(a, b) => {
            let c = diff_witness(a, b)?;
            let n = c.num()?;
            Output::exact(verb, c).with_witness(n)
        }
        Command::Partition(kind, e) => partition_report(*kind, e, universe)?,
        Command::Fip(fams, e) => {
            let default: FinOrdSet = (0..8).map(Ordinal::nat).collect();
            let scale = e.clone().unwrap_or(default);
            match fip_check(fams, &scale, universe)? {
                FipVerdict::Found(d) => Output::exact(verb, format!("FOUND {d} {}", decode(&d))).with_witness(d),
                FipVerdict::InconclusiveAtScale => Output {
                    verb: verb.to_string(),
                    result: format!("INCONCLUSIVE at scale {scale}"),
                    witness: None,
                    verdict_quality: Quality::Heuristic,
                },
            }
        }
        Command::Eval(e, d) => Output::exact(verb, e.eval(d, universe)?),
    })
}

fn partition_report(kind: PsiKind, e: &FinOrdSet, universe: &Universe) -> CliResult<Output> {
    let n = e.len() as u64;
    let space = crate::fincode::CodeSpace::new(e, universe)?;
    let psi: BTreeMap<Ordinal, u64> = space
        .iter()
        .map(|a| {
            let c = a.exponent_count();
            let v = match kind {
                PsiKind::Card => c,
                PsiKind::Anticard => n - c,
                PsiKind::Parity => c % 2,
                PsiKind::Const => 0,
            };
            (a, v)
        })
        .collect();
    let g = Partition2::g_psi(&psi, e, universe)?;
    let zeros = g.zero_pairs().len();
    let join = |v: &[Ordinal], sep: &str| v.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(sep);
    let (verdict, witness) = match g.homogeneous_search(universe)? {
        Homogeneous::Found { set, color } => (
            format!("homogeneous, color {color}, {} codes", set.len()),
            format!("{{{}}}", join(&set, ", ")),
        ),
        Homogeneous::Obstruction { chain } => (format!("0-chain at scale {e}"), join(&chain, " -> ")),
    };
    let result = format!(
        "universe: {e}\nsource: {}\nzero pairs: {zeros}\nverdict: {verdict}\nwitness: {witness}",
        kind.name()
    );
    Ok(Output::exact("partition", result).with_witness(witness))
}

/// Work budget from the environment value, if set.
pub fn budget_from_env(value: Option<&str>) -> Result<Universe, String> {
    match value {
        None => Ok(Universe::default()),
        Some(v) => v
            .trim()
            .parse::<u64>()
            .map(Universe::with_work_budget)
            .map_err(|_| format!("{BUDGET_VAR} must be a natural number, got `{v}`")),
    }
}

/// Parses and runs a line.
pub fn execute(line: &str, universe: &Universe) -> CliResult<Output> {
    run(&parse(line)?, universe)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(line: &str) -> String {
        execute(line, &Universe::default()).unwrap().text()
    }

    fn code(line: &str) -> i32 {
        execute(line, &Universe::default()).unwrap_err().exit_code()
    }

    #[test]
    fn examples() {
        assert!(out("cmp 2*P(w)-3 P(w)").starts_with("GT, witness θ="));
        assert_eq!(out("num ([0,w) >< [0,w))"), "P(w*2)");
        assert_eq!(out("code w"), "{w}");
        assert_eq!(out("eval P(w) at {w,3,1}"), "4");
        assert_eq!(out("realize 2*P(w)-3"), "[3, w*2)");
        assert_eq!(out("ord w (+) w"), "w*2");
    }

    #[test]
    fn ordinal_grammar() {
        assert_eq!(out("ord 1 + w"), "w");
        assert_eq!(out("ord w + 1"), "w + 1");
        assert_eq!(out("ord 2^(w+1)"), "w*2");
        assert_eq!(out("ord (w+1)*(w+1)"), "w^2 + w + 1");
        assert_eq!(out("ord (w+1)(x)(w+1)"), "w^2 + w*2 + 1");
        assert_eq!(out("ord w^(w+1)*3 + w^2"), "w^(w + 1)*3 + w^2");
        assert_eq!(out("nf w*2 + 1"), "2^(w + 1) + 2^(0)");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code("ord w +"), 2);
        assert_eq!(code("frobnicate 3"), 2);
        assert_eq!(code("ord 3 ^ 2"), 2);
        assert_eq!(code("num [3,3)"), 4);
        assert_eq!(code("realize 3 - P(w)"), 4);
        assert_eq!(code("chain {0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23,24,25}"), 3);
    }

    #[test]
    fn syntax_error_positions() {
        let err = parse("ord w + ]").unwrap_err();
        assert_eq!(err.to_string(), "syntax error at column 9: expected an ordinal, found `]`");
        let err = parse("ord w w").unwrap_err();
        assert_eq!(err.to_string(), "syntax error at column 7: expected end of input, found `w`");
    }

    #[test]
    fn sequences() {
        assert_eq!(out("num [0,w):2 + @3:7"), "2*P(w) + 5");
        assert_eq!(out("count [0,w):1 at {w,3,1}"), "4");
    }
}
