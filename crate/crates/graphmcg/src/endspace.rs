//! Expression language for end spaces.
//!
//! An [`EndSpaceExpr`] denotes a nonempty compact, totally disconnected,
//! metrizable space — a closed subset of the Cantor set `2^ℕ` — together
//! with a closed "marked" subset (the ends accumulated by loops). Every
//! expression comes with a fixed structural embedding into `2^ℕ`, so
//! cylinder sets, emptiness and point membership are all decidable by
//! prefix arithmetic.
//!
//! Embedding conventions:
//! - `Sum` of `k` parts spends the first `⌈log₂ k⌉` bits as a selector
//!   (most significant bit first); selector values `≥ k` are empty.
//! - `Seq` places copy `n` of its body under the prefix `1ⁿ0` and the limit
//!   end at the all-ones sequence.
//! - `CantorSet` is the identity embedding and `Pt` sits at the all-zeros
//!   sequence.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Plain,
    Loops,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EndSpaceExpr {
    /// A single end.
    Pt(Mark),
    /// Finite disjoint union, at least one summand.
    Sum(Vec<EndSpaceExpr>),
    /// Countably many disjoint clopen copies of the body converging to a
    /// single limit end carrying the given mark.
    Seq(Box<EndSpaceExpr>, Mark),
    /// A Cantor set, every end carrying the given mark.
    CantorSet(Mark),
}

/// Checking whether a selected subset is finite, countable or uncountable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Finite(u64),
    CountablyInfinite,
    Uncountable,
}

impl Cardinality {
    pub fn is_finite(self) -> bool {
        matches!(self, Cardinality::Finite(_))
    }

    pub fn is_empty(self) -> bool {
        self == Cardinality::Finite(0)
    }

    fn add(self, other: Cardinality) -> Cardinality {
        use Cardinality::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (Uncountable, _) | (_, Uncountable) => Uncountable,
            _ => CountablyInfinite,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::CountablyInfinite => write!(f, "aleph0"),
            Cardinality::Uncountable => write!(f, "uncountable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkFilter {
    All,
    Marked,
    Unmarked,
}

impl MarkFilter {
    fn selects(self, mark: Mark) -> bool {
        match self {
            MarkFilter::All => true,
            MarkFilter::Marked => mark == Mark::Loops,
            MarkFilter::Unmarked => mark == Mark::Plain,
        }
    }
}

/// Path to a subexpression: child indices from the root (`Seq` has one child).
pub type ExprPath = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A `Sum` with no summands denotes the empty space.
    EmptySum { path: ExprPath },
    /// A `Seq(body, plain)` whose body contains a marked end: the limit end
    /// would be an unmarked accumulation point of marked ends, so the marked
    /// set would not be closed.
    MarkedSetNotClosed { path: ExprPath },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl EndSpaceExpr {
    pub fn pt(mark: Mark) -> Self {
        EndSpaceExpr::Pt(mark)
    }

    pub fn sum(parts: Vec<EndSpaceExpr>) -> Self {
        EndSpaceExpr::Sum(parts)
    }

    pub fn seq(body: EndSpaceExpr, limit: Mark) -> Self {
        EndSpaceExpr::Seq(Box::new(body), limit)
    }

    pub fn cantor(mark: Mark) -> Self {
        EndSpaceExpr::CantorSet(mark)
    }

    pub fn contains_marked(&self) -> bool {
        match self {
            EndSpaceExpr::Pt(m) | EndSpaceExpr::CantorSet(m) => *m == Mark::Loops,
            EndSpaceExpr::Sum(parts) => parts.iter().any(|p| p.contains_marked()),
            EndSpaceExpr::Seq(body, m) => *m == Mark::Loops || body.contains_marked(),
        }
    }

    pub fn validate(&self) -> ValidityReport {
        let mut report = ValidityReport::default();
        self.validate_at(&mut Vec::new(), &mut report);
        report
    }

    fn validate_at(&self, path: &mut ExprPath, report: &mut ValidityReport) {
        match self {
            EndSpaceExpr::Pt(_) | EndSpaceExpr::CantorSet(_) => {}
            EndSpaceExpr::Sum(parts) => {
                if parts.is_empty() {
                    report.violations.push(Violation::EmptySum { path: path.clone() });
                }
                for (i, part) in parts.iter().enumerate() {
                    path.push(i);
                    part.validate_at(path, report);
                    path.pop();
                }
            }
            EndSpaceExpr::Seq(body, limit) => {
                if *limit == Mark::Plain && body.contains_marked() {
                    report
                        .violations
                        .push(Violation::MarkedSetNotClosed { path: path.clone() });
                }
                path.push(0);
                body.validate_at(path, report);
                path.pop();
            }
        }
    }

    /// Cardinality of the subset selected by the filter.
    pub fn cardinality(&self, filter: MarkFilter) -> Cardinality {
        match self {
            EndSpaceExpr::Pt(m) => Cardinality::Finite(filter.selects(*m) as u64),
            EndSpaceExpr::CantorSet(m) => {
                if filter.selects(*m) {
                    Cardinality::Uncountable
                } else {
                    Cardinality::Finite(0)
                }
            }
            EndSpaceExpr::Sum(parts) => parts
                .iter()
                .fold(Cardinality::Finite(0), |acc, p| acc.add(p.cardinality(filter))),
            EndSpaceExpr::Seq(body, limit) => {
                let limit_count = Cardinality::Finite(filter.selects(*limit) as u64);
                match body.cardinality(filter) {
                    Cardinality::Finite(0) => limit_count,
                    Cardinality::Uncountable => Cardinality::Uncountable,
                    _ => Cardinality::CountablyInfinite,
                }
            }
        }
    }

    /// True iff every unmarked end is isolated in the whole space.
    ///
    /// Every subexpression copy is clopen in the full space, so isolation can
    /// be decided locally; the only cross-copy accumulation happens at a
    /// `Seq` limit.
    fn all_unmarked_isolated(&self) -> bool {
        match self {
            EndSpaceExpr::Pt(_) => true,
            EndSpaceExpr::CantorSet(m) => *m == Mark::Loops,
            EndSpaceExpr::Sum(parts) => parts.iter().all(|p| p.all_unmarked_isolated()),
            EndSpaceExpr::Seq(_, Mark::Plain) => false,
            EndSpaceExpr::Seq(body, Mark::Loops) => body.all_unmarked_isolated(),
        }
    }

    /// True iff some end that is not marked is an accumulation point of the
    /// space.
    pub fn has_accumulation_point_in_unmarked(&self) -> bool {
        !self.all_unmarked_isolated()
    }

    /// Witness for "the infinite tree part fits inside a compact open set":
    /// true iff there is a compact open `K` inside the unmarked part such
    /// that every unmarked end outside `K` is isolated in the space.
    fn has_compact_open_tree_witness(&self) -> bool {
        match self {
            EndSpaceExpr::Pt(_) | EndSpaceExpr::CantorSet(_) => true,
            EndSpaceExpr::Sum(parts) => parts.iter().all(|p| p.has_compact_open_tree_witness()),
            // A valid plain-limit sequence is entirely unmarked, so the whole
            // clopen subspace serves as K.
            EndSpaceExpr::Seq(_, Mark::Plain) => true,
            // A compact open K misses the marked limit, hence meets only
            // finitely many copies; the remaining copies must consist of
            // isolated unmarked ends.
            EndSpaceExpr::Seq(body, Mark::Loops) => body.all_unmarked_isolated(),
        }
    }

    /// True iff no compact open subset of the unmarked part absorbs all its
    /// non-isolated ends — the end-space reformulation of "infinitely many
    /// tree components with infinite end spaces".
    pub fn infinite_tree_part_exceeds_compact_open(&self) -> bool {
        !self.has_compact_open_tree_witness()
    }
}

// ---------------------------------------------------------------------------
// Cylinders and the structural embedding
// ---------------------------------------------------------------------------

/// A binary prefix address; the empty address denotes the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Address(pub Vec<bool>);

impl Address {
    pub fn empty() -> Self {
        Address(Vec::new())
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, bit: bool) -> Address {
        let mut bits = self.0.clone();
        bits.push(bit);
        Address(bits)
    }

    pub fn parent(&self) -> Option<(Address, bool)> {
        let mut bits = self.0.clone();
        bits.pop().map(|last| (Address(bits), last))
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Little-endian numeric value; matches the order in which basis
    /// addresses of a fixed width are enumerated.
    pub fn le_value(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| (b as u64) << i)
            .sum()
    }

    pub fn from_le_value(width: usize, value: u64) -> Address {
        Address((0..width).map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn parse(text: &str) -> Result<Address, EndSpaceError> {
        let mut bits = Vec::new();
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(EndSpaceError::BadAddress { found: c }),
            }
        }
        Ok(Address(bits))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// An eventually periodic point of `2^ℕ`: a finite preperiod followed by a
/// repeating nonempty period.
#[derive(Debug, Clone, Eq)]
pub struct EndPoint {
    preperiod: Vec<bool>,
    period: Vec<bool>,
}

impl EndPoint {
    pub fn new(preperiod: Vec<bool>, period: Vec<bool>) -> Result<Self, EndSpaceError> {
        if period.is_empty() {
            return Err(EndSpaceError::EmptyPeriod);
        }
        let mut p = EndPoint { preperiod, period };
        p.normalize();
        Ok(p)
    }

    pub fn constant(bit: bool) -> Self {
        EndPoint { preperiod: Vec::new(), period: vec![bit] }
    }

    pub fn bit(&self, i: usize) -> bool {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, width: usize) -> Address {
        Address((0..width).map(|i| self.bit(i)).collect())
    }

    pub fn has_prefix(&self, address: &Address) -> bool {
        address.0.iter().enumerate().all(|(i, &b)| self.bit(i) == b)
    }

    /// Drop the first `n` bits.
    fn shift(&self, n: usize) -> EndPoint {
        if n <= self.preperiod.len() {
            let mut p = EndPoint {
                preperiod: self.preperiod[n..].to_vec(),
                period: self.period.clone(),
            };
            p.normalize();
            p
        } else {
            let k = (n - self.preperiod.len()) % self.period.len();
            let mut period = self.period.clone();
            period.rotate_left(k);
            let mut p = EndPoint { preperiod: Vec::new(), period };
            p.normalize();
            p
        }
    }

    fn prepend(&self, bits: &[bool]) -> EndPoint {
        let mut preperiod = bits.to_vec();
        preperiod.extend_from_slice(&self.preperiod);
        let mut p = EndPoint { preperiod, period: self.period.clone() };
        p.normalize();
        p
    }

    /// First index carrying a zero bit, or `None` for the all-ones point.
    fn first_zero(&self) -> Option<usize> {
        if let Some(i) = self.preperiod.iter().position(|&b| !b) {
            return Some(i);
        }
        self.period
            .iter()
            .position(|&b| !b)
            .map(|j| self.preperiod.len() + j)
    }

    fn normalize(&mut self) {
        // shrink the period to its primitive root
        let n = self.period.len();
        for d in 1..n {
            if n % d == 0 && (0..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // absorb a periodic tail of the preperiod into the period
        while let Some(&last) = self.preperiod.last() {
            if last == *self.period.last().unwrap() {
                self.preperiod.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }
}

impl PartialEq for EndPoint {
    fn eq(&self, other: &Self) -> bool {
        self.preperiod == other.preperiod && self.period == other.period
    }
}

impl std::hash::Hash for EndPoint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.preperiod.hash(state);
        self.period.hash(state);
    }
}

impl fmt::Display for EndPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.preperiod {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        write!(f, "(")?;
        for &b in &self.period {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        write!(f, ")*")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndSpaceError {
    #[error("address may only contain binary digits, found {found:?}")]
    BadAddress { found: char },
    #[error("end point period must be nonempty")]
    EmptyPeriod,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl EndSpaceExpr {
    /// Decides whether the cylinder at `address` meets the embedded space.
    pub fn cylinder_is_empty(&self, address: &Address) -> bool {
        !self.cylinder_nonempty(&address.0)
    }

    fn cylinder_nonempty(&self, bits: &[bool]) -> bool {
        match self {
            EndSpaceExpr::Pt(_) => bits.iter().all(|&b| !b),
            EndSpaceExpr::CantorSet(_) => true,
            EndSpaceExpr::Sum(parts) => {
                let s = selector_width(parts.len());
                if bits.len() < s {
                    (0..parts.len() as u64).any(|i| {
                        let enc = selector_bits(i, s);
                        enc[..bits.len()] == bits[..]
                    })
                } else {
                    match selector_index(&bits[..s], parts.len()) {
                        Some(i) => parts[i].cylinder_nonempty(&bits[s..]),
                        None => false,
                    }
                }
            }
            EndSpaceExpr::Seq(body, _) => {
                let ones = bits.iter().take_while(|&&b| b).count();
                if ones == bits.len() {
                    true // contains the limit end and all later copies
                } else {
                    body.cylinder_nonempty(&bits[ones + 1..])
                }
            }
        }
    }

    /// The nonempty children of a nonempty cylinder. They partition it.
    pub fn cylinder_children(&self, address: &Address) -> Vec<Address> {
        [false, true]
            .into_iter()
            .map(|b| address.child(b))
            .filter(|c| !self.cylinder_is_empty(c))
            .collect()
    }

    /// Membership of a point in the embedded space.
    pub fn contains_point(&self, p: &EndPoint) -> bool {
        match self {
            EndSpaceExpr::Pt(_) => *p == EndPoint::constant(false),
            EndSpaceExpr::CantorSet(_) => true,
            EndSpaceExpr::Sum(parts) => {
                let s = selector_width(parts.len());
                let bits: Vec<bool> = (0..s).map(|i| p.bit(i)).collect();
                match selector_index(&bits, parts.len()) {
                    Some(i) => parts[i].contains_point(&p.shift(s)),
                    None => false,
                }
            }
            EndSpaceExpr::Seq(body, _) => match p.first_zero() {
                None => true, // the limit end
                Some(n) => body.contains_point(&p.shift(n + 1)),
            },
        }
    }

    /// Membership of a point in a cylinder of the space.
    pub fn member_of(&self, p: &EndPoint, address: &Address) -> bool {
        self.contains_point(p) && p.has_prefix(address)
    }

    /// Mark carried by a point of the space.
    pub fn mark_of_point(&self, p: &EndPoint) -> Option<Mark> {
        match self {
            EndSpaceExpr::Pt(m) | EndSpaceExpr::CantorSet(m) => {
                self.contains_point(p).then_some(*m)
            }
            EndSpaceExpr::Sum(parts) => {
                let s = selector_width(parts.len());
                let bits: Vec<bool> = (0..s).map(|i| p.bit(i)).collect();
                let i = selector_index(&bits, parts.len())?;
                parts[i].mark_of_point(&p.shift(s))
            }
            EndSpaceExpr::Seq(body, limit) => match p.first_zero() {
                None => Some(*limit),
                Some(n) => body.mark_of_point(&p.shift(n + 1)),
            },
        }
    }

    /// A canonical member of a nonempty cylinder. With `greedy_ones` the
    /// completion prefers the 1-child whenever it is nonempty, which is the
    /// tail rule used by the basis-independence argument.
    pub fn member_point(&self, address: &Address, greedy_ones: bool) -> Option<EndPoint> {
        if self.cylinder_is_empty(address) {
            return None;
        }
        Some(self.member_point_inner(&address.0, greedy_ones))
    }

    fn member_point_inner(&self, bits: &[bool], greedy: bool) -> EndPoint {
        match self {
            EndSpaceExpr::Pt(_) => EndPoint::constant(false),
            EndSpaceExpr::CantorSet(_) => {
                EndPoint::constant(greedy).prepend(bits)
            }
            EndSpaceExpr::Sum(parts) => {
                let s = selector_width(parts.len());
                if bits.len() >= s {
                    let i = selector_index(&bits[..s], parts.len())
                        .expect("nonempty cylinder");
                    parts[i].member_point_inner(&bits[s..], greedy).prepend(&bits[..s])
                } else {
                    // choose the extreme selector consistent with the prefix
                    let candidates = (0..parts.len() as u64)
                        .filter(|&i| selector_bits(i, s)[..bits.len()] == bits[..]);
                    let i = if greedy {
                        candidates.max().expect("nonempty cylinder")
                    } else {
                        candidates.min().expect("nonempty cylinder")
                    };
                    let enc = selector_bits(i, s);
                    parts[i as usize]
                        .member_point_inner(&[], greedy)
                        .prepend(&enc)
                }
            }
            EndSpaceExpr::Seq(body, _) => {
                let ones = bits.iter().take_while(|&&b| b).count();
                if ones < bits.len() {
                    let inner = body.member_point_inner(&bits[ones + 1..], greedy);
                    let mut prefix = vec![true; ones];
                    prefix.push(false);
                    inner.prepend(&prefix)
                } else if greedy {
                    EndPoint::constant(true) // the limit end
                } else {
                    let inner = body.member_point_inner(&[], greedy);
                    let mut prefix = vec![true; ones];
                    prefix.push(false);
                    inner.prepend(&prefix)
                }
            }
        }
    }

    /// All nonempty cylinders of the given width.
    pub fn leaves_at(&self, width: usize) -> Vec<Address> {
        (0..(1u64 << width))
            .map(|v| Address::from_le_value(width, v))
            .filter(|a| !self.cylinder_is_empty(a))
            .collect()
    }
}

fn selector_width(parts: usize) -> usize {
    debug_assert!(parts >= 1);
    (usize::BITS - (parts - 1).leading_zeros()) as usize
}

/// Most-significant-bit-first encoding of a selector value.
fn selector_bits(index: u64, width: usize) -> Vec<bool> {
    (0..width).map(|i| (index >> (width - 1 - i)) & 1 == 1).collect()
}

fn selector_index(bits: &[bool], parts: usize) -> Option<usize> {
    let mut v: usize = 0;
    for &b in bits {
        v = (v << 1) | b as usize;
    }
    (v < parts).then_some(v)
}

// ---------------------------------------------------------------------------
// Parser for the textual grammar
// ---------------------------------------------------------------------------

/// Grammar: `pt`, `pt!`, `sum(e1, e2, ...)`, `seq(e)`, `seq!(e)`, `cantor`,
/// `cantor!`. A trailing `!` marks ends as accumulated by loops; for `seq`
/// it marks the limit end. Whitespace-insensitive.
pub fn parse_end_space(input: &str) -> Result<EndSpaceExpr, EndSpaceError> {
    let mut parser = Parser::new(input);
    let expr = parser.expr()?;
    parser.skip_ws();
    if !parser.done() {
        return Err(parser.error("trailing input after expression"));
    }
    Ok(expr)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { input: input.as_bytes(), pos: 0 }
    }

    fn done(&self) -> bool {
        self.pos >= self.input.len()
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn line_column(&self) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.input[..self.pos] {
            if c == b'\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error(&self, message: &str) -> EndSpaceError {
        let (line, column) = self.line_column();
        EndSpaceError::Parse { line, column, message: message.to_string() }
    }

    fn keyword(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.input[start..self.pos]).into_owned()
    }

    fn eat(&mut self, c: u8, what: &str) -> Result<(), EndSpaceError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn bang(&mut self) -> Mark {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            Mark::Loops
        } else {
            Mark::Plain
        }
    }

    fn expr(&mut self) -> Result<EndSpaceExpr, EndSpaceError> {
        self.skip_ws();
        let word = self.keyword();
        match word.as_str() {
            "pt" => Ok(EndSpaceExpr::Pt(self.bang())),
            "cantor" => Ok(EndSpaceExpr::CantorSet(self.bang())),
            "seq" => {
                let mark = self.bang();
                self.eat(b'(', "expected '(' after seq")?;
                let body = self.expr()?;
                self.eat(b')', "expected ')' closing seq")?;
                Ok(EndSpaceExpr::Seq(Box::new(body), mark))
            }
            "sum" => {
                self.eat(b'(', "expected '(' after sum")?;
                let mut parts = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    return Ok(EndSpaceExpr::Sum(parts));
                }
                loop {
                    parts.push(self.expr()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')' in sum")),
                    }
                }
                Ok(EndSpaceExpr::Sum(parts))
            }
            "" => Err(self.error("expected an end space expression")),
            other => {
                // report at the start of the keyword
                self.pos -= other.len();
                Err(self.error(&format!("unknown constructor {other:?}")))
            }
        }
    }
}

impl fmt::Display for EndSpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bang = |m: &Mark| if *m == Mark::Loops { "!" } else { "" };
        match self {
            EndSpaceExpr::Pt(m) => write!(f, "pt{}", bang(m)),
            EndSpaceExpr::CantorSet(m) => write!(f, "cantor{}", bang(m)),
            EndSpaceExpr::Seq(body, m) => write!(f, "seq{}({})", bang(m), body),
            EndSpaceExpr::Sum(parts) => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}
