//! Locally constant integer functions on an end space.
//!
//! `Č(E)` is the group of locally constant `ℤ`-valued functions on `E` under
//! pointwise addition, and `C̊(E)` its quotient by the constants. Both are
//! free abelian: the indicators of the cylinders `C_{w0} ∩ E` at branching
//! nodes `w` of the tree model (the addresses ending in `0`, with duplicated
//! and empty sets deleted) form a free basis of `C̊(E)`, and together with
//! the full-space indicator a free basis of `Č(E)`.
//!
//! Classes in `C̊(E)` are represented by the unique combination with zero
//! coefficient on the full-space indicator, so equality is syntactic.

use crate::endspace::{Address, Cardinality, EndPoint, EndSpaceExpr, MarkFilter};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("basis of depth {depth} cannot resolve a cylinder of width {width}")]
    DepthExhausted { depth: usize, width: usize },
    #[error("cylinder {address} is empty in this end space")]
    EmptyCylinder { address: String },
    #[error("functions live over different end spaces")]
    MismatchedSpaces,
    #[error("point does not belong to the end space")]
    PointOutsideSpace,
    #[error("bad function literal: {0}")]
    BadLiteral(String),
}

/// The truncated basis family `A = {A_1, A_2, ...}` of an end space.
///
/// Element `A_j` is `C_{w0} ∩ E` for a branching node `w` (both children
/// nonempty), listed by (width, address read as a little-endian number).
/// On the full Cantor set this is exactly the cylinder family
/// `C_0, C_00, C_10, C_000, C_100, C_010, C_110, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFamily {
    expr: EndSpaceExpr,
    depth: usize,
    elements: Vec<Address>,
    index: BTreeMap<Vec<bool>, usize>,
}

impl BasisFamily {
    pub fn new(expr: &EndSpaceExpr, depth: usize) -> BasisFamily {
        assert!(depth >= 1, "basis depth must be positive");
        let mut elements = Vec::new();
        for width in 0..depth {
            for value in 0..(1u64 << width) {
                let node = Address::from_le_value(width, value);
                if expr.cylinder_is_empty(&node) {
                    continue;
                }
                let zero = node.child(false);
                let one = node.child(true);
                if !expr.cylinder_is_empty(&zero) && !expr.cylinder_is_empty(&one) {
                    elements.push(zero);
                }
            }
        }
        elements.sort_by_key(|a| (a.width(), a.le_value()));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, a)| (a.0.clone(), i))
            .collect();
        BasisFamily { expr: expr.clone(), depth, elements, index }
    }

    pub fn expr(&self) -> &EndSpaceExpr {
        &self.expr
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Address] {
        &self.elements
    }

    pub fn address_of(&self, index: usize) -> &Address {
        &self.elements[index]
    }

    pub fn index_of(&self, address: &Address) -> Option<usize> {
        self.index.get(&address.0).copied()
    }

    /// Decomposes the indicator of a nonempty cylinder into basis
    /// coefficients plus a full-space coefficient, exactly in `Č(E)`.
    ///
    /// Walking up from the cylinder: the minimal prefix denoting the same
    /// subset either is the whole space, a basis element, or the 1-child of
    /// a branching node `t`, in which case `χ = χ_{C_t} − χ_{C_{t0}}` and we
    /// recurse on `t`. The result has at most one positive term, which
    /// contains the pairwise disjoint negative terms.
    pub fn decompose(&self, cylinder: &Address) -> Result<LocallyConstantFn, CechError> {
        if self.expr.cylinder_is_empty(cylinder) {
            return Err(CechError::EmptyCylinder { address: cylinder.to_string() });
        }
        let mut coeffs: BTreeMap<Vec<bool>, i64> = BTreeMap::new();
        let mut full: i64 = 0;
        self.accumulate(cylinder, 1, &mut coeffs, &mut full)?;
        Ok(LocallyConstantFn::from_parts(self.expr.clone(), coeffs, full))
    }

    fn accumulate(
        &self,
        cylinder: &Address,
        sign: i64,
        coeffs: &mut BTreeMap<Vec<bool>, i64>,
        full: &mut i64,
    ) -> Result<(), CechError> {
        // minimal prefix denoting the same subset of E: keep everything up to
        // the deepest step whose sibling is nonempty
        let bits = &cylinder.0;
        let mut minimal = 0;
        for i in 0..bits.len() {
            let mut sibling = bits[..i].to_vec();
            sibling.push(!bits[i]);
            if !self.expr.cylinder_is_empty(&Address(sibling)) {
                minimal = i + 1;
            }
        }
        if minimal == 0 {
            *full += sign;
            return Ok(());
        }
        let v = Address(bits[..minimal].to_vec());
        if v.width() > self.depth {
            return Err(CechError::DepthExhausted { depth: self.depth, width: v.width() });
        }
        let (parent, last) = v.parent().expect("nonempty address");
        if !last {
            let idx = self
                .index_of(&v)
                .expect("0-child of a branching node is a basis element");
            *coeffs.entry(self.elements[idx].0.clone()).or_insert(0) += sign;
        } else {
            let sibling = parent.child(false);
            *coeffs.entry(sibling.0.clone()).or_insert(0) -= sign;
            self.accumulate(&parent, sign, coeffs, full)?;
        }
        Ok(())
    }

    /// Canonical form of an arbitrary cylinder combination.
    pub fn canonicalize(&self, f: &RawFn) -> Result<LocallyConstantFn, CechError> {
        if f.expr != self.expr {
            return Err(CechError::MismatchedSpaces);
        }
        let mut coeffs: BTreeMap<Vec<bool>, i64> = BTreeMap::new();
        let mut full: i64 = 0;
        for (address, coeff) in &f.terms {
            if *coeff == 0 || self.expr.cylinder_is_empty(address) {
                continue;
            }
            self.accumulate(address, *coeff, &mut coeffs, &mut full)?;
        }
        Ok(LocallyConstantFn::from_parts(self.expr.clone(), coeffs, full))
    }
}

/// An uncanonicalized finite combination `Σ nᵢ·χ_{Cᵢ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFn {
    pub expr: EndSpaceExpr,
    pub terms: Vec<(Address, i64)>,
}

impl RawFn {
    pub fn new(expr: EndSpaceExpr, terms: Vec<(Address, i64)>) -> RawFn {
        RawFn { expr, terms }
    }

    pub fn indicator(expr: EndSpaceExpr, address: Address) -> RawFn {
        RawFn { expr, terms: vec![(address, 1)] }
    }

    pub fn zero(expr: EndSpaceExpr) -> RawFn {
        RawFn { expr, terms: Vec::new() }
    }

    pub fn add(&self, other: &RawFn) -> Result<RawFn, CechError> {
        if self.expr != other.expr {
            return Err(CechError::MismatchedSpaces);
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(RawFn { expr: self.expr.clone(), terms })
    }

    pub fn negate(&self) -> RawFn {
        RawFn {
            expr: self.expr.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> RawFn {
        RawFn {
            expr: self.expr.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * k)).collect(),
        }
    }

    pub fn evaluate(&self, p: &EndPoint) -> Result<i64, CechError> {
        if !self.expr.contains_point(p) {
            return Err(CechError::PointOutsideSpace);
        }
        Ok(self
            .terms
            .iter()
            .map(|(a, c)| if p.has_prefix(a) { *c } else { 0 })
            .sum())
    }

    /// Parses the function literal syntax `2*[00] + -1*[10]`; `[w]` is the
    /// cylinder at address `w` and `[]` the full space.
    pub fn parse(expr: &EndSpaceExpr, text: &str) -> Result<RawFn, CechError> {
        let mut terms = Vec::new();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(RawFn::zero(expr.clone()));
        }
        let mut rest = cleaned.as_str();
        let mut leading_sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            leading_sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        for (i, summand) in SplitSummands::new(rest).enumerate() {
            let sign = if i == 0 { leading_sign } else { 1 };
            let (coeff, address) = parse_summand(summand)?;
            terms.push((address, sign * coeff));
        }
        Ok(RawFn { expr: expr.clone(), terms })
    }
}

/// Splits `a + b + -c` into signed summands, honoring `+ -` sequences.
struct SplitSummands<'a> {
    rest: Option<&'a str>,
}

impl<'a> SplitSummands<'a> {
    fn new(text: &'a str) -> Self {
        SplitSummands { rest: Some(text) }
    }
}

impl<'a> Iterator for SplitSummands<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        let text = self.rest?;
        match text.find('+') {
            Some(i) => {
                self.rest = Some(&text[i + 1..]);
                Some(&text[..i])
            }
            None => {
                self.rest = None;
                Some(text)
            }
        }
    }
}

fn parse_summand(text: &str) -> Result<(i64, Address), CechError> {
    let bad = || CechError::BadLiteral(text.to_string());
    let (coeff_text, address_text) = match text.find('*') {
        Some(i) => (&text[..i], &text[i + 1..]),
        None => ("1", text),
    };
    let coeff = if coeff_text.is_empty() || coeff_text == "-" {
        if coeff_text == "-" { -1 } else { 1 }
    } else {
        coeff_text.parse::<i64>().map_err(|_| bad())?
    };
    let inner = address_text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    let address = Address::parse(inner).map_err(|e| CechError::BadLiteral(e.to_string()))?;
    Ok((coeff, address))
}

/// A canonicalized locally constant function: basis terms plus a full-space
/// coefficient. Dropping the full coefficient gives the class in `C̊(E)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocallyConstantFn {
    expr: EndSpaceExpr,
    /// (basis address, nonzero coefficient), sorted by (width, value)
    terms: Vec<(Address, i64)>,
    full: i64,
}

impl LocallyConstantFn {
    fn from_parts(expr: EndSpaceExpr, coeffs: BTreeMap<Vec<bool>, i64>, full: i64) -> Self {
        let mut terms: Vec<(Address, i64)> = coeffs
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(bits, c)| (Address(bits), c))
            .collect();
        terms.sort_by_key(|(a, _)| (a.width(), a.le_value()));
        LocallyConstantFn { expr, terms, full }
    }

    pub fn zero(expr: EndSpaceExpr) -> Self {
        LocallyConstantFn { expr, terms: Vec::new(), full: 0 }
    }

    pub fn expr(&self) -> &EndSpaceExpr {
        &self.expr
    }

    pub fn terms(&self) -> &[(Address, i64)] {
        &self.terms
    }

    pub fn full_coefficient(&self) -> i64 {
        self.full
    }

    /// The representative of the class modulo constants.
    pub fn chom_class(&self) -> LocallyConstantFn {
        LocallyConstantFn { expr: self.expr.clone(), terms: self.terms.clone(), full: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.full == 0
    }

    pub fn is_zero_in_chom(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, address: &Address) -> i64 {
        self.terms
            .iter()
            .find(|(a, _)| a == address)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn add(&self, other: &LocallyConstantFn) -> Result<LocallyConstantFn, CechError> {
        if self.expr != other.expr {
            return Err(CechError::MismatchedSpaces);
        }
        let mut coeffs: BTreeMap<Vec<bool>, i64> = BTreeMap::new();
        for (a, c) in self.terms.iter().chain(other.terms.iter()) {
            *coeffs.entry(a.0.clone()).or_insert(0) += c;
        }
        Ok(LocallyConstantFn::from_parts(
            self.expr.clone(),
            coeffs,
            self.full + other.full,
        ))
    }

    pub fn negate(&self) -> LocallyConstantFn {
        LocallyConstantFn {
            expr: self.expr.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
            full: -self.full,
        }
    }

    pub fn evaluate(&self, p: &EndPoint) -> Result<i64, CechError> {
        if !self.expr.contains_point(p) {
            return Err(CechError::PointOutsideSpace);
        }
        let sum: i64 = self
            .terms
            .iter()
            .map(|(a, c)| if p.has_prefix(a) { *c } else { 0 })
            .sum();
        Ok(sum + self.full)
    }

    /// A point witnessing that a nonzero class is a nonzero function: take a
    /// minimal-width term and complete its address with the all-ones tail
    /// (descending into 1-children whenever they are nonempty). No other
    /// term of the combination contains that point.
    pub fn independence_witness(&self) -> Option<(EndPoint, i64)> {
        let (address, coeff) = self.terms.first()?;
        let p = self
            .expr
            .member_point(address, true)
            .expect("basis elements are nonempty");
        Some((p, *coeff))
    }
}

impl fmt::Display for LocallyConstantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if self.full != 0 {
            write!(f, "{}*[]", self.full)?;
            first = false;
        }
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[{a}]")?;
            first = false;
        }
        Ok(())
    }
}

/// Rank of `C̊(E)` as a free abelian group: `|E| − 1` for finite `E`,
/// countably infinite otherwise (also for uncountable `E`).
pub fn chom_rank_class(expr: &EndSpaceExpr) -> Cardinality {
    match expr.cardinality(MarkFilter::All) {
        Cardinality::Finite(n) => Cardinality::Finite(n.saturating_sub(1)),
        _ => Cardinality::CountablyInfinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endspace::Mark::{Loops, Plain};

    fn addr(text: &str) -> Address {
        Address::parse(text).unwrap()
    }

    #[test]
    fn cantor_basis_to_depth_three() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 3);
        let expected: Vec<Address> = ["0", "00", "10", "000", "100", "010", "110"]
            .iter()
            .map(|t| addr(t))
            .collect();
        assert_eq!(basis.elements(), &expected[..]);
    }

    #[test]
    fn finite_space_basis_has_one_less_element_than_points() {
        for n in 1..7usize {
            let expr = EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Plain); n]);
            let basis = BasisFamily::new(&expr, 10);
            assert_eq!(basis.len(), n - 1, "n = {n}");
        }
    }

    #[test]
    fn point_space_has_empty_basis() {
        let basis = BasisFamily::new(&EndSpaceExpr::pt(Loops), 6);
        assert!(basis.is_empty());
    }

    #[test]
    fn decompose_cantor_examples() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 3);

        // an address ending in 1 with no zeros: all-negative combination
        let f = basis.decompose(&addr("11")).unwrap();
        assert_eq!(f.full_coefficient(), 1);
        assert_eq!(f.coefficient(&addr("0")), -1);
        assert_eq!(f.coefficient(&addr("10")), -1);
        assert_eq!(f.terms().len(), 2);

        let f = basis.decompose(&addr("01")).unwrap();
        assert_eq!(f.coefficient(&addr("0")), 1);
        assert_eq!(f.coefficient(&addr("00")), -1);
        assert_eq!(f.terms().len(), 2);

        let f = basis.decompose(&addr("0")).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.coefficient(&addr("0")), 1);
        assert_eq!(f.full_coefficient(), 0);
    }

    #[test]
    fn decompose_reports_depth_exhaustion() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 2);
        let err = basis.decompose(&addr("0001")).unwrap_err();
        assert!(matches!(err, CechError::DepthExhausted { depth: 2, width: 4 }));
    }

    #[test]
    fn decompose_collapses_duplicated_sets() {
        // two points at 0̄ and 10̄: C_10 ∩ E equals C_1 ∩ E, the complement
        // of the basis element C_0 ∩ E
        let expr = EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Plain), EndSpaceExpr::pt(Plain)]);
        let basis = BasisFamily::new(&expr, 4);
        assert_eq!(basis.len(), 1);
        let f = basis.decompose(&addr("10")).unwrap();
        assert_eq!(f.full_coefficient(), 1);
        assert_eq!(f.coefficient(&addr("0")), -1);
    }

    #[test]
    fn constant_one_vanishes_in_chom() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 3);
        let raw = RawFn::new(cantor.clone(), vec![(addr("0"), 1), (addr("1"), 1)]);
        let f = basis.canonicalize(&raw).unwrap();
        assert!(f.is_zero_in_chom());
        assert_eq!(f.full_coefficient(), 1);
    }

    #[test]
    fn canonicalize_merges_sibling_cylinders() {
        // 2χ_{C01} + 2χ_{C00} = 2χ_{C0}, exactly in Č
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 3);
        let raw = RawFn::new(cantor.clone(), vec![(addr("01"), 2), (addr("00"), 2)]);
        let f = basis.canonicalize(&raw).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.coefficient(&addr("0")), 2);
        assert_eq!(f.full_coefficient(), 0);
        // cross-check by evaluation on every depth-2 cylinder
        for leaf in cantor.leaves_at(2) {
            let p = cantor.member_point(&leaf, false).unwrap();
            assert_eq!(raw.evaluate(&p).unwrap(), f.evaluate(&p).unwrap());
        }
    }

    #[test]
    fn subtraction_cancels() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 3);
        let raw = RawFn::new(cantor.clone(), vec![(addr("01"), 3), (addr("11"), -2)]);
        let f = basis.canonicalize(&raw).unwrap();
        let diff = f.add(&f.negate()).unwrap();
        assert!(diff.is_zero());
    }

    #[test]
    fn evaluation_by_prefix_membership() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let raw = RawFn::new(cantor.clone(), vec![(addr("0"), 2), (addr("10"), 1)]);
        let p = EndPoint::new(vec![false], vec![true]).unwrap(); // 0111…
        assert_eq!(raw.evaluate(&p).unwrap(), 2);
        let q = EndPoint::new(vec![true], vec![false]).unwrap(); // 10̄
        assert_eq!(raw.evaluate(&q).unwrap(), 1);
        let zero = RawFn::zero(cantor);
        assert_eq!(zero.evaluate(&q).unwrap(), 0);
    }

    #[test]
    fn evaluation_outside_space_is_domain_error() {
        let pt = EndSpaceExpr::pt(Plain);
        let raw = RawFn::zero(pt);
        let q = EndPoint::constant(true);
        assert_eq!(raw.evaluate(&q).unwrap_err(), CechError::PointOutsideSpace);
    }

    #[test]
    fn chom_rank_examples() {
        let five = EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Plain); 5]);
        assert_eq!(chom_rank_class(&five), Cardinality::Finite(4));
        assert_eq!(
            chom_rank_class(&EndSpaceExpr::cantor(Plain)),
            Cardinality::CountablyInfinite
        );
        assert_eq!(chom_rank_class(&EndSpaceExpr::pt(Plain)), Cardinality::Finite(0));
    }

    #[test]
    fn function_literal_parsing() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let f = RawFn::parse(&cantor, "2*[00] + -1*[10]").unwrap();
        assert_eq!(f.terms, vec![(addr("00"), 2), (addr("10"), -1)]);
        let g = RawFn::parse(&cantor, "-[1] + []").unwrap();
        assert_eq!(g.terms, vec![(addr("1"), -1), (Address::empty(), 1)]);
    }

    #[test]
    fn independence_witness_hits_minimal_term() {
        let cantor = EndSpaceExpr::cantor(Plain);
        let basis = BasisFamily::new(&cantor, 3);
        let raw = RawFn::new(cantor, vec![(addr("0"), 5), (addr("00"), -3), (addr("10"), 7)]);
        let f = basis.canonicalize(&raw).unwrap();
        let (p, expected) = f.independence_witness().unwrap();
        assert_eq!(expected, 5);
        assert_eq!(f.chom_class().evaluate(&p).unwrap(), 5);
    }
}
