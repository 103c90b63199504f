//! Algebraic properties and desk-scale witnesses.
//!
//! The predicates are one-liners: the pure mapping class group is
//! residually finite iff the rank is finite, satisfies the Tits alternative
//! iff the rank is finite, and the full mapping class group satisfies the
//! Tits alternative iff both the rank and the end space are finite.
//!
//! The witnesses exercise what the infinite-rank obstructions actually
//! compute: the shift relation `h^m g = g' h^m` behind the wreath-product
//! subgroup, the involution and product relations of the truncated
//! branch-swap families, and the ping-pong hypothesis for locally constant
//! maps into a free group.

use crate::endspace::{Address, EndPoint, EndSpaceExpr};
use crate::freegroup::{FreeWord, GenId, WindowedSubstitution};
use crate::graphmodel::GraphDescriptor;
use crate::mcgelems::{nielsen_on_gens, NielsenKind};
use std::collections::BTreeMap;
use thiserror::Error;

pub fn is_residually_finite(g: &GraphDescriptor) -> bool {
    g.rank().is_finite()
}

pub fn satisfies_tits_alternative_pmap(g: &GraphDescriptor) -> bool {
    g.rank().is_finite()
}

pub fn satisfies_tits_alternative_map(g: &GraphDescriptor) -> bool {
    g.rank().is_finite() && g.end_count().is_finite()
}

// ---------------------------------------------------------------------------
// Locally constant maps from the end space into a free group
// ---------------------------------------------------------------------------

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RElError {
    #[error("elements live over different end spaces or depths")]
    Mismatched,
    #[error("the base end must carry the identity")]
    BaseNotIdentity,
    #[error("point lies outside the end space")]
    OutsideSpace,
    #[error("the restriction subset must contain the base end")]
    BaseMissing,
}

/// Shared data for the group of locally constant maps from an end space
/// into a free group, pinned to the identity at a base end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RElContext {
    expr: EndSpaceExpr,
    depth: usize,
    base: EndPoint,
}

impl RElContext {
    pub fn new(expr: EndSpaceExpr, depth: usize) -> RElContext {
        let base = expr
            .member_point(&Address::empty(), false)
            .expect("end spaces are nonempty");
        RElContext { expr, depth, base }
    }

    pub fn base(&self) -> &EndPoint {
        &self.base
    }

    pub fn expr(&self) -> &EndSpaceExpr {
        &self.expr
    }

    fn leaves(&self) -> Vec<Address> {
        self.expr.leaves_at(self.depth)
    }

    pub fn identity(&self) -> REl {
        REl {
            cells: self.leaves().into_iter().map(|a| (a.0, FreeWord::identity())).collect(),
        }
    }

    /// Builds an element from words on the depth-`d` cells; unlisted cells
    /// carry the identity. The base cell must end up with the identity.
    pub fn element(&self, words: Vec<(Address, FreeWord)>) -> Result<REl, RElError> {
        let mut cells: BTreeMap<Vec<bool>, FreeWord> = self
            .leaves()
            .into_iter()
            .map(|a| (a.0, FreeWord::identity()))
            .collect();
        for (address, word) in words {
            for (leaf, cell) in cells.iter_mut() {
                if address.is_prefix_of(&Address(leaf.clone())) {
                    *cell = word.clone();
                }
            }
        }
        let base_leaf = self.base.prefix(self.depth);
        if !cells.get(&base_leaf.0).is_some_and(|w| w.is_empty()) {
            return Err(RElError::BaseNotIdentity);
        }
        Ok(REl { cells })
    }

    pub fn evaluate(&self, a: &REl, p: &EndPoint) -> Result<FreeWord, RElError> {
        if !self.expr.contains_point(p) {
            return Err(RElError::OutsideSpace);
        }
        let leaf = p.prefix(self.depth);
        a.cells.get(&leaf.0).cloned().ok_or(RElError::Mismatched)
    }

    pub fn multiply(&self, a: &REl, b: &REl) -> Result<REl, RElError> {
        if a.cells.len() != b.cells.len() {
            return Err(RElError::Mismatched);
        }
        let mut cells = BTreeMap::new();
        for (leaf, u) in &a.cells {
            let v = b.cells.get(leaf).ok_or(RElError::Mismatched)?;
            cells.insert(leaf.clone(), u.mul(v));
        }
        Ok(REl { cells })
    }

    pub fn invert(&self, a: &REl) -> REl {
        REl {
            cells: a.cells.iter().map(|(l, w)| (l.clone(), w.inverse())).collect(),
        }
    }

    /// Restriction to a finite subset of ends containing the base: the
    /// forgetful homomorphism to the graph retaining only those ends.
    pub fn forgetful(&self, a: &REl, ends: &[EndPoint]) -> Result<RestrictedREl, RElError> {
        if !ends.iter().any(|e| e == &self.base) {
            return Err(RElError::BaseMissing);
        }
        let words = ends
            .iter()
            .map(|e| self.evaluate(a, e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RestrictedREl { words })
    }

    /// A witness end at which the two elements fail to commute, if any:
    /// the ping-pong hypothesis for generating a free group of rank two.
    pub fn find_noncommuting_end(&self, a: &REl, b: &REl) -> Option<EndPoint> {
        for (leaf, u) in &a.cells {
            let v = b.cells.get(leaf)?;
            if !u.commutes_with(v) {
                return self.expr.member_point(&Address(leaf.clone()), false);
            }
        }
        None
    }
}

/// A locally constant map on the depth-`d` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct REl {
    cells: BTreeMap<Vec<bool>, FreeWord>,
}

impl REl {
    pub fn cells(&self) -> impl Iterator<Item = (Address, &FreeWord)> {
        self.cells.iter().map(|(l, w)| (Address(l.clone()), w))
    }
}

/// The image of the forgetful homomorphism: one word per retained end, in
/// the order the ends were listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedREl {
    pub words: Vec<FreeWord>,
}

impl RestrictedREl {
    pub fn multiply(&self, other: &RestrictedREl) -> Option<RestrictedREl> {
        if self.words.len() != other.words.len() {
            return None;
        }
        Some(RestrictedREl {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(u, v)| u.mul(v))
                .collect(),
        })
    }
}

// ---------------------------------------------------------------------------
// Wreath shift relation
// ---------------------------------------------------------------------------

/// The involution generating set of the rank-`n` automorphism group acting
/// on the `rose`-th block of `n` loops along one ladder.
fn afv_on_rose(n: u32, rose: i64) -> Vec<WindowedSubstitution> {
    let gen = |i: u32| GenId::x(rose * n as i64 + i as i64);
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(nielsen_on_gens(NielsenKind::Flip(i), n, gen).unwrap().semantics());
    }
    for i in 1..n {
        out.push(
            nielsen_on_gens(NielsenKind::Transposition(i, i + 1), n, gen)
                .unwrap()
                .semantics(),
        );
    }
    if n >= 2 {
        let tau2 = nielsen_on_gens(NielsenKind::Flip(2), n, gen).unwrap().semantics();
        let lambda12 = nielsen_on_gens(NielsenKind::LeftNielsen(1, 2), n, gen)
            .unwrap()
            .semantics();
        out.push(tau2.compose(&lambda12));
    }
    out
}

/// Verifies the shift relation `h^m ∘ g = g' ∘ h^m` for every generator `g`
/// of the block at `rose` and its translate `g'` at `rose + m`, where `h`
/// is the translation by one block of `n` loops.
pub fn wreath_relation_check(n: u32, m: i64, rose: i64) -> bool {
    let h_pow = WindowedSubstitution::shift(0, m * n as i64);
    let here = afv_on_rose(n, rose);
    let there = afv_on_rose(n, rose + m);
    here.len() == there.len()
        && here
            .iter()
            .zip(&there)
            .all(|(g, g_translated)| h_pow.compose(g) == g_translated.compose(&h_pow))
}

// ---------------------------------------------------------------------------
// Grigorchuk truncations
// ---------------------------------------------------------------------------

/// Leaf permutations of the finite binary trees `T_1..T_depth` mimicking
/// the four branch-swap families on the infinite binary tree. `a` swaps the
/// two top-level subtrees; each of `b`, `c`, `d` walks the rightmost spine
/// performing the swap below the left child at every level except the ones
/// it misses (`3k+1`, `3k`, `3k−1` respectively, plus the top level).
#[derive(Debug, Clone)]
pub struct GrigorchukTruncation {
    pub depth: usize,
    /// per tree level `i` (1-based): the four permutations of `2^i` leaves
    pub trees: Vec<[Vec<usize>; 4]>,
}

fn identity_perm(size: usize) -> Vec<usize> {
    (0..size).collect()
}

fn compose_perm(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

fn is_identity_perm(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// Swap slot `j` on a level-`i` tree: flips address bit `j` of every leaf
/// whose address starts with `j − 1` ones followed by a zero (bit 0 is the
/// top-level choice, one-bits descend the spine). Slot 0 is the top-level
/// swap itself.
fn slot_perm(levels: usize, slot: usize) -> Vec<usize> {
    let size = 1usize << levels;
    let mut perm = identity_perm(size);
    if slot >= levels {
        return perm;
    }
    for (leaf, target) in perm.iter_mut().enumerate() {
        let bit = |k: usize| (leaf >> (levels - 1 - k)) & 1;
        let on_spine = (0..slot).all(|k| if k + 1 == slot { bit(k) == 0 } else { bit(k) == 1 });
        if on_spine {
            *target = leaf ^ (1 << (levels - 1 - slot));
        }
    }
    perm
}

impl GrigorchukTruncation {
    pub fn new(depth: usize) -> GrigorchukTruncation {
        let mut trees = Vec::new();
        for levels in 1..=depth {
            let size = 1usize << levels;
            let a = slot_perm(levels, 0);
            let mut b = identity_perm(size);
            let mut c = identity_perm(size);
            let mut d = identity_perm(size);
            for slot in 1..levels {
                // counting the top-level swap as the first, each of b, c, d
                // misses every third spine swap: the (3k+1)-st for b, the
                // (3k)-th for c, the (3k−1)-st for d, k ≥ 1
                let missed_by = match slot % 3 {
                    0 => 0, // spine slot 3k ↔ overall (3k+1)-st → b
                    2 => 1, // overall 3k → c
                    _ => 2, // overall 3k−1 → d
                };
                let swap = slot_perm(levels, slot);
                if missed_by != 0 {
                    b = compose_perm(&b, &swap);
                }
                if missed_by != 1 {
                    c = compose_perm(&c, &swap);
                }
                if missed_by != 2 {
                    d = compose_perm(&d, &swap);
                }
            }
            trees.push([a, b, c, d]);
        }
        GrigorchukTruncation { depth, trees }
    }
}

/// Relation report for the truncated families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrigorchukReport {
    pub depth: usize,
    pub squares_are_identity: bool,
    pub product_bcd_is_identity: bool,
}

impl GrigorchukReport {
    pub fn holds(&self) -> bool {
        self.squares_are_identity && self.product_bcd_is_identity
    }
}

pub fn grigorchuk_relation_check(depth: usize) -> GrigorchukReport {
    let truncation = GrigorchukTruncation::new(depth);
    let mut squares = true;
    let mut bcd = true;
    for [a, b, c, d] in &truncation.trees {
        for p in [a, b, c, d] {
            squares &= is_identity_perm(&compose_perm(p, p));
        }
        bcd &= is_identity_perm(&compose_perm(&compose_perm(b, c), d));
    }
    GrigorchukReport { depth, squares_are_identity: squares, product_bcd_is_identity: bcd }
}
