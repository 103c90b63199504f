//! Flux functionals, the projection onto loop-shift coordinates, and the
//! semidirect splitting.
//!
//! For a graph of infinite rank the marked ends form their own end space;
//! its basis family `{A_i}` indexes both the ladders of the grid model and
//! the coordinates of a [`FluxVector`]. Two independent computation paths
//! are provided:
//!
//! - [`flux_fast`] decomposes the clopen's indicator over the basis and
//!   tallies loop-shift exponents against the coefficients, using that the
//!   flux of a basis cut evaluates to `δ_ij` on the primitive shifts and
//!   that fluxes are additive over disjoint clopens;
//! - [`flux_oracle`] computes a single basis coordinate as a difference of
//!   coranks over an admissible window, via Stallings folding on the
//!   windowed grid model, with no reference to the decomposition at all.
//!
//! Agreement of the two is the main self-check of the crate.

use crate::cech::{BasisFamily, CechError, LocallyConstantFn, RawFn};
use crate::endspace::{Address, EndSpaceExpr, Mark};
use crate::freegroup::{corank_of_free_factor, FreeGroupError, FreeWord, GenId};
use crate::graphmodel::{GraphDescriptor, Rank};
use crate::mcgelems::{compose_word, Generator, MappingClassWord};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FluxError {
    #[error("flux needs a graph of infinite rank")]
    FiniteRank,
    #[error("flux against a proper clopen needs at least two marked ends")]
    TooFewMarkedEnds,
    #[error(transparent)]
    Cech(#[from] CechError),
    #[error("basis index {index} out of range (basis has {len} elements)")]
    BadBasisIndex { index: usize, len: usize },
    #[error("admissible window not found: {reason}; retry with a larger window hint")]
    AdmissibilityFailure { reason: String },
    #[error("clopen inputs must be disjoint")]
    NotDisjoint,
    #[error("difference needs a proper containment of clopens")]
    NotContained,
    #[error("splitting produced a residual with nonzero flux vector")]
    ResidualNotFluxZero,
    #[error(transparent)]
    Element(#[from] crate::mcgelems::ElementError),
}

/// The marked subspace of an end-space expression, as an expression of its
/// own. `None` when no end is marked.
pub fn marked_subexpression(expr: &EndSpaceExpr) -> Option<EndSpaceExpr> {
    match expr {
        EndSpaceExpr::Pt(Mark::Loops) => Some(EndSpaceExpr::Pt(Mark::Loops)),
        EndSpaceExpr::Pt(Mark::Plain) => None,
        EndSpaceExpr::CantorSet(Mark::Loops) => Some(EndSpaceExpr::CantorSet(Mark::Loops)),
        EndSpaceExpr::CantorSet(Mark::Plain) => None,
        EndSpaceExpr::Sum(parts) => {
            let marked: Vec<EndSpaceExpr> =
                parts.iter().filter_map(marked_subexpression).collect();
            match marked.len() {
                0 => None,
                1 => Some(marked.into_iter().next().unwrap()),
                _ => Some(EndSpaceExpr::Sum(marked)),
            }
        }
        EndSpaceExpr::Seq(body, Mark::Loops) => Some(match marked_subexpression(body) {
            // only the limit end is marked
            None => EndSpaceExpr::Pt(Mark::Loops),
            Some(inner) => EndSpaceExpr::Seq(Box::new(inner), Mark::Loops),
        }),
        EndSpaceExpr::Seq(_, Mark::Plain) => None,
    }
}

/// Computation context for flux: the marked end space with its truncated
/// basis family. Ladder `i` of the grid model (1-based) crosses the cut of
/// basis element `i − 1`.
#[derive(Debug, Clone)]
pub struct FluxContext {
    graph: GraphDescriptor,
    marked: EndSpaceExpr,
    basis: BasisFamily,
}

impl FluxContext {
    pub fn new(graph: &GraphDescriptor, depth: usize) -> Result<FluxContext, FluxError> {
        if graph.rank() != Rank::Infinite {
            return Err(FluxError::FiniteRank);
        }
        let marked = marked_subexpression(graph.ends()).expect("infinite rank has marked ends");
        let basis = BasisFamily::new(&marked, depth);
        Ok(FluxContext { graph: graph.clone(), marked, basis })
    }

    pub fn graph(&self) -> &GraphDescriptor {
        &self.graph
    }

    pub fn marked(&self) -> &EndSpaceExpr {
        &self.marked
    }

    pub fn basis(&self) -> &BasisFamily {
        &self.basis
    }

    /// Number of independent loop-shift coordinates at this depth.
    pub fn ladder_count(&self) -> usize {
        self.basis.len()
    }

    pub fn validate_word(&self, word: &MappingClassWord) -> Result<(), FluxError> {
        word.validate(self.ladder_count())?;
        Ok(())
    }

    /// The basis element as a clopen subset of the marked space.
    pub fn basis_clopen(&self, index: usize) -> Result<ClopenSet, FluxError> {
        if index >= self.basis.len() {
            return Err(FluxError::BadBasisIndex { index, len: self.basis.len() });
        }
        ClopenSet::from_cylinder(self, self.basis.address_of(index))
    }
}

// ---------------------------------------------------------------------------
// Clopen subsets of the marked space
// ---------------------------------------------------------------------------

/// A clopen subset of the marked end space, normalized as the set of
/// basis-depth leaf cylinders it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClopenSet {
    depth: usize,
    leaves: BTreeSet<Vec<bool>>,
}

impl ClopenSet {
    pub fn empty(ctx: &FluxContext) -> ClopenSet {
        ClopenSet { depth: ctx.basis.depth(), leaves: BTreeSet::new() }
    }

    pub fn full(ctx: &FluxContext) -> ClopenSet {
        let depth = ctx.basis.depth();
        let leaves = ctx
            .marked
            .leaves_at(depth)
            .into_iter()
            .map(|a| a.0)
            .collect();
        ClopenSet { depth, leaves }
    }

    pub fn from_cylinder(ctx: &FluxContext, address: &Address) -> Result<ClopenSet, FluxError> {
        let depth = ctx.basis.depth();
        if address.width() > depth {
            return Err(FluxError::Cech(CechError::DepthExhausted {
                depth,
                width: address.width(),
            }));
        }
        let leaves = ctx
            .marked
            .leaves_at(depth)
            .into_iter()
            .filter(|leaf| address.is_prefix_of(leaf))
            .map(|a| a.0)
            .collect();
        Ok(ClopenSet { depth, leaves })
    }

    /// Parses `[w]` as a cylinder of the marked space, `[Ak]` as the k-th
    /// basis element (1-based), `[]` as the whole marked space, and `+`
    /// combinations thereof.
    pub fn parse(ctx: &FluxContext, text: &str) -> Result<ClopenSet, FluxError> {
        let mut out = ClopenSet::empty(ctx);
        for token in text.split('+') {
            let token: String = token.chars().filter(|c| !c.is_whitespace()).collect();
            if token.is_empty() {
                continue;
            }
            let inner = token
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| FluxError::Cech(CechError::BadLiteral(token.clone())))?;
            let piece = if let Some(k) = inner.strip_prefix('A') {
                let index: usize = k
                    .parse()
                    .map_err(|_| FluxError::Cech(CechError::BadLiteral(token.clone())))?;
                ctx.basis_clopen(index.checked_sub(1).ok_or(FluxError::BadBasisIndex {
                    index: 0,
                    len: ctx.basis.len(),
                })?)?
            } else if inner.is_empty() {
                ClopenSet::full(ctx)
            } else {
                let address = Address::parse(inner)
                    .map_err(|e| FluxError::Cech(CechError::BadLiteral(e.to_string())))?;
                ClopenSet::from_cylinder(ctx, &address)?
            };
            out = out.union(&piece);
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        ClopenSet {
            depth: self.depth,
            leaves: self.leaves.union(&other.leaves).cloned().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.leaves.is_disjoint(&other.leaves)
    }

    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.leaves.is_subset(&other.leaves)
    }

    pub fn difference(&self, other: &ClopenSet) -> ClopenSet {
        ClopenSet {
            depth: self.depth,
            leaves: self.leaves.difference(&other.leaves).cloned().collect(),
        }
    }

    pub fn complement(&self, ctx: &FluxContext) -> ClopenSet {
        ClopenSet::full(ctx).difference(self)
    }

    /// The class of the indicator function over the basis family.
    pub fn decompose(&self, ctx: &FluxContext) -> Result<LocallyConstantFn, FluxError> {
        let raw = RawFn::new(
            ctx.marked.clone(),
            self.leaves.iter().map(|bits| (Address(bits.clone()), 1)).collect(),
        );
        Ok(ctx.basis.canonicalize(&raw)?)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.leaves.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for bits in &self.leaves {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "[{}]", Address(bits.clone()))?;
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The fast path
// ---------------------------------------------------------------------------

/// Flux of a word against a clopen subset of the marked space: decompose
/// the indicator over the basis and pair each loop-shift letter's exponent
/// with the coefficient of its ladder's basis element. Loop swaps, word
/// maps and compact substitutions contribute nothing.
pub fn flux_fast(
    ctx: &FluxContext,
    word: &MappingClassWord,
    clopen: &ClopenSet,
) -> Result<i64, FluxError> {
    ctx.validate_word(word)?;
    let class = clopen.decompose(ctx)?;
    let coefficient_of_ladder = |ladder: i64| -> i64 {
        let index = (ladder - 1) as usize;
        class.coefficient(ctx.basis.address_of(index))
    };
    let mut total = 0;
    for g in &word.letters {
        if let Generator::LoopShift { ladder, exponent } = g {
            total += exponent * coefficient_of_ladder(*ladder);
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// The corank oracle
// ---------------------------------------------------------------------------

/// Flux of a word against the `index`-th basis cut, computed as a corank
/// difference on the windowed grid model.
///
/// The grid model puts one bi-infinite ladder of loops under each basis
/// element; the cut of basis element `i` separates positions `< cut` from
/// positions `≥ cut` on ladder `i + 1` and leaves every other ladder on one
/// side. For the window pair `(m, n = cut)` the lower subgroup is generated
/// by the loops strictly below the cut together with all loops of the other
/// ladders; its image under the word's substitution is compared inside the
/// ambient subgroup that additionally contains ladder-`i+1` loops up to
/// position `m`. Below a floor depth the substitution is a pure translation,
/// so those generators are killed as coordinates and the corank computation
/// reduces to Stallings folding on a finite window.
pub fn flux_oracle(
    ctx: &FluxContext,
    word: &MappingClassWord,
    index: usize,
    enlarge: i64,
    cut: i64,
) -> Result<i64, FluxError> {
    ctx.validate_word(word)?;
    if index >= ctx.basis.len() {
        return Err(FluxError::BadBasisIndex { index, len: ctx.basis.len() });
    }
    let ladder = index as i64 + 1;
    let subst = compose_word(word).substitution;

    let displacement = subst.displacement_bound() + 1;
    let hull = subst.explicit_hull();
    // the upper window must clear both the cut and every explicit image
    // letter on the cut ladder
    let cut_hull_hi = hull.get(&ladder).map_or(cut, |&(_, hi)| hi.max(cut));
    let m = cut_hull_hi + displacement + 1 + enlarge.max(0);
    let ladder_ids: BTreeSet<i64> = (1..=ctx.ladder_count() as i64)
        .chain(hull.keys().copied())
        .collect();

    // The lower corank and the image corank each get their own windowed
    // presentation: generators in the pure-translation tail of the lower
    // subgroup are killed as coordinates, which trims the ambient window by
    // the tail shift on the image side and leaves it untrimmed on the plain
    // side.
    let mut plain_ambient: Vec<GenId> = Vec::new();
    let mut plain_words: Vec<FreeWord> = Vec::new();
    let mut image_ambient: Vec<GenId> = Vec::new();
    let mut image_words: Vec<FreeWord> = Vec::new();

    for l in ladder_ids {
        let (hull_lo, hull_hi) = hull.get(&l).copied().unwrap_or((0, 0));
        let shift = subst.shift_on(l);
        if l == ladder {
            // below the floor the substitution is a pure translation
            let floor = hull_lo.min(cut) - displacement - 1 - enlarge.max(0);
            for p in floor..m {
                plain_ambient.push(GenId::new(l, p));
            }
            for p in (floor + shift)..m {
                image_ambient.push(GenId::new(l, p));
            }
            for p in floor..cut {
                plain_words.push(FreeWord::generator(GenId::new(l, p)));
                image_words.push(subst.image_of(GenId::new(l, p)));
            }
        } else {
            // a ladder lying on one side of the cut in its entirety; all of
            // it belongs to both subgroups
            let lo = hull_lo.min(-1) - displacement - 1;
            let hi = hull_hi.max(1) + displacement + 1;
            for p in lo..=hi {
                plain_ambient.push(GenId::new(l, p));
                plain_words.push(FreeWord::generator(GenId::new(l, p)));
                image_words.push(subst.image_of(GenId::new(l, p)));
            }
            for p in (lo + shift)..=(hi + shift) {
                image_ambient.push(GenId::new(l, p));
            }
        }
    }

    let image_set: BTreeSet<GenId> = image_ambient.iter().copied().collect();
    for r in &image_words {
        for letter in r.letters() {
            if !image_set.contains(&letter.gen) {
                return Err(FluxError::AdmissibilityFailure {
                    reason: format!(
                        "image letter {} escapes the window of the pair ({m}, {cut})",
                        letter.gen
                    ),
                });
            }
        }
    }

    let cork = |ambient: &[GenId], words: &[FreeWord]| -> Result<i64, FluxError> {
        match corank_of_free_factor(ambient, words) {
            Ok(c) => Ok(c as i64),
            Err(FreeGroupError::NotCertifiedFreeFactor { factors }) => {
                Err(FluxError::AdmissibilityFailure {
                    reason: format!("subgroup not certified (invariant factors {factors:?})"),
                })
            }
            Err(e) => Err(FluxError::AdmissibilityFailure { reason: e.to_string() }),
        }
    };
    let cork_lower = cork(&plain_ambient, &plain_words)?;
    let cork_image = cork(&image_ambient, &image_words)?;
    Ok(cork_lower - cork_image)
}

/// Oracle value for an arbitrary clopen: combine per-basis oracle values
/// along the indicator decomposition.
pub fn flux_oracle_clopen(
    ctx: &FluxContext,
    word: &MappingClassWord,
    clopen: &ClopenSet,
) -> Result<i64, FluxError> {
    let class = clopen.decompose(ctx)?;
    let mut total = 0;
    for (address, coeff) in class.terms() {
        let index = ctx.basis.index_of(address).expect("canonical terms are basis elements");
        total += coeff * flux_oracle(ctx, word, index, 0, 0)?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Flux vectors, the projection and the section
// ---------------------------------------------------------------------------

/// Finitely supported integer vector over the basis family of the marked
/// end space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FluxVector {
    components: BTreeMap<usize, i64>,
}

impl FluxVector {
    pub fn zero() -> FluxVector {
        FluxVector::default()
    }

    pub fn from_components(components: impl IntoIterator<Item = (usize, i64)>) -> FluxVector {
        FluxVector {
            components: components.into_iter().filter(|(_, v)| *v != 0).collect(),
        }
    }

    pub fn component(&self, index: usize) -> i64 {
        self.components.get(&index).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.components.iter().map(|(&i, &v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
}

impl fmt::Display for FluxVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, (i, v)) in self.support().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "A{}:{}", i + 1, v)?;
        }
        write!(f, ")")
    }
}

/// The projection of a word: its flux against every basis element. Empty
/// when the graph has at most one marked end.
pub fn flux_projection(ctx: &FluxContext, word: &MappingClassWord) -> Result<FluxVector, FluxError> {
    let mut components = BTreeMap::new();
    for index in 0..ctx.basis.len() {
        let clopen = ctx.basis_clopen(index)?;
        let value = flux_fast(ctx, word, &clopen)?;
        if value != 0 {
            components.insert(index, value);
        }
    }
    Ok(FluxVector { components })
}

/// The section: the product of primitive loop shifts realizing a flux
/// vector, in ladder order.
pub fn section(ctx: &FluxContext, v: &FluxVector) -> Result<MappingClassWord, FluxError> {
    let mut letters = Vec::new();
    for (index, value) in v.support() {
        if index >= ctx.basis.len() {
            return Err(FluxError::BadBasisIndex { index, len: ctx.basis.len() });
        }
        letters.push(Generator::loop_shift(index as i64 + 1, value)?);
    }
    Ok(MappingClassWord::new(letters))
}

/// Splits a word into its flux vector and a residual with zero flux vector,
/// the kernel coordinate of the semidirect decomposition.
pub fn split_decompose(
    ctx: &FluxContext,
    word: &MappingClassWord,
) -> Result<(FluxVector, MappingClassWord), FluxError> {
    let v = flux_projection(ctx, word)?;
    let sec = section(ctx, &v)?;
    let mut inverse_letters = Vec::new();
    for g in sec.letters.iter().rev() {
        inverse_letters.push(g.inverse().expect("loop shifts invert"));
    }
    let residual = word.concat(&MappingClassWord::new(inverse_letters));
    if !flux_projection(ctx, &residual)?.is_zero() {
        return Err(FluxError::ResidualNotFluxZero);
    }
    Ok((v, residual))
}

// ---------------------------------------------------------------------------
// Flux algebra comparisons
// ---------------------------------------------------------------------------

/// Both sides of a flux identity, evaluated on a given word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FluxComparison {
    pub lhs: i64,
    pub rhs: i64,
}

impl FluxComparison {
    pub fn agrees(self) -> bool {
        self.lhs == self.rhs
    }
}

/// Complement law: the flux of the complement is the negated flux.
pub fn flux_of_complement(
    ctx: &FluxContext,
    word: &MappingClassWord,
    clopen: &ClopenSet,
) -> Result<FluxComparison, FluxError> {
    Ok(FluxComparison {
        lhs: flux_fast(ctx, word, &clopen.complement(ctx))?,
        rhs: -flux_fast(ctx, word, clopen)?,
    })
}

/// Disjoint additivity.
pub fn flux_of_disjoint_union(
    ctx: &FluxContext,
    word: &MappingClassWord,
    a: &ClopenSet,
    b: &ClopenSet,
) -> Result<FluxComparison, FluxError> {
    if !a.is_disjoint(b) {
        return Err(FluxError::NotDisjoint);
    }
    Ok(FluxComparison {
        lhs: flux_fast(ctx, word, &a.union(b))?,
        rhs: flux_fast(ctx, word, a)? + flux_fast(ctx, word, b)?,
    })
}

/// Difference law for a containment `b ⊆ b_prime`.
pub fn flux_of_difference(
    ctx: &FluxContext,
    word: &MappingClassWord,
    b: &ClopenSet,
    b_prime: &ClopenSet,
) -> Result<FluxComparison, FluxError> {
    if !b.is_subset(b_prime) {
        return Err(FluxError::NotContained);
    }
    Ok(FluxComparison {
        lhs: flux_fast(ctx, word, &b_prime.difference(b))?,
        rhs: flux_fast(ctx, word, b_prime)? - flux_fast(ctx, word, b)?,
    })
}

/// The formally defined fluxes of the empty set and of the whole marked
/// space, both identically zero.
pub fn flux_of_empty_and_full(
    ctx: &FluxContext,
    word: &MappingClassWord,
) -> Result<FluxComparison, FluxError> {
    Ok(FluxComparison {
        lhs: flux_fast(ctx, word, &ClopenSet::empty(ctx))?,
        rhs: flux_fast(ctx, word, &ClopenSet::full(ctx))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::catalog;

    fn ladder_ctx(n: usize) -> FluxContext {
        FluxContext::new(&catalog::marked_points(n), 6).unwrap()
    }

    fn shift(ladder: i64, exponent: i64) -> Generator {
        Generator::loop_shift(ladder, exponent).unwrap()
    }

    #[test]
    fn marked_subexpression_examples() {
        assert_eq!(
            marked_subexpression(catalog::millipede().ends()),
            Some(EndSpaceExpr::pt(Mark::Loops))
        );
        assert_eq!(marked_subexpression(&EndSpaceExpr::pt(Mark::Plain)), None);
        assert_eq!(
            marked_subexpression(catalog::ladder_wedge_cantor_tree().ends()),
            Some(EndSpaceExpr::sum(vec![
                EndSpaceExpr::pt(Mark::Loops),
                EndSpaceExpr::pt(Mark::Loops)
            ]))
        );
        assert_eq!(
            marked_subexpression(catalog::sequence_of_cantor_trees().ends()),
            Some(EndSpaceExpr::pt(Mark::Loops))
        );
    }

    #[test]
    fn primitive_shift_hits_its_own_cut_only() {
        let ctx = ladder_ctx(3);
        assert_eq!(ctx.ladder_count(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let clopen = ctx.basis_clopen(j).unwrap();
                let word = MappingClassWord::new(vec![shift(i as i64 + 1, 1)]);
                let expected = (i == j) as i64;
                assert_eq!(flux_fast(&ctx, &word, &clopen).unwrap(), expected);
                assert_eq!(flux_oracle(&ctx, &word, j, 0, 0).unwrap(), expected);
            }
        }
    }

    #[test]
    fn compact_letters_have_zero_flux() {
        let ctx = ladder_ctx(2);
        let clopen = ctx.basis_clopen(0).unwrap();
        let swap = Generator::loop_swap(
            vec![GenId::new(1, -2)],
            vec![GenId::new(1, 3)],
        )
        .unwrap();
        let word = MappingClassWord::new(vec![swap]);
        assert_eq!(flux_fast(&ctx, &word, &clopen).unwrap(), 0);
        assert_eq!(flux_oracle(&ctx, &word, 0, 0, 0).unwrap(), 0);
    }

    #[test]
    fn shift_powers_accumulate() {
        let ctx = ladder_ctx(3);
        let word = MappingClassWord::new(vec![
            shift(1, 1),
            shift(1, 1),
            shift(1, 1),
            shift(2, -1),
            shift(2, -1),
        ]);
        let a1 = ctx.basis_clopen(0).unwrap();
        assert_eq!(flux_fast(&ctx, &word, &a1).unwrap(), 3);
        assert_eq!(flux_oracle(&ctx, &word, 0, 0, 0).unwrap(), 3);
        assert_eq!(flux_oracle(&ctx, &word, 1, 0, 0).unwrap(), -2);
    }

    #[test]
    fn oracle_invariant_under_window_enlargement_and_cut_translation() {
        let ctx = ladder_ctx(3);
        let word = MappingClassWord::new(vec![shift(1, 1), shift(2, 1), shift(1, 1)]);
        let base = flux_oracle(&ctx, &word, 0, 0, 0).unwrap();
        assert_eq!(flux_oracle(&ctx, &word, 0, 1, 0).unwrap(), base);
        assert_eq!(flux_oracle(&ctx, &word, 0, 2, 0).unwrap(), base);
        assert_eq!(flux_oracle(&ctx, &word, 0, 0, 4).unwrap(), base);
        assert_eq!(flux_oracle(&ctx, &word, 0, 0, -3).unwrap(), base);
    }

    #[test]
    fn identity_word_has_zero_flux() {
        let ctx = ladder_ctx(2);
        assert_eq!(flux_oracle(&ctx, &MappingClassWord::identity(), 0, 0, 0).unwrap(), 0);
    }

    #[test]
    fn projection_and_section_round_trip() {
        let ctx = ladder_ctx(4);
        let v = FluxVector::from_components([(0, 2), (2, -1)]);
        let word = section(&ctx, &v).unwrap();
        assert_eq!(flux_projection(&ctx, &word).unwrap(), v);
    }

    #[test]
    fn split_decompose_strips_the_flux() {
        let ctx = ladder_ctx(3);
        let swap = Generator::loop_swap(vec![GenId::new(1, 0)], vec![GenId::new(2, 0)]).unwrap();
        let word = MappingClassWord::new(vec![shift(1, 1), swap]);
        let (v, residual) = split_decompose(&ctx, &word).unwrap();
        assert_eq!(v, FluxVector::from_components([(0, 1)]));
        assert!(flux_projection(&ctx, &residual).unwrap().is_zero());
    }

    #[test]
    fn millipede_has_empty_flux_vector() {
        let ctx = FluxContext::new(&catalog::millipede(), 6).unwrap();
        assert_eq!(ctx.ladder_count(), 0);
        let v = flux_projection(&ctx, &MappingClassWord::identity()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn algebra_laws_on_a_three_cut_graph() {
        let ctx = ladder_ctx(3);
        let word = MappingClassWord::new(vec![shift(1, 1), shift(2, -2)]);
        let a1 = ctx.basis_clopen(0).unwrap();
        let a2 = ctx.basis_clopen(1).unwrap();

        let c = flux_of_complement(&ctx, &word, &a1).unwrap();
        assert!(c.agrees());
        assert_eq!(c.rhs, -1);

        if a1.is_disjoint(&a2) {
            let u = flux_of_disjoint_union(&ctx, &word, &a1, &a2).unwrap();
            assert!(u.agrees());
        }

        let full = ClopenSet::full(&ctx);
        let d = flux_of_difference(&ctx, &word, &a1, &full).unwrap();
        assert!(d.agrees());

        let z = flux_of_empty_and_full(&ctx, &word).unwrap();
        assert_eq!((z.lhs, z.rhs), (0, 0));
    }

    #[test]
    fn disjointness_precondition_is_checked() {
        let ctx = ladder_ctx(3);
        let word = MappingClassWord::new(vec![shift(1, 1)]);
        let a1 = ctx.basis_clopen(0).unwrap();
        let err = flux_of_disjoint_union(&ctx, &word, &a1, &a1).unwrap_err();
        assert_eq!(err, FluxError::NotDisjoint);
    }

    #[test]
    fn nested_basis_elements_on_the_cantor_marked_space() {
        // marked space is a Cantor set: basis elements nest, and a shift on
        // a nested cut contributes nothing across the enclosing cut
        let ctx = FluxContext::new(&catalog::cantor_core(), 3).unwrap();
        assert!(ctx.ladder_count() >= 3);
        let word = MappingClassWord::new(vec![shift(2, 1)]); // cut of C_00 ⊂ C_0
        let against_outer = ctx.basis_clopen(0).unwrap();
        assert_eq!(flux_fast(&ctx, &word, &against_outer).unwrap(), 0);
        assert_eq!(flux_oracle(&ctx, &word, 0, 0, 0).unwrap(), 0);
        assert_eq!(flux_oracle(&ctx, &word, 1, 0, 0).unwrap(), 1);
    }

    #[test]
    fn clopen_literals_parse() {
        let ctx = ladder_ctx(4);
        let a1 = ClopenSet::parse(&ctx, "[A1]").unwrap();
        assert_eq!(a1, ctx.basis_clopen(0).unwrap());
        let by_address = ClopenSet::parse(&ctx, "[0]").unwrap();
        assert_eq!(by_address, ClopenSet::from_cylinder(&ctx, &Address::parse("0").unwrap()).unwrap());
        let full = ClopenSet::parse(&ctx, "[]").unwrap();
        assert_eq!(full, ClopenSet::full(&ctx));
    }
}
