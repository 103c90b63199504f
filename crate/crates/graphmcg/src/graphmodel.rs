//! Graph descriptors and the wedge-sum normal form.
//!
//! A locally finite, infinite graph is determined up to proper homotopy
//! equivalence by its characteristic triple: the rank of its fundamental
//! group, its end space, and the closed subset of ends accumulated by
//! loops. A [`GraphDescriptor`] carries exactly that data, optionally
//! together with an explicit standard-form list of tree components used to
//! cross-check the end-space-level tree-part condition.

use crate::endspace::{
    parse_end_space, Cardinality, EndSpaceExpr, Mark, MarkFilter,
};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    CountablyMany,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::CountablyMany => write!(f, "inf"),
        }
    }
}

/// One kind of complementary tree component in a standard form, with its
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeComponent {
    pub ends: EndSpaceExpr,
    pub multiplicity: Multiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDescriptor {
    rank: Rank,
    ends: EndSpaceExpr,
    standard_form: Option<Vec<TreeComponent>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("end space expression is invalid: {0} violation(s)")]
    InvalidEnds(usize),
    #[error("rank {rank} is inconsistent with the marked ends: a graph has infinite rank exactly when some end is accumulated by loops")]
    RankMarkMismatch { rank: Rank },
    #[error("standard-form tree components may not carry loop marks")]
    MarkedTreeComponent,
    #[error("zero multiplicity in standard form")]
    ZeroMultiplicity,
    #[error("graph has infinite rank or infinitely many ends; no finite presentation type")]
    NotFiniteType,
    #[error("descriptor line {line}: {message}")]
    Descriptor { line: usize, message: String },
}

impl GraphDescriptor {
    pub fn new(rank: Rank, ends: EndSpaceExpr) -> Result<Self, GraphError> {
        Self::with_standard_form(rank, ends, None)
    }

    pub fn with_standard_form(
        rank: Rank,
        ends: EndSpaceExpr,
        standard_form: Option<Vec<TreeComponent>>,
    ) -> Result<Self, GraphError> {
        let report = ends.validate();
        if !report.is_valid() {
            return Err(GraphError::InvalidEnds(report.violations.len()));
        }
        let has_marked = !ends.cardinality(MarkFilter::Marked).is_empty();
        if has_marked != matches!(rank, Rank::Infinite) {
            return Err(GraphError::RankMarkMismatch { rank });
        }
        if let Some(components) = &standard_form {
            for c in components {
                if c.ends.contains_marked() {
                    return Err(GraphError::MarkedTreeComponent);
                }
                if c.multiplicity == Multiplicity::Finite(0) {
                    return Err(GraphError::ZeroMultiplicity);
                }
            }
        }
        Ok(GraphDescriptor { rank, ends, standard_form })
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn ends(&self) -> &EndSpaceExpr {
        &self.ends
    }

    pub fn standard_form(&self) -> Option<&[TreeComponent]> {
        self.standard_form.as_deref()
    }

    pub fn is_tree(&self) -> bool {
        self.rank == Rank::Finite(0)
    }

    pub fn end_count(&self) -> Cardinality {
        self.ends.cardinality(MarkFilter::All)
    }

    pub fn marked_end_count(&self) -> Cardinality {
        self.ends.cardinality(MarkFilter::Marked)
    }

    pub fn characteristic_triple(&self) -> (Rank, Cardinality, Cardinality) {
        (self.rank, self.end_count(), self.marked_end_count())
    }

    /// Number of distinct tree-component kinds declared in the standard
    /// form whose end space is infinite, if a standard form is present.
    pub fn standard_form_infinite_tree_class(&self) -> Option<Cardinality> {
        let components = self.standard_form.as_ref()?;
        let mut total = Cardinality::Finite(0);
        for c in components {
            if c.ends.cardinality(MarkFilter::All).is_finite() {
                continue;
            }
            let contribution = match c.multiplicity {
                Multiplicity::Finite(n) => Cardinality::Finite(n),
                Multiplicity::CountablyMany => Cardinality::CountablyInfinite,
            };
            total = match (total, contribution) {
                (Cardinality::Finite(a), Cardinality::Finite(b)) => Cardinality::Finite(a + b),
                _ => Cardinality::CountablyInfinite,
            };
        }
        Some(total)
    }
}

// ---------------------------------------------------------------------------
// Wedge decomposition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WedgeSummand {
    Loop,
    Ray,
    LochNess,
    Millipede,
}

/// Multiplicities of the four admissible wedge summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WedgeMultiplicities {
    pub loops: u64,
    pub rays: u64,
    pub lochness: u64,
    pub millipedes: u64,
}

impl WedgeMultiplicities {
    pub fn total_summands(self) -> u64 {
        self.loops + self.rays + self.lochness + self.millipedes
    }

    pub fn monsters(self) -> u64 {
        self.lochness + self.millipedes
    }
}

impl fmt::Display for WedgeMultiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "loops={} rays={} lochness={} millipedes={}",
            self.loops, self.rays, self.lochness, self.millipedes
        )
    }
}

/// Result of the wedge decomposition: the multiplicities as read off the
/// expression, and the canonical form in which every ray has been absorbed
/// into a millipede summand whenever one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WedgeDecomposition {
    pub raw: WedgeMultiplicities,
    pub canonical: WedgeMultiplicities,
}

/// Writes the graph as a finite wedge of loops, rays, Loch Ness monsters
/// and Millipede monsters, when possible: the graph must admit a coarsely
/// bounded generating set (tree, or finitely many marked ends with no
/// accumulation point among the unmarked ones) and must have either
/// infinite rank or a finite end space.
pub fn wedge_decomposition(g: &GraphDescriptor) -> Option<WedgeDecomposition> {
    let marked = g.marked_end_count();
    let cb_generated =
        g.is_tree() || (marked.is_finite() && !g.ends().has_accumulation_point_in_unmarked());
    if !cb_generated {
        return None;
    }
    let finite_ok = match g.rank() {
        Rank::Infinite => true,
        Rank::Finite(_) => g.end_count().is_finite(),
    };
    if !finite_ok {
        return None;
    }

    let mut raw = WedgeMultiplicities::default();
    if let Rank::Finite(k) = g.rank() {
        raw.loops = k;
    }
    let mut parts = Vec::new();
    flatten_sum(g.ends(), &mut parts);
    for part in parts {
        match part {
            EndSpaceExpr::Pt(Mark::Plain) => raw.rays += 1,
            EndSpaceExpr::Pt(Mark::Loops) => raw.lochness += 1,
            EndSpaceExpr::Seq(_, Mark::Loops) => raw.millipedes += 1,
            // excluded by the conditions above
            _ => return None,
        }
    }

    let mut canonical = raw;
    if canonical.millipedes >= 1 {
        canonical.rays = 0;
    }
    Some(WedgeDecomposition { raw, canonical })
}

fn flatten_sum<'a>(expr: &'a EndSpaceExpr, out: &mut Vec<&'a EndSpaceExpr>) {
    match expr {
        EndSpaceExpr::Sum(parts) => {
            for p in parts {
                flatten_sum(p, out);
            }
        }
        other => out.push(other),
    }
}

/// Rebuilds a descriptor from wedge multiplicities.
pub fn descriptor_from_wedge(m: WedgeMultiplicities) -> Result<GraphDescriptor, GraphError> {
    let mut parts = Vec::new();
    for _ in 0..m.rays {
        parts.push(EndSpaceExpr::pt(Mark::Plain));
    }
    for _ in 0..m.lochness {
        parts.push(EndSpaceExpr::pt(Mark::Loops));
    }
    for _ in 0..m.millipedes {
        parts.push(EndSpaceExpr::seq(EndSpaceExpr::pt(Mark::Plain), Mark::Loops));
    }
    let ends = match parts.len() {
        0 => return Err(GraphError::Descriptor {
            line: 0,
            message: "a wedge with no end-carrying summands is compact".into(),
        }),
        1 => parts.pop().unwrap(),
        _ => EndSpaceExpr::sum(parts),
    };
    let rank = if m.monsters() > 0 { Rank::Infinite } else { Rank::Finite(m.loops) };
    GraphDescriptor::new(rank, ends)
}

// ---------------------------------------------------------------------------
// Pure mapping class group isomorphism types for finite data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PMapType {
    /// Trees have trivial pure mapping class group.
    Trivial,
    OutFn(u64),
    AutFn(u64),
    /// `F_n^{copies} ⋊ Aut(F_n)` with `copies ≥ 1`.
    RaysSemidirect { rank: u64, copies: u64 },
}

impl fmt::Display for PMapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PMapType::Trivial => write!(f, "1"),
            PMapType::OutFn(n) => write!(f, "Out(F_{n})"),
            PMapType::AutFn(n) => write!(f, "Aut(F_{n})"),
            PMapType::RaysSemidirect { rank, copies } => {
                write!(f, "F_{rank}^{copies} x| Aut(F_{rank})")
            }
        }
    }
}

/// Isomorphism type of the pure mapping class group from finite rank and
/// end-count data.
pub fn pmap_type_of(rank: u64, end_count: u64) -> PMapType {
    match (rank, end_count) {
        (0, _) => PMapType::Trivial,
        (n, 0) => PMapType::OutFn(n),
        (n, 1) => PMapType::AutFn(n),
        (n, e) => PMapType::RaysSemidirect { rank: n, copies: e - 1 },
    }
}

/// Isomorphism type for a descriptor of finite rank with finitely many
/// ends, or a tree.
pub fn pmap_isomorphism_type(g: &GraphDescriptor) -> Result<PMapType, GraphError> {
    if g.is_tree() {
        return Ok(PMapType::Trivial);
    }
    match (g.rank(), g.end_count()) {
        (Rank::Finite(n), Cardinality::Finite(e)) => Ok(pmap_type_of(n, e)),
        _ => Err(GraphError::NotFiniteType),
    }
}

// ---------------------------------------------------------------------------
// Descriptor file format
// ---------------------------------------------------------------------------

/// Parses the line-oriented descriptor format:
///
/// ```text
/// rank = inf
/// ends = sum(pt!, pt!, cantor)
/// tree = cantor x 1
/// ```
///
/// `rank` and `ends` are required, `tree` lines are optional and repeatable;
/// unknown keys are rejected. Blank lines and `#` comments are ignored.
pub fn parse_descriptor(text: &str) -> Result<GraphDescriptor, GraphError> {
    let mut rank: Option<Rank> = None;
    let mut ends: Option<EndSpaceExpr> = None;
    let mut trees: Vec<TreeComponent> = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| GraphError::Descriptor {
            line: line_no,
            message: format!("expected 'key = value', got {line:?}"),
        })?;
        let value = value.trim();
        match key.trim() {
            "rank" => {
                let r = if value == "inf" {
                    Rank::Infinite
                } else {
                    Rank::Finite(value.parse().map_err(|_| GraphError::Descriptor {
                        line: line_no,
                        message: format!("bad rank {value:?}"),
                    })?)
                };
                rank = Some(r);
            }
            "ends" => {
                let expr = parse_end_space(value).map_err(|e| GraphError::Descriptor {
                    line: line_no,
                    message: e.to_string(),
                })?;
                ends = Some(expr);
            }
            "tree" => {
                let (expr_text, mult_text) =
                    value.rsplit_once(" x ").ok_or_else(|| GraphError::Descriptor {
                        line: line_no,
                        message: "expected 'tree = <expression> x <mult|inf>'".into(),
                    })?;
                let expr = parse_end_space(expr_text).map_err(|e| GraphError::Descriptor {
                    line: line_no,
                    message: e.to_string(),
                })?;
                let multiplicity = if mult_text.trim() == "inf" {
                    Multiplicity::CountablyMany
                } else {
                    Multiplicity::Finite(mult_text.trim().parse().map_err(|_| {
                        GraphError::Descriptor {
                            line: line_no,
                            message: format!("bad multiplicity {mult_text:?}"),
                        }
                    })?)
                };
                trees.push(TreeComponent { ends: expr, multiplicity });
            }
            other => {
                return Err(GraphError::Descriptor {
                    line: line_no,
                    message: format!("unknown key {other:?}"),
                })
            }
        }
    }
    let rank = rank.ok_or(GraphError::Descriptor { line: 0, message: "missing rank".into() })?;
    let ends = ends.ok_or(GraphError::Descriptor { line: 0, message: "missing ends".into() })?;
    let standard_form = if trees.is_empty() { None } else { Some(trees) };
    GraphDescriptor::with_standard_form(rank, ends, standard_form)
}

// ---------------------------------------------------------------------------
// Catalog descriptors used across tests and the self-test suite
// ---------------------------------------------------------------------------

pub mod catalog {
    use super::*;
    use Mark::{Loops, Plain};

    pub fn single_ray() -> GraphDescriptor {
        GraphDescriptor::new(Rank::Finite(0), EndSpaceExpr::pt(Plain)).unwrap()
    }

    pub fn lasso() -> GraphDescriptor {
        GraphDescriptor::new(Rank::Finite(1), EndSpaceExpr::pt(Plain)).unwrap()
    }

    pub fn rank2_two_rays() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Finite(2),
            EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Plain), EndSpaceExpr::pt(Plain)]),
        )
        .unwrap()
    }

    pub fn cantor_tree() -> GraphDescriptor {
        GraphDescriptor::new(Rank::Finite(0), EndSpaceExpr::cantor(Plain)).unwrap()
    }

    pub fn rank2_wedge_cantor_tree() -> GraphDescriptor {
        GraphDescriptor::new(Rank::Finite(2), EndSpaceExpr::cantor(Plain)).unwrap()
    }

    pub fn loch_ness() -> GraphDescriptor {
        GraphDescriptor::new(Rank::Infinite, EndSpaceExpr::pt(Loops)).unwrap()
    }

    pub fn millipede() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::seq(EndSpaceExpr::pt(Plain), Loops),
        )
        .unwrap()
    }

    /// The two-ended infinite-rank ladder.
    pub fn ladder() -> GraphDescriptor {
        marked_points(2)
    }

    /// Infinite-rank graph with `n` ends, all accumulated by loops.
    pub fn marked_points(n: usize) -> GraphDescriptor {
        assert!(n >= 1);
        let ends = if n == 1 {
            EndSpaceExpr::pt(Loops)
        } else {
            EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Loops); n])
        };
        GraphDescriptor::new(Rank::Infinite, ends).unwrap()
    }

    pub fn ladder_wedge_cantor_tree() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::sum(vec![
                EndSpaceExpr::pt(Loops),
                EndSpaceExpr::pt(Loops),
                EndSpaceExpr::cantor(Plain),
            ]),
        )
        .unwrap()
    }

    pub fn loch_ness_wedge_cantor_tree() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Loops), EndSpaceExpr::cantor(Plain)]),
        )
        .unwrap()
    }

    /// Core graph whose end space is a Cantor set entirely accumulated by
    /// loops.
    pub fn cantor_core() -> GraphDescriptor {
        GraphDescriptor::new(Rank::Infinite, EndSpaceExpr::cantor(Loops)).unwrap()
    }

    /// A millipede-like graph whose fan consists of Cantor trees: countably
    /// many infinite-ended tree parts converging to one marked end.
    pub fn sequence_of_cantor_trees() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::seq(EndSpaceExpr::cantor(Plain), Loops),
        )
        .unwrap()
    }

    pub fn ladder_wedge_cantor_tree_sequence() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::sum(vec![
                EndSpaceExpr::pt(Loops),
                EndSpaceExpr::pt(Loops),
                EndSpaceExpr::seq(EndSpaceExpr::cantor(Plain), Loops),
            ]),
        )
        .unwrap()
    }

    pub fn cantor_core_wedge_cantor_tree() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::sum(vec![EndSpaceExpr::cantor(Loops), EndSpaceExpr::cantor(Plain)]),
        )
        .unwrap()
    }

    pub fn cantor_core_wedge_cantor_tree_sequence() -> GraphDescriptor {
        GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::sum(vec![
                EndSpaceExpr::cantor(Loops),
                EndSpaceExpr::seq(EndSpaceExpr::cantor(Plain), Loops),
            ]),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use catalog::*;

    #[test]
    fn characteristic_triples_of_monsters() {
        assert_eq!(
            loch_ness().characteristic_triple(),
            (Rank::Infinite, Cardinality::Finite(1), Cardinality::Finite(1))
        );
        assert_eq!(
            millipede().characteristic_triple(),
            (Rank::Infinite, Cardinality::CountablyInfinite, Cardinality::Finite(1))
        );
        assert_eq!(
            rank2_two_rays().characteristic_triple(),
            (Rank::Finite(2), Cardinality::Finite(2), Cardinality::Finite(0))
        );
    }

    #[test]
    fn rank_mark_consistency_enforced() {
        let err = GraphDescriptor::new(Rank::Finite(3), EndSpaceExpr::pt(Mark::Loops));
        assert!(matches!(err, Err(GraphError::RankMarkMismatch { .. })));
        let err = GraphDescriptor::new(Rank::Infinite, EndSpaceExpr::pt(Mark::Plain));
        assert!(matches!(err, Err(GraphError::RankMarkMismatch { .. })));
    }

    #[test]
    fn wedge_of_two_loch_ness() {
        let d = wedge_decomposition(&ladder()).unwrap();
        assert_eq!(d.raw.lochness, 2);
        assert_eq!(d.raw.millipedes, 0);
        assert_eq!(d.raw.rays, 0);
        assert_eq!(d.canonical, d.raw);
    }

    #[test]
    fn millipede_wedge_ray_absorbs_canonically() {
        let g = GraphDescriptor::new(
            Rank::Infinite,
            EndSpaceExpr::sum(vec![
                EndSpaceExpr::seq(EndSpaceExpr::pt(Mark::Plain), Mark::Loops),
                EndSpaceExpr::pt(Mark::Plain),
            ]),
        )
        .unwrap();
        let d = wedge_decomposition(&g).unwrap();
        assert_eq!((d.raw.millipedes, d.raw.rays), (1, 1));
        assert_eq!((d.canonical.millipedes, d.canonical.rays), (1, 0));
        // both forms rebuild to the same characteristic triple
        let raw_triple = descriptor_from_wedge(d.raw).unwrap().characteristic_triple();
        let canon_triple = descriptor_from_wedge(d.canonical).unwrap().characteristic_triple();
        assert_eq!(raw_triple, g.characteristic_triple());
        assert_eq!(canon_triple, g.characteristic_triple());
    }

    #[test]
    fn uncountably_many_marked_ends_is_not_decomposable() {
        assert!(wedge_decomposition(&cantor_core()).is_none());
    }

    #[test]
    fn infinite_ended_tree_is_not_decomposable() {
        assert!(wedge_decomposition(&cantor_tree()).is_none());
    }

    #[test]
    fn finite_type_pmap_isomorphism() {
        assert_eq!(pmap_type_of(3, 0), PMapType::OutFn(3));
        assert_eq!(pmap_isomorphism_type(&single_ray()).unwrap(), PMapType::Trivial);
        assert_eq!(pmap_isomorphism_type(&cantor_tree()).unwrap(), PMapType::Trivial);
        assert_eq!(
            pmap_isomorphism_type(&rank2_two_rays()).unwrap(),
            PMapType::RaysSemidirect { rank: 2, copies: 1 }
        );
        let three_ends = GraphDescriptor::new(
            Rank::Finite(2),
            EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Mark::Plain); 3]),
        )
        .unwrap();
        assert_eq!(
            pmap_isomorphism_type(&three_ends).unwrap(),
            PMapType::RaysSemidirect { rank: 2, copies: 2 }
        );
        assert_eq!(pmap_isomorphism_type(&loch_ness()), Err(GraphError::NotFiniteType));
    }

    #[test]
    fn descriptor_file_round_trip() {
        let text = "# the ladder wedge a cantor tree\nrank = inf\nends = sum(pt!, pt!, cantor)\ntree = cantor x 1\n";
        let g = parse_descriptor(text).unwrap();
        assert_eq!(g.rank(), Rank::Infinite);
        assert_eq!(g.marked_end_count(), Cardinality::Finite(2));
        assert_eq!(g.standard_form().unwrap().len(), 1);
        assert_eq!(g.standard_form_infinite_tree_class(), Some(Cardinality::Finite(1)));
    }

    #[test]
    fn descriptor_rejects_unknown_keys() {
        let err = parse_descriptor("rank = 1\nends = pt\ncolor = blue\n").unwrap_err();
        assert!(matches!(err, GraphError::Descriptor { line: 3, .. }));
    }
}
