//! Coarse-boundedness classification and the generating-set constructor.
//!
//! A pure mapping class group is coarsely bounded, CB-generated, or locally
//! CB according to the shape of the graph:
//!
//! - CB: rank zero, or rank one with a single end, or infinite rank with a
//!   single marked end and no accumulation point among the unmarked ends
//!   (a monster with finitely many rays, up to proper homotopy);
//! - CB-generated: a tree, or finitely many marked ends with no
//!   accumulation point among the unmarked ends;
//! - locally CB: finite rank, or finitely many marked ends with only a
//!   bounded infinite tree part.
//!
//! Each verdict records the clause that fired, for auditable reports.

use crate::cech::chom_rank_class;
use crate::endspace::Cardinality;
use crate::flux::marked_subexpression;
use crate::freegroup::GenId;
use crate::graphmodel::{wedge_decomposition, GraphDescriptor, Rank, WedgeMultiplicities};
use crate::mcgelems::Generator;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoarseClass {
    Cb,
    CbGeneratedNotCb,
    LocallyCbNotCbGenerated,
    NotLocallyCb,
}

impl CoarseClass {
    pub fn is_cb(self) -> bool {
        self == CoarseClass::Cb
    }

    pub fn is_cb_generated(self) -> bool {
        matches!(self, CoarseClass::Cb | CoarseClass::CbGeneratedNotCb)
    }

    pub fn is_locally_cb(self) -> bool {
        self != CoarseClass::NotLocallyCb
    }
}

impl fmt::Display for CoarseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            CoarseClass::Cb => "CB",
            CoarseClass::CbGeneratedNotCb => "CB-generated",
            CoarseClass::LocallyCbNotCbGenerated => "locally CB",
            CoarseClass::NotLocallyCb => "not locally CB",
        };
        write!(f, "{text}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: CoarseClass,
    /// The clause of the classification that decided the verdict.
    pub witness: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("the combination finite rank with unboundedly many infinite-ended tree parts does not occur for locally finite graphs")]
    NaCell,
    #[error("generating-set construction needs a CB-generated graph of infinite rank that is not a bare monster")]
    NotCbGenerated,
}

/// Full classification with the clause that fired.
pub fn classify_coarse(g: &GraphDescriptor) -> Classification {
    let marked = g.marked_end_count();
    let accumulation = g.ends().has_accumulation_point_in_unmarked();
    let unbounded_trees = g.ends().infinite_tree_part_exceeds_compact_open();

    if g.is_tree() {
        return Classification {
            class: CoarseClass::Cb,
            witness: "rank zero: the pure mapping class group is trivial".into(),
        };
    }
    if g.rank() == Rank::Finite(1) && g.end_count() == Cardinality::Finite(1) {
        return Classification {
            class: CoarseClass::Cb,
            witness: "rank one with one end".into(),
        };
    }
    if g.rank() == Rank::Infinite && marked == Cardinality::Finite(1) && !accumulation {
        return Classification {
            class: CoarseClass::Cb,
            witness: "one end accumulated by loops with all other ends discrete: a monster with finitely many rays attached".into(),
        };
    }
    if marked.is_finite() && !accumulation {
        return Classification {
            class: CoarseClass::CbGeneratedNotCb,
            witness: "finitely many ends accumulated by loops and no accumulation point among the remaining ends".into(),
        };
    }
    let locally_cb = match g.rank() {
        Rank::Finite(_) => Some("finite rank".to_string()),
        Rank::Infinite if marked.is_finite() && !unbounded_trees => Some(
            "finitely many ends accumulated by loops and only a compact-open amount of infinite tree part".into(),
        ),
        Rank::Infinite => None,
    };
    match locally_cb {
        Some(witness) => Classification { class: CoarseClass::LocallyCbNotCbGenerated, witness },
        None => {
            let witness = if !marked.is_finite() {
                "infinitely many ends accumulated by loops".into()
            } else {
                "infinitely many tree components with infinite end spaces".into()
            };
            Classification { class: CoarseClass::NotLocallyCb, witness }
        }
    }
}

// ---------------------------------------------------------------------------
// Classification table coordinates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankColumn {
    RankZero,
    FiniteRank,
    OneMarkedEnd,
    FinitelyManyMarkedEnds,
    InfinitelyManyMarkedEnds,
}

impl fmt::Display for RankColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            RankColumn::RankZero => "r=0",
            RankColumn::FiniteRank => "r in [1,inf)",
            RankColumn::OneMarkedEnd => "n=1",
            RankColumn::FinitelyManyMarkedEnds => "n in [2,inf)",
            RankColumn::InfinitelyManyMarkedEnds => "n=inf",
        };
        write!(f, "{text}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreePartRow {
    None,
    FinitelyMany,
    InfinitelyMany,
}

impl fmt::Display for TreePartRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            TreePartRow::None => "t=0",
            TreePartRow::FinitelyMany => "t in [1,inf)",
            TreePartRow::InfinitelyMany => "t=inf",
        };
        write!(f, "{text}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableCell {
    pub column: RankColumn,
    pub row: TreePartRow,
}

impl fmt::Display for TableCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.column, self.row)
    }
}

/// Coordinates in the classification table. The row is the class of the
/// number of tree components with infinite end spaces, taken from the
/// explicit standard form when one is supplied and otherwise from the
/// end-space reformulation.
pub fn table_cell(g: &GraphDescriptor) -> Result<TableCell, ClassifyError> {
    let column = match (g.rank(), g.marked_end_count()) {
        (Rank::Finite(0), _) => RankColumn::RankZero,
        (Rank::Finite(_), _) => RankColumn::FiniteRank,
        (Rank::Infinite, Cardinality::Finite(1)) => RankColumn::OneMarkedEnd,
        (Rank::Infinite, Cardinality::Finite(_)) => RankColumn::FinitelyManyMarkedEnds,
        (Rank::Infinite, _) => RankColumn::InfinitelyManyMarkedEnds,
    };
    let row = match g.standard_form_infinite_tree_class() {
        Some(Cardinality::Finite(0)) => TreePartRow::None,
        Some(Cardinality::Finite(_)) => TreePartRow::FinitelyMany,
        Some(_) => TreePartRow::InfinitelyMany,
        None => {
            if !g.ends().has_accumulation_point_in_unmarked() {
                TreePartRow::None
            } else if g.ends().infinite_tree_part_exceeds_compact_open() {
                TreePartRow::InfinitelyMany
            } else {
                TreePartRow::FinitelyMany
            }
        }
    };
    if g.rank().is_finite() && row == TreePartRow::InfinitelyMany {
        return Err(ClassifyError::NaCell);
    }
    Ok(TableCell { column, row })
}

/// Rank of the first integral cohomology of the pure mapping class group:
/// zero for at most one marked end, one less than the count for finitely
/// many, countably infinite otherwise.
pub fn h1_rank(g: &GraphDescriptor) -> Cardinality {
    match g.marked_end_count() {
        Cardinality::Finite(n) => Cardinality::Finite(n.saturating_sub(1)),
        _ => Cardinality::CountablyInfinite,
    }
}

/// The cohomology rank must agree with the rank of the locally constant
/// function group of the marked subspace.
pub fn h1_matches_chom(g: &GraphDescriptor) -> bool {
    let chom = match marked_subexpression(g.ends()) {
        None => Cardinality::Finite(0),
        Some(marked) => chom_rank_class(&marked),
    };
    h1_rank(g) == chom
}

// ---------------------------------------------------------------------------
// The coarsely bounded generating set
// ---------------------------------------------------------------------------

/// Descriptor of the generating set for a CB-generated graph of infinite
/// rank: an identity neighborhood at the wedge point, one word map per ray,
/// all loop swaps between first loops of the monster summands, and a dual
/// family of primitive loop shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSetDescriptor {
    pub wedge: WedgeMultiplicities,
    /// Identity-neighborhood factor, described by the wedge point.
    pub neighborhood_note: String,
    pub word_maps: Vec<Generator>,
    pub loop_swaps: Vec<Generator>,
    pub loop_shifts: Vec<Generator>,
    /// True when the word maps push over the first millipede loop because
    /// no Loch Ness summand exists.
    pub uses_millipede_loop: bool,
}

impl GeneratingSetDescriptor {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.word_maps.len(), self.loop_swaps.len(), self.loop_shifts.len())
    }
}

/// Builds the generating-set descriptor. First loops of the monster
/// summands are numbered `a<s>.1` with the Loch Ness summands first.
pub fn build_generating_set(
    g: &GraphDescriptor,
) -> Result<GeneratingSetDescriptor, ClassifyError> {
    let classification = classify_coarse(g);
    if !classification.class.is_cb_generated() || g.rank() != Rank::Infinite {
        return Err(ClassifyError::NotCbGenerated);
    }
    let wedge = wedge_decomposition(g).ok_or(ClassifyError::NotCbGenerated)?.raw;
    let monsters = wedge.monsters();
    if wedge.rays == 0 && monsters == 1 {
        // a bare monster is already coarsely bounded
        return Err(ClassifyError::NotCbGenerated);
    }

    let first_loop = |summand: u64| GenId::new(summand as i64, 1);
    let uses_millipede_loop = wedge.lochness == 0;

    let word_maps: Vec<Generator> = (1..=wedge.rays)
        .map(|i| Generator::WordMap {
            word: crate::freegroup::FreeWord::generator(first_loop(1)),
            interval: i as u32,
        })
        .collect();

    let mut loop_swaps = Vec::new();
    for s in 1..=monsters {
        for t in (s + 1)..=monsters {
            loop_swaps.push(
                Generator::loop_swap(vec![first_loop(s)], vec![first_loop(t)])
                    .expect("distinct summand loops"),
            );
        }
    }

    let shift_count = match g.marked_end_count() {
        Cardinality::Finite(n) => n.saturating_sub(1),
        _ => unreachable!("CB-generated graphs have finitely many marked ends"),
    };
    let loop_shifts: Vec<Generator> = (1..=shift_count)
        .map(|i| Generator::loop_shift(i as i64, 1).expect("nonzero exponent"))
        .collect();

    Ok(GeneratingSetDescriptor {
        wedge,
        neighborhood_note:
            "identity neighborhood fixing the wedge point and preserving its complementary components"
                .into(),
        word_maps,
        loop_swaps,
        loop_shifts,
        uses_millipede_loop,
    })
}
