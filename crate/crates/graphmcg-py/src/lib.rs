//! Python bindings: graph descriptors, classification, flux and witnesses.

use graphmcg::algprops;
use graphmcg::cech::{BasisFamily, RawFn};
use graphmcg::classify;
use graphmcg::endspace::{parse_end_space, Address, EndSpaceExpr, MarkFilter};
use graphmcg::flux::{self, ClopenSet, FluxContext};
use graphmcg::graphmodel::{
    self, parse_descriptor, pmap_isomorphism_type, GraphDescriptor,
};
use graphmcg::mcgelems::parse_mcg_word;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::BTreeMap;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An end-space expression with decidable predicates.
#[pyclass(name = "EndSpace")]
#[derive(Clone)]
struct PyEndSpace {
    expr: EndSpaceExpr,
}

#[pymethods]
impl PyEndSpace {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let expr = parse_end_space(text).map_err(value_error)?;
        Ok(PyEndSpace { expr })
    }

    fn is_valid(&self) -> bool {
        self.expr.validate().is_valid()
    }

    fn violations(&self) -> Vec<String> {
        self.expr
            .validate()
            .violations
            .iter()
            .map(|v| format!("{v:?}"))
            .collect()
    }

    /// Cardinality of "all", "marked" or "unmarked" ends, as a string:
    /// a number, "aleph0" or "uncountable".
    fn cardinality(&self, filter: &str) -> PyResult<String> {
        let filter = match filter {
            "all" => MarkFilter::All,
            "marked" => MarkFilter::Marked,
            "unmarked" => MarkFilter::Unmarked,
            other => return Err(value_error(format!("unknown filter {other:?}"))),
        };
        Ok(self.expr.cardinality(filter).to_string())
    }

    fn has_accumulation_point_in_unmarked(&self) -> bool {
        self.expr.has_accumulation_point_in_unmarked()
    }

    fn infinite_tree_part_exceeds_compact_open(&self) -> bool {
        self.expr.infinite_tree_part_exceeds_compact_open()
    }

    /// Basis family addresses up to the given depth.
    fn basis(&self, depth: usize) -> Vec<String> {
        BasisFamily::new(&self.expr, depth.max(1))
            .elements()
            .iter()
            .map(|a| a.to_string())
            .collect()
    }

    /// Canonical basis decomposition of a function literal such as
    /// "2*[00] + -1*[10]".
    fn decompose(&self, literal: &str, depth: usize) -> PyResult<String> {
        let basis = BasisFamily::new(&self.expr, depth.max(1));
        let raw = RawFn::parse(&self.expr, literal).map_err(value_error)?;
        Ok(basis.canonicalize(&raw).map_err(value_error)?.to_string())
    }

    fn __str__(&self) -> String {
        self.expr.to_string()
    }

    fn __repr__(&self) -> String {
        format!("EndSpace({:?})", self.expr.to_string())
    }
}

/// A graph descriptor: rank plus end space.
#[pyclass(name = "Graph")]
#[derive(Clone)]
struct PyGraph {
    graph: GraphDescriptor,
}

#[pymethods]
impl PyGraph {
    /// Builds a descriptor from a rank ("inf" or a number) and an
    /// end-space expression.
    #[new]
    fn new(rank: &str, ends: &str) -> PyResult<Self> {
        let text = format!("rank = {rank}\nends = {ends}\n");
        let graph = parse_descriptor(&text).map_err(value_error)?;
        Ok(PyGraph { graph })
    }

    /// Parses the descriptor file format.
    #[staticmethod]
    fn from_descriptor(text: &str) -> PyResult<Self> {
        Ok(PyGraph { graph: parse_descriptor(text).map_err(value_error)? })
    }

    fn rank(&self) -> String {
        self.graph.rank().to_string()
    }

    fn ends(&self) -> PyEndSpace {
        PyEndSpace { expr: self.graph.ends().clone() }
    }

    /// (rank, |ends|, |marked ends|) as strings.
    fn characteristic_triple(&self) -> (String, String, String) {
        let (r, e, l) = self.graph.characteristic_triple();
        (r.to_string(), e.to_string(), l.to_string())
    }

    /// "CB", "CB-generated", "locally CB" or "not locally CB".
    fn classify(&self) -> String {
        classify::classify_coarse(&self.graph).class.to_string()
    }

    fn classification_clause(&self) -> String {
        classify::classify_coarse(&self.graph).witness
    }

    fn table_cell(&self) -> PyResult<String> {
        Ok(classify::table_cell(&self.graph).map_err(value_error)?.to_string())
    }

    /// Rank of the first integral cohomology of the pure mapping class
    /// group.
    fn h1_rank(&self) -> String {
        classify::h1_rank(&self.graph).to_string()
    }

    fn is_residually_finite(&self) -> bool {
        algprops::is_residually_finite(&self.graph)
    }

    fn satisfies_tits_alternative(&self) -> bool {
        algprops::satisfies_tits_alternative_pmap(&self.graph)
    }

    fn full_group_satisfies_tits_alternative(&self) -> bool {
        algprops::satisfies_tits_alternative_map(&self.graph)
    }

    /// Wedge multiplicities {"loops", "rays", "lochness", "millipedes"},
    /// or None when the graph is not a finite wedge of the four pieces.
    fn wedge(&self) -> Option<BTreeMap<String, u64>> {
        graphmodel::wedge_decomposition(&self.graph).map(|d| {
            BTreeMap::from([
                ("loops".to_string(), d.canonical.loops),
                ("rays".to_string(), d.canonical.rays),
                ("lochness".to_string(), d.canonical.lochness),
                ("millipedes".to_string(), d.canonical.millipedes),
            ])
        })
    }

    /// Isomorphism type of the pure mapping class group for finite data,
    /// e.g. "Out(F_3)" or "F_2^2 x| Aut(F_2)".
    fn pmap_type(&self) -> PyResult<String> {
        Ok(pmap_isomorphism_type(&self.graph).map_err(value_error)?.to_string())
    }

    /// Sizes (word_maps, loop_swaps, loop_shifts) of the coarsely bounded
    /// generating set.
    fn generating_set_counts(&self) -> PyResult<(usize, usize, usize)> {
        Ok(classify::build_generating_set(&self.graph)
            .map_err(value_error)?
            .counts())
    }

    /// Flux computation context at the given basis depth.
    fn flux_context(&self, depth: usize) -> PyResult<PyFluxContext> {
        let ctx = FluxContext::new(&self.graph, depth.max(1)).map_err(value_error)?;
        Ok(PyFluxContext { ctx })
    }

    fn __repr__(&self) -> String {
        format!("Graph(rank={}, ends={:?})", self.graph.rank(), self.graph.ends().to_string())
    }
}

#[pyclass(name = "FluxContext")]
struct PyFluxContext {
    ctx: FluxContext,
}

#[pymethods]
impl PyFluxContext {
    fn ladder_count(&self) -> usize {
        self.ctx.ladder_count()
    }

    fn basis(&self) -> Vec<String> {
        self.ctx.basis().elements().iter().map(|a| a.to_string()).collect()
    }

    /// Fast flux of a word against a clopen literal ("[A1]", "[00]", or a
    /// "+" union).
    fn flux_fast(&self, word: &str, clopen: &str) -> PyResult<i64> {
        let word = parse_mcg_word(word).map_err(value_error)?;
        let set = ClopenSet::parse(&self.ctx, clopen).map_err(value_error)?;
        flux::flux_fast(&self.ctx, &word, &set).map_err(value_error)
    }

    /// Corank-oracle flux against one basis index (0-based).
    #[pyo3(signature = (word, index, enlarge=0))]
    fn flux_oracle(&self, word: &str, index: usize, enlarge: i64) -> PyResult<i64> {
        let word = parse_mcg_word(word).map_err(value_error)?;
        flux::flux_oracle(&self.ctx, &word, index, enlarge, 0).map_err(value_error)
    }

    /// The full flux vector as {basis index: value}.
    fn flux_projection(&self, word: &str) -> PyResult<BTreeMap<usize, i64>> {
        let word = parse_mcg_word(word).map_err(value_error)?;
        let v = flux::flux_projection(&self.ctx, &word).map_err(value_error)?;
        Ok(v.support().collect())
    }

    /// The section word realizing a flux vector.
    fn section(&self, components: BTreeMap<usize, i64>) -> PyResult<String> {
        let v = flux::FluxVector::from_components(components);
        Ok(flux::section(&self.ctx, &v).map_err(value_error)?.to_string())
    }

    /// Splits a word into (flux vector, residual word with zero flux).
    fn split(&self, word: &str) -> PyResult<(BTreeMap<usize, i64>, String)> {
        let word = parse_mcg_word(word).map_err(value_error)?;
        let (v, residual) = flux::split_decompose(&self.ctx, &word).map_err(value_error)?;
        Ok((v.support().collect(), residual.to_string()))
    }
}

/// Parses a cylinder address string such as "010".
#[pyfunction]
fn parse_address(text: &str) -> PyResult<String> {
    Ok(Address::parse(text).map_err(value_error)?.to_string())
}

/// Shift relation check behind the wreath-product subgroup.
#[pyfunction]
#[pyo3(signature = (n, m, rose=0))]
fn wreath_relation_check(n: u32, m: i64, rose: i64) -> bool {
    algprops::wreath_relation_check(n, m, rose)
}

/// Truncated branch-swap relation check; returns (squares, product).
#[pyfunction]
fn grigorchuk_relation_check(depth: usize) -> (bool, bool) {
    let r = algprops::grigorchuk_relation_check(depth);
    (r.squares_are_identity, r.product_bcd_is_identity)
}

/// Runs the acceptance criteria; returns a list of (id, name, passed,
/// details).
#[pyfunction]
fn selftest() -> Vec<(usize, String, bool, String)> {
    graphmcg::acceptance::run_all()
        .into_iter()
        .map(|o| (o.id, o.name.to_string(), o.passed, o.details))
        .collect()
}

#[pymodule]
#[pyo3(name = "graphmcg")]
fn graphmcg_module(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEndSpace>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyFluxContext>()?;
    m.add_function(wrap_pyfunction!(parse_address, m)?)?;
    m.add_function(wrap_pyfunction!(wreath_relation_check, m)?)?;
    m.add_function(wrap_pyfunction!(grigorchuk_relation_check, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
