//! Reduced words, windowed substitutions, Stallings folding and coranks.
//!
//! Generators live on "ladders": `GenId { ladder, pos }` is the loop at an
//! integer position of a bi-infinite column of loops. Ladder 0 doubles as
//! the plain alphabet `x_i`. A [`WindowedSubstitution`] stores finitely many
//! explicit images plus a per-ladder tail shift, which is exactly enough to
//! express loop swaps, Nielsen automorphisms and loop shifts.
//!
//! The folding machinery is the independent oracle used by the flux module:
//! `corank(ambient, words) = |ambient| − rank(fold(words))`, with a
//! Smith-normal-form certificate that the abelianized inclusion is
//! primitive.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId {
    pub ladder: i64,
    pub pos: i64,
}

impl GenId {
    pub fn new(ladder: i64, pos: i64) -> Self {
        GenId { ladder, pos }
    }

    /// Plain alphabet generator `x_i`.
    pub fn x(pos: i64) -> Self {
        GenId { ladder: 0, pos }
    }

    pub fn shifted(self, amount: i64) -> Self {
        GenId { ladder: self.ladder, pos: self.pos + amount }
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ladder == 0 {
            write!(f, "x{}", self.pos)
        } else {
            write!(f, "a{}.{}", self.ladder, self.pos)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GenId, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            if self.gen.ladder == 0 {
                write!(f, "X{}", self.gen.pos)
            } else {
                write!(f, "A{}.{}", self.gen.ladder, self.gen.pos)
            }
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// A reduced word in the free group on the ladder generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(gen: GenId) -> Self {
        FreeWord { letters: vec![Letter::new(gen, false)] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, letter: Letter) {
        match self.letters.last() {
            Some(&last) if last.cancels(letter) => {
                self.letters.pop();
            }
            _ => self.letters.push(letter),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    pub fn generators_used(&self) -> BTreeSet<GenId> {
        self.letters.iter().map(|l| l.gen).collect()
    }

    pub fn commutes_with(&self, other: &FreeWord) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Word syntax: `x3 X2 x-1` on ladder 0 (uppercase means inverse) and
    /// `a2.5` / `A2.5` for ladder-qualified generators.
    pub fn parse(text: &str) -> Result<FreeWord, FreeGroupError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            letters.push(parse_letter(token)?);
        }
        Ok(FreeWord::from_letters(letters))
    }
}

fn parse_letter(token: &str) -> Result<Letter, FreeGroupError> {
    let bad = || FreeGroupError::BadWord(token.to_string());
    let mut chars = token.chars();
    let head = chars.next().ok_or_else(bad)?;
    let rest = chars.as_str();
    let (inverse, ladderless) = match head {
        'x' => (false, true),
        'X' => (true, true),
        'a' => (false, false),
        'A' => (true, false),
        _ => return Err(bad()),
    };
    let gen = if ladderless {
        GenId::x(rest.parse().map_err(|_| bad())?)
    } else {
        let (ladder, pos) = rest.split_once('.').ok_or_else(bad)?;
        GenId::new(ladder.parse().map_err(|_| bad())?, pos.parse().map_err(|_| bad())?)
    };
    Ok(Letter::new(gen, inverse))
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("cannot parse word token {0:?}")]
    BadWord(String),
    #[error("subgroup word uses generator {0} outside the ambient set")]
    ForeignGenerator(GenId),
    #[error("abelianized inclusion is not primitive (invariant factors {factors:?}); the words are not certified to span a free factor")]
    NotCertifiedFreeFactor { factors: Vec<i64> },
}

// ---------------------------------------------------------------------------
// Windowed substitutions
// ---------------------------------------------------------------------------

/// An endomorphism of the ladder free group given by finitely many explicit
/// images together with a translation `x_p ↦ x_{p+s}` on the tail of each
/// ladder. Canonical form stores no explicit image that agrees with the
/// tail rule and no zero shift, so structural equality is extensional
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WindowedSubstitution {
    images: BTreeMap<GenId, FreeWord>,
    shifts: BTreeMap<i64, i64>,
}

impl WindowedSubstitution {
    pub fn identity() -> Self {
        WindowedSubstitution::default()
    }

    pub fn from_images(images: BTreeMap<GenId, FreeWord>) -> Self {
        let mut s = WindowedSubstitution { images, shifts: BTreeMap::new() };
        s.canonicalize();
        s
    }

    pub fn shift(ladder: i64, amount: i64) -> Self {
        let mut shifts = BTreeMap::new();
        if amount != 0 {
            shifts.insert(ladder, amount);
        }
        WindowedSubstitution { images: BTreeMap::new(), shifts }
    }

    pub fn with_image(mut self, gen: GenId, image: FreeWord) -> Self {
        self.images.insert(gen, image);
        self.canonicalize();
        self
    }

    /// Transposition of two generators.
    pub fn swap(a: GenId, b: GenId) -> Self {
        let mut images = BTreeMap::new();
        images.insert(a, FreeWord::generator(b));
        images.insert(b, FreeWord::generator(a));
        WindowedSubstitution::from_images(images)
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty() && self.shifts.is_empty()
    }

    pub fn has_zero_shifts(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn explicit_images(&self) -> &BTreeMap<GenId, FreeWord> {
        &self.images
    }

    pub fn shifts(&self) -> &BTreeMap<i64, i64> {
        &self.shifts
    }

    pub fn shift_on(&self, ladder: i64) -> i64 {
        self.shifts.get(&ladder).copied().unwrap_or(0)
    }

    pub fn image_of(&self, gen: GenId) -> FreeWord {
        match self.images.get(&gen) {
            Some(w) => w.clone(),
            None => FreeWord::generator(gen.shifted(self.shift_on(gen.ladder))),
        }
    }

    pub fn apply(&self, word: &FreeWord) -> FreeWord {
        let mut out = FreeWord::identity();
        for letter in word.letters() {
            let image = self.image_of(letter.gen);
            let image = if letter.inverse { image.inverse() } else { image };
            out = out.mul(&image);
        }
        out
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &WindowedSubstitution) -> WindowedSubstitution {
        let mut images = BTreeMap::new();
        let mut keys: BTreeSet<GenId> = other.images.keys().copied().collect();
        for &k in self.images.keys() {
            // generators whose tail image under `other` hits an explicit
            // image of `self`
            keys.insert(k.shifted(-other.shift_on(k.ladder)));
        }
        for k in keys {
            images.insert(k, self.apply(&other.image_of(k)));
        }
        let mut shifts = BTreeMap::new();
        let ladders: BTreeSet<i64> = self
            .shifts
            .keys()
            .chain(other.shifts.keys())
            .copied()
            .collect();
        for l in ladders {
            let s = self.shift_on(l) + other.shift_on(l);
            if s != 0 {
                shifts.insert(l, s);
            }
        }
        let mut composed = WindowedSubstitution { images, shifts };
        composed.canonicalize();
        composed
    }

    fn canonicalize(&mut self) {
        self.shifts.retain(|_, s| *s != 0);
        let shifts = self.shifts.clone();
        self.images.retain(|gen, image| {
            let tail = gen.shifted(shifts.get(&gen.ladder).copied().unwrap_or(0));
            image.letters() != [Letter::new(tail, false)]
        });
    }

    /// Verifies that `other` inverts this substitution on all explicit
    /// window generators and a probe of tail generators.
    pub fn verify_inverse(&self, other: &WindowedSubstitution) -> bool {
        let fg = self.compose(other);
        let gf = other.compose(self);
        fg.is_identity() && gf.is_identity()
    }

    /// Bound on how far any generator can travel under this substitution.
    pub fn displacement_bound(&self) -> i64 {
        let mut bound: i64 = self.shifts.values().map(|s| s.abs()).sum();
        for (gen, image) in &self.images {
            for letter in image.letters() {
                bound = bound.max((letter.gen.pos - gen.pos).abs());
            }
        }
        bound
    }

    /// Positions of explicit window generators per ladder, including the
    /// positions their images touch.
    pub fn explicit_hull(&self) -> BTreeMap<i64, (i64, i64)> {
        let mut hull: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
        let mut touch = |gen: GenId| {
            hull.entry(gen.ladder)
                .and_modify(|(lo, hi)| {
                    *lo = (*lo).min(gen.pos);
                    *hi = (*hi).max(gen.pos);
                })
                .or_insert((gen.pos, gen.pos));
        };
        for (gen, image) in &self.images {
            touch(*gen);
            for letter in image.letters() {
                touch(letter.gen);
            }
        }
        hull
    }
}

// ---------------------------------------------------------------------------
// Stallings folding
// ---------------------------------------------------------------------------

/// The folded subgroup graph of a finite set of words: a rooted graph with
/// edges labeled by generators such that no vertex carries two equal-label
/// edges in the same direction.
#[derive(Debug, Clone)]
pub struct FoldedGraph {
    /// per vertex: label → target along a positively-oriented edge
    out_edges: Vec<BTreeMap<GenId, usize>>,
    /// per vertex: label → source of a positively-oriented edge into it
    in_edges: Vec<BTreeMap<GenId, usize>>,
    base: usize,
    vertex_count: usize,
    edge_count: usize,
}

impl FoldedGraph {
    pub fn fold(words: &[FreeWord]) -> FoldedGraph {
        let mut builder = FoldBuilder::new();
        for word in words {
            builder.add_loop(word);
        }
        builder.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// First Betti number of the (connected) graph.
    pub fn rank(&self) -> u64 {
        (self.edge_count + 1 - self.vertex_count) as u64
    }

    /// Membership by path tracing: a reduced word lies in the subgroup iff
    /// it traces a closed path at the base point.
    pub fn contains(&self, word: &FreeWord) -> bool {
        let mut v = self.base;
        for letter in word.letters() {
            let next = if letter.inverse {
                self.in_edges[v].get(&letter.gen)
            } else {
                self.out_edges[v].get(&letter.gen)
            };
            match next {
                Some(&u) => v = u,
                None => return false,
            }
        }
        v == self.base
    }

    /// Canonical description: vertices relabeled by a breadth-first search
    /// from the base with edges visited in label order. Two folded graphs
    /// are isomorphic as rooted labeled graphs iff these agree.
    pub fn canonical_form(&self) -> Vec<(usize, GenId, usize)> {
        let mut order: HashMap<usize, usize> = HashMap::new();
        order.insert(self.base, 0);
        let mut queue = std::collections::VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            let mut neighbors: Vec<(GenId, bool, usize)> = self.out_edges[v]
                .iter()
                .map(|(&g, &u)| (g, false, u))
                .chain(self.in_edges[v].iter().map(|(&g, &u)| (g, true, u)))
                .collect();
            neighbors.sort();
            for (_, _, u) in neighbors {
                if !order.contains_key(&u) {
                    let next = order.len();
                    order.insert(u, next);
                    queue.push_back(u);
                }
            }
        }
        let mut edges: Vec<(usize, GenId, usize)> = Vec::new();
        for (v, targets) in self.out_edges.iter().enumerate() {
            for (&g, &u) in targets {
                if let (Some(&ov), Some(&ou)) = (order.get(&v), order.get(&u)) {
                    edges.push((ov, g, ou));
                }
            }
        }
        edges.sort();
        edges
    }
}

struct FoldBuilder {
    parent: Vec<usize>,
    /// positively oriented edges (source, label, target)
    edges: BTreeSet<(usize, GenId, usize)>,
}

impl FoldBuilder {
    fn new() -> Self {
        FoldBuilder { parent: vec![0], edges: BTreeSet::new() }
    }

    fn fresh(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add_loop(&mut self, word: &FreeWord) {
        let mut v = 0;
        let n = word.letters().len();
        for (i, letter) in word.letters().iter().enumerate() {
            let target = if i + 1 == n { 0 } else { self.fresh() };
            let edge = if letter.inverse {
                (target, letter.gen, v)
            } else {
                (v, letter.gen, target)
            };
            self.edges.insert(edge);
            v = target;
        }
    }

    /// Repeatedly identifies the far endpoints of equal-label edges at a
    /// common vertex; parallel duplicate edges collapse on normalization.
    fn fold(&mut self) {
        loop {
            let normalized: BTreeSet<(usize, GenId, usize)> = self
                .edges
                .iter()
                .copied()
                .collect::<Vec<_>>()
                .into_iter()
                .map(|(f, g, t)| (self.find(f), g, self.find(t)))
                .collect();
            self.edges = normalized;
            let mut merge: Option<(usize, usize)> = None;
            let mut seen_out: HashMap<(usize, GenId), usize> = HashMap::new();
            let mut seen_in: HashMap<(usize, GenId), usize> = HashMap::new();
            for &(f, g, t) in &self.edges {
                if let Some(&t2) = seen_out.get(&(f, g)) {
                    merge = Some((t, t2));
                    break;
                }
                seen_out.insert((f, g), t);
                if let Some(&f2) = seen_in.get(&(t, g)) {
                    merge = Some((f, f2));
                    break;
                }
                seen_in.insert((t, g), f);
            }
            match merge {
                Some((a, b)) => {
                    let (a, b) = (self.find(a), self.find(b));
                    debug_assert_ne!(a, b, "distinct by the seen-maps");
                    // keep the lower representative so the base survives
                    let (keep, drop) = if a < b { (a, b) } else { (b, a) };
                    self.parent[drop] = keep;
                }
                None => break,
            }
        }
    }

    fn finish(mut self) -> FoldedGraph {
        self.fold();
        let mut live: Vec<usize> = self.edges.iter().flat_map(|&(f, _, t)| [f, t]).collect();
        live.push(self.find(0));
        live.sort_unstable();
        live.dedup();
        let index: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out_edges = vec![BTreeMap::new(); live.len()];
        let mut in_edges = vec![BTreeMap::new(); live.len()];
        for &(f, g, t) in &self.edges {
            out_edges[index[&f]].insert(g, index[&t]);
            in_edges[index[&t]].insert(g, index[&f]);
        }
        let base = index[&self.find(0)];
        FoldedGraph {
            edge_count: self.edges.len(),
            vertex_count: live.len(),
            out_edges,
            in_edges,
            base,
        }
    }
}

pub fn subgroup_rank(words: &[FreeWord]) -> u64 {
    FoldedGraph::fold(words).rank()
}

// ---------------------------------------------------------------------------
// Smith normal form and corank
// ---------------------------------------------------------------------------

/// Invariant factors of an integer matrix (the nonzero diagonal of its
/// Smith normal form), computed by pivoting on a minimal entry and clearing
/// its row and column.
pub fn invariant_factors(mut m: Vec<Vec<i128>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = pivot(&m, k) else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            let mut done = true;
            for i in k + 1..rows {
                if m[i][k] != 0 {
                    let q = m[i][k].div_euclid(m[k][k]);
                    for j in k..cols {
                        m[i][j] -= q * m[k][j];
                    }
                    if m[i][k] != 0 {
                        m.swap(k, i);
                        done = false;
                    }
                }
            }
            for j in k + 1..cols {
                if m[k][j] != 0 {
                    let q = m[k][j].div_euclid(m[k][k]);
                    for row in m.iter_mut() {
                        let delta = q * row[k];
                        row[j] -= delta;
                    }
                    if m[k][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        // enforce divisibility towards later entries
        let mut retry = false;
        for i in k + 1..rows {
            for j in k + 1..cols {
                if m[i][j] % m[k][k] != 0 {
                    for jj in k..cols {
                        m[k][jj] += m[i][jj];
                    }
                    retry = true;
                    break;
                }
            }
            if retry {
                break;
            }
        }
        if retry {
            continue;
        }
        factors.push(m[k][k].unsigned_abs() as i64);
        k += 1;
    }
    factors
}

fn pivot(m: &[Vec<i128>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for (i, row) in m.iter().enumerate().skip(k) {
        for (j, &v) in row.iter().enumerate().skip(k) {
            if v != 0 && best.map_or(true, |(_, _, b)| v.abs() < b) {
                best = Some((i, j, v.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Exponent-sum matrix of the words over the ambient generators.
pub fn abelianization_matrix(ambient: &[GenId], words: &[FreeWord]) -> Vec<Vec<i128>> {
    let index: BTreeMap<GenId, usize> = ambient.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    words
        .iter()
        .map(|w| {
            let mut row = vec![0i128; ambient.len()];
            for letter in w.letters() {
                row[index[&letter.gen]] += if letter.inverse { -1 } else { 1 };
            }
            row
        })
        .collect()
}

/// Corank of the subgroup spanned by `words` inside the free group on
/// `ambient`: the generator count minus the folded rank, certified by the
/// Smith-normal-form check that the abelianized inclusion is primitive of
/// full folded rank. The certificate is a necessary condition for the words
/// to span a free factor; when it fails the corank value is meaningless and
/// an error is returned.
pub fn corank_of_free_factor(ambient: &[GenId], words: &[FreeWord]) -> Result<u64, FreeGroupError> {
    let ambient_set: BTreeSet<GenId> = ambient.iter().copied().collect();
    for w in words {
        for letter in w.letters() {
            if !ambient_set.contains(&letter.gen) {
                return Err(FreeGroupError::ForeignGenerator(letter.gen));
            }
        }
    }
    let rank = subgroup_rank(words);
    let factors = invariant_factors(abelianization_matrix(ambient, words));
    let primitive = factors.iter().all(|&f| f == 1) && factors.len() as u64 == rank;
    if !primitive {
        return Err(FreeGroupError::NotCertifiedFreeFactor { factors });
    }
    Ok(ambient.len() as u64 - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> FreeWord {
        FreeWord::parse(text).unwrap()
    }

    #[test]
    fn words_reduce_on_multiplication() {
        let u = w("x1 x2");
        let v = w("X2 x3");
        assert_eq!(u.mul(&v), w("x1 x3"));
        assert!(u.mul(&u.inverse()).is_empty());
    }

    #[test]
    fn ladder_word_parsing() {
        let word = w("a2.5 A1.-3 x0");
        assert_eq!(word.letters().len(), 3);
        assert_eq!(word.letters()[0].gen, GenId::new(2, 5));
        assert!(word.letters()[1].inverse);
        assert_eq!(word.to_string(), "a2.5 A1.-3 x0");
    }

    #[test]
    fn fold_of_free_basis() {
        assert_eq!(subgroup_rank(&[w("x1"), w("x2")]), 2);
    }

    #[test]
    fn fold_detects_nielsen_equivalent_basis() {
        let g = FoldedGraph::fold(&[w("x1 x2"), w("x2")]);
        assert_eq!(g.rank(), 2);
        assert!(g.contains(&w("x1")));
    }

    #[test]
    fn proper_power_membership() {
        let g = FoldedGraph::fold(&[w("x1 x1")]);
        assert_eq!(g.rank(), 1);
        assert!(!g.contains(&w("x1")));
        assert!(g.contains(&w("x1 x1")));
    }

    #[test]
    fn corank_examples() {
        let ambient: Vec<GenId> = (0..4).map(GenId::x).collect();
        assert_eq!(corank_of_free_factor(&ambient, &[w("x0")]).unwrap(), 3);
        assert_eq!(
            corank_of_free_factor(&ambient, &[w("x1"), w("x2"), w("x3")]).unwrap(),
            1
        );
    }

    #[test]
    fn squared_generator_is_not_certified() {
        let err = corank_of_free_factor(&[GenId::x(0)], &[w("x0 x0")]).unwrap_err();
        assert_eq!(err, FreeGroupError::NotCertifiedFreeFactor { factors: vec![2] });
    }

    #[test]
    fn commutator_is_not_certified() {
        let err = corank_of_free_factor(
            &[GenId::x(0), GenId::x(1)],
            &[w("x0 x1 X0 X1")],
        )
        .unwrap_err();
        assert!(matches!(err, FreeGroupError::NotCertifiedFreeFactor { .. }));
    }

    #[test]
    fn foreign_generator_rejected() {
        let err = corank_of_free_factor(&[GenId::x(0)], &[w("x5")]).unwrap_err();
        assert_eq!(err, FreeGroupError::ForeignGenerator(GenId::x(5)));
    }

    #[test]
    fn substitution_identity_laws() {
        let f = WindowedSubstitution::shift(1, 1);
        let id = WindowedSubstitution::identity();
        assert_eq!(id.compose(&f), f);
        assert_eq!(f.compose(&id), f);
    }

    #[test]
    fn shift_translates_ladder_words() {
        let f = WindowedSubstitution::shift(1, 1);
        let word = w("a1.0 a1.1");
        assert_eq!(f.apply(&word), w("a1.1 a1.2"));
    }

    #[test]
    fn nielsen_composition_by_hand() {
        // x0 ↦ x0 x1 composed with itself gives x0 ↦ (x0 x1) x1
        let f = WindowedSubstitution::identity()
            .with_image(GenId::x(0), w("x0 x1"));
        let ff = f.compose(&f);
        assert_eq!(ff.image_of(GenId::x(0)), w("x0 x1 x1"));
        assert_eq!(ff.image_of(GenId::x(1)), w("x1"));
    }

    #[test]
    fn swap_composed_with_itself_is_identity() {
        let s = WindowedSubstitution::swap(GenId::x(1), GenId::x(2));
        assert!(s.compose(&s).is_identity());
        assert!(s.verify_inverse(&s));
    }

    #[test]
    fn shift_inverse_verifies() {
        let f = WindowedSubstitution::shift(2, 3);
        let g = WindowedSubstitution::shift(2, -3);
        assert!(f.verify_inverse(&g));
    }

    #[test]
    fn apply_respects_concatenation() {
        let f = WindowedSubstitution::identity()
            .with_image(GenId::x(0), w("x0 x1"))
            .with_image(GenId::x(1), w("X0"));
        let u = w("x0 x1");
        let v = w("X1 x0");
        assert_eq!(f.apply(&u.mul(&v)), f.apply(&u).mul(&f.apply(&v)));
    }

    #[test]
    fn smith_normal_form_of_diagonalizable_matrix() {
        assert_eq!(invariant_factors(vec![vec![2]]), vec![2]);
        assert_eq!(
            invariant_factors(vec![vec![1, 0], vec![0, 1]]),
            vec![1, 1]
        );
        // 2x2 with determinant 6 and gcd 1
        assert_eq!(
            invariant_factors(vec![vec![2, 4], vec![-2, 1]]),
            vec![1, 10]
        );
        assert_eq!(
            invariant_factors(vec![vec![2, 0], vec![0, 3]]),
            vec![1, 6]
        );
    }
}
