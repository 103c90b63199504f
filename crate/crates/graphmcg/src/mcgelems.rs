//! The generator alphabet of the pure mapping class group.
//!
//! Elements are words in loop swaps, word maps, loop shifts and compactly
//! supported substitutions, evaluated on the grid-of-loops model: one
//! bi-infinite ladder of loops per basis element of the marked end space,
//! so that the primitive shift on ladder `i` crosses exactly the `i`-th
//! basis cut.
//!
//! A word map acts trivially on the loop generators; its effect lives in
//! the ray coordinate and is tracked per interval by the [`RRecord`]. The
//! record follows the semidirect-product multiplication: composing word
//! maps on the same interval concatenates their words, and conjugating a
//! word map by a compactly supported mapping class rewrites its word by the
//! induced substitution.

use crate::freegroup::{FreeWord, GenId, WindowedSubstitution};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Identifier of an interval on a ray, the support datum of a word map.
pub type IntervalId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// Swaps the free factors spanned by two disjoint equal-sized loop
    /// sets, pairing them in sorted order.
    LoopSwap { left: Vec<GenId>, right: Vec<GenId> },
    /// Pushes an interval of a ray over the path spelled by a word.
    WordMap { word: FreeWord, interval: IntervalId },
    /// A power of the primitive loop shift on one ladder, oriented so that
    /// positive exponents move toward the marked end cut by that ladder.
    LoopShift { ladder: i64, exponent: i64 },
    /// A compactly supported substitution (zero tail shifts).
    CompactSubst(WindowedSubstitution),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementError {
    #[error("loop swap sides must be disjoint and of equal size")]
    BadLoopSwap,
    #[error("loop shift exponent must be nonzero")]
    ZeroShift,
    #[error("loop shift ladder {ladder} is outside the graph's basis range 1..={max}")]
    LadderOutOfRange { ladder: i64, max: usize },
    #[error("a compact substitution may not carry tail shifts")]
    ShiftInCompactSubst,
    #[error("nielsen generator indices must satisfy 1 <= i != j <= n")]
    BadNielsenIndex,
    #[error("cannot parse mapping class word near {0:?}")]
    BadWordSyntax(String),
}

impl Generator {
    pub fn loop_swap(left: Vec<GenId>, right: Vec<GenId>) -> Result<Generator, ElementError> {
        let mut l = left;
        let mut r = right;
        l.sort_unstable();
        r.sort_unstable();
        l.dedup();
        r.dedup();
        if l.is_empty() || l.len() != r.len() || l.iter().any(|g| r.contains(g)) {
            return Err(ElementError::BadLoopSwap);
        }
        Ok(Generator::LoopSwap { left: l, right: r })
    }

    pub fn loop_shift(ladder: i64, exponent: i64) -> Result<Generator, ElementError> {
        if exponent == 0 {
            return Err(ElementError::ZeroShift);
        }
        Ok(Generator::LoopShift { ladder, exponent })
    }

    pub fn compact_subst(s: WindowedSubstitution) -> Result<Generator, ElementError> {
        if !s.has_zero_shifts() {
            return Err(ElementError::ShiftInCompactSubst);
        }
        Ok(Generator::CompactSubst(s))
    }

    /// Substitution induced on the loop generators.
    pub fn semantics(&self) -> WindowedSubstitution {
        match self {
            Generator::LoopSwap { left, right } => {
                let mut images = BTreeMap::new();
                for (&a, &b) in left.iter().zip(right.iter()) {
                    images.insert(a, FreeWord::generator(b));
                    images.insert(b, FreeWord::generator(a));
                }
                WindowedSubstitution::from_images(images)
            }
            Generator::WordMap { .. } => WindowedSubstitution::identity(),
            Generator::LoopShift { ladder, exponent } => {
                WindowedSubstitution::shift(*ladder, *exponent)
            }
            Generator::CompactSubst(s) => s.clone(),
        }
    }

    pub fn inverse(&self) -> Option<Generator> {
        match self {
            Generator::LoopSwap { .. } => Some(self.clone()),
            Generator::WordMap { word, interval } => Some(Generator::WordMap {
                word: word.inverse(),
                interval: *interval,
            }),
            Generator::LoopShift { ladder, exponent } => Some(Generator::LoopShift {
                ladder: *ladder,
                exponent: -exponent,
            }),
            Generator::CompactSubst(s) => {
                // only involutions invert syntactically; other compact
                // substitutions need a supplied inverse
                s.compose(s).is_identity().then(|| self.clone())
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::LoopSwap { left, right } => {
                let side = |gens: &[GenId]| {
                    gens.iter().map(|g| format!("{}.{}", g.ladder, g.pos)).collect::<Vec<_>>().join(",")
                };
                write!(f, "swap({{{}}},{{{}}})", side(left), side(right))
            }
            Generator::WordMap { word, interval } => write!(f, "wm({word}, I{interval})"),
            Generator::LoopShift { ladder, exponent } => {
                if *exponent == 1 {
                    write!(f, "shift({ladder})")
                } else {
                    write!(f, "shift({ladder})^{exponent}")
                }
            }
            Generator::CompactSubst(s) => {
                write!(f, "subst(")?;
                for (i, (g, w)) in s.explicit_images().iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{g}->{w}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A word in the generator alphabet; index 0 acts last (leftmost factor of
/// the composition).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MappingClassWord {
    pub letters: Vec<Generator>,
}

impl MappingClassWord {
    pub fn new(letters: Vec<Generator>) -> Self {
        MappingClassWord { letters }
    }

    pub fn identity() -> Self {
        MappingClassWord::default()
    }

    pub fn concat(&self, other: &MappingClassWord) -> MappingClassWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        MappingClassWord { letters }
    }

    /// Validates each letter against a graph whose marked basis family has
    /// `ladder_count` elements.
    pub fn validate(&self, ladder_count: usize) -> Result<(), ElementError> {
        for g in &self.letters {
            if let Generator::LoopShift { ladder, .. } = g {
                if *ladder < 1 || *ladder > ladder_count as i64 {
                    return Err(ElementError::LadderOutOfRange {
                        ladder: *ladder,
                        max: ladder_count,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Accumulated word-map contributions, one reduced word per interval.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RRecord {
    pub words: BTreeMap<IntervalId, FreeWord>,
}

impl RRecord {
    pub fn is_identity(&self) -> bool {
        self.words.values().all(|w| w.is_empty())
    }

    pub fn word_on(&self, interval: IntervalId) -> FreeWord {
        self.words.get(&interval).cloned().unwrap_or_default()
    }
}

/// Result of evaluating a mapping class word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSemantics {
    pub substitution: WindowedSubstitution,
    pub record: RRecord,
}

/// Left-to-right composition: the letter at index 0 is the outermost map.
/// A word map at position `k` contributes the image of its word under the
/// substitution of the letters before it, appended to its interval's
/// record.
pub fn compose_word(word: &MappingClassWord) -> WordSemantics {
    let mut prefix = WindowedSubstitution::identity();
    let mut record = RRecord::default();
    for g in &word.letters {
        match g {
            Generator::WordMap { word: w, interval } => {
                let contribution = prefix.apply(w);
                let entry = record.words.entry(*interval).or_default();
                *entry = entry.mul(&contribution);
            }
            other => {
                prefix = prefix.compose(&other.semantics());
            }
        }
    }
    WordSemantics { substitution: prefix, record }
}

// ---------------------------------------------------------------------------
// Nielsen generators and the involution generating set
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NielsenKind {
    /// `a_i ↦ a_i⁻¹`
    Flip(u32),
    /// `a_i ↔ a_j`
    Transposition(u32, u32),
    /// `a_i ↦ a_j a_i`
    LeftNielsen(u32, u32),
    /// `a_i ↦ a_i a_j`
    RightNielsen(u32, u32),
}

/// The classical generators of the automorphism group of a rank-`n` free
/// group, as compact substitutions on `x_1..x_n`.
pub fn nielsen_generator(kind: NielsenKind, n: u32) -> Result<Generator, ElementError> {
    nielsen_on_gens(kind, n, |i| GenId::x(i as i64))
}

/// Same, over an arbitrary assignment of the `n` abstract generators.
pub fn nielsen_on_gens(
    kind: NielsenKind,
    n: u32,
    gen: impl Fn(u32) -> GenId,
) -> Result<Generator, ElementError> {
    let check = |i: u32| (1..=n).contains(&i);
    let s = match kind {
        NielsenKind::Flip(i) => {
            if !check(i) {
                return Err(ElementError::BadNielsenIndex);
            }
            WindowedSubstitution::identity()
                .with_image(gen(i), FreeWord::generator(gen(i)).inverse())
        }
        NielsenKind::Transposition(i, j) => {
            if !check(i) || !check(j) || i == j {
                return Err(ElementError::BadNielsenIndex);
            }
            WindowedSubstitution::swap(gen(i), gen(j))
        }
        NielsenKind::LeftNielsen(i, j) => {
            if !check(i) || !check(j) || i == j {
                return Err(ElementError::BadNielsenIndex);
            }
            WindowedSubstitution::identity()
                .with_image(gen(i), FreeWord::generator(gen(j)).mul(&FreeWord::generator(gen(i))))
        }
        NielsenKind::RightNielsen(i, j) => {
            if !check(i) || !check(j) || i == j {
                return Err(ElementError::BadNielsenIndex);
            }
            WindowedSubstitution::identity()
                .with_image(gen(i), FreeWord::generator(gen(i)).mul(&FreeWord::generator(gen(j))))
        }
    };
    Generator::compact_subst(s)
}

/// The involution generating set for the automorphism group of a rank-`n`
/// free group: all flips, the adjacent transpositions, and the composite
/// `τ₂λ₁₂`.
pub fn afv_set(n: u32) -> Vec<Generator> {
    assert!(n >= 2, "the involution set needs rank at least two");
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(nielsen_generator(NielsenKind::Flip(i), n).unwrap());
    }
    for i in 1..n {
        out.push(nielsen_generator(NielsenKind::Transposition(i, i + 1), n).unwrap());
    }
    let tau2 = nielsen_generator(NielsenKind::Flip(2), n).unwrap().semantics();
    let lambda12 = nielsen_generator(NielsenKind::LeftNielsen(1, 2), n).unwrap().semantics();
    out.push(Generator::compact_subst(tau2.compose(&lambda12)).unwrap());
    out
}

// ---------------------------------------------------------------------------
// Word syntax for the CLI
// ---------------------------------------------------------------------------

/// Parses words like `shift(1)^3 swap({1.0},{2.0}) wm(x1 x2, I3)`. Also
/// accepts `flip(i)`, `transp(i,j)`, `lnielsen(i,j)`, `rnielsen(i,j)` (over
/// `x_1..x_n` with `n` read off the indices) and `id`. A `^k` suffix
/// repeats a letter (negative powers invert it).
pub fn parse_mcg_word(text: &str) -> Result<MappingClassWord, ElementError> {
    let mut letters = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (letter, tail) = parse_atom(rest)?;
        let (power, tail) = parse_power(tail)?;
        let (letter, power) = if power < 0 {
            let inv = letter
                .inverse()
                .ok_or_else(|| ElementError::BadWordSyntax(rest.to_string()))?;
            (inv, -power)
        } else {
            (letter, power)
        };
        for _ in 0..power {
            letters.push(letter.clone());
        }
        rest = tail.trim_start();
    }
    Ok(MappingClassWord::new(letters))
}

fn parse_power(text: &str) -> Result<(i64, &str), ElementError> {
    let Some(after) = text.strip_prefix('^') else {
        return Ok((1, text));
    };
    let end = after
        .char_indices()
        .find(|(i, c)| !(c.is_ascii_digit() || (*i == 0 && *c == '-')))
        .map(|(i, _)| i)
        .unwrap_or(after.len());
    let power: i64 = after[..end]
        .parse()
        .map_err(|_| ElementError::BadWordSyntax(text.to_string()))?;
    Ok((power, &after[end..]))
}

fn parse_atom(text: &str) -> Result<(Generator, &str), ElementError> {
    let bad = || ElementError::BadWordSyntax(text.chars().take(24).collect());
    if let Some(tail) = text.strip_prefix("id") {
        return Ok((Generator::CompactSubst(WindowedSubstitution::identity()), tail));
    }
    let open = text.find('(').ok_or_else(bad)?;
    let head = &text[..open];
    let close = matching_paren(text, open).ok_or_else(bad)?;
    let args = &text[open + 1..close];
    let tail = &text[close + 1..];
    let letter = match head {
        "shift" => {
            let ladder: i64 = args.trim().parse().map_err(|_| bad())?;
            Generator::loop_shift(ladder, 1)?
        }
        "swap" => {
            let (left, right) = args.split_once("},").ok_or_else(bad)?;
            let parse_side = |s: &str| -> Result<Vec<GenId>, ElementError> {
                let inner = s
                    .trim()
                    .trim_start_matches('{')
                    .trim_end_matches('}')
                    .trim();
                inner
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let (ladder, pos) = t.trim().split_once('.').ok_or_else(bad)?;
                        Ok(GenId::new(
                            ladder.trim().parse().map_err(|_| bad())?,
                            pos.trim().parse().map_err(|_| bad())?,
                        ))
                    })
                    .collect()
            };
            Generator::loop_swap(parse_side(left)?, parse_side(right)?)?
        }
        "wm" => {
            let (word_text, interval_text) = args.rsplit_once(',').ok_or_else(bad)?;
            let interval_text = interval_text.trim();
            let interval: IntervalId = interval_text
                .strip_prefix('I')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            let word = FreeWord::parse(word_text.trim()).map_err(|_| bad())?;
            Generator::WordMap { word, interval }
        }
        "flip" | "transp" | "lnielsen" | "rnielsen" => {
            let indices: Vec<u32> = args
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            let kind = match (head, indices.as_slice()) {
                ("flip", [i]) => NielsenKind::Flip(*i),
                ("transp", [i, j]) => NielsenKind::Transposition(*i, *j),
                ("lnielsen", [i, j]) => NielsenKind::LeftNielsen(*i, *j),
                ("rnielsen", [i, j]) => NielsenKind::RightNielsen(*i, *j),
                _ => return Err(bad()),
            };
            let n = indices.iter().copied().max().unwrap_or(1);
            nielsen_generator(kind, n)?
        }
        _ => return Err(bad()),
    };
    Ok((letter, tail))
}

fn matching_paren(text: &str, open: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in text.char_indices().skip(open) {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
