//! Edge words: cyclic sequences of signed letters describing a polygon whose
//! sides are identified in pairs.
//!
//! A [`Word`] is the raw cyclic sequence. A [`ValidatedWord`] additionally
//! guarantees the closed-surface condition (every symbol occurs exactly twice)
//! and carries the combinatorial invariants: vertex cycles, Euler
//! characteristic and orientability.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;

use thiserror::Error;

/// Opaque side label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether `name` is a legal identifier for the word grammar.
    pub fn is_identifier(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// One polygon side: a symbol with exponent +1 (counterclockwise) or -1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub symbol: Symbol,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: impl Into<Symbol>, inverse: bool) -> Self {
        Letter {
            symbol: symbol.into(),
            inverse,
        }
    }

    pub fn pos(symbol: impl Into<Symbol>) -> Self {
        Letter::new(symbol, false)
    }

    pub fn neg(symbol: impl Into<Symbol>) -> Self {
        Letter::new(symbol, true)
    }

    pub fn exponent(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(&self) -> Letter {
        Letter::new(self.symbol.clone(), !self.inverse)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}'", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

/// Error produced when a string does not match the word grammar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column: column + 1,
            message: message.into(),
        }
    }
}

/// A symbol that violates the closed-surface condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offender {
    pub symbol: Symbol,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("a word needs at least one letter")]
    Empty,
    #[error("{}", describe_offenders(.0))]
    SymbolCount(Vec<Offender>),
}

fn describe_offenders(offenders: &[Offender]) -> String {
    offenders
        .iter()
        .map(|o| {
            let times = match o.count {
                1 => "once".to_string(),
                n => format!("{n} times"),
            };
            format!("symbol {} occurs {}", o.symbol, times)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Cyclic sequence of letters.
///
/// Equality and hashing ignore rotation; [`Word::letters`] exposes the stored
/// order, which is what move positions refer to. `Display` prints the
/// lexicographically least rotation, [`render_word`] the stored order.
#[derive(Clone, Debug)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        Ok(Word { letters })
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(!letters.is_empty());
        Word { letters }
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

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.letters.iter().map(|l| l.symbol.clone()).collect()
    }

    pub fn contains_symbol(&self, symbol: &Symbol) -> bool {
        self.letters.iter().any(|l| &l.symbol == symbol)
    }

    /// Stored positions of `symbol`, ascending.
    pub fn positions(&self, symbol: &Symbol) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| &l.symbol == symbol)
            .map(|(i, _)| i)
            .collect()
    }

    /// Stored order rotated left by `offset`.
    pub fn rotated(&self, offset: usize) -> Word {
        let n = self.letters.len();
        let k = offset % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Reading direction reversed, every exponent flipped.
    pub fn inverse(&self) -> Word {
        Word {
            letters: invert_letters(&self.letters),
        }
    }

    /// Offset of the rotation with the least rendering.
    pub fn least_rotation_offset(&self) -> usize {
        let n = self.letters.len();
        (0..n)
            .min_by_key(|&k| render_letters(self.letters[k..].iter().chain(&self.letters[..k])))
            .unwrap_or(0)
    }

    pub fn canonical_rotation(&self) -> Word {
        self.rotated(self.least_rotation_offset())
    }

    /// Same cyclic word after a bijective renaming of symbols.
    pub fn same_shape(&self, other: &Word) -> bool {
        self.len() == other.len() && shape_key(&self.letters) == shape_key(&other.letters)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let doubled: Vec<&Letter> = other.letters.iter().chain(&other.letters).collect();
        let n = self.len();
        (0..n).any(|k| (0..n).all(|i| &self.letters[i] == doubled[k + i]))
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_rotation().letters.hash(state);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_letters(self.canonical_rotation().letters.iter()))
    }
}

pub(crate) fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(Letter::inverted).collect()
}

fn render_letters<'a>(letters: impl Iterator<Item = &'a Letter>) -> String {
    letters
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders the stored order, space separated, inverses with a trailing `'`.
pub fn render_word(word: &Word) -> String {
    render_letters(word.letters.iter())
}

/// Rotation- and renaming-invariant key: symbols relabelled by first
/// appearance, least over all rotations.
pub(crate) fn shape_key(letters: &[Letter]) -> Vec<(u16, bool)> {
    let n = letters.len();
    let mut best: Option<Vec<(u16, bool)>> = None;
    for k in 0..n {
        let mut names: BTreeMap<&Symbol, u16> = BTreeMap::new();
        let key: Vec<(u16, bool)> = (0..n)
            .map(|i| {
                let l = &letters[(k + i) % n];
                let next = names.len() as u16;
                let id = *names.entry(&l.symbol).or_insert(next);
                (id, l.inverse)
            })
            .collect();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or_default()
}

/// Parses a word.
///
/// Letters are identifiers separated by whitespace, each optionally followed
/// by `'` or `^-1`. A word written without any whitespace is read in compact
/// form, where a symbol is one ASCII letter followed by optional digits or
/// underscores, so `aba'b'` and `a1b1a1'b1'` are accepted.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let trimmed_start = chars.iter().position(|c| !c.is_whitespace());
    let Some(start) = trimmed_start else {
        return Err(ParseError::at(0, "empty word"));
    };
    let end = chars.iter().rposition(|c| !c.is_whitespace()).unwrap_or(start) + 1;
    let compact = !chars[start..end].iter().any(|c| c.is_whitespace());

    let mut letters = Vec::new();
    let mut i = start;
    while i < end {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(ParseError::at(i, format!("expected a symbol, found '{c}'")));
        }
        let sym_start = i;
        i += 1;
        while i < end {
            let c = chars[i];
            let accepted = if compact {
                c.is_ascii_digit() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !accepted {
                break;
            }
            i += 1;
        }
        let name: String = chars[sym_start..i].iter().collect();
        let mut inverse = false;
        if i < end && chars[i] == '\'' {
            inverse = true;
            i += 1;
        } else if i < end && chars[i] == '^' {
            let suffix: String = chars[i..end.min(i + 3)].iter().collect();
            if suffix != "^-1" {
                return Err(ParseError::at(i, "expected '^-1'"));
            }
            inverse = true;
            i += 3;
        }
        if i < end && !compact && !chars[i].is_whitespace() {
            return Err(ParseError::at(
                i,
                format!("unexpected '{}' after letter {name}", chars[i]),
            ));
        }
        letters.push(Letter::new(Symbol::new(name), inverse));
    }
    Ok(Word { letters })
}

/// Word satisfying the closed-surface condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValidatedWord(Word);

impl Deref for ValidatedWord {
    type Target = Word;

    fn deref(&self) -> &Word {
        &self.0
    }
}

impl fmt::Display for ValidatedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Checks that every symbol occurs exactly twice.
pub fn validate(word: Word) -> Result<ValidatedWord, WordError> {
    let offenders: Vec<Offender> = symbol_counts(&word.letters)
        .into_iter()
        .filter(|(_, count)| *count != 2)
        .map(|(symbol, count)| Offender { symbol, count })
        .collect();
    if offenders.is_empty() {
        Ok(ValidatedWord(word))
    } else {
        Err(WordError::SymbolCount(offenders))
    }
}

/// Parse then validate.
pub fn parse_valid(text: &str) -> Result<ValidatedWord, WordError> {
    validate(parse_word(text)?)
}

fn symbol_counts(letters: &[Letter]) -> Vec<(Symbol, usize)> {
    // first-appearance order, for readable diagnostics
    let mut order: Vec<Symbol> = Vec::new();
    let mut counts: BTreeMap<Symbol, usize> = BTreeMap::new();
    for l in letters {
        let c = counts.entry(l.symbol.clone()).or_insert(0);
        if *c == 0 {
            order.push(l.symbol.clone());
        }
        *c += 1;
    }
    order
        .into_iter()
        .map(|s| {
            let c = counts[&s];
            (s, c)
        })
        .collect()
}

/// Union-find over polygon corners.
#[derive(Debug)]
pub(crate) struct Corners {
    parent: Vec<usize>,
}

impl Corners {
    fn new(n: usize) -> Self {
        Corners {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn class_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

/// Identifies corners of one or more polygons sharing a symbol namespace.
/// Corner `k` of a polygon is the start of its side `k`; global corner ids are
/// assigned polygon after polygon.
fn identify_corners(polygons: &[&[Letter]]) -> Corners {
    let total: usize = polygons.iter().map(|p| p.len()).sum();
    let mut corners = Corners::new(total);
    // symbol -> (tail corner, head corner) of the first occurrence
    let mut first: BTreeMap<&Symbol, (usize, usize)> = BTreeMap::new();
    let mut base = 0;
    for poly in polygons {
        let n = poly.len();
        for (k, l) in poly.iter().enumerate() {
            let (start, end) = (base + k, base + (k + 1) % n);
            let (tail, head) = if l.inverse { (end, start) } else { (start, end) };
            match first.get(&l.symbol) {
                Some(&(t, h)) => {
                    corners.union(t, tail);
                    corners.union(h, head);
                }
                None => {
                    first.insert(&l.symbol, (tail, head));
                }
            }
        }
        base += n;
    }
    corners
}

/// Vertex class label of every corner, in stored order.
pub(crate) fn corner_labels(letters: &[Letter]) -> Vec<usize> {
    identify_corners(&[letters]).labels()
}

/// Classification of a closed surface up to homeomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceType {
    Sphere,
    Orientable { genus: u32 },
    NonOrientable { crosscaps: u32 },
}

impl SurfaceType {
    pub fn euler(self) -> i64 {
        match self {
            SurfaceType::Sphere => 2,
            SurfaceType::Orientable { genus } => 2 - 2 * genus as i64,
            SurfaceType::NonOrientable { crosscaps } => 2 - crosscaps as i64,
        }
    }

    pub fn is_orientable(self) -> bool {
        !matches!(self, SurfaceType::NonOrientable { .. })
    }

    pub fn genus(self) -> u32 {
        match self {
            SurfaceType::Orientable { genus } => genus,
            _ => 0,
        }
    }

    pub fn crosscaps(self) -> u32 {
        match self {
            SurfaceType::NonOrientable { crosscaps } => crosscaps,
            _ => 0,
        }
    }

    /// `Orientable(0)` and `NonOrientable(0)` collapse to the sphere.
    pub fn orientable(genus: u32) -> Self {
        if genus == 0 {
            SurfaceType::Sphere
        } else {
            SurfaceType::Orientable { genus }
        }
    }

    pub fn non_orientable(crosscaps: u32) -> Self {
        if crosscaps == 0 {
            SurfaceType::Sphere
        } else {
            SurfaceType::NonOrientable { crosscaps }
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SurfaceType::Sphere => write!(f, "sphere"),
            SurfaceType::Orientable { genus } => {
                write!(f, "orientable genus {genus}")?;
                if genus == 1 {
                    write!(f, " (torus)")?;
                }
                Ok(())
            }
            SurfaceType::NonOrientable { crosscaps } => {
                let noun = if crosscaps == 1 { "cross-cap" } else { "cross-caps" };
                write!(f, "non-orientable, {crosscaps} {noun}")?;
                match crosscaps {
                    1 => write!(f, " (projective plane)"),
                    2 => write!(f, " (Klein bottle)"),
                    _ => Ok(()),
                }
            }
        }
    }
}

/// Raised when the combinatorial invariants contradict each other.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("internal invariant violation: {0}")]
pub struct InvariantViolation(pub String);

impl ValidatedWord {
    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub(crate) fn new_unchecked(word: Word) -> Self {
        debug_assert!(validate(word.clone()).is_ok());
        ValidatedWord(word)
    }

    /// Number of distinct symbols, i.e. edges of the polygon complex.
    pub fn edge_count(&self) -> usize {
        self.len() / 2
    }

    /// Equivalence classes of polygon corners under the side identifications.
    pub fn vertex_cycle_count(&self) -> usize {
        identify_corners(&[self.letters()]).class_count()
    }

    /// V - E + F with F = 1.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_cycle_count() as i64 - self.edge_count() as i64 + 1
    }

    /// True iff no symbol occurs twice with the same exponent.
    pub fn is_orientable(&self) -> bool {
        let mut seen: BTreeMap<&Symbol, bool> = BTreeMap::new();
        for l in self.letters() {
            if let Some(&prev) = seen.get(&l.symbol) {
                if prev == l.inverse {
                    return false;
                }
            } else {
                seen.insert(&l.symbol, l.inverse);
            }
        }
        true
    }

    /// Surface type from χ and orientability alone.
    pub fn classify_by_invariants(&self) -> Result<SurfaceType, InvariantViolation> {
        let chi = self.euler_characteristic();
        if chi > 2 {
            return Err(InvariantViolation(format!("euler characteristic {chi} exceeds 2")));
        }
        if chi == 2 {
            return Ok(SurfaceType::Sphere);
        }
        let deficit = (2 - chi) as u32;
        if self.is_orientable() {
            if deficit % 2 != 0 {
                return Err(InvariantViolation(format!(
                    "orientable word {} has odd euler characteristic {chi}",
                    render_word(self)
                )));
            }
            Ok(SurfaceType::Orientable { genus: deficit / 2 })
        } else {
            Ok(SurfaceType::NonOrientable { crosscaps: deficit })
        }
    }
}

/// Canonical polygon word for a surface type: `a a'` for the sphere,
/// `a1 b1 a1' b1' ... ag bg ag' bg'` for genus g, `a1 a1 ... ak ak` for k
/// cross-caps.
pub fn canonical_word(t: SurfaceType) -> ValidatedWord {
    let letters = match t {
        SurfaceType::Sphere => vec![Letter::pos("a"), Letter::neg("a")],
        SurfaceType::Orientable { genus } => (1..=genus)
            .flat_map(|i| {
                let a = Symbol::new(format!("a{i}"));
                let b = Symbol::new(format!("b{i}"));
                [
                    Letter::pos(a.clone()),
                    Letter::pos(b.clone()),
                    Letter::neg(a),
                    Letter::neg(b),
                ]
            })
            .collect(),
        SurfaceType::NonOrientable { crosscaps } => (1..=crosscaps)
            .flat_map(|i| {
                let a = Symbol::new(format!("a{i}"));
                [Letter::pos(a.clone()), Letter::pos(a)]
            })
            .collect(),
    };
    ValidatedWord(Word::from_letters_unchecked(letters))
}

/// Deterministic supply of unused symbols.
///
/// Candidates are `a`..`z` followed by `x1`, `x2`, ...; the counter only moves
/// forward, so a name is never minted twice by the same generator.
#[derive(Clone, Debug, Default)]
pub struct FreshSymbols {
    counter: usize,
}

impl FreshSymbols {
    pub fn new() -> Self {
        FreshSymbols::default()
    }

    fn candidate(index: usize) -> String {
        if index < 26 {
            ((b'a' + index as u8) as char).to_string()
        } else {
            format!("x{}", index - 25)
        }
    }

    /// Next candidate not occurring in `avoid`.
    pub fn mint(&mut self, avoid: &Word) -> Symbol {
        self.mint_avoiding(|s| avoid.contains_symbol(s))
    }

    pub fn mint_avoiding(&mut self, mut used: impl FnMut(&Symbol) -> bool) -> Symbol {
        loop {
            let s = Symbol::new(Self::candidate(self.counter));
            self.counter += 1;
            if !used(&s) {
                return s;
            }
        }
    }
}

/// Polygons sharing one symbol namespace, e.g. the faces of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonSet {
    polygons: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonSetError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("polygon set is empty")]
    Empty,
    #[error("{}", describe_offenders(.0))]
    SymbolCount(Vec<Offender>),
    #[error("polygon set is disconnected: polygon {0} shares no side with polygon 1")]
    Disconnected(usize),
}

impl PolygonSet {
    pub fn new(polygons: Vec<Word>) -> Result<Self, PolygonSetError> {
        if polygons.is_empty() {
            return Err(PolygonSetError::Empty);
        }
        let all: Vec<Letter> = polygons.iter().flat_map(|p| p.letters().to_vec()).collect();
        let offenders: Vec<Offender> = symbol_counts(&all)
            .into_iter()
            .filter(|(_, c)| *c != 2)
            .map(|(symbol, count)| Offender { symbol, count })
            .collect();
        if !offenders.is_empty() {
            return Err(PolygonSetError::SymbolCount(offenders));
        }
        let set = PolygonSet { polygons };
        if let Some(lonely) = set.first_unreachable() {
            return Err(PolygonSetError::Disconnected(lonely + 1));
        }
        Ok(set)
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, PolygonSetError> {
        let mut polygons = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let word = parse_word(line).map_err(|source| PolygonSetError::Parse {
                line: idx + 1,
                source,
            })?;
            polygons.push(word);
        }
        PolygonSet::new(polygons)
    }

    pub fn polygons(&self) -> &[Word] {
        &self.polygons
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.polygons.len();
        let symbol_sets: Vec<BTreeSet<Symbol>> = self.polygons.iter().map(|p| p.symbols()).collect();
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !reached[j] && !symbol_sets[i].is_disjoint(&symbol_sets[j]) {
                    reached[j] = true;
                    stack.push(j);
                }
            }
        }
        reached.iter().position(|r| !r)
    }

    /// V - E + F of the polygon complex.
    pub fn euler_characteristic(&self) -> i64 {
        let slices: Vec<&[Letter]> = self.polygons.iter().map(|p| p.letters()).collect();
        let v = identify_corners(&slices).class_count() as i64;
        let e = slices.iter().map(|p| p.len()).sum::<usize>() as i64 / 2;
        v - e + self.polygons.len() as i64
    }

    pub fn is_orientable(&self) -> bool {
        // A complex is orientable iff the polygons can be reoriented so every
        // shared side is read once each way; solve the parity constraints.
        let n = self.polygons.len();
        let mut occurrences: BTreeMap<&Symbol, Vec<(usize, bool)>> = BTreeMap::new();
        for (i, p) in self.polygons.iter().enumerate() {
            for l in p.letters() {
                occurrences.entry(&l.symbol).or_default().push((i, l.inverse));
            }
        }
        // flip[i] relative to polygon component root, via BFS with parity
        let mut flip: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if flip[root].is_some() {
                continue;
            }
            flip[root] = Some(false);
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                for occ in occurrences.values() {
                    let (a, b) = (occ[0], occ[1]);
                    for (me, other) in [(a, b), (b, a)] {
                        if me.0 != i {
                            continue;
                        }
                        // need (me.inv ^ flip[me]) != (other.inv ^ flip[other])
                        let want = !(me.1 ^ flip[i].unwrap_or(false)) ^ other.1;
                        match flip[other.0] {
                            None => {
                                flip[other.0] = Some(want);
                                stack.push(other.0);
                            }
                            Some(f) if f != want => return false,
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        true
    }
}

/// Merges the polygons of a connected set into a single polygon word.
///
/// Repeatedly glues the first polygon to the earliest other polygon sharing a
/// side with it, along the first such side in reading order. Symbols occurring
/// twice inside one polygon are left alone.
pub fn glue_polygons(set: &PolygonSet) -> Result<ValidatedWord, PolygonSetError> {
    let mut polys: Vec<Vec<Letter>> = set.polygons.iter().map(|p| p.letters().to_vec()).collect();
    while polys.len() > 1 {
        let owner: BTreeMap<Symbol, usize> = polys
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(i, p)| p.iter().map(move |l| (l.symbol.clone(), i)))
            .collect();
        let shared = polys[0]
            .iter()
            .find_map(|l| owner.get(&l.symbol).map(|&j| (l.symbol.clone(), j)));
        let Some((symbol, j)) = shared else {
            return Err(PolygonSetError::Disconnected(2));
        };
        let other = polys.remove(j);
        polys[0] = glue_pair(&polys[0], &other, &symbol);
    }
    let word = Word::new(polys.pop().unwrap_or_default()).map_err(|_| PolygonSetError::Empty)?;
    validate(word).map_err(|e| match e {
        WordError::SymbolCount(o) => PolygonSetError::SymbolCount(o),
        _ => PolygonSetError::Empty,
    })
}

/// Concatenates two polygons along `symbol`, which occurs once in each.
/// Two monogons glue to a sphere, returned as `s s'`.
fn glue_pair(first: &[Letter], second: &[Letter], symbol: &Symbol) -> Vec<Letter> {
    let merged = paste_letters(first, second, symbol);
    if merged.is_empty() {
        vec![Letter::pos(symbol.clone()), Letter::neg(symbol.clone())]
    } else {
        merged
    }
}

/// Paste of two letter sequences along `symbol`, which must occur exactly
/// once in each. Same-exponent occurrences glue with the second piece
/// reflected.
pub(crate) fn paste_letters(first: &[Letter], second: &[Letter], symbol: &Symbol) -> Vec<Letter> {
    let p = first.iter().position(|l| &l.symbol == symbol).expect("symbol in first piece");
    let q = second.iter().position(|l| &l.symbol == symbol).expect("symbol in second piece");
    let mut out: Vec<Letter> = first[p + 1..].iter().chain(&first[..p]).cloned().collect();
    let rest: Vec<Letter> = second[q + 1..].iter().chain(&second[..q]).cloned().collect();
    if first[p].inverse != second[q].inverse {
        out.extend(rest);
    } else {
        out.extend(invert_letters(&rest));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> ValidatedWord {
        parse_valid(text).unwrap()
    }

    #[test]
    fn parses_spaced_and_compact_forms() {
        let torus = parse_word("a b a' b'").unwrap();
        assert_eq!(render_word(&torus), "a b a' b'");
        assert_eq!(parse_word("aba'b'").unwrap().letters(), torus.letters());
        assert_eq!(parse_word("a b a^-1 b^-1").unwrap().letters(), torus.letters());
        let indexed = parse_word("a1b1a1'b1'").unwrap();
        assert_eq!(render_word(&indexed), "a1 b1 a1' b1'");
        assert_eq!(render_word(&parse_word("  x_1 x_1  ").unwrap()), "x_1 x_1");
    }

    #[test]
    fn parse_errors_report_columns() {
        let err = parse_word("a b 3").unwrap_err();
        assert_eq!(err.column, 5);
        let err = parse_word("a b^-2").unwrap_err();
        assert_eq!(err.column, 4);
        assert!(parse_word("   ").is_err());
        assert!(parse_word("a b* c").is_err());
    }

    #[test]
    fn validation_reports_offenders() {
        let err = validate(parse_word("a b c").unwrap()).unwrap_err();
        assert_eq!(
            err.to_string(),
            "symbol a occurs once; symbol b occurs once; symbol c occurs once"
        );
        assert!(validate(parse_word("aabb").unwrap()).is_ok());
        let err = validate(parse_word("a b a'").unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "symbol b occurs once");
        let err = validate(parse_word("aaaa").unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "symbol a occurs 4 times");
    }

    #[test]
    fn cyclic_equality_and_display() {
        assert_eq!(*w("abab"), *w("baba"));
        assert_ne!(*w("abab"), *w("aabb"));
        assert_eq!(w("c a c a'").to_string(), "a c a' c");
        assert!(w("x y x' y").same_shape(&w("a c a' c")));
        assert!(!w("x y x y").same_shape(&w("a c a' c")));
    }

    #[test]
    fn vertex_cycles() {
        assert_eq!(w("a b a' b'").vertex_cycle_count(), 1);
        assert_eq!(w("a a'").vertex_cycle_count(), 2);
        assert_eq!(w("abab").vertex_cycle_count(), 2);
        assert_eq!(w("a a").vertex_cycle_count(), 1);
    }

    #[test]
    fn euler_and_orientability() {
        assert_eq!(w("a a'").euler_characteristic(), 2);
        assert_eq!(w("a b a' b'").euler_characteristic(), 0);
        assert_eq!(w("aabb").euler_characteristic(), 0);
        assert!(w("a b a' b'").is_orientable());
        assert!(!w("aa").is_orientable());
        assert!(w("a a'").is_orientable());
    }

    #[test]
    fn classification_fast_path() {
        assert_eq!(w("a a'").classify_by_invariants().unwrap(), SurfaceType::Sphere);
        assert_eq!(
            w("a b a' b'").classify_by_invariants().unwrap(),
            SurfaceType::Orientable { genus: 1 }
        );
        assert_eq!(
            w("aabb").classify_by_invariants().unwrap(),
            SurfaceType::NonOrientable { crosscaps: 2 }
        );
    }

    #[test]
    fn canonical_words() {
        assert_eq!(
            render_word(&canonical_word(SurfaceType::Orientable { genus: 2 })),
            "a1 b1 a1' b1' a2 b2 a2' b2'"
        );
        let rp2 = canonical_word(SurfaceType::NonOrientable { crosscaps: 1 });
        assert_eq!(render_word(&rp2), "a1 a1");
        assert!(rp2.same_shape(&w("a a")));
        assert_eq!(render_word(&canonical_word(SurfaceType::Sphere)), "a a'");
        for g in 1..=10 {
            let t = SurfaceType::Orientable { genus: g };
            assert_eq!(canonical_word(t).euler_characteristic(), t.euler());
            assert!(canonical_word(t).is_orientable());
            let t = SurfaceType::NonOrientable { crosscaps: g };
            assert_eq!(canonical_word(t).euler_characteristic(), t.euler());
            assert!(!canonical_word(t).is_orientable());
        }
    }

    #[test]
    fn glue_two_triangles() {
        let set = PolygonSet::parse("a b c\nc' b' a'\n").unwrap();
        assert_eq!(set.euler_characteristic(), 2);
        let merged = glue_polygons(&set).unwrap();
        assert_eq!(merged.len(), 4);
        assert_eq!(merged.classify_by_invariants().unwrap(), SurfaceType::Sphere);

        // same sides in the same cyclic order on both triangles: one vertex, a torus
        let set = PolygonSet::parse("a b c\na' b' c'\n").unwrap();
        assert_eq!(set.euler_characteristic(), 0);
        assert!(set.is_orientable());
        let merged = glue_polygons(&set).unwrap();
        assert_eq!(merged.euler_characteristic(), 0);
        assert_eq!(
            merged.classify_by_invariants().unwrap(),
            SurfaceType::Orientable { genus: 1 }
        );

        let set = PolygonSet::parse("# two bigons\na b\n\na' b'").unwrap();
        let merged = glue_polygons(&set).unwrap();
        assert_eq!(merged.classify_by_invariants().unwrap(), SurfaceType::Sphere);

        let set = PolygonSet::parse("a b a' b'").unwrap();
        assert_eq!(render_word(&glue_polygons(&set).unwrap()), "a b a' b'");
    }

    #[test]
    fn glue_monogons_and_errors() {
        let set = PolygonSet::parse("a\na").unwrap();
        assert_eq!(set.euler_characteristic(), 2);
        let merged = glue_polygons(&set).unwrap();
        assert_eq!(merged.classify_by_invariants().unwrap(), SurfaceType::Sphere);

        assert!(matches!(
            PolygonSet::parse("a a'\nb b'"),
            Err(PolygonSetError::Disconnected(2))
        ));
        assert!(matches!(
            PolygonSet::parse("a b\na"),
            Err(PolygonSetError::SymbolCount(_))
        ));
        // a symbol twice in one polygon of a multi-polygon set is fine
        let set = PolygonSet::parse("a a b\nb' c c").unwrap();
        let merged = glue_polygons(&set).unwrap();
        assert_eq!(merged.euler_characteristic(), set.euler_characteristic());
        assert_eq!(merged.is_orientable(), set.is_orientable());
    }

    #[test]
    fn fresh_symbols_skip_used_names() {
        let word = w("a b a' b'");
        let mut fresh = FreshSymbols::new();
        assert_eq!(fresh.mint(&word).as_str(), "c");
        assert_eq!(fresh.mint(&word).as_str(), "d");
        let mut fresh = FreshSymbols { counter: 25 };
        assert_eq!(fresh.mint(&word).as_str(), "z");
        assert_eq!(fresh.mint(&word).as_str(), "x1");
    }
}
