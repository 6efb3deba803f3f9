//! Elementary cut-and-paste moves, replayable move traces and the
//! deterministic normalizer.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::word::{
    canonical_word, corner_labels, invert_letters, render_word, FreshSymbols,
    InvariantViolation, Letter, SurfaceType, Symbol, ValidatedWord, Word,
};

/// One invertible rewriting step on a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Cyclic shift: the letter at `offset` becomes the first.
    Rotate(usize),
    /// Reverse the reading direction, flipping every exponent.
    Reflect,
    Rename { from: Symbol, to: Symbol },
    /// Negate both exponents of one symbol.
    FlipEdge(Symbol),
    /// Delete the letters at `position` and `position + 1` (cyclically),
    /// which must read `x x'` or `x' x`.
    Cancel(usize),
    /// Insert `s s'` so that `s` lands at `position`.
    Insert(usize, Symbol),
    /// Cut along a diagonal `fresh` between corners `i` and `j`, then glue the
    /// two pieces back along `paste`.
    CutPaste {
        i: usize,
        j: usize,
        fresh: Symbol,
        paste: Symbol,
    },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Rotate(k) => write!(f, "rotate {k}"),
            Move::Reflect => write!(f, "reflect"),
            Move::Rename { from, to } => write!(f, "rename {from} {to}"),
            Move::FlipEdge(s) => write!(f, "flip {s}"),
            Move::Cancel(p) => write!(f, "cancel {p}"),
            Move::Insert(p, s) => write!(f, "insert {p} {s}"),
            Move::CutPaste { i, j, fresh, paste } => write!(f, "cutpaste {i} {j} {fresh} {paste}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct MoveParseError(String);

impl FromStr for Move {
    type Err = MoveParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((&head, args)) = tokens.split_first() else {
            return Err(MoveParseError("empty move".into()));
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(MoveParseError(format!(
                    "'{head}' takes {n} argument(s), got {}",
                    args.len()
                )))
            }
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| MoveParseError(format!("expected a position, found '{s}'")))
        };
        let sym = |s: &str| {
            if Symbol::is_identifier(s) {
                Ok(Symbol::new(s))
            } else {
                Err(MoveParseError(format!("expected a symbol, found '{s}'")))
            }
        };
        match head {
            "rotate" => {
                arity(1)?;
                Ok(Move::Rotate(num(args[0])?))
            }
            "reflect" => {
                arity(0)?;
                Ok(Move::Reflect)
            }
            "rename" => {
                arity(2)?;
                Ok(Move::Rename {
                    from: sym(args[0])?,
                    to: sym(args[1])?,
                })
            }
            "flip" => {
                arity(1)?;
                Ok(Move::FlipEdge(sym(args[0])?))
            }
            "cancel" => {
                arity(1)?;
                Ok(Move::Cancel(num(args[0])?))
            }
            "insert" => {
                arity(2)?;
                Ok(Move::Insert(num(args[0])?, sym(args[1])?))
            }
            "cutpaste" => {
                arity(4)?;
                Ok(Move::CutPaste {
                    i: num(args[0])?,
                    j: num(args[1])?,
                    fresh: sym(args[2])?,
                    paste: sym(args[3])?,
                })
            }
            other => Err(MoveParseError(format!("unknown move '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("position {position} out of range for a word of length {len}")]
    Position { position: usize, len: usize },
    #[error("symbol {0} does not occur in the word")]
    UnknownSymbol(Symbol),
    #[error("symbol {0} is already in use")]
    SymbolInUse(Symbol),
    #[error("letters at {0} and its successor are not an inverse pair")]
    NotCancellable(usize),
    #[error("cannot cancel the last pair of a two-letter word")]
    TerminalPair,
    #[error("cut {i}..{j} of a word of length {len} leaves an empty piece")]
    DegenerateCut { i: usize, j: usize, len: usize },
    #[error("paste symbol {symbol} must occur once in each piece (found {first} and {second})")]
    PasteSymbol {
        symbol: Symbol,
        first: usize,
        second: usize,
    },
    #[error("pasting two monogons leaves no sides")]
    EmptyPaste,
}

/// Cuts a polygon along a new diagonal `fresh` running from corner `i` to
/// corner `j`: `X = w[i..j]`, `Y` the rest, giving `X fresh` and `fresh' Y`.
pub fn cut(
    word: &ValidatedWord,
    i: usize,
    j: usize,
    fresh: &Symbol,
) -> Result<(Word, Word), MoveError> {
    let n = word.len();
    if j > n {
        return Err(MoveError::Position { position: j, len: n });
    }
    if n <= 2 || i >= j || j - i >= n {
        return Err(MoveError::DegenerateCut { i, j, len: n });
    }
    if word.contains_symbol(fresh) {
        return Err(MoveError::SymbolInUse(fresh.clone()));
    }
    let letters = word.letters();
    let mut first = letters[i..j].to_vec();
    first.push(Letter::pos(fresh.clone()));
    let mut second = vec![Letter::neg(fresh.clone())];
    second.extend_from_slice(&letters[j..]);
    second.extend_from_slice(&letters[..i]);
    Ok((
        Word::from_letters_unchecked(first),
        Word::from_letters_unchecked(second),
    ))
}

/// Glues two polygons along `s`, deleting both occurrences. If `s` carries
/// the same exponent in both pieces the second piece is reflected first.
pub fn paste(first: &Word, second: &Word, s: &Symbol) -> Result<Word, MoveError> {
    let (a, b) = (first.positions(s).len(), second.positions(s).len());
    if a != 1 || b != 1 {
        return Err(MoveError::PasteSymbol {
            symbol: s.clone(),
            first: a,
            second: b,
        });
    }
    let merged = crate::word::paste_letters(first.letters(), second.letters(), s);
    Word::new(merged).map_err(|_| MoveError::EmptyPaste)
}

fn require_symbol(word: &Word, s: &Symbol) -> Result<(), MoveError> {
    if word.contains_symbol(s) {
        Ok(())
    } else {
        Err(MoveError::UnknownSymbol(s.clone()))
    }
}

fn require_fresh(word: &Word, s: &Symbol) -> Result<(), MoveError> {
    if word.contains_symbol(s) {
        Err(MoveError::SymbolInUse(s.clone()))
    } else {
        Ok(())
    }
}

/// Applies one move. The result is always a valid word with the same Euler
/// characteristic and orientability.
pub fn apply_move(word: &ValidatedWord, m: &Move) -> Result<ValidatedWord, MoveError> {
    let n = word.len();
    let letters = word.letters();
    let out: Vec<Letter> = match m {
        Move::Rotate(k) => {
            if *k >= n {
                return Err(MoveError::Position { position: *k, len: n });
            }
            word.rotated(*k).letters().to_vec()
        }
        Move::Reflect => invert_letters(letters),
        Move::Rename { from, to } => {
            require_symbol(word, from)?;
            require_fresh(word, to)?;
            letters
                .iter()
                .map(|l| {
                    if &l.symbol == from {
                        Letter::new(to.clone(), l.inverse)
                    } else {
                        l.clone()
                    }
                })
                .collect()
        }
        Move::FlipEdge(s) => {
            require_symbol(word, s)?;
            letters
                .iter()
                .map(|l| if &l.symbol == s { l.inverted() } else { l.clone() })
                .collect()
        }
        Move::Cancel(p) => {
            if *p >= n {
                return Err(MoveError::Position { position: *p, len: n });
            }
            if n <= 2 {
                return Err(MoveError::TerminalPair);
            }
            let q = (p + 1) % n;
            if letters[*p].symbol != letters[q].symbol || letters[*p].inverse == letters[q].inverse {
                return Err(MoveError::NotCancellable(*p));
            }
            letters
                .iter()
                .enumerate()
                .filter(|(k, _)| k != p && *k != q)
                .map(|(_, l)| l.clone())
                .collect()
        }
        Move::Insert(p, s) => {
            if *p > n {
                return Err(MoveError::Position { position: *p, len: n });
            }
            require_fresh(word, s)?;
            let mut out = letters.to_vec();
            out.splice(*p..*p, [Letter::pos(s.clone()), Letter::neg(s.clone())]);
            out
        }
        Move::CutPaste { i, j, fresh, paste: s } => {
            let (a, b) = cut(word, *i, *j, fresh)?;
            paste(&a, &b, s)?.letters().to_vec()
        }
    };
    // every move keeps each symbol at exactly two occurrences
    Ok(ValidatedWord::new_unchecked(Word::from_letters_unchecked(out)))
}

/// A classification certificate: moves that rewrite `initial` step by step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTrace {
    pub initial: ValidatedWord,
    pub steps: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} ({mv}): {source}")]
pub struct ReplayError {
    /// 1-based index of the failing move.
    pub step: usize,
    pub mv: Move,
    pub source: MoveError,
}

impl MoveTrace {
    pub fn new(initial: ValidatedWord) -> Self {
        MoveTrace {
            initial,
            steps: Vec::new(),
        }
    }

    /// Every word along the trace, starting with `initial`.
    pub fn intermediates(&self) -> Result<Vec<ValidatedWord>, ReplayError> {
        let mut words = vec![self.initial.clone()];
        for (idx, mv) in self.steps.iter().enumerate() {
            let next = apply_move(words.last().expect("non-empty"), mv).map_err(|source| {
                ReplayError {
                    step: idx + 1,
                    mv: mv.clone(),
                    source,
                }
            })?;
            words.push(next);
        }
        Ok(words)
    }

    /// One move per line.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|m| format!("{m}\n")).collect()
    }
}

/// Applies every step of `trace` in order and returns the final word.
pub fn replay(trace: &MoveTrace) -> Result<ValidatedWord, ReplayError> {
    let mut word = trace.initial.clone();
    for (idx, mv) in trace.steps.iter().enumerate() {
        word = apply_move(&word, mv).map_err(|source| ReplayError {
            step: idx + 1,
            mv: mv.clone(),
            source,
        })?;
    }
    Ok(word)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct TraceParseError {
    pub line: usize,
    pub source: MoveParseError,
}

/// Parses trace text: one move per line, `#` comments and blank lines
/// ignored.
pub fn parse_trace(text: &str) -> Result<Vec<Move>, TraceParseError> {
    let mut moves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mv = line.parse().map_err(|source| TraceParseError {
            line: idx + 1,
            source,
        })?;
        moves.push(mv);
    }
    Ok(moves)
}

/// Output of [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub surface_type: SurfaceType,
    pub trace: MoveTrace,
}

impl Normalization {
    pub fn final_word(&self) -> ValidatedWord {
        canonical_word(self.surface_type)
    }
}

/// Rewrites `word` to its canonical form, recording every move.
///
/// Phases: cancel inverse pairs, reduce to one vertex cycle, gather
/// same-exponent pairs into cross-caps, gather linked pairs into commutator
/// blocks, trade each handle next to a cross-cap for two more cross-caps, and
/// finally rotate, flip and rename into the canonical word. For two or more
/// cross-caps the first pair is additionally re-cut through the Klein bottle
/// form `c u c u'` so that the certificate exhibits that identity.
pub fn normalize(word: &ValidatedWord) -> Result<Normalization, InvariantViolation> {
    let mut nz = Normalizer::new(word.clone());
    nz.cancel_all()?;
    nz.reduce_vertices()?;
    nz.gather_crosscaps()?;
    nz.gather_handles()?;
    nz.trade_handles()?;
    nz.klein_pairing()?;
    let surface_type = nz.canonicalize()?;

    let expected = word.classify_by_invariants()?;
    if surface_type != expected {
        return Err(InvariantViolation(format!(
            "normalizer read off {surface_type:?} but invariants give {expected:?}"
        )));
    }
    let target = canonical_word(surface_type);
    if nz.word.letters() != target.letters() {
        return Err(InvariantViolation(format!(
            "normalizer ended at {} instead of {}",
            render_word(&nz.word),
            render_word(&target)
        )));
    }
    Ok(Normalization {
        surface_type,
        trace: MoveTrace {
            initial: word.clone(),
            steps: nz.steps,
        },
    })
}

/// True iff the two words normalize to the same surface type.
pub fn equivalent(a: &ValidatedWord, b: &ValidatedWord) -> Result<bool, InvariantViolation> {
    Ok(normalize(a)?.surface_type == normalize(b)?.surface_type)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BlockKind {
    CrossCap,
    Handle,
}

#[derive(Clone, Copy, Debug)]
struct Block {
    kind: BlockKind,
    start: usize,
}

fn crosscap_at(letters: &[Letter], i: usize) -> bool {
    let n = letters.len();
    n >= 2 && letters[i] == letters[(i + 1) % n]
}

fn handle_at(letters: &[Letter], i: usize) -> bool {
    let n = letters.len();
    if n < 4 {
        return false;
    }
    let at = |k: usize| &letters[(i + k) % n];
    at(0).symbol != at(1).symbol
        && at(0).symbol == at(2).symbol
        && at(1).symbol == at(3).symbol
        && at(0).inverse != at(2).inverse
        && at(1).inverse != at(3).inverse
}

/// Exact cover of the cyclic word by cross-cap and commutator blocks, if one
/// exists; blocks are listed in reading order from the first start.
fn tile(letters: &[Letter]) -> Option<Vec<Block>> {
    let n = letters.len();
    'offsets: for offset in 0..n {
        let mut blocks = Vec::new();
        let mut k = 0;
        while k < n {
            let start = (offset + k) % n;
            if k + 2 <= n && crosscap_at(letters, start) {
                blocks.push(Block {
                    kind: BlockKind::CrossCap,
                    start,
                });
                k += 2;
            } else if k + 4 <= n && handle_at(letters, start) {
                blocks.push(Block {
                    kind: BlockKind::Handle,
                    start,
                });
                k += 4;
            } else {
                continue 'offsets;
            }
        }
        return Some(blocks);
    }
    None
}

struct Normalizer {
    word: ValidatedWord,
    steps: Vec<Move>,
    fresh: FreshSymbols,
    euler: i64,
    orientable: bool,
}

impl Normalizer {
    fn new(word: ValidatedWord) -> Self {
        Normalizer {
            euler: word.euler_characteristic(),
            orientable: word.is_orientable(),
            word,
            steps: Vec::new(),
            fresh: FreshSymbols::new(),
        }
    }

    fn letters(&self) -> &[Letter] {
        self.word.letters()
    }

    fn len(&self) -> usize {
        self.word.len()
    }

    fn positions(&self, s: &Symbol) -> Vec<usize> {
        self.word.positions(s)
    }

    fn mint(&mut self) -> Symbol {
        self.fresh.mint(&self.word)
    }

    fn apply(&mut self, m: Move) -> Result<(), InvariantViolation> {
        let next = apply_move(&self.word, &m).map_err(|e| {
            InvariantViolation(format!(
                "normalizer issued illegal move '{m}' on {}: {e}",
                render_word(&self.word)
            ))
        })?;
        if next.euler_characteristic() != self.euler || next.is_orientable() != self.orientable {
            return Err(InvariantViolation(format!(
                "move '{m}' changed the invariants of {}",
                render_word(&self.word)
            )));
        }
        self.word = next;
        self.steps.push(m);
        Ok(())
    }

    fn rotate_to(&mut self, p: usize) -> Result<(), InvariantViolation> {
        if p % self.len() != 0 {
            self.apply(Move::Rotate(p % self.len()))?;
        }
        Ok(())
    }

    /// Flips `letter`'s symbol if that letter is currently inverted.
    fn make_positive_at(&mut self, p: usize) -> Result<(), InvariantViolation> {
        let l = self.letters()[p % self.len()].clone();
        if l.inverse {
            self.apply(Move::FlipEdge(l.symbol))?;
        }
        Ok(())
    }

    fn cut_paste(&mut self, i: usize, j: usize, paste: Symbol) -> Result<Symbol, InvariantViolation> {
        let fresh = self.mint();
        self.apply(Move::CutPaste {
            i,
            j,
            fresh: fresh.clone(),
            paste,
        })?;
        Ok(fresh)
    }

    fn budget(&self) -> usize {
        let n = self.len();
        8 * n * n + 64
    }

    fn cancel_all(&mut self) -> Result<(), InvariantViolation> {
        while self.len() > 2 {
            let n = self.len();
            let letters = self.letters();
            let hit = (0..n).find(|&p| {
                let (a, b) = (&letters[p], &letters[(p + 1) % n]);
                a.symbol == b.symbol && a.inverse != b.inverse
            });
            match hit {
                Some(p) => self.apply(Move::Cancel(p))?,
                None => break,
            }
        }
        Ok(())
    }

    /// Cut off triangles around the rarest vertex until a single vertex cycle
    /// remains.
    fn reduce_vertices(&mut self) -> Result<(), InvariantViolation> {
        let limit = self.budget();
        for _ in 0..limit {
            self.cancel_all()?;
            let n = self.len();
            if n <= 2 {
                return Ok(());
            }
            let labels = corner_labels(self.letters());
            let mut classes: Vec<usize> = labels.clone();
            classes.sort_unstable();
            classes.dedup();
            if classes.len() == 1 {
                return Ok(());
            }
            // labels are the least corner index in each class, so ties on size
            // resolve to the class holding the lowest corner
            let rare = *classes
                .iter()
                .min_by_key(|&&c| (labels.iter().filter(|&&l| l == c).count(), c))
                .expect("at least one class");
            let p = (0..n)
                .find(|&p| labels[p] != rare && labels[(p + 1) % n] == rare)
                .ok_or_else(|| InvariantViolation("vertex class without a boundary side".into()))?;
            self.rotate_to(p)?;
            let b = self.letters()[1].symbol.clone();
            self.cut_paste(0, 2, b)?;
        }
        Err(InvariantViolation("vertex reduction did not terminate".into()))
    }

    /// `x B x K` becomes `K c c B'` for the leftmost split same-exponent pair.
    fn gather_crosscaps(&mut self) -> Result<(), InvariantViolation> {
        let limit = self.budget();
        for _ in 0..limit {
            let n = self.len();
            let letters = self.letters();
            let split = (0..n).find_map(|i| {
                let partner = (0..n).find(|&j| j != i && letters[j] == letters[i])?;
                let adjacent = (i + 1) % n == partner || (partner + 1) % n == i;
                (i < partner && !adjacent).then_some(i)
            });
            let Some(i) = split else {
                return Ok(());
            };
            self.rotate_to(i)?;
            self.make_positive_at(0)?;
            let x = self.letters()[0].symbol.clone();
            let q = self.positions(&x)[1];
            let n = self.len();
            self.cut_paste(q, n, x)?;
        }
        Err(InvariantViolation("cross-cap gathering did not terminate".into()))
    }

    /// Positions covered by a cross-cap or commutator block.
    fn block_cover(&self) -> Vec<bool> {
        let n = self.len();
        let letters = self.letters();
        let mut covered = vec![false; n];
        for i in 0..n {
            if crosscap_at(letters, i) {
                covered[i] = true;
                covered[(i + 1) % n] = true;
            }
            if handle_at(letters, i) {
                for k in 0..4 {
                    covered[(i + k) % n] = true;
                }
            }
        }
        covered
    }

    /// `x P y Q x' R y' S` becomes `P S d c d' c' R Q`.
    fn gather_handles(&mut self) -> Result<(), InvariantViolation> {
        if self.len() <= 2 {
            return Ok(());
        }
        let limit = self.budget();
        for _ in 0..limit {
            let Some(free) = self.block_cover().iter().position(|c| !c) else {
                return Ok(());
            };
            self.rotate_to(free)?;
            self.make_positive_at(0)?;
            let x = self.letters()[0].symbol.clone();
            let q = self.positions(&x)[1];
            let y = (1..q)
                .map(|r| self.letters()[r].symbol.clone())
                .find(|s| self.positions(s).iter().any(|&p| p > q))
                .ok_or_else(|| {
                    InvariantViolation(format!(
                        "no pair linked with {x} in {}",
                        render_word(&self.word)
                    ))
                })?;
            let r = self.positions(&y)[0];
            self.make_positive_at(r)?;
            let c = self.cut_paste(0, q + 1, y)?;
            let c_pos = self
                .letters()
                .iter()
                .position(|l| l.symbol == c && !l.inverse)
                .expect("fresh symbol present");
            self.rotate_to(c_pos)?;
            let c_neg = self
                .letters()
                .iter()
                .position(|l| l.symbol == c && l.inverse)
                .expect("fresh symbol present");
            self.cut_paste(0, c_neg, x)?;
        }
        Err(InvariantViolation("handle gathering did not terminate".into()))
    }

    /// `x x a b a' b' Q` becomes three cross-caps followed by `Q`.
    fn trade_handles(&mut self) -> Result<(), InvariantViolation> {
        if self.len() <= 2 {
            return Ok(());
        }
        let limit = self.budget();
        for _ in 0..limit {
            let blocks = tile(self.letters()).ok_or_else(|| {
                InvariantViolation(format!("word {} is not tiled by blocks", render_word(&self.word)))
            })?;
            let m = blocks.len();
            let Some(idx) = (0..m).find(|&k| {
                blocks[k].kind == BlockKind::CrossCap && blocks[(k + 1) % m].kind == BlockKind::Handle
            }) else {
                return Ok(());
            };
            self.rotate_to(blocks[idx].start)?;
            self.make_positive_at(0)?;
            self.make_positive_at(2)?;
            self.make_positive_at(3)?;
            let x = self.letters()[0].symbol.clone();
            let a = self.letters()[2].symbol.clone();
            let b = self.letters()[3].symbol.clone();
            let c = self.cut_paste(1, 3, a)?;
            let px = self.positions(&x);
            self.cut_paste(px[0], px[1], x)?;
            let pb = self.positions(&b)[0];
            let pc = *self.positions(&c).last().expect("fresh symbol present");
            self.cut_paste(pb + 1, pc, b)?;
        }
        Err(InvariantViolation("handle trading did not terminate".into()))
    }

    /// `u u v v R` becomes `c u c u' R'` and is then regathered.
    fn klein_pairing(&mut self) -> Result<(), InvariantViolation> {
        let Some(blocks) = tile(self.letters()) else {
            return Ok(());
        };
        if blocks.len() < 2 || blocks.iter().any(|b| b.kind != BlockKind::CrossCap) {
            return Ok(());
        }
        self.rotate_to(blocks[0].start)?;
        self.make_positive_at(0)?;
        self.make_positive_at(2)?;
        let v = self.letters()[2].symbol.clone();
        self.cut_paste(1, 3, v)?;
        self.gather_crosscaps()
    }

    fn canonicalize(&mut self) -> Result<SurfaceType, InvariantViolation> {
        let n = self.len();
        if n == 2 && self.letters()[0].inverse != self.letters()[1].inverse {
            let p = self.letters().iter().position(|l| !l.inverse).expect("one positive");
            self.rotate_to(p)?;
            self.rename_into(&self.letters()[0].symbol.clone(), Symbol::new("a"))?;
            return Ok(SurfaceType::Sphere);
        }
        let blocks = tile(self.letters()).ok_or_else(|| {
            InvariantViolation(format!("word {} is not tiled by blocks", render_word(&self.word)))
        })?;
        let crosscaps = blocks.iter().filter(|b| b.kind == BlockKind::CrossCap).count() as u32;
        let handles = blocks.len() as u32 - crosscaps;
        if crosscaps > 0 && handles > 0 {
            return Err(InvariantViolation("mixed blocks survived handle trading".into()));
        }
        self.rotate_to(blocks[0].start)?;
        let mut p = 0;
        let mut index = 1;
        while p < self.len() {
            if crosscaps > 0 {
                self.make_positive_at(p)?;
                let u = self.letters()[p].symbol.clone();
                self.rename_into(&u, Symbol::new(format!("a{index}")))?;
                p += 2;
            } else {
                self.make_positive_at(p)?;
                self.make_positive_at(p + 1)?;
                let a = self.letters()[p].symbol.clone();
                let b = self.letters()[p + 1].symbol.clone();
                self.rename_into(&a, Symbol::new(format!("a{index}")))?;
                self.rename_into(&b, Symbol::new(format!("b{index}")))?;
                p += 4;
            }
            index += 1;
        }
        Ok(if crosscaps > 0 {
            SurfaceType::NonOrientable { crosscaps }
        } else {
            SurfaceType::Orientable { genus: handles }
        })
    }

    /// Renames `from` to `to`, first moving any other holder of `to` aside.
    fn rename_into(&mut self, from: &Symbol, to: Symbol) -> Result<(), InvariantViolation> {
        if from == &to {
            return Ok(());
        }
        if self.word.contains_symbol(&to) {
            let aside = self.mint();
            self.apply(Move::Rename {
                from: to.clone(),
                to: aside,
            })?;
        }
        self.apply(Move::Rename {
            from: from.clone(),
            to,
        })
    }
}
