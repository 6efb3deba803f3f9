//! Brute-force orbit enumeration under the elementary moves, used as an
//! independent check on the normalizer.

use std::collections::{HashSet, VecDeque};

use crate::rewrite::{apply_move, cut, Move};
use crate::word::{shape_key, FreshSymbols, ValidatedWord};

type ShapeKey = Vec<(u16, bool)>;

/// Words reachable from a start word, one representative per class of
/// words equal up to rotation and renaming.
#[derive(Clone, Debug)]
pub struct Orbit {
    members: Vec<ValidatedWord>,
    keys: HashSet<ShapeKey>,
    /// True when the closure was completed within the node budget.
    pub exhausted: bool,
}

impl Orbit {
    pub fn members(&self) -> &[ValidatedWord] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership up to rotation and renaming.
    pub fn contains(&self, word: &ValidatedWord) -> bool {
        self.keys.contains(&shape_key(word.letters()))
    }
}

/// Every reflection, edge flip, cancel, insert (while fewer than
/// `max_symbols` symbols are present) and cut-and-paste applicable to `word`,
/// minting at most one fresh symbol.
pub fn applicable_moves(word: &ValidatedWord, max_symbols: usize) -> Vec<Move> {
    expand(word, max_symbols).into_iter().map(|(m, _)| m).collect()
}

fn expand(word: &ValidatedWord, max_symbols: usize) -> Vec<(Move, ValidatedWord)> {
    let n = word.len();
    let symbols = word.symbols();
    let fresh = FreshSymbols::new().mint(word);
    let mut moves = vec![Move::Reflect];
    moves.extend(symbols.iter().cloned().map(Move::FlipEdge));
    if n > 2 {
        moves.extend((0..n).map(Move::Cancel));
    }
    if symbols.len() < max_symbols {
        // inserting at n is a rotation of inserting at 0
        moves.extend((0..n).map(|p| Move::Insert(p, fresh.clone())));
    }
    if n > 2 {
        for i in 0..n {
            for j in i + 1..=n {
                if j - i >= n {
                    continue;
                }
                let Ok((first, second)) = cut(word, i, j, &fresh) else {
                    continue;
                };
                for s in first.symbols() {
                    if s != fresh && first.positions(&s).len() == 1 && second.positions(&s).len() == 1 {
                        moves.push(Move::CutPaste {
                            i,
                            j,
                            fresh: fresh.clone(),
                            paste: s,
                        });
                    }
                }
            }
        }
    }
    moves
        .into_iter()
        .filter_map(|m| apply_move(word, &m).ok().map(|w| (m, w)))
        .collect()
}

/// Breadth-first closure of `word` under reflection, edge flips, cancels,
/// inserts (while fewer than `max_symbols` symbols are present) and
/// cut-and-paste. Rotation and renaming are quotiented out. Stops after
/// `budget` distinct classes; `exhausted` tells whether the closure finished.
pub fn orbit_oracle(word: &ValidatedWord, max_symbols: usize, budget: usize) -> Orbit {
    let budget = budget.max(1);
    let mut keys = HashSet::new();
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    keys.insert(shape_key(word.letters()));
    members.push(word.clone());
    queue.push_back(word.clone());
    let mut exhausted = true;
    'search: while let Some(current) = queue.pop_front() {
        for (_, next) in expand(&current, max_symbols) {
            if keys.insert(shape_key(next.letters())) {
                if members.len() >= budget {
                    keys.remove(&shape_key(next.letters()));
                    exhausted = false;
                    break 'search;
                }
                members.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Orbit {
        members,
        keys,
        exhausted,
    }
}
