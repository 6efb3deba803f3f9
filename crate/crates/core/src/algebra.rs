//! Connected sums of words and of surface types.

use std::fmt;

use crate::word::{FreshSymbols, Letter, SurfaceType, ValidatedWord, Word};

/// Concatenation of `w1` with a copy of `w2` whose clashing symbols have been
/// renamed apart.
pub fn connected_sum_words(w1: &ValidatedWord, w2: &ValidatedWord) -> ValidatedWord {
    let mut fresh = FreshSymbols::new();
    let mut renames = std::collections::BTreeMap::new();
    for s in w2.symbols() {
        if w1.contains_symbol(&s) {
            let t = fresh.mint_avoiding(|c| w1.contains_symbol(c) || w2.contains_symbol(c));
            renames.insert(s, t);
        }
    }
    let mut letters: Vec<Letter> = w1.letters().to_vec();
    letters.extend(w2.letters().iter().map(|l| match renames.get(&l.symbol) {
        Some(t) => Letter::new(t.clone(), l.inverse),
        None => l.clone(),
    }));
    ValidatedWord::new_unchecked(Word::from_letters_unchecked(letters))
}

/// Type-level connected sum. The sphere is the identity and a handle next to
/// a cross-cap counts as two cross-caps.
pub fn connected_sum_type(t1: SurfaceType, t2: SurfaceType) -> SurfaceType {
    use SurfaceType::*;
    match (t1, t2) {
        (Sphere, t) | (t, Sphere) => t,
        (Orientable { genus: g }, Orientable { genus: h }) => Orientable { genus: g + h },
        (NonOrientable { crosscaps: j }, NonOrientable { crosscaps: k }) => {
            NonOrientable { crosscaps: j + k }
        }
        (Orientable { genus: g }, NonOrientable { crosscaps: k })
        | (NonOrientable { crosscaps: k }, Orientable { genus: g }) => NonOrientable {
            crosscaps: 2 * g + k,
        },
    }
}

/// Prime summand of a closed surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summand {
    Torus,
    ProjectivePlane,
}

/// A surface written as a connected sum of prime summands; empty means the
/// sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

pub fn decompose(t: SurfaceType) -> Decomposition {
    let summands = match t {
        SurfaceType::Sphere => Vec::new(),
        SurfaceType::Orientable { genus } => vec![Summand::Torus; genus as usize],
        SurfaceType::NonOrientable { crosscaps } => {
            vec![Summand::ProjectivePlane; crosscaps as usize]
        }
    };
    Decomposition { summands }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Torus => write!(f, "T"),
            Summand::ProjectivePlane => write!(f, "RP²"),
        }
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "S²");
        }
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" # "))?;
        if self.summands == [Summand::ProjectivePlane; 2] {
            write!(f, " = K")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::normalize;
    use crate::word::{parse_valid, render_word};

    fn w(text: &str) -> ValidatedWord {
        parse_valid(text).unwrap()
    }

    #[test]
    fn word_sum_renames_apart() {
        assert_eq!(render_word(&connected_sum_words(&w("aa"), &w("aa"))), "a a b b");
        let s = connected_sum_words(&w("a b a' b'"), &w("c d c' d'"));
        assert_eq!(render_word(&s), "a b a' b' c d c' d'");
        assert_eq!(
            normalize(&s).unwrap().surface_type,
            SurfaceType::Orientable { genus: 2 }
        );
        // renamed symbols avoid both inputs
        let s = connected_sum_words(&w("a b a' b'"), &w("b c b' c'"));
        assert_eq!(s.symbols().len(), 4);
    }

    #[test]
    fn sphere_is_identity() {
        for text in ["a a", "a b a' b'", "a b a b", "a b c a' b' c'"] {
            let x = w(text);
            let sum = connected_sum_words(&x, &w("a a'"));
            assert_eq!(
                normalize(&sum).unwrap().surface_type,
                normalize(&x).unwrap().surface_type
            );
        }
    }

    #[test]
    fn type_sums() {
        use SurfaceType::*;
        assert_eq!(
            connected_sum_type(NonOrientable { crosscaps: 1 }, NonOrientable { crosscaps: 1 }),
            NonOrientable { crosscaps: 2 }
        );
        assert_eq!(
            connected_sum_type(Orientable { genus: 2 }, Orientable { genus: 3 }),
            Orientable { genus: 5 }
        );
        assert_eq!(
            connected_sum_type(Orientable { genus: 1 }, NonOrientable { crosscaps: 1 }),
            NonOrientable { crosscaps: 3 }
        );
        let t = normalize(&connected_sum_words(&w("a b a' b'"), &w("a a")))
            .unwrap()
            .surface_type;
        assert_eq!(t, NonOrientable { crosscaps: 3 });
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose(SurfaceType::Orientable { genus: 3 }).to_string(), "T # T # T");
        assert_eq!(
            decompose(SurfaceType::NonOrientable { crosscaps: 2 }).to_string(),
            "RP² # RP² = K"
        );
        assert_eq!(decompose(SurfaceType::Sphere).to_string(), "S²");
    }
}
