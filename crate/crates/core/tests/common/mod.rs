#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use surfclass::picard::{make_base, BaseSurface, RationalSurface};
use surfclass::word::{validate, Letter, Symbol, ValidatedWord, Word};

/// Uniformly shuffled word on `1..=max_symbols` symbols with random signs.
pub fn random_word(rng: &mut impl Rng, max_symbols: usize) -> ValidatedWord {
    let n = rng.gen_range(1..=max_symbols);
    let mut slots: Vec<usize> = (0..n).flat_map(|s| [s, s]).collect();
    slots.shuffle(rng);
    let letters = slots
        .into_iter()
        .map(|s| Letter::new(Symbol::new(format!("s{s}")), rng.gen_bool(0.5)))
        .collect();
    validate(Word::new(letters).unwrap()).unwrap()
}

/// Every valid word over the symbols `s0..s{k-1}` for `k <= max_symbols`.
pub fn all_words(max_symbols: usize) -> Vec<ValidatedWord> {
    let mut out = Vec::new();
    for k in 1..=max_symbols {
        let mut arrangement = Vec::new();
        arrangements(&mut vec![2; k], 2 * k, &mut arrangement, &mut |arr| {
            for signs in 0u32..(1 << (2 * k)) {
                let letters = arr
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| Letter::new(Symbol::new(format!("s{s}")), signs >> i & 1 == 1))
                    .collect();
                out.push(validate(Word::new(letters).unwrap()).unwrap());
            }
        });
    }
    out
}

fn arrangements(
    remaining: &mut Vec<usize>,
    len: usize,
    prefix: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if prefix.len() == len {
        emit(prefix);
        return;
    }
    for s in 0..remaining.len() {
        if remaining[s] > 0 {
            remaining[s] -= 1;
            prefix.push(s);
            arrangements(remaining, len, prefix, emit);
            prefix.pop();
            remaining[s] += 1;
        }
    }
}

pub fn random_base(rng: &mut impl Rng) -> BaseSurface {
    match rng.gen_range(0..7) {
        0 => BaseSurface::CP2,
        n => BaseSurface::Hirzebruch(n - 1),
    }
}

/// Surfaces along a random script: up to `max_blowups` blow-ups through
/// random subsets of tracked lines, interleaved with legal blow-downs.
pub fn random_script(rng: &mut impl Rng, max_blowups: usize) -> Vec<RationalSurface> {
    let mut surf = make_base(random_base(rng));
    let mut history = vec![surf.clone()];
    let blowups = rng.gen_range(0..=max_blowups);
    for _ in 0..blowups {
        let names: Vec<String> = surf.lines().map(|(n, _)| n.to_string()).collect();
        let through: Vec<&str> = names
            .iter()
            .filter(|_| rng.gen_bool(0.25))
            .map(String::as_str)
            .collect();
        surf = surf.blow_up(&through).unwrap();
        history.push(surf.clone());
        if rng.gen_bool(0.3) {
            let candidates = surfclass::minimal::find_minus_one_lines(&surf);
            if let Some(name) = candidates.choose(rng) {
                surf = surf.blow_down(name).unwrap();
                history.push(surf.clone());
            }
        }
    }
    history
}

/// Blow-ups at fresh points lying on no tracked line.
pub fn generic_blowups(base: BaseSurface, count: usize) -> RationalSurface {
    (0..count).fold(make_base(base), |s, _| s.blow_up(&[]).unwrap())
}
