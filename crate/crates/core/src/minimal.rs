//! Minimal models: contract tracked −1 lines until none remain, then
//! classify what is left.

use std::fmt;

use thiserror::Error;

use crate::lattice;
use crate::picard::{BaseSurface, DivisorClass, PicardError, RationalSurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalType {
    CP2,
    Hirzebruch(u32),
    /// The lattice alone does not single out a minimal surface.
    Inconclusive { rank: usize, parity: Parity },
}

impl fmt::Display for MinimalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalType::CP2 => write!(f, "CP2"),
            MinimalType::Hirzebruch(n) => write!(f, "S{n}"),
            MinimalType::Inconclusive { rank, parity } => {
                let p = match parity {
                    Parity::Even => "even",
                    Parity::Odd => "odd",
                };
                write!(f, "inconclusive (rank {rank}, {p} lattice)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimalError {
    #[error("surface still has −1 lines: {}", .0.join(", "))]
    NotMinimal(Vec<String>),
    #[error(transparent)]
    Picard(#[from] PicardError),
}

/// One contraction: the line's name, its class and that class rendered in
/// the basis of the surface it was contracted on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub name: String,
    pub class: DivisorClass,
    pub rendered: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub steps: Vec<ReductionStep>,
    pub final_type: MinimalType,
    pub final_surface: RationalSurface,
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: blow down {} = {}", i + 1, step.name, step.rendered)?;
        }
        write!(f, "minimal: {}", self.final_type)
    }
}

/// Tracked lines `c` with `c·c = −1` and `c·K = −1`, in insertion order.
pub fn find_minus_one_lines(surf: &RationalSurface) -> Vec<String> {
    let k = surf.canonical();
    surf.lines()
        .filter(|(_, c)| {
            surf.intersect(c, c).ok() == Some(-1) && surf.intersect(c, k).ok() == Some(-1)
        })
        .map(|(n, _)| n.to_string())
        .collect()
}

/// Repeatedly contracts the first −1 line until none remain.
pub fn minimal_model(surf: &RationalSurface) -> Result<ReductionReport, MinimalError> {
    let mut current = surf.clone();
    let mut steps = Vec::new();
    while let Some(name) = find_minus_one_lines(&current).into_iter().next() {
        let class = current.line(&name)?.clone();
        steps.push(ReductionStep {
            rendered: current.render_class(&class),
            name: name.clone(),
            class,
        });
        current = current.blow_down(&name)?;
    }
    let final_type = classify_minimal(&current)?;
    let current = match final_type {
        MinimalType::CP2 => current.rebased(BaseSurface::CP2),
        MinimalType::Hirzebruch(n) => current.rebased(BaseSurface::Hirzebruch(n)),
        MinimalType::Inconclusive { .. } => current,
    };
    Ok(ReductionReport {
        steps,
        final_type,
        final_surface: current,
    })
}

/// Classifies a surface without tracked −1 lines.
pub fn classify_minimal(surf: &RationalSurface) -> Result<MinimalType, MinimalError> {
    let pending = find_minus_one_lines(surf);
    if !pending.is_empty() {
        return Err(MinimalError::NotMinimal(pending));
    }
    let rank = surf.rank();
    if rank == 1 {
        return Ok(MinimalType::CP2);
    }
    if rank == 2 {
        let lines: Vec<&DivisorClass> = surf.lines().map(|(_, c)| c).collect();
        let square = |c: &DivisorClass| surf.intersect(c, c).unwrap_or(0);
        if let Some(c) = lines.iter().find(|c| square(c) < 0) {
            return Ok(MinimalType::Hirzebruch((-square(c)) as u32));
        }
        let rulings = lines.iter().enumerate().any(|(i, a)| {
            lines[i + 1..].iter().any(|b| {
                square(a) == 0 && square(b) == 0 && surf.intersect(a, b).ok() == Some(1)
            })
        });
        if rulings {
            return Ok(MinimalType::Hirzebruch(0));
        }
    }
    let parity = if lattice::is_even(surf.gram()) {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok(MinimalType::Inconclusive { rank, parity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{make_base, BaseSurface};

    fn two_points() -> RationalSurface {
        let y = make_base(BaseSurface::CP2)
            .blow_up(&[])
            .unwrap()
            .blow_up(&[])
            .unwrap();
        let l = y.parse_class("H - E1 - E2").unwrap();
        y.define_line("L_pq", l).unwrap()
    }

    #[test]
    fn finds_minus_one_lines_in_order() {
        let p2 = make_base(BaseSurface::CP2);
        assert!(find_minus_one_lines(&p2).is_empty());
        assert_eq!(find_minus_one_lines(&p2.blow_up(&[]).unwrap()), ["E1"]);
        assert_eq!(find_minus_one_lines(&two_points()), ["E1", "E2", "L_pq"]);
    }

    #[test]
    fn single_blow_up_returns_to_plane() {
        let report = minimal_model(&make_base(BaseSurface::CP2).blow_up(&[]).unwrap()).unwrap();
        assert_eq!(report.final_type, MinimalType::CP2);
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.steps[0].name, "E1");
    }

    #[test]
    fn contraction_order_decides_the_model() {
        let report = minimal_model(&two_points()).unwrap();
        assert_eq!(report.final_type, MinimalType::CP2);
        let report = minimal_model(&two_points().prioritize("L_pq").unwrap()).unwrap();
        assert_eq!(report.final_type, MinimalType::Hirzebruch(0));
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.final_surface.gram(), &vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn hirzebruch_one_contracts_its_section() {
        let report = minimal_model(&make_base(BaseSurface::Hirzebruch(1))).unwrap();
        assert_eq!(report.steps[0].name, "S");
        assert_eq!(report.final_type, MinimalType::CP2);
    }

    #[test]
    fn classification_of_minimal_bases() {
        assert_eq!(classify_minimal(&make_base(BaseSurface::CP2)).unwrap(), MinimalType::CP2);
        for n in [0, 2, 3, 5] {
            assert_eq!(
                classify_minimal(&make_base(BaseSurface::Hirzebruch(n))).unwrap(),
                MinimalType::Hirzebruch(n)
            );
        }
        let err = classify_minimal(&make_base(BaseSurface::CP2).blow_up(&[]).unwrap()).unwrap_err();
        assert_eq!(err, MinimalError::NotMinimal(vec!["E1".into()]));
    }

    #[test]
    fn untracked_rank_two_is_inconclusive() {
        // with the exceptional curve untracked only the square-0 line remains
        let x = make_base(BaseSurface::CP2).blow_up(&["H"]).unwrap();
        let y = x.forget_line("E1").unwrap();
        assert_eq!(
            classify_minimal(&y).unwrap(),
            MinimalType::Inconclusive {
                rank: 2,
                parity: Parity::Odd
            }
        );
    }
}
