//! Rational complex surfaces as integer intersection lattices with tracked
//! curve classes: bases, blow-ups, blow-downs and the topological bridge.

use std::fmt;

use indexmap::IndexMap;
use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::{self, Inertia, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("the cocycle is undefined at z = 0")]
    ZeroPoint,
    #[error("unknown line {0}")]
    UnknownLine(String),
    #[error("line name {0} is already in use")]
    NameInUse(String),
    #[error("class has {got} coordinates but the lattice has rank {rank}")]
    Dimension { got: usize, rank: usize },
    #[error("{name} is a {} line, not −1", signed(*.square))]
    NotMinusOne { name: String, square: i64, k_dot: i64 },
    #[error("{name} has square −1 but K·{name} = {}, not −1", signed(*.k_dot))]
    NotExceptional { name: String, square: i64, k_dot: i64 },
    #[error("cannot parse class '{text}': {message}")]
    ClassSyntax { text: String, message: String },
}

/// `+n`, `−n` or `0`.
pub fn signed(n: i64) -> String {
    match n.cmp(&0) {
        std::cmp::Ordering::Greater => format!("+{n}"),
        std::cmp::Ordering::Less => format!("−{}", -n),
        std::cmp::Ordering::Equal => "0".to_string(),
    }
}

/// Degree of the line bundle O(n) over CP¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundleDegree(pub i64);

/// Transition function of O(n) over the chart overlap: `z^(-n)`.
pub fn cocycle_at(n: i64, z: Complex64) -> Result<Complex64, PicardError> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(PicardError::ZeroPoint);
    }
    let exp = i32::try_from(-n).expect("bundle degree fits in i32");
    Ok(z.powi(exp))
}

/// Chart change on the blow-up of C² at the origin: `(t, u) ↦ (1/t, t·u)`.
pub fn blowup_chart_transition(
    t: Complex64,
    u: Complex64,
) -> Result<(Complex64, Complex64), PicardError> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(PicardError::ZeroPoint);
    }
    Ok((t.inv(), t * u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSurface {
    CP2,
    /// `S_n = P(O(n) ⊕ O(0))`, stored with `n ≥ 0`.
    Hirzebruch(u32),
}

impl BaseSurface {
    pub fn rank(self) -> usize {
        match self {
            BaseSurface::CP2 => 1,
            BaseSurface::Hirzebruch(_) => 2,
        }
    }

    pub fn euler(self) -> i64 {
        match self {
            BaseSurface::CP2 => 3,
            BaseSurface::Hirzebruch(_) => 4,
        }
    }
}

impl fmt::Display for BaseSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSurface::CP2 => write!(f, "CP2"),
            BaseSurface::Hirzebruch(n) => write!(f, "S{n}"),
        }
    }
}

/// Projectivization of `O(a) ⊕ O(b)`; twisting by a line bundle reduces it
/// to `S_|a-b|`.
pub fn projectivize(a: BundleDegree, b: BundleDegree) -> BaseSurface {
    BaseSurface::Hirzebruch((a.0 - b.0).unsigned_abs() as u32)
}

/// Integer coordinates in the active lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub coords: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass::new(vec![0; rank])
    }

    pub fn unit(rank: usize, axis: usize) -> Self {
        let mut c = DivisorClass::zero(rank);
        c.coords[axis] = 1;
        c
    }

    fn scaled_add(&self, k: i64, other: &DivisorClass) -> DivisorClass {
        DivisorClass::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + k * b).collect())
    }
}

/// Topological shadow of a rational surface: the base connected with copies
/// of CP² carrying the reversed orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TopologicalModel {
    pub minimal_base: BaseSurface,
    pub reversed_cp2_summands: usize,
    pub euler: i64,
    pub b2: usize,
}

/// A rational surface built from CP² or a Hirzebruch surface by blow-ups and
/// blow-downs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSurface {
    base: BaseSurface,
    blowups: usize,
    basis: Vec<String>,
    gram: Matrix,
    lines: IndexMap<String, DivisorClass>,
    canonical: DivisorClass,
    exceptional_minted: usize,
    derived_minted: usize,
}

/// The starting surface for `base` with its standard tracked lines.
pub fn make_base(base: BaseSurface) -> RationalSurface {
    let (basis, gram, lines, canonical) = match base {
        BaseSurface::CP2 => (
            vec!["H".to_string()],
            vec![vec![1]],
            vec![("H".to_string(), DivisorClass::new(vec![1]))],
            DivisorClass::new(vec![-3]),
        ),
        BaseSurface::Hirzebruch(n) => {
            let n = n as i64;
            (
                vec!["S".to_string(), "F".to_string()],
                vec![vec![-n, 1], vec![1, 0]],
                vec![
                    ("S".to_string(), DivisorClass::new(vec![1, 0])),
                    ("F".to_string(), DivisorClass::new(vec![0, 1])),
                ],
                DivisorClass::new(vec![-2, -(n + 2)]),
            )
        }
    };
    RationalSurface {
        base,
        blowups: 0,
        basis,
        gram,
        lines: lines.into_iter().collect(),
        canonical,
        exceptional_minted: 0,
        derived_minted: 0,
    }
}

impl RationalSurface {
    pub fn base(&self) -> BaseSurface {
        self.base
    }

    /// Net number of blow-ups over the recorded base.
    pub fn blowups(&self) -> usize {
        self.blowups
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    /// Tracked lines in insertion order.
    pub fn lines(&self) -> impl Iterator<Item = (&str, &DivisorClass)> {
        self.lines.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn line(&self, name: &str) -> Result<&DivisorClass, PicardError> {
        self.lines
            .get(name)
            .ok_or_else(|| PicardError::UnknownLine(name.to_string()))
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, PicardError> {
        for c in [a, b] {
            if c.coords.len() != self.rank() {
                return Err(PicardError::Dimension {
                    got: c.coords.len(),
                    rank: self.rank(),
                });
            }
        }
        Ok(lattice::bilinear(&self.gram, &a.coords, &b.coords))
    }

    fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        lattice::bilinear(&self.gram, &a.coords, &b.coords)
    }

    pub fn self_intersection(&self, name: &str) -> Result<i64, PicardError> {
        let c = self.line(name)?;
        Ok(self.dot(c, c))
    }

    pub fn k_squared(&self) -> i64 {
        self.dot(&self.canonical, &self.canonical)
    }

    pub fn signature(&self) -> Inertia {
        lattice::inertia(&self.gram)
    }

    pub fn euler_characteristic_cx(&self) -> i64 {
        self.base.euler() + self.blowups as i64
    }

    pub fn topological_model(&self) -> TopologicalModel {
        // blow-downs can leave an even lattice recorded as a blow-up of CP2,
        // but any reversed CP2 summand makes the form odd
        let (minimal_base, reversed_cp2_summands) =
            if self.blowups > 0 && lattice::is_even(&self.gram) {
                (BaseSurface::Hirzebruch(0), 0)
            } else {
                (self.base, self.blowups)
            };
        TopologicalModel {
            minimal_base,
            reversed_cp2_summands,
            euler: self.euler_characteristic_cx(),
            b2: self.rank(),
        }
    }

    /// Records `base` as the surface itself, once it has been identified.
    pub(crate) fn rebased(mut self, base: BaseSurface) -> RationalSurface {
        debug_assert_eq!(base.rank(), self.rank());
        self.base = base;
        self.blowups = 0;
        self
    }

    fn name_taken(&self, name: &str) -> bool {
        self.lines.contains_key(name) || self.basis.iter().any(|b| b == name)
    }

    /// Starts tracking a named class, e.g. the line through two blown-up
    /// points.
    pub fn define_line(&self, name: &str, class: DivisorClass) -> Result<RationalSurface, PicardError> {
        if class.coords.len() != self.rank() {
            return Err(PicardError::Dimension {
                got: class.coords.len(),
                rank: self.rank(),
            });
        }
        if self.name_taken(name) {
            return Err(PicardError::NameInUse(name.to_string()));
        }
        let mut out = self.clone();
        out.lines.insert(name.to_string(), class);
        Ok(out)
    }

    /// Stops tracking a line; its class stays in the lattice.
    pub fn forget_line(&self, name: &str) -> Result<RationalSurface, PicardError> {
        let mut out = self.clone();
        out.lines
            .shift_remove(name)
            .ok_or_else(|| PicardError::UnknownLine(name.to_string()))?;
        Ok(out)
    }

    /// Moves the named tracked line to the front of the insertion order.
    pub fn prioritize(&self, name: &str) -> Result<RationalSurface, PicardError> {
        let idx = self
            .lines
            .get_index_of(name)
            .ok_or_else(|| PicardError::UnknownLine(name.to_string()))?;
        let mut out = self.clone();
        out.lines.move_index(idx, 0);
        Ok(out)
    }

    /// Blows up a point lying on the named tracked lines. Mints the next
    /// exceptional class `E{k}` as both a basis axis and a tracked line.
    pub fn blow_up(&self, through: &[&str]) -> Result<RationalSurface, PicardError> {
        for name in through {
            self.line(name)?;
        }
        let mut out = self.clone();
        let mut index = self.exceptional_minted + 1;
        while out.name_taken(&format!("E{index}")) {
            index += 1;
        }
        let name = format!("E{index}");
        out.exceptional_minted = index;
        out.blowups += 1;
        for row in out.gram.iter_mut() {
            row.push(0);
        }
        let r = out.gram.len();
        let mut last = vec![0; r + 1];
        last[r] = -1;
        out.gram.push(last);
        out.basis.push(name.clone());
        for (line, class) in out.lines.iter_mut() {
            let on = through.contains(&line.as_str());
            class.coords.push(if on { -1 } else { 0 });
        }
        out.canonical.coords.push(1);
        out.lines.insert(name, DivisorClass::unit(r + 1, r));
        Ok(out)
    }

    fn complement(&self, c: &DivisorClass) -> lattice::KernelBasis {
        lattice::kernel_of_form(&lattice::apply(&self.gram, &c.coords))
    }

    /// Integer basis of the orthogonal complement of a tracked line, in the
    /// current coordinates. This is the basis [`RationalSurface::blow_down`]
    /// adopts.
    pub fn complement_basis(&self, name: &str) -> Result<Vec<DivisorClass>, PicardError> {
        let c = self.line(name)?;
        Ok(self
            .complement(c)
            .basis
            .into_iter()
            .map(DivisorClass::new)
            .collect())
    }

    /// Contracts the named tracked −1 line.
    pub fn blow_down(&self, name: &str) -> Result<RationalSurface, PicardError> {
        let c = self.line(name)?.clone();
        let square = self.dot(&c, &c);
        let k_dot = self.dot(&c, &self.canonical);
        if square != -1 {
            return Err(PicardError::NotMinusOne {
                name: name.to_string(),
                square,
                k_dot,
            });
        }
        if k_dot != -1 {
            return Err(PicardError::NotExceptional {
                name: name.to_string(),
                square,
                k_dot,
            });
        }
        let kernel = self.complement(&c);
        let project = |v: &DivisorClass| -> DivisorClass {
            let coords = kernel
                .coordinates(&v.coords)
                .expect("pushed-forward class lies in the complement");
            DivisorClass::new(coords)
        };

        let mut derived = self.derived_minted;
        let basis: Vec<String> = kernel
            .basis
            .iter()
            .map(|b| {
                let unit = (b.iter().filter(|&&x| x != 0).count() == 1)
                    .then(|| b.iter().position(|&x| x == 1))
                    .flatten();
                match unit {
                    Some(axis) => self.basis[axis].clone(),
                    None => {
                        derived += 1;
                        format!("D{derived}")
                    }
                }
            })
            .collect();
        let gram = lattice::restrict(&self.gram, &kernel.basis);
        let lines = self
            .lines
            .iter()
            .filter(|(n, class)| n.as_str() != name && **class != c)
            .map(|(n, l)| {
                let pushed = l.scaled_add(self.dot(l, &c), &c);
                (n.clone(), project(&pushed))
            })
            .collect();
        let canonical = project(&self.canonical.scaled_add(-1, &c));

        let rank = gram.len();
        let (base, blowups) = if rank < self.base.rank() {
            (BaseSurface::CP2, 0)
        } else {
            (self.base, rank - self.base.rank())
        };
        Ok(RationalSurface {
            base,
            blowups,
            basis,
            gram,
            lines,
            canonical,
            exceptional_minted: self.exceptional_minted,
            derived_minted: derived,
        })
    }

    /// Parses a signed integer combination of basis and tracked-line names,
    /// e.g. `H - E1 - E2` or `-2S - 3F + E1`. Coefficients may be written
    /// `2S`, `2 S` or `2*S`; `0` is the zero class.
    pub fn parse_class(&self, text: &str) -> Result<DivisorClass, PicardError> {
        let err = |message: String| PicardError::ClassSyntax {
            text: text.to_string(),
            message,
        };
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty class".into()));
        }
        if chars == ['0'] {
            return Ok(DivisorClass::zero(self.rank()));
        }
        let mut total = DivisorClass::zero(self.rank());
        let mut i = 0;
        let mut first = true;
        while i < chars.len() {
            let mut sign = 1;
            match chars[i] {
                '+' => i += 1,
                '-' | '−' => {
                    sign = -1;
                    i += 1;
                }
                _ if first => {}
                c => return Err(err(format!("expected '+' or '-', found '{c}'"))),
            }
            first = false;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: i64 = if i > start {
                let digits: String = chars[start..i].iter().collect();
                digits.parse().map_err(|_| err(format!("coefficient {digits} is too large")))?
            } else {
                1
            };
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            let name_start = i;
            if i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
            }
            if name_start == i {
                return Err(err("expected a class name".into()));
            }
            let name: String = chars[name_start..i].iter().collect();
            let term = if let Some(axis) = self.basis.iter().position(|b| *b == name) {
                DivisorClass::unit(self.rank(), axis)
            } else if let Some(class) = self.lines.get(&name) {
                class.clone()
            } else {
                return Err(err(format!("unknown name {name}")));
            };
            total = total.scaled_add(sign * coeff, &term);
        }
        Ok(total)
    }

    /// Canonical text of a class: basis order, zero terms omitted.
    pub fn render_class(&self, class: &DivisorClass) -> String {
        let mut out = String::new();
        for (coeff, name) in class.coords.iter().zip(&self.basis) {
            if *coeff == 0 {
                continue;
            }
            let magnitude = coeff.unsigned_abs();
            let body = if magnitude == 1 {
                name.clone()
            } else {
                format!("{magnitude}{name}")
            };
            if out.is_empty() {
                if *coeff < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *coeff < 0 { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
