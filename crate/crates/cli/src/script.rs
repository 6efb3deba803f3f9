//! The rational-surface script language.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! base cp2 | base hirzebruch <n>
//! blowup [on <line> ...]
//! line <name> = <class expr>
//! blowdown <name>
//! minimal-model
//! report
//! ```
//!
//! `minimal-model` prints the reduction log and continues with the minimal
//! surface.

use serde::Serialize;
use surfclass::minimal::{minimal_model, MinimalError, ReductionReport};
use surfclass::picard::{make_base, BaseSurface, PicardError, RationalSurface};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Base(BaseSurface),
    BlowUp(Vec<String>),
    Line { name: String, class: String },
    BlowDown(String),
    MinimalModel,
    Report,
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Picard { line: usize, source: PicardError },
    #[error("line {line}: {source}")]
    Minimal { line: usize, source: MinimalError },
}

impl ScriptError {
    /// Failures of the contraction loop itself are bugs, not bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, ScriptError::Minimal { .. })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a script into numbered statements.
pub fn parse_script(text: &str) -> Result<Vec<(usize, Statement)>, ScriptError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push((line, parse_statement(line, body)?));
    }
    Ok(out)
}

fn parse_statement(line: usize, body: &str) -> Result<Statement, ScriptError> {
    let words: Vec<&str> = body.split_whitespace().collect();
    match words.as_slice() {
        ["base", "cp2"] => Ok(Statement::Base(BaseSurface::CP2)),
        ["base", "hirzebruch", n] => n
            .parse()
            .map(|n| Statement::Base(BaseSurface::Hirzebruch(n)))
            .map_err(|_| syntax(line, format!("'{n}' is not a Hirzebruch index"))),
        ["base", ..] => Err(syntax(line, "expected 'base cp2' or 'base hirzebruch <n>'")),
        ["blowup"] => Ok(Statement::BlowUp(Vec::new())),
        ["blowup", "on", rest @ ..] if !rest.is_empty() => {
            Ok(Statement::BlowUp(rest.iter().map(|s| s.to_string()).collect()))
        }
        ["blowup", ..] => Err(syntax(line, "expected 'blowup' or 'blowup on <line> ...'")),
        ["line", ..] => {
            let rest = body["line".len()..].trim();
            let (name, class) = rest
                .split_once('=')
                .ok_or_else(|| syntax(line, "expected 'line <name> = <class>'"))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(line, format!("'{name}' is not a line name")));
            }
            Ok(Statement::Line {
                name: name.to_string(),
                class: class.trim().to_string(),
            })
        }
        ["blowdown", name] => Ok(Statement::BlowDown(name.to_string())),
        ["blowdown", ..] => Err(syntax(line, "expected 'blowdown <name>'")),
        ["minimal-model"] => Ok(Statement::MinimalModel),
        ["report"] => Ok(Statement::Report),
        [word, ..] => Err(syntax(line, format!("unknown statement '{word}'"))),
        [] => unreachable!("blank lines are skipped"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineReport {
    pub name: String,
    pub class: String,
    pub square: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub base: String,
    pub blowups: usize,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub canonical: String,
    pub lines: Vec<LineReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub lattice: LatticeReport,
    pub k_squared: i64,
    pub euler: i64,
    pub b2: usize,
    pub signature: (usize, usize),
    pub model: String,
}

impl SurfaceReport {
    pub fn of(surf: &RationalSurface) -> Self {
        let lines = surf
            .lines()
            .map(|(name, class)| LineReport {
                name: name.to_string(),
                class: surf.render_class(class),
                square: surf.intersect(class, class).expect("tracked classes fit the lattice"),
            })
            .collect();
        let sig = surf.signature();
        let topo = surf.topological_model();
        SurfaceReport {
            lattice: LatticeReport {
                base: surf.base().to_string(),
                blowups: surf.blowups(),
                basis: surf.basis_names().to_vec(),
                gram: surf.gram().clone(),
                canonical: surf.render_class(surf.canonical()),
                lines,
            },
            k_squared: surf.k_squared(),
            euler: surf.euler_characteristic_cx(),
            b2: topo.b2,
            signature: (sig.positive, sig.negative),
            model: match topo.reversed_cp2_summands {
                0 => topo.minimal_base.to_string(),
                k => format!("{} # {k} reversed CP2", topo.minimal_base),
            },
        }
    }

    pub fn to_text(&self) -> String {
        let l = &self.lattice;
        let mut out = format!("surface: {} with {} blow-ups\n", l.base, l.blowups);
        out += &format!("basis: {}\n", l.basis.join(" "));
        out += "gram:\n";
        for row in &l.gram {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            out += &format!("  [{} ]\n", cells.join(""));
        }
        out += "lines:\n";
        for line in &l.lines {
            out += &format!(
                "  {} = {}, self-intersection {}\n",
                line.name, line.class, line.square
            );
        }
        out += &format!("K = {}\n", l.canonical);
        out += &format!("K²={}\n", self.k_squared);
        out += &format!("χ={}\n", self.euler);
        out += &format!("b2={}\n", self.b2);
        out += &format!("signature: ({}, {})\n", self.signature.0, self.signature.1);
        out += &format!("model: {}\n", self.model);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub name: String,
    pub class: String,
}

/// Everything a script printed, kept in structured form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScriptOutput {
    pub reports: Vec<SurfaceReport>,
    pub minimal: Option<String>,
    pub steps: Vec<StepReport>,
    #[serde(skip)]
    pub text: String,
}

/// Executes a parsed script.
pub fn run_script(statements: &[(usize, Statement)]) -> Result<ScriptOutput, ScriptError> {
    let mut surf: Option<RationalSurface> = None;
    let mut out = ScriptOutput::default();
    for (line, stmt) in statements {
        let line = *line;
        let picard = |source| ScriptError::Picard { line, source };
        if let Statement::Base(base) = stmt {
            if surf.is_some() {
                return Err(syntax(line, "base may only be given once"));
            }
            surf = Some(make_base(*base));
            continue;
        }
        let current = surf
            .as_ref()
            .ok_or_else(|| syntax(line, "no base surface; start with 'base'"))?;
        match stmt {
            Statement::Base(_) => unreachable!(),
            Statement::BlowUp(through) => {
                let names: Vec<&str> = through.iter().map(String::as_str).collect();
                surf = Some(current.blow_up(&names).map_err(picard)?);
            }
            Statement::Line { name, class } => {
                let class = current.parse_class(class).map_err(picard)?;
                surf = Some(current.define_line(name, class).map_err(picard)?);
            }
            Statement::BlowDown(name) => {
                surf = Some(current.blow_down(name).map_err(picard)?);
            }
            Statement::Report => {
                let report = SurfaceReport::of(current);
                out.text += &report.to_text();
                out.reports.push(report);
            }
            Statement::MinimalModel => {
                let report: ReductionReport = minimal_model(current)
                    .map_err(|source| ScriptError::Minimal { line, source })?;
                out.text += &format!("{report}\n");
                out.minimal = Some(report.final_type.to_string());
                out.steps = report
                    .steps
                    .iter()
                    .map(|s| StepReport {
                        name: s.name.clone(),
                        class: s.rendered.clone(),
                    })
                    .collect();
                surf = Some(report.final_surface);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Result<ScriptOutput, ScriptError> {
        run_script(&parse_script(text)?)
    }

    #[test]
    fn parses_every_statement() {
        let parsed = parse_script(
            "# demo\nbase hirzebruch 3\nblowup\nblowup on S F\nline L = S - E1  # tail\nblowdown L\nminimal-model\nreport\n",
        )
        .unwrap();
        assert_eq!(parsed.len(), 7);
        assert_eq!(parsed[0], (2, Statement::Base(BaseSurface::Hirzebruch(3))));
        assert_eq!(parsed[2].1, Statement::BlowUp(vec!["S".into(), "F".into()]));
        assert_eq!(
            parsed[3].1,
            Statement::Line {
                name: "L".into(),
                class: "S - E1".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_script("base cp2\n\nfrobnicate\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: unknown statement 'frobnicate'");
        let err = run("blowup\n").unwrap_err();
        assert!(err.to_string().starts_with("line 1: no base surface"));
    }

    #[test]
    fn two_point_plane_reduces_to_quadric() {
        let out = run(
            "base cp2\nblowup on H\nblowup on H\nline L = H - E1 - E2\nblowdown L\nminimal-model\n",
        )
        .unwrap();
        assert_eq!(out.minimal.as_deref(), Some("S0"));
        assert!(out.steps.is_empty());
    }

    #[test]
    fn illegal_blowdown_is_reported() {
        let err = run("base cp2\nblowdown H\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: H is a +1 line, not −1");
        assert!(!err.is_internal());
    }

    #[test]
    fn report_lists_lattice_data() {
        let out = run("base hirzebruch 2\nreport\n").unwrap();
        let r = &out.reports[0];
        assert_eq!(r.k_squared, 8);
        assert_eq!(r.b2, 2);
        assert_eq!(r.lattice.lines[0].name, "S");
        assert_eq!(r.lattice.lines[0].square, -2);
    }
}
