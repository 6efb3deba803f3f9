//! Command front end for `surfclass`.
//!
//! Every command produces an [`Output`] holding both the human text and a
//! JSON document with the same numbers; `main` picks one.

pub mod script;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use surfclass::algebra::{connected_sum_words, decompose};
use surfclass::rewrite::{normalize, parse_trace, replay, MoveTrace};
use surfclass::word::{
    canonical_word, glue_polygons, parse_word, render_word, validate, InvariantViolation,
    PolygonSet, PolygonSetError, SurfaceType, ValidatedWord, WordError,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "surfclass", version, about = "Classify surfaces from polygon words and rational surfaces from blow-up scripts")]
pub struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type, Euler characteristic and canonical form of a word.
    Classify { word: String },
    /// Rewrite a word to canonical form.
    Normalize {
        word: String,
        /// Also print the move certificate; the output is itself a trace file.
        #[arg(long)]
        trace: bool,
    },
    /// Connected sum of two words.
    Sum { first: String, second: String },
    /// Glue a file of polygons (one word per line) into a single word.
    Glue { file: PathBuf },
    /// Replay a trace file against a word.
    Replay { word: String, trace: PathBuf },
    /// Run a rational surface script.
    Rational { script: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad user input.
    #[error("{0}")]
    Input(String),
    /// The library contradicted itself, or a replayed certificate broke.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<InvariantViolation> for CliError {
    fn from(e: InvariantViolation) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Classify { word } => classify(word),
        Command::Normalize { word, trace } => normalize_cmd(word, *trace),
        Command::Sum { first, second } => sum(first, second),
        Command::Glue { file } => glue(&read(file)?),
        Command::Replay { word, trace } => replay_cmd(word, &read(trace)?),
        Command::Rational { script } => rational(&read(script)?),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Parses and validates a word, with a caret under the offending column on
/// syntax errors.
pub fn read_word(text: &str) -> Result<ValidatedWord, CliError> {
    let word = parse_word(text).map_err(|e| {
        let pad = " ".repeat(e.column.saturating_sub(1));
        CliError::Input(format!("{e}\n  {text}\n  {pad}^"))
    })?;
    validate(word).map_err(|e: WordError| CliError::Input(e.to_string()))
}

#[derive(Serialize)]
struct TypeFields {
    #[serde(rename = "type")]
    name: String,
    genus: u32,
    crosscaps: u32,
    euler: i64,
    canonical: String,
}

impl TypeFields {
    fn of(t: SurfaceType) -> Self {
        TypeFields {
            name: t.to_string(),
            genus: t.genus(),
            crosscaps: t.crosscaps(),
            euler: t.euler(),
            canonical: render_word(&canonical_word(t)),
        }
    }

    fn to_text(&self, t: SurfaceType) -> String {
        format!(
            "{}, χ={}\norientable: {}\ngenus: {}\ncross-caps: {}\ncanonical: {}\ndecomposition: {}\n",
            self.name,
            self.euler,
            if t.is_orientable() { "yes" } else { "no" },
            self.genus,
            self.crosscaps,
            self.canonical,
            decompose(t),
        )
    }
}

fn type_output(t: SurfaceType, extra: Value) -> Output {
    let fields = TypeFields::of(t);
    let mut json = serde_json::to_value(&fields).expect("fields serialize");
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    Output {
        text: fields.to_text(t),
        json,
    }
}

fn classify_word(word: &ValidatedWord) -> Result<SurfaceType, CliError> {
    let by_moves = normalize(word)?.surface_type;
    let by_invariants = word.classify_by_invariants()?;
    if by_moves != by_invariants {
        return Err(CliError::Internal(format!(
            "normalizer gives {by_moves} but invariants give {by_invariants}"
        )));
    }
    Ok(by_moves)
}

pub fn classify(text: &str) -> Result<Output, CliError> {
    let word = read_word(text)?;
    Ok(type_output(classify_word(&word)?, json!({})))
}

pub fn normalize_cmd(text: &str, with_trace: bool) -> Result<Output, CliError> {
    let word = read_word(text)?;
    let result = normalize(&word)?;
    let words = result
        .trace
        .intermediates()
        .map_err(|e| CliError::Internal(format!("certificate does not replay: {e}")))?;
    let steps: Vec<Value> = result
        .trace
        .steps
        .iter()
        .zip(&words[1..])
        .map(|(m, w)| json!({ "move": m.to_string(), "word": w.to_string() }))
        .collect();
    let mut out = type_output(
        result.surface_type,
        json!({ "moves": steps.len(), "trace": steps }),
    );
    out.text += &format!("moves: {}\n", result.trace.steps.len());
    if with_trace {
        // every non-move line is a comment, so the output replays as is
        let mut text: String = out.text.lines().map(|l| format!("# {l}\n")).collect();
        text += &format!("# start: {word}\n");
        for (m, w) in result.trace.steps.iter().zip(&words[1..]) {
            text += &format!("{m}\n# {w}\n");
        }
        out.text = text;
    }
    Ok(out)
}

pub fn sum(first: &str, second: &str) -> Result<Output, CliError> {
    let a = read_word(first)?;
    let b = read_word(second)?;
    let joined = connected_sum_words(&a, &b);
    let t = classify_word(&joined)?;
    let rendered = render_word(&joined);
    let mut out = type_output(t, json!({ "word": rendered }));
    out.text = format!("word: {rendered}\n{}", out.text);
    Ok(out)
}

fn glue_error(e: PolygonSetError) -> CliError {
    CliError::Input(e.to_string())
}

pub fn glue(text: &str) -> Result<Output, CliError> {
    let set = PolygonSet::parse(text).map_err(glue_error)?;
    let merged = glue_polygons(&set).map_err(glue_error)?;
    if merged.euler_characteristic() != set.euler_characteristic()
        || merged.is_orientable() != set.is_orientable()
    {
        return Err(CliError::Internal(
            "gluing changed the invariants of the complex".into(),
        ));
    }
    let t = classify_word(&merged)?;
    let rendered = render_word(&merged);
    let mut out = type_output(
        t,
        json!({ "polygons": set.polygons().len(), "word": rendered }),
    );
    out.text = format!(
        "polygons: {}\nword: {rendered}\n{}",
        set.polygons().len(),
        out.text
    );
    Ok(out)
}

pub fn replay_cmd(text: &str, trace_text: &str) -> Result<Output, CliError> {
    let word = read_word(text)?;
    let steps = parse_trace(trace_text).map_err(|e| CliError::Input(e.to_string()))?;
    let trace = MoveTrace {
        initial: word.clone(),
        steps,
    };
    let end = replay(&trace).map_err(|e| CliError::Internal(format!("replay failed at {e}")))?;
    let t = classify_word(&word)?;
    let canonical = end.letters() == canonical_word(t).letters();
    let rendered = render_word(&end);
    let mut out = type_output(
        t,
        json!({ "moves": trace.steps.len(), "final": rendered, "is_canonical": canonical }),
    );
    out.text = format!(
        "moves: {}\nfinal: {rendered}\n{}\n{}",
        trace.steps.len(),
        if canonical {
            "final word is the canonical form"
        } else {
            "final word is not the canonical form"
        },
        out.text
    );
    Ok(out)
}

pub fn rational(text: &str) -> Result<Output, CliError> {
    let wrap = |e: script::ScriptError| {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    };
    let statements = script::parse_script(text).map_err(wrap)?;
    let out = script::run_script(&statements).map_err(wrap)?;
    let last = out.reports.last();
    let json = json!({
        "lattice": last.map(|r| &r.lattice),
        "k_squared": last.map(|r| r.k_squared),
        "euler": last.map(|r| r.euler),
        "b2": last.map(|r| r.b2),
        "signature": last.map(|r| r.signature),
        "model": last.map(|r| &r.model),
        "minimal": out.minimal,
        "steps": out.steps,
        "reports": out.reports,
    });
    Ok(Output {
        text: out.text,
        json,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input(String::new()).exit_code(), 1);
        assert_eq!(CliError::Internal(String::new()).exit_code(), 2);
    }

    #[test]
    fn caret_points_at_bad_column() {
        let err = read_word("a b ^ c").unwrap_err();
        let text = err.to_string();
        let caret = text.lines().last().unwrap();
        assert_eq!(caret.find('^'), Some(2 + 4));
    }

    #[test]
    fn classify_json_matches_text() {
        let out = classify("a b a' b'").unwrap();
        assert!(out.text.starts_with("orientable genus 1 (torus), χ=0\n"));
        assert_eq!(out.json["genus"], 1);
        assert_eq!(out.json["euler"], 0);
        assert_eq!(out.json["canonical"], "a1 b1 a1' b1'");
    }

    #[test]
    fn trace_output_replays() {
        let out = normalize_cmd("aabb", true).unwrap();
        let back = replay_cmd("aabb", &out.text).unwrap();
        assert_eq!(back.json["is_canonical"], true);
    }

    #[test]
    fn broken_trace_is_internal() {
        let err = replay_cmd("aabb", "cancel 0\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = replay_cmd("aabb", "dance 3\n").unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
