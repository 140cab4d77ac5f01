//! Run configuration in a DL-Learner-like `.conf` format.
//!
//! ```text
//! // comment            # also a comment
//! ks.file = "university.ofn"
//! lp.positiveExamples = { ":alice", ":bob" }
//! alg.type = "fm"
//! alg.nbTrees = 2
//! alg.stopOnPerfect = true
//! ```
//!
//! One `key = value` per statement. Values are double-quoted strings,
//! numbers, `true`/`false`, bare words, or `{ ... }` lists of those; lists
//! may span lines and allow a trailing comma. Relative paths resolve against
//! the directory of the config file.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::heuristics::HeuristicKind;
use crate::search::Algorithm;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("{line}: bad value for `{key}`: {message}")]
    BadValue {
        key: String,
        line: usize,
        message: String,
    },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct WeightOverrides {
    pub start_bonus: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub f1_hi: Option<f64>,
    pub f1_lo: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub ontology_path: PathBuf,
    pub positives: Vec<String>,
    pub negatives: Vec<String>,
    pub algorithm: Algorithm,
    pub heuristic: HeuristicKind,
    pub nb_trees: usize,
    pub max_nodes_added_per_tree: usize,
    pub max_length: usize,
    pub max_exec_seconds: f64,
    pub max_refinements: usize,
    pub start_classes: Vec<String>,
    pub seed: u64,
    pub stop_on_perfect: bool,
    /// Percentage of positives a hypothesis may miss.
    pub noise_percentage: f64,
    pub weights: WeightOverrides,
    pub trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = crate::search::FmParams::default();
        RunConfig {
            ontology_path: PathBuf::new(),
            positives: Vec::new(),
            negatives: Vec::new(),
            algorithm: Algorithm::Fm,
            heuristic: HeuristicKind::Ht1,
            nb_trees: p.nb_trees,
            max_nodes_added_per_tree: p.max_nodes_added_per_tree,
            max_length: p.max_length,
            max_exec_seconds: p.max_exec_ms as f64 / 1000.0,
            max_refinements: p.max_refinements,
            start_classes: Vec::new(),
            seed: 0,
            stop_on_perfect: false,
            noise_percentage: 0.0,
            weights: WeightOverrides::default(),
            trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Str(String),
    Word(String),
    List(Vec<Value>),
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            chars: text.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    /// Skips whitespace and comments. A `/` not followed by `/` is an error.
    fn skip_trivia(&mut self) -> Result<(), ConfigError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => self.skip_line(),
                Some('/') => {
                    let mut ahead = self.chars.clone();
                    ahead.next();
                    if ahead.next().map(|(_, c)| c) == Some('/') {
                        self.skip_line();
                    } else {
                        return self.error("unexpected `/`");
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.bump() {
            if c == '\n' {
                break;
            }
        }
    }

    fn word(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '.' | '_' | '-' | '+' | ':' | '<' | '>') {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn string(&mut self) -> Result<String, ConfigError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return self.error("unterminated string"),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => out.push(c),
                    _ => return self.error("bad escape in string"),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn value(&mut self) -> Result<Value, ConfigError> {
        self.skip_trivia()?;
        match self.peek() {
            Some('"') => Ok(Value::Str(self.string()?)),
            Some('{') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia()?;
                    if self.peek() == Some('}') {
                        self.bump();
                        return Ok(Value::List(items));
                    }
                    match self.value()? {
                        Value::List(_) => return self.error("nested lists are not supported"),
                        v => items.push(v),
                    }
                    self.skip_trivia()?;
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some('}') => {}
                        None => return self.error("unterminated list"),
                        _ => return self.error("expected `,` or `}`"),
                    }
                }
            }
            None => self.error("expected a value"),
            _ => {
                let w = self.word();
                if w.is_empty() {
                    self.error("expected a value")
                } else {
                    Ok(Value::Word(w))
                }
            }
        }
    }
}

fn parse_statements(text: &str) -> Result<Vec<(String, Value, usize)>, ConfigError> {
    let mut s = Scanner::new(text);
    let mut out = Vec::new();
    loop {
        s.skip_trivia()?;
        if s.peek().is_none() {
            return Ok(out);
        }
        let line = s.line;
        let key = s.word();
        if key.is_empty() {
            return s.error("expected a key");
        }
        s.skip_trivia()?;
        if s.peek() != Some('=') {
            return s.error(format!("expected `=` after `{key}`"));
        }
        s.bump();
        let value = s.value()?;
        out.push((key, value, line));
    }
}

struct Field<'a> {
    key: &'a str,
    line: usize,
    value: Value,
}

impl Field<'_> {
    fn bad<T>(&self, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::BadValue {
            key: self.key.to_string(),
            line: self.line,
            message: message.into(),
        })
    }

    fn text(&self) -> Result<String, ConfigError> {
        match &self.value {
            Value::Str(s) | Value::Word(s) => Ok(s.clone()),
            Value::List(_) => self.bad("expected a single value"),
        }
    }

    fn list(&self) -> Result<Vec<String>, ConfigError> {
        match &self.value {
            Value::List(items) => Ok(items
                .iter()
                .map(|v| match v {
                    Value::Str(s) | Value::Word(s) => s.clone(),
                    Value::List(_) => unreachable!("nested lists are rejected by the parser"),
                })
                .collect()),
            _ => self.bad("expected a `{ ... }` list"),
        }
    }

    fn parse<T: std::str::FromStr>(&self) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        let t = self.text()?;
        t.parse().or_else(|e: T::Err| self.bad(e.to_string()))
    }

    fn positive(&self) -> Result<usize, ConfigError> {
        let n: usize = self.parse()?;
        if n == 0 {
            return self.bad("must be positive");
        }
        Ok(n)
    }
}

/// Parses config text; relative paths resolve against `base_dir`.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut have_file = false;
    for (key, value, line) in parse_statements(text)? {
        let f = Field {
            key: &key,
            line,
            value,
        };
        let w = &mut cfg.weights;
        match key.as_str() {
            "ks.file" => {
                cfg.ontology_path = base_dir.join(f.text()?);
                have_file = true;
            }
            "lp.positiveExamples" => cfg.positives = f.list()?,
            "lp.negativeExamples" => cfg.negatives = f.list()?,
            "alg.type" => {
                cfg.algorithm = match f.text()?.to_ascii_lowercase().as_str() {
                    "fm" | "fma" => Algorithm::Fm,
                    "celoe" => Algorithm::Celoe,
                    other => return f.bad(format!("unknown algorithm `{other}`")),
                }
            }
            "alg.heuristic" => cfg.heuristic = f.parse()?,
            "alg.nbTrees" => cfg.nb_trees = f.positive()?,
            "alg.maxNodesAddedPerTree" => cfg.max_nodes_added_per_tree = f.positive()?,
            "alg.maxLength" => cfg.max_length = f.positive()?,
            "alg.maxExecutionTimeSeconds" => {
                cfg.max_exec_seconds = f.parse()?;
                if cfg.max_exec_seconds.is_nan() || cfg.max_exec_seconds <= 0.0 {
                    return f.bad("must be positive");
                }
            }
            "alg.maxRefinements" => cfg.max_refinements = f.parse()?,
            "alg.startClasses" => cfg.start_classes = f.list()?,
            "alg.seed" => cfg.seed = f.parse()?,
            "alg.stopOnPerfect" => cfg.stop_on_perfect = f.parse()?,
            "alg.noisePercentage" => {
                cfg.noise_percentage = f.parse()?;
                if !(0.0..=100.0).contains(&cfg.noise_percentage) {
                    return f.bad("must be within 0..100");
                }
            }
            "h.startBonus" => w.start_bonus = Some(f.parse()?),
            "h.beta" => w.beta = Some(f.parse()?),
            "h.gamma" => w.gamma = Some(f.parse()?),
            "h.delta" => w.delta = Some(f.parse()?),
            "h.epsilon" => w.epsilon = Some(f.parse()?),
            "h.alpha" => w.alpha = Some(f.parse()?),
            "h.f1Hi" => w.f1_hi = Some(f.parse()?),
            "h.f1Lo" => w.f1_lo = Some(f.parse()?),
            _ => return Err(ConfigError::UnknownKey { key, line }),
        }
    }
    if !have_file {
        return Err(ConfigError::Missing("ks.file"));
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config(&text, base)
}
