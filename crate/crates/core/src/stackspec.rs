//! Scenario files: materials, the two mirror stacks, the gap medium and the
//! run parameters, in a small line-oriented format.
//!
//! ```text
//! # fig1c
//! [material metal]
//! eps_strength = 3
//! eps_resonance = 0
//! mu_strength = 0
//! mu_resonance = 0
//!
//! [material coating]
//! eps_strength = 0.1
//! eps_resonance = 1
//! mu_strength = 0.3
//! mu_resonance = 1
//!
//! [mirror 1]
//! substrate = metal
//!
//! [mirror 2]
//! layer = coating 62.83185307179586
//! substrate = metal
//!
//! [run]
//! T = 0
//! d = 0.01 1000 64 log
//! ```
//!
//! `ideal = electric|magnetic|vacuum` replaces the four oscillator keys.
//! Layers are listed from the gap inward; thicknesses and distances are in
//! units of c/Ω. `[gap] medium = ID` is optional (vacuum otherwise), and so
//! is `[run]`, which may also carry `temperatures = τ₁ τ₂ …` and a single
//! distance `d = VALUE`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::lifshitz::{LifshitzError, PlanarCavity};
use crate::materials::{preset, Preset, ResponseModel};
use crate::reflection::{Layer, MirrorStack};
use crate::scalar::{lit, Real};

/// What went wrong, without the position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    InvalidUtf8,
    Syntax(String),
    UnknownSection(String),
    DuplicateSection(String),
    UnknownKey(String),
    DuplicateKey(String),
    ConflictingKeys(String),
    MissingKey(String),
    MissingSection(String),
    UnknownMaterial(String),
    DuplicateMaterial(String),
    InvalidNumber(String),
    InvalidValue(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidUtf8 => write!(f, "input is not valid UTF-8"),
            Self::Syntax(m) => write!(f, "syntax error: {m}"),
            Self::UnknownSection(s) => write!(f, "unknown section '{s}'"),
            Self::DuplicateSection(s) => write!(f, "duplicate section '{s}'"),
            Self::UnknownKey(k) => write!(f, "unknown key '{k}'"),
            Self::DuplicateKey(k) => write!(f, "duplicate key '{k}'"),
            Self::ConflictingKeys(m) => write!(f, "conflicting keys: {m}"),
            Self::MissingKey(k) => write!(f, "missing required key '{k}'"),
            Self::MissingSection(s) => write!(f, "missing required section '{s}'"),
            Self::UnknownMaterial(id) => write!(f, "unknown material '{id}'"),
            Self::DuplicateMaterial(id) => write!(f, "duplicate material '{id}'"),
            Self::InvalidNumber(t) => write!(f, "invalid number '{t}'"),
            Self::InvalidValue(m) => write!(f, "invalid value: {m}"),
        }
    }
}

/// A diagnostic with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Log,
    Lin,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Log => "log",
            Scale::Lin => "lin",
        })
    }
}

/// Distance grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep<T = f64> {
    pub d_min: T,
    pub d_max: T,
    pub points: usize,
    pub scale: Scale,
}

impl<T: Real> Sweep<T> {
    pub fn single(d: T) -> Self {
        Self {
            d_min: d,
            d_max: d,
            points: 1,
            scale: Scale::Lin,
        }
    }

    /// The grid points in increasing order.
    pub fn distances(&self) -> Vec<T> {
        if self.points == 1 {
            return vec![self.d_min];
        }
        let last: T = lit((self.points - 1) as f64);
        (0..self.points)
            .map(|i| {
                let t = lit::<T>(i as f64) / last;
                if i == 0 {
                    return self.d_min;
                }
                if i + 1 == self.points {
                    return self.d_max;
                }
                match self.scale {
                    Scale::Lin => self.d_min + (self.d_max - self.d_min) * t,
                    Scale::Log => (self.d_min.ln() + (self.d_max.ln() - self.d_min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

impl<T: Real> Default for Sweep<T> {
    fn default() -> Self {
        Self {
            d_min: lit(0.01),
            d_max: lit(1000.0),
            points: 64,
            scale: Scale::Log,
        }
    }
}

/// A mirror by material reference.
#[derive(Clone, Debug, PartialEq)]
pub struct StackSpec<T = f64> {
    /// (material id, thickness), gap side first.
    pub layers: Vec<(String, T)>,
    pub substrate: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<T = f64> {
    pub materials: BTreeMap<String, ResponseModel<T>>,
    pub mirror1: StackSpec<T>,
    pub mirror2: StackSpec<T>,
    /// Gap material id; vacuum when absent.
    pub gap: Option<String>,
    pub temperature: T,
    pub temperatures: Option<Vec<T>>,
    pub sweep: Sweep<T>,
}

/// Failure to turn a parsed scenario into a cavity.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResolveError {
    #[error("unknown material '{0}'")]
    UnknownMaterial(String),
    #[error(transparent)]
    Cavity(#[from] LifshitzError),
    #[error("invalid layer thickness for '{0}'")]
    Thickness(String),
}

impl<T: Real> Scenario<T> {
    fn model(&self, id: &str) -> Result<ResponseModel<T>, ResolveError> {
        self.materials
            .get(id)
            .copied()
            .ok_or_else(|| ResolveError::UnknownMaterial(id.to_string()))
    }

    fn stack(&self, spec: &StackSpec<T>) -> Result<MirrorStack<T>, ResolveError> {
        let layers = spec
            .layers
            .iter()
            .map(|(id, w)| {
                Layer::new(self.model(id)?, *w).map_err(|_| ResolveError::Thickness(id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MirrorStack::new(layers, self.model(&spec.substrate)?))
    }

    pub fn gap_model(&self) -> Result<ResponseModel<T>, ResolveError> {
        match &self.gap {
            Some(id) => self.model(id),
            None => Ok(ResponseModel::Vacuum),
        }
    }

    pub fn cavity(&self) -> Result<PlanarCavity<T>, ResolveError> {
        Ok(PlanarCavity::new(
            self.stack(&self.mirror1)?,
            self.stack(&self.mirror2)?,
            self.gap_model()?,
        )?)
    }

    /// Temperatures to run: the explicit list, or the single `T`.
    pub fn run_temperatures(&self) -> Vec<T> {
        self.temperatures
            .clone()
            .unwrap_or_else(|| vec![self.temperature])
    }

    /// The scenario of a named parameter set, with the default run section.
    pub fn from_preset(which: Preset) -> Self {
        let p = preset::<T>(which);
        let names: &[&str] = match which {
            Preset::Fig1a => &["drude"],
            Preset::Fig1b => &["lefthanded"],
            Preset::Fig1c => &["metal", "coating"],
            _ => &["dielectric", "magnetic"],
        };
        let mut namer = Namer {
            materials: BTreeMap::new(),
            seen: Vec::new(),
            names,
        };
        let mirror1 = namer.stack(&p.mirror1);
        let mirror2 = namer.stack(&p.mirror2);
        let gap = match p.gap {
            ResponseModel::Vacuum => None,
            g => Some(namer.name(g)),
        };
        Self {
            materials: namer.materials,
            mirror1,
            mirror2,
            gap,
            temperature: T::zero(),
            temperatures: None,
            sweep: Sweep::default(),
        }
    }
}

struct Namer<'a, T> {
    materials: BTreeMap<String, ResponseModel<T>>,
    seen: Vec<(ResponseModel<T>, String)>,
    names: &'a [&'a str],
}

impl<T: Real> Namer<'_, T> {
    fn name(&mut self, m: ResponseModel<T>) -> String {
        if let Some((_, id)) = self.seen.iter().find(|(s, _)| *s == m) {
            return id.clone();
        }
        let i = self.seen.len();
        let id = self
            .names
            .get(i)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("mat{}", i + 1));
        self.seen.push((m, id.clone()));
        self.materials.insert(id.clone(), m);
        id
    }

    fn stack(&mut self, s: &MirrorStack<T>) -> StackSpec<T> {
        let layers = s
            .layers
            .iter()
            .map(|l| (self.name(*l.material()), l.thickness()))
            .collect();
        StackSpec {
            layers,
            substrate: self.name(s.substrate),
        }
    }
}

/// Passivity diagnostics. Lorentz–Drude and ideal models are passive by
/// construction, so this is empty for every scenario `parse` accepts.
pub fn validate_passivity<T: Real>(s: &Scenario<T>) -> Vec<String> {
    let mut out = Vec::new();
    for (id, m) in &s.materials {
        if let ResponseModel::LorentzDrude(ld) = m {
            for (name, v) in [
                ("eps_strength", ld.eps_strength()),
                ("eps_resonance", ld.eps_resonance()),
                ("mu_strength", ld.mu_strength()),
                ("mu_resonance", ld.mu_resonance()),
            ] {
                if !(v >= T::zero()) {
                    out.push(format!("material '{id}': {name} = {v} is not passive"));
                }
            }
        }
    }
    out
}

/// Shortest round-trip representation; exponent form outside [1e-4, 1e15).
pub fn format_number<T: Real>(x: T) -> String {
    let a = x.abs();
    if a == T::zero() || (a >= lit(1e-4) && a < lit(1e15)) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn write_model<T: Real>(out: &mut String, m: &ResponseModel<T>) {
    match m {
        ResponseModel::Vacuum => out.push_str("ideal = vacuum\n"),
        ResponseModel::PerfectElectric => out.push_str("ideal = electric\n"),
        ResponseModel::PerfectMagnetic => out.push_str("ideal = magnetic\n"),
        ResponseModel::LorentzDrude(ld) => {
            for (k, v) in [
                ("eps_strength", ld.eps_strength()),
                ("eps_resonance", ld.eps_resonance()),
                ("mu_strength", ld.mu_strength()),
                ("mu_resonance", ld.mu_resonance()),
            ] {
                let _ = writeln!(out, "{k} = {}", format_number(v));
            }
        }
    }
}

fn write_stack<T: Real>(out: &mut String, which: u8, s: &StackSpec<T>) {
    let _ = writeln!(out, "[mirror {which}]");
    for (id, w) in &s.layers {
        let _ = writeln!(out, "layer = {id} {}", format_number(*w));
    }
    let _ = writeln!(out, "substrate = {}\n", s.substrate);
}

/// Canonical text of a scenario; `parse(&serialize(s)) == s`.
pub fn serialize<T: Real>(s: &Scenario<T>) -> String {
    let mut out = String::new();
    for (id, m) in &s.materials {
        let _ = writeln!(out, "[material {id}]");
        write_model(&mut out, m);
        out.push('\n');
    }
    write_stack(&mut out, 1, &s.mirror1);
    write_stack(&mut out, 2, &s.mirror2);
    if let Some(g) = &s.gap {
        let _ = writeln!(out, "[gap]\nmedium = {g}\n");
    }
    out.push_str("[run]\n");
    let _ = writeln!(out, "T = {}", format_number(s.temperature));
    if let Some(list) = &s.temperatures {
        let items: Vec<String> = list.iter().map(|&t| format_number(t)).collect();
        let _ = writeln!(out, "temperatures = {}", items.join(" "));
    }
    let w = &s.sweep;
    let _ = writeln!(
        out,
        "d = {} {} {} {}",
        format_number(w.d_min),
        format_number(w.d_max),
        w.points,
        w.scale
    );
    out
}

/// Parses raw bytes, reporting the position of the first invalid UTF-8
/// sequence.
pub fn parse_bytes<T: Real>(bytes: &[u8]) -> Result<Scenario<T>, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = 1 + valid.iter().filter(|&&b| b == b'\n').count();
            let start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            let prefix = std::str::from_utf8(&valid[start..]).unwrap_or("");
            Err(ParseError {
                line,
                column: prefix.chars().count() + 1,
                kind: ParseErrorKind::InvalidUtf8,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }
}

/// A whitespace-separated token with its position.
#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokens(text: &str, line: usize, first_column: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column, (i, ch)) in (first_column..).zip(text.char_indices()) {
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                out.push(Token {
                    text: &text[s..i],
                    pos: Pos { line, column: c },
                });
            }
        } else if start.is_none() {
            start = Some((i, column));
        }
    }
    if let Some((s, c)) = start {
        out.push(Token {
            text: &text[s..],
            pos: Pos { line, column: c },
        });
    }
    out
}

fn number<T: Real>(tok: Token<'_>) -> Result<T, ParseError> {
    let bad = || tok.pos.err(ParseErrorKind::InvalidNumber(tok.text.to_string()));
    let lower = tok.text.to_ascii_lowercase();
    if lower.contains("inf") || lower.contains("nan") {
        return Err(bad());
    }
    let v: T = tok.text.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn integer(tok: Token<'_>) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| tok.pos.err(ParseErrorKind::InvalidNumber(tok.text.to_string())))
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn identifier(tok: Token<'_>) -> Result<String, ParseError> {
    if is_identifier(tok.text) {
        Ok(tok.text.to_string())
    } else {
        Err(tok.pos.err(ParseErrorKind::Syntax(format!(
            "'{}' is not a valid material id",
            tok.text
        ))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Material,
    Mirror(u8),
    Gap,
    Run,
}

/// A material section being assembled.
struct MaterialDraft<T> {
    id: String,
    header: Pos,
    ideal: Option<(String, Pos)>,
    params: [Option<(T, Pos)>; 4],
    first_param: Option<Pos>,
}

const PARAM_KEYS: [&str; 4] = ["eps_strength", "eps_resonance", "mu_strength", "mu_resonance"];

impl<T: Real> MaterialDraft<T> {
    fn finish(self) -> Result<(String, ResponseModel<T>), ParseError> {
        if let Some((kind, pos)) = &self.ideal {
            if let Some(p) = self.first_param {
                return Err(p.err(ParseErrorKind::ConflictingKeys(
                    "'ideal' cannot be combined with oscillator parameters".to_string(),
                )));
            }
            let model = match kind.as_str() {
                "electric" => ResponseModel::PerfectElectric,
                "magnetic" => ResponseModel::PerfectMagnetic,
                "vacuum" => ResponseModel::Vacuum,
                other => {
                    return Err(pos.err(ParseErrorKind::InvalidValue(format!(
                        "ideal must be electric, magnetic or vacuum, got '{other}'"
                    ))))
                }
            };
            return Ok((self.id, model));
        }
        let value = |i: usize| self.params[i].map_or(T::zero(), |(v, _)| v);
        for (i, key) in PARAM_KEYS.iter().enumerate() {
            if let Some((v, pos)) = self.params[i] {
                if v < T::zero() {
                    return Err(pos.err(ParseErrorKind::InvalidValue(format!(
                        "{key} must be non-negative, got {v}"
                    ))));
                }
            }
        }
        let model = ResponseModel::lorentz_drude(value(0), value(1), value(2), value(3))
            .map_err(|e| self.header.err(ParseErrorKind::InvalidValue(e.to_string())))?;
        Ok((self.id, model))
    }
}

#[derive(Default)]
struct StackDraft<T> {
    header: Option<Pos>,
    layers: Vec<(String, T)>,
    substrate: Option<(String, Pos)>,
}

/// Material references to check once every section is read.
struct Reference {
    id: String,
    pos: Pos,
}

struct Parser<T> {
    materials: BTreeMap<String, ResponseModel<T>>,
    material_pos: BTreeMap<String, Pos>,
    draft: Option<MaterialDraft<T>>,
    mirrors: [StackDraft<T>; 2],
    gap: Option<(String, Pos)>,
    gap_seen: Option<Pos>,
    run_seen: Option<Pos>,
    temperature: Option<(T, Pos)>,
    temperatures: Option<Vec<T>>,
    temperatures_pos: Option<Pos>,
    sweep: Option<(Sweep<T>, Pos)>,
    references: Vec<Reference>,
    section: Option<Section>,
}

/// Parses a scenario file.
pub fn parse<T: Real>(text: &str) -> Result<Scenario<T>, ParseError> {
    let mut p = Parser {
        materials: BTreeMap::new(),
        material_pos: BTreeMap::new(),
        draft: None,
        mirrors: [StackDraft::default(), StackDraft::default()],
        gap: None,
        gap_seen: None,
        run_seen: None,
        temperature: None,
        temperatures: None,
        temperatures_pos: None,
        sweep: None,
        references: Vec::new(),
        section: None,
    };
    let mut last_line = 0;
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        last_line = line;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let lead = content.len() - content.trim_start().len();
        let body = content.trim();
        if body.is_empty() {
            continue;
        }
        let column = content[..lead].chars().count() + 1;
        let pos = Pos { line, column };
        if body.starts_with('[') {
            p.header(body, pos)?;
        } else {
            p.entry(body, pos)?;
        }
    }
    p.finish(Pos {
        line: last_line + 1,
        column: 1,
    })
}

impl<T: Real> Parser<T> {
    fn close_material(&mut self) -> Result<(), ParseError> {
        if let Some(draft) = self.draft.take() {
            let header = draft.header;
            let (id, model) = draft.finish()?;
            if self.materials.insert(id.clone(), model).is_some() {
                return Err(header.err(ParseErrorKind::DuplicateMaterial(id)));
            }
            self.material_pos.insert(id, header);
        }
        Ok(())
    }

    fn header(&mut self, body: &str, pos: Pos) -> Result<(), ParseError> {
        self.close_material()?;
        let inner = match body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            Some(inner) => inner,
            None => {
                return Err(pos.err(ParseErrorKind::Syntax(
                    "section header must end with ']'".to_string(),
                )))
            }
        };
        let toks = tokens(inner, pos.line, pos.column + 1);
        let words: Vec<&str> = toks.iter().map(|t| t.text).collect();
        let section = match words.as_slice() {
            ["material", _] => {
                let id = identifier(toks[1])?;
                if self.materials.contains_key(&id) {
                    return Err(pos.err(ParseErrorKind::DuplicateMaterial(id)));
                }
                self.draft = Some(MaterialDraft {
                    id,
                    header: pos,
                    ideal: None,
                    params: [None; 4],
                    first_param: None,
                });
                Section::Material
            }
            ["mirror", n @ ("1" | "2")] => {
                let which: u8 = if *n == "1" { 1 } else { 2 };
                let slot = &mut self.mirrors[(which - 1) as usize];
                if slot.header.is_some() {
                    return Err(pos.err(ParseErrorKind::DuplicateSection(format!("mirror {which}"))));
                }
                slot.header = Some(pos);
                Section::Mirror(which)
            }
            ["gap"] => {
                if self.gap_seen.replace(pos).is_some() {
                    return Err(pos.err(ParseErrorKind::DuplicateSection("gap".to_string())));
                }
                Section::Gap
            }
            ["run"] => {
                if self.run_seen.replace(pos).is_some() {
                    return Err(pos.err(ParseErrorKind::DuplicateSection("run".to_string())));
                }
                Section::Run
            }
            ["material"] => {
                return Err(pos.err(ParseErrorKind::Syntax("material section needs an id".to_string())))
            }
            _ => return Err(pos.err(ParseErrorKind::UnknownSection(inner.trim().to_string()))),
        };
        self.section = Some(section);
        Ok(())
    }

    fn entry(&mut self, body: &str, pos: Pos) -> Result<(), ParseError> {
        let eq = match body.find('=') {
            Some(i) => i,
            None => {
                return Err(pos.err(ParseErrorKind::Syntax("expected 'key = value'".to_string())))
            }
        };
        let key = body[..eq].trim();
        let value_text = &body[eq + 1..];
        let value_column = pos.column + body[..eq + 1].chars().count();
        let values = tokens(value_text, pos.line, value_column);
        if key.is_empty() {
            return Err(pos.err(ParseErrorKind::Syntax("missing key before '='".to_string())));
        }
        let section = match self.section {
            Some(s) => s,
            None => {
                return Err(pos.err(ParseErrorKind::Syntax(
                    "key outside of any section".to_string(),
                )))
            }
        };
        let end = Pos {
            line: pos.line,
            column: value_column + value_text.chars().count(),
        };
        let expect = |n: usize, what: &str| -> Result<(), ParseError> {
            if values.len() == n {
                Ok(())
            } else {
                let at = values.get(n).map_or(end, |t| t.pos);
                Err(at.err(ParseErrorKind::Syntax(format!("'{key}' expects {what}"))))
            }
        };
        match section {
            Section::Material => {
                let draft = self.draft.as_mut().expect("material section open");
                if key == "ideal" {
                    expect(1, "one of electric, magnetic, vacuum")?;
                    if draft.ideal.is_some() {
                        return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                    }
                    draft.ideal = Some((values[0].text.to_string(), values[0].pos));
                } else if let Some(i) = PARAM_KEYS.iter().position(|k| *k == key) {
                    expect(1, "one number")?;
                    if draft.params[i].is_some() {
                        return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                    }
                    draft.params[i] = Some((number(values[0])?, values[0].pos));
                    draft.first_param.get_or_insert(pos);
                } else {
                    return Err(pos.err(ParseErrorKind::UnknownKey(key.to_string())));
                }
            }
            Section::Mirror(which) => {
                let slot = &mut self.mirrors[(which - 1) as usize];
                match key {
                    "layer" => {
                        expect(2, "a material id and a thickness")?;
                        let id = identifier(values[0])?;
                        let w: T = number(values[1])?;
                        if !(w > T::zero()) {
                            return Err(values[1].pos.err(ParseErrorKind::InvalidValue(format!(
                                "layer thickness must be positive, got {w}"
                            ))));
                        }
                        self.references.push(Reference {
                            id: id.clone(),
                            pos: values[0].pos,
                        });
                        slot.layers.push((id, w));
                    }
                    "substrate" => {
                        expect(1, "a material id")?;
                        if slot.substrate.is_some() {
                            return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                        }
                        let id = identifier(values[0])?;
                        self.references.push(Reference {
                            id: id.clone(),
                            pos: values[0].pos,
                        });
                        slot.substrate = Some((id, values[0].pos));
                    }
                    _ => return Err(pos.err(ParseErrorKind::UnknownKey(key.to_string()))),
                }
            }
            Section::Gap => {
                if key != "medium" {
                    return Err(pos.err(ParseErrorKind::UnknownKey(key.to_string())));
                }
                expect(1, "a material id")?;
                if self.gap.is_some() {
                    return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                }
                let id = identifier(values[0])?;
                self.references.push(Reference {
                    id: id.clone(),
                    pos: values[0].pos,
                });
                self.gap = Some((id, values[0].pos));
            }
            Section::Run => match key {
                "T" => {
                    expect(1, "one number")?;
                    if self.temperature.is_some() {
                        return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                    }
                    let t: T = number(values[0])?;
                    if t < T::zero() {
                        return Err(values[0].pos.err(ParseErrorKind::InvalidValue(format!(
                            "temperature must be non-negative, got {t}"
                        ))));
                    }
                    self.temperature = Some((t, pos));
                }
                "temperatures" => {
                    if self.temperatures.is_some() {
                        return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                    }
                    if values.is_empty() {
                        return Err(end.err(ParseErrorKind::Syntax(
                            "'temperatures' expects at least one number".to_string(),
                        )));
                    }
                    let mut list = Vec::with_capacity(values.len());
                    for tok in &values {
                        let t: T = number(*tok)?;
                        if t < T::zero() {
                            return Err(tok.pos.err(ParseErrorKind::InvalidValue(format!(
                                "temperature must be non-negative, got {t}"
                            ))));
                        }
                        list.push(t);
                    }
                    self.temperatures = Some(list);
                    self.temperatures_pos = Some(pos);
                }
                "d" => {
                    if self.sweep.is_some() {
                        return Err(pos.err(ParseErrorKind::DuplicateKey(key.to_string())));
                    }
                    let sweep = match values.len() {
                        1 => Sweep::single(number(values[0])?),
                        4 => {
                            let scale = match values[3].text {
                                "log" => Scale::Log,
                                "lin" => Scale::Lin,
                                other => {
                                    return Err(values[3].pos.err(ParseErrorKind::InvalidValue(
                                        format!("scale must be log or lin, got '{other}'"),
                                    )))
                                }
                            };
                            let points = integer(values[2])?;
                            if points == 0 {
                                return Err(values[2].pos.err(ParseErrorKind::InvalidValue(
                                    "points must be at least 1".to_string(),
                                )));
                            }
                            Sweep {
                                d_min: number(values[0])?,
                                d_max: number(values[1])?,
                                points,
                                scale,
                            }
                        }
                        _ => {
                            let at = values.get(1).map_or(end, |t| t.pos);
                            return Err(at.err(ParseErrorKind::Syntax(
                                "'d' expects VALUE or MIN MAX POINTS log|lin".to_string(),
                            )));
                        }
                    };
                    if !(sweep.d_min > T::zero()) {
                        return Err(values[0].pos.err(ParseErrorKind::InvalidValue(
                            "distances must be positive".to_string(),
                        )));
                    }
                    if sweep.d_max < sweep.d_min {
                        return Err(values[1].pos.err(ParseErrorKind::InvalidValue(
                            "d max must not be below d min".to_string(),
                        )));
                    }
                    if sweep.points == 1 && sweep.d_max != sweep.d_min {
                        return Err(values[2].pos.err(ParseErrorKind::InvalidValue(
                            "a single point needs d min = d max".to_string(),
                        )));
                    }
                    self.sweep = Some((sweep, pos));
                }
                _ => return Err(pos.err(ParseErrorKind::UnknownKey(key.to_string()))),
            },
        }
        Ok(())
    }

    fn finish(mut self, eof: Pos) -> Result<Scenario<T>, ParseError> {
        self.close_material()?;
        for r in &self.references {
            if !self.materials.contains_key(&r.id) {
                return Err(r.pos.err(ParseErrorKind::UnknownMaterial(r.id.clone())));
            }
        }
        let mut stacks = Vec::with_capacity(2);
        for (i, slot) in self.mirrors.iter_mut().enumerate() {
            let name = format!("mirror {}", i + 1);
            let header = match slot.header {
                Some(h) => h,
                None => return Err(eof.err(ParseErrorKind::MissingSection(name))),
            };
            let substrate = match slot.substrate.take() {
                Some((id, _)) => id,
                None => return Err(header.err(ParseErrorKind::MissingKey(format!("{name}: substrate")))),
            };
            stacks.push(StackSpec {
                layers: std::mem::take(&mut slot.layers),
                substrate,
            });
        }
        if let Some(pos) = self.gap_seen {
            if self.gap.is_none() {
                return Err(pos.err(ParseErrorKind::MissingKey("gap: medium".to_string())));
            }
        }
        if let Some((id, pos)) = &self.gap {
            let model = self.materials[id];
            if PlanarCavity::new(
                MirrorStack::homogeneous(ResponseModel::Vacuum),
                MirrorStack::homogeneous(ResponseModel::Vacuum),
                model,
            )
            .is_err()
            {
                return Err(pos.err(ParseErrorKind::InvalidValue(format!(
                    "material '{id}' cannot fill the gap (ideal mirror or double static pole)"
                ))));
            }
        }
        let mirror2 = stacks.pop().expect("two stacks");
        let mirror1 = stacks.pop().expect("two stacks");
        Ok(Scenario {
            materials: self.materials,
            mirror1,
            mirror2,
            gap: self.gap.map(|(id, _)| id),
            temperature: self.temperature.map_or(T::zero(), |(t, _)| t),
            temperatures: self.temperatures,
            sweep: self.sweep.map_or_else(Sweep::default, |(s, _)| s),
        })
    }
}
