//! Line-oriented text format for machines, isometry assignments, and
//! structures, with full validation at load time.
//!
//! ```text
//! mealy flip              # or: async <name>
//!   start q
//!   q 0 -> q / 1
//!   q 1 -> q / 0
//! end
//!
//! wfun wmix selfsimilar window 1
//!   0 -> id
//!   1 -> flip
//! end
//!
//! wfun wlev leveled
//!   level 1 window 1 : 0 -> flip , 1 -> flip
//!   tail window 1 : 0 -> id , 1 -> id
//! end
//!
//! structure D = wmix
//! ```
//!
//! The built-in isometry `id` is always available. Every machine named
//! by a table must act as a boundary isometry; tables must be total;
//! names are unique per kind. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::{check_isometry, MachineKind, Transducer};
use crate::dilatation::{DilatationStructure, IsometryLibrary, WFunction, WTable};
use crate::words::{FiniteWord, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkspaceError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub machines: BTreeMap<String, Transducer>,
    pub wfuns: BTreeMap<String, WFunction>,
    pub structures: BTreeMap<String, DilatationStructure>,
}

impl Workspace {
    /// The named machine, including the built-in `id`.
    pub fn machine(&self, name: &str) -> Option<Transducer> {
        if name == "id" && !self.machines.contains_key("id") {
            return Some(Transducer::identity());
        }
        self.machines.get(name).cloned()
    }
}

struct Cursor<'a> {
    line_no: usize,
    line: &'a str,
    tokens: Vec<(usize, &'a str)>, // (column, token)
    at: usize,
}

impl<'a> Cursor<'a> {
    fn new(line_no: usize, line: &'a str) -> Cursor<'a> {
        let mut tokens = Vec::new();
        let mut col = 0;
        for (i, c) in line.char_indices() {
            if c.is_whitespace() {
                continue;
            }
            if col <= i {
                // start of a token
                let rest = &line[i..];
                let end = rest
                    .find(char::is_whitespace)
                    .map(|e| i + e)
                    .unwrap_or(line.len());
                tokens.push((i + 1, &line[i..end]));
                col = end + 1;
            }
        }
        Cursor {
            line_no,
            line,
            tokens,
            at: 0,
        }
    }

    fn err(&self, col: usize, msg: impl ToString) -> WorkspaceError {
        WorkspaceError::Parse {
            line: self.line_no,
            col,
            msg: msg.to_string(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), WorkspaceError> {
        if self.at < self.tokens.len() {
            self.at += 1;
            Ok(self.tokens[self.at - 1])
        } else {
            Err(self.err(self.line.len() + 1, format!("expected {what}")))
        }
    }

    fn expect(&mut self, literal: &str) -> Result<(), WorkspaceError> {
        let (col, tok) = self.next(&format!("`{literal}`"))?;
        if tok == literal {
            Ok(())
        } else {
            Err(self.err(col, format!("expected `{literal}`, found `{tok}`")))
        }
    }

    fn done(&self) -> Result<(), WorkspaceError> {
        if self.at == self.tokens.len() {
            Ok(())
        } else {
            let (col, tok) = self.tokens[self.at];
            Err(self.err(col, format!("unexpected `{tok}`")))
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, WorkspaceError> {
        let (col, tok) = self.next(what)?;
        tok.parse()
            .map_err(|_| self.err(col, format!("expected {what}, found `{tok}`")))
    }

    fn letter(&mut self) -> Result<Letter, WorkspaceError> {
        let (col, tok) = self.next("a bit")?;
        if tok.len() == 1 {
            if let Some(a) = Letter::from_char(tok.chars().next().unwrap()) {
                return Ok(a);
            }
        }
        Err(self.err(col, format!("expected a bit, found `{tok}`")))
    }

    fn bits(&mut self, what: &str) -> Result<(usize, FiniteWord), WorkspaceError> {
        let (col, tok) = self.next(what)?;
        FiniteWord::from_bits(tok)
            .map(|w| (col, w))
            .map_err(|_| self.err(col, format!("expected {what}, found `{tok}`")))
    }
}

fn validation(msg: impl ToString) -> WorkspaceError {
    WorkspaceError::Validation(msg.to_string())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_cursor(&mut self) -> Option<Cursor<'a>> {
        for (i, line) in self.inner.by_ref() {
            let meat = line.trim();
            if meat.is_empty() || meat.starts_with('#') {
                continue;
            }
            return Some(Cursor::new(i + 1, line));
        }
        None
    }
}

pub fn parse_workspace(text: &str) -> Result<Workspace, WorkspaceError> {
    let mut ws = Workspace::default();
    let mut structure_decls: Vec<(String, String)> = Vec::new();
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    while let Some(mut cur) = lines.next_cursor() {
        let (col, head) = cur.next("a declaration")?;
        match head {
            "mealy" | "async" => {
                let kind = if head == "mealy" {
                    MachineKind::Mealy
                } else {
                    MachineKind::Async
                };
                let (ncol, name) = cur.next("a machine name")?;
                cur.done()?;
                if name == "id" || ws.machines.contains_key(name) {
                    return Err(cur.err(ncol, format!("machine `{name}` already defined")));
                }
                let m = parse_machine(name, kind, &mut lines)?;
                ws.machines.insert(name.to_string(), m);
            }
            "wfun" => {
                let (ncol, name) = cur.next("a name")?;
                if ws.wfuns.contains_key(name) {
                    return Err(cur.err(ncol, format!("wfun `{name}` already defined")));
                }
                let (kcol, wkind) = cur.next("`selfsimilar` or `leveled`")?;
                let wfun = match wkind {
                    "selfsimilar" => {
                        cur.expect("window")?;
                        let window = cur.number("a window size")?;
                        cur.done()?;
                        WFunction::SelfSimilar(parse_selfsimilar_table(window, &mut lines)?)
                    }
                    "leveled" => {
                        cur.done()?;
                        parse_leveled(&mut lines)?
                    }
                    other => {
                        return Err(cur.err(
                            kcol,
                            format!("expected `selfsimilar` or `leveled`, found `{other}`"),
                        ))
                    }
                };
                ws.wfuns.insert(name.to_string(), wfun);
            }
            "structure" => {
                let (_, name) = cur.next("a name")?;
                cur.expect("=")?;
                let (_, wname) = cur.next("a wfun name")?;
                cur.done()?;
                structure_decls.push((name.to_string(), wname.to_string()));
            }
            other => {
                return Err(cur.err(
                    col,
                    format!("expected `mealy`, `async`, `wfun` or `structure`, found `{other}`"),
                ))
            }
        }
    }
    // Resolve structures last so forward references work.
    for (name, wname) in structure_decls {
        if ws.structures.contains_key(&name) {
            return Err(validation(format!("structure `{name}` already defined")));
        }
        let wfun = ws
            .wfuns
            .get(&wname)
            .ok_or_else(|| validation(format!("structure `{name}` uses unknown wfun `{wname}`")))?
            .clone();
        let library = build_library(&ws, &wfun)?;
        let d = DilatationStructure::new(&name, wfun, library)
            .map_err(|e| validation(format!("structure `{name}`: {e}")))?;
        ws.structures.insert(name, d);
    }
    Ok(ws)
}

/// Library containing `id` plus every machine the assignment names,
/// each verified to act as an isometry.
fn build_library(ws: &Workspace, wfun: &WFunction) -> Result<IsometryLibrary, WorkspaceError> {
    let mut lib = IsometryLibrary::with_identity();
    let mut tables: Vec<&WTable> = Vec::new();
    match wfun {
        WFunction::SelfSimilar(t) => tables.push(t),
        WFunction::Leveled { levels, tail } => {
            tables.extend(levels.iter());
            tables.push(tail);
        }
    }
    for t in tables {
        for iso in t.entries().values() {
            if lib.get(iso).is_some() {
                continue;
            }
            let m = ws
                .machine(iso)
                .ok_or_else(|| validation(format!("table names unknown isometry `{iso}`")))?;
            let report = check_isometry(&m);
            if !report.pass {
                return Err(validation(format!(
                    "machine `{iso}` is not an isometry: {}",
                    report.witness.unwrap_or_default()
                )));
            }
            lib.insert(m).map_err(|e| validation(e.to_string()))?;
        }
    }
    Ok(lib)
}

fn parse_machine(
    name: &str,
    kind: MachineKind,
    lines: &mut Lines<'_>,
) -> Result<Transducer, WorkspaceError> {
    let mut start: Option<String> = None;
    let mut rows: Vec<(String, Letter, String, FiniteWord)> = Vec::new();
    let mut seen: BTreeMap<(String, Letter), usize> = BTreeMap::new();
    loop {
        let Some(mut cur) = lines.next_cursor() else {
            return Err(validation(format!(
                "machine `{name}`: missing `end`"
            )));
        };
        let (col, head) = cur.next("a row")?;
        match head {
            "end" => {
                cur.done()?;
                break;
            }
            "start" => {
                let (scol, s) = cur.next("a state name")?;
                cur.done()?;
                if start.replace(s.to_string()).is_some() {
                    return Err(cur.err(scol, "duplicate `start`"));
                }
            }
            src => {
                let a = cur.letter()?;
                cur.expect("->")?;
                let (_, dst) = cur.next("a state name")?;
                cur.expect("/")?;
                let (ocol, otok) = cur.next("an output")?;
                cur.done()?;
                let out = if otok == "e" {
                    if kind == MachineKind::Mealy {
                        return Err(cur.err(
                            ocol,
                            "letter-to-letter machines cannot emit the empty word",
                        ));
                    }
                    FiniteWord::empty()
                } else {
                    FiniteWord::from_bits(otok).map_err(|_| {
                        cur.err(ocol, format!("expected an output word, found `{otok}`"))
                    })?
                };
                if kind == MachineKind::Mealy && out.len() != 1 {
                    return Err(cur.err(ocol, "letter-to-letter rows emit exactly one bit"));
                }
                if seen.insert((src.to_string(), a), cur.line_no).is_some() {
                    return Err(cur.err(col, format!("duplicate row for state `{src}` on {a}")));
                }
                rows.push((src.to_string(), a, dst.to_string(), out));
            }
        }
    }
    let start =
        start.ok_or_else(|| validation(format!("machine `{name}`: missing `start`")))?;
    Transducer::new(name, kind, &start, &rows).map_err(|e| validation(e.to_string()))
}

fn insert_table_row(
    entries: &mut BTreeMap<FiniteWord, String>,
    window: usize,
    col: usize,
    key: FiniteWord,
    iso: &str,
    cur: &Cursor<'_>,
) -> Result<(), WorkspaceError> {
    if key.len() != window {
        return Err(cur.err(col, format!("key `{key}` does not match window {window}")));
    }
    if entries.insert(key.clone(), iso.to_string()).is_some() {
        return Err(cur.err(col, format!("duplicate key `{key}`")));
    }
    Ok(())
}

fn parse_selfsimilar_table(
    window: usize,
    lines: &mut Lines<'_>,
) -> Result<WTable, WorkspaceError> {
    let mut entries = BTreeMap::new();
    loop {
        let Some(mut cur) = lines.next_cursor() else {
            return Err(validation("wfun: missing `end`"));
        };
        if cur.tokens.len() == 1 && cur.tokens[0].1 == "end" {
            break;
        }
        let (col, key) = cur.bits("a table key")?;
        cur.expect("->")?;
        let (_, iso) = cur.next("an isometry name")?;
        cur.done()?;
        insert_table_row(&mut entries, window, col, key, iso, &cur)?;
    }
    WTable::new(window, entries).map_err(|e| validation(e.to_string()))
}

/// Parses `<bits> -> <iso> , ...` starting at the cursor's position.
fn parse_inline_table(cur: &mut Cursor<'_>, window: usize) -> Result<WTable, WorkspaceError> {
    let mut entries = BTreeMap::new();
    loop {
        let (col, key) = cur.bits("a table key")?;
        cur.expect("->")?;
        let (_, iso) = cur.next("an isometry name")?;
        insert_table_row(&mut entries, window, col, key, iso, cur)?;
        if cur.at == cur.tokens.len() {
            break;
        }
        cur.expect(",")?;
    }
    WTable::new(window, entries).map_err(|e| validation(e.to_string()))
}

fn parse_leveled(lines: &mut Lines<'_>) -> Result<WFunction, WorkspaceError> {
    let mut levels: Vec<(usize, WTable)> = Vec::new();
    let mut tail: Option<WTable> = None;
    loop {
        let Some(mut cur) = lines.next_cursor() else {
            return Err(validation("wfun: missing `end`"));
        };
        let (col, head) = cur.next("`level`, `tail` or `end`")?;
        match head {
            "end" => {
                cur.done()?;
                break;
            }
            "level" => {
                let k = cur.number("a level number")?;
                if k == 0 {
                    return Err(cur.err(col, "levels are numbered from 1"));
                }
                cur.expect("window")?;
                let window = cur.number("a window size")?;
                cur.expect(":")?;
                let t = parse_inline_table(&mut cur, window)?;
                if levels.iter().any(|(k2, _)| *k2 == k) {
                    return Err(cur.err(col, format!("duplicate level {k}")));
                }
                levels.push((k, t));
            }
            "tail" => {
                cur.expect("window")?;
                let window = cur.number("a window size")?;
                cur.expect(":")?;
                let t = parse_inline_table(&mut cur, window)?;
                if tail.replace(t).is_some() {
                    return Err(cur.err(col, "duplicate `tail`"));
                }
            }
            other => {
                return Err(cur.err(
                    col,
                    format!("expected `level`, `tail` or `end`, found `{other}`"),
                ))
            }
        }
    }
    let tail = tail.ok_or_else(|| validation("leveled wfun is missing its `tail` table"))?;
    levels.sort_by_key(|(k, _)| *k);
    for (want, (k, _)) in levels.iter().enumerate() {
        if *k != want + 1 {
            return Err(validation(format!(
                "leveled wfun: levels must be 1..{} with no gaps, found level {k}",
                levels.len()
            )));
        }
    }
    Ok(WFunction::Leveled {
        levels: levels.into_iter().map(|(_, t)| t).collect(),
        tail,
    })
}

/// Renders a machine back in the input format.
pub fn write_machine(m: &Transducer) -> String {
    let mut out = String::new();
    let kind = match m.kind() {
        MachineKind::Mealy => "mealy",
        MachineKind::Async => "async",
    };
    writeln!(out, "{kind} {}", m.name()).unwrap();
    writeln!(out, "  start {}", m.state_name(m.start())).unwrap();
    for s in m.reachable_states() {
        for a in [Letter::Zero, Letter::One] {
            let (d, block) = m.step(s, a);
            let rendered = if block.is_empty() {
                "e".to_string()
            } else {
                block.to_string()
            };
            writeln!(
                out,
                "  {} {} -> {} / {}",
                m.state_name(s),
                a,
                m.state_name(d),
                rendered
            )
            .unwrap();
        }
    }
    out.push_str("end\n");
    out
}

fn write_inline_table(t: &WTable) -> String {
    let rows: Vec<String> = t
        .entries()
        .iter()
        .map(|(k, v)| format!("{k} -> {v}"))
        .collect();
    rows.join(" , ")
}

/// Renders an isometry assignment back in the input format.
pub fn write_wfun(name: &str, w: &WFunction) -> String {
    let mut out = String::new();
    match w {
        WFunction::SelfSimilar(t) => {
            writeln!(out, "wfun {name} selfsimilar window {}", t.window()).unwrap();
            for (k, v) in t.entries() {
                writeln!(out, "  {k} -> {v}").unwrap();
            }
        }
        WFunction::Leveled { levels, tail } => {
            writeln!(out, "wfun {name} leveled").unwrap();
            for (i, t) in levels.iter().enumerate() {
                writeln!(
                    out,
                    "  level {} window {} : {}",
                    i + 1,
                    t.window(),
                    write_inline_table(t)
                )
                .unwrap();
            }
            writeln!(out, "  tail window {} : {}", tail.window(), write_inline_table(tail))
                .unwrap();
        }
    }
    out.push_str("end\n");
    out
}
