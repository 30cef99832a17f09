//! Line-oriented tree files:
//!
//! ```text
//! n=16
//! mode=la3
//! assign t=2 path=0,0 rep=D1:cols=0;0;0;0;0;0;0;0:b=1
//! assign t=4 path=- rep=D3:blocks=0,4,8,12|1,5,9,13|2,6,10,14|3,7,11,15:b=0
//! ```
//!
//! LA1 trees carry `perm=<images>;shift=<bits>` in place of `rep=…`.
//! Assignments are written by level, then by flat path index.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::isometries::{DRep, Isometry};
use crate::word::{Space, Word};

use super::{path_text, AssignmentTree, LocalAut, Mode};

pub fn serialize_tree(tree: &AssignmentTree) -> String {
    let s = tree.space();
    let mut out = format!("n={}\nmode={}\n", s.n(), tree.mode());
    for t in 2..=s.m() {
        for i in 0..tree.level_len(t) {
            let Some(la) = tree.slot(t, i) else {
                continue;
            };
            let path = path_text(&tree.path_of(t, i));
            let body = match la {
                LocalAut::Rep(d) => format!("rep={d}"),
                LocalAut::Raw(g) => format!(
                    "perm={};shift={}",
                    g.perm()
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    g.shift()
                ),
            };
            let _ = writeln!(out, "assign t={t} path={path} {body}");
        }
    }
    out
}

/// A `key=value` field at a 1-based column.
struct Field<'a> {
    column: usize,
    value: &'a str,
}

fn field<'a>(line: usize, column: usize, token: &'a str, key: &str) -> Result<Field<'a>> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .map(|value| Field {
            column: column + key.len() + 1,
            value,
        })
        .ok_or_else(|| Error::parse(line, column, format!("expected `{key}=`")))
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<Field<'a>> {
    let (no, text) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, format!("missing `{key}=` header")))?;
    field(no, 1, text, key)
}

fn parse_path(line: usize, f: &Field) -> Result<Vec<usize>> {
    if f.value == "-" {
        return Ok(Vec::new());
    }
    f.value
        .split(',')
        .map(|p| {
            p.parse()
                .map_err(|_| Error::parse(line, f.column, format!("bad path entry {p:?}")))
        })
        .collect()
}

fn parse_raw(line: usize, f: &Field, s: &Space) -> Result<Isometry> {
    let (perm, shift) = f
        .value
        .split_once(";shift=")
        .ok_or_else(|| Error::parse(line, f.column, "expected `<perm>;shift=<bits>`"))?;
    let perm: Vec<u32> = perm
        .split(',')
        .map(|p| {
            p.parse()
                .map_err(|_| Error::parse(line, f.column, format!("bad image {p:?}")))
        })
        .collect::<Result<_>>()?;
    let shift_col = f.column + f.value.len() - shift.len();
    let shift: Word = shift
        .parse()
        .map_err(|_| Error::parse(line, shift_col, "shift must be a binary string"))?;
    if shift.len() != s.n() {
        return Err(Error::parse(
            line,
            shift_col,
            format!("shift has length {}, expected {}", shift.len(), s.n()),
        ));
    }
    Isometry::new(perm, &shift).map_err(|e| Error::parse(line, f.column, e.to_string()))
}

pub fn parse_tree(text: &str) -> Result<AssignmentTree> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let nf = header(&mut lines, "n")?;
    let n: u32 = nf
        .value
        .parse()
        .map_err(|_| Error::parse(1, nf.column, "length must be an integer"))?;
    let s = Space::new(n).map_err(|e| Error::parse(1, nf.column, e.to_string()))?;
    let mf = header(&mut lines, "mode")?;
    let mode: Mode = mf
        .value
        .parse()
        .map_err(|e: Error| Error::parse(2, mf.column, e.to_string()))?;
    let mut tree = AssignmentTree::empty(s, mode).map_err(|e| Error::parse(1, 1, e.to_string()))?;
    for (no, text) in lines {
        let mut tokens = Vec::new();
        let mut column = 1;
        for tok in text.split(' ') {
            tokens.push((column, tok));
            column += tok.len() + 1;
        }
        if tokens.len() != 4 || tokens[0].1 != "assign" {
            return Err(Error::parse(
                no,
                1,
                "expected `assign t=<t> path=<path> <assignment>`",
            ));
        }
        let tf = field(no, tokens[1].0, tokens[1].1, "t")?;
        let t: u32 = tf
            .value
            .parse()
            .map_err(|_| Error::parse(no, tf.column, "level must be an integer"))?;
        let pf = field(no, tokens[2].0, tokens[2].1, "path")?;
        let path = parse_path(no, &pf)?;
        let index = tree
            .flat_index(t, &path)
            .map_err(|e| Error::parse(no, tf.column, e.to_string()))?;
        if tree.slot(t, index).is_some() {
            return Err(Error::parse(no, pf.column, "duplicate assignment"));
        }
        let (col, tok) = tokens[3];
        let la = if mode.uses_reps() {
            let rf = field(no, col, tok, "rep")?;
            let rep: DRep = rf
                .value
                .parse()
                .map_err(|e: Error| Error::parse(no, rf.column, e.to_string()))?;
            if rep.level() + 1 != t {
                return Err(Error::parse(
                    no,
                    rf.column,
                    format!("level-{t} assignments are D{} representatives", t - 1),
                ));
            }
            rep.validate(&s)
                .map_err(|e| Error::parse(no, rf.column, e.to_string()))?;
            LocalAut::Rep(rep)
        } else {
            LocalAut::Raw(parse_raw(no, &field(no, col, tok, "perm")?, &s)?)
        };
        tree.set_slot(t, index, la);
    }
    Ok(tree)
}
