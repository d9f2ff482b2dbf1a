//! Text format for group descriptions, witnesses and the gallery
//! configuration.
//!
//! A file is a list of `key: value` entries separated by `;` or newlines;
//! `#` starts a comment. Values are identifiers, integers, rationals `a/b`,
//! lists `[...]` and maps `{key: value, ...}`.
//!
//! ```text
//! name: gamma
//! torsion: [2]                 # trivial | countable | countable[2] | [orders]
//! free: {tower: 2, prefix: [], period: [[[3, -10], [2, 3]]]}
//! ```
//!
//! Free parts are `{free: n}`, `{rank1: {2: inf, 3: 1}}` (or a rank-1 tower),
//! `{cd: [[{2: inf}, 1], [{}, omega]]}`, a tower, `{sum: [...]}` or
//! `{omega: tower}`. Primes in a supernatural must increase.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::desc::{AbGroupDesc, FreePartDesc};
use crate::error::{Error, Result};
use crate::exactla::{IntMatrix, RatMatrix};
use crate::fgab::{FgAbGroup, Multiplicity, TorsionDesc};
use crate::primes::is_prime;
use crate::supernatural::{Exponent, Supernatural, TypeClass};
use crate::tower::Tower;
use crate::uginv::Witness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn error_at(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse(ParseError { line: pos.line, column: pos.column, message: message.into() })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigRational),
    Colon,
    Comma,
    Semi,
    Newline,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let pos = Pos { line, column };
        let c = chars[i];
        let single = match c {
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '\n' => Some(Tok::Newline),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            i += 1;
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        if c == '-' || c.is_ascii_digit() {
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push((
                Tok::Number(parse_number(&word).ok_or_else(|| error_at(pos, format!("malformed number `{word}`")))?),
                pos,
            ));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else {
            return Err(error_at(pos, format!("unexpected character `{c}`")));
        }
        column += i - start;
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

fn parse_number(word: &str) -> Option<BigRational> {
    let (num, den) = match word.split_once('/') {
        Some((n, d)) => (n, d),
        None => (word, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Ident(String, Option<Vec<Value>>),
    Number(BigRational),
    List(Vec<Value>),
    Map(Vec<(Value, Value)>),
}

#[derive(Clone, Debug, PartialEq)]
struct Value {
    kind: Kind,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&mut self) -> &(Tok, Pos) {
        if self.depth > 0 {
            while self.toks[self.at].0 == Tok::Newline {
                self.at += 1;
            }
        }
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.peek().clone();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Pos> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(pos)
        } else {
            Err(error_at(pos, format!("expected {what}")))
        }
    }

    fn value(&mut self) -> Result<Value> {
        let (tok, pos) = self.next();
        let kind = match tok {
            Tok::Ident(name) => {
                let args = if self.toks[self.at].0 == Tok::LBracket {
                    self.at += 1;
                    Some(self.items(Tok::RBracket)?)
                } else {
                    None
                };
                Kind::Ident(name, args)
            }
            Tok::Number(x) => Kind::Number(x),
            Tok::LBracket => Kind::List(self.items(Tok::RBracket)?),
            Tok::LBrace => {
                self.depth += 1;
                let mut entries = Vec::new();
                if self.peek().0 == Tok::RBrace {
                    self.next();
                } else {
                    loop {
                        let key = self.value()?;
                        self.expect(Tok::Colon, "`:`")?;
                        let value = self.value()?;
                        entries.push((key, value));
                        match self.next() {
                            (Tok::Comma, _) => {}
                            (Tok::RBrace, _) => break,
                            (_, p) => return Err(error_at(p, "expected `,` or `}`")),
                        }
                    }
                }
                self.depth -= 1;
                Kind::Map(entries)
            }
            _ => return Err(error_at(pos, "expected a value")),
        };
        Ok(Value { kind, pos })
    }

    /// Comma-separated values up to `close`; the opener is consumed.
    fn items(&mut self, close: Tok) -> Result<Vec<Value>> {
        self.depth += 1;
        let mut items = Vec::new();
        if self.peek().0 == close {
            self.next();
        } else {
            loop {
                items.push(self.value()?);
                match self.next() {
                    (Tok::Comma, _) => {}
                    (t, _) if t == close => break,
                    (_, p) => return Err(error_at(p, "expected `,` or a closing bracket")),
                }
            }
        }
        self.depth -= 1;
        Ok(items)
    }

    fn entries(&mut self) -> Result<Vec<(String, Value, Pos)>> {
        let mut out: Vec<(String, Value, Pos)> = Vec::new();
        loop {
            match self.next() {
                (Tok::End, _) => return Ok(out),
                (Tok::Semi | Tok::Newline, _) => continue,
                (Tok::Ident(key), pos) => {
                    if out.iter().any(|(k, _, _)| *k == key) {
                        return Err(error_at(pos, format!("duplicate entry `{key}`")));
                    }
                    self.expect(Tok::Colon, "`:` after the entry name")?;
                    let value = self.value()?;
                    match self.peek() {
                        (Tok::Semi | Tok::Newline | Tok::End, _) => {}
                        (_, p) => return Err(error_at(*p, "expected `;` or a new line")),
                    }
                    out.push((key, value, pos));
                }
                (_, pos) => return Err(error_at(pos, "expected an entry name")),
            }
        }
    }
}

struct Entries {
    entries: Vec<(String, Value, Pos)>,
}

impl Entries {
    fn parse(text: &str, allowed: &[&str]) -> Result<Entries> {
        let mut p = Parser { toks: tokenize(text)?, at: 0, depth: 0 };
        let entries = p.entries()?;
        if let Some((k, _, pos)) = entries.iter().find(|(k, _, _)| !allowed.contains(&k.as_str())) {
            return Err(error_at(*pos, format!("unknown entry `{k}`")));
        }
        Ok(Entries { entries })
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v)
    }

    fn require(&self, key: &str) -> Result<&Value> {
        let end = self.entries.last().map_or(Pos { line: 1, column: 1 }, |(_, v, _)| v.pos);
        self.get(key).ok_or_else(|| error_at(end, format!("missing entry `{key}`")))
    }
}

fn ident(v: &Value) -> Option<&str> {
    match &v.kind {
        Kind::Ident(s, None) => Some(s),
        _ => None,
    }
}

fn integer(v: &Value) -> Result<BigInt> {
    match &v.kind {
        Kind::Number(x) if x.is_integer() => Ok(x.to_integer()),
        _ => Err(error_at(v.pos, "expected an integer")),
    }
}

fn count(v: &Value) -> Result<usize> {
    let n = integer(v)?;
    n.to_usize().ok_or_else(|| error_at(v.pos, "expected a nonnegative count"))
}

fn list(v: &Value) -> Result<&[Value]> {
    match &v.kind {
        Kind::List(items) => Ok(items),
        _ => Err(error_at(v.pos, "expected a list")),
    }
}

fn map(v: &Value) -> Result<&[(Value, Value)]> {
    match &v.kind {
        Kind::Map(entries) => Ok(entries),
        _ => Err(error_at(v.pos, "expected a map")),
    }
}

fn map_get<'a>(entries: &'a [(Value, Value)], key: &str) -> Option<&'a Value> {
    entries.iter().find(|(k, _)| ident(k) == Some(key)).map(|(_, v)| v)
}

fn int_matrix(v: &Value) -> Result<IntMatrix> {
    let rows = list(v)?;
    let parsed: Vec<Vec<BigInt>> =
        rows.iter().map(|r| list(r)?.iter().map(integer).collect::<Result<_>>()).collect::<Result<_>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if let Some(r) = rows.iter().zip(&parsed).find(|(_, p)| p.len() != cols) {
        return Err(error_at(r.0.pos, "rows of a matrix must have equal length"));
    }
    IntMatrix::from_vec(parsed.len(), cols, parsed.into_iter().flatten().collect())
}

fn rat_matrix(v: &Value) -> Result<RatMatrix> {
    let rows = list(v)?;
    let mut entries = Vec::new();
    let mut cols = None;
    for r in rows {
        let row = list(r)?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(error_at(r.pos, "rows of a matrix must have equal length"));
        }
        for x in row {
            match &x.kind {
                Kind::Number(q) => entries.push(q.clone()),
                _ => return Err(error_at(x.pos, "expected a rational number")),
            }
        }
    }
    RatMatrix::from_vec(rows.len(), cols.unwrap_or(0), entries)
}

fn supernatural(v: &Value) -> Result<Supernatural> {
    let mut s = Supernatural::one();
    let mut last = 0u64;
    for (k, e) in map(v)? {
        let p = integer(k)?.to_u64().filter(|&p| is_prime(p)).ok_or_else(|| error_at(k.pos, "expected a prime"))?;
        if p <= last {
            return Err(error_at(k.pos, "primes must be listed in increasing order"));
        }
        last = p;
        let exp = match (&e.kind, ident(e)) {
            (_, Some("inf")) => Exponent::Infinite,
            (Kind::Number(_), _) => {
                Exponent::Finite(integer(e)?.to_u64().ok_or_else(|| error_at(e.pos, "malformed exponent"))?)
            }
            _ => return Err(error_at(e.pos, "malformed exponent: expected a natural number or `inf`")),
        };
        s.set(p, exp);
    }
    Ok(s)
}

fn tower(entries: &[(Value, Value)], pos: Pos) -> Result<Tower> {
    let rank = count(map_get(entries, "tower").ok_or_else(|| error_at(pos, "expected `tower: rank`"))?)?;
    let matrices = |key: &str| -> Result<Vec<IntMatrix>> {
        match map_get(entries, key) {
            Some(v) => list(v)?.iter().map(int_matrix).collect(),
            None => Ok(Vec::new()),
        }
    };
    for (k, _) in entries {
        if !matches!(ident(k), Some("tower" | "prefix" | "period")) {
            return Err(error_at(k.pos, "unknown tower field"));
        }
    }
    Tower::new(rank, matrices("prefix")?, matrices("period")?)
}

fn multiplicity(v: &Value) -> Result<Multiplicity> {
    match ident(v) {
        Some("omega") => Ok(Multiplicity::Omega),
        _ => Ok(Multiplicity::Finite(count(v)?)),
    }
}

fn free_part(v: &Value) -> Result<FreePartDesc> {
    let entries = map(v)?;
    if map_get(entries, "tower").is_some() {
        return Ok(FreePartDesc::TowerForm(tower(entries, v.pos)?));
    }
    let [(key, body)] = entries else {
        return Err(error_at(v.pos, "a free part has exactly one of free, rank1, cd, tower, sum, omega"));
    };
    match ident(key) {
        Some("free") => Ok(FreePartDesc::FreeOfRank(count(body)?)),
        Some("rank1") => {
            let body_entries = map(body)?;
            let t = if map_get(body_entries, "tower").is_some() {
                tower(body_entries, body.pos)?
            } else {
                Tower::from_supernatural(&supernatural(body)?)
            };
            if t.rank() != 1 {
                return Err(error_at(body.pos, "rank1 expects a rank-1 tower"));
            }
            Ok(FreePartDesc::Rank1(t))
        }
        Some("cd") => {
            let mut items = Vec::new();
            for item in list(body)? {
                match list(item)? {
                    [s, m] => items.push((TypeClass::new(supernatural(s)?), multiplicity(m)?)),
                    _ => return Err(error_at(item.pos, "expected [supernatural, multiplicity]")),
                }
            }
            if items.is_empty() {
                return Err(error_at(body.pos, "cd needs at least one summand"));
            }
            Ok(FreePartDesc::cd(items))
        }
        Some("sum") => {
            let parts: Vec<FreePartDesc> = list(body)?.iter().map(free_part).collect::<Result<_>>()?;
            if parts.is_empty() {
                return Err(error_at(body.pos, "sum needs at least one summand"));
            }
            Ok(FreePartDesc::DirectSum(parts))
        }
        Some("omega") => Ok(FreePartDesc::OmegaCopies(tower(map(body)?, body.pos)?)),
        _ => Err(error_at(key.pos, "unknown free part kind")),
    }
}

fn torsion(v: &Value) -> Result<TorsionDesc> {
    match &v.kind {
        Kind::Ident(s, _) if s == "trivial" => Ok(TorsionDesc::trivial()),
        Kind::Ident(s, args) if s == "countable" => {
            for a in args.iter().flatten() {
                if integer(a)? < BigInt::from(2) {
                    return Err(error_at(a.pos, "cyclic orders must be at least 2"));
                }
            }
            Ok(TorsionDesc::CountablyInfinite)
        }
        Kind::List(items) => {
            let orders: Vec<u64> = items
                .iter()
                .map(|x| {
                    integer(x)?
                        .to_u64()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| error_at(x.pos, "cyclic orders must be positive"))
                })
                .collect::<Result<_>>()?;
            Ok(TorsionDesc::finite(FgAbGroup::from_cyclic_orders(&orders)))
        }
        _ => Err(error_at(v.pos, "expected `trivial`, `countable` or a list of cyclic orders")),
    }
}

/// A named group description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFile {
    pub name: String,
    pub desc: AbGroupDesc,
}

fn name_of(e: &Entries, default: &str) -> Result<String> {
    match e.get("name") {
        Some(v) => ident(v).map(str::to_string).ok_or_else(|| error_at(v.pos, "expected an identifier")),
        None => Ok(default.to_string()),
    }
}

pub fn parse_group_file(text: &str) -> Result<GroupFile> {
    let e = Entries::parse(text, &["name", "torsion", "free"])?;
    let desc = AbGroupDesc::new(torsion(e.require("torsion")?)?, free_part(e.require("free")?)?);
    Ok(GroupFile { name: name_of(&e, "group")?, desc })
}

pub fn parse_witness_file(text: &str) -> Result<Witness> {
    let e = Entries::parse(text, &["name", "copies", "src", "dst", "map"])?;
    witness_from(&e)
}

fn witness_from(e: &Entries) -> Result<Witness> {
    let copies_value = e.require("copies")?;
    let copies = count(copies_value)?;
    if copies == 0 {
        return Err(error_at(copies_value.pos, "copies must be at least 1"));
    }
    Ok(Witness {
        copies,
        src: free_part(e.require("src")?)?,
        dst: free_part(e.require("dst")?)?,
        map: rat_matrix(e.require("map")?)?,
    })
}

/// A pair of rank-2 towers `Γ₁, Γ₂` with a witness for `Γ₁ⁿ ≅ Γ₂ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuchsLoonstraConfig {
    pub name: String,
    pub first: Tower,
    pub second: Tower,
    pub witness: Witness,
}

/// Same entries as a witness file; `src` and `dst` must be rank-2 towers.
pub fn parse_gallery_config(text: &str) -> Result<FuchsLoonstraConfig> {
    let e = Entries::parse(text, &["name", "copies", "src", "dst", "map"])?;
    let witness = witness_from(&e)?;
    let as_rank2 = |key: &str, f: &FreePartDesc| match f {
        FreePartDesc::TowerForm(t) if t.rank() == 2 => Ok(t.clone()),
        _ => Err(error_at(
            e.require(key).map(|v| v.pos).unwrap_or(Pos { line: 1, column: 1 }),
            "expected a rank-2 tower",
        )),
    };
    Ok(FuchsLoonstraConfig {
        name: name_of(&e, "fuchs-loonstra")?,
        first: as_rank2("src", &witness.src)?,
        second: as_rank2("dst", &witness.dst)?,
        witness,
    })
}

fn emit_matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn emit_tower(t: &Tower) -> String {
    let list = |ms: &[IntMatrix]| ms.iter().map(emit_matrix).collect::<Vec<_>>().join(", ");
    format!("{{tower: {}, prefix: [{}], period: [{}]}}", t.rank(), list(t.prefix()), list(t.period()))
}

fn emit_multiplicity(m: Multiplicity) -> String {
    match m {
        Multiplicity::Finite(n) => n.to_string(),
        Multiplicity::Omega => "omega".into(),
    }
}

pub fn emit_free_part(f: &FreePartDesc) -> String {
    match f {
        FreePartDesc::FreeOfRank(n) => format!("{{free: {n}}}"),
        FreePartDesc::Rank1(t) => format!("{{rank1: {}}}", emit_tower(t)),
        FreePartDesc::CompletelyDecomposable(items) => {
            let items: Vec<String> =
                items.iter().map(|(t, m)| format!("[{}, {}]", t.representative(), emit_multiplicity(*m))).collect();
            format!("{{cd: [{}]}}", items.join(", "))
        }
        FreePartDesc::TowerForm(t) => emit_tower(t),
        FreePartDesc::DirectSum(parts) => {
            format!("{{sum: [{}]}}", parts.iter().map(emit_free_part).collect::<Vec<_>>().join(", "))
        }
        FreePartDesc::OmegaCopies(t) => format!("{{omega: {}}}", emit_tower(t)),
    }
}

pub fn emit_torsion(t: &TorsionDesc) -> String {
    match t {
        TorsionDesc::Finite(g) if g.is_trivial() => "trivial".into(),
        TorsionDesc::Finite(g) => {
            format!("[{}]", g.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
        }
        TorsionDesc::CountablyInfinite => "countable".into(),
    }
}

pub fn emit_group_file(g: &GroupFile) -> String {
    format!(
        "name: {}\ntorsion: {}\nfree: {}\n",
        g.name,
        emit_torsion(&g.desc.torsion),
        emit_free_part(&g.desc.free_part)
    )
}

pub fn emit_witness_file(w: &Witness) -> String {
    let rows: Vec<String> = (0..w.map.rows())
        .map(|i| format!("[{}]", w.map.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!(
        "copies: {}\nsrc: {}\ndst: {}\nmap: [{}]\n",
        w.copies,
        emit_free_part(&w.src),
        emit_free_part(&w.dst),
        rows.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> ParseError {
        match parse_group_file(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn group_examples() {
        let g = parse_group_file("torsion: trivial; free: {free: 2}").unwrap();
        assert_eq!(g.desc, AbGroupDesc::free(2));
        let g = parse_group_file("torsion: countable[2]; free: {free: 1}").unwrap();
        assert_eq!(g.desc, AbGroupDesc::new(TorsionDesc::CountablyInfinite, FreePartDesc::FreeOfRank(1)));
    }

    #[test]
    fn malformed_exponent_is_located() {
        let e = parse_err("torsion: trivial\nfree: {rank1: {2: oops}}");
        assert_eq!((e.line, e.column), (2, 19));
        assert!(e.message.contains("exponent"));
    }

    #[test]
    fn primes_must_increase() {
        let e = parse_err("torsion: trivial; free: {rank1: {3: 1, 2: inf}}");
        assert!(e.message.contains("increasing"));
        let e = parse_err("torsion: trivial; free: {rank1: {4: 1}}");
        assert!(e.message.contains("prime"));
    }

    #[test]
    fn tower_defects_are_forwarded() {
        let r = parse_group_file("torsion: trivial; free: {tower: 2, period: [[[1, 0], [0, 0]]]}");
        assert!(matches!(r, Err(Error::InvalidTower(_))));
    }

    #[test]
    fn multiline_values_and_comments() {
        let text = "name: gamma # the first group\ntorsion: [2, 3]\nfree: {tower: 2,\n  prefix: [],\n  period: [[[3, -10], [2, 3]]]}\n";
        let g = parse_group_file(text).unwrap();
        assert_eq!(g.name, "gamma");
        assert_eq!(emit_torsion(&g.desc.torsion), "[6]");
        assert_eq!(parse_group_file(&emit_group_file(&g)).unwrap(), g);
    }

    #[test]
    fn witness_round_trip() {
        let text = "copies: 1\nsrc: {free: 1}\ndst: {rank1: {2: inf}}\nmap: [[1/2]]";
        let w = parse_witness_file(text).unwrap();
        assert_eq!(w.map.get(0, 0), &BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_witness_file(&emit_witness_file(&w)).unwrap(), w);
    }

    #[test]
    fn unknown_and_missing_entries() {
        assert!(parse_err("torsion: trivial; free: {free: 1}; colour: red").message.contains("unknown entry"));
        assert!(parse_err("torsion: trivial").message.contains("missing entry `free`"));
        assert!(parse_err("torsion: trivial; free: {free: 1} extra").message.contains("expected `;`"));
    }
}
