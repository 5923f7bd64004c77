//! Line-oriented text formats.
//!
//! All formats start with a `<kind> 1` header, use whitespace-separated
//! tokens, and treat everything after `#` as a comment.
//!
//! ```text
//! cubegraph 1        pocset 1              autperm 1        permgrp 1
//! v a                p h                   a swap           deg 3
//! v b                p k                   m 01 10          g s 1 0 2
//! e a b              c h 0 k 1             m 10 01          g t 1 2 0
//! base a
//! ```
//!
//! `c h 0 k 1` declares that side 0 of `h` is contained in side 1 of `k`.
//! Permutation images are 0-based.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::complex::{CubeComplexGraph, GraphBuilder, VertexId};
use crate::error::{Error, Result};
use crate::groups::Perm;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, i: usize, msg: impl Into<String>) -> Error {
        let column = self
            .tokens
            .get(i)
            .map(|t| t.column)
            .or_else(|| self.tokens.last().map(|t| t.column + t.text.len()))
            .unwrap_or(1);
        Error::parse(self.number, column, msg)
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.tokens.len() != n {
            return Err(self.err(
                n.min(self.tokens.len()),
                format!("`{}` expects {} argument(s), found {}", self.tokens[0].text, n - 1, self.tokens.len() - 1),
            ));
        }
        Ok(())
    }

    fn text(&self, i: usize) -> &'a str {
        self.tokens[i].text
    }
}

fn lines(input: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, c) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &content[s..j],
                        column: content[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

fn header<'a>(all: &'a [Line<'a>], kind: &str) -> Result<&'a [Line<'a>]> {
    let first = all
        .first()
        .ok_or_else(|| Error::parse(1, 1, format!("empty input, expected `{kind} 1` header")))?;
    if first.tokens.len() != 2 || first.text(0) != kind {
        return Err(first.err(0, format!("expected `{kind} 1` header")));
    }
    if first.text(1) != "1" {
        return Err(first.err(1, format!("unsupported {kind} version `{}`", first.text(1))));
    }
    Ok(&all[1..])
}

pub fn parse_cubegraph(input: &str) -> Result<CubeComplexGraph> {
    let all = lines(input);
    let body = header(&all, "cubegraph")?;
    let mut b = GraphBuilder::new();
    let mut base = None;
    for line in body {
        match line.text(0) {
            "v" => {
                line.arity(2)?;
                if b.has_vertex(line.text(1)) {
                    return Err(line.err(1, format!("vertex `{}` declared twice", line.text(1))));
                }
                b.vertex(line.text(1));
            }
            "e" => {
                line.arity(3)?;
                let mut ends = [VertexId(0); 2];
                for k in 0..2 {
                    ends[k] = b
                        .lookup(line.text(k + 1))
                        .ok_or_else(|| line.err(k + 1, format!("undeclared vertex `{}`", line.text(k + 1))))?;
                }
                b.edge(ends[0], ends[1]).map_err(|e| line.err(1, e.to_string()))?;
            }
            "base" => {
                line.arity(2)?;
                if base.is_some() {
                    return Err(line.err(0, "`base` given twice"));
                }
                base = Some(
                    b.lookup(line.text(1))
                        .ok_or_else(|| line.err(1, format!("undeclared vertex `{}`", line.text(1))))?,
                );
            }
            other => return Err(line.err(0, format!("unknown record `{other}`"))),
        }
    }
    if let Some(v) = base {
        b.set_base(v);
    }
    Ok(b.build())
}

pub fn write_cubegraph(g: &CubeComplexGraph) -> String {
    let mut out = String::from("cubegraph 1\n");
    for v in g.vertices() {
        let _ = writeln!(out, "v {}", g.name(v));
    }
    for &(a, b) in g.declared_edges() {
        let _ = writeln!(out, "e {} {}", g.name(a), g.name(b));
    }
    if let Some(v) = g.base() {
        let _ = writeln!(out, "base {}", g.name(v));
    }
    out
}

/// Pocset as declared: pair names and side containments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PocsetSpec {
    pub pairs: Vec<String>,
    pub containments: Vec<((usize, u8), (usize, u8))>,
}

pub fn parse_pocset(input: &str) -> Result<PocsetSpec> {
    let all = lines(input);
    let body = header(&all, "pocset")?;
    let mut spec = PocsetSpec::default();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for line in body {
        match line.text(0) {
            "p" => {
                line.arity(2)?;
                if index.insert(line.text(1), spec.pairs.len()).is_some() {
                    return Err(line.err(1, format!("pair `{}` declared twice", line.text(1))));
                }
                spec.pairs.push(line.text(1).to_string());
            }
            "c" => {
                line.arity(5)?;
                let mut half = [(0usize, 0u8); 2];
                for k in 0..2 {
                    let id = *index
                        .get(line.text(1 + 2 * k))
                        .ok_or_else(|| line.err(1 + 2 * k, format!("undeclared pair `{}`", line.text(1 + 2 * k))))?;
                    let side = match line.text(2 + 2 * k) {
                        "0" => 0,
                        "1" => 1,
                        s => return Err(line.err(2 + 2 * k, format!("side must be 0 or 1, found `{s}`"))),
                    };
                    half[k] = (id, side);
                }
                spec.containments.push((half[0], half[1]));
            }
            other => return Err(line.err(0, format!("unknown record `{other}`"))),
        }
    }
    Ok(spec)
}

pub fn write_pocset(spec: &PocsetSpec) -> String {
    let mut out = String::from("pocset 1\n");
    for p in &spec.pairs {
        let _ = writeln!(out, "p {p}");
    }
    for ((a, sa), (b, sb)) in &spec.containments {
        let _ = writeln!(out, "c {} {sa} {} {sb}", spec.pairs[*a], spec.pairs[*b]);
    }
    out
}

/// Named vertex maps, resolved against a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedAutomorphism {
    pub name: String,
    pub map: Vec<VertexId>,
}

pub fn parse_autperm(input: &str, g: &CubeComplexGraph) -> Result<Vec<NamedAutomorphism>> {
    let all = lines(input);
    let body = header(&all, "autperm")?;
    let mut out: Vec<(String, usize, Vec<Option<VertexId>>)> = Vec::new();
    for line in body {
        match line.text(0) {
            "a" => {
                line.arity(2)?;
                out.push((line.text(1).to_string(), line.number, vec![None; g.vertex_count()]));
            }
            "m" => {
                line.arity(3)?;
                let Some(current) = out.last_mut() else {
                    return Err(line.err(0, "`m` before any `a` record"));
                };
                let x = g
                    .id(line.text(1))
                    .ok_or_else(|| line.err(1, format!("unknown vertex `{}`", line.text(1))))?;
                let y = g
                    .id(line.text(2))
                    .ok_or_else(|| line.err(2, format!("unknown vertex `{}`", line.text(2))))?;
                if current.2[x.index()].replace(y).is_some() {
                    return Err(line.err(1, format!("vertex `{}` mapped twice", line.text(1))));
                }
            }
            other => return Err(line.err(0, format!("unknown record `{other}`"))),
        }
    }
    out.into_iter()
        .map(|(name, number, map)| {
            let missing = map.iter().position(Option::is_none);
            if let Some(i) = missing {
                return Err(Error::parse(
                    number,
                    1,
                    format!("automorphism `{name}` leaves vertex `{}` unmapped", g.name(VertexId(i as u32))),
                ));
            }
            Ok(NamedAutomorphism {
                name,
                map: map.into_iter().map(Option::unwrap).collect(),
            })
        })
        .collect()
}

pub fn write_autperm(g: &CubeComplexGraph, auts: &[NamedAutomorphism]) -> String {
    let mut out = String::from("autperm 1\n");
    for a in auts {
        let _ = writeln!(out, "a {}", a.name);
        for v in g.vertices() {
            let _ = writeln!(out, "m {} {}", g.name(v), g.name(a.map[v.index()]));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroupSpec {
    pub degree: usize,
    pub generators: Vec<(String, Perm)>,
}

pub fn parse_permgrp(input: &str) -> Result<PermGroupSpec> {
    let all = lines(input);
    let body = header(&all, "permgrp")?;
    let mut degree = None;
    let mut generators = Vec::new();
    for line in body {
        match line.text(0) {
            "deg" => {
                line.arity(2)?;
                if degree.is_some() {
                    return Err(line.err(0, "`deg` given twice"));
                }
                let d: usize = line
                    .text(1)
                    .parse()
                    .map_err(|_| line.err(1, format!("degree must be a non-negative integer, found `{}`", line.text(1))))?;
                degree = Some(d);
            }
            "g" => {
                let Some(d) = degree else {
                    return Err(line.err(0, "`g` before `deg`"));
                };
                line.arity(d + 2)?;
                let mut images = Vec::with_capacity(d);
                for k in 0..d {
                    let x: usize = line
                        .text(k + 2)
                        .parse()
                        .map_err(|_| line.err(k + 2, format!("image must be an integer, found `{}`", line.text(k + 2))))?;
                    if x >= d {
                        return Err(line.err(k + 2, format!("image {x} out of range for degree {d}")));
                    }
                    images.push(x as u32);
                }
                let perm = Perm::from_images(images).map_err(|e| line.err(2, e.to_string()))?;
                generators.push((line.text(1).to_string(), perm));
            }
            other => return Err(line.err(0, format!("unknown record `{other}`"))),
        }
    }
    let degree = degree.ok_or_else(|| Error::parse(all.len().max(1), 1, "missing `deg` record"))?;
    Ok(PermGroupSpec { degree, generators })
}

pub fn write_permgrp(spec: &PermGroupSpec) -> String {
    let mut out = format!("permgrp 1\ndeg {}\n", spec.degree);
    for (name, p) in &spec.generators {
        let images: Vec<String> = p.images().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "g {name} {}", images.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn cubegraph_roundtrip_is_exact() {
        let text = "cubegraph 1\nv a\nv b\nv c\ne b a\ne b c\nbase b\n";
        let g = parse_cubegraph(text).unwrap();
        assert_eq!(write_cubegraph(&g), text);
        let with_comments = "# a path\ncubegraph 1 # header\nv a\nv b\nv c\ne b a\n\ne b c\nbase b\n";
        assert_eq!(write_cubegraph(&parse_cubegraph(with_comments).unwrap()), text);
        let q = build::hypercube(3);
        assert_eq!(write_cubegraph(&parse_cubegraph(&write_cubegraph(&q)).unwrap()), write_cubegraph(&q));
    }

    #[test]
    fn cubegraph_errors_carry_positions() {
        match parse_cubegraph("cubegraph 1\nv a\ne a  zz\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 6)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_cubegraph("cubegraph 2\n"), Err(Error::Parse { line: 1, column: 11, .. })));
        assert!(matches!(parse_cubegraph("v a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_cubegraph("cubegraph 1\nv a\nv a\n"), Err(Error::Parse { line: 3, column: 3, .. })));
        assert!(matches!(parse_cubegraph("cubegraph 1\nv a\ne a a\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_cubegraph("cubegraph 1\nx a\n"), Err(Error::Parse { line: 2, column: 1, .. })));
    }

    #[test]
    fn pocset_roundtrip() {
        let text = "pocset 1\np h\np k\nc h 0 k 1\n";
        let spec = parse_pocset(text).unwrap();
        assert_eq!(spec.containments, vec![((0, 0), (1, 1))]);
        assert_eq!(write_pocset(&spec), text);
        assert!(matches!(parse_pocset("pocset 1\np h\nc h 2 h 0\n"), Err(Error::Parse { line: 3, column: 5, .. })));
    }

    #[test]
    fn autperm_and_permgrp() {
        let sq = build::hypercube(2);
        let text = "autperm 1\na swap\nm 00 00\nm 01 10\nm 10 01\nm 11 11\n";
        let auts = parse_autperm(text, &sq).unwrap();
        assert_eq!(write_autperm(&sq, &auts), text);
        assert!(parse_autperm("autperm 1\na s\nm 00 00\n", &sq).is_err());

        let text = "permgrp 1\ndeg 3\ng s 1 0 2\ng t 1 2 0\n";
        let spec = parse_permgrp(text).unwrap();
        assert_eq!(spec.generators.len(), 2);
        assert_eq!(write_permgrp(&spec), text);
        assert!(matches!(parse_permgrp("permgrp 1\ndeg 2\ng s 0 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_permgrp("permgrp 1\ndeg 2\ng s 0 5\n"), Err(Error::Parse { line: 3, column: 7, .. })));
    }
}
