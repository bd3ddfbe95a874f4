//! JSON documents: one envelope with a `kind` tag and `format_version`.
//!
//! Serialization is canonical: object keys sorted, vertex and arrow lists
//! sorted by id, table rows sorted by their inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builtin;
use crate::heap::{self, GroupTable, HeapError, TernaryOp};
use crate::presentation::{extract_solution, Presentation, PresentationError};
use crate::quiver::{Arrow, PathWord, Quiver, QuiverError};
use crate::ybm::{BraidedQuiver, SolutionError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Syntax(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Heap(#[from] HeapError),
    #[error("unknown example {0:?} (expected z3, zk, z2n, pres0, pres1, pres2)")]
    UnknownExample(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowRecord {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaRow {
    #[serde(rename = "in")]
    pub input: [String; 2],
    pub out: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub format_version: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub format_version: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
    pub sigma: Vec<SigmaRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub format_version: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
    pub relations: Vec<[Vec<String>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeapDoc {
    pub format_version: u32,
    pub elements: Vec<String>,
    pub op: Vec<([String; 3], String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub format_version: u32,
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Quiver(QuiverDoc),
    Solution(SolutionDoc),
    Presentation(PresentationDoc),
    Heap(HeapDoc),
    Group(GroupDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Quiver(_) => "quiver",
            Document::Solution(_) => "solution",
            Document::Presentation(_) => "presentation",
            Document::Heap(_) => "heap",
            Document::Group(_) => "group",
        }
    }

    fn version(&self) -> u32 {
        match self {
            Document::Quiver(d) => d.format_version,
            Document::Solution(d) => d.format_version,
            Document::Presentation(d) => d.format_version,
            Document::Heap(d) => d.format_version,
            Document::Group(d) => d.format_version,
        }
    }

    /// Sorts every list into canonical order.
    pub fn canonicalize(&mut self) {
        fn arrows(a: &mut [ArrowRecord]) {
            a.sort_by(|x, y| x.id.cmp(&y.id));
        }
        match self {
            Document::Quiver(d) => {
                d.vertices.sort();
                arrows(&mut d.arrows);
            }
            Document::Solution(d) => {
                d.vertices.sort();
                arrows(&mut d.arrows);
                d.sigma.sort_by(|a, b| a.input.cmp(&b.input));
            }
            Document::Presentation(d) => {
                d.vertices.sort();
                arrows(&mut d.arrows);
                for r in &mut d.relations {
                    r.sort();
                }
                d.relations.sort();
            }
            Document::Heap(d) => {
                d.elements.sort();
                d.op.sort();
            }
            Document::Group(d) => {
                let mut order: Vec<usize> = (0..d.elements.len()).collect();
                order.sort_by(|&a, &b| d.elements[a].cmp(&d.elements[b]));
                if d.mul.len() == order.len() && d.mul.iter().all(|r| r.len() == order.len()) {
                    d.mul = order.iter().map(|&i| order.iter().map(|&j| d.mul[i][j].clone()).collect()).collect();
                }
                d.elements = order.iter().map(|&i| d.elements[i].clone()).collect();
            }
        }
    }
}

/// Parses and validates the envelope; contents are checked on conversion.
pub fn parse(text: &str) -> Result<Document, IoError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))?;
    match value.get("kind").and_then(|k| k.as_str()) {
        None => return Err(IoError::Schema("missing field `kind`".into())),
        Some(k) if !["quiver", "solution", "presentation", "heap", "group"].contains(&k) => {
            return Err(IoError::Schema(format!("unknown kind {k:?}")));
        }
        _ => {}
    }
    let doc: Document = serde_json::from_value(value).map_err(|e| IoError::Schema(e.to_string()))?;
    if doc.version() != FORMAT_VERSION {
        return Err(IoError::Version(doc.version()));
    }
    Ok(doc)
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize(doc: &Document) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();
    let value = serde_json::to_value(&doc).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

fn records(q: &Quiver) -> Vec<ArrowRecord> {
    q.arrows()
        .iter()
        .map(|a| ArrowRecord { id: a.id.clone(), source: a.source.clone(), target: a.target.clone() })
        .collect()
}

fn build_quiver(vertices: &[String], arrows: &[ArrowRecord]) -> Result<Quiver, IoError> {
    let arrows = arrows.iter().map(|a| Arrow::new(&a.id, &a.source, &a.target)).collect();
    Ok(Quiver::new(vertices.to_vec(), arrows)?)
}

pub fn quiver_document(q: &Quiver) -> Document {
    Document::Quiver(QuiverDoc { format_version: FORMAT_VERSION, vertices: q.vertices().to_vec(), arrows: records(q) })
}

pub fn solution_document(s: &BraidedQuiver) -> Document {
    let q = s.quiver();
    let id = |a: usize| q.arrow_id(a).to_string();
    let sigma = s.table().into_iter().map(|(x, y, u, v)| SigmaRow { input: [id(x), id(y)], out: [id(u), id(v)] }).collect();
    Document::Solution(SolutionDoc { format_version: FORMAT_VERSION, vertices: q.vertices().to_vec(), arrows: records(q), sigma })
}

pub fn presentation_document(p: &Presentation) -> Document {
    let q = p.quiver();
    let ids = |w: &PathWord| w.edges.iter().map(|&a| q.arrow_id(a).to_string()).collect::<Vec<_>>();
    let relations = p.relations().iter().map(|(l, r)| [ids(l), ids(r)]).collect();
    Document::Presentation(PresentationDoc {
        format_version: FORMAT_VERSION,
        vertices: q.vertices().to_vec(),
        arrows: records(q),
        relations,
    })
}

pub fn heap_document(t: &TernaryOp) -> Document {
    let e = t.elements();
    let n = e.len();
    let mut op = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                op.push(([e[a].clone(), e[b].clone(), e[c].clone()], e[t.get(a, b, c)].clone()));
            }
        }
    }
    Document::Heap(HeapDoc { format_version: FORMAT_VERSION, elements: e.to_vec(), op })
}

pub fn group_document(g: &GroupTable) -> Document {
    let e = g.elements();
    let mul = (0..e.len()).map(|a| (0..e.len()).map(|b| e[g.mul(a, b)].clone()).collect()).collect();
    Document::Group(GroupDoc { format_version: FORMAT_VERSION, elements: e.to_vec(), mul, unit: e[g.unit()].clone() })
}

pub fn to_quiver(doc: &Document) -> Result<Quiver, IoError> {
    match doc {
        Document::Quiver(d) => build_quiver(&d.vertices, &d.arrows),
        Document::Solution(d) => build_quiver(&d.vertices, &d.arrows),
        Document::Presentation(d) => build_quiver(&d.vertices, &d.arrows),
        other => Err(IoError::WrongKind { expected: "quiver", found: other.kind() }),
    }
}

pub fn to_solution(d: &SolutionDoc) -> Result<BraidedQuiver, IoError> {
    let q = build_quiver(&d.vertices, &d.arrows)?;
    #[allow(clippy::type_complexity)]
    let rows: Vec<((&str, &str), (&str, &str))> = d
        .sigma
        .iter()
        .map(|r| ((r.input[0].as_str(), r.input[1].as_str()), (r.out[0].as_str(), r.out[1].as_str())))
        .collect();
    Ok(BraidedQuiver::from_ids(q, &rows)?)
}

pub fn to_presentation(d: &PresentationDoc) -> Result<Presentation, IoError> {
    let q = build_quiver(&d.vertices, &d.arrows)?;
    let mut rels = Vec::with_capacity(d.relations.len());
    for (i, [l, r]) in d.relations.iter().enumerate() {
        if l.is_empty() || r.is_empty() {
            return Err(IoError::Schema(format!("relations[{i}]: empty side")));
        }
        rels.push((l.join(" "), r.join(" ")));
    }
    Ok(Presentation::from_ids(q, &rels)?)
}

fn index_of(elements: &[String]) -> BTreeMap<&str, usize> {
    elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect()
}

fn lookup(index: &BTreeMap<&str, usize>, name: &str) -> Result<usize, IoError> {
    index.get(name).copied().ok_or_else(|| IoError::Heap(HeapError::UnknownElement(name.to_string())))
}

pub fn to_ternary(d: &HeapDoc) -> Result<TernaryOp, IoError> {
    let n = d.elements.len();
    let index = index_of(&d.elements);
    let mut table = vec![None; n * n * n];
    for ([a, b, c], out) in &d.op {
        let k = (lookup(&index, a)? * n + lookup(&index, b)?) * n + lookup(&index, c)?;
        if table[k].replace(lookup(&index, out)?).is_some() {
            return Err(IoError::Schema(format!("op: duplicate row for ({a}, {b}, {c})")));
        }
    }
    let mut full = Vec::with_capacity(table.len());
    for (k, v) in table.into_iter().enumerate() {
        match v {
            Some(v) => full.push(v),
            None => {
                let names = vec![d.elements[k / (n * n)].clone(), d.elements[k / n % n].clone(), d.elements[k % n].clone()];
                return Err(IoError::Heap(HeapError::MissingEntry(names)));
            }
        }
    }
    Ok(TernaryOp::new(d.elements.clone(), full)?)
}

/// Largest group order accepted by default; validation is exhaustive.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 64;

pub fn to_group(d: &GroupDoc) -> Result<GroupTable, IoError> {
    to_group_bounded(d, DEFAULT_MAX_GROUP_ORDER)
}

pub fn to_group_bounded(d: &GroupDoc, max_order: usize) -> Result<GroupTable, IoError> {
    let n = d.elements.len();
    if n > max_order {
        return Err(IoError::Parameter(format!("group of order {n} exceeds the bound {max_order}")));
    }
    let index = index_of(&d.elements);
    if d.mul.len() != n || d.mul.iter().any(|r| r.len() != n) {
        return Err(IoError::Schema(format!("mul: expected a {n}×{n} table")));
    }
    let mut mul = Vec::with_capacity(n * n);
    for row in &d.mul {
        for x in row {
            mul.push(lookup(&index, x)?);
        }
    }
    Ok(GroupTable::new(d.elements.clone(), mul, lookup(&index, &d.unit)?)?)
}

/// The solution a document determines: given directly, extracted from a
/// presentation, or built on the pair groupoid of a heap or group.
pub fn load_solution(doc: &Document) -> Result<BraidedQuiver, IoError> {
    match doc {
        Document::Solution(d) => to_solution(d),
        Document::Presentation(d) => Ok(extract_solution(&to_presentation(d)?)?),
        Document::Heap(d) => Ok(heap::solution_from_ternary(&to_ternary(d)?)?),
        Document::Group(d) => Ok(heap::ph_sigma(heap::heap_from_group(&to_group(d)?).op())),
        Document::Quiver(_) => Err(IoError::WrongKind { expected: "solution", found: "quiver" }),
    }
}

/// A built-in example by name; `n` is the order for `zk` and the exponent for `z2n`.
pub fn builtin_example(name: &str, n: Option<usize>) -> Result<Document, IoError> {
    match name {
        "z3" => Ok(solution_document(&builtin::z3())),
        "zk" => {
            let k = n.unwrap_or(3);
            if !(1..=12).contains(&k) {
                return Err(IoError::Parameter(format!("zk needs 1 ≤ n ≤ 12, got {k}")));
            }
            Ok(solution_document(&builtin::zk(k)))
        }
        "z2n" => {
            let k = n.unwrap_or(2);
            if !(1..=4).contains(&k) {
                return Err(IoError::Parameter(format!("z2n needs 1 ≤ n ≤ 4, got {k}")));
            }
            Ok(solution_document(&builtin::z2n(k)))
        }
        "pres0" => Ok(presentation_document(&builtin::pres0())),
        "pres1" => Ok(presentation_document(&builtin::pres1())),
        "pres2" => Ok(presentation_document(&builtin::pres2())),
        other => Err(IoError::UnknownExample(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_stable() {
        for name in ["z3", "z2n", "pres0", "pres1", "pres2"] {
            let doc = builtin_example(name, None).unwrap();
            let text = serialize(&doc);
            let back = parse(&text).unwrap();
            assert_eq!(serialize(&back), text);
            load_solution(&back).unwrap();
        }
    }

    #[test]
    fn z3_document_sizes() {
        let Document::Solution(d) = builtin_example("z3", None).unwrap() else { panic!() };
        assert_eq!(d.vertices.len(), 3);
        assert_eq!(d.arrows.len(), 9);
        assert_eq!(d.sigma.len(), 27);
        let Document::Presentation(p) = builtin_example("pres1", None).unwrap() else { panic!() };
        assert_eq!(p.relations.len(), 3);
    }

    #[test]
    fn missing_sigma_is_named() {
        let text = r#"{"kind":"solution","format_version":1,"vertices":[],"arrows":[]}"#;
        let err = parse(text).unwrap_err();
        assert!(matches!(err, IoError::Schema(_)));
        assert!(err.to_string().contains("sigma"));
    }

    #[test]
    fn syntax_kind_and_version_errors() {
        assert!(matches!(parse("{"), Err(IoError::Syntax(_))));
        assert!(matches!(parse(r#"{"kind":"braid"}"#), Err(IoError::Schema(_))));
        let text = r#"{"kind":"quiver","format_version":2,"vertices":[],"arrows":[]}"#;
        assert!(matches!(parse(text), Err(IoError::Version(2))));
    }

    #[test]
    fn heap_and_group_documents_load() {
        let g = GroupTable::symmetric(3);
        let doc = parse(&serialize(&group_document(&g))).unwrap();
        let Document::Group(d) = &doc else { panic!() };
        assert_eq!(to_group(d).unwrap().order(), 6);
        let h = heap_document(&builtin::zk_heap(3));
        let s = load_solution(&parse(&serialize(&h)).unwrap()).unwrap();
        assert_eq!(s.table(), builtin::z3().table());
    }

    #[test]
    fn unknown_example() {
        assert!(matches!(builtin_example("pres9", None), Err(IoError::UnknownExample(_))));
        assert!(matches!(builtin_example("z2n", Some(9)), Err(IoError::Parameter(_))));
        let Document::Group(d) = group_document(&GroupTable::cyclic(5)) else { panic!() };
        assert!(matches!(to_group_bounded(&d, 4), Err(IoError::Parameter(_))));
    }
}
