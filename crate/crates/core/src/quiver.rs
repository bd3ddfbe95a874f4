//! Finite quivers and composable path words.
//!
//! Vertices and arrows are interned: a [`Quiver`] hands out dense indices
//! and every other module works with those. Arrows built through
//! [`Quiver::new`] are stored in byte order of their ids, so index order
//! and lexicographic order coincide for them.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Prefix reserved for inserted unit loops and for empty paths in path syntax.
pub const UNIT_PREFIX: &str = "eps:";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Arrow {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Arrow { id: id.into(), source: source.into(), target: target.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate arrow id {0:?}")]
    DuplicateArrow(String),
    #[error("dangling endpoint: arrow {arrow:?} refers to unknown vertex {vertex:?}")]
    DanglingEndpoint { arrow: String, vertex: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("non-composable pair at index {index}: {prev:?} then {next:?}")]
    NotComposable { index: usize, prev: String, next: String },
    #[error("base mismatch: path based at {base:?} starts with arrow {first:?} from {source_vertex:?}")]
    BaseMismatch { base: String, first: String, source_vertex: String },
    #[error("cannot concatenate: first path ends at {target:?}, second starts at {source_vertex:?}")]
    ConcatMismatch { target: String, source_vertex: String },
    #[error("arrow id {0:?} collides with the reserved unit namespace")]
    ReservedId(String),
    #[error("empty path expression")]
    EmptyExpression,
}

/// A composable arrow sequence with an explicit base vertex.
///
/// `base` is the source vertex; for the empty path it is the only vertex
/// the path knows about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathWord {
    pub base: usize,
    pub edges: Vec<usize>,
}

impl PathWord {
    pub fn empty(base: usize) -> Self {
        PathWord { base, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self) -> usize {
        self.base
    }
}

#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vindex: HashMap<String, usize>,
    aindex: HashMap<String, usize>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    pos_out: Vec<usize>,
    pos_in: Vec<usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    /// Builds a validated quiver; vertices and arrows are sorted by id.
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut vertices = vertices;
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(QuiverError::DuplicateVertex(w[0].clone()));
        }
        let mut arrows = arrows;
        arrows.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = arrows.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(QuiverError::DuplicateArrow(w[0].id.clone()));
        }
        Self::from_sorted(vertices, arrows)
    }

    fn from_sorted(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let vindex: HashMap<String, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut aindex = HashMap::with_capacity(arrows.len());
        let mut src = Vec::with_capacity(arrows.len());
        let mut tgt = Vec::with_capacity(arrows.len());
        for (i, a) in arrows.iter().enumerate() {
            if aindex.insert(a.id.clone(), i).is_some() {
                return Err(QuiverError::DuplicateArrow(a.id.clone()));
            }
            for end in [&a.source, &a.target] {
                if !vindex.contains_key(end) {
                    return Err(QuiverError::DanglingEndpoint {
                        arrow: a.id.clone(),
                        vertex: end.clone(),
                    });
                }
            }
            src.push(vindex[&a.source]);
            tgt.push(vindex[&a.target]);
        }
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for i in 0..arrows.len() {
            out[src[i]].push(i);
            inc[tgt[i]].push(i);
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort_by(|&a, &b| arrows[a].id.cmp(&arrows[b].id));
        }
        let mut pos_out = vec![0; arrows.len()];
        let mut pos_in = vec![0; arrows.len()];
        for list in &out {
            for (k, &a) in list.iter().enumerate() {
                pos_out[a] = k;
            }
        }
        for list in &inc {
            for (k, &a) in list.iter().enumerate() {
                pos_in[a] = k;
            }
        }
        Ok(Quiver { vertices, arrows, vindex, aindex, src, tgt, out, inc, pos_out, pos_in })
    }

    /// The quiver with one fresh loop `eps:<v>` per vertex appended.
    ///
    /// Original arrow indices are kept; the loop at vertex `v` has index
    /// `arrow_count() + v`.
    pub fn with_unit_loops(&self) -> Result<Self, QuiverError> {
        if let Some(a) = self.arrows.iter().find(|a| a.id.starts_with(UNIT_PREFIX)) {
            return Err(QuiverError::ReservedId(a.id.clone()));
        }
        let mut arrows = self.arrows.clone();
        for v in &self.vertices {
            arrows.push(Arrow::new(unit_id(v), v.clone(), v.clone()));
        }
        Self::from_sorted(self.vertices.clone(), arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn arrow_id(&self, a: usize) -> &str {
        &self.arrows[a].id
    }

    pub fn vertex(&self, name: &str) -> Result<usize, QuiverError> {
        self.vindex.get(name).copied().ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn arrow(&self, id: &str) -> Result<usize, QuiverError> {
        self.aindex.get(id).copied().ok_or_else(|| QuiverError::UnknownArrow(id.to_string()))
    }

    pub fn source(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.tgt[a]
    }

    /// Arrows leaving `v`, in id order.
    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Arrows entering `v`, in id order.
    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Position of `a` in `out_arrows(source(a))`.
    pub fn out_position(&self, a: usize) -> usize {
        self.pos_out[a]
    }

    /// Position of `a` in `in_arrows(target(a))`.
    pub fn in_position(&self, a: usize) -> usize {
        self.pos_in[a]
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Validated path from indices.
    pub fn path_from(&self, base: usize, edges: Vec<usize>) -> Result<PathWord, QuiverError> {
        if let Some(&first) = edges.first() {
            if self.src[first] != base {
                return Err(QuiverError::BaseMismatch {
                    base: self.vertices[base].clone(),
                    first: self.arrows[first].id.clone(),
                    source_vertex: self.vertices[self.src[first]].clone(),
                });
            }
        }
        for (i, w) in edges.windows(2).enumerate() {
            if self.tgt[w[0]] != self.src[w[1]] {
                return Err(QuiverError::NotComposable {
                    index: i + 1,
                    prev: self.arrows[w[0]].id.clone(),
                    next: self.arrows[w[1]].id.clone(),
                });
            }
        }
        Ok(PathWord { base, edges })
    }

    /// Validated path from ids.
    pub fn path(&self, base: &str, edges: &[&str]) -> Result<PathWord, QuiverError> {
        let base = self.vertex(base)?;
        let edges = edges.iter().map(|e| self.arrow(e)).collect::<Result<Vec<_>, _>>()?;
        self.path_from(base, edges)
    }

    /// Path consisting of the given arrows; the base is the first arrow's source.
    pub fn path_of(&self, edges: &[usize]) -> Result<PathWord, QuiverError> {
        let base = self.src[*edges.first().ok_or(QuiverError::EmptyExpression)?];
        self.path_from(base, edges.to_vec())
    }

    pub fn atom(&self, a: usize) -> PathWord {
        PathWord { base: self.src[a], edges: vec![a] }
    }

    pub fn target_of(&self, p: &PathWord) -> usize {
        p.edges.last().map_or(p.base, |&a| self.tgt[a])
    }

    pub fn concat(&self, p: &PathWord, q: &PathWord) -> Result<PathWord, QuiverError> {
        let t = self.target_of(p);
        if t != q.base {
            return Err(QuiverError::ConcatMismatch {
                target: self.vertices[t].clone(),
                source_vertex: self.vertices[q.base].clone(),
            });
        }
        let mut edges = p.edges.clone();
        edges.extend_from_slice(&q.edges);
        Ok(PathWord { base: p.base, edges })
    }

    /// All composable paths of the given length, lexicographic by arrow id.
    pub fn enumerate_paths(&self, source: Option<usize>, length: usize) -> Vec<PathWord> {
        let mut starts: Vec<usize> = match source {
            Some(v) => vec![v],
            None => (0..self.vertices.len()).collect(),
        };
        if length == 0 {
            starts.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
            return starts.into_iter().map(PathWord::empty).collect();
        }
        let mut firsts: Vec<usize> = starts.iter().flat_map(|&v| self.out[v].iter().copied()).collect();
        firsts.sort_by(|&a, &b| self.arrows[a].id.cmp(&self.arrows[b].id));
        let mut result = Vec::new();
        let mut stack = Vec::with_capacity(length);
        for a in firsts {
            stack.push(a);
            self.extend_paths(&mut stack, length, &mut result);
            stack.pop();
        }
        result
    }

    fn extend_paths(&self, stack: &mut Vec<usize>, length: usize, result: &mut Vec<PathWord>) {
        if stack.len() == length {
            result.push(PathWord { base: self.src[stack[0]], edges: stack.clone() });
            return;
        }
        let t = self.tgt[*stack.last().expect("nonempty stack")];
        for &a in &self.out[t] {
            stack.push(a);
            self.extend_paths(stack, length, result);
            stack.pop();
        }
    }

    /// Parses `eps:<v>` or a space-separated list of arrow ids.
    pub fn parse_path(&self, text: &str) -> Result<PathWord, QuiverError> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix(UNIT_PREFIX) {
            return Ok(PathWord::empty(self.vertex(v)?));
        }
        let ids: Vec<&str> = text.split_whitespace().collect();
        if ids.is_empty() {
            return Err(QuiverError::EmptyExpression);
        }
        let edges = ids.iter().map(|e| self.arrow(e)).collect::<Result<Vec<_>, _>>()?;
        self.path_from(self.src[edges[0]], edges)
    }

    pub fn display_path<'a>(&'a self, p: &'a PathWord) -> PathDisplay<'a> {
        PathDisplay { quiver: self, path: p }
    }

    pub fn format_path(&self, p: &PathWord) -> String {
        self.display_path(p).to_string()
    }
}

pub fn unit_id(vertex: &str) -> String {
    format!("{UNIT_PREFIX}{vertex}")
}

pub struct PathDisplay<'a> {
    quiver: &'a Quiver,
    path: &'a PathWord,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.edges.is_empty() {
            return write!(f, "{}{}", UNIT_PREFIX, self.quiver.vertex_name(self.path.base));
        }
        for (i, &a) in self.path.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.quiver.arrow_id(a))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pres1_quiver() -> Quiver {
        let arrows = [("1", "2"), ("2", "1"), ("2", "3"), ("3", "2"), ("3", "1"), ("1", "3")]
            .iter()
            .map(|(s, t)| Arrow::new(format!("[{s},{t}]"), *s, *t))
            .collect();
        Quiver::new(vec!["1".into(), "2".into(), "3".into()], arrows).unwrap()
    }

    #[test]
    fn builds_and_rejects() {
        let q = pres1_quiver();
        assert_eq!(q.arrow_count(), 6);
        let empty = Quiver::new(vec!["a".into()], vec![]).unwrap();
        assert_eq!(empty.arrow_count(), 0);
        let err = Quiver::new(vec!["1".into(), "2".into(), "3".into()], vec![Arrow::new("x", "4", "1")])
            .unwrap_err();
        assert!(err.to_string().contains("dangling endpoint"));
        assert!(matches!(
            Quiver::new(vec!["1".into(), "1".into()], vec![]),
            Err(QuiverError::DuplicateVertex(_))
        ));
        assert!(matches!(
            Quiver::new(vec!["1".into()], vec![Arrow::new("x", "1", "1"), Arrow::new("x", "1", "1")]),
            Err(QuiverError::DuplicateArrow(_))
        ));
    }

    #[test]
    fn multi_arrows_and_loops_allowed() {
        let q = Quiver::new(
            vec!["a".into(), "b".into()],
            vec![Arrow::new("x", "a", "b"), Arrow::new("y", "a", "b"), Arrow::new("l", "a", "a")],
        )
        .unwrap();
        assert_eq!(q.out_arrows(q.vertex("a").unwrap()).len(), 3);
    }

    #[test]
    fn path_validation() {
        let q = pres1_quiver();
        assert_eq!(q.path("1", &["[1,2]", "[2,3]"]).unwrap().len(), 2);
        assert!(q.path("2", &[]).unwrap().is_empty());
        match q.path("1", &["[1,2]", "[1,3]"]) {
            Err(QuiverError::NotComposable { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(q.path("2", &["[1,2]"]), Err(QuiverError::BaseMismatch { .. })));
    }

    #[test]
    fn concat_and_units() {
        let q = pres1_quiver();
        let p = q.path("1", &["[1,2]"]).unwrap();
        let r = q.path("2", &["[2,3]"]).unwrap();
        assert_eq!(q.concat(&p, &r).unwrap(), q.path("1", &["[1,2]", "[2,3]"]).unwrap());
        assert_eq!(q.concat(&p, &PathWord::empty(q.target_of(&p))).unwrap(), p);
        let s = q.path("2", &["[2,1]"]).unwrap();
        assert_eq!(q.concat(&PathWord::empty(q.vertex("2").unwrap()), &s).unwrap(), s);
        assert!(q.concat(&p, &p).is_err());
    }

    #[test]
    fn enumeration() {
        let q = pres1_quiver();
        assert_eq!(q.enumerate_paths(None, 1).len(), 6);
        let from1: Vec<String> =
            q.enumerate_paths(Some(q.vertex("1").unwrap()), 2).iter().map(|p| q.format_path(p)).collect();
        assert_eq!(from1, ["[1,2] [2,1]", "[1,2] [2,3]", "[1,3] [3,1]", "[1,3] [3,2]"]);
        assert_eq!(q.enumerate_paths(None, 0).len(), 3);
    }

    #[test]
    fn parse_round_trip() {
        let q = pres1_quiver();
        let p = q.parse_path("[1,2] [2,3]").unwrap();
        assert_eq!(q.parse_path(&q.format_path(&p)).unwrap(), p);
        assert_eq!(q.parse_path("eps:2").unwrap(), PathWord::empty(1));
        assert!(q.parse_path("").is_err());
    }

    #[test]
    fn unit_loops() {
        let q = pres1_quiver();
        let h = q.with_unit_loops().unwrap();
        assert_eq!(h.arrow_count(), 9);
        assert_eq!(h.arrow_id(6), "eps:1");
        assert_eq!(h.arrow_id(0), q.arrow_id(0));
        let bad = Quiver::new(vec!["1".into()], vec![Arrow::new("eps:1", "1", "1")]).unwrap();
        assert!(matches!(bad.with_unit_loops(), Err(QuiverError::ReservedId(_))));
    }

    proptest! {
        #[test]
        fn enumeration_counts_recurse(n in 1usize..5, v in 0usize..3) {
            let q = pres1_quiver();
            let direct = q.enumerate_paths(Some(v), n).len();
            let via: usize = q.out_arrows(v).iter().map(|&a| q.enumerate_paths(Some(q.target(a)), n - 1).len()).sum();
            prop_assert_eq!(direct, via);
            for p in q.enumerate_paths(Some(v), n) {
                prop_assert!(q.path_from(p.base, p.edges.clone()).is_ok());
            }
        }

        #[test]
        fn concat_associative(a in 0usize..6, n1 in 0usize..3, n2 in 0usize..3, n3 in 0usize..3, seed in 0usize..1000) {
            let q = pres1_quiver();
            let walk = |start: usize, len: usize, salt: usize| {
                let mut v = start;
                let mut edges = Vec::new();
                for i in 0..len {
                    let outs = q.out_arrows(v);
                    let e = outs[(salt + i) % outs.len()];
                    edges.push(e);
                    v = q.target(e);
                }
                PathWord { base: start, edges }
            };
            let p = walk(q.source(a), n1, seed);
            let r = walk(q.target_of(&p), n2, seed / 3);
            let s = walk(q.target_of(&r), n3, seed / 7);
            let left = q.concat(&q.concat(&p, &r).unwrap(), &s).unwrap();
            let right = q.concat(&p, &q.concat(&r, &s).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
