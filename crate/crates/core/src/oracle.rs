//! Brute-force reference computations that do not use the RC calculus.
//!
//! Classes are found by breadth-first search applying `x|y ↔ σ(x|y)` at
//! every position; they are finite because the relations preserve length.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::garside::{GarsideError, Structure};
use crate::par;
use crate::quiver::PathWord;
use crate::ybm::BraidedQuiver;

pub const DEFAULT_CAP: usize = 10_000;

/// Normal form as `(target, key)` per entry.
type NfKey = Vec<(usize, Vec<usize>)>;

/// σ together with its preimage table.
pub struct Oracle<'a> {
    solution: &'a BraidedQuiver,
    preimages: HashMap<(usize, usize), Vec<(usize, usize)>>,
}

impl<'a> Oracle<'a> {
    pub fn new(solution: &'a BraidedQuiver) -> Self {
        let mut preimages: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (x, y, u, v) in solution.table() {
            preimages.entry((u, v)).or_default().push((x, y));
        }
        Oracle { solution, preimages }
    }

    fn neighbours(&self, p: &PathWord) -> Vec<PathWord> {
        let mut out = Vec::new();
        for i in 0..p.len().saturating_sub(1) {
            let (x, y) = (p.edges[i], p.edges[i + 1]);
            let mut swaps = vec![self.solution.sigma(x, y)];
            swaps.extend(self.preimages.get(&(x, y)).into_iter().flatten().copied());
            for (u, v) in swaps {
                let mut edges = p.edges.clone();
                edges[i] = u;
                edges[i + 1] = v;
                out.push(PathWord { base: p.base, edges });
            }
        }
        out
    }

    /// The full class of `p`, sorted; the first element is the lexicographic minimum.
    pub fn class(&self, p: &PathWord, cap: usize) -> Result<Vec<PathWord>, GarsideError> {
        let mut seen = BTreeSet::from([p.clone()]);
        let mut queue = VecDeque::from([p.clone()]);
        while let Some(cur) = queue.pop_front() {
            for n in self.neighbours(&cur) {
                if seen.insert(n.clone()) {
                    if seen.len() > cap {
                        return Err(GarsideError::CapExceeded(cap));
                    }
                    queue.push_back(n);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Classes partitioning every path of length `len` from `v`.
    pub fn classes_from(&self, v: usize, len: usize, cap: usize) -> Result<Vec<Vec<PathWord>>, GarsideError> {
        let q = self.solution.quiver();
        let mut assigned = BTreeSet::new();
        let mut classes = Vec::new();
        for p in q.enumerate_paths(Some(v), len) {
            if assigned.contains(&p) {
                continue;
            }
            let c = self.class(&p, cap)?;
            assigned.extend(c.iter().cloned());
            classes.push(c);
        }
        Ok(classes)
    }
}

pub fn bfs_class(s: &BraidedQuiver, p: &PathWord, cap: usize) -> Result<Vec<PathWord>, GarsideError> {
    s.quiver().path_from(p.base, p.edges.clone())?;
    Oracle::new(s).class(p, cap)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OracleReport {
    pub max_len: usize,
    pub paths: usize,
    pub classes: usize,
    pub same_endpoint_pairs: u64,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares normal-form equality with class membership on every pair of
/// same-endpoint paths of length at most `max_len`.
pub fn oracle_check(st: &Structure, max_len: usize, cap: usize) -> Result<OracleReport, GarsideError> {
    let s = st.solution();
    let q = s.quiver();
    let oracle = Oracle::new(s);
    let mut report = OracleReport { max_len, ..Default::default() };
    for len in 0..=max_len {
        for v in 0..q.vertex_count() {
            let classes = oracle.classes_from(v, len, cap)?;
            let flat: Vec<(usize, PathWord)> =
                classes.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |p| (i, p.clone()))).collect();
            let nfs = par::map(flat.len(), |k| st.normal_form(&flat[k].1));
            let mut by_nf: BTreeMap<(usize, NfKey), BTreeSet<usize>> = BTreeMap::new();
            let mut class_nf: BTreeMap<usize, BTreeSet<NfKey>> = BTreeMap::new();
            let mut per_target: BTreeMap<usize, u64> = BTreeMap::new();
            for ((ci, p), nf) in flat.iter().zip(nfs) {
                let nf = nf?;
                if p.len() != len || nf.length != len {
                    report.mismatches.push(format!("length drift at {}", q.format_path(p)));
                }
                let key: NfKey = nf.nf.iter().map(|e| (e.target, e.key.clone())).collect();
                by_nf.entry((nf.target, key.clone())).or_default().insert(*ci);
                class_nf.entry(*ci).or_default().insert(key);
                *per_target.entry(q.target_of(p)).or_default() += 1;
            }
            for (ci, keys) in &class_nf {
                if keys.len() > 1 {
                    report.mismatches.push(format!("class of {} has {} normal forms", q.format_path(&classes[*ci][0]), keys.len()));
                }
            }
            for cis in by_nf.values() {
                if cis.len() > 1 {
                    let reps: Vec<String> = cis.iter().map(|&c| q.format_path(&classes[c][0])).collect();
                    report.mismatches.push(format!("distinct classes share a normal form: {}", reps.join(" / ")));
                }
            }
            report.paths += flat.len();
            report.classes += classes.len();
            report.same_endpoint_pairs += per_target.values().map(|n| n * n).sum::<u64>();
        }
    }
    Ok(report)
}

/// Size of `E` (identities included) found without the RC calculus: for
/// every nonempty atom set `I` at a vertex, the shortest class having a
/// member starting with each atom of `I`. Errors if such a class is not
/// unique at its length.
pub fn family_size_by_closure(s: &BraidedQuiver, cap: usize) -> Result<usize, String> {
    let q = s.quiver();
    let oracle = Oracle::new(s);
    let max_len = q.max_out_degree();
    let mut total = q.vertex_count();
    for v in 0..q.vertex_count() {
        let out = q.out_arrows(v);
        let mut by_len: Vec<Vec<(Vec<PathWord>, BTreeSet<usize>)>> = Vec::new();
        for len in 0..=max_len {
            let classes = oracle.classes_from(v, len, cap).map_err(|e| e.to_string())?;
            by_len.push(
                classes
                    .into_iter()
                    .map(|c| {
                        let firsts = c.iter().filter_map(|p| p.edges.first().copied()).collect();
                        (c, firsts)
                    })
                    .collect(),
            );
        }
        let mut found: BTreeSet<PathWord> = BTreeSet::new();
        for mask in 1u64..(1u64 << out.len()) {
            let atoms: BTreeSet<usize> = (0..out.len()).filter(|i| mask >> i & 1 == 1).map(|i| out[i]).collect();
            let hit = by_len.iter().find_map(|classes| {
                let hits: Vec<&Vec<PathWord>> =
                    classes.iter().filter(|(_, f)| atoms.is_subset(f)).map(|(c, _)| c).collect();
                (!hits.is_empty()).then_some(hits)
            });
            match hit.as_deref() {
                Some([c]) => {
                    found.insert(c[0].clone());
                }
                Some(many) => return Err(format!("{} minimal common multiples at {}", many.len(), q.vertex_name(v))),
                None => return Err(format!("no common multiple of length ≤ {max_len} at {}", q.vertex_name(v))),
            }
        }
        total += found.len();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn pres1_class() {
        let s = builtin::pres1_solution();
        let q = s.quiver();
        let c = bfs_class(&s, &q.parse_path("[1,2] [2,1]").unwrap(), DEFAULT_CAP).unwrap();
        let shown: Vec<String> = c.iter().map(|p| q.format_path(p)).collect();
        assert_eq!(shown, ["[1,2] [2,1]", "[1,3] [3,1]"]);
        let e = bfs_class(&s, &PathWord::empty(0), DEFAULT_CAP).unwrap();
        assert_eq!(e, vec![PathWord::empty(0)]);
    }

    #[test]
    fn cap_is_enforced() {
        let s = builtin::z3();
        let q = s.quiver();
        let p = q.parse_path("[0,1] [1,0] [0,1]").unwrap();
        assert_eq!(bfs_class(&s, &p, 1), Err(GarsideError::CapExceeded(1)));
    }

    #[test]
    fn z3_family_size_by_closure() {
        assert_eq!(family_size_by_closure(&builtin::z3(), DEFAULT_CAP), Ok(24));
    }

    #[test]
    fn small_oracle_sweeps() {
        let st = Structure::new(builtin::pres1_solution()).unwrap();
        let r = oracle_check(&st, 3, DEFAULT_CAP).unwrap();
        assert!(r.agrees(), "{:?}", r.mismatches);
    }
}
