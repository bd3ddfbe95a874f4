//! The structure category: complements, lcms, the Garside family of
//! right-lcms of atoms, and greedy normal forms.
//!
//! Everything is computed through the completed RC and co-RC systems of
//! the solution. Paths handed in and returned are over the original quiver;
//! only [`Structure::theta_star`] and [`Structure::theta_bullet`] expose
//! words with unit letters.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use thiserror::Error;

use crate::par;
use crate::quiver::{PathWord, Quiver, QuiverError};
use crate::rc::{derive_bullet, derive_star, CoRcSystem, RcError, RcSystem};
use crate::ybm::BraidedQuiver;

pub use crate::oracle::bfs_class;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GarsideError {
    #[error(transparent)]
    Rc(#[from] RcError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("empty atom set")]
    EmptySet,
    #[error("atoms do not share a source")]
    MixedSources,
    #[error("atoms do not share a target")]
    MixedTargets,
    #[error("atom {0:?} listed twice")]
    DuplicateAtom(String),
    #[error("source mismatch: {0:?} vs {1:?}")]
    SourceMismatch(String, String),
    #[error("target mismatch: {0:?} vs {1:?}")]
    TargetMismatch(String, String),
    #[error("class exceeds cap of {0} paths")]
    CapExceeded(usize),
    #[error("{0} is not in the Garside family")]
    NotInFamily(String),
}

/// One element `Δ_I` of the Garside family, or an identity.
#[derive(Debug, Clone)]
pub struct GarsideEntry {
    pub source: usize,
    pub target: usize,
    /// Smallest atom set found to generate this element.
    pub atoms: Vec<usize>,
    /// Every atom left-dividing the element; this determines it.
    pub key: Vec<usize>,
    pub repr: PathWord,
}

impl GarsideEntry {
    pub fn identity(v: usize) -> Self {
        GarsideEntry { source: v, target: v, atoms: vec![], key: vec![], repr: PathWord::empty(v) }
    }

    pub fn is_identity(&self) -> bool {
        self.key.is_empty()
    }

    pub fn len(&self) -> usize {
        self.repr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.repr.is_empty()
    }
}

impl PartialEq for GarsideEntry {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.key == other.key
    }
}

impl Eq for GarsideEntry {}

/// An element of the structure category in strict greedy normal form.
#[derive(Debug, Clone)]
pub struct CatElement {
    pub source: usize,
    pub target: usize,
    pub length: usize,
    pub nf: Vec<GarsideEntry>,
}

impl CatElement {
    /// Concatenation of the entry representatives.
    pub fn repr(&self) -> PathWord {
        PathWord { base: self.source, edges: self.nf.iter().flat_map(|e| e.repr.edges.iter().copied()).collect() }
    }
}

impl PartialEq for CatElement {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.nf == other.nf
    }
}

impl Eq for CatElement {}

/// `E` minus identities, plus the vertex count for the identities.
#[derive(Debug, Clone)]
pub struct GarsideFamily {
    pub entries: Vec<GarsideEntry>,
    pub vertices: usize,
}

impl GarsideFamily {
    /// Number of elements, identities included.
    pub fn len(&self) -> usize {
        self.entries.len() + self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_length(&self) -> usize {
        self.entries.iter().map(GarsideEntry::len).max().unwrap_or(0)
    }

    pub fn contains(&self, e: &GarsideEntry) -> bool {
        e.is_identity() || self.entries.contains(e)
    }
}

/// An involutive non-degenerate solution with its completed RC calculus.
#[derive(Debug)]
pub struct Structure {
    solution: BraidedQuiver,
    rc: RcSystem,
    co: CoRcSystem,
    nf_cache: Mutex<HashMap<PathWord, CatElement>>,
}

impl Clone for Structure {
    fn clone(&self) -> Self {
        Structure { solution: self.solution.clone(), rc: self.rc.clone(), co: self.co.clone(), nf_cache: Mutex::default() }
    }
}

impl Structure {
    pub fn new(solution: BraidedQuiver) -> Result<Self, GarsideError> {
        let rc = derive_star(&solution)?.complete()?;
        let co = derive_bullet(&solution)?.complete()?;
        Ok(Structure { solution, rc, co, nf_cache: Mutex::default() })
    }

    pub fn solution(&self) -> &BraidedQuiver {
        &self.solution
    }

    pub fn quiver(&self) -> &Quiver {
        self.solution.quiver()
    }

    /// The quiver with unit loops appended.
    pub fn completed_quiver(&self) -> &Quiver {
        self.rc.completed_quiver().expect("completed at construction")
    }

    pub fn rc(&self) -> &RcSystem {
        &self.rc
    }

    pub fn co(&self) -> &CoRcSystem {
        &self.co
    }

    fn name(&self, v: usize) -> String {
        self.quiver().vertex_name(v).to_string()
    }

    fn strip(&self, p: &PathWord) -> PathWord {
        self.rc.strip_units(p)
    }

    /// `p ⋆ q` over the completed quiver, based at `t(p)`.
    pub fn theta_star(&self, p: &PathWord, q: &PathWord) -> Result<PathWord, GarsideError> {
        Ok(self.rc.grid_star(p, q)?.0)
    }

    /// `p • q` over the completed quiver, ending at `s(p)`.
    pub fn theta_bullet(&self, p: &PathWord, q: &PathWord) -> Result<PathWord, GarsideError> {
        Ok(self.co.grid_bullet(p, q)?.0)
    }

    /// `u \ v`: the path with `u · (u \ v)` the right-lcm of `u` and `v`.
    pub fn right_complement(&self, u: &PathWord, v: &PathWord) -> Result<PathWord, GarsideError> {
        Ok(self.strip(&self.theta_star(u, v)?))
    }

    pub fn right_lcm(&self, u: &PathWord, v: &PathWord) -> Result<PathWord, GarsideError> {
        Ok(self.quiver().concat(u, &self.right_complement(u, v)?)?)
    }

    /// The path `w` with `w · u` the left-lcm of `u` and `v`.
    pub fn left_complement(&self, u: &PathWord, v: &PathWord) -> Result<PathWord, GarsideError> {
        Ok(self.strip(&self.theta_bullet(u, v)?))
    }

    pub fn left_lcm(&self, u: &PathWord, v: &PathWord) -> Result<PathWord, GarsideError> {
        Ok(self.quiver().concat(&self.left_complement(u, v)?, u)?)
    }

    /// `e ≼ u`, i.e. `u = e · w` for some `w`.
    pub fn left_divides(&self, e: &PathWord, u: &PathWord) -> Result<bool, GarsideError> {
        if e.base != u.base {
            return Err(GarsideError::SourceMismatch(self.name(e.base), self.name(u.base)));
        }
        Ok(self.right_complement(u, e)?.is_empty())
    }

    /// `u = w · e` for some `w`.
    pub fn right_divides(&self, e: &PathWord, u: &PathWord) -> Result<bool, GarsideError> {
        let q = self.quiver();
        let (te, tu) = (q.target_of(e), q.target_of(u));
        if te != tu {
            return Err(GarsideError::TargetMismatch(self.name(te), self.name(tu)));
        }
        Ok(self.left_complement(u, e)?.is_empty())
    }

    /// Atoms left-dividing `u`, in index order.
    pub fn atom_divisors(&self, u: &PathWord) -> Vec<usize> {
        let q = self.quiver();
        q.out_arrows(u.base)
            .iter()
            .copied()
            .filter(|&a| self.left_divides(&q.atom(a), u).expect("same source"))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Atoms right-dividing `u`, in index order.
    pub fn right_atom_divisors(&self, u: &PathWord) -> Vec<usize> {
        let q = self.quiver();
        q.in_arrows(q.target_of(u))
            .iter()
            .copied()
            .filter(|&a| self.right_divides(&q.atom(a), u).expect("same target"))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    fn distinct(&self, atoms: &[usize]) -> Result<(), GarsideError> {
        if atoms.is_empty() {
            return Err(GarsideError::EmptySet);
        }
        let mut seen = BTreeSet::new();
        for &a in atoms {
            if a >= self.quiver().arrow_count() {
                return Err(QuiverError::UnknownArrow(a.to_string()).into());
            }
            if !seen.insert(a) {
                return Err(GarsideError::DuplicateAtom(self.quiver().arrow_id(a).to_string()));
            }
        }
        Ok(())
    }

    /// `[Ω_1(x_1), Ω_2(x_1,x_2), …, Ω_n(x_1,…,x_n)]` as completed letters.
    pub fn omegas(&self, atoms: &[usize]) -> Result<Vec<usize>, GarsideError> {
        self.distinct(atoms)?;
        let q = self.quiver();
        if atoms.iter().any(|&a| q.source(a) != q.source(atoms[0])) {
            return Err(GarsideError::MixedSources);
        }
        let mut w = atoms.to_vec();
        let mut out = Vec::with_capacity(w.len());
        out.push(w[0]);
        for k in 1..w.len() {
            let pivot = w[k - 1];
            for x in &mut w[k..] {
                *x = self.rc.star_hat(pivot, *x);
            }
            out.push(w[k]);
        }
        Ok(out)
    }

    /// `Δ_I`, the right-lcm of a set of atoms with a common source.
    pub fn delta(&self, atoms: &[usize]) -> Result<PathWord, GarsideError> {
        let base = self.quiver().source(*atoms.first().ok_or(GarsideError::EmptySet)?);
        let letters = self.omegas(atoms)?;
        Ok(self.strip(&PathWord { base, edges: letters }))
    }

    fn omega_tilde_memo(&self, ys: &[usize], memo: &mut HashMap<Vec<usize>, usize>) -> usize {
        if ys.len() == 1 {
            return ys[0];
        }
        if let Some(&v) = memo.get(ys) {
            return v;
        }
        let mut skip_second = vec![ys[0]];
        skip_second.extend_from_slice(&ys[2..]);
        let left = self.omega_tilde_memo(&skip_second, memo);
        let right = self.omega_tilde_memo(&ys[1..], memo);
        // left ⋆̃ right = right • left
        let v = self.co.bullet_hat(right, left);
        memo.insert(ys.to_vec(), v);
        v
    }

    fn common_target(&self, atoms: &[usize]) -> Result<usize, GarsideError> {
        self.distinct(atoms)?;
        let q = self.quiver();
        let t = q.target(atoms[0]);
        if atoms.iter().any(|&a| q.target(a) != t) {
            return Err(GarsideError::MixedTargets);
        }
        Ok(t)
    }

    /// `Ω̃_n(y_1, …, y_n)` as a completed letter.
    pub fn omega_tilde(&self, atoms: &[usize]) -> Result<usize, GarsideError> {
        self.common_target(atoms)?;
        Ok(self.omega_tilde_memo(atoms, &mut HashMap::new()))
    }

    /// `Δ̃_J`, the left-lcm of a set of atoms with a common target.
    pub fn delta_tilde(&self, atoms: &[usize]) -> Result<PathWord, GarsideError> {
        self.common_target(atoms)?;
        let mut memo = HashMap::new();
        let letters: Vec<usize> = (0..atoms.len()).map(|k| self.omega_tilde_memo(&atoms[k..], &mut memo)).collect();
        let hat = self.completed_quiver();
        Ok(self.strip(&PathWord { base: hat.source(letters[0]), edges: letters }))
    }

    /// `x̃_i = Ω_n(x_1, …, x̂_i, …, x_n, x_i)`; their `Δ̃` is `Δ` of the `x_i`.
    pub fn tilde_atoms(&self, atoms: &[usize]) -> Result<Vec<usize>, GarsideError> {
        self.omegas(atoms)?;
        (0..atoms.len())
            .map(|i| {
                let mut seq: Vec<usize> = atoms.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).collect();
                seq.push(atoms[i]);
                Ok(*self.omegas(&seq)?.last().expect("nonempty"))
            })
            .collect()
    }

    fn entry(&self, key: Vec<usize>, atoms: Vec<usize>, repr: PathWord) -> GarsideEntry {
        let q = self.quiver();
        GarsideEntry { source: repr.base, target: q.target_of(&repr), atoms, key, repr }
    }

    fn compute_normal_form(&self, p: &PathWord) -> CatElement {
        let q = self.quiver();
        let mut nf = Vec::new();
        let mut u = p.clone();
        while !u.is_empty() {
            let key = self.atom_divisors(&u);
            let head = self.delta(&key).expect("divisors share the source of u");
            u = self.right_complement(&head, &u).expect("same source");
            nf.push(self.entry(key.clone(), key, head));
        }
        CatElement { source: p.base, target: q.target_of(p), length: p.len(), nf }
    }

    /// Strict greedy normal form; each head is `Δ` of the atoms dividing what is left.
    pub fn normal_form(&self, p: &PathWord) -> Result<CatElement, GarsideError> {
        let p = self.quiver().path_from(p.base, p.edges.clone())?;
        if let Some(hit) = self.nf_cache.lock().expect("cache lock").get(&p) {
            return Ok(hit.clone());
        }
        let nf = self.compute_normal_form(&p);
        self.nf_cache.lock().expect("cache lock").insert(p, nf.clone());
        Ok(nf)
    }

    pub fn equal_cat(&self, p: &PathWord, q: &PathWord) -> Result<bool, GarsideError> {
        Ok(self.normal_form(p)? == self.normal_form(q)?)
    }

    /// The element of `E` represented by `p`, if any.
    pub fn entry_of(&self, p: &PathWord) -> Result<Option<GarsideEntry>, GarsideError> {
        let nf = self.normal_form(p)?;
        Ok(match nf.nf.len() {
            0 => Some(GarsideEntry::identity(p.base)),
            1 => nf.nf.into_iter().next(),
            _ => None,
        })
    }

    /// Whether the head of `e · f` is `e` for consecutive entries.
    pub fn is_greedy(&self, x: &CatElement) -> bool {
        x.nf.windows(2).all(|w| {
            let ef = self.quiver().concat(&w[0].repr, &w[1].repr).expect("consecutive entries compose");
            self.normal_form(&ef).map(|n| n.nf.first() == Some(&w[0])).unwrap_or(false)
        })
    }

    /// `{Δ_I}` over all nonempty atom sets per vertex, deduplicated.
    pub fn garside_family(&self) -> GarsideFamily {
        let q = self.quiver();
        let per_vertex = par::map(q.vertex_count(), |v| {
            let out = q.out_arrows(v);
            let mut seen: BTreeMap<Vec<usize>, (Vec<usize>, PathWord)> = BTreeMap::new();
            for mask in 1u64..(1u64 << out.len()) {
                let mut atoms: Vec<usize> = (0..out.len()).filter(|i| mask >> i & 1 == 1).map(|i| out[i]).collect();
                atoms.sort_unstable();
                let d = self.delta(&atoms).expect("distinct atoms at one vertex");
                let key = self.atom_divisors(&d);
                match seen.get(&key) {
                    Some((label, _)) if *label <= atoms => {}
                    _ => {
                        seen.insert(key, (atoms, d));
                    }
                }
            }
            seen.into_iter().map(|(key, (atoms, repr))| self.entry(key, atoms, repr)).collect::<Vec<_>>()
        });
        let mut entries: Vec<GarsideEntry> = per_vertex.into_iter().flatten().collect();
        entries.sort_by(|a, b| {
            (q.vertex_name(a.source), a.len(), &a.atoms).cmp(&(q.vertex_name(b.source), b.len(), &b.atoms))
        });
        GarsideFamily { entries, vertices: q.vertex_count() }
    }

    /// Whether `{Δ̃_J}` over all nonempty same-target atom sets is the same family.
    pub fn dual_description_holds(&self, family: &GarsideFamily) -> bool {
        let q = self.quiver();
        let found = par::map(q.vertex_count(), |v| {
            let ins = q.in_arrows(v);
            (1u64..(1u64 << ins.len()))
                .map(|mask| {
                    let atoms: Vec<usize> = (0..ins.len()).filter(|i| mask >> i & 1 == 1).map(|i| ins[i]).collect();
                    let d = self.delta_tilde(&atoms).expect("distinct atoms at one vertex");
                    self.entry_of(&d).expect("valid path")
                })
                .collect::<Vec<_>>()
        });
        let mut dual: Vec<(usize, Vec<usize>)> = Vec::new();
        for e in found.into_iter().flatten() {
            match e {
                Some(e) => dual.push((e.source, e.key)),
                None => return false,
            }
        }
        dual.sort();
        dual.dedup();
        let mut primal: Vec<(usize, Vec<usize>)> = family.entries.iter().map(|e| (e.source, e.key.clone())).collect();
        primal.sort();
        primal == dual
    }

    /// For `f, g ∈ E` with a common target: the `w ∈ E` with `w · g` the
    /// left-lcm of `f` and `g`, read off the `Ω̃` letters.
    pub fn lcm_witness(&self, f: &GarsideEntry, g: &GarsideEntry) -> Result<GarsideEntry, GarsideError> {
        if f.target != g.target {
            return Err(GarsideError::TargetMismatch(self.name(f.target), self.name(g.target)));
        }
        let i = self.right_atom_divisors(&f.repr);
        let j = self.right_atom_divisors(&g.repr);
        let mut s: Vec<usize> = i.iter().copied().filter(|a| !j.contains(a)).collect();
        let m = s.len();
        if m == 0 {
            return Ok(GarsideEntry::identity(g.source));
        }
        s.extend_from_slice(&j);
        let mut memo = HashMap::new();
        let letters: Vec<usize> = (0..m).map(|k| self.omega_tilde_memo(&s[k..], &mut memo)).collect();
        let hat = self.completed_quiver();
        let w = self.strip(&PathWord { base: hat.source(letters[0]), edges: letters });
        self.entry_of(&w)?.ok_or_else(|| GarsideError::NotInFamily(self.quiver().format_path(&w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn z3() -> Structure {
        Structure::new(builtin::z3()).unwrap()
    }

    fn p(st: &Structure, text: &str) -> PathWord {
        st.quiver().parse_path(text).unwrap()
    }

    #[test]
    fn z3_relations() {
        let st = z3();
        assert!(st.equal_cat(&p(&st, "[0,1] [1,1]"), &p(&st, "[0,0] [0,1]")).unwrap());
        assert!(!st.equal_cat(&p(&st, "[0,1] [1,1]"), &p(&st, "[0,1] [1,2]")).unwrap());
        assert!(st.equal_cat(&p(&st, "[0,1] [1,0]"), &p(&st, "[0,2] [2,0]")).unwrap());
    }

    #[test]
    fn z3_complement() {
        let st = z3();
        // [[a,b]] \ [[a,c]] = [[b, b - a + c]]
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    if b == c {
                        continue;
                    }
                    let u = p(&st, &format!("[{a},{b}]"));
                    let v = p(&st, &format!("[{a},{c}]"));
                    let d = (b - a + c).rem_euclid(3);
                    assert_eq!(st.right_complement(&u, &v).unwrap(), p(&st, &format!("[{b},{d}]")));
                }
            }
        }
        let u = p(&st, "[0,1]");
        assert!(st.right_complement(&u, &u).unwrap().is_empty());
    }

    #[test]
    fn z3_delta_is_the_listed_loop() {
        let st = z3();
        let q = st.quiver();
        for a in 0..3 {
            let atoms = q.out_arrows(a).to_vec();
            let d = st.delta(&atoms).unwrap();
            assert_eq!(d.len(), 3);
            assert_eq!(q.target_of(&d), a);
            let b = (a + 1) % 3;
            let c = (a + 2) % 3;
            for form in [[a, b, b, a], [a, a, b, a], [a, a, c, a], [a, c, c, a], [a, b, a, a], [a, c, a, a]] {
                let path = p(&st, &format!("[{},{}] [{},{}] [{},{}]", form[0], form[1], form[1], form[2], form[2], form[3]));
                assert!(st.equal_cat(&d, &path).unwrap());
            }
        }
    }

    #[test]
    fn z3_family_count() {
        let st = z3();
        let e = st.garside_family();
        assert_eq!(e.len(), 24);
        assert!(e.max_length() <= 3);
        assert!(st.dual_description_holds(&e));
    }

    #[test]
    fn singleton_loop() {
        let q = Quiver::new(vec!["v".into()], vec![crate::quiver::Arrow::new("x", "v", "v")]).unwrap();
        let st = Structure::new(BraidedQuiver::identity(q)).unwrap();
        let e = st.garside_family();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn pres1_lcms() {
        let st = Structure::new(builtin::pres1_solution()).unwrap();
        assert_eq!(st.right_complement(&p(&st, "[1,2]"), &p(&st, "[1,3]")).unwrap(), p(&st, "[2,1]"));
        let q = st.quiver();
        let d = st.delta(&[q.arrow("[1,2]").unwrap(), q.arrow("[1,3]").unwrap()]).unwrap();
        assert!(st.equal_cat(&d, &p(&st, "[1,3] [3,1]")).unwrap());
        let l = st.delta_tilde(&[q.arrow("[2,1]").unwrap(), q.arrow("[3,1]").unwrap()]).unwrap();
        assert!(st.equal_cat(&l, &p(&st, "[1,2] [2,1]")).unwrap());
        assert!(st.left_divides(&p(&st, "[1,2]"), &p(&st, "[1,3] [3,1]")).unwrap());
        assert!(st.garside_family().max_length() <= 2);
    }

    #[test]
    fn tilde_atoms_give_delta() {
        let st = z3();
        let q = st.quiver();
        for a in 0..3 {
            let atoms = q.out_arrows(a).to_vec();
            let t = st.tilde_atoms(&atoms).unwrap();
            let lhs = st.delta(&atoms).unwrap();
            let rhs = st.delta_tilde(&t).unwrap();
            assert!(st.equal_cat(&lhs, &rhs).unwrap());
        }
    }

    #[test]
    fn normal_form_of_z3_word() {
        let st = z3();
        let nf = st.normal_form(&p(&st, "[0,1] [1,1]")).unwrap();
        assert_eq!(nf.nf.len(), 1);
        let q = st.quiver();
        assert_eq!(nf.nf[0].key, vec![q.arrow("[0,0]").unwrap(), q.arrow("[0,1]").unwrap()]);
        assert!(st.normal_form(&PathWord::empty(0)).unwrap().nf.is_empty());
    }

    #[test]
    fn delta_rejects_bad_sets() {
        let st = z3();
        let q = st.quiver();
        assert_eq!(st.delta(&[]), Err(GarsideError::EmptySet));
        let a = q.arrow("[0,1]").unwrap();
        assert!(matches!(st.delta(&[a, a]), Err(GarsideError::DuplicateAtom(_))));
        assert_eq!(st.delta(&[a, q.arrow("[1,0]").unwrap()]), Err(GarsideError::MixedSources));
        let f = GarsideEntry::identity(0);
        let g = GarsideEntry::identity(1);
        assert!(matches!(st.lcm_witness(&f, &g), Err(GarsideError::TargetMismatch(..))));
    }

    #[test]
    fn witness_of_equal_entries_is_identity() {
        let st = z3();
        for e in st.garside_family().entries {
            assert!(st.lcm_witness(&e, &e).unwrap().is_identity());
        }
    }
}
