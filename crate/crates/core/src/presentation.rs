//! Quadratic category presentations and the solution they determine.
//!
//! A presentation satisfying conditions i to v below yields an involutive
//! non-degenerate σ whose structure category is the presented one.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::quiver::{PathWord, Quiver, QuiverError};
use crate::ybm::{BraidedQuiver, SolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("relation {0} ~ {1}: sides have different endpoints")]
    EndpointMismatch(String, String),
    #[error("conditions fail: {0}")]
    ConditionsFail(String),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

/// A finite set of relations `p ~ q`, stored as sorted unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    quiver: Quiver,
    relations: Vec<(PathWord, PathWord)>,
    duplicates: usize,
}

fn unordered(p: PathWord, q: PathWord) -> (PathWord, PathWord) {
    if p <= q { (p, q) } else { (q, p) }
}

impl Presentation {
    pub fn new(quiver: Quiver, relations: Vec<(PathWord, PathWord)>) -> Result<Self, PresentationError> {
        let mut set = BTreeSet::new();
        let total = relations.len();
        for (p, q) in relations {
            let p = quiver.path_from(p.base, p.edges)?;
            let q = quiver.path_from(q.base, q.edges)?;
            if p.base != q.base || quiver.target_of(&p) != quiver.target_of(&q) {
                return Err(PresentationError::EndpointMismatch(quiver.format_path(&p), quiver.format_path(&q)));
            }
            set.insert(unordered(p, q));
        }
        let duplicates = total - set.len();
        Ok(Presentation { quiver, relations: set.into_iter().collect(), duplicates })
    }

    /// Relations given as pairs of space-separated arrow-id paths.
    pub fn from_ids<S: AsRef<str>>(quiver: Quiver, relations: &[(S, S)]) -> Result<Self, PresentationError> {
        let parsed = relations
            .iter()
            .map(|(p, q)| Ok((quiver.parse_path(p.as_ref())?, quiver.parse_path(q.as_ref())?)))
            .collect::<Result<Vec<_>, QuiverError>>()?;
        Self::new(quiver, parsed)
    }

    /// The defining relations `x|y ~ σ(x|y)` of a solution's structure category.
    pub fn from_solution(s: &BraidedQuiver) -> Self {
        let q = s.quiver();
        let set: BTreeSet<_> = crate::ybm::composable_pairs(q)
            .into_iter()
            .map(|(x, y)| {
                let (u, v) = s.sigma(x, y);
                unordered(PathWord { base: q.source(x), edges: vec![x, y] }, PathWord { base: q.source(u), edges: vec![u, v] })
            })
            .collect();
        Presentation { quiver: q.clone(), relations: set.into_iter().collect(), duplicates: 0 }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[(PathWord, PathWord)] {
        &self.relations
    }

    /// Number of input relations collapsed as repeats.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    fn quadratic(&self) -> impl Iterator<Item = ([usize; 2], [usize; 2])> + '_ {
        self.relations
            .iter()
            .filter(|(p, q)| p.len() == 2 && q.len() == 2)
            .map(|(p, q)| ([p.edges[0], p.edges[1]], [q.edges[0], q.edges[1]]))
    }

    fn fmt_pair(&self, p: [usize; 2]) -> String {
        format!("{} {}", self.quiver.arrow_id(p[0]), self.quiver.arrow_id(p[1]))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub witnesses: Vec<String>,
}

impl Condition {
    fn from(witnesses: Vec<String>) -> Self {
        Condition { holds: witnesses.is_empty(), witnesses }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub i: Condition,
    pub ii: Condition,
    pub ii_prime: Condition,
    pub iii: Condition,
    pub iii_prime: Condition,
    pub iv: Condition,
    pub iv_prime: Condition,
    pub v: Condition,
    /// `z_a` per arrow id, where unique.
    pub z: BTreeMap<String, String>,
    /// `z^a` per arrow id, where unique.
    pub z_dual: BTreeMap<String, String>,
    pub duplicates_collapsed: usize,
    #[serde(skip)]
    star_prime: Option<Vec<Vec<usize>>>,
    #[serde(skip)]
    bullet_prime: Option<Vec<Vec<usize>>>,
}

impl ConditionReport {
    /// i, ii, ii′, iii, iii′ and v all hold.
    pub fn all_pass(&self) -> bool {
        [&self.i, &self.ii, &self.ii_prime, &self.iii, &self.iii_prime, &self.v].iter().all(|c| c.holds)
    }

    fn failing(&self) -> Vec<&'static str> {
        let named = [
            ("i", &self.i),
            ("ii", &self.ii),
            ("ii'", &self.ii_prime),
            ("iii", &self.iii),
            ("iii'", &self.iii_prime),
            ("v", &self.v),
        ];
        named.iter().filter(|(_, c)| !c.holds).map(|(n, _)| *n).collect()
    }
}

/// Evaluates every condition, even after a failure.
pub fn check_conditions(p: &Presentation) -> ConditionReport {
    let q = &p.quiver;
    let n = q.arrow_count();
    let name = |a: usize| q.arrow_id(a).to_string();

    // i
    let mut i_bad = Vec::new();
    for (l, r) in &p.relations {
        if l.len() != 2 || r.len() != 2 {
            i_bad.push(format!("non-quadratic relation {} ~ {}", q.format_path(l), q.format_path(r)));
        }
    }
    let mut uses: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    for (l, r) in p.quadratic() {
        *uses.entry(l).or_default() += 1;
        if r != l {
            *uses.entry(r).or_default() += 1;
        }
    }
    for (path, k) in &uses {
        if *k > 1 {
            i_bad.push(format!("{} appears in {k} relations", p.fmt_pair(*path)));
        }
    }

    // oriented views of each quadratic relation
    let oriented: Vec<([usize; 2], [usize; 2])> =
        p.quadratic().flat_map(|(l, r)| if l == r { vec![(l, r)] } else { vec![(l, r), (r, l)] }).collect();
    let mut by_first: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut by_last: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for &(l, r) in &oriented {
        // (a, b) -> (v, w) for a|v ~ b|w
        by_first.entry((l[0], r[0])).or_default().push((l[1], r[1]));
        // (a, b) -> (v, w) for v|a ~ w|b
        by_last.entry((l[1], r[1])).or_default().push((l[0], r[0]));
    }
    for list in by_first.values_mut().chain(by_last.values_mut()) {
        list.sort_unstable();
        list.dedup();
    }

    // ii and ii′
    let mut star: Vec<Vec<Option<usize>>> = (0..n).map(|a| vec![None; q.out_arrows(q.source(a)).len()]).collect();
    let mut bullet: Vec<Vec<Option<usize>>> = (0..n).map(|a| vec![None; q.in_arrows(q.target(a)).len()]).collect();
    let mut ii_bad = Vec::new();
    let mut ii_prime_bad = Vec::new();
    for a in 0..n {
        for &b in q.out_arrows(q.source(a)) {
            if a == b {
                continue;
            }
            match by_first.get(&(a, b)).map_or(&[][..], Vec::as_slice) {
                [(v, _)] => star[a][q.out_position(b)] = Some(*v),
                found => ii_bad.push(format!("{} relations of the form {}|v ~ {}|w", found.len(), name(a), name(b))),
            }
        }
        for &b in q.in_arrows(q.target(a)) {
            if a == b {
                continue;
            }
            match by_last.get(&(a, b)).map_or(&[][..], Vec::as_slice) {
                [(v, _)] => bullet[a][q.in_position(b)] = Some(*v),
                found => ii_prime_bad.push(format!("{} relations of the form v|{} ~ w|{}", found.len(), name(a), name(b))),
            }
        }
    }

    // iii and iii′ by elimination over the finite hom-sets
    let mut z = vec![None; n];
    let mut z_dual = vec![None; n];
    let mut iii_bad = Vec::new();
    let mut iii_prime_bad = Vec::new();
    for a in 0..n {
        let after = q.out_arrows(q.target(a));
        let candidates: Vec<usize> = after
            .iter()
            .copied()
            .filter(|&zc| {
                let iiia = after.iter().filter(|&&v| v != zc).all(|&v| {
                    oriented.iter().any(|&(l, r)| l == [a, v] && r[0] != a)
                });
                let iiib = oriented.iter().filter(|(l, _)| *l == [a, zc]).all(|&(_, r)| r == [a, zc]);
                iiia && iiib
            })
            .collect();
        match candidates.as_slice() {
            [only] => z[a] = Some(*only),
            c => iii_bad.push(format!("{} candidates for z_{}", c.len(), name(a))),
        }
        let before = q.in_arrows(q.source(a));
        let candidates: Vec<usize> = before
            .iter()
            .copied()
            .filter(|&zc| {
                let a_ok = before.iter().filter(|&&v| v != zc).all(|&v| {
                    oriented.iter().any(|&(l, r)| l == [v, a] && r[1] != a)
                });
                let b_ok = oriented.iter().filter(|(l, _)| *l == [zc, a]).all(|&(_, r)| r == [zc, a]);
                a_ok && b_ok
            })
            .collect();
        match candidates.as_slice() {
            [only] => z_dual[a] = Some(*only),
            c => iii_prime_bad.push(format!("{} candidates for z^{}", c.len(), name(a))),
        }
    }

    // iv and iv′
    let mut iv_bad = Vec::new();
    let mut iv_prime_bad = Vec::new();
    for &(l, r) in &oriented {
        if l[0] == r[0] && !(l[1] == r[1] && Some(l[1]) == z[l[0]]) {
            iv_bad.push(format!("{} ~ {}", p.fmt_pair(l), p.fmt_pair(r)));
        }
        if l[1] == r[1] && !(l[0] == r[0] && Some(l[0]) == z_dual[l[1]]) {
            iv_prime_bad.push(format!("{} ~ {}", p.fmt_pair(l), p.fmt_pair(r)));
        }
    }
    iv_bad.dedup();
    iv_prime_bad.dedup();

    // v
    let st = |a: usize, b: usize| -> Option<usize> {
        if q.source(a) != q.source(b) || a == b {
            return None;
        }
        star[a][q.out_position(b)]
    };
    let mut v_bad = Vec::new();
    for v0 in 0..q.vertex_count() {
        let at = q.out_arrows(v0);
        for &a in at {
            for &b in at {
                for &c in at {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let lhs = st(a, b).zip(st(a, c)).and_then(|(x, y)| st(x, y));
                    let rhs = st(b, a).zip(st(b, c)).and_then(|(x, y)| st(x, y));
                    if lhs.is_none() || lhs != rhs {
                        v_bad.push(format!("({}, {}, {})", name(a), name(b), name(c)));
                    }
                }
            }
        }
    }

    let complete = |table: &[Vec<Option<usize>>], zs: &[Option<usize>], dual: bool| {
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::new();
            let around = if dual { q.in_arrows(q.target(a)) } else { q.out_arrows(q.source(a)) };
            for (k, &b) in around.iter().enumerate() {
                row.push(if a == b { zs[a]? } else { table[a][k]? });
            }
            out.push(row);
        }
        Some(out)
    };
    let star_prime = complete(&star, &z, false);
    let bullet_prime = complete(&bullet, &z_dual, true);

    let named = |zs: &[Option<usize>]| {
        zs.iter().enumerate().filter_map(|(a, zv)| zv.map(|zv| (name(a), name(zv)))).collect::<BTreeMap<_, _>>()
    };
    ConditionReport {
        i: Condition::from(i_bad),
        ii: Condition::from(ii_bad),
        ii_prime: Condition::from(ii_prime_bad),
        iii: Condition::from(iii_bad),
        iii_prime: Condition::from(iii_prime_bad),
        iv: Condition::from(iv_bad),
        iv_prime: Condition::from(iv_prime_bad),
        v: Condition::from(v_bad),
        z: named(&z),
        z_dual: named(&z_dual),
        duplicates_collapsed: p.duplicates,
        star_prime,
        bullet_prime,
    }
}

/// The extended operations `⋆′` and `•′` of a passing presentation.
#[derive(Debug, Clone)]
pub struct PrimeOps {
    quiver: Quiver,
    star: Vec<Vec<usize>>,
    bullet: Vec<Vec<usize>>,
}

impl PrimeOps {
    pub fn from_report(p: &Presentation, r: &ConditionReport) -> Result<Self, PresentationError> {
        match (&r.star_prime, &r.bullet_prime, r.all_pass()) {
            (Some(s), Some(b), true) => Ok(PrimeOps { quiver: p.quiver.clone(), star: s.clone(), bullet: b.clone() }),
            _ => Err(PresentationError::ConditionsFail(r.failing().join(", "))),
        }
    }

    /// `a ⋆′ b` for a common source.
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.star[a][self.quiver.out_position(b)]
    }

    /// `a •′ b` for a common target.
    pub fn bullet(&self, a: usize, b: usize) -> usize {
        self.bullet[a][self.quiver.in_position(b)]
    }

    /// `a ⇀ b`: the unique `c` with `a ⋆′ c = b`.
    pub fn lact(&self, a: usize, b: usize) -> usize {
        let q = &self.quiver;
        *q.out_arrows(q.source(a)).iter().find(|&&c| self.star(a, c) == b).expect("⋆′ is bijective")
    }

    pub fn ract(&self, a: usize, b: usize) -> usize {
        self.star(self.lact(a, b), a)
    }
}

/// The σ of a presentation satisfying i to v.
pub fn extract_solution(p: &Presentation) -> Result<BraidedQuiver, PresentationError> {
    let r = check_conditions(p);
    let ops = PrimeOps::from_report(p, &r)?;
    let q = &p.quiver;
    for a in 0..q.arrow_count() {
        let mut img: Vec<usize> = q.out_arrows(q.source(a)).iter().map(|&b| ops.star(a, b)).collect();
        img.sort_unstable();
        let mut cod = q.out_arrows(q.target(a)).to_vec();
        cod.sort_unstable();
        if img != cod {
            return Err(PresentationError::ConditionsFail(format!("{}⋆′_ is not a bijection", q.arrow_id(a))));
        }
    }
    Ok(BraidedQuiver::from_fn(q.clone(), |a, b| (ops.lact(a, b), ops.ract(a, b)))?)
}

/// `R∖R̄ ⊆ R′` and `R′∖R̄′ ⊆ R`, with `R′` the relations of `s`.
pub fn roundtrip_check(p: &Presentation, s: &BraidedQuiver) -> bool {
    let nontrivial = |rels: &[(PathWord, PathWord)]| rels.iter().filter(|(a, b)| a != b).cloned().collect::<BTreeSet<_>>();
    let all = |rels: &[(PathWord, PathWord)]| rels.iter().cloned().collect::<BTreeSet<_>>();
    let derived = Presentation::from_solution(s);
    nontrivial(&p.relations).is_subset(&all(&derived.relations)) && nontrivial(&derived.relations).is_subset(&all(&p.relations))
}

/// Failures of the identities established on the way to the extracted σ.
pub fn lemma_failures(p: &Presentation) -> Result<Vec<String>, PresentationError> {
    let r = check_conditions(p);
    let ops = PrimeOps::from_report(p, &r)?;
    let q = &p.quiver;
    let name = |a: usize| q.arrow_id(a);
    let mut bad = Vec::new();
    for a in 0..q.arrow_count() {
        let za = ops.star(a, a);
        for &b in q.out_arrows(q.source(a)) {
            let (ab, ba) = (ops.star(a, b), ops.star(b, a));
            if ops.bullet(ab, ba) != a {
                bad.push(format!("(a⋆′b)•′(b⋆′a) = a fails at ({}, {})", name(a), name(b)));
            }
            if a == b {
                continue;
            }
            if ops.star(ab, ab) == ops.star(ba, ba) && ab != ba {
                bad.push(format!("z_(a⋆b) = z_(b⋆a) without a⋆b = b⋆a at ({}, {})", name(a), name(b)));
            }
            if ops.star(ab, za) != ops.star(ba, ba) {
                bad.push(format!("(a⋆b)⋆z_a = z_(b⋆a) fails at ({}, {})", name(a), name(b)));
            }
        }
        for &b in q.out_arrows(q.target(a)) {
            if ops.bullet(b, ops.ract(a, b)) != a {
                bad.push(format!("b•′(a↼b) = a fails at ({}, {})", name(a), name(b)));
            }
        }
    }
    Ok(bad)
}
