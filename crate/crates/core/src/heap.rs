//! Principal-homogeneous solutions: ternary operations, heaps, groups and
//! the pair-groupoid braidings `σ[a,b,c] = [a, ⟨a,b,c⟩, c]`.

use serde::Serialize;
use thiserror::Error;

use crate::quiver::{Arrow, Quiver};
use crate::ybm::BraidedQuiver;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeapError {
    #[error("table has {got} entries, expected {want}")]
    TableSize { got: usize, want: usize },
    #[error("table value {0} out of range")]
    OutOfRange(usize),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("missing table entry for {0:?}")]
    MissingEntry(Vec<String>),
    #[error("not a heap: {0} fails at {1:?}")]
    NotAHeap(&'static str, Vec<String>),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("ternary operation violates the braid conditions at {0:?}")]
    NotBraided(Vec<String>),
    #[error("quiver is not a pair groupoid: {0}")]
    NotPrincipalHomogeneous(String),
}

/// A total map Λ³ → Λ on a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryOp {
    elements: Vec<String>,
    table: Vec<usize>,
}

impl TernaryOp {
    pub fn new(elements: Vec<String>, table: Vec<usize>) -> Result<Self, HeapError> {
        check_distinct(&elements)?;
        let n = elements.len();
        if table.len() != n * n * n {
            return Err(HeapError::TableSize { got: table.len(), want: n * n * n });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= n) {
            return Err(HeapError::OutOfRange(v));
        }
        Ok(TernaryOp { elements, table })
    }

    pub fn from_fn(elements: Vec<String>, f: impl Fn(usize, usize, usize) -> usize) -> Result<Self, HeapError> {
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    table.push(f(a, b, c));
                }
            }
        }
        Self::new(elements, table)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// ⟨a,b,c⟩
    pub fn get(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.elements.len();
        self.table[(a * n + b) * n + c]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    fn names(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.elements[x].clone()).collect()
    }

    /// First quadruple breaking one of the two braid conditions on ⟨·⟩.
    pub fn braid_condition_failure(&self) -> Option<Vec<String>> {
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let abc = self.get(a, b, c);
                    for d in 0..n {
                        let bcd = self.get(b, c, d);
                        let one = self.get(a, abc, self.get(abc, c, d)) == self.get(a, b, bcd);
                        let two = self.get(self.get(a, b, bcd), bcd, d) == self.get(abc, c, d);
                        if !one || !two {
                            return Some(self.names(&[a, b, c, d]));
                        }
                    }
                }
            }
        }
        None
    }
}

fn check_distinct(elements: &[String]) -> Result<(), HeapError> {
    let mut sorted: Vec<&String> = elements.iter().collect();
    sorted.sort();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(HeapError::DuplicateElement(w[0].clone())),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

impl AxiomCheck {
    fn from_witness(witness: Option<Vec<String>>) -> Self {
        AxiomCheck { holds: witness.is_none(), witness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeapReport {
    pub m1: AxiomCheck,
    pub m2: AxiomCheck,
    pub assoc: AxiomCheck,
    pub a1: AxiomCheck,
    pub a2: AxiomCheck,
    pub involutive: AxiomCheck,
    pub abelian: AxiomCheck,
}

impl HeapReport {
    pub fn is_heap(&self) -> bool {
        self.m1.holds && self.m2.holds && self.assoc.holds
    }
}

fn first<I: Iterator<Item = Vec<usize>>>(t: &TernaryOp, mut it: I, bad: impl Fn(&[usize]) -> bool) -> AxiomCheck {
    AxiomCheck::from_witness(it.find(|xs| bad(xs)).map(|xs| t.names(&xs)))
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut i| {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        v
    })
}

/// M1, M2, associativity, the derived A1/A2, the involutivity condition and abelianity.
pub fn check_heap(t: &TernaryOp) -> HeapReport {
    let n = t.size();
    let g = |a, b, c| t.get(a, b, c);
    HeapReport {
        m1: first(t, tuples(n, 2), |x| g(x[0], x[1], x[1]) != x[0]),
        m2: first(t, tuples(n, 2), |x| g(x[0], x[0], x[1]) != x[1]),
        assoc: first(t, tuples(n, 5), |x| g(x[0], x[1], g(x[2], x[3], x[4])) != g(g(x[0], x[1], x[2]), x[3], x[4])),
        a1: first(t, tuples(n, 4), |x| g(x[0], x[1], x[3]) != g(g(x[0], x[1], x[2]), x[2], x[3])),
        a2: first(t, tuples(n, 4), |x| g(x[0], x[2], x[3]) != g(x[0], x[1], g(x[1], x[2], x[3]))),
        involutive: first(t, tuples(n, 3), |x| g(x[0], g(x[0], x[1], x[2]), x[2]) != x[1]),
        abelian: first(t, tuples(n, 3), |x| g(x[0], x[1], x[2]) != g(x[2], x[1], x[0])),
    }
}

/// A ternary operation known to satisfy M1, M2 and associativity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heap {
    op: TernaryOp,
}

impl Heap {
    pub fn new(op: TernaryOp) -> Result<Self, HeapError> {
        let r = check_heap(&op);
        for (name, c) in [("M1", &r.m1), ("M2", &r.m2), ("A", &r.assoc)] {
            if let Some(w) = &c.witness {
                return Err(HeapError::NotAHeap(name, w.clone()));
            }
        }
        Ok(Heap { op })
    }

    pub fn op(&self) -> &TernaryOp {
        &self.op
    }

    pub fn is_abelian(&self) -> bool {
        check_heap(&self.op).abelian.holds
    }
}

/// Finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    elements: Vec<String>,
    mul: Vec<usize>,
    unit: usize,
    inv: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, unit, inverses and associativity exhaustively.
    pub fn new(elements: Vec<String>, mul: Vec<usize>, unit: usize) -> Result<Self, HeapError> {
        check_distinct(&elements)?;
        let n = elements.len();
        if mul.len() != n * n {
            return Err(HeapError::TableSize { got: mul.len(), want: n * n });
        }
        if let Some(&v) = mul.iter().find(|&&v| v >= n) {
            return Err(HeapError::OutOfRange(v));
        }
        if unit >= n {
            return Err(HeapError::OutOfRange(unit));
        }
        let m = |a: usize, b: usize| mul[a * n + b];
        for a in 0..n {
            if m(a, unit) != a || m(unit, a) != a {
                return Err(HeapError::NotAGroup(format!("{} is not a unit for {}", elements[unit], elements[a])));
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| m(a, b) == unit && m(b, a) == unit)
                .ok_or_else(|| HeapError::NotAGroup(format!("{} has no inverse", elements[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(HeapError::NotAGroup(format!(
                            "not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { elements, mul, unit, inv })
    }

    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::new(elements, mul, 0).expect("cyclic group")
    }

    pub fn direct_product(g: &GroupTable, h: &GroupTable) -> Self {
        let (n, m) = (g.order(), h.order());
        let elements = (0..n * m).map(|i| format!("({},{})", g.elements[i / m], h.elements[i % m])).collect();
        let mul = (0..n * m * n * m)
            .map(|k| {
                let (x, y) = (k / (n * m), k % (n * m));
                g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
            })
            .collect();
        Self::new(elements, mul, g.unit * m + h.unit).expect("product of groups")
    }

    /// The symmetric group on `k` letters; elements are images written out, e.g. `"021"`.
    pub fn symmetric(k: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..k).filter(|i| !p.contains(i)).map(|i| [p.clone(), vec![i]].concat()).collect::<Vec<_>>()
                })
                .collect();
        }
        let name = |p: &[usize]| p.iter().map(|i| i.to_string()).collect::<String>();
        let elements: Vec<String> = perms.iter().map(|p| name(p)).collect();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let mut mul = Vec::with_capacity(perms.len() * perms.len());
        for p in &perms {
            for q in &perms {
                // (p * q)(i) = p(q(i))
                let r: Vec<usize> = (0..k).map(|i| p[q[i]]).collect();
                mul.push(index(&r));
            }
        }
        let unit = index(&(0..k).collect::<Vec<_>>());
        Self::new(elements, mul, unit).expect("symmetric group")
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// One group per isomorphism class of order at most six.
pub fn small_groups() -> Vec<GroupTable> {
    let mut v: Vec<GroupTable> = (1..=6).map(GroupTable::cyclic).collect();
    v.push(GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2)));
    v.push(GroupTable::symmetric(3));
    v
}

/// `⟨a,b,c⟩ := a ∗ b⁻¹ ∗ c`.
pub fn heap_from_group(g: &GroupTable) -> Heap {
    let op = TernaryOp::from_fn(g.elements.clone(), |a, b, c| g.mul(g.mul(a, g.inverse(b)), c))
        .expect("table sized from the group");
    Heap::new(op).expect("groups give heaps")
}

/// `a ∗ b := ⟨a,u,b⟩` with unit `u`.
pub fn group_from_heap(h: &Heap, u: usize) -> GroupTable {
    let t = h.op();
    let n = t.size();
    let mul = (0..n * n).map(|i| t.get(i / n, u, i % n)).collect();
    GroupTable::new(t.elements.clone(), mul, u).expect("pointed heaps give groups")
}

pub fn pair_arrow_id(a: &str, b: &str) -> String {
    format!("[{a},{b}]")
}

/// The groupoid of pairs on `elements`: one arrow `[a,b]` per ordered pair.
pub fn pair_groupoid(elements: &[String]) -> Quiver {
    let arrows = elements
        .iter()
        .flat_map(|a| elements.iter().map(move |b| Arrow::new(pair_arrow_id(a, b), a.clone(), b.clone())))
        .collect();
    Quiver::new(elements.to_vec(), arrows).expect("pair groupoid is well formed")
}

/// Arrow lookup for a principal-homogeneous quiver.
struct PairIndex {
    n: usize,
    arrow: Vec<usize>,
}

impl PairIndex {
    fn new(q: &Quiver) -> Result<Self, HeapError> {
        let n = q.vertex_count();
        let mut arrow = vec![usize::MAX; n * n];
        for a in 0..q.arrow_count() {
            let slot = &mut arrow[q.source(a) * n + q.target(a)];
            if *slot != usize::MAX {
                return Err(HeapError::NotPrincipalHomogeneous(format!(
                    "two arrows {} -> {}",
                    q.vertex_name(q.source(a)),
                    q.vertex_name(q.target(a))
                )));
            }
            *slot = a;
        }
        if let Some(k) = arrow.iter().position(|&a| a == usize::MAX) {
            return Err(HeapError::NotPrincipalHomogeneous(format!(
                "no arrow {} -> {}",
                q.vertex_name(k / n),
                q.vertex_name(k % n)
            )));
        }
        Ok(PairIndex { n, arrow })
    }

    fn get(&self, a: usize, b: usize) -> usize {
        self.arrow[a * self.n + b]
    }
}

/// σ[a,b,c] = [a,⟨a,b,c⟩,c] without checking the braid conditions.
pub fn ph_sigma(t: &TernaryOp) -> BraidedQuiver {
    let q = pair_groupoid(&t.elements);
    let idx = PairIndex::new(&q).expect("pair groupoid");
    let vs: Vec<usize> = t.elements.iter().map(|e| q.vertex(e).expect("vertex")).collect();
    let pos: Vec<usize> = {
        let mut p = vec![0; vs.len()];
        for (i, &v) in vs.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let qq = q.clone();
    BraidedQuiver::from_fn(q, |x, y| {
        let (a, b, c) = (qq.source(x), qq.target(x), qq.target(y));
        let m = vs[t.get(pos[a], pos[b], pos[c])];
        (idx.get(a, m), idx.get(m, c))
    })
    .expect("pair-groupoid σ is shape-valid")
}

/// The braided quiver of a ternary operation satisfying the braid conditions.
pub fn solution_from_ternary(t: &TernaryOp) -> Result<BraidedQuiver, HeapError> {
    if let Some(w) = t.braid_condition_failure() {
        return Err(HeapError::NotBraided(w));
    }
    Ok(ph_sigma(t))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrebraidingReport {
    pub bg1: AxiomCheck,
    pub bg2: AxiomCheck,
    pub bg3: AxiomCheck,
    pub bg4: AxiomCheck,
    pub bg5: AxiomCheck,
}

impl PrebraidingReport {
    pub fn all_hold(&self) -> bool {
        [&self.bg1, &self.bg2, &self.bg3, &self.bg4, &self.bg5].iter().all(|c| c.holds)
    }
}

/// BG1–BG5 against the pair-groupoid multiplication `[a,b]·[b,c] = [a,c]`.
pub fn check_prebraiding(s: &BraidedQuiver) -> Result<PrebraidingReport, HeapError> {
    let q = s.quiver();
    let idx = PairIndex::new(q)?;
    let m = |x: usize, y: usize| idx.get(q.source(x), q.target(y));
    let one = |v: usize| idx.get(v, v);
    let names = |xs: &[usize]| xs.iter().map(|&x| q.arrow_id(x).to_string()).collect::<Vec<_>>();
    let arrows = 0..q.arrow_count();
    let pairs: Vec<(usize, usize)> = arrows.clone().flat_map(|x| q.out_arrows(q.target(x)).iter().map(move |&y| (x, y))).collect();
    let triples: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(x, y)| q.out_arrows(q.target(y)).iter().map(move |&z| (x, y, z)))
        .collect();
    let bg1 = arrows.clone().find(|&x| s.sigma(x, one(q.target(x))) != (one(q.source(x)), x)).map(|x| names(&[x]));
    let bg2 = arrows.clone().find(|&x| s.sigma(one(q.source(x)), x) != (x, one(q.target(x)))).map(|x| names(&[x]));
    let bg3 = triples
        .iter()
        .find(|&&(x, y, z)| {
            let (xy_l, xy_r) = s.sigma(x, y);
            s.lact(x, m(y, z)) != m(xy_l, s.lact(xy_r, z)) || s.ract(x, m(y, z)) != s.ract(xy_r, z)
        })
        .map(|&(x, y, z)| names(&[x, y, z]));
    let bg4 = triples
        .iter()
        .find(|&&(x, y, z)| {
            let (yz_l, yz_r) = s.sigma(y, z);
            s.ract(m(x, y), z) != m(s.ract(x, yz_l), yz_r) || s.lact(m(x, y), z) != s.lact(x, yz_l)
        })
        .map(|&(x, y, z)| names(&[x, y, z]));
    let bg5 = pairs
        .iter()
        .find(|&&(x, y)| {
            let (u, v) = s.sigma(x, y);
            m(u, v) != m(x, y)
        })
        .map(|&(x, y)| names(&[x, y]));
    Ok(PrebraidingReport {
        bg1: AxiomCheck::from_witness(bg1),
        bg2: AxiomCheck::from_witness(bg2),
        bg3: AxiomCheck::from_witness(bg3),
        bg4: AxiomCheck::from_witness(bg4),
        bg5: AxiomCheck::from_witness(bg5),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub group_hom: bool,
    pub pointed_heap: bool,
    pub intertwiner: bool,
}

impl MorphismReport {
    pub fn agree(&self) -> bool {
        self.group_hom == self.pointed_heap && self.pointed_heap == self.intertwiner
    }
}

/// Checks a map `f: Λ → Λ′` (by element index) three ways.
pub fn check_morphism(f: &[usize], source: (&Heap, usize), target: (&Heap, usize)) -> MorphismReport {
    let (ha, ua) = source;
    let (hb, ub) = target;
    let (ta, tb) = (ha.op(), hb.op());
    let n = ta.size();
    let ga = group_from_heap(ha, ua);
    let gb = group_from_heap(hb, ub);
    let group_hom = (0..n).all(|a| (0..n).all(|b| f[ga.mul(a, b)] == gb.mul(f[a], f[b])));
    let preserves_heap =
        tuples(n, 3).all(|x| f[ta.get(x[0], x[1], x[2])] == tb.get(f[x[0]], f[x[1]], f[x[2]]));
    let pointed_heap = preserves_heap && f[ua] == ub;

    let sa = ph_sigma(ta);
    let sb = ph_sigma(tb);
    let (qa, qb) = (sa.quiver(), sb.quiver());
    let ib = PairIndex::new(qb).expect("pair groupoid");
    let vb: Vec<usize> = tb.elements().iter().map(|e| qb.vertex(e).expect("vertex")).collect();
    let elem_of = |q: &Quiver, v: usize, names: &[String]| names.iter().position(|e| e == q.vertex_name(v)).expect("element");
    let image = |x: usize| {
        let a = elem_of(qa, qa.source(x), ta.elements());
        let b = elem_of(qa, qa.target(x), ta.elements());
        ib.get(vb[f[a]], vb[f[b]])
    };
    let intertwines = (0..qa.arrow_count()).all(|x| {
        qa.out_arrows(qa.target(x)).iter().all(|&y| {
            let (u, v) = sa.sigma(x, y);
            sb.sigma(image(x), image(y)) == (image(u), image(v))
        })
    });
    MorphismReport { group_hom, pointed_heap, intertwiner: intertwines && f[ua] == ub }
}

/// Every total ternary operation on `n` labelled elements satisfying the
/// braid conditions but not the heap axioms. Exhaustive; only sensible for
/// `n ≤ 2`.
pub fn braided_non_heaps(n: usize) -> Vec<TernaryOp> {
    let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let cells = n * n * n;
    let total = n.checked_pow(cells as u32).expect("search space fits in usize");
    (0..total)
        .filter_map(|mut code| {
            let mut table = vec![0; cells];
            for slot in table.iter_mut() {
                *slot = code % n;
                code /= n;
            }
            let t = TernaryOp::new(elements.clone(), table).expect("sized table");
            (t.braid_condition_failure().is_none() && !check_heap(&t).is_heap()).then_some(t)
        })
        .collect()
}
