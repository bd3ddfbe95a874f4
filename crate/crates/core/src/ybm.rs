//! Braided quivers: a quiver with an explicit σ-table on composable pairs,
//! plus exhaustive checks of the braid relation, involutivity and
//! non-degeneracy.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::par;
use crate::quiver::{Quiver, QuiverError};

pub const DEFAULT_MAX_VIOLATIONS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolutionError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("missing composable pair ({0}, {1})")]
    MissingPair(String, String),
    #[error("duplicate entry for ({0}, {1})")]
    DuplicateEntry(String, String),
    #[error("table entry ({0}, {1}) is not a composable pair")]
    NotComposable(String, String),
    #[error("endpoint violation at ({x}, {y}): {rule} fails")]
    Endpoint { x: String, y: String, rule: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationKind {
    YB1,
    YB2,
    YB3,
    I1,
    I2,
    LND,
    RND,
    #[serde(rename = "shape")]
    Shape,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::YB1 => "YB1",
            ViolationKind::YB2 => "YB2",
            ViolationKind::YB3 => "YB3",
            ViolationKind::I1 => "I1",
            ViolationKind::I2 => "I2",
            ViolationKind::LND => "LND",
            ViolationKind::RND => "RND",
            ViolationKind::Shape => "shape",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<String>,
    pub detail: String,
}

/// Exhaustive list of failures, truncated to `cap` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
    pub total: usize,
}

impl ViolationReport {
    fn from_all(mut all: Vec<Violation>, cap: usize) -> Self {
        let total = all.len();
        all.truncate(cap);
        ViolationReport { violations: all, total }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn truncated(&self) -> bool {
        self.total > self.violations.len()
    }
}

/// A quiver with a total σ on composable pairs, stored as a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidedQuiver {
    quiver: Quiver,
    // sigma[x][out_position(y)] for y leaving t(x)
    sigma: Vec<Vec<(usize, usize)>>,
}

impl BraidedQuiver {
    /// Builds σ from index quadruples `(x, y, u, v)` meaning σ(x|y) = u|v.
    pub fn new(quiver: Quiver, table: &[(usize, usize, usize, usize)]) -> Result<Self, SolutionError> {
        let q = &quiver;
        let mut sigma: Vec<Vec<Option<(usize, usize)>>> =
            (0..q.arrow_count()).map(|x| vec![None; q.out_arrows(q.target(x)).len()]).collect();
        for &(x, y, u, v) in table {
            let name = |a: usize| q.arrow_id(a).to_string();
            if q.target(x) != q.source(y) {
                return Err(SolutionError::NotComposable(name(x), name(y)));
            }
            check_endpoints(q, x, y, u, v)?;
            let slot = &mut sigma[x][q.out_position(y)];
            if slot.is_some() {
                return Err(SolutionError::DuplicateEntry(name(x), name(y)));
            }
            *slot = Some((u, v));
        }
        let mut full = Vec::with_capacity(sigma.len());
        for (x, row) in sigma.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (k, e) in row.into_iter().enumerate() {
                match e {
                    Some(e) => r.push(e),
                    None => {
                        let y = q.out_arrows(q.target(x))[k];
                        return Err(SolutionError::MissingPair(
                            q.arrow_id(x).to_string(),
                            q.arrow_id(y).to_string(),
                        ));
                    }
                }
            }
            full.push(r);
        }
        Ok(BraidedQuiver { quiver, sigma: full })
    }

    /// Builds σ from arrow ids, one `((x, y), (u, v))` row per pair.
    #[allow(clippy::type_complexity)]
    pub fn from_ids<S: AsRef<str>>(quiver: Quiver, table: &[((S, S), (S, S))]) -> Result<Self, SolutionError> {
        let idx = table
            .iter()
            .map(|((x, y), (u, v))| {
                Ok((
                    quiver.arrow(x.as_ref())?,
                    quiver.arrow(y.as_ref())?,
                    quiver.arrow(u.as_ref())?,
                    quiver.arrow(v.as_ref())?,
                ))
            })
            .collect::<Result<Vec<_>, QuiverError>>()?;
        Self::new(quiver, &idx)
    }

    /// Builds σ by evaluating `f` on every composable pair.
    pub fn from_fn<F>(quiver: Quiver, f: F) -> Result<Self, SolutionError>
    where
        F: Fn(usize, usize) -> (usize, usize),
    {
        let table: Vec<_> = composable_pairs(&quiver)
            .into_iter()
            .map(|(x, y)| {
                let (u, v) = f(x, y);
                (x, y, u, v)
            })
            .collect();
        Self::new(quiver, &table)
    }

    /// σ(x|y) = x|y.
    pub fn identity(quiver: Quiver) -> Self {
        Self::from_fn(quiver, |x, y| (x, y)).expect("identity table is shape-valid")
    }

    /// Copy with one entry replaced, shape re-checked.
    pub fn with_entry(&self, x: usize, y: usize, u: usize, v: usize) -> Result<Self, SolutionError> {
        let mut table = self.table();
        for e in table.iter_mut() {
            if e.0 == x && e.1 == y {
                *e = (x, y, u, v);
            }
        }
        Self::new(self.quiver.clone(), &table)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// σ(x|y); `x|y` must be composable.
    pub fn sigma(&self, x: usize, y: usize) -> (usize, usize) {
        debug_assert_eq!(self.quiver.target(x), self.quiver.source(y));
        self.sigma[x][self.quiver.out_position(y)]
    }

    /// x ⇀ y
    pub fn lact(&self, x: usize, y: usize) -> usize {
        self.sigma(x, y).0
    }

    /// x ↼ y
    pub fn ract(&self, x: usize, y: usize) -> usize {
        self.sigma(x, y).1
    }

    /// All entries `(x, y, u, v)` in lexicographic order of `(x, y)`.
    pub fn table(&self) -> Vec<(usize, usize, usize, usize)> {
        composable_pairs(&self.quiver)
            .into_iter()
            .map(|(x, y)| {
                let (u, v) = self.sigma(x, y);
                (x, y, u, v)
            })
            .collect()
    }

    fn ids(&self, arrows: &[usize]) -> Vec<String> {
        arrows.iter().map(|&a| self.quiver.arrow_id(a).to_string()).collect()
    }

    pub fn check_ybe(&self) -> ViolationReport {
        self.check_ybe_capped(DEFAULT_MAX_VIOLATIONS)
    }

    /// Sweeps every composable triple a|b|c against YB1–YB3.
    pub fn check_ybe_capped(&self, cap: usize) -> ViolationReport {
        let q = &self.quiver;
        let all = par::flat_map(q.arrow_count(), |a| {
            let mut found = Vec::new();
            for &b in q.out_arrows(q.target(a)) {
                for &c in q.out_arrows(q.target(b)) {
                    let (ab_l, ab_r) = self.sigma(a, b);
                    let (bc_l, bc_r) = self.sigma(b, c);
                    let (m_l, m_r) = self.sigma(ab_r, c);
                    let n_r = self.ract(a, bc_l);
                    let checks = [
                        (ViolationKind::YB1, self.lact(ab_l, m_l), self.lact(a, bc_l)),
                        (ViolationKind::YB2, self.ract(ab_l, m_l), self.lact(n_r, bc_r)),
                        (ViolationKind::YB3, m_r, self.ract(n_r, bc_r)),
                    ];
                    for (kind, lhs, rhs) in checks {
                        if lhs != rhs {
                            found.push(Violation {
                                kind,
                                witness: self.ids(&[a, b, c]),
                                detail: format!(
                                    "{kind} fails on {}|{}|{}: {} != {}",
                                    q.arrow_id(a),
                                    q.arrow_id(b),
                                    q.arrow_id(c),
                                    q.arrow_id(lhs),
                                    q.arrow_id(rhs)
                                ),
                            });
                        }
                    }
                }
            }
            found
        });
        ViolationReport::from_all(all, cap)
    }

    pub fn check_involutive(&self) -> ViolationReport {
        self.check_involutive_capped(DEFAULT_MAX_VIOLATIONS)
    }

    /// Checks I1 and I2 on every composable pair.
    pub fn check_involutive_capped(&self, cap: usize) -> ViolationReport {
        let q = &self.quiver;
        let all = par::flat_map(q.arrow_count(), |x| {
            let mut found = Vec::new();
            for &y in q.out_arrows(q.target(x)) {
                let (u, v) = self.sigma(x, y);
                let (xx, yy) = self.sigma(u, v);
                for (kind, got, want) in [(ViolationKind::I1, xx, x), (ViolationKind::I2, yy, y)] {
                    if got != want {
                        found.push(Violation {
                            kind,
                            witness: self.ids(&[x, y]),
                            detail: format!(
                                "{kind} fails on {}|{}: got {}, expected {}",
                                q.arrow_id(x),
                                q.arrow_id(y),
                                q.arrow_id(got),
                                q.arrow_id(want)
                            ),
                        });
                    }
                }
            }
            found
        });
        ViolationReport::from_all(all, cap)
    }

    pub fn check_nondegenerate(&self) -> ViolationReport {
        self.check_nondegenerate_capped(DEFAULT_MAX_VIOLATIONS)
    }

    /// Checks that every x⇀_ and _↼y is a bijection between the relevant hom-sets.
    pub fn check_nondegenerate_capped(&self, cap: usize) -> ViolationReport {
        let mut all = par::flat_map(self.quiver.arrow_count(), |x| {
            self.left_failure(x).into_iter().collect()
        });
        all.extend(par::flat_map(self.quiver.arrow_count(), |y| {
            self.right_failure(y).into_iter().collect()
        }));
        ViolationReport::from_all(all, cap)
    }

    /// Whether x⇀_ is a bijection A(t(x),Λ) → A(s(x),Λ).
    pub fn left_nondegenerate_at(&self, x: usize) -> bool {
        self.left_failure(x).is_none()
    }

    /// Whether _↼y is a bijection A(Λ,s(y)) → A(Λ,t(y)).
    pub fn right_nondegenerate_at(&self, y: usize) -> bool {
        self.right_failure(y).is_none()
    }

    fn left_failure(&self, x: usize) -> Option<Violation> {
        let q = &self.quiver;
        let domain = q.out_arrows(q.target(x));
        let codomain = q.out_arrows(q.source(x));
        let image: HashSet<usize> = domain.iter().map(|&y| self.lact(x, y)).collect();
        (image.len() != domain.len() || domain.len() != codomain.len()).then(|| Violation {
            kind: ViolationKind::LND,
            witness: self.ids(&[x]),
            detail: format!(
                "{} ⇀ _ hits {} of {} arrows from {} ({} inputs)",
                q.arrow_id(x),
                image.len(),
                codomain.len(),
                q.vertex_name(q.source(x)),
                domain.len()
            ),
        })
    }

    fn right_failure(&self, y: usize) -> Option<Violation> {
        let q = &self.quiver;
        let domain = q.in_arrows(q.source(y));
        let codomain = q.in_arrows(q.target(y));
        let image: HashSet<usize> = domain.iter().map(|&x| self.ract(x, y)).collect();
        (image.len() != domain.len() || domain.len() != codomain.len()).then(|| Violation {
            kind: ViolationKind::RND,
            witness: self.ids(&[y]),
            detail: format!(
                "_ ↼ {} hits {} of {} arrows into {} ({} inputs)",
                q.arrow_id(y),
                image.len(),
                codomain.len(),
                q.vertex_name(q.target(y)),
                domain.len()
            ),
        })
    }

    /// True iff all three sweeps come back empty.
    pub fn is_involutive_nondegenerate_ybm(&self) -> bool {
        self.check_ybe_capped(1).is_empty()
            && self.check_involutive_capped(1).is_empty()
            && self.check_nondegenerate_capped(1).is_empty()
    }
}

/// Every composable pair `(x, y)`, lexicographic.
pub fn composable_pairs(q: &Quiver) -> Vec<(usize, usize)> {
    (0..q.arrow_count())
        .flat_map(|x| q.out_arrows(q.target(x)).iter().map(move |&y| (x, y)))
        .collect()
}

fn check_endpoints(q: &Quiver, x: usize, y: usize, u: usize, v: usize) -> Result<(), SolutionError> {
    let rule = if q.source(u) != q.source(x) {
        Some("s(x⇀y) = s(x)")
    } else if q.target(v) != q.target(y) {
        Some("t(x↼y) = t(y)")
    } else if q.target(u) != q.source(v) {
        Some("t(x⇀y) = s(x↼y)")
    } else {
        None
    };
    match rule {
        Some(rule) => Err(SolutionError::Endpoint {
            x: q.arrow_id(x).to_string(),
            y: q.arrow_id(y).to_string(),
            rule,
        }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::quiver::Arrow;

    fn two_loops() -> Quiver {
        Quiver::new(vec!["o".into()], vec![Arrow::new("p", "o", "o"), Arrow::new("q", "o", "o")]).unwrap()
    }

    #[test]
    fn identity_is_an_involutive_ybm() {
        let s = BraidedQuiver::identity(builtin::pres1().quiver().clone());
        assert!(s.check_ybe().is_empty());
        assert!(s.check_involutive().is_empty());
    }

    #[test]
    fn z3_passes_everything() {
        let s = builtin::z3();
        assert!(s.check_ybe().is_empty());
        assert!(s.check_involutive().is_empty());
        assert!(s.check_nondegenerate().is_empty());
        assert!(builtin::z2n(2).check_involutive().is_empty());
    }

    #[test]
    fn shape_errors() {
        let q = builtin::pres1().quiver().clone();
        let mut table = BraidedQuiver::identity(q.clone()).table();
        let x = q.arrow("[1,2]").unwrap();
        let y = q.arrow("[2,3]").unwrap();
        table.retain(|e| !(e.0 == x && e.1 == y));
        let err = BraidedQuiver::new(q.clone(), &table).unwrap_err();
        assert_eq!(err, SolutionError::MissingPair("[1,2]".into(), "[2,3]".into()));
        assert!(err.to_string().contains("missing composable pair"));

        let mut dup = BraidedQuiver::identity(q.clone()).table();
        dup.push(dup[0]);
        assert!(matches!(BraidedQuiver::new(q.clone(), &dup), Err(SolutionError::DuplicateEntry(..))));

        let a21 = q.arrow("[2,1]").unwrap();
        let a13 = q.arrow("[1,3]").unwrap();
        let s = BraidedQuiver::identity(q.clone());
        match s.with_entry(x, a21, a13, a21) {
            Err(SolutionError::Endpoint { rule, .. }) => assert_eq!(rule, "t(x⇀y) = s(x↼y)"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn perturbed_pres1_breaks_ybe() {
        let s = builtin::pres1_solution();
        assert!(s.check_ybe().is_empty());
        let q = s.quiver();
        let x = q.arrow("[1,2]").unwrap();
        let y = q.arrow("[2,1]").unwrap();
        let bad = s.with_entry(x, y, x, y).unwrap();
        let report = bad.check_ybe();
        assert!(!report.is_empty());
        assert_eq!(report.violations[0].witness.len(), 3);
        assert_eq!(bad.check_ybe().violations, report.violations);
    }

    #[test]
    fn degenerate_two_loop_table() {
        let q = two_loops();
        let p = q.arrow("p").unwrap();
        let s = BraidedQuiver::from_fn(q, |_, y| (p, y)).unwrap();
        let r = s.check_nondegenerate();
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::LND));
    }

    #[test]
    fn cap_truncates() {
        let q = two_loops();
        let p = q.arrow("p").unwrap();
        let s = BraidedQuiver::from_fn(q, |_, _| (p, p)).unwrap();
        let r = s.check_involutive_capped(1);
        assert_eq!(r.violations.len(), 1);
        assert!(r.truncated());
    }

    #[test]
    fn involutive_means_sigma_squared_is_identity() {
        for s in [builtin::z3(), builtin::pres0_solution(), builtin::z2n(2)] {
            assert!(s.check_involutive().is_empty());
            for (x, y, u, v) in s.table() {
                assert_eq!(s.sigma(u, v), (x, y));
            }
        }
    }

    #[test]
    fn nondegenerate_images_are_full() {
        let s = builtin::pres2_solution();
        assert!(s.check_nondegenerate().is_empty());
        let q = s.quiver();
        for x in 0..q.arrow_count() {
            let mut image: Vec<usize> = q.out_arrows(q.target(x)).iter().map(|&y| s.lact(x, y)).collect();
            image.sort_unstable();
            let mut want = q.out_arrows(q.source(x)).to_vec();
            want.sort_unstable();
            assert_eq!(image, want);
        }
    }
}
