//! The right-cyclic systems attached to an involutive non-degenerate σ.
//!
//! `x ⋆ y := (x⇀_)⁻¹(y)` for arrows with a common source and
//! `x • y := (_↼x)⁻¹(y)` for arrows with a common target. Completion
//! appends one unit loop per vertex (index `arrow_count() + v`), after
//! which both operations extend cell by cell to paths.

use thiserror::Error;

use crate::quiver::{PathWord, Quiver, QuiverError};
use crate::ybm::BraidedQuiver;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RcError {
    #[error("σ is not involutive: {0}")]
    NotInvolutive(String),
    #[error("σ is not left-non-degenerate: {0}")]
    LeftDegenerate(String),
    #[error("σ is not right-non-degenerate: {0}")]
    RightDegenerate(String),
    #[error("system is already completed")]
    AlreadyCompleted,
    #[error("system is not completed")]
    NotCompleted,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("source mismatch: paths start at {0:?} and {1:?}")]
    SourceMismatch(String, String),
    #[error("target mismatch: paths end at {0:?} and {1:?}")]
    TargetMismatch(String, String),
}

fn require_involutive(s: &BraidedQuiver) -> Result<(), RcError> {
    let r = s.check_involutive_capped(1);
    match r.violations.first() {
        Some(v) => Err(RcError::NotInvolutive(v.detail.clone())),
        None => Ok(()),
    }
}

/// Removes every unit letter; the base vertex is kept.
pub fn strip_units(original_arrows: usize, p: &PathWord) -> PathWord {
    PathWord { base: p.base, edges: p.edges.iter().copied().filter(|&a| a < original_arrows).collect() }
}

/// Weak RC-system `(A, ⋆)`, optionally completed.
#[derive(Debug, Clone)]
pub struct RcSystem {
    quiver: Quiver,
    star: Vec<Vec<usize>>,
    hat: Option<Quiver>,
}

/// `x ⋆ y := (x⇀_)⁻¹(y)` on every same-source pair.
pub fn derive_star(s: &BraidedQuiver) -> Result<RcSystem, RcError> {
    require_involutive(s)?;
    let q = s.quiver();
    let mut star = Vec::with_capacity(q.arrow_count());
    for x in 0..q.arrow_count() {
        if !s.left_nondegenerate_at(x) {
            return Err(RcError::LeftDegenerate(q.arrow_id(x).to_string()));
        }
        let mut row = vec![usize::MAX; q.out_arrows(q.source(x)).len()];
        for &z in q.out_arrows(q.target(x)) {
            row[q.out_position(s.lact(x, z))] = z;
        }
        star.push(row);
    }
    Ok(RcSystem { quiver: q.clone(), star, hat: None })
}

impl RcSystem {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn is_completed(&self) -> bool {
        self.hat.is_some()
    }

    /// The quiver with unit loops, once completed.
    pub fn completed_quiver(&self) -> Option<&Quiver> {
        self.hat.as_ref()
    }

    /// Index of the unit loop ε_v.
    pub fn unit(&self, v: usize) -> usize {
        self.quiver.arrow_count() + v
    }

    pub fn is_unit(&self, a: usize) -> bool {
        a >= self.quiver.arrow_count()
    }

    fn source(&self, a: usize) -> usize {
        if self.is_unit(a) { a - self.quiver.arrow_count() } else { self.quiver.source(a) }
    }

    fn target(&self, a: usize) -> usize {
        if self.is_unit(a) { a - self.quiver.arrow_count() } else { self.quiver.target(a) }
    }

    /// The uncompleted `x ⋆ y`; `None` unless both are arrows with a common source.
    pub fn star(&self, x: usize, y: usize) -> Option<usize> {
        let n = self.quiver.arrow_count();
        (x < n && y < n && self.quiver.source(x) == self.quiver.source(y))
            .then(|| self.star[x][self.quiver.out_position(y)])
    }

    /// Completed operation `x ⋆̂ y` on letters with a common source.
    pub fn star_hat(&self, x: usize, y: usize) -> usize {
        debug_assert_eq!(self.source(x), self.source(y));
        if self.is_unit(x) {
            y
        } else if self.is_unit(y) || x == y {
            self.unit(self.target(x))
        } else {
            self.star[x][self.quiver.out_position(y)]
        }
    }

    pub fn complete(&self) -> Result<RcSystem, RcError> {
        if self.hat.is_some() {
            return Err(RcError::AlreadyCompleted);
        }
        let hat = self.quiver.with_unit_loops()?;
        Ok(RcSystem { quiver: self.quiver.clone(), star: self.star.clone(), hat: Some(hat) })
    }

    /// `(p ⋆ q, q ⋆ p)` by filling the len(p) × len(q) grid row by row.
    pub fn grid_star(&self, p: &PathWord, q: &PathWord) -> Result<(PathWord, PathWord), RcError> {
        let hat = self.hat.as_ref().ok_or(RcError::NotCompleted)?;
        if p.base != q.base {
            return Err(RcError::SourceMismatch(
                hat.vertex_name(p.base).to_string(),
                hat.vertex_name(q.base).to_string(),
            ));
        }
        let mut right = q.edges.clone();
        let mut bottom = Vec::with_capacity(p.len());
        for &x in &p.edges {
            let mut carry = x;
            for cell in right.iter_mut() {
                let y = *cell;
                *cell = self.star_hat(carry, y);
                carry = self.star_hat(y, carry);
            }
            bottom.push(carry);
        }
        let pq = PathWord { base: hat.target_of(p), edges: right };
        let qp = PathWord { base: hat.target_of(q), edges: bottom };
        Ok((pq, qp))
    }

    pub fn strip_units(&self, p: &PathWord) -> PathWord {
        strip_units(self.quiver.arrow_count(), p)
    }

    /// All `(x, y, x⋆y)` over arrows, or `x ⋆̂ y` over all letters once completed.
    pub fn table(&self) -> Vec<(usize, usize, usize)> {
        if let Some(hat) = &self.hat {
            return (0..hat.arrow_count())
                .flat_map(|x| hat.out_arrows(hat.source(x)).iter().map(move |&y| (x, y, self.star_hat(x, y))))
                .collect();
        }
        let q = &self.quiver;
        (0..q.arrow_count())
            .flat_map(|x| q.out_arrows(q.source(x)).iter().map(move |&y| (x, y, self.star[x][q.out_position(y)])))
            .collect()
    }

    /// Same-source triples violating the RC-law, over arrows or, once
    /// completed, over all letters.
    pub fn rc_law_failures(&self) -> Vec<(usize, usize, usize)> {
        let letters = self.letter_count();
        let op = |a: usize, b: usize| if self.is_completed() { self.star_hat(a, b) } else { self.star[a][self.quiver.out_position(b)] };
        let mut bad = Vec::new();
        for v in 0..self.quiver.vertex_count() {
            let at = self.letters_from(v, letters);
            for &x in &at {
                for &y in &at {
                    for &z in &at {
                        if op(op(x, y), op(x, z)) != op(op(y, x), op(y, z)) {
                            bad.push((x, y, z));
                        }
                    }
                }
            }
        }
        bad
    }

    /// Completed-unitality: `x ⋆̂ y = y ⋆̂ x = ε` only when `x = y`.
    pub fn is_unital(&self) -> bool {
        if !self.is_completed() {
            return false;
        }
        let letters = self.letter_count();
        (0..self.quiver.vertex_count()).all(|v| {
            let at = self.letters_from(v, letters);
            at.iter().all(|&x| {
                at.iter().all(|&y| {
                    x == y || !(self.is_unit(self.star_hat(x, y)) && self.is_unit(self.star_hat(y, x)))
                })
            })
        })
    }

    /// Whether every `x ⋆ _` is a bijection `A(s(x),Λ) → A(t(x),Λ)`.
    ///
    /// After completion `x ⋆̂ x = x ⋆̂ ε = ε`, so bijectivity cannot hold for
    /// arrows; what survives is injectivity of `x ⋆̂ _` once `x` itself is
    /// left out, and that is what is checked for a completed system.
    pub fn is_left_nondegenerate(&self) -> bool {
        let letters = self.letter_count();
        (0..letters).all(|x| {
            let dom: Vec<usize> = self.letters_from(self.source(x), letters);
            if self.is_completed() {
                let mut img: Vec<usize> =
                    dom.iter().filter(|&&y| y != x || self.is_unit(x)).map(|&y| self.star_hat(x, y)).collect();
                let len = img.len();
                img.sort_unstable();
                img.dedup();
                return img.len() == len;
            }
            let mut img: Vec<usize> = dom.iter().map(|&y| self.star[x][self.quiver.out_position(y)]).collect();
            img.sort_unstable();
            img.dedup();
            let mut cod = self.letters_from(self.target(x), letters);
            cod.sort_unstable();
            img == cod
        })
    }

    fn letter_count(&self) -> usize {
        self.hat.as_ref().map_or(self.quiver.arrow_count(), Quiver::arrow_count)
    }

    fn letters_from(&self, v: usize, letters: usize) -> Vec<usize> {
        let mut at = self.quiver.out_arrows(v).to_vec();
        if letters > self.quiver.arrow_count() {
            at.push(self.unit(v));
        }
        at
    }
}

/// Weak co-RC-system `(A, •)`, optionally completed.
#[derive(Debug, Clone)]
pub struct CoRcSystem {
    quiver: Quiver,
    bullet: Vec<Vec<usize>>,
    hat: Option<Quiver>,
}

/// `x • y := (_↼x)⁻¹(y)` on every same-target pair.
pub fn derive_bullet(s: &BraidedQuiver) -> Result<CoRcSystem, RcError> {
    require_involutive(s)?;
    let q = s.quiver();
    let mut bullet = Vec::with_capacity(q.arrow_count());
    for x in 0..q.arrow_count() {
        if !s.right_nondegenerate_at(x) {
            return Err(RcError::RightDegenerate(q.arrow_id(x).to_string()));
        }
        let mut row = vec![usize::MAX; q.in_arrows(q.target(x)).len()];
        for &z in q.in_arrows(q.source(x)) {
            row[q.in_position(s.ract(z, x))] = z;
        }
        bullet.push(row);
    }
    Ok(CoRcSystem { quiver: q.clone(), bullet, hat: None })
}

impl CoRcSystem {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn is_completed(&self) -> bool {
        self.hat.is_some()
    }

    pub fn completed_quiver(&self) -> Option<&Quiver> {
        self.hat.as_ref()
    }

    pub fn unit(&self, v: usize) -> usize {
        self.quiver.arrow_count() + v
    }

    pub fn is_unit(&self, a: usize) -> bool {
        a >= self.quiver.arrow_count()
    }

    fn source(&self, a: usize) -> usize {
        if self.is_unit(a) { a - self.quiver.arrow_count() } else { self.quiver.source(a) }
    }

    fn target(&self, a: usize) -> usize {
        if self.is_unit(a) { a - self.quiver.arrow_count() } else { self.quiver.target(a) }
    }

    /// The uncompleted `x • y`.
    pub fn bullet(&self, x: usize, y: usize) -> Option<usize> {
        let n = self.quiver.arrow_count();
        (x < n && y < n && self.quiver.target(x) == self.quiver.target(y))
            .then(|| self.bullet[x][self.quiver.in_position(y)])
    }

    /// `x ⋆̃ y := y • x`.
    pub fn tilde_star(&self, x: usize, y: usize) -> Option<usize> {
        self.bullet(y, x)
    }

    /// Completed `x •̂ y` on letters with a common target.
    pub fn bullet_hat(&self, x: usize, y: usize) -> usize {
        debug_assert_eq!(self.target(x), self.target(y));
        if self.is_unit(x) {
            y
        } else if self.is_unit(y) || x == y {
            self.unit(self.source(x))
        } else {
            self.bullet[x][self.quiver.in_position(y)]
        }
    }

    pub fn complete(&self) -> Result<CoRcSystem, RcError> {
        if self.hat.is_some() {
            return Err(RcError::AlreadyCompleted);
        }
        let hat = self.quiver.with_unit_loops()?;
        Ok(CoRcSystem { quiver: self.quiver.clone(), bullet: self.bullet.clone(), hat: Some(hat) })
    }

    /// `(p • q, q • p)`: `p • q` ends at `s(p)` and `(p • q)|p` is a common
    /// left multiple.
    pub fn grid_bullet(&self, p: &PathWord, q: &PathWord) -> Result<(PathWord, PathWord), RcError> {
        let hat = self.hat.as_ref().ok_or(RcError::NotCompleted)?;
        let (tp, tq) = (hat.target_of(p), hat.target_of(q));
        if tp != tq {
            return Err(RcError::TargetMismatch(hat.vertex_name(tp).to_string(), hat.vertex_name(tq).to_string()));
        }
        let mut left = q.edges.clone();
        let mut top = vec![0; p.len()];
        for (i, &x) in p.edges.iter().enumerate().rev() {
            let mut carry = x;
            for cell in left.iter_mut().rev() {
                let y = *cell;
                *cell = self.bullet_hat(carry, y);
                carry = self.bullet_hat(y, carry);
            }
            top[i] = carry;
        }
        let base_of = |edges: &[usize], fallback: usize| edges.first().map_or(fallback, |&a| self.source(a));
        let pq_base = base_of(&left, p.base);
        let qp_base = base_of(&top, q.base);
        Ok((PathWord { base: pq_base, edges: left }, PathWord { base: qp_base, edges: top }))
    }

    pub fn strip_units(&self, p: &PathWord) -> PathWord {
        strip_units(self.quiver.arrow_count(), p)
    }

    /// All `(x, y, x•y)` over arrows, or `x •̂ y` over all letters once completed.
    pub fn table(&self) -> Vec<(usize, usize, usize)> {
        if let Some(hat) = &self.hat {
            return (0..hat.arrow_count())
                .flat_map(|x| hat.in_arrows(hat.target(x)).iter().map(move |&y| (x, y, self.bullet_hat(x, y))))
                .collect();
        }
        let q = &self.quiver;
        (0..q.arrow_count())
            .flat_map(|x| q.in_arrows(q.target(x)).iter().map(move |&y| (x, y, self.bullet[x][q.in_position(y)])))
            .collect()
    }

    /// Same-target triples violating the co-RC-law.
    pub fn co_rc_law_failures(&self) -> Vec<(usize, usize, usize)> {
        let completed = self.is_completed();
        let op = |a: usize, b: usize| if completed { self.bullet_hat(a, b) } else { self.bullet[a][self.quiver.in_position(b)] };
        let mut bad = Vec::new();
        for v in 0..self.quiver.vertex_count() {
            let mut at = self.quiver.in_arrows(v).to_vec();
            if completed {
                at.push(self.unit(v));
            }
            for &x in &at {
                for &y in &at {
                    for &z in &at {
                        if op(op(x, y), op(x, z)) != op(op(y, x), op(y, z)) {
                            bad.push((x, y, z));
                        }
                    }
                }
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::ybm::BraidedQuiver;

    fn pair(q: &Quiver, a: &str, b: &str) -> usize {
        q.arrow(&format!("[{a},{b}]")).unwrap()
    }

    #[test]
    fn z3_complement_formula() {
        let s = builtin::z3();
        let rc = derive_star(&s).unwrap();
        let q = s.quiver();
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    if b == c {
                        continue;
                    }
                    let got = rc.star(pair(q, &a.to_string(), &b.to_string()), pair(q, &a.to_string(), &c.to_string()));
                    let d = (b - a + c).rem_euclid(3);
                    assert_eq!(got, Some(pair(q, &b.to_string(), &d.to_string())));
                }
            }
        }
    }

    #[test]
    fn uncompleted_self_star_is_stored() {
        let s = builtin::z3();
        let rc = derive_star(&s).unwrap();
        let q = s.quiver();
        let x = pair(q, "0", "1");
        let xx = rc.star(x, x).unwrap();
        assert_eq!(s.lact(x, xx), x);
        let hat = rc.complete().unwrap();
        assert_eq!(hat.star_hat(x, x), hat.unit(q.target(x)));
        assert_eq!(hat.star(x, x), Some(xx));
        let e0 = hat.unit(0);
        assert_eq!(hat.star_hat(e0, x), x);
        assert_eq!(hat.star_hat(x, e0), hat.unit(q.target(x)));
    }

    #[test]
    fn refuses_degenerate_or_non_involutive() {
        use crate::quiver::Arrow;
        let loops = Quiver::new(vec!["o".into()], vec![Arrow::new("p", "o", "o"), Arrow::new("q", "o", "o")]).unwrap();
        let id = BraidedQuiver::identity(loops);
        assert!(matches!(derive_star(&id), Err(RcError::LeftDegenerate(_))));
        assert!(matches!(derive_bullet(&id), Err(RcError::RightDegenerate(_))));
        let s = builtin::pres1_solution();
        let q = s.quiver();
        let a = q.arrow("[1,2]").unwrap();
        let b = q.arrow("[2,1]").unwrap();
        let nonin = s.with_entry(a, b, a, b).unwrap();
        assert!(matches!(derive_star(&nonin), Err(RcError::NotInvolutive(_))));
        assert!(matches!(derive_bullet(&nonin), Err(RcError::NotInvolutive(_))));
    }

    #[test]
    fn rc_laws_and_identities() {
        for s in builtin::all_solutions() {
            let rc = derive_star(&s).unwrap();
            let co = derive_bullet(&s).unwrap();
            assert!(rc.rc_law_failures().is_empty());
            assert!(co.co_rc_law_failures().is_empty());
            let q = s.quiver();
            for x in 0..q.arrow_count() {
                for &y in q.out_arrows(q.source(x)) {
                    let xy = rc.star(x, y).unwrap();
                    let yx = rc.star(y, x).unwrap();
                    assert_eq!(yx, s.ract(x, xy));
                    assert_eq!(q.source(xy), q.target(x));
                    assert_eq!(q.target(xy), q.target(yx));
                    assert_eq!(co.tilde_star(yx, xy), Some(x));
                }
            }
            let hat = rc.complete().unwrap();
            assert!(hat.is_unital());
            assert!(hat.is_left_nondegenerate());
            assert!(hat.rc_law_failures().is_empty());
            let cohat = co.complete().unwrap();
            assert!(cohat.co_rc_law_failures().is_empty());
            assert!(matches!(hat.complete(), Err(RcError::AlreadyCompleted)));
        }
    }

    #[test]
    fn bullet_completion_equations() {
        let s = builtin::pres1_solution();
        let co = derive_bullet(&s).unwrap().complete().unwrap();
        let q = s.quiver();
        for x in 0..q.arrow_count() {
            assert_eq!(co.bullet_hat(x, x), co.unit(q.source(x)));
            assert_eq!(co.bullet_hat(x, co.unit(q.target(x))), co.unit(q.source(x)));
            assert_eq!(co.bullet_hat(co.unit(q.target(x)), x), x);
        }
    }

    #[test]
    fn bullet_squares_are_sigma_squares() {
        let s = builtin::z3();
        let co = derive_bullet(&s).unwrap().complete().unwrap();
        let q = s.quiver();
        for a in 0..q.arrow_count() {
            for &b in q.in_arrows(q.target(a)) {
                if a != b {
                    assert_eq!(s.sigma(co.bullet_hat(a, b), a), (co.bullet_hat(b, a), b));
                }
            }
        }
    }

    #[test]
    fn grid_conventions() {
        let s = builtin::pres1_solution();
        let rc = derive_star(&s).unwrap();
        let q = s.quiver();
        let p = q.parse_path("[1,2]").unwrap();
        assert!(matches!(rc.grid_star(&p, &p), Err(RcError::NotCompleted)));
        let rc = rc.complete().unwrap();
        let r = q.parse_path("[1,3]").unwrap();
        let (pr, rp) = rc.grid_star(&p, &r).unwrap();
        assert_eq!(pr.edges, vec![rc.star_hat(p.edges[0], r.edges[0])]);
        assert_eq!(rp.edges, vec![rc.star_hat(r.edges[0], p.edges[0])]);
        let pp = q.parse_path("[1,2] [2,3]").unwrap();
        let e = PathWord::empty(pp.base);
        let (a, b) = rc.grid_star(&pp, &e).unwrap();
        assert_eq!(a, PathWord::empty(q.target_of(&pp)));
        assert_eq!(b, pp);
        let (a, b) = rc.grid_star(&e, &pp).unwrap();
        assert_eq!(a, pp);
        assert_eq!(b, PathWord::empty(q.target_of(&pp)));
        let other = q.parse_path("[2,1]").unwrap();
        assert!(matches!(rc.grid_star(&p, &other), Err(RcError::SourceMismatch(..))));
    }

    #[test]
    fn grid_bullet_self_collapses() {
        let s = builtin::pres1_solution();
        let co = derive_bullet(&s).unwrap().complete().unwrap();
        let q = s.quiver();
        for len in 1..4 {
            for p in q.enumerate_paths(None, len) {
                let (a, b) = co.grid_bullet(&p, &p).unwrap();
                assert!(co.strip_units(&a).is_empty());
                assert_eq!(a, b);
                assert_eq!(a.base, p.base);
            }
        }
    }

    #[test]
    fn strip() {
        let s = builtin::pres1_solution();
        let rc = derive_star(&s).unwrap().complete().unwrap();
        let q = s.quiver();
        let x = q.arrow("[1,2]").unwrap();
        let p = PathWord { base: 0, edges: vec![rc.unit(0), x, rc.unit(1)] };
        assert_eq!(rc.strip_units(&p).edges, vec![x]);
        let e = PathWord { base: 2, edges: vec![rc.unit(2)] };
        assert_eq!(rc.strip_units(&e), PathWord::empty(2));
    }
}
