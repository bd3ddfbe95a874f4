//! The structure groupoid as left fractions `u⁻¹v` over the structure
//! category. Fractions are not reduced; equality goes through left-lcms.

use thiserror::Error;

use crate::garside::{CatElement, GarsideError, Structure};
use crate::quiver::{PathWord, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error(transparent)]
    Garside(#[from] GarsideError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("cannot multiply: first factor ends at {0:?}, second starts at {1:?}")]
    EndpointMismatch(String, String),
    #[error("fraction sides start at different vertices")]
    SourceMismatch,
}

/// `u⁻¹v` with `s(u) = s(v)`; it runs from `t(u)` to `t(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupoidElement {
    pub u: PathWord,
    pub v: PathWord,
}

impl GroupoidElement {
    pub fn new(u: PathWord, v: PathWord) -> Result<Self, GroupoidError> {
        if u.base != v.base {
            return Err(GroupoidError::SourceMismatch);
        }
        Ok(GroupoidElement { u, v })
    }

    /// `ι(x) = ε⁻¹x`.
    pub fn iota(x: PathWord) -> Self {
        GroupoidElement { u: PathWord::empty(x.base), v: x }
    }

    pub fn identity(v: usize) -> Self {
        GroupoidElement { u: PathWord::empty(v), v: PathWord::empty(v) }
    }
}

pub fn source(st: &Structure, a: &GroupoidElement) -> usize {
    st.quiver().target_of(&a.u)
}

pub fn target(st: &Structure, a: &GroupoidElement) -> usize {
    st.quiver().target_of(&a.v)
}

pub fn invert_g(a: &GroupoidElement) -> GroupoidElement {
    GroupoidElement { u: a.v.clone(), v: a.u.clone() }
}

/// Left-lcm of two paths with a common target: `(p, q)` with `p·x = q·y`.
fn lcm_factors(st: &Structure, x: &PathWord, y: &PathWord) -> Result<(PathWord, PathWord), GarsideError> {
    Ok((st.left_complement(x, y)?, st.left_complement(y, x)?))
}

pub fn equal_g(st: &Structure, a: &GroupoidElement, b: &GroupoidElement) -> Result<bool, GroupoidError> {
    if source(st, a) != source(st, b) || target(st, a) != target(st, b) {
        return Ok(false);
    }
    let q = st.quiver();
    let (p, r) = lcm_factors(st, &a.u, &b.u)?;
    Ok(st.equal_cat(&q.concat(&p, &a.v)?, &q.concat(&r, &b.v)?)?)
}

/// `(u⁻¹v)(w⁻¹z) = (p·u)⁻¹(q·z)` where `p·v = q·w` is a left-lcm.
pub fn multiply_g(st: &Structure, a: &GroupoidElement, b: &GroupoidElement) -> Result<GroupoidElement, GroupoidError> {
    let q = st.quiver();
    let (ta, sb) = (target(st, a), source(st, b));
    if ta != sb {
        return Err(GroupoidError::EndpointMismatch(q.vertex_name(ta).to_string(), q.vertex_name(sb).to_string()));
    }
    let (p, r) = lcm_factors(st, &a.v, &b.u)?;
    Ok(GroupoidElement { u: q.concat(&p, &a.u)?, v: q.concat(&r, &b.v)? })
}

/// `(nf(u), nf(v))` after cancelling common left divisors, one `Δ` at a time.
pub fn symmetric_normal(st: &Structure, a: &GroupoidElement) -> Result<(CatElement, CatElement), GroupoidError> {
    let (mut u, mut v) = (a.u.clone(), a.v.clone());
    loop {
        let du = st.atom_divisors(&u);
        let common: Vec<usize> = st.atom_divisors(&v).into_iter().filter(|x| du.contains(x)).collect();
        if common.is_empty() {
            break;
        }
        let e = st.delta(&common)?;
        u = st.right_complement(&e, &u)?;
        v = st.right_complement(&e, &v)?;
    }
    Ok((st.normal_form(&u)?, st.normal_form(&v)?))
}

/// Folds a word such as `x ~y z` (`~` marks an inverse) left to right;
/// `eps:<v>` is the identity at `v`.
pub fn parse_word(st: &Structure, text: &str) -> Result<GroupoidElement, GroupoidError> {
    let q = st.quiver();
    let text = text.trim();
    if let Some(v) = text.strip_prefix(crate::quiver::UNIT_PREFIX) {
        return Ok(GroupoidElement::identity(q.vertex(v)?));
    }
    let mut acc: Option<GroupoidElement> = None;
    for tok in text.split_whitespace() {
        let (inv, id) = match tok.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, tok),
        };
        let x = GroupoidElement::iota(q.atom(q.arrow(id)?));
        let x = if inv { invert_g(&x) } else { x };
        acc = Some(match acc {
            None => x,
            Some(a) => multiply_g(st, &a, &x)?,
        });
    }
    acc.ok_or(GroupoidError::Quiver(QuiverError::EmptyExpression))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn pres1() -> Structure {
        Structure::new(builtin::pres1_solution()).unwrap()
    }

    #[test]
    fn lifted_relation() {
        let st = pres1();
        let a = parse_word(&st, "[1,2] [2,1]").unwrap();
        let b = parse_word(&st, "[1,3] [3,1]").unwrap();
        assert!(equal_g(&st, &a, &b).unwrap());
        let c = parse_word(&st, "[1,2] [2,3]").unwrap();
        assert!(!equal_g(&st, &a, &c).unwrap());
    }

    #[test]
    fn inverses_cancel() {
        let st = pres1();
        let q = st.quiver();
        for x in 0..q.arrow_count() {
            let a = GroupoidElement::iota(q.atom(x));
            let one = GroupoidElement::identity(q.source(x));
            assert!(equal_g(&st, &multiply_g(&st, &a, &invert_g(&a)).unwrap(), &one).unwrap());
            let back = GroupoidElement::identity(q.target(x));
            assert!(equal_g(&st, &multiply_g(&st, &invert_g(&a), &a).unwrap(), &back).unwrap());
            let (u, v) = symmetric_normal(&st, &multiply_g(&st, &a, &invert_g(&a)).unwrap()).unwrap();
            assert!(u.nf.is_empty() && v.nf.is_empty());
        }
    }

    #[test]
    fn iota_symmetric_normal() {
        let st = pres1();
        let q = st.quiver();
        let x = q.atom(0);
        let (u, v) = symmetric_normal(&st, &GroupoidElement::iota(x.clone())).unwrap();
        assert!(u.nf.is_empty());
        assert_eq!(v.repr(), x);
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let st = pres1();
        let q = st.quiver();
        let a = GroupoidElement::iota(q.parse_path("[1,2]").unwrap());
        assert!(matches!(multiply_g(&st, &a, &a), Err(GroupoidError::EndpointMismatch(..))));
        assert!(parse_word(&st, "[1,2] ~[1,2] [1,3]").is_ok());
    }
}
