//! Built-in examples: cyclic and elementary abelian heaps, and three
//! Schurian presentations on the vertices `1..n`.

use crate::heap::{self, TernaryOp};
use crate::presentation::{extract_solution, Presentation};
use crate::quiver::{Arrow, Quiver};
use crate::ybm::BraidedQuiver;

/// The heap `⟨a,b,c⟩ = a − b + c` on `Z/k`.
pub fn zk_heap(k: usize) -> TernaryOp {
    assert!(k > 0, "Z/0 is not finite");
    TernaryOp::from_fn((0..k).map(|i| i.to_string()).collect(), |a, b, c| (a + k - b + c) % k).expect("sized table")
}

pub fn zk(k: usize) -> BraidedQuiver {
    heap::solution_from_ternary(&zk_heap(k)).expect("abelian heaps braid")
}

pub fn z3() -> BraidedQuiver {
    zk(3)
}

fn bits(x: usize, n: usize) -> String {
    (0..n).rev().map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// `(Z/2)^n` with `⟨a,b,c⟩ = a + b + c`; elements are bitstrings of length `n`.
pub fn z2n_heap(n: usize) -> TernaryOp {
    assert!(n > 0 && n < 8, "n out of range");
    TernaryOp::from_fn((0..1 << n).map(|x| bits(x, n)).collect(), |a, b, c| a ^ b ^ c).expect("sized table")
}

pub fn z2n(n: usize) -> BraidedQuiver {
    heap::solution_from_ternary(&z2n_heap(n)).expect("abelian heaps braid")
}

fn schurian(n: usize, pairs: &[(u8, u8)]) -> Quiver {
    let vertices = (1..=n).map(|v| v.to_string()).collect();
    let arrows = pairs.iter().map(|&(a, b)| Arrow::new(format!("[{a},{b}]"), a.to_string(), b.to_string())).collect();
    Quiver::new(vertices, arrows).expect("built-in quiver")
}

/// A relation between two length-2 paths given by their vertices.
type Square = ((u8, u8, u8), (u8, u8, u8));

fn square(rel: &[Square]) -> Vec<(String, String)> {
    rel.iter()
        .map(|&((a, b, c), (d, e, f))| (format!("[{a},{b}] [{b},{c}]"), format!("[{d},{e}] [{e},{f}]")))
        .collect()
}

/// Eight vertices, 24 arrows, 24 relations (a cube).
pub fn pres0() -> Presentation {
    let arrows = [
        (1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3), (4, 1), (1, 4), (5, 6), (6, 5), (6, 7), (7, 6),
        (7, 8), (8, 7), (8, 5), (5, 8), (1, 5), (5, 1), (4, 8), (8, 4), (2, 6), (6, 2), (3, 7), (7, 3),
    ];
    let rel = [
        ((1, 2, 3), (1, 4, 3)), ((1, 2, 6), (1, 5, 6)), ((1, 4, 8), (1, 5, 8)),
        ((2, 1, 5), (2, 6, 5)), ((2, 1, 4), (2, 3, 4)), ((2, 3, 7), (2, 6, 7)),
        ((3, 2, 1), (3, 4, 1)), ((3, 2, 6), (3, 7, 6)), ((3, 4, 8), (3, 7, 8)),
        ((4, 1, 2), (4, 3, 2)), ((4, 1, 5), (4, 8, 5)), ((4, 3, 7), (4, 8, 7)),
        ((5, 1, 2), (5, 6, 2)), ((5, 1, 4), (5, 8, 4)), ((5, 6, 7), (5, 8, 7)),
        ((6, 2, 1), (6, 5, 1)), ((6, 2, 3), (6, 7, 3)), ((6, 5, 8), (6, 7, 8)),
        ((7, 3, 2), (7, 6, 2)), ((7, 3, 4), (7, 8, 4)), ((7, 6, 5), (7, 8, 5)),
        ((8, 4, 1), (8, 5, 1)), ((8, 4, 3), (8, 7, 3)), ((8, 5, 6), (8, 7, 6)),
    ];
    Presentation::from_ids(schurian(8, &arrows), &square(&rel)).expect("built-in presentation")
}

/// Three vertices, all six arrows between distinct vertices, 3 relations.
pub fn pres1() -> Presentation {
    let arrows = [(1, 2), (2, 1), (2, 3), (3, 2), (3, 1), (1, 3)];
    let rel = [((1, 2, 1), (1, 3, 1)), ((2, 3, 2), (2, 1, 2)), ((3, 1, 3), (3, 2, 3))];
    Presentation::from_ids(schurian(3, &arrows), &square(&rel)).expect("built-in presentation")
}

/// A 4-cycle traversed both ways, 4 relations.
pub fn pres2() -> Presentation {
    let arrows = [(1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3), (4, 1), (1, 4)];
    let rel = [((1, 2, 3), (1, 4, 3)), ((2, 3, 4), (2, 1, 4)), ((3, 4, 1), (3, 2, 1)), ((4, 1, 2), (4, 3, 2))];
    Presentation::from_ids(schurian(4, &arrows), &square(&rel)).expect("built-in presentation")
}

pub fn pres0_solution() -> BraidedQuiver {
    extract_solution(&pres0()).expect("pres0 satisfies the conditions")
}

pub fn pres1_solution() -> BraidedQuiver {
    extract_solution(&pres1()).expect("pres1 satisfies the conditions")
}

pub fn pres2_solution() -> BraidedQuiver {
    extract_solution(&pres2()).expect("pres2 satisfies the conditions")
}

/// Every built-in solution with a short name, smallest first.
pub fn named_solutions() -> Vec<(&'static str, BraidedQuiver)> {
    vec![
        ("z2n1", z2n(1)),
        ("pres1", pres1_solution()),
        ("z3", z3()),
        ("z2n2", z2n(2)),
        ("pres2", pres2_solution()),
        ("pres0", pres0_solution()),
    ]
}

pub fn all_solutions() -> Vec<BraidedQuiver> {
    named_solutions().into_iter().map(|(_, s)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let p = pres0();
        assert_eq!(p.quiver().vertex_count(), 8);
        assert_eq!(p.quiver().arrow_count(), 24);
        assert_eq!(p.relations().len(), 24);
        assert_eq!(pres1().relations().len(), 3);
        assert_eq!(pres2().relations().len(), 4);
        assert_eq!(z3().quiver().arrow_count(), 9);
        assert_eq!(z2n(3).quiver().arrow_count(), 64);
    }

    #[test]
    fn z2n_closed_form() {
        for n in 1..=3 {
            let s = z2n(n);
            let q = s.quiver();
            let all = (1usize << n) - 1;
            let arrow = |a: usize, b: usize| q.arrow(&format!("[{},{}]", bits(a, n), bits(b, n))).unwrap();
            for a in 0..=all {
                for b in 0..=all {
                    for c in 0..=all {
                        // b + 1 + δ_{a,c}, componentwise
                        let delta = !(a ^ c) & all;
                        let m = b ^ all ^ delta;
                        assert_eq!(s.sigma(arrow(a, b), arrow(b, c)), (arrow(a, m), arrow(m, c)));
                    }
                }
            }
        }
    }
}
