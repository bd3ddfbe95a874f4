//! Quiver-theoretic Yang-Baxter maps, their right-cyclic calculus and the
//! Garside structure of the associated categories and groupoids.

pub mod builtin;
pub mod cli;
pub mod garside;
pub mod groupoid;
pub mod heap;
pub mod io;
pub mod oracle;
pub mod par;
pub mod presentation;
pub mod quiver;
pub mod rc;
pub mod ybm;
