//! Small named spaces and groupoids used throughout tests, examples and the
//! CLI fixture files.

use std::sync::Arc;

use crate::finspace::FinSpace;
use crate::groupoid::{
    action_groupoid, group_groupoid, pair_groupoid, unit_groupoid, Group, Groupoid,
};
use crate::morita::{Bimodule, MoritaEquivalence};

/// Sierpiński space `s <= g`.
pub fn sierp() -> FinSpace {
    FinSpace::from_names(&["s", "g"], &[("s", "g")]).unwrap()
}

/// Two closed branch points `x`, `y` below a generic point `g`.
pub fn node() -> FinSpace {
    FinSpace::from_names(&["g", "x", "y"], &[("x", "g"), ("y", "g")]).unwrap()
}

pub fn disc2() -> FinSpace {
    FinSpace::discrete(&["a", "b"])
}

pub fn pt() -> FinSpace {
    FinSpace::point("pt")
}

pub fn z2() -> Group {
    Group::cyclic(2).with_names(&["e", "σ"])
}

/// Pair groupoid on two discrete points.
pub fn pair2() -> Groupoid {
    pair_groupoid(&disc2())
}

/// `Z/2` acting on two discrete points by the swap.
pub fn flip() -> Groupoid {
    let g = z2();
    action_groupoid(&g, &FinSpace::discrete(&g.names), &disc2(), |x, s| x ^ s)
}

/// `Z/2` as a groupoid over one point.
pub fn z2pt() -> Groupoid {
    let g = z2();
    group_groupoid(&g, &FinSpace::discrete(&g.names), "pt")
}

pub fn unit_pt() -> Groupoid {
    unit_groupoid(&pt())
}

/// FLIP is Morita equivalent to the one-point groupoid: the carrier is the
/// two points of FLIP, `p` is the identity, and FLIP acts by moving a point
/// along the unique arrow into it, `γ·x = s(γ)` for `t(γ) = x`.
pub fn flip_to_point() -> MoritaEquivalence {
    let g = Arc::new(flip());
    let u = Arc::new(unit_pt());
    let g2 = g.clone();
    let b = Bimodule::from_fn(
        g,
        u,
        Arc::new(disc2()),
        vec![0, 1],
        vec![0, 0],
        move |a, _| Some(g2.s(a)),
        |x, _| Some(x),
    )
    .unwrap();
    MoritaEquivalence::new(b).unwrap()
}
