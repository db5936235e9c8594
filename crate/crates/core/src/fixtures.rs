//! Small dg quivers used throughout the tests and examples.

use std::collections::BTreeMap;

use crate::algebra::{scalar, Arrow, ArrowName, DgQuiver, Element, Path, Quiver};
use crate::potential::{OpPairing, Potential, QuiverWithPotential};

/// Builds an element from `(coefficient, path written left to right)` pairs.
pub fn poly(quiver: &Quiver, terms: &[(i64, &[&str])]) -> Element {
    let mut e = Element::zero();
    for (c, names) in terms {
        let p = Path::from_names(quiver, names.iter().copied()).expect("fixture path");
        e.add_term(p, scalar(*c));
    }
    e
}

/// `(coefficient, path written left to right)` pairs, as taken by [`poly`].
pub type Terms<'a> = &'a [(i64, &'a [&'a str])];

fn build(vertices: u32, arrows: &[(&str, u32, u32, i64)], diffs: &[(&str, Terms<'_>)]) -> DgQuiver {
    let q = Quiver::with_arrows(vertices, arrows.iter().map(|&(n, s, t, d)| Arrow::new(n, s, t, d)))
        .expect("fixture quiver");
    let diff: BTreeMap<ArrowName, Element> = diffs
        .iter()
        .map(|(n, terms)| (ArrowName::from(*n), poly(&q, terms)))
        .collect();
    DgQuiver::new_checked(q, diff).expect("fixture dg quiver")
}

/// `1 -phi-> 2 -psi-> 3` with `omega: 1 -> 3` in degree 1 and `d omega = psi phi`.
pub fn a3_rad2() -> DgQuiver {
    build(
        3,
        &[("phi", 1, 2, 0), ("psi", 2, 3, 0), ("omega", 1, 3, 1)],
        &[("omega", &[(1, &["psi", "phi"])])],
    )
}

/// Five-vertex dg quiver with `d r = beta alpha`, `d s = gamma beta`,
/// `d x = s alpha - gamma r`.
pub fn example_42() -> DgQuiver {
    build(
        5,
        &[
            ("alpha", 1, 2, 0),
            ("beta", 2, 3, 0),
            ("gamma", 3, 4, 0),
            ("delta", 2, 5, 0),
            ("r", 1, 3, 1),
            ("s", 2, 4, 1),
            ("x", 1, 4, 2),
        ],
        &[
            ("r", &[(1, &["beta", "alpha"])]),
            ("s", &[(1, &["gamma", "beta"])]),
            ("x", &[(1, &["s", "alpha"]), (-1, &["gamma", "r"])]),
        ],
    )
}

fn classical(vertices: u32, arrows: &[(&str, u32, u32)], w: &[(i64, &[&str])]) -> QuiverWithPotential {
    let q =
        Quiver::with_arrows(vertices, arrows.iter().map(|&(n, s, t)| Arrow::new(n, s, t, 0))).expect("fixture quiver");
    let potential = Potential::from_element(&q, &poly(&q, w)).expect("fixture potential");
    QuiverWithPotential::classical(q, potential).expect("fixture quiver with potential")
}

/// `(arrow, opposite, sign of arrow^op, sign of opposite^op)`; an arrow paired with itself is listed once.
type Pair<'a> = (&'a str, &'a str, i8, i8);

fn higher(
    dimension: i64,
    vertices: u32,
    arrows: &[(&str, u32, u32, i64)],
    pairs: &[Pair<'_>],
    w: &[(i64, &[&str])],
) -> QuiverWithPotential {
    let q = Quiver::with_arrows(vertices, arrows.iter().map(|&(n, s, t, d)| Arrow::new(n, s, t, d)))
        .expect("fixture quiver");
    let mut map = BTreeMap::new();
    for &(a, b, s, t) in pairs {
        map.insert(ArrowName::from(a), (ArrowName::from(b), s));
        map.insert(ArrowName::from(b), (ArrowName::from(a), t));
    }
    let pairing = OpPairing::new(&q, dimension, map).expect("fixture pairing");
    let potential = Potential::from_element(&q, &poly(&q, w)).expect("fixture potential");
    QuiverWithPotential::higher(q, potential, pairing).expect("fixture quiver with potential")
}

/// `1 -phi-> 2 -alpha-> 3` with zero potential.
pub fn linear_a3() -> QuiverWithPotential {
    classical(3, &[("phi", 1, 2), ("alpha", 2, 3)], &[])
}

/// The oriented 3-cycle `alpha: 1 -> 2`, `beta: 2 -> 3`, `gamma: 3 -> 1` with `W = gamma beta alpha`.
pub fn triangle() -> QuiverWithPotential {
    classical(
        3,
        &[("alpha", 1, 2), ("beta", 2, 3), ("gamma", 3, 1)],
        &[(1, &["gamma", "beta", "alpha"])],
    )
}

/// Oriented 3-cycle in dimension `d` (4 or 5): `a: 1 -> 2`, `b: 2 -> 3` in
/// degree 0, `c: 3 -> 1` in degree `d - 3`, with `W = c b a` or `W = 0`.
pub fn higher_cycle(dimension: i64, with_potential: bool) -> QuiverWithPotential {
    let dc = dimension - 3;
    let c_sign: i8 = if (dc * (dimension - 2 - dc)) % 2 == 0 { -1 } else { 1 };
    let w: &[(i64, &[&str])] = if with_potential { &[(1, &["c", "b", "a"])] } else { &[] };
    higher(
        dimension,
        3,
        &[
            ("a", 1, 2, 0),
            ("b", 2, 3, 0),
            ("c", 3, 1, dc),
            ("a^op", 2, 1, dimension - 2),
            ("b^op", 3, 2, dimension - 2),
            ("c^op", 1, 3, dimension - 2 - dc),
        ],
        &[("a", "a^op", -1, 1), ("b", "b^op", -1, 1), ("c", "c^op", 1, c_sign)],
        w,
    )
}

/// Dimension `d` (4 or 5): `a: 1 -> 2`, `b: 2 -> 1` in degree 0 and a loop
/// `x` at 2 of degree `d - 3` whose opposite is a second loop `y`, with
/// `W = b x a` or `W = 0`. Mutating at 2 meets loops of positive degree.
pub fn higher_loop(dimension: i64, with_potential: bool) -> QuiverWithPotential {
    let dx = dimension - 3;
    let dy = dimension - 2 - dx;
    let y_sign: i8 = if (dx * dy) % 2 == 0 { -1 } else { 1 };
    let w: &[(i64, &[&str])] = if with_potential { &[(1, &["b", "x", "a"])] } else { &[] };
    higher(
        dimension,
        2,
        &[
            ("a", 1, 2, 0),
            ("b", 2, 1, 0),
            ("x", 2, 2, dx),
            ("y", 2, 2, dy),
            ("a^op", 2, 1, dimension - 2),
            ("b^op", 1, 2, dimension - 2),
        ],
        &[("a", "a^op", -1, 1), ("b", "b^op", -1, 1), ("x", "y", 1, y_sign)],
        w,
    )
}
