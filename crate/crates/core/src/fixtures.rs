//! Small hand-checkable fans and morphisms used throughout the tests and docs.

use crate::fan::{Cone, Fan, FanMorphism};
use crate::lattice::{IntMatrix, LatticeVector};

pub fn point() -> Fan {
    Fan::point()
}

pub fn p1() -> Fan {
    Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]])
}

/// Rays (1,0), (0,1), (-1,-1).
pub fn p2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

/// P^2 blown up at a fixed point: P^2 rays plus r3 = (1,1).
pub fn f1() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]],
        &[&[0, 3], &[3, 1], &[1, 2], &[2, 0]],
    )
}

/// Rays (1,0), (-1,0), (0,1), (0,-1).
pub fn p1xp1() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
        &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]],
    )
}

/// Weighted projective plane P(1,2,1): rays (1,0), (0,1), (-1,-2).
pub fn p121() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]])
}

pub fn a2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]])
}

/// Blowup of A^2 at the origin: rays (1,0), (0,1), (1,1).
pub fn blowup_a2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[2, 1]])
}

fn three_fold_source(u4: [i64; 3]) -> Fan {
    Fan::from_i64(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &u4],
        &[&[0, 1, 2], &[0, 1, 3]],
    )
}

fn three_fold_target(u4: [i64; 3]) -> Fan {
    Fan::with_general_cones(
        3,
        vec![
            LatticeVector::from_i64(&[1, 0, 0]),
            LatticeVector::from_i64(&[0, 1, 0]),
            LatticeVector::from_i64(&[0, 0, 1]),
            LatticeVector::from_i64(&u4),
        ],
        Vec::new(),
        vec![Cone::new(vec![0, 1, 2, 3])],
    )
}

/// Atiyah flop source: u1 + u2 = u3 + u4 with u4 = (1,1,-1); cones {u1,u2,u3}, {u1,u2,u4}.
pub fn atiyah_source() -> Fan {
    three_fold_source([1, 1, -1])
}

/// The cone over a quadric: a single non-simplicial cone on u1..u4.
pub fn atiyah_target() -> Fan {
    three_fold_target([1, 1, -1])
}

/// Smooth threefold with relation u3 + u4 = 2 u1 + u2, u4 = (2,1,-1).
pub fn weighted_flip_source() -> Fan {
    three_fold_source([2, 1, -1])
}

pub fn weighted_flip_target() -> Fan {
    three_fold_target([2, 1, -1])
}

pub fn p2_to_point() -> FanMorphism {
    FanMorphism::to_point(p2())
}

pub fn f1_to_point() -> FanMorphism {
    FanMorphism::to_point(f1())
}

pub fn p121_to_point() -> FanMorphism {
    FanMorphism::to_point(p121())
}

/// First projection P^1 x P^1 -> P^1.
pub fn p1xp1_to_p1() -> FanMorphism {
    FanMorphism::new(IntMatrix::from_i64_rows(&[&[1, 0]]), p1xp1(), p1()).expect("shapes agree")
}

pub fn blowup_to_a2() -> FanMorphism {
    FanMorphism::new(IntMatrix::identity(2), blowup_a2(), a2()).expect("shapes agree")
}

pub fn atiyah_flop() -> FanMorphism {
    FanMorphism::new(IntMatrix::identity(3), atiyah_source(), atiyah_target()).expect("shapes agree")
}

pub fn weighted_flip() -> FanMorphism {
    FanMorphism::new(IntMatrix::identity(3), weighted_flip_source(), weighted_flip_target())
        .expect("shapes agree")
}

pub fn all_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("point", point()),
        ("P1", p1()),
        ("P2", p2()),
        ("F1", f1()),
        ("P1xP1", p1xp1()),
        ("P(1,2,1)", p121()),
        ("A2", a2()),
        ("Bl A2", blowup_a2()),
        ("Atiyah X", atiyah_source()),
        ("Atiyah Y", atiyah_target()),
        ("flip X", weighted_flip_source()),
        ("flip Y", weighted_flip_target()),
    ]
}

/// Every fixture morphism with a simplicial source.
pub fn all_morphisms() -> Vec<(&'static str, FanMorphism)> {
    vec![
        ("P2 -> pt", p2_to_point()),
        ("F1 -> pt", f1_to_point()),
        ("P1xP1 -> P1", p1xp1_to_p1()),
        ("P(1,2,1) -> pt", p121_to_point()),
        ("Bl A2 -> A2", blowup_to_a2()),
        ("Atiyah flop", atiyah_flop()),
        ("weighted flip", weighted_flip()),
    ]
}
