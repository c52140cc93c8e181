use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ExtremalPrimitiveRelation;
use crate::fan::{Fan, Wall};
use crate::lattice::{quotient_map, LatticeVector};
use crate::positivity::{local_cartier, TorusDivisor};
use crate::{Error, Result};

/// `deg(D|_{V(w)})` for an interior wall `w`.
///
/// With `m_i` the local Cartier data on the adjacent cones, `m_1 − m_2`
/// vanishes on `w` and is evaluated on the off-wall ray of `σ_2`, divided
/// by the index of that ray's image in `N / N_w`. The result is symmetric
/// in the two cones and gives `+1` for a line on `P^2`.
pub fn intersection_number(fan: &Fan, d: &TorusDivisor, wall: &Wall) -> Result<BigRational> {
    if !wall.is_interior() {
        return Err(Error::BoundaryWall);
    }
    let cones = fan.max_cones();
    let m1 = local_cartier(fan, &cones[wall.adjacent[0]], d)?;
    let m2 = local_cartier(fan, &cones[wall.adjacent[1]], d)?;
    let off = wall.off_wall(fan)[1];
    let v = fan.ray(off);
    let gens: Vec<LatticeVector> = fan.generators(&wall.face).into_iter().cloned().collect();
    let q = quotient_map(&gens, fan.rank())?;
    let image = q.apply(v)?;
    let k = BigRational::from_integer(image[0].abs());
    let pairing: BigRational = m1
        .iter()
        .zip(&m2)
        .zip(v.iter())
        .map(|((a, b), x)| (a - b) * BigRational::from_integer(x.clone()))
        .sum();
    Ok(pairing / k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntersectionSign {
    Positive,
    Zero,
    Negative,
}

impl IntersectionSign {
    pub fn of(x: &BigRational) -> Self {
        if x.is_positive() {
            IntersectionSign::Positive
        } else if x.is_zero() {
            IntersectionSign::Zero
        } else {
            IntersectionSign::Negative
        }
    }
}

/// Sign of `D_v · C` for `C` in the ray of `epr`.
pub fn intersection_sign(epr: &ExtremalPrimitiveRelation, v: usize) -> IntersectionSign {
    if epr.xs.contains(&v) {
        IntersectionSign::Positive
    } else if epr.ys.contains(&v) {
        IntersectionSign::Negative
    } else {
        IntersectionSign::Zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{enumerate_walls, Cone};
    use crate::fixtures;
    use crate::mori::{curve_class, wall_with_face, MoriAnalysis};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn wall(fan: &Fan, rays: &[usize]) -> Wall {
        let walls = enumerate_walls(fan).unwrap();
        wall_with_face(&walls, &Cone::from(rays)).unwrap().clone()
    }

    #[test]
    fn line_on_p2_has_degree_one() {
        let fan = fixtures::p2();
        let d = TorusDivisor::prime(3, 0);
        assert_eq!(intersection_number(&fan, &d, &wall(&fan, &[1])).unwrap(), q(1, 1));
    }

    #[test]
    fn exceptional_self_intersection() {
        let fan = fixtures::f1();
        let d = TorusDivisor::prime(4, 3);
        assert_eq!(intersection_number(&fan, &d, &wall(&fan, &[3])).unwrap(), q(-1, 1));
    }

    #[test]
    fn disjoint_support_gives_zero() {
        let fan = fixtures::f1();
        // wall {0} has adjacent cones {0,3}, {0,2}; D_1 meets neither
        let d = TorusDivisor::prime(4, 1);
        assert_eq!(intersection_number(&fan, &d, &wall(&fan, &[0])).unwrap(), q(0, 1));
    }

    #[test]
    fn weighted_plane_values() {
        let fan = fixtures::p121();
        let values: Vec<BigRational> = (0..3)
            .map(|v| intersection_number(&fan, &TorusDivisor::prime(3, v), &wall(&fan, &[0])).unwrap())
            .collect();
        // the curve V(r0) meets D_1 in a non-smooth point
        assert_eq!(values, vec![q(1, 2), q(1, 1), q(1, 2)]);
    }

    #[test]
    fn smooth_values_match_classes() {
        for fan in [fixtures::p2(), fixtures::f1(), fixtures::p1xp1(), fixtures::blowup_a2()] {
            let n = fan.rays().len();
            for w in enumerate_walls(&fan).unwrap().into_iter().filter(Wall::is_interior) {
                let class = curve_class(&fan, &w).unwrap();
                for v in 0..n {
                    let x = intersection_number(&fan, &TorusDivisor::prime(n, v), &w).unwrap();
                    assert_eq!(&x, class.coefficient(v));
                }
            }
        }
    }

    #[test]
    fn sign_law_on_f1() {
        let m = fixtures::f1_to_point();
        let an = MoriAnalysis::new(&m).unwrap();
        let exc = &an.relations[1];
        assert_eq!(intersection_sign(exc, 0), IntersectionSign::Positive);
        assert_eq!(intersection_sign(exc, 3), IntersectionSign::Negative);
        assert_eq!(intersection_sign(exc, 2), IntersectionSign::Zero);
    }
}
