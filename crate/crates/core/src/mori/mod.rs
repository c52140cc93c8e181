//! Wall relations, curve classes and the relative Mori cone.
//!
//! Every interior wall `w` of a simplicial fan carries a unique primitive
//! integer relation among the rays of its two adjacent cones. Extended by
//! zeros to all rays it is the numerical class of the invariant curve
//! `V(w)` under `A_1(X) ⊗ Q ≅ {(c_x) : Σ c_x x = 0}`.

mod relation;
mod intersection;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use intersection::{intersection_number, intersection_sign, IntersectionSign};
pub use relation::{
    extremal_primitive_relation, verify_extremal_structure, verify_primitive_closure,
    ExtremalPrimitiveRelation, PrimitiveClosureReport, StructureReport,
};

use crate::fan::{contracted_walls, is_complete, Cone, Fan, FanMorphism, Wall};
use crate::lattice::{
    integer_kernel, multiplicity, rational_rank, same_direction, smith_normal_form, IntMatrix,
    LatticeVector,
};
use crate::lp;
use crate::{Error, Result};

/// The relation `Σ c_i v_i = 0` over the rays of the two cones adjacent to a wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub wall: Wall,
    /// Ray index to coefficient, over `G(σ1) ∪ G(σ2)`.
    pub coefficients: BTreeMap<usize, BigInt>,
    pub negative_part: Vec<usize>,
    pub zero_part: Vec<usize>,
    pub positive_part: Vec<usize>,
}

impl WallRelation {
    pub fn coefficient(&self, ray: usize) -> BigInt {
        self.coefficients.get(&ray).cloned().unwrap_or_default()
    }
}

pub fn wall_relation(fan: &Fan, wall: &Wall) -> Result<WallRelation> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if !wall.is_interior() {
        return Err(Error::BoundaryWall);
    }
    let off = wall.off_wall(fan);
    let mut indices: Vec<usize> = wall.face.rays().to_vec();
    indices.extend(off.iter().copied());
    let cols: Vec<&LatticeVector> = indices.iter().map(|&i| fan.ray(i)).collect();
    let m = IntMatrix::from_columns(&cols, fan.rank())?;
    let kernel = integer_kernel(&m);
    let [relation] = kernel.as_slice() else {
        return Err(Error::InvalidFan(format!(
            "wall {} has a {}-dimensional relation space",
            wall.face,
            kernel.len()
        )));
    };
    let k = indices.len();
    let mut relation = relation.clone();
    if relation[k - 1].is_negative() {
        relation = relation.scale(&BigInt::from(-1));
    }
    if !(relation[k - 2].is_positive() && relation[k - 1].is_positive()) {
        return Err(Error::InvalidFan(format!(
            "cones adjacent to wall {} lie on the same side",
            wall.face
        )));
    }
    let mut coefficients = BTreeMap::new();
    let (mut negative_part, mut zero_part, mut positive_part) = (Vec::new(), Vec::new(), Vec::new());
    for (&i, c) in indices.iter().zip(relation.iter()) {
        coefficients.insert(i, c.clone());
        if c.is_negative() {
            negative_part.push(i);
        } else if c.is_zero() {
            zero_part.push(i);
        } else {
            positive_part.push(i);
        }
    }
    negative_part.sort_unstable();
    zero_part.sort_unstable();
    positive_part.sort_unstable();
    Ok(WallRelation {
        wall: wall.clone(),
        coefficients,
        negative_part,
        zero_part,
        positive_part,
    })
}

/// How the entries of a [`CurveClass`] are scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Entries are the intersection numbers `D_x · C` (both adjacent cones smooth).
    Intersection,
    /// Entries are the primitive integer wall relation; intersection numbers
    /// are a positive multiple, see [`intersection_number`].
    PrimitiveRelation,
}

/// A numerical curve class: one rational entry per ray with `Σ c_x x = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub coefficients: Vec<BigRational>,
    pub normalization: Normalization,
}

impl CurveClass {
    pub fn coefficient(&self, ray: usize) -> &BigRational {
        &self.coefficients[ray]
    }

    /// Checks the defining identity `Σ c_x x = 0` against the fan's rays.
    pub fn is_relation_of(&self, fan: &Fan) -> bool {
        if self.coefficients.len() != fan.rays().len() {
            return false;
        }
        (0..fan.rank()).all(|i| {
            self.coefficients
                .iter()
                .zip(fan.rays())
                .map(|(c, r)| c * BigRational::from_integer(r[i].clone()))
                .sum::<BigRational>()
                .is_zero()
        })
    }

    pub fn proportional_to(&self, other: &CurveClass) -> bool {
        same_direction(&self.coefficients, &other.coefficients)
    }

    /// The class as a primitive integer vector.
    pub fn primitive(&self) -> Vec<BigInt> {
        let lcm = self
            .coefficients
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coefficients
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }
}

pub fn curve_class(fan: &Fan, wall: &Wall) -> Result<CurveClass> {
    let relation = wall_relation(fan, wall)?;
    Ok(class_from_relation(fan, &relation))
}

fn class_from_relation(fan: &Fan, relation: &WallRelation) -> CurveClass {
    let mut coefficients = vec![BigRational::zero(); fan.rays().len()];
    for (&i, c) in &relation.coefficients {
        coefficients[i] = BigRational::from_integer(c.clone());
    }
    let smooth = relation.wall.adjacent.iter().all(|&c| {
        let gens: Vec<LatticeVector> = fan
            .generators(&fan.max_cones()[c])
            .into_iter()
            .cloned()
            .collect();
        multiplicity(&gens).is_ok_and(|m| m.is_one())
    });
    CurveClass {
        coefficients,
        normalization: if smooth {
            Normalization::Intersection
        } else {
            Normalization::PrimitiveRelation
        },
    }
}

/// A contracted invariant curve `V(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedCurve {
    pub wall: Wall,
    pub relation: WallRelation,
    pub class: CurveClass,
}

/// Classes of all contracted walls; their nonnegative span is `NE(X/Y)`.
pub fn relative_mori_cone(m: &FanMorphism) -> Result<Vec<ContractedCurve>> {
    let fan = m.source();
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    contracted_walls(m)?
        .into_iter()
        .map(|wall| {
            let relation = wall_relation(fan, &wall)?;
            let class = class_from_relation(fan, &relation);
            Ok(ContractedCurve {
                wall,
                relation,
                class,
            })
        })
        .collect()
}

pub fn relative_picard_number(m: &FanMorphism) -> Result<usize> {
    let curves = relative_mori_cone(m)?;
    Ok(picard_rank(&curves))
}

fn picard_rank(curves: &[ContractedCurve]) -> usize {
    let rows: Vec<Vec<BigRational>> = curves.iter().map(|c| c.class.coefficients.clone()).collect();
    rational_rank(&rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalRay {
    /// Class of the first supporting wall.
    pub class: CurveClass,
    pub walls: Vec<Wall>,
}

/// A contracted class that is not extremal, with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonExtremalClass {
    pub class: CurveClass,
    pub walls: Vec<Wall>,
    /// Nonnegative coefficients, one per extremal ray, reproducing `class`.
    pub witness: Vec<BigRational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtremalRays {
    pub rays: Vec<ExtremalRay>,
    pub rejected: Vec<NonExtremalClass>,
}

impl ExtremalRays {
    /// Recomputes `Σ witness_i · ray_i` for every rejected class and compares.
    pub fn witnesses_hold(&self) -> bool {
        self.rejected.iter().all(|r| {
            if r.witness.len() != self.rays.len() || r.witness.iter().any(Signed::is_negative) {
                return false;
            }
            let len = r.class.coefficients.len();
            let combo: Vec<BigRational> = (0..len)
                .map(|x| {
                    self.rays
                        .iter()
                        .zip(&r.witness)
                        .map(|(ray, w)| w * &ray.class.coefficients[x])
                        .sum()
                })
                .collect();
            combo == r.class.coefficients
        })
    }
}

/// Deduplicates proportional classes and keeps those not in the cone of the others.
///
/// Ray order follows the canonical order of their first supporting wall.
pub fn extremal_rays(curves: &[ContractedCurve]) -> Result<ExtremalRays> {
    let mut groups: Vec<(CurveClass, Vec<Wall>)> = Vec::new();
    for c in curves {
        match groups.iter_mut().find(|(cls, _)| cls.proportional_to(&c.class)) {
            Some((_, walls)) => walls.push(c.wall.clone()),
            None => groups.push((c.class.clone(), vec![c.wall.clone()])),
        }
    }
    for (i, (a, _)) in groups.iter().enumerate() {
        let neg: Vec<BigRational> = a.coefficients.iter().map(|x| -x).collect();
        if groups[i + 1..].iter().any(|(b, _)| same_direction(&neg, &b.coefficients)) {
            return Err(Error::MoriConeNotPointed);
        }
    }
    let classes: Vec<Vec<BigRational>> = groups.iter().map(|(c, _)| c.coefficients.clone()).collect();
    let extremal: Vec<bool> = (0..groups.len())
        .map(|i| {
            let others: Vec<Vec<BigRational>> = classes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.clone())
                .collect();
            others.is_empty() || lp::conic_combination(&others, &classes[i]).is_none()
        })
        .collect();
    let mut out = ExtremalRays::default();
    let rays: Vec<Vec<BigRational>> = classes
        .iter()
        .zip(&extremal)
        .filter(|(_, &e)| e)
        .map(|(c, _)| c.clone())
        .collect();
    for ((class, walls), is_extremal) in groups.into_iter().zip(extremal) {
        if is_extremal {
            out.rays.push(ExtremalRay { class, walls });
        } else {
            let witness = lp::conic_combination(&rays, &class.coefficients)
                .ok_or(Error::MoriConeNotPointed)?;
            out.rejected.push(NonExtremalClass {
                class,
                walls,
                witness,
            });
        }
    }
    Ok(out)
}

/// Weights of a weighted projective space, if the fan is one.
pub fn recognize_wps(fan: &Fan) -> Option<Vec<BigInt>> {
    let n = fan.rank();
    if fan.rays().len() != n + 1 || !fan.is_simplicial() || !is_complete(fan) {
        return None;
    }
    let cols: Vec<&LatticeVector> = fan.rays().iter().collect();
    let m = IntMatrix::from_columns(&cols, n).ok()?;
    let d = smith_normal_form(&m);
    if d.rank() != n || !d.nonzero_invariants().iter().all(One::is_one) {
        return None;
    }
    let kernel = integer_kernel(&m);
    let mut w = kernel.first()?.clone();
    if w[0].is_negative() {
        w = w.scale(&BigInt::from(-1));
    }
    if w.iter().all(Signed::is_positive) {
        Some(w.into_entries())
    } else {
        None
    }
}

/// Everything the contraction and positivity layers need about `NE(X/Y)`.
#[derive(Clone, Debug)]
pub struct MoriAnalysis<'a> {
    pub morphism: &'a FanMorphism,
    pub curves: Vec<ContractedCurve>,
    pub extremal: ExtremalRays,
    /// One per extremal ray, same order.
    pub relations: Vec<ExtremalPrimitiveRelation>,
}

impl<'a> MoriAnalysis<'a> {
    pub fn new(morphism: &'a FanMorphism) -> Result<Self> {
        let curves = relative_mori_cone(morphism)?;
        let extremal = extremal_rays(&curves)?;
        let relations = extremal
            .rays
            .iter()
            .map(|r| extremal_primitive_relation(morphism, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(MoriAnalysis {
            morphism,
            curves,
            extremal,
            relations,
        })
    }

    pub fn fan(&self) -> &'a Fan {
        self.morphism.source()
    }

    pub fn picard_number(&self) -> usize {
        picard_rank(&self.curves)
    }

    pub fn ray(&self, index: usize) -> Result<(&ExtremalRay, &ExtremalPrimitiveRelation)> {
        let count = self.extremal.rays.len();
        match (self.extremal.rays.get(index), self.relations.get(index)) {
            (Some(r), Some(e)) => Ok((r, e)),
            _ => Err(Error::ExtremalRayOutOfRange { index, count }),
        }
    }
}

/// Is `cone` one of the walls listed?
pub fn wall_with_face<'w>(walls: &'w [Wall], face: &Cone) -> Option<&'w Wall> {
    walls.iter().find(|w| &w.face == face)
}
