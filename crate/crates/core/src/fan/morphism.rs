use std::collections::BTreeMap;

use super::{enumerate_walls, is_complete, Cone, Fan, Wall};
use crate::lattice::{integer_rank, IntMatrix, LatticeVector};
use crate::lp;
use crate::{Error, Result};

/// A toric morphism `X_source -> X_target` given by its lattice map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanMorphism {
    matrix: IntMatrix,
    source: Fan,
    target: Fan,
}

impl FanMorphism {
    pub fn new(matrix: IntMatrix, source: Fan, target: Fan) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "lattice map is {}x{} but fans have ranks {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(FanMorphism {
            matrix,
            source,
            target,
        })
    }

    pub fn identity(fan: Fan) -> Self {
        let n = fan.rank();
        FanMorphism {
            matrix: IntMatrix::identity(n),
            source: fan.clone(),
            target: fan,
        }
    }

    /// The structure morphism to a point.
    pub fn to_point(fan: Fan) -> Self {
        let n = fan.rank();
        FanMorphism {
            matrix: IntMatrix::zeros(0, n),
            source: fan,
            target: Fan::point(),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    pub fn with_source(&self, source: Fan) -> Result<Self> {
        FanMorphism::new(self.matrix.clone(), source, self.target.clone())
    }

    fn image(&self, v: &LatticeVector) -> LatticeVector {
        self.matrix.apply(v).expect("shape checked at construction")
    }

    /// Some target cone containing the image of the given source rays.
    fn containing_target_cone(&self, rays: &Cone) -> Option<&Cone> {
        let images: Vec<LatticeVector> = rays
            .rays()
            .iter()
            .map(|&r| self.image(self.source.ray(r)))
            .collect();
        self.target.cones().find(|t| {
            let gens = self.target.generators(t);
            images.iter().all(|v| v.is_zero() || lp::in_cone(&gens, v))
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismReport {
    /// Source cones (numbered as in [`Fan::cones`]) whose image lies in no target cone.
    pub offenders: Vec<usize>,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.offenders.is_empty()
    }
}

pub fn check_morphism(m: &FanMorphism) -> MorphismReport {
    let offenders = m
        .source
        .cones()
        .enumerate()
        .filter(|(_, c)| m.containing_target_cone(c).is_none())
        .map(|(i, _)| i)
        .collect();
    MorphismReport { offenders }
}

/// Interior walls `w` whose curve `V(w)` is mapped to a point.
///
/// With `σ'` the smallest target cone meeting the image of the relative
/// interior of `w`, the curve is contracted exactly when the image of the
/// whole lattice map lies in the span of `σ'`. For surjective lattice maps
/// this is the condition `dim σ' = rank N_Y`.
pub fn contracted_walls(m: &FanMorphism) -> Result<Vec<Wall>> {
    let walls = enumerate_walls(&m.source)?;
    let columns: Vec<LatticeVector> = (0..m.matrix.cols()).map(|j| m.matrix.column(j)).collect();
    let mut out = Vec::new();
    for w in walls.into_iter().filter(Wall::is_interior) {
        let target_cone = m.containing_target_cone(&w.face).ok_or_else(|| {
            Error::MorphismIncompatible(format!("image of wall {} lies in no target cone", w.face))
        })?;
        let point = w
            .face
            .rays()
            .iter()
            .fold(LatticeVector::zero(m.target.rank()), |acc, &r| {
                acc.add(&m.image(m.source.ray(r)))
            });
        let gens = m.target.generators(target_cone);
        let face: Vec<&LatticeVector> = if point.is_zero() {
            Vec::new()
        } else {
            lp::minimal_face(&gens, &point).into_iter().map(|i| gens[i]).collect()
        };
        let face_rank = integer_rank(&face);
        let mut with_image = face.clone();
        with_image.extend(columns.iter());
        if integer_rank(&with_image) == face_rank {
            out.push(w);
        }
    }
    Ok(out)
}

/// What could be decided about properness of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Properness {
    Verified(String),
    Refuted(String),
    Undecided(String),
}

/// Decides properness in two special cases: maps to a point, and
/// refinements over the identity lattice map.
pub fn properness(m: &FanMorphism) -> Properness {
    if m.target.rank() == 0 {
        return if is_complete(&m.source) {
            Properness::Verified("complete source over a point".into())
        } else {
            Properness::Refuted("a morphism to a point is proper only for a complete source".into())
        };
    }
    if m.matrix != IntMatrix::identity(m.source.rank()) || m.target.rank() != m.source.rank() {
        return Properness::Undecided("only maps to a point and identity refinements are checked".into());
    }
    if !check_morphism(m).is_valid() {
        return Properness::Refuted("some source cone lies in no target cone".into());
    }
    if !m.source.is_pure() {
        return Properness::Undecided("source fan is not pure".into());
    }
    let n = m.source.rank();
    for t in m.target.cones() {
        let tgens = m.target.generators(t);
        if integer_rank(&tgens) != n {
            return Properness::Undecided(format!("target cone {t} is not full-dimensional"));
        }
        let inside: Vec<usize> = m
            .source
            .max_cones()
            .iter()
            .enumerate()
            .filter(|(_, c)| m.source.generators(c).iter().all(|v| lp::in_cone(&tgens, v)))
            .map(|(i, _)| i)
            .collect();
        if inside.is_empty() {
            return Properness::Refuted(format!("target cone {t} is not covered"));
        }
        let mut facets: BTreeMap<Cone, usize> = BTreeMap::new();
        for &ci in &inside {
            let c = &m.source.max_cones()[ci];
            for &r in c.rays() {
                *facets.entry(c.without(r)).or_default() += 1;
            }
        }
        for (facet, count) in facets {
            if count == 1 && !lp::on_boundary(n, &tgens, &m.source.generators(&facet)) {
                return Properness::Refuted(format!(
                    "facet {facet} of the source leaves target cone {t} uncovered"
                ));
            }
        }
    }
    Properness::Verified("identity refinement with equal support".into())
}
