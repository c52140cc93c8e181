//! Fans, cones and the combinatorial predicates on them.
//!
//! A [`Fan`] stores its primitive ray generators and its maximal cones as
//! sorted ray-index sets. Faces are derived, never stored. Simplicial
//! maximal cones live in `max_cones`; non-simplicial ones (which only arise
//! as targets of birational contractions, or as given target fans) live in
//! `general_cones`.

mod morphism;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

pub use morphism::{check_morphism, contracted_walls, properness, FanMorphism, MorphismReport, Properness};

use crate::lattice::{integer_rank, multiplicity, primitive_part, LatticeVector};
use crate::lp;
use crate::{Error, Result};

/// A cone of a fan, as a strictly increasing list of ray indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn zero() -> Self {
        Cone(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn is_subset(&self, other: &Cone) -> bool {
        self.0.iter().all(|r| other.contains(*r))
    }

    pub fn union(&self, other: &Cone) -> Cone {
        Cone::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|r| other.contains(*r)).collect())
    }

    pub fn minus(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|r| !other.contains(*r)).collect())
    }

    pub fn without(&self, ray: usize) -> Cone {
        Cone(self.0.iter().copied().filter(|&r| r != ray).collect())
    }

    pub fn with(&self, ray: usize) -> Cone {
        let mut v = self.0.clone();
        v.push(ray);
        Cone::new(v)
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl From<&[usize]> for Cone {
    fn from(rays: &[usize]) -> Self {
        Cone::new(rays.to_vec())
    }
}

/// A polyhedral cone given by generators that need not be independent.
///
/// Construction normalizes generators to primitive vectors and drops every
/// generator that is a nonnegative combination of the others.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneralCone {
    generators: Vec<LatticeVector>,
}

impl GeneralCone {
    pub fn new(generators: Vec<LatticeVector>) -> Result<Self> {
        let n = generators.first().map_or(0, |g| g.len());
        let mut gens: Vec<LatticeVector> = Vec::with_capacity(generators.len());
        for g in &generators {
            let p = primitive_part(g)?;
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        let refs: Vec<&LatticeVector> = gens.iter().collect();
        if !gens.is_empty() && !lp::strongly_convex(n, &refs) {
            return Err(Error::NotStronglyConvex);
        }
        let keep = irredundant(&refs);
        Ok(GeneralCone {
            generators: keep.into_iter().map(|i| gens[i].clone()).collect(),
        })
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        let refs: Vec<&LatticeVector> = self.generators.iter().collect();
        integer_rank(&refs)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        let refs: Vec<&LatticeVector> = self.generators.iter().collect();
        lp::in_cone(&refs, v)
    }
}

impl fmt::Debug for GeneralCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.generators.iter()).finish()
    }
}

/// Indices of the generators that are not nonnegative combinations of the others.
fn irredundant(gens: &[&LatticeVector]) -> Vec<usize> {
    let mut keep: Vec<usize> = (0..gens.len()).collect();
    let mut i = 0;
    while i < keep.len() {
        let others: Vec<&LatticeVector> = keep
            .iter()
            .filter(|&&j| j != keep[i])
            .map(|&j| gens[j])
            .collect();
        if !others.is_empty() && lp::in_cone(&others, gens[keep[i]]) {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    keep
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    general_cones: Vec<Cone>,
}

impl Fan {
    /// Builds a fan from simplicial maximal cones. No validation is done here;
    /// see [`validate_fan`].
    pub fn new(rank: usize, rays: Vec<LatticeVector>, max_cones: Vec<Cone>) -> Self {
        Fan {
            rank,
            rays,
            max_cones,
            general_cones: Vec::new(),
        }
    }

    pub fn with_general_cones(
        rank: usize,
        rays: Vec<LatticeVector>,
        max_cones: Vec<Cone>,
        general_cones: Vec<Cone>,
    ) -> Self {
        Fan {
            rank,
            rays,
            max_cones,
            general_cones,
        }
    }

    pub fn from_i64(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Self {
        Fan::new(
            rank,
            rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            cones.iter().map(|c| Cone::from(*c)).collect(),
        )
    }

    /// The fan of a point: rank 0 with the zero cone.
    pub fn point() -> Self {
        Fan::new(0, Vec::new(), vec![Cone::zero()])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn general_cones(&self) -> &[Cone] {
        &self.general_cones
    }

    /// All maximal cones, simplicial ones first.
    pub fn cones(&self) -> impl Iterator<Item = &Cone> {
        self.max_cones.iter().chain(self.general_cones.iter())
    }

    pub fn cone_count(&self) -> usize {
        self.max_cones.len() + self.general_cones.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.general_cones.is_empty()
    }

    pub fn generators(&self, cone: &Cone) -> Vec<&LatticeVector> {
        cone.rays().iter().map(|&i| &self.rays[i]).collect()
    }

    /// Whether `rays` spans a cone of this (simplicial) fan.
    pub fn is_face(&self, rays: &Cone) -> bool {
        self.max_cones.iter().any(|c| rays.is_subset(c))
    }

    /// Sorts and deduplicates the cone lists.
    pub fn canonicalize(&mut self) {
        self.max_cones.sort();
        self.max_cones.dedup();
        self.general_cones.sort();
        self.general_cones.dedup();
    }

    pub fn canonical(&self) -> Fan {
        let mut f = self.clone();
        f.canonicalize();
        f
    }

    /// Drops rays not used by any cone, keeping the order of the rest.
    /// Returns the map from old to new indices.
    pub fn prune_rays(&mut self) -> Vec<Option<usize>> {
        let used: BTreeSet<usize> = self.cones().flat_map(|c| c.rays().iter().copied()).collect();
        let mut map = vec![None; self.rays.len()];
        let mut rays = Vec::with_capacity(used.len());
        for (i, r) in self.rays.iter().enumerate() {
            if used.contains(&i) {
                map[i] = Some(rays.len());
                rays.push(r.clone());
            }
        }
        let remap = |c: &Cone| Cone::new(c.rays().iter().map(|&i| map[i].unwrap()).collect());
        self.max_cones = self.max_cones.iter().map(remap).collect();
        self.general_cones = self.general_cones.iter().map(remap).collect();
        self.rays = rays;
        self.canonicalize();
        map
    }

    /// Tests the generators of `rays` for independence.
    pub fn spans_simplicial(&self, rays: &Cone) -> bool {
        integer_rank(&self.generators(rays)) == rays.len()
    }

    /// Drops generators of `rays` that are nonnegative combinations of the others.
    pub fn irredundant(&self, rays: &Cone) -> Cone {
        let gens = self.generators(rays);
        Cone::new(irredundant(&gens).into_iter().map(|i| rays.rays()[i]).collect())
    }

    /// All cones of a simplicial fan containing `base`, including `base` itself when it is a face.
    pub fn faces_containing(&self, base: &Cone) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        for c in &self.max_cones {
            if !base.is_subset(c) {
                continue;
            }
            let rest = c.minus(base);
            for mask in 0u64..(1u64 << rest.len()) {
                let extra: Vec<usize> = rest
                    .rays()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &r)| r)
                    .collect();
                out.insert(base.union(&Cone::new(extra)));
            }
        }
        out
    }

    /// True if every maximal cone is simplicial and spans the ambient space.
    pub fn is_pure(&self) -> bool {
        self.is_simplicial() && self.max_cones.iter().all(|c| c.len() == self.rank)
    }
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("rank", &self.rank)
            .field("rays", &self.rays)
            .field("max_cones", &self.max_cones)
            .field("general_cones", &self.general_cones)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongRayLength { ray: usize, len: usize },
    ZeroRay(usize),
    NonPrimitiveRay(usize),
    ProportionalRays(usize, usize),
    RayIndexOutOfRange { cone: usize, index: usize },
    EmptyGeneralCone(usize),
    NotSimplicial(usize),
    NotStronglyConvex(usize),
    RedundantGenerator { cone: usize, ray: usize },
    NonMaximalCone { cone: usize, inside: usize },
    UnusedRay(usize),
    BadIntersection(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongRayLength { ray, len } => {
                write!(f, "ray {ray} has {len} entries, not the lattice rank")
            }
            Violation::ZeroRay(r) => write!(f, "ray {r} is zero"),
            Violation::NonPrimitiveRay(r) => write!(f, "ray {r} is not primitive"),
            Violation::ProportionalRays(a, b) => write!(f, "proportional rays {a} and {b}"),
            Violation::RayIndexOutOfRange { cone, index } => {
                write!(f, "cone {cone} refers to missing ray {index}")
            }
            Violation::EmptyGeneralCone(c) => write!(f, "general cone {c} has no generators"),
            Violation::NotSimplicial(c) => write!(f, "cone {c} is not simplicial"),
            Violation::NotStronglyConvex(c) => write!(f, "cone {c} is not strongly convex"),
            Violation::RedundantGenerator { cone, ray } => {
                write!(f, "ray {ray} is a redundant generator of cone {cone}")
            }
            Violation::NonMaximalCone { cone, inside } => {
                write!(f, "cone {cone} is contained in cone {inside}")
            }
            Violation::UnusedRay(r) => write!(f, "ray {r} is not used by any cone"),
            Violation::BadIntersection(a, b) => {
                write!(f, "cones {a} and {b} do not meet in a common face")
            }
        }
    }
}

/// Outcome of a validation pass; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks rays, per-cone conditions and pairwise face intersection.
///
/// Cones are numbered as in [`Fan::cones`]: simplicial cones first.
pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut violations = Vec::new();
    let n = fan.rank;
    let mut rays_ok = true;
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != n {
            violations.push(Violation::WrongRayLength { ray: i, len: r.len() });
            rays_ok = false;
        } else if r.is_zero() {
            violations.push(Violation::ZeroRay(i));
            rays_ok = false;
        } else if !r.is_primitive() {
            violations.push(Violation::NonPrimitiveRay(i));
        }
    }
    if rays_ok {
        for i in 0..fan.rays.len() {
            for j in i + 1..fan.rays.len() {
                if fan.rays[i].same_ray(&fan.rays[j]) {
                    violations.push(Violation::ProportionalRays(i, j));
                }
            }
        }
    }

    let cones: Vec<&Cone> = fan.cones().collect();
    let simplicial_count = fan.max_cones.len();
    let mut cone_ok = vec![rays_ok; cones.len()];
    for (ci, c) in cones.iter().enumerate() {
        if let Some(&bad) = c.rays().iter().find(|&&r| r >= fan.rays.len()) {
            violations.push(Violation::RayIndexOutOfRange { cone: ci, index: bad });
            cone_ok[ci] = false;
            continue;
        }
        if !cone_ok[ci] {
            continue;
        }
        let gens = fan.generators(c);
        if ci < simplicial_count {
            if integer_rank(&gens) != c.len() {
                violations.push(Violation::NotSimplicial(ci));
                cone_ok[ci] = false;
            }
        } else if c.is_empty() {
            violations.push(Violation::EmptyGeneralCone(ci));
            cone_ok[ci] = false;
        } else if !lp::strongly_convex(n, &gens) {
            violations.push(Violation::NotStronglyConvex(ci));
            cone_ok[ci] = false;
        } else {
            let keep = irredundant(&gens);
            for (k, &r) in c.rays().iter().enumerate() {
                if !keep.contains(&k) {
                    violations.push(Violation::RedundantGenerator { cone: ci, ray: r });
                    cone_ok[ci] = false;
                }
            }
        }
    }

    let used: BTreeSet<usize> = cones.iter().flat_map(|c| c.rays().iter().copied()).collect();
    for i in 0..fan.rays.len() {
        if !used.contains(&i) {
            violations.push(Violation::UnusedRay(i));
        }
    }

    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            if !(cone_ok[i] && cone_ok[j]) {
                continue;
            }
            let (a, b) = (cones[i], cones[j]);
            if a.is_subset(b) {
                violations.push(Violation::NonMaximalCone { cone: i, inside: j });
            } else if b.is_subset(a) {
                violations.push(Violation::NonMaximalCone { cone: j, inside: i });
            }
            let common = a.intersection(b);
            let separated = lp::separated(
                n,
                &fan.generators(&common),
                &fan.generators(&a.minus(&common)),
                &fan.generators(&b.minus(&common)),
            );
            if !separated {
                violations.push(Violation::BadIntersection(i, j));
            }
        }
    }
    ValidationReport { violations }
}

/// An `(n-1)`-dimensional cone together with the maximal cones having it as a facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub face: Cone,
    /// Indices into [`Fan::max_cones`].
    pub adjacent: Vec<usize>,
}

impl Wall {
    pub fn is_interior(&self) -> bool {
        self.adjacent.len() == 2
    }

    /// For each adjacent cone, its unique ray not on the wall.
    pub fn off_wall(&self, fan: &Fan) -> Vec<usize> {
        self.adjacent
            .iter()
            .map(|&c| {
                fan.max_cones[c]
                    .minus(&self.face)
                    .rays()
                    .first()
                    .copied()
                    .expect("facet of a simplicial cone")
            })
            .collect()
    }
}

pub fn enumerate_walls(fan: &Fan) -> Result<Vec<Wall>> {
    if !fan.is_pure() {
        return Err(Error::NotPure);
    }
    if fan.rank == 0 {
        return Ok(Vec::new());
    }
    let mut map: BTreeMap<Cone, Vec<usize>> = BTreeMap::new();
    for (ci, c) in fan.max_cones.iter().enumerate() {
        for &r in c.rays() {
            map.entry(c.without(r)).or_default().push(ci);
        }
    }
    Ok(map
        .into_iter()
        .map(|(face, adjacent)| Wall { face, adjacent })
        .collect())
}

/// Support is all of `R^n`: nonempty, pure, no boundary walls, connected.
pub fn is_complete(fan: &Fan) -> bool {
    if fan.max_cones.is_empty() || !fan.is_pure() {
        return false;
    }
    let Ok(walls) = enumerate_walls(fan) else {
        return false;
    };
    if walls.iter().any(|w| !w.is_interior()) {
        return false;
    }
    let k = fan.max_cones.len();
    let mut adj = vec![Vec::new(); k];
    for w in &walls {
        adj[w.adjacent[0]].push(w.adjacent[1]);
        adj[w.adjacent[1]].push(w.adjacent[0]);
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for &d in &adj[c] {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn is_smooth(fan: &Fan) -> bool {
    fan.is_simplicial()
        && fan.max_cones.iter().all(|c| {
            let gens: Vec<LatticeVector> = fan.generators(c).into_iter().cloned().collect();
            multiplicity(&gens).is_ok_and(|m| m.is_one())
        })
}

/// Minimal subsets of rays that do not span a cone, by increasing size.
pub fn primitive_collections(fan: &Fan) -> Vec<Cone> {
    let mut out = Vec::new();
    let rays = fan.rays.len();
    // unused rays are non-faces of size one
    let mut faces: BTreeSet<Cone> = BTreeSet::new();
    for r in 0..rays {
        let single = Cone::new(vec![r]);
        if fan.is_face(&single) {
            faces.insert(single);
        } else {
            out.push(single);
        }
    }
    let mut size = 1;
    while !faces.is_empty() {
        let mut next = BTreeSet::new();
        for f in &faces {
            let top = *f.rays().last().expect("nonempty face");
            for r in top + 1..rays {
                let cand = f.with(r);
                let all_sub_faces = cand
                    .rays()
                    .iter()
                    .all(|&x| faces.contains(&cand.without(x)));
                if !all_sub_faces {
                    continue;
                }
                if fan.is_face(&cand) {
                    next.insert(cand);
                } else {
                    out.push(cand);
                }
            }
        }
        faces = next;
        size += 1;
        debug_assert!(size <= rays + 1);
    }
    out
}

/// Star subdivision of a simplicial fan at the sum of the generators of `cone`.
pub fn star_subdivide(fan: &Fan, cone: &Cone) -> Result<Fan> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if cone.len() < 2 || !fan.is_face(cone) {
        return Err(Error::InvalidFan(format!("{cone} is not a cone of dimension >= 2")));
    }
    let sum = cone
        .rays()
        .iter()
        .fold(LatticeVector::zero(fan.rank), |acc, &r| acc.add(&fan.rays[r]));
    let new_ray = primitive_part(&sum)?;
    let idx = fan.rays.len();
    let mut rays = fan.rays.clone();
    rays.push(new_ray);
    let mut cones = Vec::new();
    for c in &fan.max_cones {
        if cone.is_subset(c) {
            for &r in cone.rays() {
                cones.push(c.without(r).with(idx));
            }
        } else {
            cones.push(c.clone());
        }
    }
    let mut out = Fan::new(fan.rank, rays, cones);
    out.canonicalize();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_validate() {
        for (name, fan) in fixtures::all_fans() {
            let report = validate_fan(&fan);
            assert!(report.is_valid(), "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn reordered_cones_are_valid() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[0, 2], &[1, 2]]);
        assert!(validate_fan(&fan).is_valid());
        assert_eq!(fan.canonical(), fixtures::p2().canonical());
    }

    #[test]
    fn proportional_rays_rejected() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[2, 0]], &[&[0], &[1]]);
        let report = validate_fan(&fan);
        assert!(report.violations.contains(&Violation::ProportionalRays(0, 1)));
        assert!(report
            .violations
            .iter()
            .any(|v| v.to_string() == "proportional rays 0 and 1"));
        // opposite rays are fine
        let fan = fixtures::p1();
        assert!(validate_fan(&fan).is_valid());
    }

    #[test]
    fn overlapping_cones_rejected() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1], &[0, 2]]);
        let report = validate_fan(&fan);
        assert!(report.violations.contains(&Violation::BadIntersection(0, 1)));
    }

    #[test]
    fn bad_cones_rejected() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]);
        assert!(validate_fan(&fan)
            .violations
            .contains(&Violation::NotSimplicial(0)));
        let fan = Fan::with_general_cones(
            2,
            vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[0, 1]), LatticeVector::from_i64(&[1, 1])],
            vec![],
            vec![Cone::new(vec![0, 1, 2])],
        );
        assert!(validate_fan(&fan)
            .violations
            .contains(&Violation::RedundantGenerator { cone: 0, ray: 2 }));
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[0, 3]], &[&[0, 5]]);
        let report = validate_fan(&fan);
        assert!(report.violations.contains(&Violation::NonPrimitiveRay(2)));
        assert!(report
            .violations
            .contains(&Violation::RayIndexOutOfRange { cone: 0, index: 5 }));
    }

    #[test]
    fn walls_of_p2() {
        let walls = enumerate_walls(&fixtures::p2()).unwrap();
        assert_eq!(walls.len(), 3);
        assert!(walls.iter().all(Wall::is_interior));
        let faces: Vec<&Cone> = walls.iter().map(|w| &w.face).collect();
        assert_eq!(faces, vec![&Cone::new(vec![0]), &Cone::new(vec![1]), &Cone::new(vec![2])]);
    }

    #[test]
    fn walls_of_blowup_of_plane() {
        let walls = enumerate_walls(&fixtures::blowup_a2()).unwrap();
        assert_eq!(walls.len(), 3);
        let interior: Vec<&Cone> = walls.iter().filter(|w| w.is_interior()).map(|w| &w.face).collect();
        assert_eq!(interior, vec![&Cone::new(vec![2])]);
        let single = enumerate_walls(&fixtures::a2()).unwrap();
        assert_eq!(single.len(), 2);
        assert!(single.iter().all(|w| !w.is_interior()));
    }

    #[test]
    fn walls_need_pure_fans() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0], &[1]]);
        let err = enumerate_walls(&fan).unwrap_err();
        assert_eq!(err.to_string(), "walls require pure full-dimensional fan");
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&fixtures::p2()));
        assert!(is_complete(&fixtures::f1()));
        assert!(is_complete(&fixtures::point()));
        assert!(!is_complete(&fixtures::blowup_a2()));
        assert!(!is_complete(&Fan::new(1, vec![], vec![])));
    }

    #[test]
    fn smoothness() {
        assert!(is_smooth(&fixtures::p2()));
        assert!(is_smooth(&fixtures::f1()));
        assert!(!is_smooth(&fixtures::p121()));
        assert!(is_smooth(&fixtures::weighted_flip_source()));
        let plus = Fan::from_i64(
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 1, -1]],
            &[&[2, 3, 0], &[2, 3, 1]],
        );
        assert!(!is_smooth(&plus));
    }

    #[test]
    fn primitive_collections_of_fixtures() {
        assert_eq!(primitive_collections(&fixtures::p2()), vec![Cone::new(vec![0, 1, 2])]);
        assert_eq!(
            primitive_collections(&fixtures::f1()),
            vec![Cone::new(vec![0, 1]), Cone::new(vec![2, 3])]
        );
        assert!(primitive_collections(&fixtures::a2()).is_empty());
    }

    #[test]
    fn primitive_collection_definition_holds() {
        for (name, fan) in fixtures::all_fans() {
            if !fan.is_simplicial() {
                continue;
            }
            for p in primitive_collections(&fan) {
                assert!(!fan.is_face(&p), "{name}: {p} spans a cone");
                for &r in p.rays() {
                    assert!(fan.is_face(&p.without(r)), "{name}: {p} not minimal");
                }
            }
        }
    }

    #[test]
    fn star_subdivision_of_plane_is_blowup() {
        let blown = star_subdivide(&fixtures::a2(), &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(blown, fixtures::blowup_a2().canonical());
        let f1 = star_subdivide(&fixtures::p2(), &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(f1, fixtures::f1().canonical());
        assert!(validate_fan(&f1).is_valid());
    }

    #[test]
    fn general_cone_drops_redundant_generators() {
        let g = GeneralCone::new(vec![
            LatticeVector::from_i64(&[1, 1]),
            LatticeVector::from_i64(&[1, 0]),
            LatticeVector::from_i64(&[0, 2]),
        ])
        .unwrap();
        assert_eq!(
            g.generators(),
            &[LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[0, 1])]
        );
        assert!(g.is_simplicial());
        assert!(matches!(
            GeneralCone::new(vec![LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[-1])]),
            Err(Error::NotStronglyConvex)
        ));
    }
}
