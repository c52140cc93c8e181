//! Contractions of extremal rays and flips, as fan surgeries.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::fan::{validate_fan, Cone, Fan, FanMorphism, GeneralCone};
use crate::lattice::{
    integer_rank, primitive_part, quotient_map, saturated_coordinates, IntMatrix, LatticeQuotient,
    LatticeVector,
};
use crate::mori::{recognize_wps, ExtremalPrimitiveRelation, MoriAnalysis};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContractionKind {
    Fano,
    Divisorial,
    Small,
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractionKind::Fano => "Fano",
            ContractionKind::Divisorial => "divisorial",
            ContractionKind::Small => "small",
        })
    }
}

pub fn classify(epr: &ExtremalPrimitiveRelation) -> ContractionKind {
    match epr.m() {
        0 => ContractionKind::Fano,
        1 => ContractionKind::Divisorial,
        _ => ContractionKind::Small,
    }
}

/// Sign of `Σ a_i − Σ b_j` for a small contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipType {
    Flip,
    Flop,
    AntiFlip,
}

impl FlipType {
    pub fn of(epr: &ExtremalPrimitiveRelation) -> Self {
        let d = epr.degree_difference();
        if d.is_positive() {
            FlipType::Flip
        } else if d.is_zero() {
            FlipType::Flop
        } else {
            FlipType::AntiFlip
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            FlipType::Flip => FlipType::AntiFlip,
            FlipType::Flop => FlipType::Flop,
            FlipType::AntiFlip => FlipType::Flip,
        }
    }
}

impl fmt::Display for FlipType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlipType::Flip => "flip",
            FlipType::Flop => "flop",
            FlipType::AntiFlip => "anti-flip",
        })
    }
}

/// Exceptional locus `A = V(w')` and its image `B = V(w̃)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceptional {
    pub locus: Cone,
    pub image: GeneralCone,
    pub codim: usize,
    pub dim_image: usize,
}

/// The general fiber of a Fano contraction, a complete toric variety of Picard number one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralFiber {
    pub weights: Vec<BigInt>,
    pub rank: usize,
    /// Images of `x_1, ..., x_l` in the fiber lattice.
    pub images: Vec<LatticeVector>,
    pub fan: Fan,
    /// Set when the fiber is the weighted projective space `P(a_1, ..., a_l)`.
    pub wps_weights: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionResult {
    pub kind: ContractionKind,
    pub target_fan: Fan,
    pub quotient: Option<LatticeQuotient>,
    pub exceptional: Option<Exceptional>,
    pub fiber: Option<GeneralFiber>,
    pub flip_fan: Option<Fan>,
    pub trichotomy: Option<FlipType>,
    /// The relation read back from the flipped side.
    pub reversed: Option<ExtremalPrimitiveRelation>,
}

impl ContractionResult {
    fn new(kind: ContractionKind, target_fan: Fan) -> Self {
        ContractionResult {
            kind,
            target_fan,
            quotient: None,
            exceptional: None,
            fiber: None,
            flip_fan: None,
            trichotomy: None,
            reversed: None,
        }
    }
}

/// Keeps the inclusion-maximal cones and sorts them into simplicial and general ones.
fn assemble(rank: usize, rays: Vec<LatticeVector>, cones: BTreeSet<Cone>) -> Fan {
    let maximal: Vec<Cone> = cones
        .iter()
        .filter(|c| !cones.iter().any(|d| d != *c && c.is_subset(d)))
        .cloned()
        .collect();
    let probe = Fan::new(rank, rays.clone(), Vec::new());
    let (simplicial, general): (Vec<Cone>, Vec<Cone>) =
        maximal.into_iter().partition(|c| probe.spans_simplicial(c));
    let mut fan = Fan::with_general_cones(rank, rays, simplicial, general);
    fan.prune_rays();
    fan
}

fn ensure_valid(fan: &Fan, err: fn(String) -> Error) -> Result<()> {
    let report = validate_fan(fan);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(err(v.to_string())),
    }
}

pub fn fano_contraction(m: &FanMorphism, epr: &ExtremalPrimitiveRelation) -> Result<ContractionResult> {
    if classify(epr) != ContractionKind::Fano {
        return Err(Error::NotFano);
    }
    let fan = m.source();
    let n = fan.rank();
    let xs: Vec<LatticeVector> = epr.xs.iter().map(|&x| fan.ray(x).clone()).collect();
    let q = quotient_map(&xs, n)?;

    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut image_of = Vec::with_capacity(fan.rays().len());
    for r in fan.rays() {
        let v = q.apply(r)?;
        if v.is_zero() {
            image_of.push(None);
            continue;
        }
        let p = primitive_part(&v)?;
        let idx = rays.iter().position(|s| s == &p).unwrap_or_else(|| {
            rays.push(p);
            rays.len() - 1
        });
        image_of.push(Some(idx));
    }
    let probe = Fan::new(q.rank, rays.clone(), Vec::new());
    let mut cones = BTreeSet::new();
    for c in fan.cones() {
        let img = Cone::new(c.rays().iter().filter_map(|&r| image_of[r]).collect());
        let gens: Vec<&LatticeVector> = probe.generators(&img);
        if !gens.is_empty() && !crate::lp::strongly_convex(q.rank, &gens) {
            return Err(Error::QuotientNotFan(format!("image of cone {c} is not strongly convex")));
        }
        cones.insert(probe.irredundant(&img));
    }
    let target = assemble(q.rank, rays, cones);
    ensure_valid(&target, Error::QuotientNotFan)?;

    let mut result = ContractionResult::new(ContractionKind::Fano, target);
    result.fiber = Some(general_fiber(fan, epr)?);
    result.quotient = Some(q);
    Ok(result)
}

/// The fiber lattice is the saturation of `span(x_1, ..., x_l)`; the fiber fan has
/// the images of the `x_i` as rays and the `σ_i` as maximal cones.
pub fn general_fiber(fan: &Fan, epr: &ExtremalPrimitiveRelation) -> Result<GeneralFiber> {
    let xs: Vec<LatticeVector> = epr.xs.iter().map(|&x| fan.ray(x).clone()).collect();
    let (basis, images) = saturated_coordinates(&xs, fan.rank())?;
    let rank = basis.len();
    let l = epr.l();
    if rank + 1 != l {
        return Err(Error::ExtremalStructure(format!(
            "fiber lattice has rank {rank}, expected {}",
            l - 1
        )));
    }
    let sum = images
        .iter()
        .zip(&epr.a)
        .fold(LatticeVector::zero(rank), |acc, (v, a)| acc.add(&v.scale(a)));
    if !sum.is_zero() {
        return Err(Error::ExtremalStructure("weights do not annihilate the fiber rays".into()));
    }
    let cones = (0..l).map(|i| Cone::new((0..l).filter(|&j| j != i).collect())).collect();
    let fiber_fan = Fan::new(rank, images.clone(), cones);
    let wps_weights = recognize_wps(&fiber_fan);
    Ok(GeneralFiber {
        weights: epr.a.clone(),
        rank,
        images,
        fan: fiber_fan,
        wps_weights,
    })
}

pub fn birational_contraction(
    m: &FanMorphism,
    epr: &ExtremalPrimitiveRelation,
) -> Result<ContractionResult> {
    let kind = classify(epr);
    if kind == ContractionKind::Fano {
        return Err(Error::NotBirational);
    }
    let fan = m.source();
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let n = fan.rank();
    let w_tilde = epr
        .w_tilde
        .clone()
        .ok_or_else(|| Error::ExtremalStructure("birational ray without w̃".into()))?;
    let spine = epr.w_prime.union(&epr.w_plus);
    let mut cones = BTreeSet::new();
    for c in fan.max_cones() {
        if epr.w_prime.is_subset(c) {
            let tau = c.minus(&spine);
            cones.insert(fan.irredundant(&spine.union(&tau)));
        } else {
            cones.insert(c.clone());
        }
    }
    let target = assemble(n, fan.rays().to_vec(), cones);
    ensure_valid(&target, Error::SurgeryFailed)?;

    let codim = integer_rank(&fan.generators(&epr.w_prime));
    let dim_image = n - w_tilde.dim();
    let (l, mm) = (epr.l(), epr.m());
    if codim != mm || dim_image + l + mm != n + 1 {
        return Err(Error::DimensionFormula(format!(
            "codim A = {codim}, dim B = {dim_image} with n = {n}, l = {l}, m = {mm}"
        )));
    }
    let mut result = ContractionResult::new(kind, target);
    result.exceptional = Some(Exceptional {
        locus: epr.w_prime.clone(),
        image: w_tilde,
        codim,
        dim_image,
    });
    Ok(result)
}

/// Replaces each `w̃ + τ` by the cones `w⁺ + cone(S) + τ`, `S ⊊ ys`.
fn flipped_fan(fan: &Fan, epr: &ExtremalPrimitiveRelation) -> Result<Fan> {
    let spine = epr.w_prime.union(&epr.w_plus);
    let mut cones = BTreeSet::new();
    for c in fan.max_cones() {
        if epr.w_prime.is_subset(c) {
            let tau = c.minus(&spine);
            for &y in &epr.ys {
                cones.insert(spine.without(y).union(&tau));
            }
        } else {
            cones.insert(c.clone());
        }
    }
    let mut plus = Fan::new(fan.rank(), fan.rays().to_vec(), Vec::new());
    let maximal: Vec<Cone> = cones
        .iter()
        .filter(|c| !cones.iter().any(|d| d != *c && c.is_subset(d)))
        .cloned()
        .collect();
    if let Some(bad) = maximal.iter().find(|c| !plus.spans_simplicial(c)) {
        return Err(Error::SurgeryFailed(format!("flipped cone {bad} is not simplicial")));
    }
    plus = Fan::new(fan.rank(), fan.rays().to_vec(), maximal);
    plus.canonicalize();
    ensure_valid(&plus, Error::SurgeryFailed)?;
    Ok(plus)
}

pub fn flip(m: &FanMorphism, epr: &ExtremalPrimitiveRelation) -> Result<ContractionResult> {
    if classify(epr) != ContractionKind::Small {
        return Err(Error::NotSmall);
    }
    let mut result = birational_contraction(m, epr)?;
    let plus = flipped_fan(m.source(), epr)?;

    let over_w = FanMorphism::new(
        IntMatrix::identity(plus.rank()),
        plus.clone(),
        result.target_fan.clone(),
    )?;
    let analysis = MoriAnalysis::new(&over_w)?;
    let [reversed] = analysis.relations.as_slice() else {
        return Err(Error::SurgeryFailed(format!(
            "flipped side has {} extremal rays over the contraction, expected 1",
            analysis.relations.len()
        )));
    };
    if (&reversed.xs, &reversed.a, &reversed.ys, &reversed.b) != (&epr.ys, &epr.b, &epr.xs, &epr.a) {
        return Err(Error::SurgeryFailed(format!(
            "flipped relation {reversed} is not the reverse of {epr}"
        )));
    }
    result.trichotomy = Some(FlipType::of(epr));
    result.reversed = Some(reversed.clone());
    result.flip_fan = Some(plus);
    Ok(result)
}

/// Dispatches on the contraction kind.
pub fn contract(m: &FanMorphism, epr: &ExtremalPrimitiveRelation) -> Result<ContractionResult> {
    match classify(epr) {
        ContractionKind::Fano => fano_contraction(m, epr),
        _ => birational_contraction(m, epr),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MmpOutcome {
    /// Fano contraction: `X → W` is a Mori fiber space.
    MoriFiberSpace(ContractionResult),
    /// Divisorial contraction or flip; the new morphism is `W → Y` or `X⁺ → Y`.
    Continue {
        result: ContractionResult,
        morphism: FanMorphism,
    },
    /// Small ray that is not `K`-negative.
    Halt(ContractionResult),
}

pub fn mmp_step(m: &FanMorphism, ray: usize) -> Result<MmpOutcome> {
    let analysis = MoriAnalysis::new(m)?;
    let (_, epr) = analysis.ray(ray)?;
    match classify(epr) {
        ContractionKind::Fano => Ok(MmpOutcome::MoriFiberSpace(fano_contraction(m, epr)?)),
        ContractionKind::Divisorial => {
            let result = birational_contraction(m, epr)?;
            let morphism = m.with_source(result.target_fan.clone())?;
            Ok(MmpOutcome::Continue { result, morphism })
        }
        ContractionKind::Small => {
            if !epr.degree_difference().is_positive() {
                let mut result = birational_contraction(m, epr)?;
                result.trichotomy = Some(FlipType::of(epr));
                return Ok(MmpOutcome::Halt(result));
            }
            let result = flip(m, epr)?;
            let plus = result.flip_fan.clone().expect("flip produced a fan");
            let morphism = m.with_source(plus)?;
            Ok(MmpOutcome::Continue { result, morphism })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn analysis(m: &FanMorphism) -> MoriAnalysis<'_> {
        MoriAnalysis::new(m).unwrap()
    }

    #[test]
    fn classification() {
        let m = fixtures::p1xp1_to_p1();
        assert_eq!(classify(&analysis(&m).relations[0]), ContractionKind::Fano);
        let m = fixtures::f1_to_point();
        assert_eq!(classify(&analysis(&m).relations[1]), ContractionKind::Divisorial);
        let m = fixtures::atiyah_flop();
        assert_eq!(classify(&analysis(&m).relations[0]), ContractionKind::Small);
    }

    #[test]
    fn fano_to_point() {
        let m = fixtures::p2_to_point();
        let r = fano_contraction(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.target_fan, Fan::point());
        let fiber = r.fiber.unwrap();
        assert_eq!(fiber.weights, big(&[1, 1, 1]));
        assert_eq!(fiber.wps_weights, Some(big(&[1, 1, 1])));
        assert_eq!(fiber.rank, 2);
    }

    #[test]
    fn fano_fibration() {
        let m = fixtures::p1xp1_to_p1();
        let r = fano_contraction(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.target_fan, fixtures::p1().canonical());
        assert_eq!(r.fiber.unwrap().wps_weights, Some(big(&[1, 1])));
        let m = fixtures::f1_to_point();
        let r = fano_contraction(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.target_fan, fixtures::p1().canonical());
        assert_eq!(r.quotient.unwrap().rank, 1);
    }

    #[test]
    fn fano_requires_m_zero() {
        let m = fixtures::f1_to_point();
        assert_eq!(
            fano_contraction(&m, &analysis(&m).relations[1]).unwrap_err(),
            Error::NotFano
        );
    }

    #[test]
    fn weighted_fiber() {
        let m = fixtures::p121_to_point();
        let r = fano_contraction(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.fiber.unwrap().wps_weights, Some(big(&[1, 2, 1])));
    }

    #[test]
    fn divisorial_f1_gives_p2() {
        let m = fixtures::f1_to_point();
        let r = birational_contraction(&m, &analysis(&m).relations[1]).unwrap();
        assert_eq!(r.kind, ContractionKind::Divisorial);
        assert_eq!(r.target_fan, fixtures::p2().canonical());
        let e = r.exceptional.unwrap();
        assert_eq!((e.codim, e.dim_image), (1, 0));
        assert_eq!(e.locus, Cone::new(vec![3]));
    }

    #[test]
    fn divisorial_blowup_gives_plane() {
        let m = fixtures::blowup_to_a2();
        let r = birational_contraction(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.target_fan, fixtures::a2().canonical());
    }

    #[test]
    fn small_contraction_of_flop() {
        let m = fixtures::atiyah_flop();
        let r = birational_contraction(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.target_fan, fixtures::atiyah_target().canonical());
        assert!(!r.target_fan.is_simplicial());
        let e = r.exceptional.unwrap();
        assert_eq!((e.codim, e.dim_image), (2, 0));
    }

    #[test]
    fn atiyah_flop_is_a_flop() {
        let m = fixtures::atiyah_flop();
        let r = flip(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.trichotomy, Some(FlipType::Flop));
        let plus = r.flip_fan.unwrap();
        assert_eq!(plus.max_cones(), &[Cone::new(vec![0, 2, 3]), Cone::new(vec![1, 2, 3])]);
        assert_eq!(plus.rays(), m.source().rays());
    }

    #[test]
    fn weighted_flip_is_anti_flip() {
        let m = fixtures::weighted_flip();
        let r = flip(&m, &analysis(&m).relations[0]).unwrap();
        assert_eq!(r.trichotomy, Some(FlipType::AntiFlip));
        let rev = r.reversed.unwrap();
        assert_eq!(rev.to_string(), "2*r0 + r1 = r2 + r3");
        assert_eq!(FlipType::of(&rev), FlipType::Flip);
    }

    #[test]
    fn flip_is_an_involution() {
        for m in [fixtures::atiyah_flop(), fixtures::weighted_flip()] {
            let r = flip(&m, &analysis(&m).relations[0]).unwrap();
            let back_morphism = FanMorphism::new(
                IntMatrix::identity(3),
                r.flip_fan.clone().unwrap(),
                r.target_fan.clone(),
            )
            .unwrap();
            let back = flip(&back_morphism, &analysis(&back_morphism).relations[0]).unwrap();
            assert_eq!(back.flip_fan.unwrap(), m.source().canonical());
            assert_eq!(back.trichotomy.unwrap(), r.trichotomy.unwrap().reversed());
        }
    }

    #[test]
    fn flip_rejects_divisorial_rays() {
        let m = fixtures::f1_to_point();
        assert_eq!(flip(&m, &analysis(&m).relations[1]).unwrap_err(), Error::NotSmall);
    }

    #[test]
    fn mmp_steps() {
        let m = fixtures::f1_to_point();
        match mmp_step(&m, 1).unwrap() {
            MmpOutcome::Continue { morphism, .. } => {
                assert_eq!(morphism.source(), &fixtures::p2().canonical());
                assert!(matches!(mmp_step(&morphism, 0).unwrap(), MmpOutcome::MoriFiberSpace(_)));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(mmp_step(&fixtures::p2_to_point(), 0).unwrap(), MmpOutcome::MoriFiberSpace(_)));
        match mmp_step(&fixtures::atiyah_flop(), 0).unwrap() {
            MmpOutcome::Halt(r) => assert_eq!(r.trichotomy, Some(FlipType::Flop)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            mmp_step(&fixtures::p2_to_point(), 1),
            Err(Error::ExtremalRayOutOfRange { index: 1, count: 1 })
        ));
    }

    #[test]
    fn anti_flip_side_flips_back() {
        // the flipped side of the weighted fixture is K-negative over W
        let m = fixtures::weighted_flip();
        let r = flip(&m, &analysis(&m).relations[0]).unwrap();
        let over = FanMorphism::new(IntMatrix::identity(3), r.flip_fan.unwrap(), r.target_fan).unwrap();
        match mmp_step(&over, 0).unwrap() {
            MmpOutcome::Continue { morphism, result } => {
                assert_eq!(result.trichotomy, Some(FlipType::Flip));
                assert_eq!(morphism.source(), &m.source().canonical());
            }
            other => panic!("{other:?}"),
        }
    }
}
