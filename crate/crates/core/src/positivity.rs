//! Torus-invariant divisors, Cartier data and relative positivity.
//!
//! Intersection numbers with contracted invariant curves decide relative
//! nefness and ampleness. Relative freeness of an integral Cartier divisor
//! is identified with relative nefness, as on any toric variety.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fan::{is_smooth, Cone, Fan, FanMorphism, Wall};
use crate::lattice::{solve_columns, Solve};
use crate::lp::{Program, Relation};
use crate::mori::{intersection_number, relative_mori_cone, MoriAnalysis};
use crate::{Error, Result};

/// `D = Σ d_v D_v`, one rational coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDivisor {
    coeffs: Vec<BigRational>,
}

impl TorusDivisor {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        TorusDivisor { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        TorusDivisor::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(rays: usize) -> Self {
        TorusDivisor::new(vec![BigRational::zero(); rays])
    }

    /// The prime divisor `D_v`.
    pub fn prime(rays: usize, v: usize) -> Self {
        let mut d = TorusDivisor::zero(rays);
        d.coeffs[v] = BigRational::one();
        d
    }

    /// `−K = Σ D_v`.
    pub fn anticanonical(rays: usize) -> Self {
        TorusDivisor::new(vec![BigRational::one(); rays])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coefficient(&self, v: usize) -> &BigRational {
        &self.coeffs[v]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn add(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigRational) -> TorusDivisor {
        TorusDivisor::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    /// `L(−D_v)`.
    pub fn twist(&self, v: usize) -> TorusDivisor {
        self.sub(&TorusDivisor::prime(self.len(), v))
    }

    fn check(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() != fan.rays().len() {
            return Err(Error::DivisorLength {
                expected: fan.rays().len(),
                found: self.coeffs.len(),
            });
        }
        Ok(())
    }
}

/// `m_σ ∈ M ⊗ Q` with `⟨m_σ, v⟩ = −d_v` for every `v ∈ G(σ)`, per maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    pub cones: Vec<(Cone, Vec<BigRational>)>,
}

impl CartierData {
    /// `D` is Cartier when every local datum is integral.
    pub fn is_cartier(&self) -> bool {
        self.cones
            .iter()
            .all(|(_, m)| m.iter().all(BigRational::is_integer))
    }

    pub fn get(&self, cone: &Cone) -> Option<&[BigRational]> {
        self.cones.iter().find(|(c, _)| c == cone).map(|(_, m)| m.as_slice())
    }
}

/// Solves `⟨m, v⟩ = −d_v` on a full-dimensional simplicial cone.
pub fn local_cartier(fan: &Fan, cone: &Cone, d: &TorusDivisor) -> Result<Vec<BigRational>> {
    d.check(fan)?;
    let n = fan.rank();
    if cone.len() != n {
        return Err(Error::NotFullDimensional);
    }
    let gens = fan.generators(cone);
    // unknown m; columns of the system indexed by the coordinates of m
    let cols: Vec<Vec<BigRational>> = (0..n)
        .map(|j| gens.iter().map(|g| BigRational::from_integer(g[j].clone())).collect())
        .collect();
    let rhs: Vec<BigRational> = cone.rays().iter().map(|&v| -d.coefficient(v).clone()).collect();
    match solve_columns(&cols, &rhs, n) {
        Solve::Unique(m) => Ok(m),
        _ => Err(Error::NotFullDimensional),
    }
}

pub fn cartier_data(fan: &Fan, d: &TorusDivisor) -> Result<CartierData> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let cones = fan
        .max_cones()
        .iter()
        .map(|c| Ok((c.clone(), local_cartier(fan, c, d)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CartierData { cones })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Positivity {
    Ample,
    NefNotAmple,
    NotNef,
}

impl Positivity {
    pub fn is_nef(self) -> bool {
        self != Positivity::NotNef
    }

    pub fn is_ample(self) -> bool {
        self == Positivity::Ample
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub verdict: Positivity,
    /// `D · V(w)` for every contracted wall.
    pub values: Vec<(Wall, BigRational)>,
    /// A wall with negative value (not nef) or zero value (nef, not ample).
    pub witness: Option<Wall>,
    /// Relative freeness; only decided for integral Cartier divisors.
    pub free: Option<bool>,
}

pub fn relative_positivity(m: &FanMorphism, d: &TorusDivisor) -> Result<PositivityReport> {
    let fan = m.source();
    d.check(fan)?;
    let curves = relative_mori_cone(m)?;
    let values = curves
        .into_iter()
        .map(|c| {
            let x = intersection_number(fan, d, &c.wall)?;
            Ok((c.wall, x))
        })
        .collect::<Result<Vec<_>>>()?;
    let negative = values.iter().find(|(_, x)| x.is_negative());
    let zero = values.iter().find(|(_, x)| x.is_zero());
    let (verdict, witness) = match (negative, zero) {
        (Some((w, _)), _) => (Positivity::NotNef, Some(w.clone())),
        (None, Some((w, _))) => (Positivity::NefNotAmple, Some(w.clone())),
        (None, None) => (Positivity::Ample, None),
    };
    let free = if d.is_integral() && cartier_data(fan, d)?.is_cartier() {
        Some(verdict.is_nef())
    } else {
        None
    };
    Ok(PositivityReport {
        verdict,
        values,
        witness,
        free,
    })
}

fn require_smooth(fan: &Fan) -> Result<()> {
    if is_smooth(fan) {
        Ok(())
    } else {
        Err(Error::NotSmooth)
    }
}

/// `D · C_R` for the line class `C_R` of an extremal ray on a smooth source.
pub fn line_class_pairing(analysis: &MoriAnalysis<'_>, ray: usize, d: &TorusDivisor) -> Result<BigRational> {
    let fan = analysis.fan();
    require_smooth(fan)?;
    d.check(fan)?;
    let (_, epr) = analysis.ray(ray)?;
    if let Some((x, a)) = epr.xs.iter().zip(&epr.a).find(|(_, a)| !a.is_one()) {
        return Err(Error::NormalizationViolated {
            ray: *x,
            coefficient: a.clone(),
        });
    }
    let plus: BigRational = epr.xs.iter().map(|&x| d.coefficient(x).clone()).sum();
    let minus: BigRational = epr
        .ys
        .iter()
        .zip(&epr.b)
        .map(|(&y, b)| d.coefficient(y) * BigRational::from_integer(b.clone()))
        .sum();
    Ok(plus - minus)
}

fn pairings(analysis: &MoriAnalysis<'_>, d: &TorusDivisor) -> Result<Vec<BigRational>> {
    (0..analysis.extremal.rays.len())
        .map(|r| line_class_pairing(analysis, r, d))
        .collect()
}

fn require_integral_ample(analysis: &MoriAnalysis<'_>, l: &TorusDivisor) -> Result<()> {
    require_smooth(analysis.fan())?;
    l.check(analysis.fan())?;
    if !l.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !relative_positivity(analysis.morphism, l)?.verdict.is_ample() {
        return Err(Error::NotRelativelyAmple);
    }
    Ok(())
}

fn check_ray_index(fan: &Fan, v: usize) -> Result<()> {
    let count = fan.rays().len();
    if v >= count {
        return Err(Error::RayOutOfRange { index: v, count });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistEntry {
    pub divisor: usize,
    /// `min_R L(−D_v) · C_R`; absent when there are no extremal rays.
    pub min_pairing: Option<BigRational>,
    /// `min_R L(−D_v) · C_R ≥ t − 1`.
    pub certified: bool,
    /// Relative freeness of `L(−D_v)`; reported for `t = 1` with `L` relatively ample.
    pub free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub bound: u64,
    pub hypothesis_holds: bool,
    /// First extremal ray with `L · C_R < t`.
    pub violating_ray: Option<usize>,
    /// `min_R L · C_R`.
    pub min_pairing: Option<BigRational>,
    pub twists: Vec<TwistEntry>,
    /// `min_{v,R} L(−D_v) · C_R`.
    pub measured_min: Option<BigRational>,
}

/// If `L · C_R ≥ t` for every extremal ray then `L(−D) · C_R ≥ t − 1` for every
/// invariant prime divisor `D`; this checks both sides exhaustively.
pub fn twist_free_bound(analysis: &MoriAnalysis<'_>, l: &TorusDivisor, t: u64) -> Result<TwistReport> {
    let fan = analysis.fan();
    require_smooth(fan)?;
    l.check(fan)?;
    if !l.is_integral() {
        return Err(Error::NotIntegral);
    }
    let bound = BigRational::from_integer(BigInt::from(t));
    let base = pairings(analysis, l)?;
    let violating_ray = base.iter().position(|x| x < &bound);
    let ample = relative_positivity(analysis.morphism, l)?.verdict.is_ample();
    let mut twists = Vec::new();
    for v in 0..fan.rays().len() {
        let twisted = l.twist(v);
        let values = pairings(analysis, &twisted)?;
        let min_pairing = values.into_iter().min();
        let certified = min_pairing
            .as_ref()
            .is_none_or(|x| x >= &(&bound - BigRational::one()));
        let free = if t == 1 && ample {
            relative_positivity(analysis.morphism, &twisted)?.free
        } else {
            None
        };
        twists.push(TwistEntry {
            divisor: v,
            min_pairing,
            certified,
            free,
        });
    }
    let measured_min = twists.iter().filter_map(|e| e.min_pairing.clone()).min();
    Ok(TwistReport {
        bound: t,
        hypothesis_holds: violating_ray.is_none(),
        violating_ray,
        min_pairing: base.into_iter().min(),
        twists,
        measured_min,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Freeness {
    Free,
    NotFree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ampleness {
    Ample,
    NotAmple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport<V> {
    /// Verdict read off the extremal primitive relations.
    pub criterion: V,
    /// Extremal ray with the relevant `x`'s and `L · C_R = 1`.
    pub witness: Option<usize>,
    /// Verdict from intersection numbers on all contracted walls.
    pub direct: V,
    pub agree: bool,
}

fn criterion_witness(
    analysis: &MoriAnalysis<'_>,
    l: &TorusDivisor,
    needed: &[usize],
) -> Result<Option<usize>> {
    let values = pairings(analysis, l)?;
    Ok(analysis
        .relations
        .iter()
        .zip(values)
        .position(|(e, x)| x.is_one() && needed.iter().all(|v| e.xs.contains(v))))
}

/// `L(−D_1−D_2)` fails to be relatively free iff some extremal ray has
/// `{v_1, v_2} ⊂ xs` and `L · C_R = 1`.
pub fn mustata_two_divisor(
    analysis: &MoriAnalysis<'_>,
    l: &TorusDivisor,
    v1: usize,
    v2: usize,
) -> Result<CriterionReport<Freeness>> {
    check_ray_index(analysis.fan(), v1)?;
    check_ray_index(analysis.fan(), v2)?;
    if v1 == v2 {
        return Err(Error::SameDivisor);
    }
    require_integral_ample(analysis, l)?;
    let witness = criterion_witness(analysis, l, &[v1, v2])?;
    let criterion = if witness.is_some() {
        Freeness::NotFree
    } else {
        Freeness::Free
    };
    let twisted = l.twist(v1).twist(v2);
    let direct = if relative_positivity(analysis.morphism, &twisted)?.verdict.is_nef() {
        Freeness::Free
    } else {
        Freeness::NotFree
    };
    Ok(CriterionReport {
        criterion,
        witness,
        direct,
        agree: criterion == direct,
    })
}

/// `L(−D)` fails to be relatively ample iff some extremal ray has
/// `v ∈ xs` and `L · C_R = 1`.
pub fn mustata_one_divisor(
    analysis: &MoriAnalysis<'_>,
    l: &TorusDivisor,
    v: usize,
) -> Result<CriterionReport<Ampleness>> {
    check_ray_index(analysis.fan(), v)?;
    require_integral_ample(analysis, l)?;
    let witness = criterion_witness(analysis, l, &[v])?;
    let criterion = if witness.is_some() {
        Ampleness::NotAmple
    } else {
        Ampleness::Ample
    };
    let direct = if relative_positivity(analysis.morphism, &l.twist(v))?.verdict.is_ample() {
        Ampleness::Ample
    } else {
        Ampleness::NotAmple
    };
    Ok(CriterionReport {
        criterion,
        witness,
        direct,
        agree: criterion == direct,
    })
}

/// An integral divisor with `D · V(w) ≥ 1` on every contracted wall, if one exists.
///
/// Its existence certifies that `f` is projective.
pub fn ample_certificate(m: &FanMorphism) -> Result<Option<TorusDivisor>> {
    let fan = m.source();
    let n = fan.rays().len();
    let curves = relative_mori_cone(m)?;
    let mut program = Program::new(n, 0);
    for c in &curves {
        let row = (0..n)
            .map(|v| intersection_number(fan, &TorusDivisor::prime(n, v), &c.wall))
            .collect::<Result<Vec<_>>>()?;
        program.constrain(row, Relation::Ge, BigRational::one());
    }
    let Some(d) = program.solve() else {
        return Ok(None);
    };
    let lcm = d.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    Ok(Some(TorusDivisor::new(d).scale(&BigRational::from_integer(lcm))))
}
