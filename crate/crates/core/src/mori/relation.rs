use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{wall_relation, ExtremalRay};
use crate::fan::{is_complete, Cone, Fan, FanMorphism, GeneralCone};
use crate::lattice::LatticeVector;
use crate::{Error, Result};

/// `a_1 x_1 + ... + a_l x_l = b_1 y_1 + ... + b_m y_m` attached to an extremal ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPrimitiveRelation {
    pub xs: Vec<usize>,
    pub a: Vec<BigInt>,
    pub ys: Vec<usize>,
    pub b: Vec<BigInt>,
    /// `w'`, the cone on `ys`.
    pub w_prime: Cone,
    /// `w̃ = cone(ys ∪ xs)`; absent when `m = 0`, where it is a linear subspace.
    pub w_tilde: Option<GeneralCone>,
    /// `w⁺`, the ray set `xs` (not a cone of the fan).
    pub w_plus: Cone,
    /// `σ_i = cone(xs ∖ {x_i})`, in the order of `xs`.
    pub sigma: Vec<Cone>,
}

impl ExtremalPrimitiveRelation {
    pub fn l(&self) -> usize {
        self.xs.len()
    }

    pub fn m(&self) -> usize {
        self.ys.len()
    }

    /// `Σ a_i − Σ b_j`, the sign of `−K · C`.
    pub fn degree_difference(&self) -> BigInt {
        self.a.iter().sum::<BigInt>() - self.b.iter().sum::<BigInt>()
    }

    pub fn coefficient(&self, ray: usize) -> BigInt {
        if let Some(i) = self.xs.iter().position(|&x| x == ray) {
            return self.a[i].clone();
        }
        if let Some(j) = self.ys.iter().position(|&y| y == ray) {
            return -self.b[j].clone();
        }
        BigInt::zero()
    }

    /// Formats with custom ray labels, e.g. `2*u1 + u2 = u3 + u4`.
    pub fn format_with(&self, label: impl Fn(usize) -> String) -> String {
        let side = |rays: &[usize], coeffs: &[BigInt]| {
            if rays.is_empty() {
                return "0".to_string();
            }
            rays.iter()
                .zip(coeffs)
                .map(|(&r, c)| {
                    if c.is_one() {
                        label(r)
                    } else {
                        format!("{c}*{}", label(r))
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} = {}", side(&self.xs, &self.a), side(&self.ys, &self.b))
    }
}

impl fmt::Display for ExtremalPrimitiveRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(|r| format!("r{r}")))
    }
}

fn relation_data(fan: &Fan, wall: &crate::fan::Wall) -> Result<(Vec<usize>, Vec<BigInt>, Vec<usize>, Vec<BigInt>)> {
    let rel = wall_relation(fan, wall)?;
    let a = rel.positive_part.iter().map(|&x| rel.coefficient(x)).collect();
    let b = rel.negative_part.iter().map(|&y| -rel.coefficient(y)).collect();
    Ok((rel.positive_part, a, rel.negative_part, b))
}

pub fn extremal_primitive_relation(
    m: &FanMorphism,
    ray: &ExtremalRay,
) -> Result<ExtremalPrimitiveRelation> {
    let fan = m.source();
    let first = ray
        .walls
        .first()
        .ok_or_else(|| Error::NonCanonicalRelation("extremal ray without walls".into()))?;
    let (xs, a, ys, b) = relation_data(fan, first)?;
    for w in &ray.walls[1..] {
        if relation_data(fan, w)? != (xs.clone(), a.clone(), ys.clone(), b.clone()) {
            return Err(Error::NonCanonicalRelation(format!(
                "walls {} and {} induce different relations",
                first.face, w.face
            )));
        }
    }
    let g = a.iter().chain(&b).fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_one() || a.iter().chain(&b).any(|c| !c.is_positive()) {
        return Err(Error::NonCanonicalRelation("relation is not primitive".into()));
    }
    let w_prime = Cone::new(ys.clone());
    let w_plus = Cone::new(xs.clone());
    let sigma: Vec<Cone> = xs.iter().map(|&x| w_plus.without(x)).collect();
    for s in &sigma {
        if !fan.is_face(&s.union(&w_prime)) {
            return Err(Error::ExtremalStructure(format!(
                "{} is not a cone of the fan",
                s.union(&w_prime)
            )));
        }
    }
    if is_complete(fan) && fan.is_face(&w_plus) {
        return Err(Error::ExtremalStructure(format!(
            "{w_plus} is not a primitive collection"
        )));
    }
    let w_tilde = if ys.is_empty() {
        None
    } else {
        let gens: Vec<LatticeVector> = ys.iter().chain(&xs).map(|&r| fan.ray(r).clone()).collect();
        Some(GeneralCone::new(gens)?)
    };
    Ok(ExtremalPrimitiveRelation {
        xs,
        a,
        ys,
        b,
        w_prime,
        w_tilde,
        w_plus,
        sigma,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimitiveClosureReport {
    /// Whether the fan is complete; the closure property is only claimed then.
    pub complete: bool,
    pub checked: usize,
    /// Primitive collections `Q` for which `(Q ∖ xs) ∪ ys` is a cone.
    pub violations: Vec<Cone>,
}

impl PrimitiveClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every primitive collection `Q ≠ xs` meeting `xs`, checks that
/// `(Q ∖ xs) ∪ ys` contains a primitive collection, i.e. is not a cone.
pub fn verify_primitive_closure(fan: &Fan, epr: &ExtremalPrimitiveRelation) -> PrimitiveClosureReport {
    let mut report = PrimitiveClosureReport {
        complete: is_complete(fan),
        ..Default::default()
    };
    for q in crate::fan::primitive_collections(fan) {
        if q == epr.w_plus || q.intersection(&epr.w_plus).is_empty() {
            continue;
        }
        report.checked += 1;
        let rest = q.minus(&epr.w_plus).union(&epr.w_prime);
        if fan.is_face(&rest) {
            report.violations.push(q);
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureViolation {
    pub cone: Cone,
    pub missing: Cone,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub checked: usize,
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every cone `σ = w' + σ' + τ ⊇ w'`, checks `w' + σ_i + τ ∈ Δ` for all `i`.
pub fn verify_extremal_structure(fan: &Fan, epr: &ExtremalPrimitiveRelation) -> StructureReport {
    let mut report = StructureReport::default();
    for cone in fan.faces_containing(&epr.w_prime) {
        let tau = cone.minus(&epr.w_prime).minus(&epr.w_plus);
        report.checked += 1;
        for s in &epr.sigma {
            let need = epr.w_prime.union(s).union(&tau);
            if !fan.is_face(&need) {
                report.violations.push(StructureViolation {
                    cone: cone.clone(),
                    missing: need,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mori::MoriAnalysis;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn f1_relations() {
        let m = fixtures::f1_to_point();
        let an = MoriAnalysis::new(&m).unwrap();
        let ruling = &an.relations[0];
        assert_eq!(ruling.xs, vec![2, 3]);
        assert!(ruling.ys.is_empty());
        assert_eq!(ruling.to_string(), "r2 + r3 = 0");
        assert!(ruling.w_tilde.is_none());
        let exc = &an.relations[1];
        assert_eq!((exc.xs.clone(), exc.a.clone()), (vec![0, 1], ints(&[1, 1])));
        assert_eq!((exc.ys.clone(), exc.b.clone()), (vec![3], ints(&[1])));
        assert_eq!((exc.l(), exc.m()), (2, 1));
        assert_eq!(exc.to_string(), "r0 + r1 = r3");
        assert_eq!(exc.sigma, vec![Cone::new(vec![1]), Cone::new(vec![0])]);
        assert_eq!(exc.degree_difference(), BigInt::one());
    }

    #[test]
    fn fibration_relation() {
        let m = fixtures::p1xp1_to_p1();
        let an = MoriAnalysis::new(&m).unwrap();
        assert_eq!(an.relations.len(), 1);
        assert_eq!(an.relations[0].xs, vec![2, 3]);
        assert_eq!(an.relations[0].a, ints(&[1, 1]));
        assert_eq!(an.relations[0].m(), 0);
    }

    #[test]
    fn weighted_flip_relation() {
        let m = fixtures::weighted_flip();
        let an = MoriAnalysis::new(&m).unwrap();
        let e = &an.relations[0];
        assert_eq!((e.xs.clone(), e.a.clone()), (vec![2, 3], ints(&[1, 1])));
        assert_eq!((e.ys.clone(), e.b.clone()), (vec![0, 1], ints(&[2, 1])));
        assert_eq!(e.to_string(), "r2 + r3 = 2*r0 + r1");
        assert_eq!(e.degree_difference(), BigInt::from(-1));
        assert_eq!(e.w_tilde.as_ref().unwrap().generators().len(), 4);
    }

    #[test]
    fn closure_and_structure_on_fixtures() {
        for (name, m) in fixtures::all_morphisms() {
            let an = MoriAnalysis::new(&m).unwrap();
            for e in &an.relations {
                let c = verify_primitive_closure(m.source(), e);
                assert!(c.passed(), "{name}: {c:?}");
                let s = verify_extremal_structure(m.source(), e);
                assert!(s.passed(), "{name}: {s:?}");
                assert!(s.checked > 0);
            }
        }
    }

    #[test]
    fn structure_checks_every_cone_over_w_prime() {
        let m = fixtures::atiyah_flop();
        let an = MoriAnalysis::new(&m).unwrap();
        let report = verify_extremal_structure(m.source(), &an.relations[0]);
        // {u1,u2}, {u1,u2,u3}, {u1,u2,u4}
        assert_eq!(report.checked, 3);
    }

    #[test]
    fn broken_structure_is_reported() {
        let m = fixtures::f1_to_point();
        let an = MoriAnalysis::new(&m).unwrap();
        let exc = an.relations[1].clone();
        // drop the cone {1,3}; {0,3} now needs {1,3}
        let broken = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]],
            &[&[0, 3], &[1, 2], &[2, 0]],
        );
        let report = verify_extremal_structure(&broken, &exc);
        assert!(report
            .violations
            .iter()
            .any(|v| v.missing == Cone::new(vec![1, 3])));
    }
}
