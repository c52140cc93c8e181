//! Exact rational feasibility via phase-one simplex with Bland's rule.
//!
//! Instances here are tiny (a few dozen variables), so a dense tableau over
//! `BigRational` is plenty. Bland's rule guarantees termination.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{solve_columns, LatticeVector, Solve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Eq,
    Ge,
    Le,
}

/// A system of linear constraints over `free` unrestricted variables
/// followed by `nonneg` sign-constrained ones.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    free: usize,
    nonneg: usize,
    rows: Vec<(Vec<BigRational>, Relation, BigRational)>,
}

impl Program {
    pub(crate) fn new(free: usize, nonneg: usize) -> Self {
        Program {
            free,
            nonneg,
            rows: Vec::new(),
        }
    }

    pub(crate) fn constrain(&mut self, coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) {
        debug_assert_eq!(coeffs.len(), self.free + self.nonneg);
        self.rows.push((coeffs, rel, rhs));
    }

    /// A feasible point (free variables first), or `None`.
    pub(crate) fn solve(&self) -> Option<Vec<BigRational>> {
        let vars = self.free + self.nonneg;
        let slacks = self
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        // standard form columns: free+ , free- , nonneg, slacks
        let width = 2 * self.free + self.nonneg + slacks;
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        let mut slack = 0;
        for (coeffs, rel, rhs) in &self.rows {
            let mut row = vec![BigRational::zero(); width];
            for j in 0..self.free {
                row[j] = coeffs[j].clone();
                row[self.free + j] = -coeffs[j].clone();
            }
            for j in 0..self.nonneg {
                row[2 * self.free + j] = coeffs[self.free + j].clone();
            }
            match rel {
                Relation::Eq => {}
                Relation::Ge => {
                    row[2 * self.free + self.nonneg + slack] = -BigRational::one();
                    slack += 1;
                }
                Relation::Le => {
                    row[2 * self.free + self.nonneg + slack] = BigRational::one();
                    slack += 1;
                }
            }
            a.push(row);
            b.push(rhs.clone());
        }
        let x = phase_one(a, b, width)?;
        let mut out = Vec::with_capacity(vars);
        for j in 0..self.free {
            out.push(&x[j] - &x[self.free + j]);
        }
        for j in 0..self.nonneg {
            out.push(x[2 * self.free + j].clone());
        }
        Some(out)
    }
}

/// Finds `x >= 0` with `a x = b`.
fn phase_one(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
    width: usize,
) -> Option<Vec<BigRational>> {
    let m = a.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); width]);
    }
    for i in 0..m {
        if b[i].is_negative() {
            for x in a[i].iter_mut() {
                *x = -std::mem::take(x);
            }
            b[i] = -std::mem::take(&mut b[i]);
        }
    }
    // tableau: original columns, then m artificials, then rhs
    let total = width + m;
    let mut t: Vec<Vec<BigRational>> = a
        .into_iter()
        .zip(b)
        .enumerate()
        .map(|(i, (mut row, rhs))| {
            row.extend((0..m).map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row.push(rhs);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (width..total).collect();

    // reduced costs of "minimize sum of artificials"
    let mut cost = vec![BigRational::zero(); total + 1];
    for row in &t {
        for (c, x) in cost.iter_mut().zip(row.iter()) {
            *c -= x;
        }
    }
    for k in width..total {
        cost[k] = BigRational::zero();
    }

    loop {
        let Some(enter) = (0..total).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][total] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot row
        let (r, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }

    if !cost[total].is_zero() {
        // optimum of sum(artificials) is -cost[total]
        return None;
    }
    let mut x = vec![BigRational::zero(); width];
    for (i, &j) in basis.iter().enumerate() {
        if j < width {
            x[j] = t[i][total].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (x, y) in cost.iter_mut().zip(pivot_row.iter()) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

fn ratio(x: &num_bigint::BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Nonnegative coefficients expressing `v` over arbitrary (possibly dependent) generators.
pub(crate) fn conic_combination(
    generators: &[Vec<BigRational>],
    v: &[BigRational],
) -> Option<Vec<BigRational>> {
    let k = generators.len();
    let mut p = Program::new(0, k);
    for i in 0..v.len() {
        p.constrain(
            generators.iter().map(|g| g[i].clone()).collect(),
            Relation::Eq,
            v[i].clone(),
        );
    }
    p.solve()
}

pub(crate) fn in_cone(generators: &[&LatticeVector], v: &LatticeVector) -> bool {
    let gens: Vec<Vec<BigRational>> = generators.iter().map(|g| g.to_rational()).collect();
    conic_combination(&gens, &v.to_rational()).is_some()
}

/// A functional `u` with `u = 0` on `common`, `u >= 1` on `left`, `u <= -1` on `right`.
///
/// Its existence is equivalent to `cone(common ∪ left) ∩ cone(common ∪ right)`
/// being the common face `cone(common)`.
pub(crate) fn separating_functional(
    n: usize,
    common: &[&LatticeVector],
    left: &[&LatticeVector],
    right: &[&LatticeVector],
) -> Option<Vec<BigRational>> {
    let mut p = Program::new(n, 0);
    let row = |g: &LatticeVector| g.iter().map(ratio).collect::<Vec<_>>();
    for g in common {
        p.constrain(row(g), Relation::Eq, BigRational::zero());
    }
    for g in left {
        p.constrain(row(g), Relation::Ge, BigRational::one());
    }
    for g in right {
        p.constrain(row(g), Relation::Le, -BigRational::one());
    }
    p.solve()
}

/// Tries the functional dual to the basis `common ∪ left`: zero on `common`, one on `left`.
fn dual_separates(
    n: usize,
    common: &[&LatticeVector],
    left: &[&LatticeVector],
    right: &[&LatticeVector],
) -> bool {
    if common.len() + left.len() != n {
        return false;
    }
    let cols: Vec<Vec<BigRational>> = common.iter().chain(left).map(|g| g.to_rational()).collect();
    right.iter().all(|v| match solve_columns(&cols, &v.to_rational(), n) {
        Solve::Unique(x) => x[common.len()..].iter().sum::<BigRational>().is_negative(),
        _ => false,
    })
}

/// Whether a separating functional exists; full-dimensional simplicial pairs
/// usually settle by a linear solve before the simplex runs.
pub(crate) fn separated(
    n: usize,
    common: &[&LatticeVector],
    left: &[&LatticeVector],
    right: &[&LatticeVector],
) -> bool {
    dual_separates(n, common, left, right)
        || dual_separates(n, common, right, left)
        || separating_functional(n, common, left, right).is_some()
}

/// True if some `u` is strictly positive on every generator.
pub(crate) fn strongly_convex(n: usize, generators: &[&LatticeVector]) -> bool {
    separating_functional(n, &[], generators, &[]).is_some()
}

/// Indices of the generators spanning the smallest face of `cone(generators)`
/// that contains `p`. Assumes `p` lies in the cone.
pub(crate) fn minimal_face(generators: &[&LatticeVector], p: &LatticeVector) -> Vec<usize> {
    let k = generators.len();
    let gens: Vec<Vec<BigRational>> = generators.iter().map(|g| g.to_rational()).collect();
    let point = p.to_rational();
    (0..k)
        .filter(|&j| {
            // sum mu g - t p = 0, mu_j >= 1, mu, t >= 0
            let mut prog = Program::new(0, k + 1);
            for i in 0..point.len() {
                let mut coeffs: Vec<BigRational> = gens.iter().map(|g| g[i].clone()).collect();
                coeffs.push(-point[i].clone());
                prog.constrain(coeffs, Relation::Eq, BigRational::zero());
            }
            let mut pick = vec![BigRational::zero(); k + 1];
            pick[j] = BigRational::one();
            prog.constrain(pick, Relation::Ge, BigRational::one());
            prog.solve().is_some()
        })
        .collect()
}

/// True if all of `face` lies in a proper face of a full-dimensional `cone(generators)`.
pub(crate) fn on_boundary(
    n: usize,
    generators: &[&LatticeVector],
    face: &[&LatticeVector],
) -> bool {
    let mut p = Program::new(n, 0);
    let row = |g: &LatticeVector| g.iter().map(ratio).collect::<Vec<_>>();
    for g in face {
        p.constrain(row(g), Relation::Eq, BigRational::zero());
    }
    let mut total = vec![BigRational::zero(); n];
    for g in generators {
        let r = row(g);
        for (t, x) in total.iter_mut().zip(r.iter()) {
            *t += x;
        }
        p.constrain(r, Relation::Ge, BigRational::zero());
    }
    p.constrain(total, Relation::Ge, BigRational::one());
    p.solve().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    #[test]
    fn simple_feasibility() {
        // x + y = 2, x - y >= 1, x, y >= 0
        let mut p = Program::new(0, 2);
        p.constrain(vec![q(1), q(1)], Relation::Eq, q(2));
        p.constrain(vec![q(1), q(-1)], Relation::Ge, q(1));
        let x = p.solve().unwrap();
        assert_eq!(&x[0] + &x[1], q(2));
        assert!(&x[0] - &x[1] >= q(1));

        let mut p = Program::new(0, 2);
        p.constrain(vec![q(1), q(1)], Relation::Eq, q(-1));
        assert!(p.solve().is_none());
    }

    #[test]
    fn free_variables() {
        // u1 <= -3, u1 + u2 = 0
        let mut p = Program::new(2, 0);
        p.constrain(vec![q(1), q(0)], Relation::Le, q(-3));
        p.constrain(vec![q(1), q(1)], Relation::Eq, q(0));
        let u = p.solve().unwrap();
        assert!(u[0] <= q(-3));
        assert_eq!(&u[0] + &u[1], q(0));
    }

    #[test]
    fn cone_membership() {
        let a = v(&[1, 0]);
        let b = v(&[0, 1]);
        let c = v(&[1, 1]);
        assert!(in_cone(&[&a, &b], &c));
        assert!(!in_cone(&[&a, &c], &b));
        assert!(in_cone(&[&a, &b, &c], &v(&[3, 1])));
    }

    #[test]
    fn separation_of_adjacent_cones() {
        let a = v(&[1, 0]);
        let b = v(&[0, 1]);
        let c = v(&[-1, -1]);
        assert!(separating_functional(2, &[&b], &[&a], &[&c]).is_some());
        // overlapping cones cone(a,b) and cone(a, (1,1)) share only `a` combinatorially
        let d = v(&[1, 1]);
        assert!(separating_functional(2, &[&a], &[&b], &[&d]).is_none());
    }

    #[test]
    fn convexity_and_faces() {
        let gens = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[1, 1, -1])];
        let refs: Vec<_> = gens.iter().collect();
        assert!(strongly_convex(3, &refs));
        assert!(!strongly_convex(2, &[&v(&[1, 0]), &v(&[-1, 0])]));
        // interior point of the square cone
        assert_eq!(minimal_face(&refs, &v(&[2, 1, 0])), vec![0, 1, 2, 3]);
        // a point on the edge cone(u1, u3)
        assert_eq!(minimal_face(&refs, &v(&[1, 0, 1])), vec![0, 2]);
        assert!(on_boundary(3, &refs, &[&gens[0], &gens[2]]));
        assert!(!on_boundary(3, &refs, &[&gens[0], &gens[1]]));
    }
}
