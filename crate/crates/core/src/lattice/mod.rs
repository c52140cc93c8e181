//! Exact integer linear algebra over `N = Z^n`.
//!
//! Everything here works on arbitrary-precision integers and rationals. The
//! Smith decomposition drives kernels, multiplicities and lattice quotients;
//! kernel bases are returned in Hermite form so results are reproducible.

mod matrix;

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use matrix::{hermite_normal_form, smith_normal_form, IntMatrix, SmithDecomposition};

use crate::{Error, Result};

/// An element of the lattice `N = Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }

    /// Entries as `i64`, failing on overflow.
    pub fn to_i64(&self) -> Result<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
    }

    /// True when `other = t * self` for some rational `t > 0`.
    pub fn same_ray(&self, other: &LatticeVector) -> bool {
        same_direction(&self.to_rational(), &other.to_rational())
    }
}

impl Deref for LatticeVector {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn primitive_part(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVector(v.0.iter().map(|x| x / &g).collect()))
}

/// Saturated lattice basis of `{z : m z = 0}`, in Hermite form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<LatticeVector> {
    let d = smith_normal_form(m);
    let r = d.rank();
    let basis: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| d.v.column(j).into_entries()).collect();
    hermite_normal_form(&basis, m.cols())
        .into_iter()
        .map(LatticeVector)
        .collect()
}

/// Coefficients `c >= 0` with `v = sum c_i g_i`, for linearly independent `g`.
///
/// Returns `Ok(None)` when `v` is outside the span or outside the cone.
pub fn cone_solve(
    generators: &[LatticeVector],
    v: &LatticeVector,
) -> Result<Option<Vec<BigRational>>> {
    let cols: Vec<Vec<BigRational>> = generators.iter().map(|g| g.to_rational()).collect();
    let rhs = v.to_rational();
    for g in generators {
        if g.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: g.len(),
            });
        }
    }
    match solve_columns(&cols, &rhs, v.len()) {
        Solve::Dependent => Err(Error::NotSimplicial),
        Solve::Inconsistent => Ok(None),
        Solve::Unique(x) => {
            if x.iter().any(Signed::is_negative) {
                Ok(None)
            } else {
                Ok(Some(x))
            }
        }
    }
}

/// Index of the subgroup generated by `generators` inside its saturation.
pub fn multiplicity(generators: &[LatticeVector]) -> Result<BigInt> {
    let n = match generators.first() {
        Some(g) => g.len(),
        None => return Ok(BigInt::one()),
    };
    let refs: Vec<&LatticeVector> = generators.iter().collect();
    let m = IntMatrix::from_columns(&refs, n)?;
    let d = smith_normal_form(&m);
    if d.rank() != generators.len() {
        return Err(Error::NotSimplicial);
    }
    Ok(d.nonzero_invariants().iter().product())
}

/// Surjection `Z^n -> Z^rank'` whose kernel is the saturation of the span of `vectors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeQuotient {
    pub matrix: IntMatrix,
    pub rank: usize,
}

impl LatticeQuotient {
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.matrix.apply(v)
    }
}

pub fn quotient_map(vectors: &[LatticeVector], n: usize) -> Result<LatticeQuotient> {
    let refs: Vec<&LatticeVector> = vectors.iter().collect();
    let a = IntMatrix::from_columns(&refs, n)?;
    let d = smith_normal_form(&a);
    let r = d.rank();
    let rows: Vec<Vec<BigInt>> = (r..n).map(|i| d.u.row(i).to_vec()).collect();
    let rows = hermite_normal_form(&rows, n);
    let rank = rows.len();
    debug_assert_eq!(rank, n - r);
    Ok(LatticeQuotient {
        matrix: IntMatrix::from_rows(&rows, n)?,
        rank,
    })
}

/// Basis of the saturated sublattice `span(vectors) ∩ N`, together with the
/// coordinates of each input vector in that basis.
pub fn saturated_coordinates(
    vectors: &[LatticeVector],
    n: usize,
) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>)> {
    let refs: Vec<&LatticeVector> = vectors.iter().collect();
    let a = IntMatrix::from_columns(&refs, n)?;
    let d = smith_normal_form(&a);
    let r = d.rank();
    // U A V = S, so A = U^{-1} S V^{-1}; the first r columns of U^{-1} span the saturation
    // and the coordinates of A's columns are the first r rows of U A.
    let ua = d.u.mul(&a)?;
    let coords = (0..vectors.len())
        .map(|j| LatticeVector((0..r).map(|i| ua[(i, j)].clone()).collect()))
        .collect();
    let u_inv = unimodular_inverse(&d.u)?;
    let basis = (0..r).map(|j| u_inv.column(j)).collect();
    Ok((basis, coords))
}

fn unimodular_inverse(u: &IntMatrix) -> Result<IntMatrix> {
    let n = u.rows();
    let rows = rational_rows(u);
    let inv = invert(&rows).ok_or(Error::NotSimplicial)?;
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if !inv[i][j].is_integer() {
                return Err(Error::ShapeMismatch("matrix is not unimodular".into()));
            }
            out[(i, j)] = inv[i][j].to_integer();
        }
    }
    Ok(out)
}

fn rational_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

pub(crate) enum Solve {
    Unique(Vec<BigRational>),
    Inconsistent,
    Dependent,
}

/// Solves `sum x_j cols[j] = rhs` where every column has length `n`.
pub(crate) fn solve_columns(cols: &[Vec<BigRational>], rhs: &[BigRational], n: usize) -> Solve {
    let k = cols.len();
    // augmented matrix n x (k+1)
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            return Solve::Dependent;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x -= &f * y;
            }
        }
        pivots.push(r);
        r += 1;
    }
    if (r..n).any(|i| !a[i][k].is_zero()) {
        return Solve::Inconsistent;
    }
    Solve::Unique(pivots.iter().map(|&i| a[i][k].clone()).collect())
}

/// Rank over Q of a list of rational vectors.
pub fn rational_rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = vectors.to_vec();
    let width = a.first().map_or(0, |v| v.len());
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

pub fn integer_rank(vectors: &[&LatticeVector]) -> usize {
    let rows: Vec<Vec<BigRational>> = vectors.iter().map(|v| v.to_rational()).collect();
    rational_rank(&rows)
}

fn invert(rows: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x -= &f * y;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `b = t a` for some rational `t > 0`; false if either is zero.
pub fn same_direction(a: &[BigRational], b: &[BigRational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(i) = a.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if b[i].is_zero() {
        return false;
    }
    let t = &b[i] / &a[i];
    t.is_positive() && a.iter().zip(b.iter()).all(|(x, y)| &(x * &t) == y)
}
