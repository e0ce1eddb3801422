//! Exact linear algebra over ℚ and ℤ: row reduction, kernels, linear solves
//! and column-style Hermite normal forms.
//!
//! Matrices over ℚ are row-major `Vec<Vec<BigRational>>`. Integer lattices
//! are given as lists of generator vectors (the columns of the generator
//! matrix).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::ExtendedRational;

pub type QVec = Vec<BigRational>;
pub type QMat = Vec<QVec>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn transpose(m: &QMat) -> QMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &QMat, v: &[BigRational]) -> QVec {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let bt = transpose(b);
    a.iter().map(|row| bt.iter().map(|col| dot(row, col)).collect()).collect()
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMat) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}`; `ncols` is needed when `m` has no rows.
pub fn nullspace(m: &QMat, ncols: usize) -> Vec<QVec> {
    if m.is_empty() {
        return (0..ncols).map(|i| unit(i, ncols)).collect();
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn unit(i: usize, n: usize) -> QVec {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

/// One solution of `m x = b`, if the system is consistent.
pub fn solve(m: &QMat, b: &[BigRational]) -> Option<QVec> {
    let ncols = m.first().map_or(0, Vec::len);
    let aug: QMat = m.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[row][ncols].clone();
    }
    Some(x)
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m.iter().enumerate().map(|(i, row)| {
        let mut r = row.clone();
        r.extend(unit(i, n));
        r
    }).collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Concatenate the basis coordinates of a vector of extended rationals.
pub fn lift(v: &[ExtendedRational]) -> QVec {
    v.iter().flat_map(|x| x.coords().iter().cloned()).collect()
}

pub fn unlift(v: &[BigRational], dim: usize) -> Vec<ExtendedRational> {
    v.chunks(dim).map(|c| ExtendedRational::from_coords(c.to_vec())).collect()
}

/// Rational coefficients `c` with `Σ c_i · basis_i = x`, solving over the
/// lifted coordinates.
pub fn coefficients_in(basis: &[Vec<ExtendedRational>], x: &[ExtendedRational]) -> Option<QVec> {
    let lifted: Vec<QVec> = basis.iter().map(|b| lift(b)).collect();
    let target = lift(x);
    if lifted.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    solve(&transpose(&lifted), &target)
}

/// `Σ c_i · vectors_i` for rational coefficients.
pub fn combine(vectors: &[Vec<ExtendedRational>], coeffs: &[BigRational], d: usize, dim: usize) -> Vec<ExtendedRational> {
    let mut out = vec![ExtendedRational::zero(dim); d];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &x.scale(c);
        }
    }
    out
}

/// Apply a rational matrix to a vector of extended rationals.
pub fn apply(m: &QMat, v: &[ExtendedRational], dim: usize) -> Vec<ExtendedRational> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(ExtendedRational::zero(dim), |acc, (c, x)| {
                if c.is_zero() { acc } else { &acc + &x.scale(c) }
            })
        })
        .collect()
}

/// Column-style Hermite normal form of the integer lattice spanned by `gens`.
#[derive(Debug, Clone)]
pub struct Hnf {
    /// Basis vectors in echelon order: basis `j` has its first nonzero entry at `pivot_rows[j]`.
    pub basis: Vec<Vec<BigInt>>,
    pub pivot_rows: Vec<usize>,
    /// Integer combinations of the generators that vanish (a basis of the relation lattice).
    pub kernel: Vec<Vec<BigInt>>,
    /// `transform[j]` expresses `basis[j]` as an integer combination of the generators.
    pub transform: Vec<Vec<BigInt>>,
}

pub fn hnf(gens: &[Vec<BigInt>], d: usize) -> Hnf {
    let k = gens.len();
    let mut cols: Vec<Vec<BigInt>> = gens.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|j| (0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for row in 0..d {
        if pc == k {
            break;
        }
        loop {
            let best = (pc..k)
                .filter(|&j| !cols[j][row].is_zero())
                .min_by(|&a, &b| cols[a][row].abs().cmp(&cols[b][row].abs()));
            let Some(best) = best else { break };
            cols.swap(pc, best);
            u.swap(pc, best);
            let mut done = true;
            for j in pc + 1..k {
                if cols[j][row].is_zero() {
                    continue;
                }
                let f = cols[j][row].div_floor(&cols[pc][row]);
                sub_multiple(&mut cols, j, pc, &f);
                sub_multiple(&mut u, j, pc, &f);
                if !cols[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cols.get(pc).is_none_or(|c| c[row].is_zero()) {
            continue;
        }
        if cols[pc][row].is_negative() {
            cols[pc].iter_mut().for_each(|x| *x = -&*x);
            u[pc].iter_mut().for_each(|x| *x = -&*x);
        }
        for j in 0..pc {
            let f = cols[j][row].div_floor(&cols[pc][row]);
            if !f.is_zero() {
                sub_multiple(&mut cols, j, pc, &f);
                sub_multiple(&mut u, j, pc, &f);
            }
        }
        pivot_rows.push(row);
        pc += 1;
    }
    Hnf {
        basis: cols[..pc].to_vec(),
        pivot_rows,
        kernel: u[pc..].to_vec(),
        transform: u[..pc].to_vec(),
    }
}

fn sub_multiple(v: &mut [Vec<BigInt>], target: usize, source: usize, f: &BigInt) {
    let src = v[source].clone();
    for (x, s) in v[target].iter_mut().zip(&src) {
        *x -= f * s;
    }
}

/// Common denominator of a family of rational vectors.
pub fn common_denominator<'a>(vs: impl IntoIterator<Item = &'a QVec>) -> BigInt {
    vs.into_iter()
        .flat_map(|v| v.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// HNF basis of the lattice spanned by rational vectors (denominators cleared and restored).
pub fn rational_hnf(gens: &[QVec], d: usize) -> Vec<QVec> {
    let den = common_denominator(gens);
    let ints: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let h = hnf(&ints, d);
    h.basis
        .into_iter()
        .map(|b| b.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
        .collect()
}

/// Integer coordinates of `x` in a lattice basis, when `x` lies in the lattice.
pub fn lattice_coordinates(basis: &[QVec], x: &[BigRational]) -> Option<Vec<BigInt>> {
    if basis.is_empty() {
        return x.iter().all(Zero::is_zero).then(Vec::new);
    }
    let c = solve(&transpose(&basis.to_vec()), x)?;
    c.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
}

/// Basis of the integer lattice `{k ∈ ℤ^n : m k = 0}` for a rational matrix `m`.
pub fn integer_kernel(m: &QMat, n: usize) -> Vec<Vec<BigInt>> {
    if m.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    }
    let den = common_denominator(m.iter());
    // generators are the columns of m
    let gens: Vec<Vec<BigInt>> = (0..n)
        .map(|j| m.iter().map(|row| (&row[j] * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    hnf(&gens, m.len()).kernel
}
