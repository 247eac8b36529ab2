//! Integer lattice kernels: Hermite and Smith normal forms over `BigInt`,
//! triangular rational solves, rational determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntRow = Vec<BigInt>;

/// Row-style Hermite normal form of the lattice spanned by `rows` in `Z^ncols`.
///
/// Returns one optional row per column: `basis[c]` is the basis vector whose
/// leading entry sits in column `c` (positive), with entries to the right of
/// each later pivot reduced into `[0, pivot)`. A column without a pivot means
/// the span has smaller rank.
pub fn hnf(rows: &[IntRow], ncols: usize) -> Vec<Option<IntRow>> {
    let mut basis: Vec<Option<IntRow>> = vec![None; ncols];
    let mut modulus: Option<BigInt> = None;
    for row in rows {
        debug_assert_eq!(row.len(), ncols);
        let mut v = row.clone();
        if let Some(d) = &modulus {
            for x in v.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
        insert(&mut basis, v, modulus.as_ref());
        // once full rank, the pivot product is a multiple of the covolume
        if basis.iter().all(Option::is_some) {
            modulus = Some(pivot_product(&basis));
        }
    }
    if let Some(d) = modulus {
        // reductions mod d dropped multiples of d e_k; put them back
        for k in 0..ncols {
            let mut e = vec![BigInt::zero(); ncols];
            e[k] = d.clone();
            insert(&mut basis, e, Some(&d));
        }
    }
    reduce_above(&mut basis);
    basis
}

fn pivot_product(basis: &[Option<IntRow>]) -> BigInt {
    basis
        .iter()
        .enumerate()
        .map(|(c, r)| r.as_ref().map(|r| r[c].clone()).unwrap_or_else(BigInt::one))
        .product()
}

fn insert(basis: &mut [Option<IntRow>], mut v: IntRow, modulus: Option<&BigInt>) {
    let n = v.len();
    for c in 0..n {
        if v[c].is_zero() {
            continue;
        }
        match basis[c].take() {
            None => {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                basis[c] = Some(v);
                return;
            }
            Some(b) => {
                let e = b[c].extended_gcd(&v[c]);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let bc = &b[c] / &g;
                let vc = &v[c] / &g;
                let mut new_b: IntRow = (0..n).map(|k| &s * &b[k] + &t * &v[k]).collect();
                let mut new_v: IntRow = (0..n).map(|k| &vc * &b[k] - &bc * &v[k]).collect();
                if let Some(d) = modulus {
                    for k in c + 1..n {
                        new_b[k] = new_b[k].mod_floor(d);
                        new_v[k] = new_v[k].mod_floor(d);
                    }
                }
                if new_b[c].is_negative() {
                    new_b.iter_mut().for_each(|x| *x = -&*x);
                }
                basis[c] = Some(new_b);
                v = new_v;
            }
        }
    }
}

fn reduce_above(basis: &mut [Option<IntRow>]) {
    let n = basis.len();
    for i in 0..n {
        let Some(pivot_row) = basis[i].clone() else {
            continue;
        };
        let pivot = pivot_row[i].clone();
        for k in 0..i {
            if let Some(row) = basis[k].as_mut() {
                let q = row[i].div_floor(&pivot);
                if !q.is_zero() {
                    for c in i..n {
                        row[c] -= &q * &pivot_row[c];
                    }
                }
            }
        }
    }
}

/// Rank of the lattice spanned by `rows`.
pub fn rank(rows: &[IntRow], ncols: usize) -> usize {
    hnf(rows, ncols).iter().filter(|r| r.is_some()).count()
}

/// Solves `x = y * basis` for `y`, where `basis` is square upper triangular
/// with nonzero diagonal.
pub fn solve_upper(basis: &[IntRow], x: &[BigRational]) -> Vec<BigRational> {
    let n = basis.len();
    let mut y: Vec<BigRational> = Vec::with_capacity(n);
    for c in 0..n {
        let mut acc = x[c].clone();
        for (i, yi) in y.iter().enumerate() {
            if !basis[i][c].is_zero() {
                acc -= yi * BigRational::from_integer(basis[i][c].clone());
            }
        }
        y.push(acc / BigRational::from_integer(basis[c][c].clone()));
    }
    y
}

/// Smith normal form of an integer matrix with the column transform.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Diagonal entries `d_1 | d_2 | ...` (nonnegative), length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    /// Unimodular `V` with `U * A * V = D`.
    pub col_transform: Vec<IntRow>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// `|Z^cols / rowspan(A)|` when finite.
    pub fn cokernel_order(&self, cols: usize) -> Option<BigInt> {
        if self.rank() < cols {
            return None;
        }
        Some(self.diagonal.iter().product())
    }
}

/// Smith normal form with column transform. Works on a copy of `a`.
pub fn smith(a: &[IntRow], ncols: usize) -> Smith {
    let m = a.len();
    let n = ncols;
    let mut mat: Vec<IntRow> = a.to_vec();
    let mut v: Vec<IntRow> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let steps = m.min(n);
    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !mat[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| mat[i][j].abs() < mat[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(mat, v, steps);
            };
            mat.swap(t, bi);
            swap_cols(&mut mat, t, bj);
            swap_cols(&mut v, t, bj);
            let mut clean = true;
            for i in t + 1..m {
                if mat[i][t].is_zero() {
                    continue;
                }
                let q = mat[i][t].div_floor(&mat[t][t]);
                let pivot_row = mat[t].clone();
                for j in t..n {
                    mat[i][j] -= &q * &pivot_row[j];
                }
                if !mat[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if mat[t][j].is_zero() {
                    continue;
                }
                let q = mat[t][j].div_floor(&mat[t][t]);
                for i in t..m {
                    let s = &q * &mat[i][t];
                    mat[i][j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !mat[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition on the trailing block
            let pivot = mat[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !mat[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = mat[i][j].clone();
                        mat[t][j] += x;
                    }
                }
                None => break,
            }
        }
    }
    finish(mat, v, steps)
}

fn finish(mut mat: Vec<IntRow>, v: Vec<IntRow>, steps: usize) -> Smith {
    let diagonal = (0..steps)
        .map(|t| {
            let d = std::mem::take(&mut mat[t][t]);
            d.abs()
        })
        .collect();
    Smith {
        diagonal,
        col_transform: v,
    }
}

fn swap_cols(m: &mut [IntRow], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..n {
                let s = &f * &a[c][k];
                a[r][k] -= s;
            }
        }
    }
    det
}

pub fn to_int_row(xs: &[i64]) -> IntRow {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
