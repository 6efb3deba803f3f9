//! Exact integer linear algebra for small symmetric forms.

use num_rational::Ratio;

pub type Matrix = Vec<Vec<i64>>;

/// `a · G · b`.
pub fn bilinear(gram: &Matrix, a: &[i64], b: &[i64]) -> i64 {
    gram.iter()
        .zip(a)
        .map(|(row, &ai)| ai * row.iter().zip(b).map(|(g, bj)| g * bj).sum::<i64>())
        .sum()
}

/// `G · v`.
pub fn apply(gram: &Matrix, v: &[i64]) -> Vec<i64> {
    gram.iter()
        .map(|row| row.iter().zip(v).map(|(g, x)| g * x).sum())
        .collect()
}

/// Gram matrix of the given vectors.
pub fn restrict(gram: &Matrix, basis: &[Vec<i64>]) -> Matrix {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| bilinear(gram, a, b)).collect())
        .collect()
}

/// Integer basis of the kernel of a linear form, together with the inverse
/// change of basis used to express kernel vectors in that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    /// Kernel generators, in ascending column order.
    pub basis: Vec<Vec<i64>>,
    pivot: Option<usize>,
    inverse: Matrix,
}

impl KernelBasis {
    /// Coordinates of `v` in [`KernelBasis::basis`], or `None` if `v` is not
    /// in the kernel.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let full = apply(&self.inverse, v);
        match self.pivot {
            Some(p) if full[p] != 0 => None,
            Some(p) => Some(
                full.into_iter()
                    .enumerate()
                    .filter(|&(i, _)| i != p)
                    .map(|(_, x)| x)
                    .collect(),
            ),
            None => Some(full),
        }
    }
}

/// Kernel of `x ↦ form · x` over the integers.
///
/// Euclidean column reduction: repeatedly reduce every other entry modulo the
/// entry of least absolute value (lowest index on ties) until one nonzero
/// entry remains. The remaining unimodular columns span the kernel; each is
/// sign-normalized so its first nonzero entry is positive.
pub fn kernel_of_form(form: &[i64]) -> KernelBasis {
    let r = form.len();
    let mut h = form.to_vec();
    let mut u: Matrix = identity(r);
    let mut inv: Matrix = identity(r);
    let pivot = loop {
        let nonzero: Vec<usize> = (0..r).filter(|&i| h[i] != 0).collect();
        let Some(&p) = nonzero.iter().min_by_key(|&&i| (h[i].abs(), i)) else {
            break None;
        };
        if nonzero.len() == 1 {
            break Some(p);
        }
        for &k in &nonzero {
            if k == p {
                continue;
            }
            let q = h[k] / h[p];
            h[k] -= q * h[p];
            for row in u.iter_mut() {
                row[k] -= q * row[p];
            }
            for col in 0..r {
                inv[p][col] += q * inv[k][col];
            }
        }
    };
    let mut basis = Vec::new();
    for k in 0..r {
        if Some(k) == pivot {
            continue;
        }
        let first = (0..r).map(|i| u[i][k]).find(|&x| x != 0).unwrap_or(0);
        if first < 0 {
            for row in u.iter_mut() {
                row[k] = -row[k];
            }
            for x in inv[k].iter_mut() {
                *x = -*x;
            }
        }
        basis.push((0..r).map(|i| u[i][k]).collect());
    }
    KernelBasis {
        basis,
        pivot,
        inverse: inv,
    }
}

fn identity(r: usize) -> Matrix {
    (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia of a symmetric integer matrix by exact congruence
/// diagonalization over the rationals.
pub fn inertia(gram: &Matrix) -> Inertia {
    type Q = Ratio<i128>;
    let n = gram.len();
    let mut a: Vec<Vec<Q>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let zero = Q::from_integer(0);
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for k in 0..n {
        if a[k][k] == zero {
            if let Some(i) = (k + 1..n).find(|&i| a[i][i] != zero) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| a[k][j] != zero) {
                // a zero diagonal with an off-diagonal entry: add row and
                // column j to k, making the pivot 2·a[k][j]
                for c in 0..n {
                    let v = a[j][c];
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j];
                    a[r][k] += v;
                }
            }
        }
        let p = a[k][k];
        if p == zero {
            out.zero += 1;
            continue;
        }
        if p > zero {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            let f = a[i][k] / p;
            if f == zero {
                continue;
            }
            for c in 0..n {
                let v = a[k][c];
                a[i][c] -= f * v;
            }
            for r in 0..n {
                let v = a[r][k];
                a[r][i] -= f * v;
            }
        }
    }
    out
}

/// True iff every diagonal entry is even.
pub fn is_even(gram: &Matrix) -> bool {
    gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
}
