//! Dense complex matrix exponential.
//!
//! The input is first split into the connected components of its sparsity
//! graph (indices `i` and `j` are linked when `M[i][j]` or `M[j][i]` is
//! nonzero). `exp(M)` is block diagonal in that permuted basis, so each block
//! is exponentiated on its own with scaling-and-squaring and a degree-13
//! Padé approximant (Higham 2005). Number-conserving generators such as the
//! two-mode squeezing generator fall apart into many small blocks.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockMatrix;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// `exp(M)` for a square operator.
pub fn matrix_exponential(m: &FockMatrix) -> Result<FockMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let out = expm_dense(m.data())?;
    FockMatrix::from_array(out, m.cutoff(), m.mode_count())
}

/// `exp(A)` for a raw square matrix.
pub fn expm_dense(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut out = Array2::zeros((rows, rows));
    for block in connected_blocks(a) {
        let k = block.len();
        let sub = Array2::from_shape_fn((k, k), |(i, j)| a[[block[i], block[j]]]);
        let sub_exp = expm_block(&sub);
        for (i, &bi) in block.iter().enumerate() {
            for (j, &bj) in block.iter().enumerate() {
                out[[bi, bj]] = sub_exp[[i, j]];
            }
        }
    }
    Ok(out)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Index sets of the connected components, each sorted ascending.
fn connected_blocks(a: &Array2<Complex64>) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for ((i, j), z) in a.indexed_iter() {
        if i != j && (z.re != 0.0 || z.im != 0.0) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn expm_block(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    if n == 1 {
        return Array2::from_elem((1, 1), a[[0, 0]].exp());
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(2f64.powi(-squarings), 0.0);

    let b = PADE13;
    let ident: Array2<Complex64> = Array2::eye(n);
    let a2 = scaled.dot(&scaled);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let r = |x: f64| Complex64::new(x, 0.0);

    let u_inner = &a6 * r(b[13]) + &a4 * r(b[11]) + &a2 * r(b[9]);
    let u_poly =
        a6.dot(&u_inner) + &a6 * r(b[7]) + &a4 * r(b[5]) + &a2 * r(b[3]) + &ident * r(b[1]);
    let u = scaled.dot(&u_poly);
    let v_inner = &a6 * r(b[12]) + &a4 * r(b[10]) + &a2 * r(b[8]);
    let v = a6.dot(&v_inner) + &a6 * r(b[6]) + &a4 * r(b[4]) + &a2 * r(b[2]) + &ident * r(b[0]);

    let mut result = solve(&(&v - &u), &(&v + &u));
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Solves `P X = Q` by Gaussian elimination with partial pivoting.
fn solve(p: &Array2<Complex64>, q: &Array2<Complex64>) -> Array2<Complex64> {
    let n = p.nrows();
    let mut lhs = p.clone();
    let mut rhs = q.clone();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lhs[[i, col]].norm().total_cmp(&lhs[[j, col]].norm()))
            .unwrap_or(col);
        if pivot != col {
            for k in 0..n {
                lhs.swap([col, k], [pivot, k]);
                rhs.swap([col, k], [pivot, k]);
            }
        }
        let diag = lhs[[col, col]];
        for row in col + 1..n {
            let factor = lhs[[row, col]] / diag;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for k in col..n {
                let t = lhs[[col, k]];
                lhs[[row, k]] -= factor * t;
            }
            for k in 0..n {
                let t = rhs[[col, k]];
                rhs[[row, k]] -= factor * t;
            }
        }
    }
    for col in (0..n).rev() {
        let diag = lhs[[col, col]];
        for k in 0..n {
            let mut acc = rhs[[col, k]];
            for j in col + 1..n {
                acc -= lhs[[col, j]] * rhs[[j, k]];
            }
            rhs[[col, k]] = acc / diag;
        }
    }
    rhs
}
