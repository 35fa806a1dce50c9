//! Dense Gaussian elimination over any [`Coeff`] field.

use crate::coeff::Coeff;

fn pivot_row<C: Coeff>(m: &[Vec<C>], col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (r, row) in m.iter().enumerate().skip(from) {
        if row[col].negligible() {
            continue;
        }
        let mag = row[col].magnitude();
        if best.map_or(true, |(_, b)| mag > b) {
            best = Some((r, mag));
        }
    }
    best.map(|(r, _)| r)
}

/// Reduce `m` in place to row echelon form; returns pivot columns.
pub fn row_echelon<C: Coeff>(m: &mut [Vec<C>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pivot_row(m, c, r) else { continue };
        m.swap(r, p);
        let inv = C::one() / m[r][c].clone();
        for k in c..cols {
            m[r][k] = m[r][k].clone() * inv.clone();
        }
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in c..cols {
                let t = m[r][k].clone() * f.clone();
                m[i][k] = m[i][k].clone() - t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the matrix whose rows are `rows`.
pub fn rank<C: Coeff>(rows: &[Vec<C>]) -> usize {
    let mut m = rows.to_vec();
    row_echelon(&mut m).len()
}

/// Solve the square system `a x = b`; `None` if singular.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let n = a.len();
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = row_echelon(&mut m);
    if piv.len() < n || piv.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    let mut x = vec![C::zero(); n];
    for i in (0..n).rev() {
        let mut s = m[i][n].clone();
        for j in i + 1..n {
            s = s - m[i][j].clone() * x[j].clone();
        }
        x[i] = s;
    }
    Some(x)
}

/// Inverse of a square matrix; `None` if singular.
pub fn inverse<C: Coeff>(a: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<C> = (0..n).map(|i| if i == j { C::one() } else { C::zero() }).collect();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Least squares through the normal equations `AᵀA x = Aᵀb`.
pub fn lstsq_normal<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    let n = a[0].len();
    let mut ata = vec![vec![C::zero(); n]; n];
    let mut atb = vec![C::zero(); n];
    for (row, bi) in a.iter().zip(b) {
        for i in 0..n {
            if row[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !row[j].is_zero() {
                    ata[i][j] = ata[i][j].clone() + row[i].clone() * row[j].clone();
                }
            }
            atb[i] = atb[i].clone() + row[i].clone() * bi.clone();
        }
    }
    solve(&ata, &atb)
}

/// Matrix-vector product.
pub fn mat_vec<C: Coeff>(a: &[Vec<C>], x: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(C::zero(), |s, (r, v)| s + r.clone() * v.clone()))
        .collect()
}

/// Matrix product.
pub fn mat_mul<C: Coeff>(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(C::zero(), |s, (r, bk)| s + r.clone() * bk[j].clone())
                })
                .collect()
        })
        .collect()
}
