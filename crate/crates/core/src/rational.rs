//! Exact rational dense linear algebra on small matrices.
//!
//! Everything here works on `Vec<Vec<BigRational>>`; sizes are at most 8x8,
//! so plain Gaussian elimination without pivoting heuristics is enough.

use num::{BigInt, BigRational, Signed, Zero};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;
pub type RatMat = Vec<Vec<Rat>>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn zeros(rows: usize, cols: usize) -> RatMat {
    vec![vec![Rat::zero(); cols]; rows]
}

pub fn from_int_matrix(m: &[[i64; 6]; 6]) -> RatMat {
    m.iter().map(|row| row.iter().map(|&v| rat_int(v)).collect()).collect()
}

pub fn mat_vec(m: &RatMat, v: &[Rat]) -> RatVec {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn mat_scale(m: &RatMat, s: &Rat) -> RatMat {
    m.iter().map(|row| row.iter().map(|v| v * s).collect()).collect()
}

pub fn mat_add(a: &RatMat, b: &RatMat) -> RatMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RatMat) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &RatMat) -> usize {
    let mut copy = m.clone();
    rref(&mut copy).len()
}

pub fn transpose(m: &RatMat) -> RatMat {
    let (rows, cols) = (m.len(), m[0].len());
    let mut out = zeros(cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            out[j][i] = m[i][j].clone();
        }
    }
    out
}

/// Basis of { v : v M = 0 }, returned as rows.
pub fn left_nullspace(m: &RatMat) -> Vec<RatVec> {
    nullspace(&transpose(m))
}

/// Basis of { v : M v = 0 }, returned as vectors.
pub fn nullspace(m: &RatMat) -> Vec<RatVec> {
    let cols = m[0].len();
    let mut red = m.clone();
    let pivots = rref(&mut red);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::from(BigInt::from(1));
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -red[r][free].clone();
        }
        basis.push(normalize_primitive(v));
    }
    basis
}

/// Scale a rational vector to primitive integer entries with positive leading
/// nonzero coefficient, for reproducible bases.
pub fn normalize_primitive(v: RatVec) -> RatVec {
    use num::Integer;
    let mut denom_lcm = BigInt::from(1);
    for x in &v {
        if !x.is_zero() {
            denom_lcm = denom_lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from(denom_lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return v;
    }
    let sign = ints
        .iter()
        .find(|i| !i.is_zero())
        .map(|i| if i.is_negative() { -1 } else { 1 })
        .unwrap_or(1);
    let g = g * BigInt::from(sign);
    ints.into_iter().map(|i| Rat::from(i / &g)).collect()
}

/// Solve the square system A x = b exactly. `None` if A is singular.
pub fn solve_square(a: &RatMat, b: &[Rat]) -> Option<RatVec> {
    let n = a.len();
    let mut aug: RatMat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

/// Least structure solve of a consistent overdetermined system A x = b;
/// `None` if the system is inconsistent or does not determine x uniquely.
pub fn solve_overdetermined(a: &RatMat, b: &[Rat]) -> Option<RatVec> {
    let n = a[0].len();
    let mut aug: RatMat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None; // inconsistent
    }
    if pivots.len() != n {
        return None; // underdetermined
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}
