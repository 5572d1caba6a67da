//! Dense complex linear algebra used throughout the crate.
//!
//! Everything is built on `faer` matrices of `c64`. Matrix products are
//! always issued single-threaded so that results are bit-reproducible;
//! parallelism lives one level up (see [`crate::par`]).

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{Accum, Mat, MatRef, Par};

use crate::error::{Error, Result};

pub use faer::c64;

/// Dense complex matrix.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

#[inline]
pub fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

pub fn mul(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let mut out = CMat::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, ONE, Par::Seq);
    out
}

/// `a * b` accumulated into `dst` with scale `alpha`.
pub fn mul_add(dst: &mut CMat, a: MatRef<'_, c64>, b: MatRef<'_, c64>, alpha: c64) {
    matmul(dst.as_mut(), Accum::Add, a, b, alpha, Par::Seq);
}

/// `[x, y] = xy - yx`.
pub fn commutator(x: MatRef<'_, c64>, y: MatRef<'_, c64>) -> CMat {
    let mut out = mul(x, y);
    mul_add(&mut out, y, x, re(-1.0));
    out
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(values: &[c64]) -> CMat {
    let n = values.len();
    CMat::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
}

pub fn real_diag(values: &[f64]) -> CMat {
    let n = values.len();
    CMat::from_fn(n, n, |i, j| if i == j { re(values[i]) } else { ZERO })
}

/// Linear combination `sum_k w_k M_k` of equally sized matrices.
pub fn combine(terms: &[(c64, MatRef<'_, c64>)]) -> CMat {
    let (n, m) = (terms[0].1.nrows(), terms[0].1.ncols());
    CMat::from_fn(n, m, |i, j| {
        terms
            .iter()
            .fold(ZERO, |acc, (w, mat)| acc + *w * mat[(i, j)])
    })
}

pub fn scale(a: MatRef<'_, c64>, s: c64) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| s * a[(i, j)])
}

pub fn sub(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)])
}

pub fn adjoint(a: MatRef<'_, c64>) -> CMat {
    CMat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn transpose(a: MatRef<'_, c64>) -> CMat {
    CMat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)])
}

/// Maximum absolute column sum.
pub fn norm_one(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn frobenius(a: MatRef<'_, c64>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

pub fn max_abs(a: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn all_finite(a: MatRef<'_, c64>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].re.is_finite() && a[(i, j)].im.is_finite()))
}

pub fn inverse(a: MatRef<'_, c64>) -> Result<CMat> {
    let inv = a.partial_piv_lu().inverse();
    if !all_finite(inv.as_ref()) {
        return Err(Error::numerical("matrix is singular to working precision"));
    }
    Ok(inv)
}

/// Solve `a x = b` by LU with partial pivoting.
pub fn solve(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    a.partial_piv_lu().solve(b)
}

pub fn mat_vec(a: MatRef<'_, c64>, v: &[c64]) -> Vec<c64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).fold(ZERO, |acc, j| acc + a[(i, j)] * v[j]))
        .collect()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let (p, q) = (b.nrows(), b.ncols());
    CMat::from_fn(a.nrows() * p, a.ncols() * q, |i, j| {
        a[(i / p, j / q)] * b[(i % p, j % q)]
    })
}

// Padé coefficients and switching thresholds for scaling and squaring
// (Higham 2005, Table 2.3).
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
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
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a norm-selected Padé
/// degree. Errors if the result is not finite.
pub fn expm(a: MatRef<'_, c64>) -> Result<CMat> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::validation("expm needs a square matrix"));
    }
    if !all_finite(a) {
        return Err(Error::numerical("expm input contains non-finite entries"));
    }
    let norm = norm_one(a);
    for &(m, theta) in THETA.iter() {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let out = pade_low(a, coeffs);
            return finite_or_err(out);
        }
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = scale(a, re(0.5f64.powi(s)));
    let mut out = pade13(scaled.as_ref());
    for _ in 0..s {
        out = mul(out.as_ref(), out.as_ref());
    }
    finite_or_err(out)
}

fn finite_or_err(m: CMat) -> Result<CMat> {
    if all_finite(m.as_ref()) {
        Ok(m)
    } else {
        Err(Error::numerical("matrix exponential overflowed"))
    }
}

fn pade_low(a: MatRef<'_, c64>, b: &[f64]) -> CMat {
    let n = a.nrows();
    let a2 = mul(a, a);
    let mut powers = vec![identity(n), a2.clone()];
    while powers.len() * 2 < b.len() {
        let next = mul(powers.last().unwrap().as_ref(), a2.as_ref());
        powers.push(next);
    }
    let mut odd = CMat::zeros(n, n);
    let mut even = CMat::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        let (be, bo) = (b[2 * k], b[2 * k + 1]);
        for j in 0..n {
            for i in 0..n {
                even[(i, j)] += re(be) * p[(i, j)];
                odd[(i, j)] += re(bo) * p[(i, j)];
            }
        }
    }
    let u = mul(a, odd.as_ref());
    pade_solve(u, even)
}

fn pade13(a: MatRef<'_, c64>) -> CMat {
    let n = a.nrows();
    let b = &PADE13;
    let a2 = mul(a, a);
    let a4 = mul(a2.as_ref(), a2.as_ref());
    let a6 = mul(a4.as_ref(), a2.as_ref());
    let id = identity(n);
    let inner_u = combine(&[
        (re(b[13]), a6.as_ref()),
        (re(b[11]), a4.as_ref()),
        (re(b[9]), a2.as_ref()),
    ]);
    let mut tail_u = combine(&[
        (re(b[7]), a6.as_ref()),
        (re(b[5]), a4.as_ref()),
        (re(b[3]), a2.as_ref()),
        (re(b[1]), id.as_ref()),
    ]);
    mul_add(&mut tail_u, a6.as_ref(), inner_u.as_ref(), ONE);
    let u = mul(a, tail_u.as_ref());
    let inner_v = combine(&[
        (re(b[12]), a6.as_ref()),
        (re(b[10]), a4.as_ref()),
        (re(b[8]), a2.as_ref()),
    ]);
    let mut v = combine(&[
        (re(b[6]), a6.as_ref()),
        (re(b[4]), a4.as_ref()),
        (re(b[2]), a2.as_ref()),
        (re(b[0]), id.as_ref()),
    ]);
    mul_add(&mut v, a6.as_ref(), inner_v.as_ref(), ONE);
    pade_solve(u, v)
}

fn pade_solve(u: CMat, v: CMat) -> CMat {
    let p = CMat::from_fn(u.nrows(), u.ncols(), |i, j| v[(i, j)] + u[(i, j)]);
    let q = CMat::from_fn(u.nrows(), u.ncols(), |i, j| v[(i, j)] - u[(i, j)]);
    solve(q.as_ref(), p.as_ref())
}

/// General complex eigendecomposition `a = V diag(λ) V⁻¹`.
pub fn eigen_general(a: MatRef<'_, c64>) -> Result<(Vec<c64>, CMat)> {
    if !all_finite(a) {
        return Err(Error::numerical("eigensolver input contains non-finite entries"));
    }
    let e = a
        .eigen()
        .map_err(|e| Error::numerical(format!("eigensolver did not converge: {e:?}")))?;
    let values: Vec<c64> = (0..a.nrows()).map(|i| e.S().column_vector()[i]).collect();
    Ok((values, e.U().to_owned()))
}

/// Eigendecomposition of a Hermitian matrix (lower triangle is read).
pub fn eigen_hermitian(a: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    if !all_finite(a) {
        return Err(Error::numerical("eigensolver input contains non-finite entries"));
    }
    let e = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::numerical(format!("hermitian eigensolver did not converge: {e:?}")))?;
    let values: Vec<f64> = (0..a.nrows()).map(|i| e.S().column_vector()[i].re).collect();
    Ok((values, e.U().to_owned()))
}

/// One-norm condition number `‖V‖₁‖V⁻¹‖₁`; infinite when `V` is singular.
pub fn condition_number(v: MatRef<'_, c64>) -> f64 {
    match inverse(v) {
        Ok(inv) => norm_one(v) * norm_one(inv.as_ref()),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(n: usize, seed: u64, scale_by: f64) -> CMat {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        CMat::from_fn(n, n, |_, _| c64::new(next() * scale_by, next() * scale_by))
    }

    fn taylor_exp(a: MatRef<'_, c64>, terms: usize) -> CMat {
        let n = a.nrows();
        let mut out = identity(n);
        let mut term = identity(n);
        for k in 1..terms {
            term = scale(mul(term.as_ref(), a).as_ref(), re(1.0 / k as f64));
            out = sub(out.as_ref(), scale(term.as_ref(), re(-1.0)).as_ref());
        }
        out
    }

    #[test]
    fn expm_matches_taylor_across_pade_degrees() {
        for (k, s) in [0.005, 0.05, 0.3, 1.0, 3.0].iter().enumerate() {
            let a = random_matrix(6, 11 + k as u64, *s);
            let e = expm(a.as_ref()).unwrap();
            let t = taylor_exp(a.as_ref(), 60);
            let err = max_abs(sub(e.as_ref(), t.as_ref()).as_ref());
            assert!(err < 1e-13 * max_abs(t.as_ref()).max(1.0), "scale {s}: {err}");
        }
    }

    #[test]
    fn expm_scaling_and_squaring_on_large_norm() {
        // exp(iθ σ_y) is a rotation with known entries.
        let theta = 40.0;
        let a = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => re(theta),
            (1, 0) => re(-theta),
            _ => ZERO,
        });
        let e = expm(a.as_ref()).unwrap();
        assert!((e[(0, 0)] - re(theta.cos())).norm() < 1e-11);
        assert!((e[(0, 1)] - re(theta.sin())).norm() < 1e-11);
    }

    #[test]
    fn expm_of_diagonal_is_pointwise() {
        let d = [c64::new(0.3, -1.0), c64::new(-2.0, 0.5), c64::new(7.0, 3.0)];
        let e = expm(diag(&d).as_ref()).unwrap();
        for (i, z) in d.iter().enumerate() {
            assert!((e[(i, i)] - z.exp()).norm() < 1e-12 * z.exp().norm());
        }
    }

    #[test]
    fn expm_overflow_is_reported() {
        let a = real_diag(&[1.0e4, 0.0]);
        assert!(matches!(expm(a.as_ref()), Err(Error::Numerical(_))));
    }

    #[test]
    fn commutator_of_self_is_exactly_zero() {
        let a = random_matrix(5, 3, 1.0);
        let c = commutator(a.as_ref(), a.as_ref());
        assert_eq!(max_abs(c.as_ref()), 0.0);
    }

    #[test]
    fn general_eigen_residual() {
        let a = random_matrix(6, 99, 2.0);
        let (vals, vecs) = eigen_general(a.as_ref()).unwrap();
        for (k, lam) in vals.iter().enumerate() {
            let v: Vec<c64> = (0..6).map(|i| vecs[(i, k)]).collect();
            let av = mat_vec(a.as_ref(), &v);
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (*x - *lam * *y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let nv: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            assert!(res / nv < 1e-10);
        }
    }

    #[test]
    fn kron_dimensions_and_entries() {
        let a = real_diag(&[1.0, 2.0]);
        let b = CMat::from_fn(2, 2, |i, j| re((i * 2 + j) as f64));
        let k = kron(a.as_ref(), b.as_ref());
        assert_eq!(k.nrows(), 4);
        assert_eq!(k[(3, 2)], re(4.0));
        assert_eq!(k[(1, 2)], ZERO);
    }
}
