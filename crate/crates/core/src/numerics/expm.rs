//! Matrix exponential by scaling and squaring around diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use faer::linalg::solvers::Solve;
use faer::Mat;

use super::matrix::{ComplexMatrix, C64};
use crate::error::Result;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
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
const B13: [f64; 14] = [
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

/// `exp(a)` for a square matrix.
pub fn mat_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    let norm = a.one_norm();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }

    for (theta, coeffs) in [
        (THETA_3, &B3[..]),
        (THETA_5, &B5[..]),
        (THETA_7, &B7[..]),
        (THETA_9, &B9[..]),
    ] {
        if norm <= theta {
            return pade_low(a, coeffs);
        }
    }

    let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale_real(0.5f64.powi(squarings));
    let mut x = pade_13(&scaled)?;
    for _ in 0..squarings {
        x = x.matmul(&x)?;
    }
    Ok(x)
}

fn axpy_identity(m: &mut ComplexMatrix, s: f64) {
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] += s;
    }
}

fn lin_comb(terms: &[(f64, &ComplexMatrix)], n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for &(c, m) in terms {
        for (o, v) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
            *o += v * c;
        }
    }
    out
}

/// Degrees 3..9: powers up to `A^{m-1}` computed directly.
fn pade_low(a: &ComplexMatrix, b: &[f64]) -> Result<ComplexMatrix> {
    let n = a.rows();
    let m = b.len() - 1;
    let a2 = a.matmul(a)?;
    // even powers A^0, A^2, A^4, ...
    let mut evens = vec![ComplexMatrix::identity(n), a2.clone()];
    while 2 * evens.len() <= m {
        let next = evens.last().unwrap().matmul(&a2)?;
        evens.push(next);
    }
    let mut u_inner = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (k, p) in evens.iter().enumerate() {
        if 2 * k + 1 <= m {
            u_inner = &u_inner + &p.scale_real(b[2 * k + 1]);
        }
        v = &v + &p.scale_real(b[2 * k]);
    }
    let u = a.matmul(&u_inner)?;
    solve_pade(&u, &v)
}

fn pade_13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let b = &B13;
    let a2 = a.matmul(a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;

    let inner_u = lin_comb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let mut u = a6.matmul(&inner_u)?;
    u += &lin_comb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2)], n);
    axpy_identity(&mut u, b[1]);
    let u = a.matmul(&u)?;

    let inner_v = lin_comb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let mut v = a6.matmul(&inner_v)?;
    v += &lin_comb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2)], n);
    axpy_identity(&mut v, b[0]);

    solve_pade(&u, &v)
}

/// Solves `(V − U) X = V + U`.
fn solve_pade(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = u.rows();
    let q = Mat::<C64>::from_fn(n, n, |i, j| v[(i, j)] - u[(i, j)]);
    let p = Mat::<C64>::from_fn(n, n, |i, j| v[(i, j)] + u[(i, j)]);
    let x = q.partial_piv_lu().solve(&p);
    Ok(ComplexMatrix::from_fn(n, n, |i, j| x[(i, j)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{I, ONE};
    use std::f64::consts::PI;

    fn rel_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.frobenius_distance(b) / b.frobenius_norm()
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_exp(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(4));
    }

    #[test]
    fn exp_of_diagonal() {
        for scale in [1e-3, 0.2, 1.0, 3.0, 20.0] {
            let d: Vec<C64> = [0.3, -1.1, 0.0, 2.0]
                .iter()
                .zip([0.5, 0.0, -2.0, 1.0])
                .map(|(&re, im)| C64::new(re, im) * scale)
                .collect();
            let e = mat_exp(&ComplexMatrix::from_diag(&d)).unwrap();
            let expected = ComplexMatrix::from_diag(&d.iter().map(|z| z.exp()).collect::<Vec<_>>());
            assert!(rel_err(&e, &expected) < 1e-12, "scale {scale}");
        }
    }

    #[test]
    fn exchange_matrix_at_pi_gives_minus_identity() {
        // exp(iθX) = cos θ I + i sin θ X
        let x = ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { C64::new(0.0, 0.0) });
        for theta in [0.3, 1.0, PI, 7.5, 40.0] {
            let e = mat_exp(&x.scale(I * theta)).unwrap();
            let expected = &ComplexMatrix::identity(2).scale_real(theta.cos()) + &x.scale(I * theta.sin());
            assert!(rel_err(&e, &expected) < 1e-12, "theta {theta}");
        }
        let e = mat_exp(&x.scale(I * PI)).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(2).scale_real(-1.0)) < 1e-13);
    }

    #[test]
    fn nilpotent_matrix_has_polynomial_exponential() {
        // exp(N) = I + N + N²/2 for a 3x3 strictly upper triangular N
        let n = ComplexMatrix::from_fn(3, 3, |i, j| if j == i + 1 { C64::new(2.0, 1.0) } else { C64::new(0.0, 0.0) });
        let n2 = n.matmul(&n).unwrap();
        let expected = &(&ComplexMatrix::identity(3) + &n) + &n2.scale_real(0.5);
        for s in [1.0, 10.0] {
            let e = mat_exp(&n.scale_real(s)).unwrap();
            let ns = n.scale_real(s);
            let exp_s = &(&ComplexMatrix::identity(3) + &ns) + &n2.scale_real(0.5 * s * s);
            assert!(rel_err(&e, &exp_s) < 1e-12);
        }
        assert!(rel_err(&mat_exp(&n).unwrap(), &expected) < 1e-13);
    }

    #[test]
    fn rejects_non_square() {
        assert!(mat_exp(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
