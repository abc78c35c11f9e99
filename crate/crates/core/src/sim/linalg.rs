//! Dense complex LU factorization through LAPACK (zgetrf/zgetrs).

use num_complex::Complex64;

use crate::error::{Error, Result};

extern "C" {
    fn zgetrf_(
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        ipiv: *mut i32,
        info: *mut i32,
    );
    fn zgetrs_(
        trans: *const u8,
        n: *const i32,
        nrhs: *const i32,
        a: *const Complex64,
        lda: *const i32,
        ipiv: *const i32,
        b: *mut Complex64,
        ldb: *const i32,
        info: *mut i32,
    );
    fn openblas_set_num_threads(n: i32);
}

/// Pin the BLAS to one thread; parallelism lives at the sample level.
pub fn set_single_threaded_blas() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| unsafe {
        openblas_set_num_threads(1);
    });
}

/// LU factorization of a dense column-major complex matrix.
pub struct LuFactors {
    a: Vec<Complex64>,
    ipiv: Vec<i32>,
    n: usize,
    /// min |U_ii| / max |U_ii|, a cheap conditioning estimate.
    pub cond_estimate: f64,
}

impl LuFactors {
    /// Factorize in place; `a` is n×n column-major.
    pub fn factorize(mut a: Vec<Complex64>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        set_single_threaded_blas();
        let ni = n as i32;
        let mut ipiv = vec![0i32; n];
        let mut info = 0i32;
        unsafe {
            zgetrf_(&ni, &ni, a.as_mut_ptr(), &ni, ipiv.as_mut_ptr(), &mut info);
        }
        if info != 0 {
            return Err(Error::SingularSystem { cond_estimate: 0.0 });
        }
        let mut umin = f64::INFINITY;
        let mut umax = 0.0f64;
        for i in 0..n {
            let d = a[i * n + i].norm();
            umin = umin.min(d);
            umax = umax.max(d);
        }
        let cond_estimate = if umax > 0.0 { umin / umax } else { 0.0 };
        if cond_estimate < 1e-14 {
            return Err(Error::SingularSystem { cond_estimate });
        }
        Ok(Self {
            a,
            ipiv,
            n,
            cond_estimate,
        })
    }

    /// Solve A·X = B for `nrhs` right-hand sides stored column-major in `b`.
    pub fn solve(&self, b: &mut [Complex64], nrhs: usize) -> Result<()> {
        assert_eq!(b.len(), self.n * nrhs);
        let ni = self.n as i32;
        let nrhsi = nrhs as i32;
        let trans = b'N';
        let mut info = 0i32;
        unsafe {
            zgetrs_(
                &trans,
                &ni,
                &nrhsi,
                self.a.as_ptr(),
                &ni,
                self.ipiv.as_ptr(),
                b.as_mut_ptr(),
                &ni,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::SingularSystem {
                cond_estimate: self.cond_estimate,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_complex_system() {
        // 2x2: [[1+i, 2], [i, 3-i]] x = b
        let a = vec![
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, -1.0),
        ];
        let lu = LuFactors::factorize(a.clone(), 2).unwrap();
        let b = vec![Complex64::new(5.0, 1.0), Complex64::new(4.0, 2.0)];
        let mut x = b.clone();
        lu.solve(&mut x, 1).unwrap();
        // verify residual
        let r0 = a[0] * x[0] + a[2] * x[1] - b[0];
        let r1 = a[1] * x[0] + a[3] * x[1] - b[1];
        assert!(r0.norm() < 1e-12 && r1.norm() < 1e-12);
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ];
        assert!(matches!(
            LuFactors::factorize(a, 2),
            Err(Error::SingularSystem { .. })
        ));
    }
}
