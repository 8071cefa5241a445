//! Householder reduction to Hessenberg form and single-shift complex QR.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative deflation threshold on subdiagonal entries.
const DEFLATION: f64 = 1e-13;

/// Reduces `a` to upper Hessenberg form by unitary similarity.
pub fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    if n <= 2 {
        return h;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase * ||x|| e1 avoids cancellation
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] += phase * norm;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[k + 1..n] {
            *vi /= vnorm;
        }
        // H <- (I - 2 v v*) H
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            s *= 2.0;
            for i in k + 1..n {
                let vi = v[i];
                h[(i, j)] -= vi * s;
            }
        }
        // H <- H (I - 2 v v*)
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                s += h[(i, j)] * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                let vj = v[j].conj();
                h[(i, j)] -= s * vj;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// All eigenvalues of `a` (with multiplicity), unordered.
///
/// Fails with [`Error::NumericalFailure`] after `100 n` QR sweeps without
/// full deflation.
pub fn qr_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    a.check_finite()?;
    let n = a.dim();
    let mut h = hessenberg(a);
    let scale = a.frobenius_norm();
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let max_sweeps = 100 * n;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // locate the top of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(lo, lo - 1)].norm() <= DEFLATION * s || h[(lo, lo - 1)].norm() <= f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(Error::NumericalFailure(format!(
                "QR iteration did not converge in {max_sweeps} sweeps"
            )));
        }

        let mu = if since_deflation % 11 == 10 {
            // exceptional shift breaks symmetric cycles
            h[(hi, hi)] + Complex64::new(0.75, 0.5) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, lo, hi, mu);
    }
    Ok(eig)
}

/// One explicit shifted QR step on the window `lo..=hi`: `H - mu I = QR`, `H <- RQ + mu I`.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if r == 0.0 {
            rotations.push((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
            continue;
        }
        let c = a / r;
        let s = b / r;
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        h[(k + 1, k)] = Complex64::new(0.0, 0.0);
        rotations.push((c, s));
    }
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        let top = (k + 2).min(hi);
        for i in lo..=top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RealMatrix;

    #[test]
    fn hessenberg_preserves_trace_and_norm() {
        let a = RealMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.5).to_complex();
        let h = hessenberg(&a);
        for i in 2..5 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_permutation_converges() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap().to_complex();
        let mut e = qr_eigenvalues(&a).unwrap();
        e.sort_by(|x, y| x.re.total_cmp(&y.re));
        assert!((e[0] + 1.0).norm() < 1e-14);
        assert!((e[1] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn cyclic_permutation_gives_roots_of_unity() {
        let n = 6;
        let a = RealMatrix::from_fn(n, |i, j| if j == (i + 1) % n { 1.0 } else { 0.0 }).to_complex();
        let e = qr_eigenvalues(&a).unwrap();
        for z in &e {
            assert!((z.powu(n as u32) - 1.0).norm() < 1e-12, "{z}");
        }
    }
}
