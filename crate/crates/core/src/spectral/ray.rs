//! Rays from 0 to infinity that avoid a finite spectrum.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spectral::spectrum::Spectrum;

/// Gap widths within this relative distance of the largest count as tied.
const GAP_TIE: f64 = 1e-12;

/// The ray `t -> t e^{i angle}`, `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSpec {
    angle: f64,
}

impl ArcSpec {
    pub fn ray(angle: f64) -> Self {
        ArcSpec {
            angle: angle.rem_euclid(TAU),
        }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.direction() * t
    }

    /// Smallest angular distance between the ray and a nonzero eigenvalue.
    pub fn clearance(&self, spectrum: &Spectrum) -> f64 {
        spectrum
            .iter()
            .filter(|z| z.norm() > 0.0)
            .map(|z| angular_distance(z.arg().rem_euclid(TAU), self.angle))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Ray through the midpoint of the widest angular gap between eigenvalue
/// arguments; ties go to the smallest angle in `[0, 2 pi)`.
pub fn select_ray(spectrum: &Spectrum) -> Result<ArcSpec> {
    let max = spectrum.max_modulus();
    if spectrum.is_empty() || !(spectrum.min_modulus() > 1e-12 * max) {
        return Err(Error::SingularSpectrum);
    }
    let mut args: Vec<f64> = spectrum.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    args.sort_by(f64::total_cmp);

    let mut gaps: Vec<(f64, f64)> = args
        .windows(2)
        .map(|w| (w[1] - w[0], 0.5 * (w[0] + w[1])))
        .collect();
    let first = args[0];
    let last = *args.last().unwrap();
    let wrap = first + TAU - last;
    gaps.push((wrap, (last + 0.5 * wrap).rem_euclid(TAU)));

    let widest = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let angle = gaps
        .iter()
        .filter(|g| g.0 >= widest * (1.0 - GAP_TIE))
        .map(|g| {
            // fold values a hair below 2 pi back to 0
            let a = g.1.rem_euclid(TAU);
            if TAU - a <= GAP_TIE {
                0.0
            } else {
                a
            }
        })
        .fold(f64::INFINITY, f64::min);
    Ok(ArcSpec::ray(angle))
}

/// `true` iff no eigenvalue lies on the closed negative real axis `(-inf, 0]`.
pub fn check_ray_free(spectrum: &Spectrum) -> bool {
    first_on_negative_axis(spectrum).is_none()
}

pub(crate) fn first_on_negative_axis(spectrum: &Spectrum) -> Option<Complex64> {
    spectrum.iter().copied().find(|z| {
        let tol = 1e-12 * (1.0 + z.norm());
        z.im.abs() <= tol && z.re <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(points: &[(f64, f64)]) -> Spectrum {
        Spectrum::new(points.iter().map(|&(r, i)| Complex64::new(r, i)).collect())
    }

    #[test]
    fn positive_reals_give_negative_axis() {
        let ray = select_ray(&spec(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])).unwrap();
        assert!((ray.angle() - PI).abs() < 1e-15);
    }

    #[test]
    fn imaginary_pair_ties_to_zero() {
        let ray = select_ray(&spec(&[(0.0, 1.0), (0.0, -1.0)])).unwrap();
        assert_eq!(ray.angle(), 0.0);
    }

    #[test]
    fn zero_in_spectrum_is_rejected() {
        assert_eq!(
            select_ray(&spec(&[(0.0, 0.0), (1.0, 0.0)])),
            Err(Error::SingularSpectrum)
        );
    }

    #[test]
    fn clearance_is_half_widest_gap() {
        let s = spec(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.1)]);
        let ray = select_ray(&s).unwrap();
        // widest gap from arg(-1 + 0.1i) to 2 pi
        let widest = TAU - Complex64::new(-1.0, 0.1).arg();
        assert!((ray.clearance(&s) - widest / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ray_free_examples() {
        assert!(check_ray_free(&spec(&[(2.0, 0.0), (3.0, 0.0)])));
        assert!(!check_ray_free(&spec(&[(-1.0, 0.0), (1.0, 0.0)])));
        assert!(check_ray_free(&spec(&[(0.0, 1.0), (0.0, -1.0)])));
        assert!(!check_ray_free(&spec(&[(0.0, 0.0)])));
    }
}
