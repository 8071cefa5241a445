use std::f64::consts::PI;

use matlog::acceptance::{random_real, random_unit_square};
use matlog::format::{emit_string, parse_matrix, ParsedMatrix};
use matlog::lu::{determinant, smallest_pivot};
use matlog::oracle::{eigendecomposition_log, polynomial_eigenvalues};
use matlog::spectral::{angular_distance, hausdorff};
use matlog::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    })
}

fn with_norm<T: Scalar>(a: Matrix<T>, norm: f64) -> Matrix<T> {
    let f = a.frobenius_norm();
    if f == 0.0 {
        a
    } else {
        a.scale(norm / f)
    }
}

fn random_orthogonal(rng: &mut impl Rng, n: usize) -> RealMatrix {
    let s = random_real(rng, n).scale(2.0);
    expm(&(&s - &s.transpose())).unwrap()
}

fn invertible_real(rng: &mut impl Rng, n: usize) -> RealMatrix {
    loop {
        let a = random_real(rng, n);
        if smallest_pivot(&a) >= 1e-3 {
            return a;
        }
    }
}

fn positive_det(rng: &mut impl Rng, n: usize) -> RealMatrix {
    let mut m = invertible_real(rng, n);
    if determinant(&m) < 0.0 {
        for j in 0..n {
            m[(0, j)] = -m[(0, j)];
        }
    }
    m
}

fn loose() -> Tolerance {
    Tolerance::default().with_residual(1e-8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn log_series_inverts_expm(seed: u64, n in 1usize..8, r in 0.0f64..0.9) {
        let mut g = rng(seed);
        let x = with_norm(random_complex(&mut g, n), r);
        let f = &ComplexMatrix::identity(n) - &x;
        let l = log_series(&f, &Tolerance::default()).unwrap();
        let e = expm(&l).unwrap();
        prop_assert!(e.distance(&f) <= 1e-8 * f.frobenius_norm().max(1.0));
        prop_assert!(l.commutator_norm(&f) <= 1e-10 * l.frobenius_norm() * f.frobenius_norm() + 1e-300);
    }

    #[test]
    fn expm_inverse_pair(seed: u64, n in 1usize..9, norm in 0.0f64..5.0) {
        let a = with_norm(random_real(&mut rng(seed), n), norm);
        let p = &expm(&a).unwrap() * &expm(&a.scale(-1.0)).unwrap();
        prop_assert!(p.distance(&RealMatrix::identity(n)) <= 1e-10 * (n as f64).sqrt());
    }

    #[test]
    fn jacobi_trace_formula(seed: u64, n in 1usize..9, norm in 0.0f64..3.0) {
        let a = with_norm(random_real(&mut rng(seed), n), norm);
        let expected = a.trace().exp();
        prop_assert!((determinant(&expm(&a).unwrap()) - expected).abs() <= 1e-8 * expected);
    }

    #[test]
    fn similarity_invariance(seed: u64, n in 1usize..8) {
        let mut g = rng(seed);
        let m = random_real(&mut g, n);
        let q = random_orthogonal(&mut g, n);
        let conj = &(&q.transpose() * &m) * &q;
        let d = hausdorff(
            real_sym_spectrum(&m).unwrap().eigenvalues(),
            real_sym_spectrum(&conj).unwrap().eigenvalues(),
        );
        prop_assert!(d <= 1e-8 * m.frobenius_norm());
    }

    #[test]
    fn real_spectrum_conjugate_closed(seed: u64, n in 1usize..9) {
        let s = real_sym_spectrum(&random_real(&mut rng(seed), n)).unwrap();
        let conj = s.conjugate();
        prop_assert_eq!(conj.eigenvalues(), s.eigenvalues());
    }

    #[test]
    fn ray_clears_half_widest_gap(seed: u64, n in 1usize..9) {
        let s = eigenvalues(&random_complex(&mut rng(seed), n)).unwrap();
        let ray = select_ray(&s).unwrap();
        let mut args: Vec<f64> = s.iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect();
        args.sort_by(f64::total_cmp);
        let widest = (0..args.len())
            .map(|i| {
                let next = if i + 1 < args.len() { args[i + 1] } else { args[0] + 2.0 * PI };
                next - args[i]
            })
            .fold(0.0, f64::max);
        let clearance = args
            .iter()
            .map(|&a| angular_distance(a, ray.angle()))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(clearance >= widest / 2.0 - 1e-12);
    }

    #[test]
    fn weak_schur_certificate(seed: u64, n in 1usize..9) {
        let m = random_real(&mut rng(seed), n);
        let w = weak_schur(&m).unwrap();
        prop_assert!(w.orthogonality_error() <= 1e-10);
        prop_assert!(w.similarity_error(&m) <= 1e-8 * m.frobenius_norm());
        for j in 0..w.k {
            for i in j + 1..n {
                prop_assert!(w.t[(i, j)].abs() <= 1e-12 * m.frobenius_norm());
            }
        }
        let reals = w.real_eigenvalues();
        prop_assert!(reals.windows(2).all(|p| !(p[0] >= 0.0 && p[1] < 0.0)));
    }

    #[test]
    fn eigenvalues_match_polynomial_oracle(seed: u64, n in 1usize..6, complex: bool) {
        let mut g = rng(seed);
        let a = if complex { random_complex(&mut g, n) } else { random_real(&mut g, n).to_complex() };
        let d = hausdorff(eigenvalues(&a).unwrap().eigenvalues(), &polynomial_eigenvalues(&a));
        prop_assert!(d <= 1e-7 * a.frobenius_norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complex_log_certificate(seed: u64, n in 1usize..13) {
        let a = random_unit_square(&mut rng(seed), n);
        prop_assume!(smallest_pivot(&a) >= 1e-3);
        let tol = loose();
        let r = complex_path_log(&a, &tol).unwrap();
        prop_assert!(expm(&r.log).unwrap().distance(&a) <= 1e-8 * a.frobenius_norm().max(1.0));
        prop_assert!(r.log.commutator_norm(&a) <= 1e-8 * a.frobenius_norm() * r.log.frobenius_norm() + 1e-300);
        prop_assert!(r.trace.steps.iter().all(|s| s.contraction <= tol.contraction_target));
        prop_assert!(r.trace.steps.windows(2).all(|w| w[1].t < w[0].t));
        prop_assert_eq!(r.trace.steps.last().unwrap().t, 0.0);
    }

    #[test]
    fn oracle_log_also_certifies(seed: u64, n in 1usize..6) {
        let a = random_complex(&mut rng(seed), n);
        let lambdas = polynomial_eigenvalues(&a);
        let sep = lambdas
            .iter()
            .enumerate()
            .flat_map(|(i, x)| lambdas[i + 1..].iter().map(move |y| (x - y).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(sep >= 1e-3 * a.frobenius_norm());
        prop_assume!(lambdas.iter().all(|l| l.norm() >= 1e-3));
        let scale = a.frobenius_norm().max(1.0);
        let ours = complex_path_log(&a, &loose()).unwrap();
        prop_assert!(ours.residual <= 1e-8);
        let theirs = eigendecomposition_log(&a).unwrap();
        prop_assert!(expm(&theirs).unwrap().distance(&a) / scale <= 1e-8);
    }

    #[test]
    fn real_ray_log_positive_window(seed: u64, n in 1usize..7) {
        let mut g = rng(seed);
        let a = with_norm(random_real(&mut g, n), 0.9).add_diag(1.0);
        let r = real_ray_log(&a, &loose()).unwrap();
        prop_assert!(expm(&r.log).unwrap().distance(&a) <= 1e-8 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn two_exp_factor_certificate(seed: u64, n in 1usize..11) {
        let m = positive_det(&mut rng(seed), n);
        let f = two_exp_factor(&m, &loose()).unwrap();
        prop_assert_eq!(f.prefix, Prefix::Identity);
        prop_assert_eq!(f.k_negative % 2, 0);
        let p = &expm(&f.b1).unwrap() * &expm(&f.b2).unwrap();
        prop_assert!(p.distance(&m) <= 1e-8 * m.frobenius_norm());
        prop_assert!(f.component_path_invertible(11).unwrap());

        let inner = &expm(&f.sign_log).unwrap() * &expm(&f.core_log).unwrap();
        let conj = &(&f.q * &inner) * &f.q.transpose();
        prop_assert!(conj.distance(&p) <= 1e-9 * p.frobenius_norm());
    }

    #[test]
    fn negative_det_factor_certificate(seed: u64, n in 1usize..9) {
        let mut m = positive_det(&mut rng(seed), n);
        for j in 0..n {
            m[(0, j)] = -m[(0, j)];
        }
        let f = factor(&m, &loose()).unwrap();
        prop_assert_eq!(f.prefix, Prefix::ITilde);
        prop_assert!(f.reconstruct().unwrap().distance(&m) <= 1e-8 * m.frobenius_norm());
        prop_assert!(f.component_path_invertible(11).unwrap());
        prop_assert_eq!(classify_component(&m).unwrap(), Component::GMinus);
    }

    #[test]
    fn doubled_block_identities(seed: u64, n in 1usize..7) {
        let a = invertible_real(&mut rng(seed), n);
        let d = doubled_block_log(&a, &loose()).unwrap();
        let target = RealMatrix::block_diag(&a, &a);
        prop_assert!(expm(&d.result.log).unwrap().distance(&target) <= 1e-8 * target.frobenius_norm());
        let s = d.c.frobenius_norm() + d.d.frobenius_norm();
        prop_assert!(d.anticommutator_error() <= 1e-10 * s * s);
        prop_assert!(d.square_error(&a) <= 1e-8 * a.frobenius_norm());
    }

    #[test]
    fn format_round_trip(seed: u64, n in 1usize..6, bits in proptest::collection::vec(any::<u64>(), 50)) {
        let finite = |i: usize| {
            let x = f64::from_bits(bits[i % bits.len()]);
            if x.is_finite() { x } else { seed as f64 }
        };
        let real = RealMatrix::from_fn(n, |i, j| finite(i * n + j));
        prop_assert_eq!(parse_matrix(emit_string(&real).as_bytes()).unwrap(), ParsedMatrix::Real(real.clone()));
        let complex = ComplexMatrix::from_fn(n, |i, j| Complex64::new(finite(i * n + j), finite(i * n + j + 25)));
        let back = parse_matrix(emit_string(&complex).as_bytes()).unwrap();
        match back {
            ParsedMatrix::Complex(c) => {
                for (a, b) in c.as_slice().iter().zip(complex.as_slice()) {
                    prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                    prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
                }
            }
            ParsedMatrix::Real(_) => prop_assert!(false, "field changed"),
        }
    }
}

#[test]
fn sign_matrix_log_all_even_k() {
    for n in 1..=8 {
        for k in (0..=n).step_by(2) {
            let p = SignMatrix::new(k, n).unwrap();
            let e = expm(&sign_matrix_log(&p).unwrap()).unwrap();
            assert!((&e - &p.to_matrix()).max_abs() <= 1e-12, "k={k} n={n}");
        }
    }
}

#[test]
fn real_outputs_are_real_typed() {
    fn is_real(_: &RealMatrix) {}
    let a = RealMatrix::from_diag(&[2.0, 3.0]);
    is_real(&real_ray_log(&a, &Tolerance::default()).unwrap().log);
    is_real(&real_square_log(&a, &Tolerance::default()).unwrap().log);
    is_real(&expm(&a).unwrap());
}
