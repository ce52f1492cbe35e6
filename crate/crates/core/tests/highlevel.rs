use adtrap::highlevel::*;
use adtrap::Dual;

const INV_TWO_SQRT2: f64 = 0.353_553_390_593_273_73;

#[test]
fn implicit_heron_derivative_is_independent_of_the_guess() {
    for k in 0..=19 {
        let x0 = 0.5 + 9.5 * k as f64 / 19.0;
        let problem = FixedPointProblem::new(HeronMap, x0, 1e-6, 1e-6, DEFAULT_MAX_ITERS).unwrap();
        let sol = fixed_point_implicit(&problem, 2.0).unwrap();
        assert!((sol.dx_dtheta - INV_TWO_SQRT2).abs() < 1e-6, "x0 = {x0}: {}", sol.dx_dtheta);
        assert!((sol.x_star - 2f64.sqrt()).abs() < 1e-6);
    }
}

#[test]
fn unrolled_heron_from_one() {
    // Iterates from x0 = 1: 1.5, 1.41667, 1.414216 (x^2 - 2 = 6e-6), 1.4142136.
    let (x, iters) = heron_sqrt_lowlevel(Dual::variable(2.0), Dual::constant(1.0), 1e-6, DEFAULT_MAX_ITERS).unwrap();
    assert_eq!(iters, 4);
    assert!((x.value - 2f64.sqrt()).abs() < 1e-6);
    let err = (x.tangent - INV_TWO_SQRT2).abs();
    assert!(err > 0.0 && err < 1e-3, "derivative error {err}");
}

#[test]
fn unrolled_heron_from_exact_root_has_zero_derivative() {
    for a in [0.5, 2.0, 7.0] {
        let (x, iters) = heron_sqrt_lowlevel(Dual::variable(a), Dual::constant(a.sqrt()), 1e-6, 10).unwrap();
        assert_eq!((iters, x.tangent), (0, 0.0));
    }
}

#[test]
fn divergent_fixed_point_is_reported() {
    struct Expand;
    impl FixedPointMap for Expand {
        fn apply<S: adtrap::Scalar>(&self, x: S, t: S) -> S {
            x * 2.0 + t
        }
    }
    let problem = FixedPointProblem::new(Expand, 1.0, 1e-8, 1e-8, 50).unwrap();
    assert!(!fixed_point_implicit(&problem, 1.0).unwrap_err().is_usage());
}

fn solve_fd_oracle(a: &[f64], b: &[f64], w: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let phi = |a: &[f64], b: &[f64]| -> f64 {
        let x = linear_solve(&DenseSystem::new(a.to_vec(), b.to_vec()).unwrap()).unwrap();
        x.iter().zip(w).map(|(p, q)| p * q).sum()
    };
    let mut ga = vec![0.0; a.len()];
    for k in 0..a.len() {
        let (mut p, mut m) = (a.to_vec(), a.to_vec());
        p[k] += h;
        m[k] -= h;
        ga[k] = (phi(&p, b) - phi(&m, b)) / (2.0 * h);
    }
    let mut gb = vec![0.0; b.len()];
    for k in 0..b.len() {
        let (mut p, mut m) = (b.to_vec(), b.to_vec());
        p[k] += h;
        m[k] -= h;
        gb[k] = (phi(a, &p) - phi(a, &m)) / (2.0 * h);
    }
    (ga, gb)
}

#[test]
fn linear_solve_adjoint_matches_fd_oracle() {
    let a = vec![4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.3, -1.0, 5.0];
    let b = vec![1.0, -2.0, 0.5];
    let w = vec![0.7, -0.3, 1.1];
    let sys = DenseSystem::new(a.clone(), b.clone()).unwrap();
    let adj = linear_solve_vjp(&sys, &w).unwrap();
    let (ga, gb) = solve_fd_oracle(&a, &b, &w, 1e-6);
    for (x, y) in adj.a_bar.iter().zip(&ga).chain(adj.b_bar.iter().zip(&gb)) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn dual_solve_agrees_with_jvp_rule() {
    let a = [2.0, 1.0, 1.0, 3.0];
    let b = [1.0, 2.0];
    let a_dot = [0.1, 0.0, -0.2, 0.3];
    let b_dot = [1.0, -1.0];
    let sys = DenseSystem::new(a.to_vec(), b.to_vec()).unwrap();
    let (x, x_dot) = linear_solve_jvp(&sys, &a_dot, &b_dot).unwrap();
    let ad: Vec<Dual> = a.iter().zip(&a_dot).map(|(v, t)| Dual::new(*v, *t)).collect();
    let bd: Vec<Dual> = b.iter().zip(&b_dot).map(|(v, t)| Dual::new(*v, *t)).collect();
    let xd = linear_solve_dual(&ad, &bd).unwrap();
    for i in 0..2 {
        assert_eq!(xd[i].value, x[i]);
        assert_eq!(xd[i].tangent, x_dot[i]);
    }
    // x = (0.2, 0.6) for this system.
    assert!((x[0] - 0.2).abs() < 1e-15 && (x[1] - 0.6).abs() < 1e-15);
}

#[test]
fn singular_matrix_is_rejected() {
    let sys = DenseSystem::new(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 1.0]).unwrap();
    assert!(matches!(linear_solve(&sys), Err(adtrap::Error::Singular { .. })));
}

#[test]
fn lookup_and_polynomial_sine() {
    let table = SineTable::new(4096).unwrap();
    for x in [0.1, 1.0, 2.9, 5.5] {
        let y = sin_lut(Dual::variable(x), &table);
        assert_eq!(y.tangent, 0.0);
        assert!((y.value - f64::sin(x)).abs() <= table.spacing() / 2.0 + 1e-15);
    }
    for degree in SIN_POLY_DEGREES {
        let y = sin_poly(Dual::variable(0.5), degree).unwrap();
        // Derivative of the truncated series is the degree-1 cosine series.
        let mut cos_series = 0.0;
        let mut term = 1.0;
        for k in 0..=(degree as i32 - 1) / 2 {
            if k > 0 {
                term *= -0.25 / ((2 * k - 1) * (2 * k)) as f64;
            }
            cos_series += term;
        }
        assert!((y.tangent - cos_series).abs() < 1e-15, "degree {degree}");
    }
    assert!(sin_poly(4.0, 7).unwrap_err().is_usage());
}

#[test]
fn max_tie_picks_first_operand() {
    let a = Dual::variable(1.0);
    let b = Dual::constant(1.0);
    assert_eq!(vec_max(&[a, b]).unwrap().tangent, 1.0);
    assert_eq!(vec_max(&[b, a]).unwrap().tangent, 0.0);
    assert!(vec_max::<f64>(&[]).is_err());
}
