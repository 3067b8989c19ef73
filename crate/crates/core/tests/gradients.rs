use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use varq::expr::{Assignment, Variable};
use varq::objective::{grad, make_expectation, numerical_gradient, Objective};
use varq::random::{random_assignment, random_circuit, random_hamiltonian, CircuitShape, GRADIENT_POOL};

fn shifted(vars: &Assignment, v: &Variable, d: f64) -> Assignment {
    let mut out = vars.clone();
    out.insert(v.clone(), vars.get(v).unwrap() + d);
    out
}

fn central(o: &Objective, vars: &Assignment, v: &Variable, step: f64) -> f64 {
    (o.evaluate(&shifted(vars, v, step)).unwrap() - o.evaluate(&shifted(vars, v, -step)).unwrap()) / (2.0 * step)
}

fn random_objective(seed: u64, max_extra_controls: usize) -> (Objective, Assignment) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_qubits = 1 + (seed % 4) as usize;
    let shape = CircuitShape { n_qubits, n_variables: 1 + (seed % 5) as usize, n_gates: 6, max_extra_controls };
    let u = random_circuit(&mut rng, shape, GRADIENT_POOL);
    let h = random_hamiltonian(&mut rng, n_qubits, 5);
    let vars = random_assignment(&mut rng, u.extract_variables());
    (make_expectation(&u, &h, false).unwrap(), vars)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_rule_matches_finite_differences(seed in any::<u64>()) {
        let (o, vars) = random_objective(seed, 0);
        for v in vars.variables() {
            let g = grad(&o, v).unwrap().evaluate(&vars).unwrap();
            prop_assert!((g - central(&o, &vars, v, 1e-6)).abs() < 1e-5);
        }
    }

    #[test]
    fn shift_rule_through_extra_controls(seed in any::<u64>()) {
        let (o, vars) = random_objective(seed, 1);
        for v in vars.variables() {
            let g = grad(&o, v).unwrap().evaluate(&vars).unwrap();
            prop_assert!((g - central(&o, &vars, v, 1e-6)).abs() < 1e-5);
        }
    }

    #[test]
    fn transformed_objective_gradient(seed in any::<u64>()) {
        let (e, vars) = random_objective(seed, 0);
        let o = (e.clone() * 1.3).exp() + e.square();
        for v in vars.variables() {
            let g = grad(&o, v).unwrap().evaluate(&vars).unwrap();
            prop_assert!((g - central(&o, &vars, v, 1e-6)).abs() < 1e-5);
        }
    }

    #[test]
    fn numerical_gradient_agrees_with_analytic(seed in any::<u64>()) {
        let (o, vars) = random_objective(seed, 0);
        for v in vars.variables() {
            let a = grad(&o, v).unwrap().evaluate(&vars).unwrap();
            let n = numerical_gradient(&o, v, 1e-4).evaluate(&vars).unwrap();
            prop_assert!((a - n).abs() < 2e-4);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn second_derivatives(seed in any::<u64>()) {
        let (o, vars) = random_objective(seed, 0);
        let first = vars.variables().next().cloned();
        if let Some(v) = first.as_ref() {
            let g2 = grad(&grad(&o, v).unwrap(), v).unwrap().evaluate(&vars).unwrap();
            let h = 1e-4;
            let fd = (o.evaluate(&shifted(&vars, v, h)).unwrap() - 2.0 * o.evaluate(&vars).unwrap()
                + o.evaluate(&shifted(&vars, v, -h)).unwrap()) / (h * h);
            prop_assert!((g2 - fd).abs() < 1e-4, "{} vs {}", g2, fd);
        }
    }
}
