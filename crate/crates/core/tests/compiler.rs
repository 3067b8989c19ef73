use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use varq::circuit::QCircuit;
use varq::compiler::*;
use varq::expr::Assignment;
use varq::random::{random_assignment, random_circuit, CircuitShape, FULL_POOL};
use varq::simulator::unitary;

fn max_diff(a: &QCircuit, b: &QCircuit, vars: &Assignment, n: usize) -> f64 {
    let ua = unitary(a, vars, n).unwrap();
    let ub = unitary(b, vars, n).unwrap();
    (ua - ub).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn sample(seed: u64) -> (QCircuit, Assignment, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1 + (seed % 5) as usize;
    let shape = CircuitShape { n_qubits: n, n_variables: 3, n_gates: 6, max_extra_controls: 2 };
    let u = random_circuit(&mut rng, shape, FULL_POOL);
    let vars = random_assignment(&mut rng, u.extract_variables());
    (u, vars, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn passes_preserve_unitaries(seed in any::<u64>()) {
        let (u, vars, n) = sample(seed);
        let passes: [fn(&QCircuit) -> Result<QCircuit, CompileError>; 5] = [
            compile_generalized_rotation,
            compile_power,
            compile_controlled_rotation,
            compile_exp_pauli,
            compile_multi_control,
        ];
        for pass in passes {
            prop_assert!(max_diff(&u, &pass(&u).unwrap(), &vars, n) < 1e-10);
        }
        for cfg in [CompilerConfig::gradient(), CompilerConfig::all()] {
            let c = compile(&u, &cfg).unwrap();
            prop_assert!(max_diff(&u, &c, &vars, n) < 1e-10);
            prop_assert_eq!(compile(&c, &cfg).unwrap(), c);
        }
    }

    #[test]
    fn gradient_pipeline_is_shift_compatible(seed in any::<u64>()) {
        let (u, _, _) = sample(seed);
        let c = compile(&u, &CompilerConfig::gradient()).unwrap();
        prop_assert!(c.gates().iter().all(is_shift_compatible));
    }

    #[test]
    fn full_pipeline_leaves_one_and_two_qubit_gates(seed in any::<u64>()) {
        let (u, _, _) = sample(seed);
        let c = compile(&u, &CompilerConfig::all()).unwrap();
        for g in c.gates() {
            prop_assert!(g.arity() <= 2, "{:?}", g);
        }
    }
}
