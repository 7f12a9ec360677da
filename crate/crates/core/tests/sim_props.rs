use num_complex::Complex64;
use proptest::prelude::*;
use sqsp_core::circuit::{emit_qasm, parse_qasm};
use sqsp_core::sim::{run, run_reversible, SparseVector};
use sqsp_core::{BasisString, Circuit, Gate, McxStrategy, QubitId, Register};

const WIDTH: usize = 6;

fn gate(allow_rotations: bool) -> impl Strategy<Value = Gate> {
    let q = 0..WIDTH;
    let perm = prop_oneof![
        q.clone().prop_map(Gate::x),
        (q.clone(), q.clone()).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Gate::cnot(a, b)),
        (q.clone(), q.clone(), q.clone())
            .prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c)
            .prop_map(|(a, b, c)| Gate::toffoli(a, b, c)),
        proptest::sample::subsequence((0..WIDTH).collect::<Vec<_>>(), 2..WIDTH).prop_map(|mut v| {
            let t = v.pop().unwrap();
            Gate::mcx(v.into_iter().map(QubitId).collect(), t)
        }),
    ];
    if !allow_rotations {
        return perm.boxed();
    }
    prop_oneof![
        perm,
        (q.clone(), -3.2f64..3.2).prop_map(|(t, a)| Gate::ry(a, t)),
        (q.clone(), -3.2f64..3.2).prop_map(|(t, a)| Gate::rz(a, t)),
        (q.clone(), -3.2f64..3.2).prop_map(|(t, a)| Gate::phase(a, t)),
        q.clone().prop_map(Gate::hadamard),
        (q.clone(), q, -3.2f64..3.2, -3.2f64..3.2)
            .prop_filter("distinct", |(a, b, _, _)| a != b)
            .prop_map(|(a, b, t, p)| Gate::givens(t, p, a, b)),
    ]
    .boxed()
}

fn circuit(allow_rotations: bool) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate(allow_rotations), 0..40).prop_map(|gs| {
        let mut c = Circuit::new(WIDTH);
        for g in gs {
            c.append(g).unwrap();
        }
        c
    })
}

proptest! {
    #[test]
    fn circuit_then_inverse_is_identity(c in circuit(true), v in 0u64..(1 << WIDTH)) {
        let init = SparseVector::basis(BasisString::from_uint(v, WIDTH));
        let mid = run(&c, &init).unwrap();
        prop_assert!((mid.norm_sqr() - 1.0).abs() < 1e-9);
        let back = run(&c.inverse(), &mid).unwrap();
        prop_assert_eq!(back.support_len(), 1);
        prop_assert!((back.amplitude(&init.terms()[0].0) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn reversible_run_agrees_with_statevector(c in circuit(false), v in 0u64..(1 << WIDTH)) {
        let input = BasisString::from_uint(v, WIDTH);
        let fast = run_reversible(&c, &input).unwrap();
        let st = run(&c, &SparseVector::basis(input)).unwrap();
        prop_assert_eq!(st.terms(), &[(fast, Complex64::new(1.0, 0.0))]);
    }

    #[test]
    fn qasm_round_trips_decomposed_circuits(c in circuit(true)) {
        let mut c = c;
        c.resize(WIDTH + WIDTH - 2).unwrap();
        c.bind_scratch(Register::new("scratch", WIDTH, WIDTH - 2)).unwrap();
        let low = c.decompose(McxStrategy::Tree).unwrap();
        let text = emit_qasm(&low, false).unwrap();
        let back = parse_qasm(&text).unwrap();
        prop_assert_eq!(back.qubit_count(), low.qubit_count());
        prop_assert_eq!(back.gates(), low.gates());
        prop_assert_eq!(back.labels(), low.labels());
    }
}
