//! Property tests for the gated memory trace.

use field_core::{Gate, Grid, MemoryTrace, Shape, DT_MS};
use proptest::prelude::*;

proptest! {
    // v stays in [0,1] under arbitrary gate/output sequences with f in [0,1].
    #[test]
    fn trace_stays_bounded(
        seq in prop::collection::vec((0.0f64..=1.0, prop::bool::ANY), 1..400),
        v0 in 0.0f64..=1.0,
        tau_plus in 50.0f64..5000.0,
        tau_minus in 50.0f64..5000.0,
    ) {
        let mut trace = MemoryTrace::new(Shape::Scalar, tau_plus, tau_minus);
        trace.values_mut().set(0, v0);
        for (f, gate_open) in seq {
            let gate = if gate_open { 1.0 } else { 0.0 };
            trace.step(&Grid::scalar(f), Gate::Scalar(gate), DT_MS).unwrap();
            let v = trace.values().value();
            prop_assert!((0.0..=1.0).contains(&v), "v = {} escaped [0,1]", v);
        }
    }

    // With the gate closed the trace is bit-identical across steps.
    #[test]
    fn closed_gate_is_idempotent(
        f in 0.0f64..=1.0,
        v0 in 0.0f64..=1.0,
    ) {
        let mut trace = MemoryTrace::new(Shape::Scalar, 1000.0, 1000.0);
        trace.values_mut().set(0, v0);
        let before = trace.values().value().to_bits();
        for _ in 0..50 {
            trace.step(&Grid::scalar(f), Gate::Scalar(0.0), DT_MS).unwrap();
        }
        prop_assert_eq!(trace.values().value().to_bits(), before);
    }
}
