mod support;

use lizard_ca::{
    run, step, Boundary, Field, InitSpec, LatticeKind, LatticeSpec, MajorityRule, QuadNeighborhood,
    RunOptions, Stepper, Termination,
};
use proptest::prelude::*;

use support::{cells_with_opposed_neighbors, naive_step};

fn lattice_strategy(periodic_only: bool) -> impl Strategy<Value = LatticeSpec> {
    let boundary = if periodic_only {
        Just(Boundary::Periodic).boxed()
    } else {
        prop_oneof![Just(Boundary::Periodic), Just(Boundary::Clamped)].boxed()
    };
    (0..3u8, boundary, 2usize..13, 1usize..7).prop_map(|(kind, boundary, w, half_h)| {
        let h = 2 * half_h;
        match kind {
            0 => LatticeSpec::hexagonal(w, h, boundary),
            1 => LatticeSpec::quadratic(w, h, boundary, QuadNeighborhood::VonNeumann4),
            _ => LatticeSpec::quadratic(w, h, boundary, QuadNeighborhood::Moore8),
        }
        .unwrap()
    })
}

proptest! {
    #[test]
    fn step_matches_naive_oracle(lat in lattice_strategy(false), k in 2usize..5, seed in any::<u64>()) {
        let f = Field::random(lat, &InitSpec::uniform(k, seed).unwrap());
        let (next, delta) = step(&f, &lat, &MajorityRule).unwrap();
        let expected = naive_step(&f);
        prop_assert_eq!(next.states(), expected.as_slice());
        prop_assert_eq!(delta, f.hamming(&next).unwrap());
        // repeated calls agree
        prop_assert_eq!(step(&f, &lat, &MajorityRule).unwrap().0, next);
    }

    #[test]
    fn binary_relabel_commutes(lat in lattice_strategy(false), seed in any::<u64>(), p1 in 0.0f64..1.0) {
        let f = Field::random(lat, &InitSpec::binary(p1, seed).unwrap());
        let a = step(&f.relabel(&[1, 0]).unwrap(), &lat, &MajorityRule).unwrap().0;
        let b = step(&f, &lat, &MajorityRule).unwrap().0.relabel(&[1, 0]).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn translation_equivariance(
        lat in lattice_strategy(true),
        k in 2usize..5,
        seed in any::<u64>(),
        dc in -20isize..20,
        dr in -20isize..20,
    ) {
        let dr = if lat.kind() == LatticeKind::Hexagonal { dr - dr % 2 } else { dr };
        let f = Field::random(lat, &InitSpec::uniform(k, seed).unwrap());
        let a = step(&f.translated(dc, dr).unwrap(), &lat, &MajorityRule).unwrap().0;
        let b = step(&f, &lat, &MajorityRule).unwrap().0.translated(dc, dr).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn hex_fixed_point_characterization(
        half_w in 2usize..7,
        half_h in 2usize..5,
        p1 in prop_oneof![0.0f64..0.15, 0.85f64..1.0, 0.0f64..1.0],
        seed in any::<u64>(),
        settle in any::<bool>(),
    ) {
        let lat = LatticeSpec::hexagonal(2 * half_w, 2 * half_h, Boundary::Periodic).unwrap();
        let mut f = Field::random(lat, &InitSpec::binary(p1, seed).unwrap());
        if settle {
            f = run(&f, &lat, &MajorityRule, &RunOptions::new(60)).unwrap().final_field;
        }
        let fixed = step(&f, &lat, &MajorityRule).unwrap().1 == 0;
        prop_assert_eq!(fixed, cells_with_opposed_neighbors(&f, 4) == 0);
    }

    #[test]
    fn run_trace_is_consistent(lat in lattice_strategy(false), seed in any::<u64>()) {
        let f = Field::random(lat, &InitSpec::binary(0.5, seed).unwrap());
        let out = run(&f, &lat, &MajorityRule, &RunOptions::new(40).with_all_snapshots()).unwrap();
        let trace = &out.trace;
        for (a, &d) in trace.deltas().iter().enumerate() {
            prop_assert_eq!(out.snapshots[&a].hamming(&out.snapshots[&(a + 1)]).unwrap(), d);
        }
        let mut sum = 0;
        for (d, c) in trace.deltas().iter().zip(trace.cumulative()) {
            sum += d;
            prop_assert_eq!(*c, sum);
        }
        match trace.termination() {
            Termination::FixedPoint { at_action } => {
                prop_assert_eq!(trace.deltas().iter().position(|&d| d == 0), Some(at_action - 1));
                prop_assert_eq!(at_action, trace.actions());
            }
            Termination::Cycle { period, first_detected_at } => {
                prop_assert!(period >= 2);
                prop_assert!(trace.deltas().iter().all(|&d| d > 0));
                // replay from the earlier copy
                let stepper = Stepper::new(lat, &MajorityRule);
                let start = &out.snapshots[&(first_detected_at - period)];
                let mut g = start.clone();
                for i in 1..=period {
                    g = stepper.step(&g).unwrap().0;
                    if i < period {
                        prop_assert_ne!(&g, start, "period {} is not minimal", period);
                    }
                }
                prop_assert_eq!(&g, &out.snapshots[&first_detected_at]);
                prop_assert_eq!(&g, start);
            }
            Termination::BudgetExhausted { max_actions } => {
                prop_assert_eq!(max_actions, 40);
                prop_assert_eq!(trace.actions(), 40);
            }
        }
    }
}

#[test]
fn hex_run_reaches_fixed_point_with_decreasing_changes() {
    let lat = LatticeSpec::hexagonal(100, 100, Boundary::Periodic).unwrap();
    let f = Field::random(lat, &InitSpec::binary(0.5, 42).unwrap());
    let out = run(&f, &lat, &MajorityRule, &RunOptions::new(50)).unwrap();
    assert!(matches!(
        out.trace.termination(),
        Termination::FixedPoint { .. }
    ));
    let d = out.trace.deltas();
    assert!(d[..d.len() - 1].iter().all(|&x| x > 0));
    assert_eq!(d[0], *d.iter().max().unwrap());
}

#[test]
fn clamped_hex_with_odd_rows_runs() {
    let lat = LatticeSpec::hexagonal(9, 7, Boundary::Clamped).unwrap();
    let f = Field::random(lat, &InitSpec::binary(0.5, 3).unwrap());
    let (next, _) = step(&f, &lat, &MajorityRule).unwrap();
    assert_eq!(next.states(), naive_step(&f).as_slice());
}
