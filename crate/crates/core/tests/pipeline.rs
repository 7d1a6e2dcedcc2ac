use uavdp::export::write_sweep;
use uavdp::planner::Waypoint;
use uavdp::scenario::parse_scenario;
use uavdp::{
    evaluate_discrete, evaluate_smooth, generate_network, make_grid, plan, reward_map, run_sweep, smooth_trajectory,
    AreaSpec, Cell, ControlAction, Criterion, MissionSpec, Point2, RadioParams, Scenario, Trajectory,
};

fn km() -> AreaSpec<f64> {
    AreaSpec::new(1000.0, 1000.0).unwrap()
}

fn uniform_diagonal(n: usize) -> Trajectory<f64> {
    Trajectory {
        waypoints: (0..=n)
            .map(|i| Waypoint {
                cell: Cell::new(i, i),
                position: Point2::new(100.0 * i as f64, 100.0 * i as f64),
                t_s: 8.0 * i as f64,
            })
            .collect(),
        controls: vec![ControlAction::NE; n],
        stage_rewards: vec![0.0; n],
        criterion: Criterion::Pf,
        total_reward: 0.0,
        delta_s: 8.0,
        total_time_s: 8.0 * n as f64,
    }
}

#[test]
fn hovering_path_evaluates_the_same_smoothed_or_not() {
    let net = generate_network(2, 4, 100, &km(), RadioParams::default()).unwrap();
    let grid = make_grid(&km(), 100.0).unwrap();
    let mut values = vec![0.0; 121];
    values[grid.index(Cell::new(3, 6))] = 1.0;
    let rm = uavdp::RewardMap::new(grid, Criterion::Pf, values);
    let p = Point2::new(300.0, 600.0);
    let m = MissionSpec::new(p, p, 80.0, 8.0, 17.7, &grid).unwrap();
    let traj = plan(&rm, &m).unwrap();
    assert_eq!(traj.stay_count(), 10);
    let d = evaluate_discrete(&net, &traj, 0.05).unwrap();
    let s = evaluate_smooth(&net, &smooth_trajectory(&traj, 10).unwrap(), 0.05).unwrap();
    // same positions; only the length of the averaging sum differs
    assert!((d.per_ue_capacity - s.per_ue_capacity).abs() <= 1e-12 * d.per_ue_capacity);
    assert!((d.outage_probability - s.outage_probability).abs() <= 1e-12);
    assert!((d.total_objective - s.total_objective).abs() <= 1e-9 * d.total_objective.abs());
}

#[test]
fn one_sample_per_interval_reproduces_the_waypoints() {
    let net = generate_network(6, 5, 100, &km(), RadioParams::default()).unwrap();
    let traj = uniform_diagonal(10);
    let st = smooth_trajectory(&traj, 1).unwrap();
    for (s, w) in st.samples.iter().zip(&traj.waypoints) {
        assert!(s.position.distance(w.position) <= 1e-9);
    }
    let d = evaluate_discrete(&net, &traj, 0.05).unwrap();
    let s = evaluate_smooth(&net, &st, 0.05).unwrap();
    assert_eq!(d.instants, s.instants);
    assert!((d.per_ue_capacity - s.per_ue_capacity).abs() <= 1e-12);
    assert!((d.outage_probability - s.outage_probability).abs() <= 1e-12);
}

#[test]
fn metric_bounds_hold_on_planned_paths() {
    let grid = make_grid(&km(), 100.0).unwrap();
    let m = MissionSpec::new(Point2::new(0.0, 0.0), Point2::new(1000.0, 1000.0), 240.0, 8.0, 17.7, &grid).unwrap();
    for seed in 0..4 {
        let net = generate_network(seed, 4, 100, &km(), RadioParams::default()).unwrap();
        for c in Criterion::ALL {
            let traj = plan(&reward_map(&net, &grid, c), &m).unwrap();
            let d = evaluate_discrete(&net, &traj, 0.05).unwrap();
            assert!((0.0..=1.0).contains(&d.outage_probability));
            assert!(d.per_ue_capacity > 0.0 && d.per_ue_capacity <= (1.0 + 1e10f64).log2());
            assert!((d.total_objective - traj.total_reward).abs() <= 1e-9 * traj.total_reward.abs().max(1.0));
        }
    }
}

const SMALL_SWEEP: &str = r#"{
    "area": {"width_m": 600, "height_m": 600},
    "network": {"seed": 1, "n_mbs": 3, "n_ue": 30},
    "mission": {"start_m": [0, 0], "dest_m": [600, 600], "total_time_s": 64, "delta_s": 8},
    "sweep": {"seeds": [5, 6, 7], "n_mbs": [3, 4], "n_ue": 30, "total_times_s": [40, 64, 80],
              "criteria": ["pf", "sumrate", "fivepse"], "smooth": true, "baseline": true}
}"#;

#[test]
fn sweep_output_does_not_depend_on_worker_count() {
    let s: Scenario<f64> = parse_scenario(SMALL_SWEEP).unwrap();
    let mut outputs = Vec::new();
    for workers in [None, Some(1), Some(3)] {
        let report = run_sweep(&s, workers).unwrap();
        let mut buf = Vec::new();
        write_sweep(&report, &mut buf).unwrap();
        outputs.push(buf);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn criteria_share_networks_within_a_seed() {
    let s: Scenario<f64> = parse_scenario(SMALL_SWEEP).unwrap();
    let report = run_sweep(&s, Some(2)).unwrap();
    // 2 n_mbs x 3 seeds x (3 criteria x 3 durations x 2 variants + 3 baselines)
    assert_eq!(report.records.len(), 2 * 3 * (3 * 3 * 2 + 3));
    // baseline rows of one seed coincide across durations: same network
    let base: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.seed == 5 && r.n_mbs == 3 && r.variant == uavdp::Variant::Baseline)
        .map(|r| r.metrics().unwrap().outage_probability)
        .collect();
    assert_eq!(base.len(), 3);
    assert!(base.windows(2).all(|w| w[0] == w[1]));
    // sum-rate plans maximize the capacity metric seed by seed
    for seed in [5u64, 6, 7] {
        let get = |c| {
            report
                .records
                .iter()
                .find(|r| r.seed == seed && r.n_mbs == 4 && r.total_time_s == 64.0
                    && r.variant == uavdp::Variant::Discrete && r.criterion == Some(c))
                .and_then(|r| r.metrics().copied())
                .unwrap()
                .per_ue_capacity
        };
        assert!(get(Criterion::SumRate) >= get(Criterion::Pf) - 1e-12);
        assert!(get(Criterion::SumRate) >= get(Criterion::FivePse) - 1e-12);
    }
}
