use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn uavdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavdp"))
        .args(args)
        .env_remove(uavdp_cli::WORKERS_ENV)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("scenario.json");
    fs::write(&path, body).unwrap();
    path
}

fn reference_config(dir: &Path) -> PathBuf {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.json");
    let dst = dir.join("reference.json");
    fs::copy(src, &dst).unwrap();
    dst
}

fn rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn heatmap_on_the_reference_grid() {
    let tmp = TempDir::new().unwrap();
    let cfg = reference_config(tmp.path());
    let out = tmp.path().join("out");
    let o = uavdp(&["heatmap", "--config", cfg.to_str().unwrap(), "--criterion", "pf", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let reward = rows(&out.join("reward_pf.csv"));
    assert_eq!(reward[0], "x_m,y_m,value");
    assert_eq!(reward.len(), 122);
    assert_eq!(rows(&out.join("sir_heatmap.csv")).len(), 122);
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "heatmap");
    assert_eq!(manifest["seeds"][0], 42);
    assert!(!out.join(".manifest.json.tmp").exists());
}

#[test]
fn heatmap_on_a_three_by_three_grid() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"area": {"width_m": 200, "height_m": 200},
            "network": {"seed": 3, "n_mbs": 2, "n_ue": 10},
            "mission": {"dest_m": [200, 200], "total_time_s": 16}}"#,
    );
    let out = tmp.path().join("out");
    let o = uavdp(&["heatmap", "--config", cfg.to_str().unwrap(), "--criterion", "sumrate", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&out.join("reward_sumrate.csv")).len(), 10);
}

#[test]
fn missing_config_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let o = uavdp(&["heatmap", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = uavdp(&["plan", "--config", "/no/such/file.json", "--out", tmp.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn invalid_config_exits_with_two() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"area": {"width_m": 1000, "height_m": 1000},
            "network": {"seed": 3, "n_mbs": 2, "n_ue": 10},
            "mission": {"total_time_s": 100}}"#,
    );
    let o = uavdp(&["plan", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mission.total_time_s"));
}

#[test]
fn plan_writes_one_row_per_waypoint() {
    let tmp = TempDir::new().unwrap();
    let cfg = reference_config(tmp.path());
    let out = tmp.path().join("out");
    let o = uavdp(&["plan", "--config", cfg.to_str().unwrap(), "--criterion", "pf", "--out", out.to_str().unwrap(), "--smooth"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let traj = rows(&out.join("trajectory_pf.csv"));
    assert_eq!(traj[0], "i,t_s,x_m,y_m,action_label,v_mps,heading_rad,stage_reward");
    assert_eq!(traj.len(), 32);
    assert!(traj[1].starts_with("0,0,0,0,"));
    assert!(traj[31].starts_with("30,240,1000,1000,"));
    assert_eq!(rows(&out.join("smooth_pf.csv")).len(), 302);
    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("metrics_pf.json")).unwrap()).unwrap();
    assert_eq!(metrics["steps"], 30);
    assert!(metrics["smooth_max_ground_speed_mps"].as_f64().unwrap() <= 17.7 + 1e-6);
    assert!(metrics["mbs_coefficients"]["b_db_per_decade"].as_f64().unwrap() > 35.0);
}

#[test]
fn zero_length_mission_is_a_single_row() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"area": {"width_m": 1000, "height_m": 1000},
            "network": {"seed": 3, "n_mbs": 4, "n_ue": 20},
            "mission": {"start_m": [500, 500], "dest_m": [500, 500], "total_time_s": 0}}"#,
    );
    let out = tmp.path().join("out");
    let o = uavdp(&["plan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&out.join("trajectory_pf.csv")).len(), 2);
}

#[test]
fn infeasible_mission_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"area": {"width_m": 1000, "height_m": 1000},
            "network": {"seed": 3, "n_mbs": 4, "n_ue": 20},
            "mission": {"start_m": [0, 0], "dest_m": [1000, 1000], "total_time_s": 8}}"#,
    );
    let o = uavdp(&["plan", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Chebyshev grid distance 10") && err.contains("1 steps"), "{err}");
}

#[test]
fn sweep_smoke_matches_plan() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"area": {"width_m": 1000, "height_m": 1000},
            "network": {"seed": 9, "n_mbs": 4, "n_ue": 100},
            "sweep": {"seeds": [9], "n_mbs": [4], "n_ue": 100, "total_times_s": [240],
                      "criteria": ["pf"], "smooth": false, "baseline": false}}"#,
    );
    let sweep_out = tmp.path().join("sweep");
    let o = uavdp(&["sweep", "--config", cfg.to_str().unwrap(), "--out", sweep_out.to_str().unwrap(), "--workers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let plan_out = tmp.path().join("plan");
    let o = uavdp(&["plan", "--config", cfg.to_str().unwrap(), "--out", plan_out.to_str().unwrap()]);
    assert!(o.status.success());

    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(plan_out.join("metrics_pf.json")).unwrap()).unwrap();
    let sweep = rows(&sweep_out.join("sweep.csv"));
    assert_eq!(sweep.len(), 3);
    let run: Vec<&str> = sweep[1].split(',').collect();
    assert_eq!(&run[..7], ["run", "discrete", "pf", "240", "4", "9", "ok"]);
    assert_eq!(run[8].parse::<f64>().unwrap(), metrics["discrete"]["per_ue_capacity"].as_f64().unwrap());
    assert_eq!(run[10].parse::<f64>().unwrap(), metrics["discrete"]["outage_probability"].as_f64().unwrap());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(sweep_out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["aggregates"][0]["seeds"], 1);
}

#[test]
fn refuses_to_overwrite_without_force() {
    let tmp = TempDir::new().unwrap();
    let cfg = reference_config(tmp.path());
    let out = tmp.path().join("out");
    let args = ["heatmap", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert!(uavdp(&args).status.success());
    let o = uavdp(&args);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(uavdp(&forced).status.success());
}

#[test]
fn unknown_criterion_is_rejected() {
    let o = uavdp(&["plan", "--config", "x.json", "--out", "y", "--criterion", "maxmin"]);
    assert_eq!(o.status.code(), Some(2));
}
