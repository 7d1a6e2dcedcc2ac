//! Independent oracles: closed forms recoded from scratch, exact rational
//! arithmetic, and exhaustive enumeration.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uavdp::{
    bernstein, hata_coefficients, plan, solve_dp, BezierCurve, Cell, Criterion, Environment, GridSpec, MissionSpec,
    Point2, RewardMap,
};

/// Hata terms written with natural logarithms.
fn hata_ln(fc: f64, hb: f64, hm: f64) -> (f64, f64, f64) {
    let l10 = std::f64::consts::LN_10;
    let lf = fc.ln() / l10;
    let lh = hb.ln() / l10;
    let a_hm = 1.1 * hm * lf - 0.7 * hm - 1.56 * lf + 0.8;
    let a = 69.55 + 26.16 * lf - 13.82 * lh - a_hm;
    let b = 44.9 - 6.55 * lh;
    let r = (fc.ln() - 28f64.ln()) / l10;
    let c = -5.4 - 2.0 * r * r;
    (a, b, c)
}

#[test]
fn hata_matches_recoded_closed_form() {
    for fc in [150.0, 400.0, 900.0, 1200.0, 1500.0] {
        for hb in [30.0, 60.0, 120.0, 150.0, 200.0] {
            for hm in [1.0, 2.0, 5.0] {
                let got = hata_coefficients(fc, hb, hm, Environment::Suburban, false).unwrap();
                let (a, b, c) = hata_ln(fc, hb, hm);
                assert!((got.a_db - a).abs() <= 1e-9, "A at {fc}/{hb}/{hm}");
                assert!((got.b_db_per_decade - b).abs() <= 1e-9, "B at {fc}/{hb}/{hm}");
                assert!((got.c_db - c).abs() <= 1e-9, "C at {fc}/{hb}/{hm}");
            }
        }
    }
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

/// Exact `C(n,i) (1-t)^(n-i) t^i` for rational `t`.
fn bernstein_exact(i: usize, n: usize, t: &BigRational) -> BigRational {
    let one = BigRational::one();
    let mut v = BigRational::from_integer(binomial(n, i));
    for _ in 0..(n - i) {
        v *= &one - t;
    }
    for _ in 0..i {
        v *= t;
    }
    v
}

#[test]
fn bernstein_against_exact_rationals() {
    let t = BigRational::new(BigInt::from(3), BigInt::from(10));
    let exact = bernstein_exact(3, 7, &t);
    assert_eq!(exact, BigRational::new(BigInt::from(2_268_945), BigInt::from(10_000_000)));
    let got = bernstein(3, 7, 0.3).unwrap();
    assert!((got - exact.to_f64().unwrap()).abs() <= 1e-15);

    for n in [1usize, 5, 12, 20] {
        for j in 0..=10 {
            let t = BigRational::new(BigInt::from(j), BigInt::from(10));
            for i in 0..=n {
                let want = bernstein_exact(i, n, &t).to_f64().unwrap();
                let got = bernstein(i, n, j as f64 / 10.0).unwrap();
                assert!((got - want).abs() <= 1e-13 * want.max(1e-300).max(1.0), "B_{i},{n}({j}/10)");
            }
        }
    }
}

#[test]
fn de_casteljau_against_exact_bernstein_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let pts: Vec<Point2<f64>> = (0..31)
        .map(|_| Point2::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
        .collect();
    let curve = BezierCurve::new(pts.clone()).unwrap();
    let n = curve.degree();
    assert_eq!(n, 30);
    for j in 0..=100 {
        let t = BigRational::new(BigInt::from(j), BigInt::from(100));
        let (mut x, mut y) = (BigRational::zero(), BigRational::zero());
        for (i, p) in pts.iter().enumerate() {
            let w = bernstein_exact(i, n, &t);
            x += rational(p.x) * &w;
            y += rational(p.y) * &w;
        }
        let got = curve.eval(j as f64 / 100.0).unwrap();
        let err = (got.x - x.to_f64().unwrap()).hypot(got.y - y.to_f64().unwrap());
        assert!(err <= 1e-9, "t = {j}/100, error {err} m");
    }
}

/// Best backward-accumulated reward over every control sequence that ends at
/// `dest`, enumerated depth-first.
pub fn brute_force(grid: &GridSpec<f64>, rewards: &[f64], start: Cell, dest: Cell, steps: usize) -> Option<f64> {
    const MOVES: [(isize, isize); 9] = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)];
    fn go(
        grid: &GridSpec<f64>,
        rewards: &[f64],
        at: (isize, isize),
        dest: Cell,
        left: usize,
        visited: &mut Vec<f64>,
        best: &mut Option<f64>,
    ) {
        if left == 0 {
            if at == (dest.ix as isize, dest.iy as isize) {
                let total = visited.iter().rev().fold(0.0, |acc, r| *r + acc);
                if best.is_none_or(|b| total > b) {
                    *best = Some(total);
                }
            }
            return;
        }
        visited.push(rewards[at.1 as usize * grid.nx + at.0 as usize]);
        for (dx, dy) in MOVES {
            let next = (at.0 + dx, at.1 + dy);
            if next.0 < 0 || next.1 < 0 || next.0 >= grid.nx as isize || next.1 >= grid.ny as isize {
                continue;
            }
            go(grid, rewards, next, dest, left - 1, visited, best);
        }
        visited.pop();
    }
    let mut best = None;
    go(grid, rewards, (start.ix as isize, start.iy as isize), dest, steps, &mut Vec::new(), &mut best);
    best
}

#[test]
fn dp_equals_enumeration_on_small_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    while checked < 60 {
        let nx = rng.gen_range(2..=4);
        let ny = rng.gen_range(2..=4);
        let steps = rng.gen_range(0..=5);
        let grid = GridSpec::new(Point2::new(0.0, 0.0), 100.0, nx, ny).unwrap();
        let rewards: Vec<f64> = (0..nx * ny).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let start = Cell::new(rng.gen_range(0..nx), rng.gen_range(0..ny));
        let dest = Cell::new(rng.gen_range(0..nx), rng.gen_range(0..ny));
        let mission = MissionSpec::new(
            grid.center(start),
            grid.center(dest),
            8.0 * steps as f64,
            8.0,
            17.7,
            &grid,
        )
        .unwrap();
        let rm = RewardMap::new(grid, Criterion::Pf, rewards.clone());
        let oracle = brute_force(&grid, &rewards, start, dest, steps);
        match (solve_dp(&rm, &mission), oracle) {
            (Ok(vt), Some(best)) => {
                assert_eq!(vt.value(0, start), Some(best));
                assert_eq!(plan(&rm, &mission).unwrap().total_reward, best);
                checked += 1;
            }
            (Err(uavdp::Error::Infeasible { .. }), None) => {}
            (got, want) => panic!("dp {got:?} vs enumeration {want:?}"),
        }
    }
}
