mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use common::{fold_simulator_1d, reference_mcd, sphere, Recorder};
use mcd_opt::mcd::{fold, restart_plan, DimensionOrder, McdObserver};
use mcd_opt::{Bounds, Error, FnObjective, Mcd, SeedSource};

#[test]
fn sphere_1000d_matches_fold_simulator() {
    let coord = fold_simulator_1d(|x| x * x, -100.0, 100.0, 5);
    assert_eq!(coord, 3.125);
    let f = FnObjective::new(Bounds::uniform(1000, -100.0, 100.0).unwrap(), sphere);
    for seed in [0, 1, 17, 123, 99_999] {
        let out = Mcd::new(5).run(&f, 10_000, seed).unwrap();
        assert!(out.restart_best.position.iter().all(|&c| c == coord));
        assert_eq!(out.restart_best.value, Some(9765.625));
        // The very first probe (one coordinate at 50, rest at 0) is better
        // than anything the folds end on.
        assert_eq!(out.run.best_value(), 2500.0);
    }
}

#[test]
fn shifted_1d_quadratic_matches_simulator() {
    for target in [-77.3, -1.0, 0.0, 12.5, 99.9] {
        let g = move |x: f64| (x - target) * (x - target);
        let want = fold_simulator_1d(g, -100.0, 100.0, 12);
        let f = FnObjective::new(
            Bounds::uniform(1, -100.0, 100.0).unwrap(),
            move |x: &[f64]| g(x[0]),
        );
        let out = Mcd::new(12).run(&f, 24, 0).unwrap();
        assert_eq!(out.restart_best.position, vec![want]);
    }
}

#[test]
fn identity_order_matches_oracle_on_rosenbrock() {
    let rosen = |x: &[f64]| {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum::<f64>()
    };
    let (lower, upper) = (vec![-8.0; 4], vec![8.0; 4]);
    let oracle = reference_mcd(rosen, &lower, &upper, 6, 96, || (0..4).collect());
    let rec = Recorder::new(Bounds::new(lower, upper).unwrap(), rosen);
    let out = Mcd::new(6)
        .with_order(DimensionOrder::Identity)
        .run(&rec, 96, 0)
        .unwrap();
    let points = rec.take();
    for (k, step) in oracle.steps.iter().enumerate() {
        assert_eq!(points[2 * k], step.first, "step {k}");
        assert_eq!(points[2 * k + 1], step.second, "step {k}");
    }
    assert_eq!(out.restart_best.value, Some(oracle.best_value));
}

#[test]
fn budget_below_one_restart_is_rejected() {
    let f = FnObjective::new(Bounds::uniform(10, -1.0, 1.0).unwrap(), sphere);
    let err = Mcd::new(10).run(&f, 199, 0).unwrap_err();
    assert!(matches!(
        err,
        Error::InsufficientBudget {
            needed: 200,
            max_nfe: 199
        }
    ));
}

#[test]
fn leftover_budget_is_unspent() {
    let f = FnObjective::new(Bounds::uniform(3, -1.0, 1.0).unwrap(), sphere);
    let out = Mcd::new(2).run(&f, 50, 0).unwrap();
    assert_eq!(out.plan.r_max, 4);
    assert_eq!(out.run.used_nfe, 48);
    assert_eq!(out.plan.unspent(), 2);
}

#[test]
fn same_seed_same_run() {
    let f = FnObjective::new(Bounds::uniform(20, -5.0, 5.0).unwrap(), |x: &[f64]| {
        x.iter()
            .enumerate()
            .map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2))
            .sum()
    });
    let a = Mcd::new(8).run(&f, 2000, 9).unwrap();
    let b = Mcd::new(8).run(&f, 2000, 9).unwrap();
    assert_eq!(a, b);
}

struct PermCapture(Vec<Vec<usize>>);

impl McdObserver for PermCapture {
    fn on_step(
        &mut self,
        restart: usize,
        iteration: usize,
        _decision: &mcd_opt::mcd::RoiDecision,
        state: &mcd_opt::mcd::McdState,
    ) {
        if iteration == 0 && self.0.len() == restart {
            self.0.push(state.perm.clone());
        }
    }
}

#[test]
fn one_permutation_per_restart_from_perm_stream() {
    let f = FnObjective::new(Bounds::uniform(6, -1.0, 1.0).unwrap(), sphere);
    let mut cap = PermCapture(Vec::new());
    Mcd::new(3).run_observed(&f, 36 * 4, 21, &mut cap).unwrap();
    let mut rng = SeedSource::new(21).stream("perm");
    let want: Vec<Vec<usize>> = (0..4)
        .map(|_| {
            let mut p: Vec<usize> = (0..6).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    assert_eq!(cap.0, want);
}

proptest! {
    #[test]
    fn restart_plan_matches_floor_division(d in 1usize..200, it in 1usize..20, nfe in 0usize..100_000) {
        let per = 2 * d * it;
        match restart_plan(d, it, nfe) {
            Ok(plan) => {
                prop_assert_eq!(plan.r_max, nfe / per);
                prop_assert!(plan.planned_nfe() <= nfe);
                prop_assert!(nfe - plan.planned_nfe() < per);
            }
            Err(_) => prop_assert!(nfe < per),
        }
    }

    #[test]
    fn fold_halves_exactly_one_dimension(
        lo in -1e3f64..1e3,
        width in 1e-3f64..1e3,
        i in 0usize..4,
        keep_lower in any::<bool>(),
    ) {
        let b = Bounds::uniform(4, lo, lo + width).unwrap();
        let folded = fold(&b, i, keep_lower);
        for j in 0..4 {
            if j == i {
                prop_assert!((folded.width(j) - b.width(j) / 2.0).abs() <= 1e-12 * b.width(j));
                prop_assert!(b.encloses(&folded));
            } else {
                prop_assert_eq!(folded.width(j), b.width(j));
            }
        }
    }

    #[test]
    fn every_evaluation_stays_in_the_box(
        d in 1usize..5,
        it in 1usize..6,
        lo in -50.0f64..0.0,
        width in 0.1f64..100.0,
        c in -60.0f64..60.0,
        seed in any::<u64>(),
    ) {
        let bounds = Bounds::uniform(d, lo, lo + width).unwrap();
        let rec = Recorder::new(bounds.clone(), move |x: &[f64]| x.iter().map(|v| (v - c).abs()).sum());
        let nfe = 2 * d * it * 3;
        let out = Mcd::new(it).run(&rec, nfe, seed).unwrap();
        let points = rec.take();
        prop_assert_eq!(points.len(), nfe);
        prop_assert!(points.iter().all(|p| bounds.contains(p)));
        prop_assert!(out.run.best_value() <= out.restart_best.value.unwrap());
    }
}
