//! Property tests for the config format, lattice geometry, dynamics ledgers
//! and statistics invariances.

use proptest::prelude::*;

use sos_core::config::{InitialSplit, ModelConfig};
use sos_core::dynamics::run_sim;
use sos_core::grid::neighbor_offsets;
use sos_core::io::{parse_config, serialize_config};
use sos_core::stats::{anova_oneway, linreg_r2, pearson_r, welch_t};
use sos_core::world::init_world;

fn arb_config() -> impl Strategy<Value = ModelConfig> {
    let geometry = (12u32..40, 12u32..40, 2u32..80, 1u32..=5);
    let model = (
        0.0f64..0.1,
        0.0f64..0.1,
        proptest::collection::vec(0u32..8, 1..6),
        -1.0f64..1.0,
        0.1f64..3.0,
    );
    let policy = (
        prop::bool::ANY,
        1u32..500,
        1u32..20,
        any::<u64>(),
        proptest::option::of(0.5f64..50.0),
    );
    (geometry, model, policy)
        .prop_map(
            |(
                (gw, gh, pop, vision),
                (alpha, beta, levels, threshold, w_sd),
                (balanced, max_ticks, window, seed, clamp),
            )| {
                ModelConfig {
                    grid_width: gw,
                    grid_height: gh,
                    population: pop,
                    vision_radius: vision as f64,
                    alpha,
                    beta,
                    media_levels: levels,
                    threshold,
                    w_sd,
                    initial_split: if balanced {
                        InitialSplit::Balanced
                    } else {
                        InitialSplit::Random
                    },
                    max_ticks,
                    stability_window: window,
                    seed,
                    clamp_w: clamp,
                }
            },
        )
        .prop_filter("valid", |cfg| cfg.clone().validated().is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_text_round_trips(cfg in arb_config()) {
        let text = serialize_config(&cfg);
        let parsed = parse_config(&text).unwrap();
        prop_assert_eq!(parsed.get(), &cfg);
    }

    #[test]
    fn offsets_are_origin_free_and_negation_closed(radius in 0.5f64..8.0) {
        let offs = neighbor_offsets(radius);
        prop_assert!(!offs.contains(&(0, 0)));
        for &(dx, dy) in &offs {
            prop_assert!(((dx * dx + dy * dy) as f64) <= radius * radius);
            prop_assert!(offs.contains(&(-dx, -dy)));
        }
        // row-major canonical order is strictly increasing by (dy, dx)
        for pair in offs.windows(2) {
            prop_assert!((pair[0].1, pair[0].0) < (pair[1].1, pair[1].0));
        }
    }

    #[test]
    fn transition_accounting_balances(cfg in arb_config(), seed in any::<u64>()) {
        let validated = cfg.clone().validated().unwrap();
        let result = run_sim(&mut init_world(&validated, seed), &cfg);
        let gained: i64 = result.new_silent.iter().map(|&v| v as i64).sum();
        let lost: i64 = result.new_speaking.iter().map(|&v| v as i64).sum();
        let first = result.silent_count[0] as i64;
        let last = *result.silent_count.last().unwrap() as i64;
        prop_assert_eq!(gained - lost, last - first);
        prop_assert_eq!(result.new_silent[0], 0);
        if result.non_converged {
            prop_assert_eq!(result.convergence_tick, cfg.max_ticks);
        } else {
            prop_assert!(result.convergence_tick + cfg.stability_window <= cfg.max_ticks);
        }
    }

    #[test]
    fn pearson_is_symmetric_and_affine_invariant(
        base in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 4..24),
        scale in 0.1f64..20.0,
        shift in -100.0f64..100.0,
    ) {
        let x: Vec<f64> = base.iter().map(|p| p.0).collect();
        let y: Vec<f64> = base.iter().map(|p| p.1).collect();
        let Ok(r) = pearson_r(&x, &y) else { return Ok(()) };
        let r_swapped = pearson_r(&y, &x).unwrap();
        prop_assert!((r.statistic - r_swapped.statistic).abs() < 1e-12);

        let x_affine: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        let r_affine = pearson_r(&x_affine, &y).unwrap();
        prop_assert!((r.statistic - r_affine.statistic).abs() < 1e-9);

        let x_neg: Vec<f64> = x.iter().map(|v| -scale * v).collect();
        let r_neg = pearson_r(&x_neg, &y).unwrap();
        prop_assert!((r.statistic + r_neg.statistic).abs() < 1e-9);
    }

    #[test]
    fn welch_and_anova_are_shift_invariant(
        a in proptest::collection::vec(-20.0f64..20.0, 3..12),
        b in proptest::collection::vec(-20.0f64..20.0, 3..12),
        c in proptest::collection::vec(-20.0f64..20.0, 3..12),
        shift in -50.0f64..50.0,
    ) {
        let shifted = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x + shift).collect() };
        if let (Ok(t), Ok(t2)) = (welch_t(&a, &b), welch_t(&shifted(&a), &shifted(&b))) {
            prop_assert!((t.statistic - t2.statistic).abs() < 1e-6);
            prop_assert!((-t.statistic - welch_t(&b, &a).unwrap().statistic).abs() < 1e-12);
        }
        let groups = vec![a.clone(), b.clone(), c.clone()];
        let shifted_groups = vec![shifted(&a), shifted(&b), shifted(&c)];
        if let (Ok(f), Ok(f2)) = (anova_oneway(&groups), anova_oneway(&shifted_groups)) {
            prop_assert!((f.statistic - f2.statistic).abs() < 1e-5 * f.statistic.max(1.0));
        }
    }

    #[test]
    fn linreg_recovers_planted_lines(
        xs in proptest::collection::vec(-100.0f64..100.0, 5..30),
        slope in -5.0f64..5.0,
        intercept in -50.0f64..50.0,
    ) {
        let ys: Vec<f64> = xs.iter().map(|x| slope * x + intercept).collect();
        if let Ok(fit) = linreg_r2(&xs, &ys) {
            prop_assert!((fit.slope - slope).abs() < 1e-9 * slope.abs().max(1.0));
            prop_assert!((fit.intercept - intercept).abs() < 1e-8 * intercept.abs().max(1.0));
            if !fit.degenerate_y {
                prop_assert!(fit.r_squared > 1.0 - 1e-9);
            }
        }
    }
}
