//! Simulation against exact laws and structural guarantees at volume.

use exclusion_core::chain::{
    extremal_states, project_phi, sep_space, shuffle_space, KPermutation, Params, ShuffleParams,
    DEFAULT_STATE_CAP,
};
use exclusion_core::exact::{
    build_sep_generator, build_shuffle_generator, censored_transient_distribution, dirac,
    transient_distribution, CensoringScheme, UpdateMask,
};
use exclusion_core::sim::{
    bad_set_frequencies, coalescence_estimate, mc_mean_height_sep, mc_mean_height_shuffle,
    simulate_sep_coupling, simulate_shuffle_grand_coupling, SimOptions,
};
use exclusion_core::spectral::{heat_solution, top_height_profile};
use exclusion_core::Configuration;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn random_kperm(p: ShuffleParams, rng: &mut ChaCha8Rng) -> KPermutation {
    let mut cards: Vec<u16> = (1..=p.cards() as u16).collect();
    cards.shuffle(rng);
    KPermutation::from_flat(p, cards).unwrap()
}

/// Pearson statistic with cells of expected count below 5 pooled; returns
/// the upper-tail p-value.
fn chi_square_p_value(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * nf;
        if e < 5.0 {
            pool_o += o as f64;
            pool_e += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e.max(1e-300);
        cells += 1;
    }
    let df = (cells - 1) as f64;
    1.0 - ChiSquared::new(df).unwrap().cdf(stat)
}

#[test]
fn shuffle_coupling_is_monotone_at_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (k, n) in [(2, 8), (3, 6)] {
        let p = ShuffleParams::new(k, n).unwrap();
        let rate = (2 * k * k * (n - 1)) as f64;
        let opts = SimOptions::new(1.2e4 / rate).with_order_check();
        let (mut rings, mut checks) = (0u64, 0u64);
        for run in 0..100 {
            let mut initials = vec![KPermutation::top(p), KPermutation::bottom(p)];
            initials.extend((0..4).map(|_| random_kperm(p, &mut rng)));
            let traj = simulate_shuffle_grand_coupling(&initials, &opts, 17, run, None).unwrap();
            assert_eq!(traj.stats.violations, 0, "run {run}");
            assert!(traj.stats.rings >= 10_000);
            rings += traj.stats.rings;
            checks += traj.stats.order_checks;
        }
        assert!(rings >= 100 * 10_000);
        assert!(checks > 0);
    }
}

#[test]
fn sep_coupling_is_monotone_at_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (k, n, m) in [(2, 8, 8), (3, 6, 9)] {
        let params = Params::new(k, n, m).unwrap();
        let (top, bottom) = extremal_states(params);
        let rate = (2 * 2 * k * k * (n - 1)) as f64;
        for run in 0..100 {
            let mut initials = vec![top.clone(), bottom.clone()];
            for _ in 0..2 {
                initials.push(project_phi(&random_kperm(params.shuffle(), &mut rng), m).unwrap());
            }
            // four tracked copies give four slots per bond and direction
            let opts = SimOptions::new(1.2e4 / (2.0 * rate)).with_order_check();
            let traj = simulate_sep_coupling(&initials, &opts, 5, run).unwrap();
            assert_eq!(traj.stats.violations, 0);
            assert!(traj.stats.rings >= 10_000);
        }
    }
}

#[test]
fn shuffle_marginal_matches_exact_law() {
    for (k, n, t) in [(1, 3, 0.4), (2, 2, 0.25)] {
        let p = ShuffleParams::new(k, n).unwrap();
        let space = shuffle_space(p, DEFAULT_STATE_CAP).unwrap();
        let top = KPermutation::top(p);
        let exact = transient_distribution(
            &build_shuffle_generator(&space),
            &dirac(space.len(), space.index_of(&top).unwrap()),
            t,
        )
        .unwrap();
        let opts = SimOptions::new(t);
        let mut counts = vec![0u64; space.len()];
        for r in 0..100_000 {
            let traj =
                simulate_shuffle_grand_coupling(std::slice::from_ref(&top), &opts, 8, r, None)
                    .unwrap();
            counts[space.index_of(&traj.finals[0]).unwrap()] += 1;
        }
        let pv = chi_square_p_value(&counts, &exact);
        assert!(pv > 0.01, "k={k} N={n}: p = {pv}");
    }
}

#[test]
fn censored_marginal_matches_exact_law() {
    let p = ShuffleParams::new(1, 4).unwrap();
    let space = shuffle_space(p, DEFAULT_STATE_CAP).unwrap();
    let scheme = CensoringScheme::new(
        vec![
            (0.0, UpdateMask::censor_bonds(p, &[2]).unwrap()),
            (0.3, UpdateMask::all(p)),
            (0.5, UpdateMask::censor_bonds(p, &[1, 3]).unwrap()),
        ],
        0.8,
    )
    .unwrap();
    let top = KPermutation::top(p);
    let nu0 = dirac(space.len(), space.index_of(&top).unwrap());
    let exact = censored_transient_distribution(&space, &nu0, &scheme, 0.8).unwrap();
    let opts = SimOptions::new(0.8);
    let mut counts = vec![0u64; space.len()];
    for r in 0..100_000 {
        let traj =
            simulate_shuffle_grand_coupling(std::slice::from_ref(&top), &opts, 9, r, Some(&scheme))
                .unwrap();
        counts[space.index_of(&traj.finals[0]).unwrap()] += 1;
    }
    assert!(chi_square_p_value(&counts, &exact) > 0.01);
}

#[test]
fn sep_marginal_matches_exact_law() {
    for (k, n, m, t) in [(2, 3, 3, 0.3), (1, 4, 2, 0.5)] {
        let params = Params::new(k, n, m).unwrap();
        let space = sep_space(params, DEFAULT_STATE_CAP).unwrap();
        let (top, bottom) = extremal_states(params);
        let q = build_sep_generator(&space);
        let exact_top =
            transient_distribution(&q, &dirac(space.len(), space.index_of(&top).unwrap()), t)
                .unwrap();
        let exact_bottom =
            transient_distribution(&q, &dirac(space.len(), space.index_of(&bottom).unwrap()), t)
                .unwrap();
        // track both copies so the slot machinery is exercised
        let opts = SimOptions::new(t);
        let mut ct = vec![0u64; space.len()];
        let mut cb = vec![0u64; space.len()];
        for r in 0..100_000 {
            let traj = simulate_sep_coupling(&[top.clone(), bottom.clone()], &opts, 10, r).unwrap();
            ct[space.index_of(&traj.finals[0]).unwrap()] += 1;
            cb[space.index_of(&traj.finals[1]).unwrap()] += 1;
        }
        assert!(chi_square_p_value(&ct, &exact_top) > 0.01);
        assert!(chi_square_p_value(&cb, &exact_bottom) > 0.01);
    }
}

#[test]
fn two_state_shuffle_equilibrates() {
    let p = ShuffleParams::new(1, 2).unwrap();
    let top = KPermutation::top(p);
    let opts = SimOptions::new(20.0);
    let n = 100_000;
    let stays = (0..n as u64)
        .filter(|&r| {
            simulate_shuffle_grand_coupling(std::slice::from_ref(&top), &opts, 12, r, None)
                .unwrap()
                .finals[0]
                == top
        })
        .count() as f64;
    let se = (0.25 / n as f64).sqrt();
    assert!((stays / n as f64 - 0.5).abs() < 3.0 * se);
}

#[test]
fn small_extremal_pair_always_coalesces() {
    let params = Params::new(1, 4, 2).unwrap();
    let (top, bottom) = extremal_states(params);
    let opts = SimOptions::new(100.0);
    for r in 0..1000 {
        let traj = simulate_sep_coupling(&[top.clone(), bottom.clone()], &opts, 13, r).unwrap();
        assert_eq!(traj.finals[0], traj.finals[1], "replica {r}");
    }
}

#[test]
fn replay_is_deterministic_across_thread_counts() {
    let params = Params::new(2, 10, 10).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| coalescence_estimate(params, 64, 99, u64::MAX))
    };
    assert_eq!(run(1).outcomes, run(3).outcomes);

    let p = ShuffleParams::new(2, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let initials = vec![KPermutation::top(p), random_kperm(p, &mut rng)];
    let opts = SimOptions::new(5.0).with_log();
    let a = simulate_shuffle_grand_coupling(&initials, &opts, 21, 3, None).unwrap();
    let b = simulate_shuffle_grand_coupling(&initials, &opts, 21, 3, None).unwrap();
    assert_eq!(a, b);
    let c = simulate_shuffle_grand_coupling(&initials, &opts, 21, 4, None).unwrap();
    assert_ne!(a.log, c.log);
}

#[test]
fn mean_height_matches_heat_flow() {
    let (k, n, y, x) = (2, 16, 16, 8);
    let p = ShuffleParams::new(k, n).unwrap();
    let t = (n * n) as f64 / (2.0 * k as f64 * std::f64::consts::PI.powi(2));
    let e = mc_mean_height_shuffle(&KPermutation::top(p), x, y, t, 4000, 31).unwrap();
    let h = heat_solution(&top_height_profile(k, n, y), k, t).unwrap();
    assert!(
        (e.mean - h.at(x)).abs() < 3.0 * e.stderr,
        "{e:?} vs {}",
        h.at(x)
    );

    // long run: the centred height has mean zero at m = kN/2
    let params = Params::new(k, n, k * n / 2).unwrap();
    let (top, _) = extremal_states(params);
    let e = mc_mean_height_sep(&top, x, 40.0 * t, 2000, 32).unwrap();
    assert!(e.mean.abs() < 3.0 * e.stderr + 1e-12, "{e:?}");
}

#[test]
fn bad_sets_are_rare_at_equilibrium() {
    let mut prev = 1.0;
    for n in [64, 128, 256] {
        let (_, _, h) = bad_set_frequencies(Params::new(2, n, n).unwrap(), 2000, 40).unwrap();
        assert!(h <= prev);
        assert!(h < 0.05);
        prev = h;
    }
    // a full system is one flat window
    let full = Configuration::new(Params::new(2, 5, 10).unwrap(), vec![2; 5]).unwrap();
    let b = exclusion_core::sim::bad_set_membership(
        &exclusion_core::chain::height_of_configuration(&full),
    )
    .unwrap();
    assert!(b.in_h2);
}

#[test]
fn observation_times_are_respected() {
    let p = ShuffleParams::new(2, 3).unwrap();
    let opts = SimOptions::new(2.0).observe(vec![0.0, 0.5, 2.0]);
    let traj = simulate_shuffle_grand_coupling(&[KPermutation::top(p)], &opts, 1, 0, None).unwrap();
    let times: Vec<f64> = traj.observations.iter().map(|o| o.time).collect();
    assert_eq!(times, vec![0.0, 0.5, 2.0]);
    assert_eq!(traj.observations[0].states[0], KPermutation::top(p));
    assert_eq!(traj.observations[2].states, traj.finals);
}
