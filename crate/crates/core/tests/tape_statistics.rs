//! Distribution checks for tape draws against closed-form moments.

use lca_core::{Domain, RandomTape, Tape, TapeKey};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn key(i: u64) -> TapeKey {
    TapeKey::new(Domain::Sample, i, 0, 0)
}

#[test]
fn coin_mean_within_three_sigma() {
    let t = RandomTape::new(2024);
    let (p, trials) = (0.3, 1_000_000u64);
    let hits = (0..trials).filter(|&i| t.coin(key(i), p).unwrap()).count() as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let mean = hits / trials as f64;
    assert!((mean - p).abs() <= 3.0 * sigma, "mean {mean}, sigma {sigma}");
}

#[test]
fn geometric_mean_at_one_half() {
    let t = RandomTape::new(5);
    let (q, trials) = (0.5, 100_000u64);
    let sum: u64 = (0..trials).map(|i| t.geometric(key(i), q).unwrap()).sum();
    let mean = sum as f64 / trials as f64;
    assert!((mean - 1.0 / q).abs() <= 0.05, "mean {mean}");
}

#[test]
fn geometric_pmf_within_four_sigma() {
    let trials = 100_000u64;
    for (s, &q) in [0.9, 0.5, 0.1].iter().enumerate() {
        let t = RandomTape::new(100 + s as u64);
        let mut counts = [0u64; 11];
        for i in 0..trials {
            let k = t.geometric(key(i), q).unwrap();
            assert!(k >= 1);
            if k <= 10 {
                counts[k as usize] += 1;
            }
        }
        for k in 1..=10usize {
            let pk = q * (1.0 - q).powi(k as i32 - 1);
            let expected = trials as f64 * pk;
            let sigma = (trials as f64 * pk * (1.0 - pk)).sqrt();
            let diff = (counts[k] as f64 - expected).abs();
            assert!(
                diff <= 4.0 * sigma.max(1.0),
                "q={q} k={k}: observed {}, expected {expected:.1}",
                counts[k]
            );
        }
    }
}

#[test]
fn certain_success_is_always_one() {
    let t = RandomTape::new(0);
    assert!((0..1000).all(|i| t.geometric(key(i), 1.0).unwrap() == 1));
}

/// Coins drawn under keys that differ in one slot should look independent:
/// a 2x2 contingency table passes a chi-square independence test.
#[test]
fn neighbouring_keys_are_independent() {
    let t = RandomTape::new(77);
    let trials = 200_000u64;
    let slots: [fn(u64) -> (TapeKey, TapeKey); 4] = [
        |i| (TapeKey::new(Domain::EdgeKeep, i, 0, 0), TapeKey::new(Domain::EdgeKeep, i, 1, 0)),
        |i| (TapeKey::new(Domain::EdgeKeep, i, 0, 0), TapeKey::new(Domain::EdgeKeep, i, 0, 1)),
        |i| (TapeKey::new(Domain::EdgeKeep, i, 0, 0), TapeKey::new(Domain::Subsample, i, 0, 0)),
        |i| (TapeKey::new(Domain::EdgeKeep, 2 * i, 0, 0), TapeKey::new(Domain::EdgeKeep, 2 * i + 1, 0, 0)),
    ];
    let critical = ChiSquared::new(1.0).unwrap().inverse_cdf(0.999);
    for (s, pair) in slots.iter().enumerate() {
        let mut table = [[0f64; 2]; 2];
        for i in 0..trials {
            let (a, b) = pair(i);
            let x = t.coin(a, 0.5).unwrap() as usize;
            let y = t.coin(b, 0.5).unwrap() as usize;
            table[x][y] += 1.0;
        }
        let n = trials as f64;
        let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
        let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
        let mut stat = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let e = rows[x] * cols[y] / n;
                stat += (table[x][y] - e).powi(2) / e;
            }
        }
        assert!(stat < critical, "slot pair {s}: statistic {stat}");
    }
}

#[test]
fn below_is_uniform() {
    let t = RandomTape::new(9);
    let (bound, trials) = (7u64, 70_000u64);
    let mut counts = [0f64; 7];
    for i in 0..trials {
        counts[t.below(key(i), bound) as usize] += 1.0;
    }
    let e = trials as f64 / bound as f64;
    let stat: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
    let critical = ChiSquared::new(6.0).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "statistic {stat}");
}

#[test]
fn interleaving_does_not_change_answers() {
    let t = RandomTape::new(3);
    let first: Vec<bool> = (0..100).map(|i| t.coin(key(i), 0.4).unwrap()).collect();
    for i in (0..100).rev() {
        let _ = t.geometric(key(i + 1000), 0.2).unwrap();
        assert_eq!(t.coin(key(i), 0.4).unwrap(), first[i as usize]);
    }
}
