use std::time::Instant;

use mcst::io::gen_random_tree;
use mcst::{enumerate_all, WeightModel};

/// Ratio of the largest to the median gap between consecutive outputs.
fn gap_ratio(n: usize, seed: u64, limit: usize) -> (f64, usize) {
    let (g, h) = (gen_random_tree(n, seed), gen_random_tree(n, seed));
    let mut stream = enumerate_all(&g, &h, &WeightModel::Size, Some(limit)).unwrap();
    stream.next().unwrap();
    let mut last = Instant::now();
    let mut gaps = Vec::with_capacity(limit);
    for _ in stream {
        let now = Instant::now();
        gaps.push((now - last).as_secs_f64());
        last = now;
    }
    let count = gaps.len();
    let max = gaps.iter().copied().fold(0.0, f64::max);
    gaps.sort_by(f64::total_cmp);
    (max / gaps[count / 2], count)
}

#[test]
fn delay_between_outputs_stays_flat() {
    for (n, seed) in [(60, 1), (120, 2), (200, 3)] {
        // Scheduler noise can stretch a single gap; one clean run out of three suffices.
        let ratios: Vec<(f64, usize)> = (0..3).map(|_| gap_ratio(n, seed, 2000)).collect();
        eprintln!("n={n}: {ratios:?}");
        assert!(ratios.iter().any(|&(r, c)| c > 10 && r <= 50.0), "n={n}: {ratios:?}");
    }
}
