//! Timing harness: random instance pairs per scenario and order, solved with
//! weight-only tables, summarized as mean and relative standard deviation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::io::{gen_star, random_tree};
use crate::solver::{solve_with, SolveOptions, TableMode};
use crate::tree::Tree;
use crate::weight::WeightModel;

/// Order of the first tree in the fixed-size and label scenarios.
pub const FIXED_ORDER: usize = 80;

pub const CSV_HEADER: &str = "scenario,order,mean_ms,rsd_percent,trials";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Two uniform-attachment trees of the same order.
    RandomEqual,
    /// First tree of order 80, second of the given order.
    RandomFixedG,
    /// Two stars of the given order.
    Star,
    /// Two order-80 trees with `label_count` uniform labels under strict label matching;
    /// the order column carries the label count.
    Labels,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::RandomEqual => "random-equal",
            Scenario::RandomFixedG => "random-fixed-g",
            Scenario::Star => "star",
            Scenario::Labels => "labels",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "random-equal" => Ok(Scenario::RandomEqual),
            "random-fixed-g" => Ok(Scenario::RandomFixedG),
            "star" => Ok(Scenario::Star),
            "labels" => Ok(Scenario::Labels),
            other => Err(format!("unknown scenario `{other}` (random-equal, random-fixed-g, star, labels)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub scenario: Scenario,
    /// Tree orders, or label counts for [`Scenario::Labels`].
    pub orders: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Solve trials on all cores. Timings are then not comparable to sequential runs.
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scenario: String,
    pub order: usize,
    pub mean_ms: f64,
    pub rsd_percent: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{:.4},{:.2},{}\n", r.scenario, r.order, r.mean_ms, r.rsd_percent, r.trials));
        }
        out
    }
}

/// Mean and population relative standard deviation in percent.
pub fn mean_rsd(samples: &[f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let rsd = if mean > 0.0 { var.sqrt() / mean * 100.0 } else { 0.0 };
    (mean, rsd)
}

/// The instance pair of one trial. The two trees come from separate streams of
/// one generator keyed by `seed`, so pairs are independent across trials and orders.
pub fn instance(scenario: Scenario, order: usize, trial: u64, seed: u64) -> (Tree, Tree, WeightModel) {
    let stream = |side: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((order as u64) << 32) | (2 * trial + side));
        rng
    };
    let (mut a, mut b) = (stream(0), stream(1));
    match scenario {
        Scenario::RandomEqual => (random_tree(order, &mut a, 1), random_tree(order, &mut b, 1), WeightModel::Size),
        Scenario::RandomFixedG => {
            (random_tree(FIXED_ORDER, &mut a, 1), random_tree(order, &mut b, 1), WeightModel::Size)
        }
        Scenario::Star => (gen_star(order), gen_star(order), WeightModel::Size),
        Scenario::Labels => (
            random_tree(FIXED_ORDER, &mut a, order),
            random_tree(FIXED_ORDER, &mut b, order),
            WeightModel::LabelStrict,
        ),
    }
}

fn time_one(g: &Tree, h: &Tree, model: &WeightModel) -> f64 {
    let options = SolveOptions { mode: TableMode::WeightOnly, ..Default::default() };
    let start = Instant::now();
    let result = solve_with(g, h, model, options);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    std::hint::black_box(result.weight);
    elapsed
}

/// Times `trials` instance pairs per order after one discarded warm-up pair.
pub fn run_bench(config: &BenchConfig) -> BenchReport {
    let mut rows = Vec::with_capacity(config.orders.len());
    for &order in &config.orders {
        let warm = instance(config.scenario, order, config.trials as u64, config.seed);
        time_one(&warm.0, &warm.1, &warm.2);

        let pairs: Vec<_> = (0..config.trials as u64).map(|t| instance(config.scenario, order, t, config.seed)).collect();
        let samples: Vec<f64> = if config.parallel {
            let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
            let chunk = pairs.len().div_ceil(workers).max(1);
            std::thread::scope(|scope| {
                let handles: Vec<_> = pairs
                    .chunks(chunk)
                    .map(|part| scope.spawn(move || part.iter().map(|(g, h, m)| time_one(g, h, m)).collect::<Vec<_>>()))
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("benchmark worker panicked")).collect()
            })
        } else {
            pairs.iter().map(|(g, h, m)| time_one(g, h, m)).collect()
        };

        let (mean_ms, rsd_percent) = mean_rsd(&samples);
        rows.push(BenchRow { scenario: config.scenario.to_string(), order, mean_ms, rsd_percent, trials: config.trials });
    }
    BenchReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics() {
        assert_eq!(mean_rsd(&[4.0]), (4.0, 0.0));
        let (m, r) = mean_rsd(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((r - 50.0).abs() < 1e-12);
    }

    #[test]
    fn instances_are_deterministic() {
        let a = instance(Scenario::RandomEqual, 30, 2, 7);
        let b = instance(Scenario::RandomEqual, 30, 2, 7);
        assert_eq!((a.0, a.1), (b.0, b.1));
        let (g, h, _) = instance(Scenario::RandomFixedG, 12, 0, 7);
        assert_eq!((g.len(), h.len()), (FIXED_ORDER, 12));
        let (g, h, m) = instance(Scenario::Labels, 4, 0, 7);
        assert_eq!((g.len(), h.len(), m), (FIXED_ORDER, FIXED_ORDER, WeightModel::LabelStrict));
        assert_ne!(g, h);
    }

    #[test]
    fn report_shape() {
        let cfg = BenchConfig { scenario: Scenario::Star, orders: vec![5, 10], trials: 1, seed: 1, parallel: false };
        let report = run_bench(&cfg);
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].rsd_percent, 0.0);
        let csv = report.to_csv();
        assert!(csv.starts_with("scenario,order,mean_ms,rsd_percent,trials\nstar,5,"));
        assert_eq!(csv.lines().count(), 3);
        let par = run_bench(&BenchConfig { parallel: true, trials: 3, ..cfg });
        assert_eq!(par.rows.len(), 2);
    }
}
