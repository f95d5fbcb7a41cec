//! Analytic key statistics, Monte Carlo drivers and reproductions of the
//! published numbers.

pub mod combine;
pub mod curves;
pub mod key_stats;
pub mod monte_carlo;
pub mod report;

pub use combine::{combine_experiment, multi_string_combine, CombineReport};
pub use curves::{non_decreasing_steps, DECREASE_MARGIN, usd_curve, usd_curve_csv, UsdPoint};
pub use key_stats::{key_stats, printed, table1, KeyStats, TABLE1_PARAMETERS, TABLE1_PRINTED};
pub use monte_carlo::{expected_conclusive_rate, monte_carlo, monte_carlo_report, MonteCarlo, TrialRecord};
pub use report::{Check, ExperimentReport};
