//! Reproducible campaigns and demos driven by the `hypbound` binary.

mod campaign;
mod demos;

pub use campaign::{
    evaluate_samples, evaluate_witness, recheck, run_campaign, sample_witness, CampaignConfig, CampaignReport,
    MarginStats, SampleWitness, ViolationRecord, DEFAULT_MAX_DENSITY, DEFAULT_MAX_RADIUS, DEFAULT_MIN_SEP,
    SCHEMA_VERSION,
};
pub use demos::{
    convergence_demo, counterexample_demo, halfplane_growth, write_csv, Budget, ContractionFinding, ConvergenceRow,
    ConvergenceTable, CounterexampleReport, HalfplaneRow, CONTRACTION_PAIRS,
};
