//! Verification against the exact oracle and the benchmark runner.

mod bench;
mod verify;

pub use bench::{cmd_bench, ratio, AggregateRow, BenchSpec, BenchTable, RunRecord, CSV_COLUMNS};
pub use verify::{
    cmd_verify, CorpusSpec, InstanceSpec, VerifyOptions, VerifyReport, Violation, DEFAULT_ORACLE_CAP,
};
