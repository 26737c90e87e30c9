//! Files, random instances, reports and the sensitivity sweep.

pub mod generator;
pub mod instance_file;
pub mod report;
pub mod sweep;

pub use generator::{
    generate_instance, generate_suite, micro_case, tiny_bilevel, MicroCase, LARGE_SUITE_SIZES,
    SMALL_SUITE_SIZES,
};
pub use instance_file::{read_instance, read_instance_file, write_instance, InstanceError, InstanceFile};
pub use report::{fixed, write_comparison, write_solve_report, write_sweep};
pub use sweep::{parse_grid, sweep, SweepPoint};
