//! Series specifications, seeded sampling and the verification suites.

mod report;
mod rng;
mod spec;
mod suites;

pub use report::{Counterexample, SuiteParams, SuiteReport, Tally};
pub use rng::{Sampler, GOLDEN_GAMMA};
pub use spec::{parse_series_spec, CoeffValue, ParsedSeries, SeriesSpec, SCHEMA_VERSION};
pub use suites::{run_suite, DELTA_SHORT_CASES, MAIN_LEMMA_CASES, SUITES};
