//! Parameter studies, configuration, reports and the command line.
//!
//! Every study builds synthetic data from the configured Sobolev indices,
//! solves the nonlocal problem along a sweep, and compares each row against an
//! independently computed reference:
//!
//! | study            | swept | measured                 | reference            |
//! |------------------|-------|--------------------------|----------------------|
//! | `converge-delta` | δ     | nonlocal solution        | classical solution   |
//! | `converge-beta`  | β     | nonlocal solution        | classical solution   |
//! | `regularity`     | t     | fitted coefficient decay | predicted decay      |
//! | `asymptotics`    | r     | routed multiplier        | large-r expansion    |
//! | `temporal`       | h     | forward quotient         | analytic derivative  |

pub mod cli;
pub mod config;
pub mod report;
pub mod studies;

pub use config::{OutputFormat, StudyConfig, Sweep};
pub use report::{Row, StudyKind, StudyReport, Verdict};
pub use studies::{
    check_temporal_admissibility, study_asymptotics, study_beta_convergence, study_delta_convergence,
    study_regularity, study_temporal,
};
