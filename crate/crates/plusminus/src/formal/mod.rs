//! Curves, their formal groups and the Honda-type twists over the cyclotomic tower.

pub mod curve;
pub mod fgl;
pub mod honda;
pub mod points;

pub use curve::{preset, CurveParams};
pub use fgl::{formal_exp, formal_group_law, formal_log, invariant_differential, multiplication_series};
pub use honda::{epsilon_n, honda_check, honda_log, HondaCheck, KSeries};

pub use points::{
    comparison_series, local_point_direct, local_point_log, log_congruence_check, torsion_free_check,
    verify_trace_relations, LocalPoint, RelationCheck, TorsionCheck, TraceReport,
};
