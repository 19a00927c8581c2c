//! Partitions, Young tableaux, symmetric-group characters and the `Φ`
//! function on the probability simplex.
//!
//! Real quantities are [`Interval`]s with outward rounding, so every
//! inequality reported as holding is proven at the working precision.
//! [`phi_d`] uses `d` copies of `θ`: `Φ_d(γ) = Φ(θ, ..., θ, γ)` with
//! `dθ + γ = 1`.

mod character;
mod interval;
mod partition;
mod phi;

pub use character::{character_value, CHARACTER_CAP};
pub use interval::{Interval, DEFAULT_PREC};
pub use partition::{Partition, Tableau};
pub use phi::{
    check_l1, check_push_down, golden_section_max, ln_phi, ln_phi_d, ln_phi_partition,
    maximize_added_row, optimal_added_row_length, phi, phi_d, phi_of_partition, AddedRowMax,
    L1Check, PushDownCheck,
};
