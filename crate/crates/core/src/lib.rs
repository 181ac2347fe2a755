pub mod cli;
pub mod exactalg;
pub mod localization;
pub mod partitions;
pub mod series;
pub mod wallcross;
