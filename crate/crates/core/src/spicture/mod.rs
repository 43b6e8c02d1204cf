//! The entropy picture: evolution in the dimensionless thermal time `tau`
//! generated by the entropy operator `S = H / T`.

pub mod chart;
pub mod consistency;
pub mod evolve;
pub mod operator;
pub mod production;
pub mod uncertainty;
pub mod wick;

pub use chart::ThermalTimeChart;
pub use consistency::{
    generator_reading_divergence, picture_consistency, PictureMode, PictureReport,
};
pub use evolve::{
    equation_residuals, evolve_s, evolve_s_with, EvolveOptions, GeneratorSchedule, Propagation,
    STrajectory,
};
pub use operator::{eigen_solution, entropy_operator, EigenSolutionSpec, EntropyOperator};
pub use production::{entropy_production, hermitian_imaginary_part, EntropyProduction};
pub use uncertainty::{
    second_law_refinement, uncertainty_product, SecondLawVerdict, UncertaintyRecord,
};
pub use wick::{wick_factor, WickFactor};
