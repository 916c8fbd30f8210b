//! Graded homological algebra for the cohomology computations: F₂ and
//! integral Mayer–Vietoris solving, Bocksteins, the Gysin sequence, wedge
//! assembly, ring-table duality checks, Thaddeus and Wall numbers.

pub mod bockstein;
pub mod f2;
pub mod graded;
pub mod gysin;
pub mod invariants;
pub mod mv;
pub mod ring;
pub mod scenario;
pub mod snf;
pub mod zmod;

pub use bockstein::{bockstein_check, BocksteinData};
pub use f2::{F2Matrix, GradedF2Space, NamedMap};
pub use graded::{assemble_decomposition, suspension_shift, wedge_sum, GradedGroup};
pub use gysin::{gysin_solve, solve_lambda, EulerAction};
pub use invariants::{bernoulli, thaddeus_check, wall_invariants, WallInvariants};
pub use mv::{resolve_extension, F2Solution};
pub use ring::{ring_table_check, RingTable};
pub use scenario::{solve, solve_bundled, Scenario, ScenarioReport};
pub use snf::{smith_normal_form, IntMatrix, SnfResult};
