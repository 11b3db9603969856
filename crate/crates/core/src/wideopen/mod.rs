//! Integration on the wide opens of the covering: local models, Laurent
//! expansions, pole reduction and Berkovich-Coleman integrals of the basis
//! forms.

mod expand;
mod integrate;
mod model;
mod reduce;

pub use model::{Hole, VertexModel};
pub use expand::{divide_by_interior_pole, expand, pole_site, truncation_length, Budget, Expansion, PoleSite};
pub use reduce::{pole_reduce, Reduced};
pub use integrate::{integrate_on_model, local_point, BasisIntegrator, LocalForm, LocalPoint, Parametrized};
