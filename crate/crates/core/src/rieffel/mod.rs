//! Rieffel deformation of functions on `R^{2n}` (n = 1, 2) under translations,
//! discretized on a periodic grid.
//!
//! Coordinates are ordered `(x_1..x_n, p_1..p_n)` with `J = [[0, I], [-I, 0]]`,
//! so `{x, p} = 1`. The Moyal product is normalized by
//! `e^{ikz} * e^{ilz} = e^{-(i hbar/2) k^T J l} e^{i(k+l)z}`, which gives
//! `f * g = fg + (i hbar/2){f, g} + O(hbar^2)`.

mod affine;
mod category;
pub mod convergence;
mod grid;
mod moyal;
pub mod profiles;
mod spectral;
mod weyl_transform;

pub use affine::{equivariance_defect, morphism_star_defect, pullback, AffineSymplecticMap};
pub use category::{
    rieffel_chain_samples, AffineArrow, RClass, RClassObject, RQuant, RQuantObject,
    RieffelEta, RieffelLimitFunctor, RieffelPhi, RieffelQuantizationFunctor,
};
pub use grid::{Grid2n, GridDescriptor, GridFunction};
pub use moyal::{
    dirac_defect_grid, moyal_product, moyal_product_with, von_neumann_defect_grid, MoyalOptions,
};
pub use spectral::{gradient, lie_derivative, poisson_bracket_grid, translate};
pub use weyl_transform::{
    displacement_matrix, homomorphism_residual, momentum_matrix, position_matrix, weyl_transform,
    weyl_transform_with, WeylMatrix, WeylTransformOptions,
};

#[derive(Debug, thiserror::Error)]
pub enum RieffelError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid functions live on different grids")]
    GridMismatch,
    #[error("expected a vector of length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),
    #[error("spectral content leaves the band: aliased fraction {ratio:.3e}")]
    Aliasing { ratio: f64 },
    #[error("function does not decay at the boundary: edge/peak ratio {ratio:.3e}")]
    Leakage { ratio: f64 },
    #[error("map is not symplectic: residual {0:.3e}")]
    NotSymplectic(f64),
    #[error("map is not invertible")]
    Singular,
    #[error("support escapes the domain under the map")]
    SupportEscapes,
    #[error("truncation {dim} too small: trace residual {residual:.3e}")]
    Truncation { dim: usize, residual: f64 },
    #[error("operation needs n = {0}")]
    Unsupported(usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("format: {0}")]
    Format(String),
}
