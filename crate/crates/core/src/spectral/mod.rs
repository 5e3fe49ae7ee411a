//! Markov and Laplace operators on Cayley graphs and their spectra.

mod eigen;
mod identities;
mod operator;

pub use eigen::{
    dense_report, full_spectrum, full_spectrum_of, iterative_report, lambda1, lambda1_auto, Method, SpectralReport,
    DEFAULT_MAX_ITER, DEFAULT_TOL, DENSE_CAP,
};
pub use identities::{
    flattening_trajectory, flattening_trajectory_from, observation1_check, product_group_gap, quasirandom_bound,
    trace_identity_residual, trace_residuals, FlatteningPoint, ProductGap, QuasirandomBound,
};
pub use operator::{apply_markov, laplacian_form, CayleyOperator};
