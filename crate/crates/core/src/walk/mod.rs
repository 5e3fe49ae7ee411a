//! Random walks: exact convolution on enumerated groups, Monte Carlo walks
//! tracked through several primes, and free-group return probabilities.

pub mod exact;
mod free_group;
mod monte_carlo;

pub use exact::{
    convolve_step, equidistribution_test, return_probability, subgroup_mass, Distribution, Equidistribution, Powers,
    ReturnProbability,
};
pub use free_group::{
    free_group_return_oracle, free_group_return_sequence, kesten_radius, root_sequence, FreeGroupReturn,
    MAX_EXACT_STEPS,
};
pub use monte_carlo::{
    decay_fit, monte_carlo_walk, noise_floor, nonconcentration_fit, strong_approx_scan, DecayFit, SamplePath,
    ScanEntry, ScanOutcome, Target, TargetStats, WalkSampler, WalkStats, MIN_FIT_POINTS,
};
