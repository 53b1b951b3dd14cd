//! Laws on the real line, their moments and transforms, and limit theorems.

mod classical;
mod law;
mod moments;

pub use classical::{
    bernoulli_law, binomial_law, binomial_stats, coin_law, gaussian_fourier, gaussian_law, gaussian_moment, poisson_fourier, poisson_law,
    poisson_moment, uniform_law, BinomialStats, ClassicalLaw, PoissonMoment, PARTITION_ENUMERATION_LIMIT,
};
pub use law::{cauchy_transform, convolve, stieltjes_density, CauchyTransform, DensityPart, Law, MomentSequence};
pub use moments::{
    clt_moment_gap, complex_gaussian_moment, convolution_power, graph_loop_moment, hankel_admissible, hankel_check,
    orthopoly_from_moments, plt_distance, sn_fixed_point_law, sn_fixed_point_law_sampled,
    sn_no_fixed_point_probability, su2_character_moment, wick, FixedPointLaw, MomentGap, Su2Moment,
    SN_DEFAULT_SAMPLES, SN_EXACT_LIMIT,
};
