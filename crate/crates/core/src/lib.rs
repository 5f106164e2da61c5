//! Option and bond pricing when prices and short rates are driven by shot noise:
//! Poisson-arriving Gaussian jumps, optionally combined with a Brownian diffusion.
//!
//! The crate covers closed-form European option prices through two independent
//! evaluation routes ([`Backend::Series`] and [`Backend::Fourier`]), the Greeks
//! including sensitivities to the jump parameters, zero-coupon bond prices under
//! mean-reverting shot-noise short rates, Monte Carlo cross-checks, and residual
//! checks of the pricing equations.

pub mod error;
pub mod greeks;
pub mod jump_measure;
pub mod montecarlo;
pub mod normal;
pub mod option;
pub mod quadrature;
pub mod shortrate;
pub mod transform;
pub mod validation;

pub use error::{PricingError, Result};
pub use greeks::{
    bs_greeks, common_greeks, fd_sensitivity, identity_report, jump_greeks, FdEstimate, GreekSet,
    IdentityResidual, JumpGreekSet,
};
pub use jump_measure::{
    diffusion_moments, force_statistics, ArrivalRate, DiffusionMoments, ForceStatistics, GaussianJumpLaw,
};
pub use option::{
    bs_price, l_parameter, log_moneyness, parity_residual, payoff, price, AssetModel, OptionKind, OptionTerms,
    PriceResult,
};
pub use quadrature::QuadratureSpec;
pub use transform::{
    ccdf_plain, ccdf_tilted, cdf_plain, cdf_tilted, green_density, poisson_weights, transition_cdf, Backend,
    CharSpec, GreenArgument, GreenKernel, LValue, Measure, PoissonWeights, SeriesExpansion, Tail, TransitionLaw,
};
pub use shortrate::{
    a_general, a_shot, a_shot_substituted, a_vasicek, b_factor, bond_price, conditional_moments, ode_residual,
    zero_yield, BondPrice, BondTerms, BondVariant, OdeResidual, RateModel, RateMoments,
};
pub use montecarlo::{
    mc_bond_price, mc_discounted_forward, mc_option_price, mc_rate_moments, sample_shot_noise, McEstimate,
    RateMomentEstimates, RatePathSample, SimConfig,
};
pub use validation::{
    backend_agreement, bond_pide_residual, diffusion_convergence, option_pide_residual, parity_report, AgreementGrid,
    ConvergenceRow, DiffusionStudy, ExcludedPoint, FdSteps, ResidualReport, KINK_RADIUS,
};
