//! Fixed workloads shared by the criterion benchmarks.

use shotnoise::{AssetModel, OptionKind, OptionTerms, RateModel};

/// At-the-money one-year call under pure shot noise.
pub fn reference_option() -> (OptionTerms, AssetModel) {
    let terms = OptionTerms::new(100.0, 100.0, 1.0, 0.02, 0.0, OptionKind::Call).expect("valid terms");
    let model = AssetModel::pure_jump(1.0, -0.05, 0.15).expect("valid model");
    (terms, model)
}

/// The same contract with a diffusion component added.
pub fn reference_jump_diffusion() -> (OptionTerms, AssetModel) {
    let (terms, model) = reference_option();
    (terms, model.with_sigma(0.2).expect("valid sigma"))
}

/// Short-rate model with both a diffusion and a jump component.
pub fn reference_rates() -> RateModel {
    RateModel::new(0.5, 0.03, 0.01, 2.0, 0.01, 0.02).expect("valid rate model")
}
