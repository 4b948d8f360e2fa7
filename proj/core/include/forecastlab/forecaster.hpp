#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forecastlab {

struct FitConfig {
    /// Yearly harmonics K; at most 5 with 12 samples per period.
    int fourier_order = 4;
    /// Requested trend changepoints; the effective count shrinks on
    /// short series (see changepoint_positions).
    int n_changepoints = 10;
    /// Changepoints are placed over the first fraction of training time.
    double changepoint_range = 0.8;
    /// L2 penalty on changepoint slope adjustments.
    double lambda_delta = 1.0;
    /// L2 penalty on Fourier coefficients.
    double lambda_season = 0.1;
};

/// Additive model for a monthly series: piecewise-linear trend over
/// normalized time x = t/(n-1) plus a yearly Fourier component over the
/// month phase t mod 12, fitted on values scaled by y_scale.
///
///   scaled(t) = m + k*x + sum_l delta_l * max(0, x - s_l)
///             + sum_j a_j*sin(2*pi*j*(t mod 12)/12) + b_j*cos(...)
struct AdditiveModel {
    int n_train = 0;
    double y_scale = 1.0;
    double k = 0.0;  // base slope, scaled units per unit normalized time
    double m = 0.0;  // offset, scaled units
    std::vector<double> changepoints;                   // s_l, strictly increasing in (0,1)
    std::vector<double> deltas;                         // one per changepoint
    std::vector<std::array<double, 2>> fourier_coeffs;  // (a_j, b_j), j = 1..K
    FitConfig config;
};

/// Changepoint positions for an n-month training window: uniform over
/// the first changepoint_range fraction of normalized time, count
/// min(cfg.n_changepoints, max(0, n/3 - 1)).
std::vector<double> changepoint_positions(int n, const FitConfig& cfg);

/// Design matrix with rows t = 0..n-1 and columns
/// [1, x_t, hinge_1..hinge_S, sin_1, cos_1, .., sin_K, cos_K].
Eigen::MatrixXd build_design_matrix(int n, const FitConfig& cfg);

/// argmin ||X*b - y||^2 + sum_i penalties_i * b_i^2 via the regularized
/// normal equations and a dense symmetric positive-definite solve.
Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& y,
                            const Eigen::VectorXd& penalties);

/// Fit on at least 24 months of non-negative values. The intercept and
/// base slope are unpenalized; hinges carry lambda_delta and Fourier
/// columns lambda_season.
AdditiveModel fit_additive_model(std::span<const double> values, const FitConfig& cfg = {});

/// Point forecasts for months n_train..n_train+horizon-1, clipped at 0.
std::vector<double> predict(const AdditiveModel& model, int horizon);

/// Round-trip-exact JSON serialization of a fitted model.
std::string model_to_json(const AdditiveModel& model);
AdditiveModel model_from_json(std::string_view text);

}  // namespace forecastlab
