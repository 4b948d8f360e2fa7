#include "forecastlab/forecaster.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "forecastlab/errors.hpp"

namespace forecastlab {

namespace {

void validate_config(const FitConfig& cfg) {
    if (cfg.fourier_order < 1 || cfg.fourier_order > 5) {
        raise(Errc::InvalidArgument,
              "fourier_order must be in [1, 5] for monthly data, got " +
                  std::to_string(cfg.fourier_order));
    }
    if (cfg.n_changepoints < 0) {
        raise(Errc::InvalidArgument, "n_changepoints must be >= 0");
    }
    if (!(cfg.changepoint_range > 0.0) || cfg.changepoint_range > 1.0) {
        raise(Errc::InvalidArgument, "changepoint_range must be in (0, 1]");
    }
    if (!(cfg.lambda_delta >= 0.0) || !(cfg.lambda_season >= 0.0)) {
        raise(Errc::InvalidArgument, "penalties must be >= 0");
    }
}

double season_at(const AdditiveModel& model, int month_t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const int phase = month_t % 12;
    double value = 0.0;
    for (size_t j = 0; j < model.fourier_coeffs.size(); ++j) {
        const double angle = two_pi * static_cast<double>(j + 1) * phase / 12.0;
        value += model.fourier_coeffs[j][0] * std::sin(angle) +
                 model.fourier_coeffs[j][1] * std::cos(angle);
    }
    return value;
}

double trend_at(const AdditiveModel& model, double x) {
    double value = model.m + model.k * x;
    for (size_t l = 0; l < model.changepoints.size(); ++l) {
        const double hinge = x - model.changepoints[l];
        if (hinge > 0.0) value += model.deltas[l] * hinge;
    }
    return value;
}

}  // namespace

std::vector<double> changepoint_positions(int n, const FitConfig& cfg) {
    const int cap = std::max(0, n / 3 - 1);
    const int count = std::min(cfg.n_changepoints, cap);
    std::vector<double> positions(count);
    for (int l = 0; l < count; ++l) {
        positions[l] = cfg.changepoint_range * (l + 1) / (count + 1);
    }
    return positions;
}

Eigen::MatrixXd build_design_matrix(int n, const FitConfig& cfg) {
    validate_config(cfg);
    if (n < 2) {
        raise(Errc::DegenerateInput, "design matrix needs n >= 2, got " + std::to_string(n));
    }
    const std::vector<double> points = changepoint_positions(n, cfg);
    const int n_cp = static_cast<int>(points.size());
    const int n_cols = 2 + n_cp + 2 * cfg.fourier_order;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    Eigen::MatrixXd X(n, n_cols);
    for (int t = 0; t < n; ++t) {
        const double x = static_cast<double>(t) / (n - 1);
        X(t, 0) = 1.0;
        X(t, 1) = x;
        for (int l = 0; l < n_cp; ++l) {
            X(t, 2 + l) = std::max(0.0, x - points[l]);
        }
        const int phase = t % 12;
        for (int j = 1; j <= cfg.fourier_order; ++j) {
            const double angle = two_pi * j * phase / 12.0;
            X(t, 2 + n_cp + 2 * (j - 1)) = std::sin(angle);
            X(t, 2 + n_cp + 2 * (j - 1) + 1) = std::cos(angle);
        }
    }
    return X;
}

Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& y,
                            const Eigen::VectorXd& penalties) {
    if (X.rows() != y.size()) {
        raise(Errc::InvalidArgument, "solve_ridge: rows(X) != len(y)");
    }
    if (X.cols() != penalties.size()) {
        raise(Errc::InvalidArgument, "solve_ridge: penalties length != cols(X)");
    }
    for (Eigen::Index i = 0; i < penalties.size(); ++i) {
        if (!(penalties[i] >= 0.0) || !std::isfinite(penalties[i])) {
            raise(Errc::InvalidArgument, "solve_ridge: penalties must be finite and >= 0");
        }
    }

    Eigen::MatrixXd normal = X.transpose() * X;
    normal.diagonal() += penalties;
    const Eigen::VectorXd rhs = X.transpose() * y;

    const Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success) {
        raise(Errc::SingularSystem, "solve_ridge: regularized normal matrix is not PD");
    }
    Eigen::VectorXd beta = llt.solve(rhs);
    if (!beta.allFinite()) {
        raise(Errc::SingularSystem, "solve_ridge: non-finite solution");
    }
    return beta;
}

AdditiveModel fit_additive_model(std::span<const double> values, const FitConfig& cfg) {
    validate_config(cfg);
    const int n = static_cast<int>(values.size());
    if (n < 24) {
        raise(Errc::TooShortToFit,
              "fit needs at least 24 months, got " + std::to_string(n));
    }
    double max_value = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) raise(Errc::InvalidArgument, "fit: non-finite value");
        if (v < 0.0) raise(Errc::NonNegativeViolation, "fit: negative value");
        max_value = std::max(max_value, v);
    }

    AdditiveModel model;
    model.n_train = n;
    model.y_scale = max_value > 0.0 ? max_value : 1.0;
    model.config = cfg;
    model.changepoints = changepoint_positions(n, cfg);

    Eigen::VectorXd y(n);
    for (int t = 0; t < n; ++t) y[t] = values[t] / model.y_scale;

    const Eigen::MatrixXd X = build_design_matrix(n, cfg);
    const int n_cp = static_cast<int>(model.changepoints.size());
    Eigen::VectorXd penalties = Eigen::VectorXd::Zero(X.cols());
    penalties.segment(2, n_cp).setConstant(cfg.lambda_delta);
    penalties.tail(2 * cfg.fourier_order).setConstant(cfg.lambda_season);

    const Eigen::VectorXd beta = solve_ridge(X, y, penalties);
    model.m = beta[0];
    model.k = beta[1];
    model.deltas.assign(beta.data() + 2, beta.data() + 2 + n_cp);
    model.fourier_coeffs.resize(cfg.fourier_order);
    for (int j = 0; j < cfg.fourier_order; ++j) {
        model.fourier_coeffs[j] = {beta[2 + n_cp + 2 * j], beta[2 + n_cp + 2 * j + 1]};
    }
    return model;
}

std::vector<double> predict(const AdditiveModel& model, int horizon) {
    if (horizon < 0) raise(Errc::InvalidArgument, "predict: negative horizon");
    std::vector<double> out;
    out.reserve(horizon);
    for (int h = 1; h <= horizon; ++h) {
        const int t = model.n_train - 1 + h;
        const double x = static_cast<double>(t) / (model.n_train - 1);
        const double scaled = trend_at(model, x) + season_at(model, t);
        out.push_back(std::max(0.0, model.y_scale * scaled));
    }
    return out;
}

std::string model_to_json(const AdditiveModel& model) {
    nlohmann::json doc;
    doc["n_train"] = model.n_train;
    doc["y_scale"] = model.y_scale;
    doc["k"] = model.k;
    doc["m"] = model.m;
    doc["changepoints"] = model.changepoints;
    doc["deltas"] = model.deltas;
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [a, b] : model.fourier_coeffs) {
        coeffs.push_back(nlohmann::json::array({a, b}));
    }
    doc["fourier_coeffs"] = std::move(coeffs);
    doc["config"] = {
        {"fourier_order", model.config.fourier_order},
        {"n_changepoints", model.config.n_changepoints},
        {"changepoint_range", model.config.changepoint_range},
        {"lambda_delta", model.config.lambda_delta},
        {"lambda_season", model.config.lambda_season},
    };
    return doc.dump(2);
}

AdditiveModel model_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        AdditiveModel model;
        model.n_train = doc.at("n_train").get<int>();
        model.y_scale = doc.at("y_scale").get<double>();
        model.k = doc.at("k").get<double>();
        model.m = doc.at("m").get<double>();
        model.changepoints = doc.at("changepoints").get<std::vector<double>>();
        model.deltas = doc.at("deltas").get<std::vector<double>>();
        for (const auto& pair : doc.at("fourier_coeffs")) {
            model.fourier_coeffs.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        }
        const auto& cfg = doc.at("config");
        model.config.fourier_order = cfg.at("fourier_order").get<int>();
        model.config.n_changepoints = cfg.at("n_changepoints").get<int>();
        model.config.changepoint_range = cfg.at("changepoint_range").get<double>();
        model.config.lambda_delta = cfg.at("lambda_delta").get<double>();
        model.config.lambda_season = cfg.at("lambda_season").get<double>();

        if (model.deltas.size() != model.changepoints.size()) {
            raise(Errc::ParseFailure, "model JSON: deltas/changepoints length mismatch");
        }
        if (model.n_train < 2 || !(model.y_scale > 0.0)) {
            raise(Errc::ParseFailure, "model JSON: invalid n_train or y_scale");
        }
        double prev = 0.0;
        for (double s : model.changepoints) {
            if (!(s > prev) || !(s < 1.0)) {
                raise(Errc::ParseFailure, "model JSON: changepoints not increasing in (0,1)");
            }
            prev = s;
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::ParseFailure, std::string("model JSON: ") + e.what());
    }
}

}  // namespace forecastlab
