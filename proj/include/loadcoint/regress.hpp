#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loadcoint/errors.hpp"
#include "loadcoint/features.hpp"
#include "loadcoint/ingest.hpp"

namespace loadcoint {

enum class Method { ols, exact_ml_ar1 };

inline const char* method_name(Method m) { return m == Method::ols ? "ols" : "exact_ml_ar1"; }

struct FitResult {
  ModelId model = ModelId::A;
  Method method = Method::ols;
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  /// y - X beta on the training rows, untransformed.
  Eigen::VectorXd residuals;
  double ssr = 0.0;
  /// AR(1) disturbance parameter; 0 for OLS.
  double rho = 0.0;
  double lambda = 0.0;
  double log_likelihood = 0.0;
  FeatureConfig features;
  int rank = 0;
  bool rank_deficient = false;

  double coefficient(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return coefficients(static_cast<Eigen::Index>(i));
    throw InputError("no coefficient named '" + std::string(name) + "'");
  }
};

struct LeastSquares {
  Eigen::VectorXd beta;
  int rank = 0;
  bool rank_deficient = false;
};

inline constexpr double kRankThreshold = 1e-10;
inline constexpr double kRidgeScale = 1e-8;

/// Least squares on column-equilibrated X via pivoted Householder QR. Below
/// full numerical rank, a ridge of 1e-8 x mean squared column norm is added
/// and re-applied around the previous iterate (iterated Tikhonov), which
/// converges to the minimum-norm solution without a one-shot ridge bias.
inline LeastSquares solve_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (n < k)
    throw InputError("regression needs rows >= columns (" + std::to_string(n) + " < " + std::to_string(k) + ")");

  Eigen::VectorXd scale = x.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(kRankThreshold);
  LeastSquares out;
  out.rank = static_cast<int>(qr.rank());
  Eigen::VectorXd b;
  if (out.rank == k) {
    b = qr.solve(y);
  } else {
    out.rank_deficient = true;
    const double alpha = kRidgeScale * xs.colwise().squaredNorm().mean();
    const double root = std::sqrt(alpha);
    Eigen::MatrixXd aug(n + k, k);
    aug.topRows(n) = xs;
    aug.bottomRows(k) = root * Eigen::MatrixXd::Identity(k, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> aqr(aug);
    Eigen::VectorXd rhs(n + k);
    rhs.head(n) = y;
    b = Eigen::VectorXd::Zero(k);
    for (int pass = 0; pass < 12; ++pass) {
      rhs.tail(k) = root * b;
      Eigen::VectorXd next = aqr.solve(rhs);
      const double step = (next - b).norm();
      b = std::move(next);
      if (step <= 1e-15 * b.norm()) break;
    }
  }
  out.beta = b.cwiseQuotient(scale);
  return out;
}

/// Prais-Winsten transform: keeps the first observation scaled by sqrt(1-rho^2).
inline Eigen::MatrixXd ar1_transform(const Eigen::MatrixXd& m, double rho) {
  Eigen::MatrixXd t(m.rows(), m.cols());
  if (m.rows() == 0) return t;
  t.row(0) = std::sqrt(1.0 - rho * rho) * m.row(0);
  for (Eigen::Index i = 1; i < m.rows(); ++i) t.row(i) = m.row(i) - rho * m.row(i - 1);
  return t;
}

/// Exact Gaussian log-likelihood of y = X beta + u, u AR(1), with the
/// innovation variance concentrated out.
inline double ar1_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                                 double rho) {
  const Eigen::VectorXd e = y - x * beta;
  const double s = ar1_transform(e, rho).squaredNorm();
  const double n = static_cast<double>(y.size());
  const double floor = std::max(s, 1e-300);
  return -0.5 * n * (std::log(2.0 * std::numbers::pi) + 1.0 + std::log(floor / n)) +
         0.5 * std::log(1.0 - rho * rho);
}

namespace detail {

inline FitResult make_fit(const DesignMatrix& dm, Method method, const LeastSquares& ls, double rho) {
  FitResult f;
  f.model = dm.model;
  f.method = method;
  f.names = dm.names;
  f.coefficients = ls.beta;
  f.residuals = dm.y - dm.x * ls.beta;
  f.ssr = f.residuals.squaredNorm();
  f.rho = rho;
  f.rank = ls.rank;
  f.rank_deficient = ls.rank_deficient;
  f.log_likelihood = ar1_log_likelihood(dm.x, dm.y, ls.beta, rho);
  return f;
}

}  // namespace detail

inline FitResult ols_fit(const DesignMatrix& dm) {
  return detail::make_fit(dm, Method::ols, solve_least_squares(dm.x, dm.y), 0.0);
}

inline constexpr double kRhoBound = 0.999;
inline constexpr double kRhoTolerance = 1e-6;
inline constexpr int kGoldenMaxIterations = 200;

/// Exact ML for a linear model with AR(1) disturbances. The likelihood is
/// concentrated over beta (GLS) and sigma^2; rho is found by golden-section
/// search inside the best cell of a coarse scan. Rows are one AR(1) chain.
inline FitResult exact_ml_ar1_fit(const DesignMatrix& dm) {
  const Eigen::Index n = dm.x.rows();
  if (n < dm.x.cols() + 1)
    throw InputError("exact ML needs rows >= columns + 1 (" + std::to_string(n) + " rows, " +
                     std::to_string(dm.x.cols()) + " columns)");

  const LeastSquares ols = solve_least_squares(dm.x, dm.y);
  const double ols_ssr = (dm.y - dm.x * ols.beta).squaredNorm();
  // A perfect fit leaves rho unidentified; tie-break to 0.
  if (ols_ssr <= 1e-24 * std::max(dm.y.squaredNorm(), 1e-300))
    return detail::make_fit(dm, Method::exact_ml_ar1, ols, 0.0);

  auto profile = [&](double rho) {
    const LeastSquares gls = solve_least_squares(ar1_transform(dm.x, rho), ar1_transform(dm.y, rho));
    return std::pair{ar1_log_likelihood(dm.x, dm.y, gls.beta, rho), gls};
  };

  constexpr int kScan = 41;
  const double step = 2.0 * kRhoBound / (kScan - 1);
  int best = 0;
  double best_ll = -INFINITY;
  for (int i = 0; i < kScan; ++i) {
    const double ll = profile(-kRhoBound + i * step).first;
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }
  double lo = -kRhoBound + std::max(best - 1, 0) * step;
  double hi = -kRhoBound + std::min(best + 1, kScan - 1) * step;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = profile(c).first;
  double fd = profile(d).first;
  int iterations = 0;
  while (hi - lo >= kRhoTolerance) {
    if (++iterations > kGoldenMaxIterations)
      throw DegeneracyError("exact ML", "rho search did not converge after 200 iterations");
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = profile(c).first;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = profile(d).first;
    }
  }
  double rho = 0.5 * (lo + hi);
  auto [ll, gls] = profile(rho);
  const double ll_ols = ar1_log_likelihood(dm.x, dm.y, ols.beta, 0.0);
  if (!(ll >= ll_ols)) return detail::make_fit(dm, Method::exact_ml_ar1, ols, 0.0);
  return detail::make_fit(dm, Method::exact_ml_ar1, gls, rho);
}

struct LambdaPolicy {
  enum class Kind { grid, fixed, off };
  Kind kind = Kind::grid;
  double value = 0.0;

  static LambdaPolicy grid() { return {Kind::grid, 0.0}; }
  static LambdaPolicy fixed(double v) { return {Kind::fixed, v}; }
  static LambdaPolicy off() { return {Kind::off, 0.0}; }
};

inline FitResult fit_design(const DesignMatrix& dm, Method method) {
  return method == Method::ols ? ols_fit(dm) : exact_ml_ar1_fit(dm);
}

/// Fits one model over the legal training days. The grid policy keeps the
/// smallest-SSR decay from {0, 0.1, ..., 0.9}; near-ties go to the smaller.
inline FitResult fit_model(const SeriesWindow& w, ModelId model, Method method, LambdaPolicy policy = {},
                           const FeatureConfig& cfg = {}) {
  const auto days = legal_training_days(w, model, cfg);
  auto fit_at = [&](double lambda) {
    FitResult f = fit_design(design_matrix(w, model, days, lambda, cfg), method);
    f.lambda = lambda;
    f.features = cfg;
    return f;
  };
  switch (policy.kind) {
    case LambdaPolicy::Kind::off: return fit_at(0.0);
    case LambdaPolicy::Kind::fixed: return fit_at(policy.value);
    case LambdaPolicy::Kind::grid: break;
  }
  std::optional<FitResult> best;
  for (int k = 0; k <= 9; ++k) {
    FitResult f = fit_at(k / 10.0);
    if (!best || f.ssr < best->ssr * (1.0 - 1e-12)) best = std::move(f);
  }
  return std::move(*best);
}

inline std::array<FitResult, 3> fit_models(const SeriesWindow& w, Method method, LambdaPolicy policy = {},
                                           const FeatureConfig& cfg = {}) {
  return {fit_model(w, ModelId::A, method, policy, cfg), fit_model(w, ModelId::B, method, policy, cfg),
          fit_model(w, ModelId::C, method, policy, cfg)};
}

inline constexpr double kMinPredictionMw = 1.0;

struct ModelForecast {
  ModelId model = ModelId::A;
  FitResult fit;
  DayProfile prediction;
  /// Hours whose raw prediction fell below 1 MW and were clamped.
  std::vector<int> clamped_hours;
};

inline ModelForecast forecast_model(const SeriesWindow& w, const FitResult& fit) {
  const Eigen::MatrixXd reg = day_regressors(w, fit.model, 0, fit.lambda, fit.features);
  if (reg.cols() != fit.coefficients.size())
    throw InputError(std::string("coefficient count does not match model ") + model_name(fit.model));
  const Eigen::VectorXd raw = reg * fit.coefficients;
  HourValues v{};
  std::vector<int> clamped;
  for (int h = 1; h <= kHours; ++h) {
    double p = raw(h - 1);
    if (!std::isfinite(p))
      throw DegeneracyError("estimation", std::string("model ") + model_name(fit.model) + " predicted a non-finite load");
    if (p < kMinPredictionMw) {
      p = kMinPredictionMw;
      clamped.push_back(h);
    }
    v[h - 1] = p;
  }
  return {fit.model, fit, DayProfile(w.target_date(), v, ProfileKind::load_mw), std::move(clamped)};
}

/// Target-day predictions in A, B, C order. All three fits are required.
inline std::array<ModelForecast, 3> forecast_day(const SeriesWindow& w, std::span<const FitResult> fits) {
  auto find = [&](ModelId id) -> const FitResult& {
    for (const auto& f : fits)
      if (f.model == id) return f;
    throw InputError(std::string("forecast needs a fit for model ") + model_name(id));
  };
  return {forecast_model(w, find(ModelId::A)), forecast_model(w, find(ModelId::B)),
          forecast_model(w, find(ModelId::C))};
}

/// Hourwise mean of three same-day profiles; order-independent bit for bit.
inline DayProfile ensemble_mean(std::span<const DayProfile> profiles) {
  if (profiles.size() != 3) throw InputError("ensemble needs exactly three predictions");
  const Date date = profiles[0].date();
  for (const auto& p : profiles)
    if (p.date() != date) throw InputError("ensemble members must share a date");
  HourValues v{};
  for (int h = 1; h <= kHours; ++h) {
    std::array<double, 3> xs = {profiles[0].at(h), profiles[1].at(h), profiles[2].at(h)};
    std::sort(xs.begin(), xs.end());
    // Offsets from the smallest keep identical members exact.
    v[h - 1] = xs[0] + ((xs[1] - xs[0]) + (xs[2] - xs[0])) / 3.0;
  }
  return DayProfile(date, v, profiles[0].kind());
}

inline DayProfile ensemble_mean(const std::array<ModelForecast, 3>& forecasts) {
  const std::array<DayProfile, 3> p = {forecasts[0].prediction, forecasts[1].prediction, forecasts[2].prediction};
  return ensemble_mean(std::span<const DayProfile>(p));
}

}  // namespace loadcoint
