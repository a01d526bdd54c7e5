#pragma once

#include "kinnet/panel.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kinnet {

struct FitResult {
  std::string model;    // "ols" | "fe" | "lmm"
  std::string response; // panel column name
  std::vector<std::string> names;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> p_values;
  double r2 = 0.0;             // OLS/FE coefficient of determination
  double marginal_r2 = 0.0;    // LMM: fixed-effects variance share
  double conditional_r2 = 0.0; // LMM: fixed + random variance share
  double log_likelihood = 0.0;
  double aic = 0.0; // always 2k - 2 logL
  int k_params = 0; // estimated parameters, variance components included
  double sigma2_alpha = 0.0;
  double sigma2_e = 0.0;
  double lambda = 0.0; // sigma2_alpha / sigma2_e at the optimum
  int n_obs = 0;
  int n_groups = 0;
  bool random_effect_degenerate = false;
  std::vector<double> residuals; // conditional residuals, fit order
};

struct LmmOptions {
  bool reml = false;
  double lambda_min = 1e-8;
  double lambda_max = 1e8;
  double tolerance = 1e-9;
  int max_iterations = 500;
  std::optional<double> lambda_fixed; // skip optimization, fit at this ratio
};

/// Ordinary least squares with intercept. Throws on rank deficiency, naming
/// the collinear columns. Likelihood is the Gaussian ML value, k counts the
/// coefficients plus the residual variance.
FitResult ols(const std::vector<double>& y,
              const std::vector<std::vector<double>>& columns,
              const std::vector<std::string>& names,
              const std::string& response);

/// OLS augmented with year dummies (first year is the reference level).
FitResult fixed_effects(const std::vector<double>& y,
                        const std::vector<std::vector<double>>& columns,
                        const std::vector<std::string>& names,
                        const std::vector<int>& years,
                        const std::string& response);

/// Random-intercept linear mixed model fit by maximum likelihood: the
/// profiled log-likelihood over lambda = sigma2_alpha/sigma2_e is maximized
/// by a coarse log-grid scan plus golden-section refinement. Wald z
/// p-values; conditional R2 = (var(X beta) + s2_a)/(var(X beta) + s2_a +
/// s2_e). A boundary solution at lambda_min is reported as degenerate with
/// an OLS-equivalent fit.
FitResult lmm_random_intercept(const std::vector<double>& y,
                               const std::vector<std::vector<double>>& columns,
                               const std::vector<std::string>& names,
                               const std::vector<int>& groups,
                               const std::string& response,
                               const LmmOptions& options = {});

/// Variance inflation factors; infinity marks perfect collinearity.
std::map<std::string, double> vif(const PanelFrame& frame,
                                  const std::vector<std::string>& predictors);

struct FitOutcome {
  std::optional<FitResult> fit;
  std::string error;
};

struct DirectionCell {
  std::string response;
  std::string socio_family; // direction 2 only: "hdi" or "pov"
  FitOutcome ols;
  FitOutcome fe;
  FitOutcome lmm;
};

/// Direction 1: socio outcome ~ the four dynastic metrics. OLS runs on
/// province means (no year terms); FE adds year dummies; LMM adds year
/// dummies and a province random intercept. Per-fit errors are captured,
/// the remaining fits still run.
std::vector<DirectionCell> run_direction1(const PanelFrame& frame,
                                          const LmmOptions& options = {});

/// Direction 2: each dynastic metric ~ socio + its 3-year lag, one cell per
/// (metric, socio family).
std::vector<DirectionCell> run_direction2(const PanelFrame& frame,
                                          const LmmOptions& options = {});

/// Sorted (theoretical, empirical) quantile pairs of the fit residuals;
/// theoretical quantiles at (i - 0.5)/n.
std::vector<std::pair<double, double>> qq_residuals(const FitResult& fit);

} // namespace kinnet
