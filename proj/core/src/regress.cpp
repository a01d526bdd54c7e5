#include "kinnet/regress.hpp"

#include "kinnet/dist.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace kinnet {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::MatrixXd design_matrix(const std::vector<std::vector<double>>& columns,
                              std::size_t n) {
  Eigen::MatrixXd x(n, columns.size() + 1);
  x.col(0).setOnes();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) {
      throw std::invalid_argument("regression: column length mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = columns[j][i];
    }
  }
  return x;
}

std::vector<std::string> with_intercept(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  out.reserve(names.size() + 1);
  out.emplace_back("intercept");
  out.insert(out.end(), names.begin(), names.end());
  return out;
}

// Relative test: rounding noise from summing identical values must count as
// zero variance.
bool zero_variance(const Eigen::VectorXd& y) {
  const double syy = (y.array() - y.mean()).square().sum();
  return syy <= 1e-20 * std::max(1.0, y.squaredNorm());
}

void check_full_rank(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr,
                     const std::vector<std::string>& names) {
  const auto rank = qr.rank();
  const auto p = qr.cols();
  if (rank == p) return;
  const auto& perm = qr.colsPermutation().indices();
  std::string collinear;
  for (Eigen::Index i = rank; i < p; ++i) {
    if (!collinear.empty()) collinear += ", ";
    collinear += names[static_cast<std::size_t>(perm[i])];
  }
  throw std::runtime_error("regression: design matrix is rank deficient; collinear columns: " +
                           collinear);
}

} // namespace

FitResult ols(const std::vector<double>& y,
              const std::vector<std::vector<double>>& columns,
              const std::vector<std::string>& names,
              const std::string& response) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("ols: empty sample");
  const Eigen::MatrixXd x = design_matrix(columns, n);
  const Eigen::Index p = x.cols();
  if (static_cast<Eigen::Index>(n) <= p) {
    throw std::runtime_error("ols: need more observations than parameters");
  }
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  const std::vector<std::string> all_names = with_intercept(names);
  check_full_rank(qr, all_names);

  const Eigen::VectorXd beta = qr.solve(yv);
  const Eigen::VectorXd residuals = yv - x * beta;
  const double rss = residuals.squaredNorm();
  const double y_mean = yv.mean();
  const double syy = (yv.array() - y_mean).square().sum();

  FitResult fit;
  fit.model = "ols";
  fit.response = response;
  fit.names = all_names;
  fit.n_obs = static_cast<int>(n);
  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  fit.residuals.assign(residuals.data(), residuals.data() + residuals.size());
  fit.r2 = zero_variance(yv) ? 0.0 : 1.0 - rss / syy;

  const double df = static_cast<double>(n) - static_cast<double>(p);
  const double sigma2_hat = rss / df;
  const Eigen::MatrixXd xtx_inv =
      (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.std_errors.resize(static_cast<std::size_t>(p));
  fit.p_values.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se = std::sqrt(std::max(0.0, sigma2_hat * xtx_inv(j, j)));
    fit.std_errors[static_cast<std::size_t>(j)] = se;
    if (se > 0.0) {
      fit.p_values[static_cast<std::size_t>(j)] =
          dist::students_t_two_sided_p(beta[j] / se, df);
    } else {
      fit.p_values[static_cast<std::size_t>(j)] = beta[j] == 0.0 ? 1.0 : 0.0;
    }
  }

  const double sigma2_ml = rss / static_cast<double>(n);
  fit.sigma2_e = sigma2_ml;
  fit.log_likelihood =
      sigma2_ml > 0.0
          ? -0.5 * static_cast<double>(n) * (kLog2Pi + std::log(sigma2_ml) + 1.0)
          : std::numeric_limits<double>::infinity();
  fit.k_params = static_cast<int>(p) + 1;
  fit.aic = 2.0 * fit.k_params - 2.0 * fit.log_likelihood;
  return fit;
}

namespace {

// Year dummy columns, first (reference) year omitted.
void append_year_dummies(std::vector<std::vector<double>>& columns,
                         std::vector<std::string>& names,
                         const std::vector<int>& years) {
  std::set<int> distinct(years.begin(), years.end());
  if (distinct.size() < 2) {
    throw std::runtime_error("fixed_effects: year column needs at least 2 levels");
  }
  bool first = true;
  for (int year : distinct) {
    if (first) { // reference level
      first = false;
      continue;
    }
    std::vector<double> dummy(years.size(), 0.0);
    for (std::size_t i = 0; i < years.size(); ++i) {
      if (years[i] == year) dummy[i] = 1.0;
    }
    columns.push_back(std::move(dummy));
    names.push_back("year_" + std::to_string(year));
  }
}

} // namespace

FitResult fixed_effects(const std::vector<double>& y,
                        const std::vector<std::vector<double>>& columns,
                        const std::vector<std::string>& names,
                        const std::vector<int>& years,
                        const std::string& response) {
  if (years.size() != y.size()) {
    throw std::invalid_argument("fixed_effects: year column length mismatch");
  }
  std::vector<std::vector<double>> cols = columns;
  std::vector<std::string> all_names = names;
  append_year_dummies(cols, all_names, years);
  FitResult fit = ols(y, cols, all_names, response);
  fit.model = "fe";
  return fit;
}

namespace {

struct GroupIndex {
  std::vector<std::vector<std::size_t>> rows; // per dense group
  std::vector<int> dense;                     // per observation
};

GroupIndex make_group_index(const std::vector<int>& groups) {
  GroupIndex out;
  out.dense.resize(groups.size());
  std::map<int, int> remap;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto [it, inserted] = remap.emplace(groups[i], static_cast<int>(remap.size()));
    if (inserted) out.rows.emplace_back();
    out.dense[i] = it->second;
    out.rows[static_cast<std::size_t>(it->second)].push_back(i);
  }
  return out;
}

struct LmmProfile {
  double log_likelihood = 0.0;
  Eigen::VectorXd beta;
  Eigen::MatrixXd information; // X' V^-1 X
  double sigma2_e = 0.0;
  double quad_form = 0.0; // r' V^-1 r
};

// Profiled fit at a fixed variance ratio lambda. V_g^-1 = I - c_g 11' with
// c_g = lambda/(1 + lambda n_g); log|V_g| = log(1 + lambda n_g).
LmmProfile profile_at(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const GroupIndex& index, double lambda, bool reml) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();

  Eigen::MatrixXd a = x.transpose() * x;
  Eigen::VectorXd b = x.transpose() * y;
  double log_det_v = 0.0;
  for (const auto& rows : index.rows) {
    const double ng = static_cast<double>(rows.size());
    const double c = lambda / (1.0 + lambda * ng);
    log_det_v += std::log1p(lambda * ng);
    if (c == 0.0) continue;
    Eigen::VectorXd sx = Eigen::VectorXd::Zero(p);
    double sy = 0.0;
    for (std::size_t i : rows) {
      sx += x.row(static_cast<Eigen::Index>(i)).transpose();
      sy += y[static_cast<Eigen::Index>(i)];
    }
    a.noalias() -= c * sx * sx.transpose();
    b.noalias() -= c * sy * sx;
  }

  LmmProfile out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  out.beta = ldlt.solve(b);
  out.information = a;

  const Eigen::VectorXd r = y - x * out.beta;
  double quad = 0.0;
  for (const auto& rows : index.rows) {
    const double ng = static_cast<double>(rows.size());
    const double c = lambda / (1.0 + lambda * ng);
    double ss = 0.0, s = 0.0;
    for (std::size_t i : rows) {
      const double ri = r[static_cast<Eigen::Index>(i)];
      ss += ri * ri;
      s += ri;
    }
    quad += ss - c * s * s;
  }
  out.quad_form = quad;

  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  if (!reml) {
    out.sigma2_e = quad / nd;
    out.log_likelihood =
        -0.5 * (nd * (kLog2Pi + std::log(out.sigma2_e) + 1.0) + log_det_v);
  } else {
    out.sigma2_e = quad / (nd - pd);
    double log_det_a = 0.0;
    const Eigen::VectorXd d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i) log_det_a += std::log(d[i]);
    out.log_likelihood =
        -0.5 * ((nd - pd) * (kLog2Pi + std::log(out.sigma2_e) + 1.0) + log_det_v +
                log_det_a);
  }
  return out;
}

} // namespace

FitResult lmm_random_intercept(const std::vector<double>& y,
                               const std::vector<std::vector<double>>& columns,
                               const std::vector<std::string>& names,
                               const std::vector<int>& groups,
                               const std::string& response,
                               const LmmOptions& options) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("lmm: empty sample");
  if (groups.size() != n) throw std::invalid_argument("lmm: group column length mismatch");
  const GroupIndex index = make_group_index(groups);
  if (index.rows.size() < 2) {
    throw std::runtime_error("lmm: need at least 2 groups");
  }
  if (std::none_of(index.rows.begin(), index.rows.end(),
                   [](const auto& rows) { return rows.size() >= 2; })) {
    throw std::runtime_error("lmm: need at least one group with 2+ observations");
  }

  const Eigen::MatrixXd x = design_matrix(columns, n);
  const Eigen::Index p = x.cols();
  if (static_cast<Eigen::Index>(n) <= p) {
    throw std::runtime_error("lmm: need more observations than parameters");
  }
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    check_full_rank(qr, with_intercept(names));
  }
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));
  if (zero_variance(yv)) {
    throw std::runtime_error("lmm: zero-variance response");
  }

  double lambda_hat;
  bool degenerate = false;
  if (options.lambda_fixed) {
    lambda_hat = *options.lambda_fixed;
  } else {
    // coarse log-grid scan, then golden-section refinement in the bracket
    const double t_lo = std::log(options.lambda_min);
    const double t_hi = std::log(options.lambda_max);
    const int grid = 129;
    int evals = 0;
    auto value_at = [&](double t) {
      ++evals;
      return profile_at(x, yv, index, std::exp(t), options.reml).log_likelihood;
    };
    double best_t = t_lo;
    double best_value = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < grid; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / (grid - 1);
      const double value = value_at(t);
      if (value > best_value) {
        best_value = value;
        best_t = t;
        best_i = i;
      }
    }
    double lo = t_lo + (t_hi - t_lo) * std::max(0, best_i - 1) / (grid - 1);
    double hi = t_lo + (t_hi - t_lo) * std::min(grid - 1, best_i + 1) / (grid - 1);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - golden * (hi - lo);
    double x2 = lo + golden * (hi - lo);
    double f1 = value_at(x1);
    double f2 = value_at(x2);
    while (hi - lo > options.tolerance) {
      if (evals > options.max_iterations + grid) {
        throw std::runtime_error(
            "lmm: profile optimization did not converge; best lambda so far " +
            std::to_string(std::exp(best_t)));
      }
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = value_at(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = value_at(x1);
      }
    }
    const double t_star = 0.5 * (lo + hi);
    lambda_hat = std::exp(t_star);
    if (value_at(t_star) < best_value) lambda_hat = std::exp(best_t);
    if (lambda_hat <= options.lambda_min * (1.0 + 1e-6)) {
      // boundary: the random effect vanishes, fit collapses to OLS
      degenerate = true;
      lambda_hat = 0.0;
    }
  }

  const LmmProfile profile = profile_at(x, yv, index, lambda_hat, options.reml);

  FitResult fit;
  fit.model = "lmm";
  fit.response = response;
  fit.names = with_intercept(names);
  fit.n_obs = static_cast<int>(n);
  fit.n_groups = static_cast<int>(index.rows.size());
  fit.lambda = lambda_hat;
  fit.random_effect_degenerate = degenerate;
  fit.coefficients.assign(profile.beta.data(), profile.beta.data() + profile.beta.size());
  fit.sigma2_e = profile.sigma2_e;
  fit.sigma2_alpha = lambda_hat * profile.sigma2_e;
  fit.log_likelihood = profile.log_likelihood;
  fit.k_params = static_cast<int>(p) + 2; // beta, sigma2_alpha, sigma2_e
  fit.aic = 2.0 * fit.k_params - 2.0 * fit.log_likelihood;

  // Wald z tests from the GLS information matrix
  const Eigen::MatrixXd cov =
      profile.information.ldlt().solve(Eigen::MatrixXd::Identity(p, p)) * profile.sigma2_e;
  fit.std_errors.resize(static_cast<std::size_t>(p));
  fit.p_values.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se = std::sqrt(std::max(0.0, cov(j, j)));
    fit.std_errors[static_cast<std::size_t>(j)] = se;
    if (se > 0.0) {
      const double z = profile.beta[j] / se;
      fit.p_values[static_cast<std::size_t>(j)] = 2.0 * (1.0 - dist::normal_cdf(std::fabs(z)));
    } else {
      fit.p_values[static_cast<std::size_t>(j)] = profile.beta[j] == 0.0 ? 1.0 : 0.0;
    }
  }

  // variance decomposition for marginal/conditional R2
  const Eigen::VectorXd fitted = x * profile.beta;
  const double fitted_mean = fitted.mean();
  const double sigma2_f =
      (fitted.array() - fitted_mean).square().sum() / static_cast<double>(n);
  const double denom = sigma2_f + fit.sigma2_alpha + fit.sigma2_e;
  fit.marginal_r2 = denom > 0.0 ? sigma2_f / denom : 0.0;
  fit.conditional_r2 = denom > 0.0 ? (sigma2_f + fit.sigma2_alpha) / denom : 0.0;

  // conditional residuals via the random-intercept BLUPs
  const Eigen::VectorXd marginal = yv - fitted;
  fit.residuals.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& rows : index.rows) {
    double s = 0.0;
    for (std::size_t i : rows) s += marginal[static_cast<Eigen::Index>(i)];
    const double ng = static_cast<double>(rows.size());
    const double blup = lambda_hat * s / (1.0 + lambda_hat * ng);
    for (std::size_t i : rows) {
      fit.residuals[i] = marginal[static_cast<Eigen::Index>(i)] - blup;
    }
  }
  return fit;
}

std::map<std::string, double> vif(const PanelFrame& frame,
                                  const std::vector<std::string>& predictors) {
  if (predictors.size() < 2) {
    throw std::invalid_argument("vif: need at least 2 predictors");
  }
  std::vector<std::vector<double>> values(predictors.size());
  for (const auto& row : frame.rows) {
    bool complete = true;
    for (const auto& name : predictors) {
      if (!row.value(name)) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    for (std::size_t j = 0; j < predictors.size(); ++j) {
      values[j].push_back(*row.value(predictors[j]));
    }
  }
  if (values[0].size() <= predictors.size() + 1) {
    throw std::runtime_error("vif: not enough complete rows");
  }

  std::map<std::string, double> out;
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    std::vector<std::vector<double>> others;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < predictors.size(); ++k) {
      if (k == j) continue;
      others.push_back(values[k]);
      names.push_back(predictors[k]);
    }
    double r2;
    try {
      r2 = ols(values[j], others, names, predictors[j]).r2;
    } catch (const std::runtime_error&) {
      r2 = 1.0; // rank deficiency among the others: perfectly collinear
    }
    out[predictors[j]] =
        r2 >= 1.0 - 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - r2);
  }
  return out;
}

namespace {

struct Extracted {
  std::vector<double> y;
  std::vector<std::vector<double>> columns;
  std::vector<int> years;
  std::vector<int> groups;
};

// Listwise deletion: rows where the response and every predictor are present.
Extracted extract_rows(const PanelFrame& frame, const std::string& response,
                       const std::vector<std::string>& predictors) {
  Extracted out;
  out.columns.resize(predictors.size());
  std::map<std::string, int> province_ids;
  for (const auto& row : frame.rows) {
    if (!row.value(response)) continue;
    bool complete = true;
    for (const auto& name : predictors) {
      if (!row.value(name)) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    out.y.push_back(*row.value(response));
    for (std::size_t j = 0; j < predictors.size(); ++j) {
      out.columns[j].push_back(*row.value(predictors[j]));
    }
    out.years.push_back(row.year);
    auto [it, inserted] = province_ids.emplace(row.province, static_cast<int>(province_ids.size()));
    (void)inserted;
    out.groups.push_back(it->second);
  }
  return out;
}

// Province means over complete rows, for the averaged OLS variant.
Extracted extract_province_means(const PanelFrame& frame, const std::string& response,
                                 const std::vector<std::string>& predictors) {
  const Extracted rows = extract_rows(frame, response, predictors);
  Extracted out;
  out.columns.resize(predictors.size());
  std::map<int, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < rows.y.size(); ++i) by_group[rows.groups[i]].push_back(i);
  for (const auto& [group, indices] : by_group) {
    (void)group;
    double y_sum = 0.0;
    for (std::size_t i : indices) y_sum += rows.y[i];
    out.y.push_back(y_sum / static_cast<double>(indices.size()));
    for (std::size_t j = 0; j < predictors.size(); ++j) {
      double sum = 0.0;
      for (std::size_t i : indices) sum += rows.columns[j][i];
      out.columns[j].push_back(sum / static_cast<double>(indices.size()));
    }
  }
  return out;
}

DirectionCell run_cell(const PanelFrame& frame, const std::string& response,
                       const std::vector<std::string>& predictors,
                       const std::string& socio_family, const LmmOptions& options) {
  DirectionCell cell;
  cell.response = response;
  cell.socio_family = socio_family;

  try {
    const Extracted means = extract_province_means(frame, response, predictors);
    cell.ols.fit = ols(means.y, means.columns, predictors, response);
  } catch (const std::exception& e) {
    cell.ols.error = e.what();
  }
  try {
    const Extracted rows = extract_rows(frame, response, predictors);
    cell.fe.fit = fixed_effects(rows.y, rows.columns, predictors, rows.years, response);
  } catch (const std::exception& e) {
    cell.fe.error = e.what();
  }
  try {
    const Extracted rows = extract_rows(frame, response, predictors);
    std::vector<std::vector<double>> cols = rows.columns;
    std::vector<std::string> names = predictors;
    append_year_dummies(cols, names, rows.years);
    cell.lmm.fit = lmm_random_intercept(rows.y, cols, names, rows.groups, response, options);
  } catch (const std::exception& e) {
    cell.lmm.error = e.what();
  }
  return cell;
}

} // namespace

std::vector<DirectionCell> run_direction1(const PanelFrame& frame,
                                          const LmmOptions& options) {
  const std::vector<std::string> predictors = {"acc", "ccd", "cgc", "log_hhi"};
  std::vector<DirectionCell> cells;
  for (const std::string response : {"hdi", "pov"}) {
    cells.push_back(run_cell(frame, response, predictors, "", options));
  }
  return cells;
}

std::vector<DirectionCell> run_direction2(const PanelFrame& frame,
                                          const LmmOptions& options) {
  std::vector<DirectionCell> cells;
  for (const std::string response : {"acc", "ccd", "cgc", "log_hhi"}) {
    for (const std::string family : {"hdi", "pov"}) {
      const std::vector<std::string> predictors = {family, family + "_lag_3year"};
      cells.push_back(run_cell(frame, response, predictors, family, options));
    }
  }
  return cells;
}

std::vector<std::pair<double, double>> qq_residuals(const FitResult& fit) {
  std::vector<double> sorted = fit.residuals;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    out.emplace_back(dist::normal_quantile(q), sorted[i]);
  }
  return out;
}

} // namespace kinnet
