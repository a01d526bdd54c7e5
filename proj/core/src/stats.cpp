#include "kinnet/stats.hpp"

#include "kinnet/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace kinnet {

std::string_view alternative_token(Alternative alt) {
  switch (alt) {
  case Alternative::TwoSided: return "two_sided";
  case Alternative::Greater: return "greater";
  case Alternative::Less: return "less";
  }
  return "?";
}

std::string_view p_method_token(PMethod method) {
  return method == PMethod::Exact ? "exact" : "normal_approx";
}

std::vector<unsigned long long> signed_rank_distribution(int n) {
  const int max_sum = n * (n + 1) / 2;
  std::vector<unsigned long long> counts(static_cast<std::size_t>(max_sum) + 1, 0);
  counts[0] = 1;
  for (int rank = 1; rank <= n; ++rank) {
    for (int s = max_sum; s >= rank; --s) {
      counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - rank)];
    }
  }
  return counts;
}

TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                                Alternative alternative, int exact_cutoff) {
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) {
    throw std::runtime_error("wilcoxon_signed_rank: degenerate sample (all differences zero)");
  }
  const int n = static_cast<int>(diffs.size());

  std::vector<int> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::fabs(diffs[static_cast<std::size_t>(i)]) <
           std::fabs(diffs[static_cast<std::size_t>(j)]);
  });

  // average ranks over tie groups
  std::vector<double> ranks(diffs.size(), 0.0);
  bool has_ties = false;
  std::vector<int> tie_sizes;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    const double value = std::fabs(diffs[static_cast<std::size_t>(order[i])]);
    while (j < order.size() &&
           std::fabs(diffs[static_cast<std::size_t>(order[j])]) == value) {
      ++j;
    }
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      ranks[static_cast<std::size_t>(order[k])] = avg_rank;
    }
    if (j - i > 1) {
      has_ties = true;
      tie_sizes.push_back(static_cast<int>(j - i));
    }
    i = j;
  }

  double w_plus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0.0) w_plus += ranks[i];
  }

  TestResult result;
  result.statistic = w_plus;
  result.n = n;
  result.alternative = alternative;

  if (!has_ties && n <= exact_cutoff) {
    result.method = PMethod::Exact;
    const auto counts = signed_rank_distribution(n);
    const double total = std::ldexp(1.0, n); // 2^n
    const auto w = static_cast<long long>(std::llround(w_plus));
    double below_or_equal = 0.0;
    double above_or_equal = 0.0;
    for (long long s = 0; s < static_cast<long long>(counts.size()); ++s) {
      const double c = static_cast<double>(counts[static_cast<std::size_t>(s)]);
      if (s <= w) below_or_equal += c;
      if (s >= w) above_or_equal += c;
    }
    const double p_less = below_or_equal / total;
    const double p_greater = above_or_equal / total;
    switch (alternative) {
    case Alternative::Greater: result.p_value = p_greater; break;
    case Alternative::Less: result.p_value = p_less; break;
    case Alternative::TwoSided:
      result.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater));
      break;
    }
  } else {
    result.method = PMethod::NormalApprox;
    const double nn = n;
    const double mu = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    for (int t : tie_sizes) {
      const double td = t;
      var -= (td * td * td - td) / 48.0;
    }
    if (var <= 0.0) {
      result.p_value = 1.0;
      return result;
    }
    const double sd = std::sqrt(var);
    const double p_greater = 1.0 - dist::normal_cdf((w_plus - mu - 0.5) / sd);
    const double p_less = dist::normal_cdf((w_plus - mu + 0.5) / sd);
    switch (alternative) {
    case Alternative::Greater: result.p_value = p_greater; break;
    case Alternative::Less: result.p_value = p_less; break;
    case Alternative::TwoSided:
      result.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater));
      break;
    }
  }
  return result;
}

TestResult shapiro_wilk(const std::vector<double>& sample) {
  const int n = static_cast<int>(sample.size());
  if (n < 3 || n > 5000) {
    throw std::invalid_argument("shapiro_wilk: n must be in [3, 5000]");
  }
  std::vector<double> x = sample;
  std::sort(x.begin(), x.end());
  if (x.back() - x.front() == 0.0) {
    throw std::runtime_error("shapiro_wilk: constant sample (zero variance)");
  }

  // Expected normal order statistics (Blom) and Royston's polynomial-adjusted
  // coefficients.
  std::vector<double> m(static_cast<std::size_t>(n));
  double ssq_m = 0.0;
  for (int i = 1; i <= n; ++i) {
    m[static_cast<std::size_t>(i - 1)] =
        dist::normal_quantile((i - 0.375) / (n + 0.25));
    ssq_m += m[static_cast<std::size_t>(i - 1)] * m[static_cast<std::size_t>(i - 1)];
  }

  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    a[2] = -a[0];
  } else {
    const double root_ssq = std::sqrt(ssq_m);
    const double cn = m[static_cast<std::size_t>(n - 1)] / root_ssq;
    const double an =
        cn + rsn * (0.221157 +
                    rsn * (-0.147981 +
                           rsn * (-2.071190 + rsn * (4.434685 + rsn * -2.706056))));
    double phi;
    if (n > 5) {
      const double cn1 = m[static_cast<std::size_t>(n - 2)] / root_ssq;
      const double an1 =
          cn1 + rsn * (0.042981 +
                       rsn * (-0.293762 +
                              rsn * (-1.752461 + rsn * (5.682633 + rsn * -3.582633))));
      phi = (ssq_m - 2.0 * m[static_cast<std::size_t>(n - 1)] * m[static_cast<std::size_t>(n - 1)] -
             2.0 * m[static_cast<std::size_t>(n - 2)] * m[static_cast<std::size_t>(n - 2)]) /
            (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
      a[static_cast<std::size_t>(n - 1)] = an;
      a[static_cast<std::size_t>(n - 2)] = an1;
      a[0] = -an;
      a[1] = -an1;
      for (int i = 3; i <= n - 2; ++i) {
        a[static_cast<std::size_t>(i - 1)] =
            m[static_cast<std::size_t>(i - 1)] / std::sqrt(phi);
      }
    } else {
      phi = (ssq_m - 2.0 * m[static_cast<std::size_t>(n - 1)] * m[static_cast<std::size_t>(n - 1)]) /
            (1.0 - 2.0 * an * an);
      a[static_cast<std::size_t>(n - 1)] = an;
      a[0] = -an;
      for (int i = 2; i <= n - 1; ++i) {
        a[static_cast<std::size_t>(i - 1)] =
            m[static_cast<std::size_t>(i - 1)] / std::sqrt(phi);
      }
    }
  }

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double numerator = 0.0;
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    numerator += a[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    sse += (x[static_cast<std::size_t>(i)] - mean) * (x[static_cast<std::size_t>(i)] - mean);
  }
  const double w = numerator * numerator / sse;

  double p;
  if (n == 3) {
    constexpr double pi = 3.14159265358979323846;
    p = 6.0 / pi * (std::asin(std::sqrt(w)) - std::asin(std::sqrt(0.75)));
    p = std::clamp(p, 0.0, 1.0);
  } else if (n <= 11) {
    const double nd = n;
    const double g = -2.273 + 0.459 * nd;
    const double transformed = -std::log(g - std::log(1.0 - w));
    const double mu = 0.5440 - 0.39978 * nd + 0.025054 * nd * nd - 0.0006714 * nd * nd * nd;
    const double sigma =
        std::exp(1.3822 - 0.77857 * nd + 0.062767 * nd * nd - 0.0020322 * nd * nd * nd);
    p = 1.0 - dist::normal_cdf((transformed - mu) / sigma);
  } else {
    const double ln_n = std::log(static_cast<double>(n));
    const double transformed = std::log(1.0 - w);
    const double mu = -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n * ln_n +
                      0.0038915 * ln_n * ln_n * ln_n;
    const double sigma = std::exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n * ln_n);
    p = 1.0 - dist::normal_cdf((transformed - mu) / sigma);
  }

  TestResult result;
  result.statistic = w;
  result.p_value = p;
  result.n = n;
  result.method = PMethod::NormalApprox;
  result.alternative = Alternative::TwoSided;
  return result;
}

TrendResult linear_trend(const std::vector<std::pair<int, double>>& observations) {
  const int n = static_cast<int>(observations.size());
  if (n < 3) throw std::invalid_argument("linear_trend: need at least 3 observations");

  double x_mean = 0.0, y_mean = 0.0;
  for (const auto& [year, value] : observations) {
    x_mean += year;
    y_mean += value;
  }
  x_mean /= n;
  y_mean /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [year, value] : observations) {
    const double dx = year - x_mean;
    const double dy = value - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("linear_trend: observations span a single year");
  }

  TrendResult result;
  result.n = n;
  result.slope = sxy / sxx;
  result.intercept = y_mean - result.slope * x_mean;
  result.slope_per_cycle = result.slope * 3.0;

  if (syy <= 0.0) { // constant response
    result.slope = 0.0;
    result.slope_per_cycle = 0.0;
    result.intercept = y_mean;
    result.p_value = 1.0;
    result.r2 = 0.0;
    return result;
  }
  const double rss = std::max(0.0, syy - result.slope * sxy);
  if (rss <= 1e-14 * syy) { // numerically perfect fit
    result.p_value = 0.0;
    result.r2 = 1.0;
    return result;
  }
  const double se = std::sqrt(rss / (n - 2) / sxx);
  const double t = result.slope / se;
  result.p_value = dist::students_t_two_sided_p(t, static_cast<double>(n - 2));
  result.r2 = 1.0 - rss / syy;
  return result;
}

std::vector<std::pair<int, double>> yearly_means(
    const std::vector<std::pair<int, double>>& observations) {
  std::map<int, std::pair<double, int>> sums;
  for (const auto& [year, value] : observations) {
    auto& [sum, count] = sums[year];
    sum += value;
    ++count;
  }
  std::vector<std::pair<int, double>> out;
  out.reserve(sums.size());
  for (const auto& [year, entry] : sums) {
    out.emplace_back(year, entry.first / entry.second);
  }
  return out;
}

} // namespace kinnet
