#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace kinnet {

enum class Alternative { TwoSided, Greater, Less };
enum class PMethod { Exact, NormalApprox };

std::string_view alternative_token(Alternative alt);
std::string_view p_method_token(PMethod method);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int n = 0;
  PMethod method = PMethod::Exact;
  Alternative alternative = Alternative::TwoSided;
};

/// Wilcoxon signed-rank test on paired samples. Zero differences are
/// dropped; |differences| are ranked with average ranks on ties and the
/// statistic is the positive-difference rank sum. The exact null
/// distribution (subset-sum counting) is used when the usable n is within
/// `exact_cutoff` and there are no ties; otherwise a tie-corrected normal
/// approximation with continuity correction. Throws when every difference
/// is zero.
TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                                Alternative alternative = Alternative::TwoSided,
                                int exact_cutoff = 25);

/// Exact null distribution of the signed-rank statistic for tie-free ranks
/// 1..n: counts[s] = number of sign assignments with positive rank sum s.
/// Exposed for oracle comparison in tests.
std::vector<unsigned long long> signed_rank_distribution(int n);

/// Shapiro-Wilk normality test (Royston's approximation), 3 <= n <= 5000.
/// Throws on a constant sample.
TestResult shapiro_wilk(const std::vector<double>& sample);

struct TrendResult {
  double slope = 0.0;
  double intercept = 0.0;
  double p_value = 1.0;
  double r2 = 0.0;
  double slope_per_cycle = 0.0; // slope * 3, effect per 3-year electoral cycle
  int n = 0;
};

/// Pooled OLS of value on calendar year with a two-sided t-test on the
/// slope. Degenerate inputs stay defined: a perfect nonconstant fit reports
/// p = 0 and r2 = 1; a constant response reports slope 0, p = 1, r2 = 0.
/// Requires >= 3 observations over >= 2 distinct years.
TrendResult linear_trend(const std::vector<std::pair<int, double>>& observations);

/// Collapses observations to one mean value per year (for the yearly-means
/// trend granularity).
std::vector<std::pair<int, double>> yearly_means(
    const std::vector<std::pair<int, double>>& observations);

} // namespace kinnet
