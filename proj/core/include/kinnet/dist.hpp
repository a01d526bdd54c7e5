#pragma once

namespace kinnet::dist {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
/// Requires 0 < p < 1.
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b) by Lentz continued fraction;
/// relative accuracy around 1e-14 for moderate arguments.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with df degrees of freedom.
double students_t_cdf(double t, double df);

/// Two-sided p-value for an observed t statistic.
double students_t_two_sided_p(double t, double df);

} // namespace kinnet::dist
