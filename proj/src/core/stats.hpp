#pragma once

#include <functional>
#include <vector>

namespace adyn {

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);
double median(std::vector<double> v);

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Asymptotic p-value with Stephens' small-sample correction.
double ks_pvalue(double d, std::size_t n);
// Critical value of the statistic at level alpha (0.01 or 0.05).
double ks_critical(std::size_t n, double alpha = 0.01);

// Anderson-Darling A^2 against a fully specified continuous CDF.
double anderson_darling(std::vector<double> samples, const std::function<double(double)>& cdf);
// Case-0 (fully specified) critical value at level alpha (0.01 or 0.05).
double anderson_darling_critical(double alpha = 0.01);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace adyn
