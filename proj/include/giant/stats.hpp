#pragma once

#include <vector>

#include <Eigen/Core>

namespace giant {

// Rows are observations.
Eigen::VectorXd sample_mean(const Eigen::MatrixXd& x);
// Unbiased (n - 1) sample covariance; needs at least two rows.
Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& x);

double skewness(const std::vector<double>& x);         // m3 / m2^(3/2)
double excess_kurtosis(const std::vector<double>& x);  // m4 / m2^2 - 3
double median(std::vector<double> x);

// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
  double d = 0;
  double p_value = 1;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// Against the standard normal.
KsResult ks_normal(std::vector<double> x);

}  // namespace giant
