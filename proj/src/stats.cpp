#include "giant/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace giant {

Eigen::VectorXd sample_mean(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) throw std::invalid_argument("sample_mean: no rows");
  return x.colwise().mean().transpose();
}

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& x) {
  if (x.rows() < 2) throw std::invalid_argument("sample_cov: need two rows");
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd s = c.transpose() * c / double(x.rows() - 1);
  return 0.5 * (s + s.transpose());
}

namespace {

// Central moments m2, m3, m4 (1/n normalisation).
std::array<double, 3> central(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("need two observations");
  double mean = 0;
  for (double v : x) mean += v;
  mean /= double(x.size());
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - mean, d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double n = double(x.size());
  return {m2 / n, m3 / n, m4 / n};
}

}  // namespace

double skewness(const std::vector<double>& x) {
  const auto m = central(x);
  return m[1] / std::pow(m[0], 1.5);
}

double excess_kurtosis(const std::vector<double>& x) {
  const auto m = central(x);
  return m[2] / (m[0] * m[0]) - 3;
}

double median(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("median: empty");
  const std::size_t h = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + h, x.end());
  const double hi = x[h];
  if (x.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(x.begin(), x.begin() + h));
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;  // series converges slowly; Q is 1 to double precision below ~0.27
  double sum = 0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

namespace {

// Asymptotic p-value with the usual small-sample correction.
double ks_p(double d, double ne) {
  const double s = std::sqrt(ne);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return {d, ks_p(d, na * nb / (na + nb))};
}

KsResult ks_normal(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("ks_normal: empty sample");
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  return {d, ks_p(d, n)};
}

}  // namespace giant
