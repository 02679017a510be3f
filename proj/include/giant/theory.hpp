#pragma once

#include <vector>

#include <Eigen/Core>

namespace giant {

// w = (alpha, beta_i, beta_o, gamma): scaled vertices / zero-in / zero-out / arcs.
using WVector = Eigen::Vector4d;

// Unique root in (0,1) of 1 - theta = exp(-c theta); c > 1.
double theta(double c);
// d theta / dc = theta (1 - theta) / (1 - c (1 - theta)).
double theta_prime(double c);

// l(z) = z e^z / (e^z - 1), with l(0) = 1.
double ell(double z);
double ell_prime(double z);
// Positive root of l(z) = eta, eta > 1.
double z_root(double eta);
// dz/d eta = 1 / l'(z(eta)).
double z_root_prime(double eta);

// The typical scaled initial state of D(n, m = cn).
WVector likely_initial_w(double c);

// Empty when w lies in the good set (beta's > 0, beta_i + beta_o < alpha,
// gamma/(alpha - beta_i) > 1, gamma/(alpha - beta_o) > 1).
const char* w_violation(const WVector& w);
// Like w_violation but lets beta_i, beta_o be zero (boundary of the good set).
const char* w_closure_violation(const WVector& w);

// (z_i, z_o) of w.
Eigen::Vector2d z_pair(const WVector& w);

// (I1, I2); throws std::domain_error outside the closure of the good set.
Eigen::Vector2d integrals(const WVector& w);
// Rows are grad I1, grad I2.
Eigen::Matrix<double, 2, 4> integrals_grad(const WVector& w);

// dw/dt along characteristics.
WVector ode_rhs(const WVector& w);
// (dz_i/dt, dz_o/dt) in closed form.
Eigen::Vector2d z_rates(const WVector& w);

// (f1, f2) and their gradients (rows).
Eigen::Vector2d f_mean(const WVector& w);
Eigen::Matrix<double, 2, 4> grad_f(const WVector& w);

struct Characteristic {
  std::vector<double> z;  // z_i samples, decreasing
  std::vector<double> t;
  std::vector<WVector> w;
  WVector end;            // beta's zeroed
  double t_end = 0;
  int steps = 0;
  double max_integral_drift = 0;  // max |I_j(w) - I_j(w0)|
  double max_f_drift = 0;         // max |f_j(w) - f_j(w0)|
  bool monotone = true;
};

// Integrates the characteristic through w0 down to beta_i = beta_o = 0,
// using z_i as the independent variable, stopping at z_i = z* + 10 tol and
// extrapolating to z*. Throws std::runtime_error on a
// numerical failure (domain exit or loss of monotonicity).
Characteristic integrate_characteristic(const WVector& w0, double tol = 1e-10);

// Points of the same characteristic at the given z_i values (each in
// [z*, z_i(w0)]), in input order.
std::vector<WVector> characteristic_at(const WVector& w0, const std::vector<double>& z_values);

// Psi_{jk}(w) = E[(ds^T grad f_j)(ds^T grad f_k)].
Eigen::Matrix2d psi_integrand(const WVector& w);

struct PsiResult {
  Eigen::Matrix2d psi = Eigen::Matrix2d::Zero();
  int panels = 0;
  double last_change = 0;  // max entry change at the final panel doubling
  int ode_steps = 0;
  double min_node_eigenvalue = 0;  // over all quadrature nodes
};

PsiResult psi_matrix(const WVector& w0, double rel_tol = 1e-11, int max_panels = 1024);

// Closed-form point at z on the characteristic from likely_initial_w(c).
WVector symmetric_trajectory(double c, double z);

// Limiting covariance of (X, X_i, X_o) - n (1 - e^-2c, e^-c(1 - e^-c), e^-c(1 - e^-c)),
// scaled by 1/sqrt(n): K = R^-1 with R read off the local limit exponent
// -x'Rx/2. The reference closed form (k_matrix_printed) disagrees; see README.
Eigen::Matrix3d k_matrix(double c);
// The reference closed form in F, G, H, I, verbatim.
Eigen::Matrix3d k_matrix_printed(double c);
// R with the two (x - x_i)^2, (x - x_o)^2 coefficients divided by cross_scale;
// cross_scale = 1 is the consistent normalisation, 2 reproduces the reference closed form.
Eigen::Matrix3d r_matrix(double c, double cross_scale = 1.0);

struct BMatrices {
  Eigen::Matrix2d B, Btilde, Bnp, psi;
  Eigen::Matrix<double, 2, 3> J;
  Eigen::Matrix3d K;
  Eigen::Vector2d mu_prime;
  PsiResult quad;
};

BMatrices b_matrices(double c);

}  // namespace giant
