#include "giant/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "giant/enumerate.hpp"

namespace giant {

double theta(double c) {
  if (!(c > 1)) throw std::domain_error("theta: need c > 1");
  // h > 0 below the root, h < 0 above; h(0) = 0 is the trivial root.
  auto h = [c](double t) { return -std::expm1(-c * t) - t; };
  double lo = 0.25 * std::min(2 * (c - 1), 1.0), hi = 1.0;
  while (h(lo) <= 0) lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double dh = c * std::exp(-c * t) - 1;
    const double next = t - h(t) / dh;
    if (next > lo && next < hi) t = next;
  }
  return t;
}

double theta_prime(double c) {
  const double t = theta(c);
  return t * (1 - t) / (1 - c * (1 - t));
}

double ell(double z) {
  if (z == 0) return 1.0;
  return z / -std::expm1(-z);
}

double ell_prime(double z) {
  // l' = (q - z e^-z) / q^2 with q = 1 - e^-z; the numerator is
  // sum_{k>=2} (-1)^k (k-1) z^k / k!, summed directly for small z.
  if (std::abs(z) < 0.5) {
    double num = 0, term = z;  // term = z^k / k!
    for (int k = 2; k < 30; ++k) {
      term *= z / k;
      num += ((k % 2) ? -1.0 : 1.0) * (k - 1) * term;
    }
    if (z == 0) return 0.5;
    const double q = -std::expm1(-z);
    return num / (q * q);
  }
  const double q = -std::expm1(-z);
  return (q - z * std::exp(-z)) / (q * q);
}

double z_root(double eta) {
  if (!(eta > 1)) throw std::domain_error("z_root: need eta > 1");
  // l(z) lies in [max(1, z), 1 + z], so the root lies in [eta - 1, eta].
  double lo = eta - 1, hi = eta;
  double z = eta < 1.5 ? 2 * (eta - 1) : eta - 1 + std::exp(-(eta - 1));
  z = std::clamp(z, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double r = ell(z) - eta;
    if (r > 0) hi = z;
    else lo = z;
    double next = z - r / ell_prime(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-16 * std::max(1.0, z)) {
      z = next;
      break;
    }
    z = next;
  }
  return z;
}

double z_root_prime(double eta) { return 1.0 / ell_prime(z_root(eta)); }

WVector likely_initial_w(double c) {
  const double e1 = std::exp(-c);
  const double b = e1 * (1 - e1);
  return WVector(-std::expm1(-2 * c), b, b, c);
}

const char* w_closure_violation(const WVector& w) {
  const double a = w[0], bi = w[1], bo = w[2], g = w[3];
  if (!(bi >= 0)) return "beta_i >= 0";
  if (!(bo >= 0)) return "beta_o >= 0";
  if (!(bi + bo < a)) return "beta_i + beta_o < alpha";
  if (!(g / (a - bi) > 1)) return "gamma/(alpha - beta_i) > 1";
  if (!(g / (a - bo) > 1)) return "gamma/(alpha - beta_o) > 1";
  return nullptr;
}

const char* w_violation(const WVector& w) {
  if (!(w[1] > 0)) return "beta_i > 0";
  if (!(w[2] > 0)) return "beta_o > 0";
  return w_closure_violation(w);
}

namespace {

void require_closure(const WVector& w, const char* who) {
  if (const char* why = w_closure_violation(w))
    throw std::domain_error(std::string(who) + ": outside the good set: " + why);
}

void require_open(const WVector& w, const char* who) {
  if (const char* why = w_violation(w))
    throw std::domain_error(std::string(who) + ": outside the good set: " + why);
}

}  // namespace

Eigen::Vector2d z_pair(const WVector& w) {
  return {z_root(w[3] / (w[0] - w[1])), z_root(w[3] / (w[0] - w[2]))};
}

Eigen::Vector2d integrals(const WVector& w) {
  require_closure(w, "integrals");
  const double a = w[0], bi = w[1], bo = w[2], g = w[3];
  const Eigen::Vector2d z = z_pair(w);
  return {g * (a - bi - bo) / ((a - bi) * (a - bo)), z[0] * z[1] / g};
}

Eigen::Matrix<double, 2, 4> integrals_grad(const WVector& w) {
  require_closure(w, "integrals_grad");
  const double a = w[0], bi = w[1], bo = w[2], g = w[3];
  const double A = a - bi, O = a - bo, S = a - bi - bo;
  const double I1 = g * S / (A * O);
  Eigen::Matrix<double, 2, 4> G;
  G.row(0) << I1 * (1 / S - 1 / A - 1 / O), I1 * (1 / A - 1 / S), I1 * (1 / O - 1 / S), I1 / g;
  const double ei = g / A, eo = g / O;
  const double zi = z_root(ei), zo = z_root(eo);
  const double dzi = 1 / ell_prime(zi), dzo = 1 / ell_prime(zo);
  const Eigen::RowVector4d grad_zi = dzi * Eigen::RowVector4d(-g / (A * A), g / (A * A), 0, 1 / A);
  const Eigen::RowVector4d grad_zo = dzo * Eigen::RowVector4d(-g / (O * O), 0, g / (O * O), 1 / O);
  G.row(1) = (zo * grad_zi + zi * grad_zo) / g;
  G(1, 3) -= zi * zo / (g * g);
  return G;
}

WVector ode_rhs(const WVector& w) {
  require_open(w, "ode_rhs");
  const double a = w[0], bi = w[1], bo = w[2], g = w[3];
  const double A = a - bi, O = a - bo, S = a - bi - bo, Bs = bi + bo;
  const Eigen::Vector2d z = z_pair(w);
  const double ei = std::exp(-z[0]), eo = std::exp(-z[1]);
  WVector d;
  d[0] = -1 - bi * bo * g * (ei + eo) / (Bs * A * O);
  d[1] = bi / Bs * (g * S * ei / (A * O) - 1 - bo * g * eo / (A * O));
  d[2] = bo / Bs * (g * S * eo / (A * O) - 1 - bi * g * ei / (A * O));
  d[3] = -g / Bs * (bo / A + bi / O);
  return d;
}

Eigen::Vector2d z_rates(const WVector& w) {
  require_open(w, "z_rates");
  const double a = w[0], bi = w[1], bo = w[2];
  const Eigen::Vector2d z = z_pair(w);
  return {-bi * z[0] / ((bi + bo) * (a - bo)), -bo * z[1] / ((bi + bo) * (a - bi))};
}

Eigen::Vector2d f_mean(const WVector& w) {
  const Eigen::Vector2d I = integrals(w);
  if (!(I[0] > 1)) throw std::domain_error("f_mean: need I1 > 1");
  const double zs = z_root(I[0]);
  // f2 = z(I1)^2 / I2 and f1 = f2 / I1.
  const double f2 = zs * zs / I[1];
  return {f2 / I[0], f2};
}

Eigen::Matrix<double, 2, 4> grad_f(const WVector& w) {
  const Eigen::Vector2d I = integrals(w);
  if (!(I[0] > 1)) throw std::domain_error("grad_f: need I1 > 1");
  const Eigen::Matrix<double, 2, 4> GI = integrals_grad(w);
  const double zs = z_root(I[0]), dzs = 1 / ell_prime(zs);
  const double f2 = zs * zs / I[1];
  const double f2_I1 = 2 * zs * dzs / I[1], f2_I2 = -f2 / I[1];
  const double f1_I1 = f2_I1 / I[0] - f2 / (I[0] * I[0]), f1_I2 = f2_I2 / I[0];
  Eigen::Matrix<double, 2, 4> G;
  G.row(0) = f1_I1 * GI.row(0) + f1_I2 * GI.row(1);
  G.row(1) = f2_I1 * GI.row(0) + f2_I2 * GI.row(1);
  return G;
}

namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 5>;  // alpha, beta_i, beta_o, gamma, t

WVector as_w(const OdeState& y) { return WVector(y[0], y[1], y[2], y[3]); }

// d/du of (w, t) with u = z_i(0) - z_i, so u increases as z_i decreases.
// Written with the 1/beta_i of dt/dz_i cancelled, so stage states with a
// slightly negative beta (trial steps near the endpoint) stay finite and get
// rejected by the error control instead of aborting.
struct ZiSystem {
  void operator()(const OdeState& y, OdeState& dy, double /*u*/) const {
    const double a = y[0], bi = y[1], bo = y[2], g = y[3];
    const double A = a - bi, O = a - bo, S = a - bi - bo;
    const double zi = z_root(g / A), zo = z_root(g / O);
    const double ei = std::exp(-zi), eo = std::exp(-zo);
    const double dt_du = (bi + bo) * O / (bi * zi);
    dy[0] = -dt_du - bo * g * (ei + eo) / (A * zi);
    dy[1] = (g * S * ei / A - O - bo * g * eo / A) / zi;
    dy[2] = bo / bi * (g * S * eo / A - O - bi * g * ei / A) / zi;
    dy[3] = -g * (bo * O / A + bi) / (bi * zi);
    dy[4] = dt_du;
  }
};

// Controlled (not dense) so that no stage is evaluated past the last requested u.
auto make_stepper(double abs_tol, double rel_tol) {
  return odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_dopri5<OdeState>());
}

OdeState initial_state_of(const WVector& w0) { return {w0[0], w0[1], w0[2], w0[3], 0.0}; }

// Integrates to each requested u (ascending, u[0] = 0), calling obs(index, y).
template <class Obs>
int integrate_to(const WVector& w0, const std::vector<double>& us, double abs_tol, double rel_tol, Obs&& obs) {
  OdeState y = initial_state_of(w0);
  auto stepper = make_stepper(abs_tol, rel_tol);
  std::size_t idx = 0;
  const double h0 = std::max(1e-6, (us.back() - us.front()) * 1e-3);
  return static_cast<int>(odeint::integrate_times(
      stepper, ZiSystem{}, y, us.begin(), us.end(), h0,
      [&](const OdeState& s, double) { obs(idx++, s); }));
}

}  // namespace

Characteristic integrate_characteristic(const WVector& w0, double tol) {
  require_open(w0, "integrate_characteristic");
  const Eigen::Vector2d I0 = integrals(w0);
  if (!(I0[0] > 1) || !(I0[1] > 0)) throw std::domain_error("integrate_characteristic: need I1 > 1");
  const Eigen::Vector2d f0 = f_mean(w0);
  const double z0 = z_pair(w0)[0], zstar = z_root(I0[0]);
  // Stop at z* + guard, where beta_i + beta_o is of order tol.
  const double guard = 10 * tol;
  const double u_end = z0 - zstar - guard;
  if (!(u_end > 0)) throw std::runtime_error("integrate_characteristic: start already at the endpoint");

  const int samples = 400;
  std::vector<double> us(samples + 1);
  for (int j = 0; j <= samples; ++j) {
    // Cluster samples toward the endpoint.
    const double x = double(j) / samples;
    us[j] = u_end * (1 - (1 - x) * (1 - x));
  }
  us.back() = u_end;

  Characteristic ch;
  ch.z.reserve(us.size());
  ch.t.reserve(us.size());
  ch.w.reserve(us.size());
  double ratio_gap = std::abs(std::log(w0[1] / w0[2]));
  const double abs_tol = 1e-15;
  ch.steps = integrate_to(w0, us, abs_tol, 1e-13, [&](std::size_t j, const OdeState& y) {
    const WVector w = as_w(y);
    ch.z.push_back(z0 - us[j]);
    ch.t.push_back(y[4]);
    if (!ch.w.empty()) {
      const WVector& prev = ch.w.back();
      for (int k = 0; k < 4; ++k)
        if (w[k] > prev[k] + 1e-14) ch.monotone = false;
      // The ratio is only resolved to about abs_tol / beta.
      const double gap = std::abs(std::log(w[1] / w[2]));
      if (gap > ratio_gap + 1e-12 + 100 * abs_tol / std::min(w[1], w[2])) ch.monotone = false;
      ratio_gap = gap;
    }
    ch.w.push_back(w);
    if (const char* why = w_violation(w))
      throw std::runtime_error(std::string("integrate_characteristic: left the good set: ") + why);
    const Eigen::Vector2d I = integrals(w);
    ch.max_integral_drift = std::max(ch.max_integral_drift, (I - I0).cwiseAbs().maxCoeff());
    const Eigen::Vector2d f = f_mean(w);
    ch.max_f_drift = std::max(ch.max_f_drift, (f - f0).cwiseAbs().maxCoeff());
  });
  if (!ch.monotone) throw std::runtime_error("integrate_characteristic: monotonicity violated");

  // Last sliver [z*, z* + guard]: one explicit Euler step, beta's set to 0.
  const WVector& wl = ch.w.back();
  OdeState yl{wl[0], wl[1], wl[2], wl[3], ch.t.back()}, dy;
  ZiSystem{}(yl, dy, 0.0);
  ch.end = WVector(wl[0] + guard * dy[0], 0.0, 0.0, wl[3] + guard * dy[3]);
  ch.t_end = ch.t.back() + guard * dy[4];
  return ch;
}

std::vector<WVector> characteristic_at(const WVector& w0, const std::vector<double>& z_values) {
  require_open(w0, "characteristic_at");
  const double z0 = z_pair(w0)[0];
  std::vector<double> us{0.0};
  for (double z : z_values) us.push_back(z0 - z);
  std::vector<std::size_t> order(z_values.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return us[a + 1] < us[b + 1]; });
  std::vector<double> sorted{0.0};
  for (std::size_t j : order) sorted.push_back(std::max(us[j + 1], 0.0));
  std::vector<WVector> out(z_values.size());
  integrate_to(w0, sorted, 1e-15, 1e-13, [&](std::size_t j, const OdeState& y) {
    if (j > 0) out[order[j - 1]] = as_w(y);
  });
  return out;
}

Eigen::Matrix2d psi_integrand(const WVector& w) {
  const Moments m = approx_moments(w);
  const Eigen::Matrix<double, 2, 4> G = grad_f(w);
  // ds^T grad f as a linear form in (a, b, r_i, r_o, k).
  Eigen::Matrix<double, 5, 2> U;
  for (int j = 0; j < 2; ++j) {
    const double ga = G(j, 0), gi = G(j, 1), go = G(j, 2), gg = G(j, 3);
    U.col(j) << -ga - gi, -ga - go, gi, go, -gg;
  }
  return U.transpose() * m.second * U;
}

namespace {

double zi_jacobian(const WVector& w) {
  const double zi = z_root(w[3] / (w[0] - w[1]));
  return (w[1] + w[2]) * (w[0] - w[2]) / (w[1] * zi);
}

}  // namespace

PsiResult psi_matrix(const WVector& w0, double rel_tol, int max_panels) {
  PsiResult res;
  if (!(w0[1] > 0) && !(w0[2] > 0)) return res;  // boundary: empty range
  require_open(w0, "psi_matrix");
  const double z0 = z_pair(w0)[0], zstar = z_root(integrals(w0)[0]);
  if (!(z0 > zstar)) return res;
  using GL = boost::math::quadrature::gauss<double, 16>;
  // boost stores the non-negative half of the symmetric rule.
  std::vector<double> x, wt;
  for (std::size_t j = 0; j < GL::abscissa().size(); ++j) {
    const double a = GL::abscissa()[j], wa = GL::weights()[j];
    x.push_back(a);
    wt.push_back(wa);
    if (a != 0) {
      x.push_back(-a);
      wt.push_back(wa);
    }
  }
  Eigen::Matrix2d prev = Eigen::Matrix2d::Zero();
  bool have_prev = false;
  res.min_node_eigenvalue = 1e300;
  for (int panels = 4; panels <= max_panels; panels *= 2) {
    const double h = (z0 - zstar) / panels;
    std::vector<double> zs, ws;
    for (int p = 0; p < panels; ++p) {
      const double mid = zstar + (p + 0.5) * h;
      for (std::size_t j = 0; j < x.size(); ++j) {
        zs.push_back(mid + 0.5 * h * x[j]);
        ws.push_back(0.5 * h * wt[j]);
      }
    }
    std::vector<std::size_t> order(zs.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return zs[a] > zs[b]; });
    std::vector<double> us{0.0};
    for (std::size_t j : order) us.push_back(z0 - zs[j]);
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    res.ode_steps += integrate_to(w0, us, 1e-15, 1e-13, [&](std::size_t j, const OdeState& y) {
      if (j == 0) return;
      const WVector w = as_w(y);
      const Eigen::Matrix2d P = psi_integrand(w);
      res.min_node_eigenvalue = std::min(
          res.min_node_eigenvalue, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(P).eigenvalues().minCoeff());
      acc += ws[order[j - 1]] * zi_jacobian(w) * P;
    });
    res.psi = acc;
    res.panels = panels;
    if (have_prev) {
      res.last_change = (acc - prev).cwiseAbs().maxCoeff();
      if (res.last_change <= rel_tol * std::max(acc.cwiseAbs().maxCoeff(), 1e-300)) break;
    }
    prev = acc;
    have_prev = true;
  }
  res.psi = 0.5 * (res.psi + res.psi.transpose()).eval();
  return res;
}

WVector symmetric_trajectory(double c, double z) {
  const double th = theta(c);
  const double lo = c * th, slack = 1e-12 * c;
  if (!(z >= lo - slack && z <= c + slack)) throw std::domain_error("symmetric_trajectory: z outside [c theta, c]");
  const double gamma = z * z / c;
  const double d = z * -std::expm1(-z) / c;  // alpha - beta
  const double beta = d - c * d * d / gamma;    // from alpha - 2 beta = c d^2 / gamma
  return WVector(d + beta, beta, beta, gamma);
}

Eigen::Matrix3d k_matrix_printed(double c) {
  const double e = std::exp(c), e2 = e * e, e3 = e2 * e;
  const double F = 2 * e2 - c * e - 2 - 3 * c;
  const double G = (2 + c) * e - 2 - 3 * c;
  const double H = 2 * e3 + (-4 - 2 * c) * e2 + (4 + 3 * c) * e - 3 * c - 2;
  const double I = -2 * e + 2 + 3 * c;
  Eigen::Matrix3d K;
  K << F, G, G, G, H, I, G, I, H;
  return (std::expm1(c) / (e2 * e2 * (2 * e - c - 2))) * K;
}

Eigen::Matrix3d r_matrix(double c, double cross_scale) {
  const double q = -std::expm1(-c), ti = std::exp(-c) * q, a = -std::expm1(-2 * c);
  const double kappa = c * c / (cross_scale * q * q * q * truncated_poisson_var(c));
  auto sq = [](double x, double y, double z) {
    const Eigen::Vector3d v(x, y, z);
    return Eigen::Matrix3d(v * v.transpose());
  };
  return kappa * (sq(1, -1, 0) + sq(1, 0, -1)) + sq(1, 0, 0) / (1 - a) + sq(1, -1, -1) / (a - 2 * ti) +
         (sq(0, 1, 0) + sq(0, 0, 1)) / ti;
}

Eigen::Matrix3d k_matrix(double c) {
  if (!(c > 0)) throw std::domain_error("k_matrix: need c > 0");
  const Eigen::Matrix3d K = r_matrix(c, 1.0).inverse();
  return 0.5 * (K + K.transpose());
}

BMatrices b_matrices(double c) {
  if (!(c > 1)) throw std::domain_error("b_matrices: need c > 1");
  BMatrices r;
  const WVector w = likely_initial_w(c);
  r.quad = psi_matrix(w);
  r.psi = r.quad.psi;
  r.J = grad_f(w).leftCols<3>();
  r.K = k_matrix(c);
  r.B = r.psi + r.J * r.K * r.J.transpose();
  r.B = 0.5 * (r.B + r.B.transpose()).eval();
  Eigen::Matrix2d T;
  T << 1, -1, 0, 1;
  r.Btilde = T.transpose() * r.B * T;
  const double th = theta(c), dth = theta_prime(c);
  r.mu_prime = Eigen::Vector2d(2 * th * dth, th * th + 2 * c * th * dth);
  r.Bnp = r.B + c * r.mu_prime * r.mu_prime.transpose();
  return r;
}

}  // namespace giant
