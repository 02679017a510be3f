#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "giant/enumerate.hpp"
#include "giant/theory.hpp"

using namespace giant;

namespace {

// Frozen from tools/oracles/oracle.py (mpmath, 40 digits; psi by direct
// q-kernel summation and adaptive quadrature).
const double kTheta[][2] = {{1.01, 0.019736410439591772}, {1.2, 0.3136983310412177}, {1.5, 0.5828116438658114},
                            {2, 0.79681213002002},        {3, 0.9404797907073597},  {5, 0.9930228463488553}};
const double kThetaPrime[][2] = {{1.2, 1.2202115842358876}, {2, 0.27273575285157375}, {3, 0.0681456914267332}};

Eigen::Matrix3d sym3(double a, double b, double c, double d, double e, double f) {
  Eigen::Matrix3d m;
  m << a, b, c, b, d, e, c, e, f;
  return m;
}

WVector perturbed(double c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.5, 1.5);
  const WVector w0 = likely_initial_w(c);
  return WVector(w0[0], w0[1] * f(rng), w0[2] * f(rng), w0[3]);
}

}  // namespace

TEST_CASE("theta and its derivative") {
  for (const auto& [c, t] : kTheta) CHECK(theta(c) == doctest::Approx(t).epsilon(1e-13));
  for (const auto& [c, t] : kThetaPrime) CHECK(theta_prime(c) == doctest::Approx(t).epsilon(1e-10));
  for (double e : {1e-3, 1e-4}) CHECK(theta(1 + e) / (2 * e) == doctest::Approx(1).epsilon(2 * e));
  CHECK_THROWS_AS(theta(1.0), std::domain_error);
  const double c = 2, th = theta(c);
  CHECK(1 - th == doctest::Approx(std::exp(-c * th)).epsilon(1e-15));
}

TEST_CASE("ell and its inverse") {
  CHECK(ell(0) == 1);
  for (double z : {1e-8, 1e-3, 0.3, 1.0, 4.0, 30.0}) {
    CHECK(z_root(ell(z)) == doctest::Approx(z).epsilon(1e-11));
    const double h = 1e-6 * std::max(1.0, z);
    CHECK(ell_prime(z) == doctest::Approx((ell(z + h) - ell(z - h)) / (2 * h)).epsilon(1e-7));
    CHECK(z_root_prime(ell(z)) * ell_prime(z) == doctest::Approx(1));
  }
  for (double c : {1.5, 2.0, 3.0}) CHECK(z_root(c / (1 - std::exp(-c))) == doctest::Approx(c).epsilon(1e-13));
  CHECK_THROWS_AS(z_root(1.0), std::domain_error);
}

TEST_CASE("likely initial state and the integrals") {
  for (double c : {1.3, 2.0, 3.5}) {
    const WVector w = likely_initial_w(c);
    CHECK(w_violation(w) == nullptr);
    const Eigen::Vector2d I = integrals(w);
    CHECK(I[0] == doctest::Approx(c).epsilon(1e-13));
    CHECK(I[1] == doctest::Approx(c).epsilon(1e-13));
    const Eigen::Vector2d z = z_pair(w);
    CHECK(z[0] == doctest::Approx(c).epsilon(1e-13));
    CHECK(z[1] == doctest::Approx(c).epsilon(1e-13));
  }
  CHECK(std::string(w_violation(WVector(1, 0, 0.1, 2))) == "beta_i > 0");
  CHECK(w_closure_violation(WVector(1, 0, 0.1, 2)) == nullptr);
  CHECK_THROWS_AS(integrals(WVector(1, 0.2, 0.2, 0.5)), std::domain_error);
}

TEST_CASE("integrals_grad by finite differences") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const WVector w = perturbed(2, rng);
    const Eigen::Matrix<double, 2, 4> G = integrals_grad(w);
    for (int k = 0; k < 4; ++k) {
      WVector p = w, m = w;
      const double h = 1e-6;
      p[k] += h;
      m[k] -= h;
      const Eigen::Vector2d fd = (integrals(p) - integrals(m)) / (2 * h);
      CHECK((G.col(k) - fd).norm() < 1e-7 * (1 + fd.norm()));
    }
    // Both integrals are constant along the flow.
    CHECK(std::abs((G * ode_rhs(w))[0]) < 1e-12);
    CHECK(std::abs((G * ode_rhs(w))[1]) < 1e-12);
  }
}

TEST_CASE("ode_rhs is the scaled expected step") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    const WVector w = perturbed(2, rng);
    const Moments m = approx_moments(w);
    const Eigen::Matrix<double, 5, 1>& e = m.first;
    // Delta s = (-a-b, r_i-a, r_o-b, -k), one step per unit of scaled time.
    const WVector step(-e[kA] - e[kB], e[kRi] - e[kA], e[kRo] - e[kB], -e[kK]);
    CHECK((ode_rhs(w) - step).cwiseAbs().maxCoeff() < 1e-12);
    // dz/dt by the chain rule through z_pair.
    const double h = 1e-7;
    const Eigen::Vector2d fd = (z_pair(w + h * ode_rhs(w)) - z_pair(w - h * ode_rhs(w))) / (2 * h);
    CHECK((z_rates(w) - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("f boundary values and gradients") {
  for (double c : {1.5, 2.0, 3.0}) {
    const double th = theta(c);
    const WVector end(th * th, 0, 0, c * th * th);
    const Eigen::Vector2d f = f_mean(end);
    CHECK(f[0] == doctest::Approx(th * th).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(c * th * th).epsilon(1e-12));
    CHECK((f_mean(likely_initial_w(c)) - f).cwiseAbs().maxCoeff() < 1e-12);
  }
  const Eigen::Matrix<double, 2, 4> G = grad_f(likely_initial_w(2));
  Eigen::Matrix<double, 2, 4> ref;
  ref << 0.670426730463073, -1.3411627459559938, -1.3411627459559938, 0.14532345453463688, 0.10214206025646123,
      -2.9121823310188364, -2.9121823310188364, 0.9255564796163152;
  CHECK((G - ref).cwiseAbs().maxCoeff() < 1e-9);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const WVector w = perturbed(2.5, rng);
    const Eigen::Matrix<double, 2, 4> g = grad_f(w);
    for (int k = 0; k < 4; ++k) {
      WVector p = w, m = w;
      const double h = 1e-6;
      p[k] += h;
      m[k] -= h;
      CHECK((g.col(k) - (f_mean(p) - f_mean(m)) / (2 * h)).norm() < 1e-6);
    }
    // f is a first integral: grad f . w' = 0.
    CHECK((g * ode_rhs(w)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("characteristic from the symmetric start") {
  for (double c : {1.5, 2.0, 3.0}) {
    const Characteristic ch = integrate_characteristic(likely_initial_w(c));
    const double th = theta(c);
    CHECK(ch.monotone);
    CHECK(ch.end[0] == doctest::Approx(th * th).epsilon(1e-9));
    CHECK(ch.end[3] == doctest::Approx(c * th * th).epsilon(1e-9));
    CHECK(ch.end[1] == 0);
    CHECK(ch.end[2] == 0);
    CHECK(ch.max_integral_drift < 1e-10);
    const std::vector<double> zs{0.9 * c + 0.1 * c * th, 0.5 * (c + c * th), c * th + 0.1 * (c - c * th)};
    const std::vector<WVector> at = characteristic_at(likely_initial_w(c), zs);
    for (std::size_t j = 0; j < zs.size(); ++j)
      CHECK((at[j] - symmetric_trajectory(c, zs[j])).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK((symmetric_trajectory(2, 2) - likely_initial_w(2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(integrate_characteristic(WVector(1, 0.2, 0.2, 0.5)));
}

TEST_CASE("asymmetric characteristics keep their integrals") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    const WVector w = perturbed(2, rng);
    const Characteristic ch = integrate_characteristic(w);
    CHECK(ch.monotone);
    CHECK(ch.max_f_drift < 1e-9);
    const Eigen::Vector2d f = f_mean(w);
    CHECK(ch.end[3] / ch.end[0] == doctest::Approx(f[1] / f[0]).epsilon(1e-8));
  }
}

TEST_CASE("psi at c = 2 against direct summation") {
  const PsiResult r = psi_matrix(likely_initial_w(2));
  Eigen::Matrix2d ref;
  ref << 0.26565373090331407, 0.6776786162922582, 0.6776786162922582, 1.9673473978278073;
  CHECK((r.psi - ref).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r.min_node_eigenvalue > 0);
  CHECK(r.last_change < 1e-9);
  CHECK(r.psi(0, 1) == r.psi(1, 0));
}

TEST_CASE("psi integrand is a covariance of kernel moments") {
  // psi_integrand against the q-kernel second moments at a finite state.
  const double n = 1e5;
  const WVector w = likely_initial_w(2);
  const StateVector s{std::llround(n * w[0]), std::llround(n * w[1]), std::llround(n * w[2]),
                      std::llround(n * w[3])};
  const Moments m = kernel_moments(q_transition(s).kernel);
  const Eigen::Matrix<double, 2, 4> g = grad_f(w);
  Eigen::Matrix<double, 5, 2> U;
  for (int j = 0; j < 2; ++j)
    U.col(j) << -g(j, 0) - g(j, 1), -g(j, 0) - g(j, 2), g(j, 1), g(j, 2), -g(j, 3);
  const Eigen::Matrix2d direct = U.transpose() * m.second * U;
  CHECK((psi_integrand(w) - direct).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("K matrix") {
  const std::pair<double, Eigen::Matrix3d> ref[] = {
      {1.5, sym3(0.03987205966119851, 0.017857482638940332, 0.017857482638940332, 0.09450539484545213,
                 -0.0041570943833178445, 0.09450539484545213)},
      {2, sym3(0.01663832574922162, 0.005758943390486516, 0.005758943390486516, 0.07526792760216157,
               -0.005120438968248589, 0.07526792760216157)},
      {3, sym3(0.002435742690193061, 0.00045062972987342073, 0.00045062972987342073, 0.03833757643075229,
               -0.0015344832304462195, 0.03833757643075229)}};
  for (const auto& [c, K] : ref) {
    const Eigen::Matrix3d k = k_matrix(c);
    CHECK((k - K).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(k).eigenvalues().minCoeff() > 0);
    CHECK((k * r_matrix(c) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  // The reference closed form equals the inverse of R with doubled cross terms,
  // except its X_i/X_o covariance entry.
  const Eigen::Matrix3d p = k_matrix_printed(2), r2 = r_matrix(2, 2).inverse();
  CHECK(r2(0, 0) == doctest::Approx(0.01718475327416462).epsilon(1e-12));
  CHECK(r2(1, 2) == doctest::Approx(-0.008611595079109233).epsilon(1e-12));
  CHECK(p(0, 0) == doctest::Approx(r2(0, 0)).epsilon(1e-9));
  CHECK(p(0, 1) == doctest::Approx(r2(0, 1)).epsilon(1e-9));
  CHECK(p(1, 1) == doctest::Approx(r2(1, 1)).epsilon(1e-9));
  CHECK(std::abs(p(1, 2) - r2(1, 2)) > 1e-3);
}

TEST_CASE("B matrices at c = 2") {
  const BMatrices b = b_matrices(2);
  Eigen::Matrix2d B, Bnp;
  B << 0.5047705777995605, 1.2027041437948753, 1.2027041437948753, 3.150483324480377;
  Bnp << 0.8825915028802309, 2.5102580423987613, 2.5102580423987613, 7.675635544117695;
  CHECK((b.B - B).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((b.Bnp - Bnp).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(b.B).eigenvalues().minCoeff() > 0);
  // Bnp - B = c mu' mu'^T has rank one.
  CHECK(std::abs((b.Bnp - b.B).determinant()) < 1e-12);
  const double th = theta(2), dth = theta_prime(2);
  CHECK(b.mu_prime[0] == doctest::Approx(2 * th * dth));
  CHECK(b.mu_prime[1] == doctest::Approx(th * th + 4 * th * dth));
  // Excess coordinates: (V, A - V).
  CHECK(b.Btilde(0, 0) == doctest::Approx(B(0, 0)));
  CHECK(b.Btilde(0, 1) == doctest::Approx(B(0, 1) - B(0, 0)));
  CHECK(b.Btilde(1, 1) == doctest::Approx(B(1, 1) - 2 * B(0, 1) + B(0, 0)));
}
