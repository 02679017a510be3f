#include <doctest.h>

#include <cmath>

#include "giant/digraph.hpp"
#include "giant/enumerate.hpp"
#include "giant/peel.hpp"
#include "giant/rng.hpp"

using namespace giant;

TEST_CASE("initial_state examples") {
  CHECK(initial_state(Digraph(0, {})) == StateVector{0, 0, 0, 0});
  CHECK(initial_state(Digraph(5, {})) == StateVector{0, 0, 0, 0});
  CHECK(initial_state(Digraph(5, {{0, 1}})) == StateVector{2, 1, 1, 1});
  // 3-cycle plus pendant arc 3 -> 0: vertex 3 has in-degree 0, nobody has out-degree 0.
  CHECK(initial_state(Digraph(4, {{0, 1}, {1, 2}, {2, 0}, {3, 0}})) == StateVector{4, 1, 0, 4});
}

TEST_CASE("run_deletion forced cases") {
  const Digraph c3(3, {{0, 1}, {1, 2}, {2, 0}});
  const PeelResult r = run_deletion(c3, 1);
  CHECK(r.traj.states.size() == 1);
  CHECK(r.traj.deltas.empty());
  CHECK(r.core.graph == c3);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PeelResult a = run_deletion(Digraph(2, {{0, 1}}), seed);
    REQUIRE(a.traj.deltas.size() == 1);
    const TransitionDelta& d = a.traj.deltas[0];
    CHECK(d.a == 1);
    CHECK(d.b == 1);
    CHECK(d.ri == 0);
    CHECK(d.ro == 0);
    CHECK(d.k == 1);
    CHECK(a.traj.states.back() == StateVector{0, 0, 0, 0});
    CHECK(a.core.graph.n() == 0);
  }
}

TEST_CASE("run_deletion core equals core_11 and the bookkeeping identity holds") {
  bool same = true, identity = true, monotone = true, terminal = true, shapes = true;
  for (int i = 0; i < 500; ++i) {
    const Digraph d = sample_dnm(50, 100, trial_seed(100, i));
    const PeelResult r = run_deletion(d, trial_seed(200, i));
    same = same && r.core.vertices == core_11(d).vertices && r.core.graph == core_11(d).graph;
    const auto& st = r.traj.states;
    for (std::size_t t = 0; t + 1 < st.size(); ++t) {
      const TransitionDelta& dl = r.traj.deltas[t];
      identity = identity && dl.apply(st[t]) == st[t + 1];
      monotone = monotone && st[t + 1].nu < st[t].nu && st[t + 1].mu < st[t].mu;
      if (dl.flavor == Flavor::in)
        shapes = shapes && dl.a == 1 && dl.ro == 0 && dl.k >= std::max(1, dl.b + dl.ri);
      else
        shapes = shapes && dl.b == 1 && dl.ri == 0 && dl.k >= std::max(1, dl.a + dl.ro);
      shapes = shapes && st[t].ni + st[t].no <= st[t].nu;
    }
    terminal = terminal && st.back().ni == 0 && st.back().no == 0;
    terminal = terminal && r.traj.f_track.size() == st.size();
    for (int v = 0; v < r.core.graph.n(); ++v)
      terminal = terminal && r.core.graph.in_degree(v) > 0 && r.core.graph.out_degree(v) > 0;
  }
  CHECK(same);
  CHECK(identity);
  CHECK(monotone);
  CHECK(terminal);
  CHECK(shapes);
}

TEST_CASE("f_values and constraint") {
  const double c = 2, n = 1e6, q = 1 - std::exp(-c);
  const RealState w(n * (1 - std::exp(-2 * c)), n * std::exp(-c) * q, n * std::exp(-c) * q, c * n);
  const auto [f1, f2] = f_values(w, n);
  CHECK(f1 == doctest::Approx(2).epsilon(1e-12));
  CHECK(f2 == doctest::Approx(2).epsilon(1e-12));
  CHECK(in_s_eps(w, n, c, 0.1));

  CHECK(f_values(StateVector{5, 0, 0, 9}, 5).first == doctest::Approx(9.0 / 5));
  CHECK(f_values(StateVector{4, 1, 1, 4}, 4).first == doctest::Approx(8.0 / 9));
  CHECK_THROWS_AS(f_values(StateVector{4, 1, 1, 3}, 4), std::domain_error);
  CHECK(std::string(constraint_violation(to_real(StateVector{4, 1, 1, 3}))) == "mu/(nu - nu_i) > 1");
  CHECK(std::string(constraint_violation(to_real(StateVector{4, 1, 1, 0}))) == "mu > 0");
  CHECK(constraint_violation(to_real(StateVector{4, 1, 1, 4})) == nullptr);
  CHECK_FALSE(in_s_eps(StateVector{5, 0, 0, 9}, 5, 1.8, 1));
  CHECK_FALSE(in_s_eps(StateVector{4, 1, 1, 3}, 4, 1, 1));
}

TEST_CASE("f_track is undefined exactly outside the constraint") {
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    const PeelResult r = run_deletion(sample_dnm(200, 400, trial_seed(300, i)), i);
    for (std::size_t t = 0; t < r.traj.states.size(); ++t)
      ok = ok && r.traj.f_track[t].has_value() == !constraint_violation(to_real(r.traj.states[t]));
  }
  CHECK(ok);
}

TEST_CASE("early realized deltas match the first moments") {
  // D(n, m = 2n), n = 10^4: average the first 50 deltas of 200 runs.
  const int n = 10000, runs = 200, steps = 50;
  Eigen::Matrix<double, 5, 1> sum = Eigen::Matrix<double, 5, 1>::Zero(), sq = sum;
  Moments ref;
  ref.first.setZero();
  for (int i = 0; i < runs; ++i) {
    const Digraph d = sample_dnm(n, 2 * n, trial_seed(400, i));
    const PeelResult r = run_deletion(d, trial_seed(500, i));
    ref.first += approx_moments(to_real(r.traj.states[0])).first / runs;
    for (int t = 0; t < steps; ++t) {
      const TransitionDelta& dl = r.traj.deltas[t];
      const Eigen::Matrix<double, 5, 1> x(dl.a, dl.b, dl.ri, dl.ro, double(dl.k));
      sum += x;
      sq += x.cwiseProduct(x);
    }
  }
  const double N = double(runs) * steps;
  const Eigen::Matrix<double, 5, 1> mean = sum / N;
  const Eigen::Matrix<double, 5, 1> se = ((sq / N - mean.cwiseProduct(mean)) / N).cwiseSqrt();
  for (int j = 0; j < 5; ++j) CHECK(std::abs(mean[j] - ref.first[j]) < 3 * se[j]);
}
