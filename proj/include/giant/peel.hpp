#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "giant/digraph.hpp"

namespace giant {

// Lumped state s = (nu, nu_i, nu_o, mu).
struct StateVector {
  std::int64_t nu = 0, ni = 0, no = 0, mu = 0;
  friend auto operator<=>(const StateVector&, const StateVector&) = default;
};

// Real-valued state (nu, nu_i, nu_o, mu); also serves as the scaled w vector.
using RealState = Eigen::Vector4d;

inline RealState to_real(const StateVector& s) {
  return RealState(double(s.nu), double(s.ni), double(s.no), double(s.mu));
}

enum class Flavor { in, out };

// The fivesome (a, b, r_i, r_o, k) of one deletion step.
struct TransitionDelta {
  int a = 0, b = 0, ri = 0, ro = 0;
  std::int64_t k = 0;
  Flavor flavor = Flavor::in;
  friend auto operator<=>(const TransitionDelta&, const TransitionDelta&) = default;

  // Delta s = (-a-b, r_i-a, r_o-b, -k).
  StateVector apply(const StateVector& s) const {
    return {s.nu - a - b, s.ni + ri - a, s.no + ro - b, s.mu - k};
  }
};

struct Trajectory {
  std::vector<StateVector> states;
  std::vector<TransitionDelta> deltas;
  std::vector<std::optional<std::pair<double, double>>> f_track;
};

StateVector initial_state(const Digraph& d);

struct PeelResult {
  Subgraph core;
  Trajectory traj;
};

// The randomized deletion chain: repeatedly delete a uniformly chosen
// semi-isolated vertex, then every vertex that became isolated.
PeelResult run_deletion(const Digraph& d, std::uint64_t seed);

// Which part of the constraint mu, nu-nu_i, nu-nu_o > 0 and
// mu/(nu-nu_i), mu/(nu-nu_o) > 1 fails; empty when it holds.
const char* constraint_violation(const RealState& s);

// (F1, F2); throws std::domain_error naming the violated inequality.
std::pair<double, double> f_values(const RealState& s, double n);
inline std::pair<double, double> f_values(const StateVector& s, double n) {
  return f_values(to_real(s), n);
}

bool in_s_eps(const RealState& s, double n, double c_n, double eps);
inline bool in_s_eps(const StateVector& s, double n, double c_n, double eps) {
  return in_s_eps(to_real(s), n, c_n, eps);
}

}  // namespace giant
