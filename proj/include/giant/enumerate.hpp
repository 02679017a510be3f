#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "giant/peel.hpp"

namespace giant {

using BigCount = unsigned __int128;

// Exact count of digraphs on [nu] with mu arcs whose zero-in-degree set is
// exactly {0..nu_i-1} and zero-out-degree set exactly {nu_i..nu_i+nu_o-1}.
// Exhaustive over candidate arc subsets; refuses nu > 6.
std::uint64_t exact_g(const StateVector& s);
// Same count by inclusion-exclusion over the degree constraints; valid at
// any size where the binomials fit (independent cross-check of exact_g).
BigCount g_inclusion_exclusion(const StateVector& s);

struct DegreePair {
  std::vector<int> in;   // delta
  std::vector<int> out;  // Delta
};

// Number of simple digraphs realizing (in, out); throws
// std::invalid_argument on a degree-sum mismatch. nu <= 6.
std::uint64_t exact_g_by_degrees(const DegreePair& dp);

struct McKay {
  double estimate = 0;     // mu!/prod(d! D!) * H
  double H = 0;            // fudge factor
  double upper_bound = 0;  // mu!/prod(d! D!)
  double log_upper_bound = 0;
};

McKay mckay_estimate(const DegreePair& dp);

// (z_i, z_o); throws std::domain_error if either ratio is <= 1.
std::pair<double, double> z_of_state(const RealState& s);

double log_asym_g(const RealState& s);
inline double asym_g(const RealState& s) { return std::exp(log_asym_g(s)); }
// log of mu! (e^x-1)^(nu-nu_i) x^-mu (e^y-1)^(nu-nu_o) y^-mu.
double log_g_upper_bound(const RealState& s, double x, double y);
// Variance of a Poisson(z) conditioned on being >= 1.
double truncated_poisson_mean(double z);
double truncated_poisson_var(double z);

// Leading factor of g(s')/g(s) for an admissible delta.
double g_ratio_asym(const RealState& s, const TransitionDelta& d);

struct KernelEntry {
  TransitionDelta delta;
  double p = 0;
};

struct TransitionKernel {
  StateVector source;
  std::vector<KernelEntry> entries;  // sorted by delta
  double mass_in = 0, mass_out = 0;
  double total() const { return mass_in + mass_out; }
  // Probability of a given delta (0 if absent).
  double at(const TransitionDelta& d) const;
};

using GFunction = std::function<std::uint64_t(const StateVector&)>;

// Kernel from the closed-form P_i + P_o with exact g ratios; by default g
// comes from a memoised exact_g.
TransitionKernel exact_transition(const StateVector& s, const GFunction& g = {});
// Definitional kernel: run one deletion step on every digraph of the source
// class and every semi-isolated choice. nu <= 6.
TransitionKernel oracle_transition(const StateVector& s);

// (N_in, N_out) for a pair of size vectors.
std::pair<std::uint64_t, std::uint64_t> n_counts(const StateVector& s, const StateVector& s2);

struct QKernel {
  TransitionKernel kernel;
  double deficit = 0;  // 1 - total mass
  std::int64_t k_max = 0;
};

// Substochastic approximation q_i + q_o, truncated at
// k <= max(60, 4 z_i z_o nu / mu) unless k_cap > 0 overrides.
QKernel q_transition(const StateVector& s, std::int64_t k_cap = 0);
// Closed-form total q_i (resp. q_o) mass: the generating function at (1,1,1).
double q_mass_closed(const StateVector& s, Flavor fl);
double q_in_mass_closed(const StateVector& s);

// Order of the fivesome components in every moment vector / matrix.
enum MomentIndex { kA = 0, kB = 1, kRi = 2, kRo = 3, kK = 4 };

struct Moments {
  Eigen::Matrix<double, 5, 1> first;
  Eigen::Matrix<double, 5, 5> second;  // symmetric
};

// The explicit first moments and the 15 pairwise-product moments.
Moments approx_moments(const RealState& s);
// Direct summation over a kernel.
Moments kernel_moments(const TransitionKernel& k);

// States with nu <= max_nu, mu <= max_mu, at least one semi-isolated vertex
// and a non-empty digraph class (g(s) > 0).
std::vector<StateVector> admissible_states(int max_nu, int max_mu);

}  // namespace giant
