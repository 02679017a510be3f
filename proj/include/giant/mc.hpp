#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "giant/peel.hpp"

namespace giant {

enum class Model { nm, np };

const char* model_name(Model m);
Model parse_model(const std::string& s);  // throws std::invalid_argument

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  StateVector s0;
  std::int64_t core_v = 0, core_a = 0;    // (1,1)-core
  std::int64_t giant_v = 0, giant_a = 0;  // largest strong component
  bool contained = true;                  // giant vertex set inside the core (or giant trivial)
  std::int64_t gap_v() const { return core_v - giant_v; }
  std::int64_t gap_a() const { return core_a - giant_a; }
};

// One trial: digraph from seed, then initial state, core and giant.
TrialRecord run_trial(Model model, int n, double c, std::uint64_t seed);

struct GapStats {
  double max = 0, median = 0, mean = 0;
};

struct ExperimentReport {
  Model model = Model::nm;
  int n = 0;
  double c = 0;
  std::int64_t m = 0;  // nm only
  double p = 0;        // np only
  double c_n = 0;      // density used for centering (m/n or c)
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<TrialRecord> records;  // by trial index

  bool cov_defined = false;  // needs two trials
  // Scaled: (X - mean n)/sqrt(n).
  Eigen::Vector2d core_mean = Eigen::Vector2d::Zero(), giant_mean = Eigen::Vector2d::Zero(),
                  excess_mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d core_cov = Eigen::Matrix2d::Zero(), giant_cov = Eigen::Matrix2d::Zero(),
                  excess_cov = Eigen::Matrix2d::Zero();
  Eigen::Vector3d init_mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d init_cov = Eigen::Matrix3d::Zero();
  GapStats gap_v, gap_a;
  double core_giant_ks = 0;  // two-sample KS between scaled core and giant vertex counts
};

// Worker count from GIANT_THREADS (default: hardware concurrency).
int worker_count();

// threads = 0 picks worker_count(). The report does not depend on threads.
ExperimentReport run_experiment(Model model, int n, double c, int trials, std::uint64_t master_seed,
                                int threads = 0);

// Rows of scaled pairs: (|V| - th^2 n, |A| - c th^2 n) / sqrt(n).
Eigen::MatrixXd scaled_core(const ExperimentReport& r);
Eigen::MatrixXd scaled_giant(const ExperimentReport& r);
// (|V| - th^2 n, (|A| - |V|) - (c - 1) th^2 n) / sqrt(n).
Eigen::MatrixXd scaled_excess(const ExperimentReport& r);
// (X - (1 - e^-2c) n, X_i - e^-c(1 - e^-c) n, X_o - ...) / sqrt(n).
Eigen::MatrixXd scaled_initial(const ExperimentReport& r);

struct GapSummary {
  bool contained = true;  // every trial has core >= giant in both counts
  int violations = 0;
  GapStats v, a;
  double mean_gap_over_sqrt_n = 0;
};

GapSummary gap_check(const ExperimentReport& r);

struct InitialStateCheck {
  Eigen::Vector3d mean_ratio, target, se;  // sample means of X/n, targets, standard errors of X/n
  Eigen::Matrix3d cov, K;                  // scaled sample covariance vs K(c)
  Eigen::Matrix3d rel_err;
  bool means_ok = false, cov_ok = false;
  double symmetry_z = 0;  // (mean X_i - mean X_o) / pooled SE
};

InitialStateCheck initial_state_check(const ExperimentReport& r, const Eigen::Matrix3d& K,
                                      double diag_tol = 0.25, double off_tol = 0.35);

struct KarpResult {
  double d = 0, p_value = 1;
  bool pass = false;
  double mean_descendants = 0, mean_component = 0;
};

KarpResult karp_check(int n, double p, int samples, std::uint64_t seed, double alpha = 1e-3);

struct Projection {
  std::string name;
  double skewness = 0, excess_kurtosis = 0, ks_d = 0, ks_p = 1;
};

struct NormalityDiagnostics {
  Eigen::Vector2d mean_z = Eigen::Vector2d::Zero();  // sample mean / SE using diag(B)
  Eigen::Matrix2d whitened_cov = Eigen::Matrix2d::Zero();
  std::vector<Projection> projections;  // 8
};

// x: rows of a scaled pair; B its theoretical covariance.
NormalityDiagnostics normality_diagnostics(const Eigen::MatrixXd& x, const Eigen::Matrix2d& B);

}  // namespace giant
