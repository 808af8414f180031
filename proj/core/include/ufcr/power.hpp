#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ufcr/allocator.hpp"
#include "ufcr/cone_program.hpp"
#include "ufcr/interference.hpp"
#include "ufcr/scenario.hpp"

namespace ufcr {

/// Power-only problem for a fixed assignment:
/// max sum log2(1 + g_n P_n) s.t. P >= 0, sum P <= p_max,
/// sum_n P_n Omega[n][l] <= i_th for every PU l.
struct PowerProblem {
  std::vector<double> g;  // noise-normalised effective gains
  Eigen::MatrixXd omega;  // N_SM x K_PU
  double p_max = 1.0;
  double i_th = 1.0;
  double delta_f_hz = 1.0;

  int size() const { return static_cast<int>(g.size()); }
  void validate() const;
};

PowerProblem make_power_problem(const Allocation& allocation, const ChannelSet& channels,
                                const Scenario& scenario, const InterferenceFactors& omega);

/// Reference into the geometric-mean tree: a leaf zeta_i, an internal
/// slack node, or the root t.
struct TreeRef {
  enum class Kind { leaf, node, root };
  Kind kind;
  int index;
  friend bool operator==(const TreeRef&, const TreeRef&) = default;
};

struct TreeConstraint {
  TreeRef z;  // z^2 <= x * y
  TreeRef x;
  TreeRef y;
};

/// Binary tree of hyperbolic constraints whose root t satisfies
/// t <= (prod zeta)^(1/n_leaves). Leaves are padded to 2^k with copies of
/// t. For one leaf there are no constraints and t <= zeta_0 is linear.
struct ConeTree {
  int n_leaves = 0;
  int padded_leaves = 0;
  int internal_nodes = 0;  // slack nodes excluding the root
  std::vector<TreeConstraint> constraints;  // children always precede parents
};

ConeTree build_cone_tree(int n_leaves);

/// Cone program maximising the geometric mean of zeta_n = 1 + g_n P_n.
/// Holes with g_n = 0 are left out (their zeta is fixed at 1).
ConeProgram build_socp(const PowerProblem& problem);

struct PowerSolution {
  SolveStatus status = SolveStatus::iteration_limit;
  std::vector<double> powers;  // hole positions
  double root_value = 0.0;      // optimal t
  double gap_bound = 0.0;
  int iterations = 0;

  bool ok() const { return status == SolveStatus::optimal; }
};

inline constexpr double kDefaultGapTol = 1e-9;

/// Solves a program produced by build_socp with the barrier method.
PowerSolution solve_power(const ConeProgram& program, double tol = kDefaultGapTol);

/// build_socp + solve_power.
PowerSolution solve_power(const PowerProblem& problem, double tol = kDefaultGapTol);

struct WaterfillSolution {
  SolveStatus status = SolveStatus::iteration_limit;
  std::vector<double> powers;
  double lambda = 0.0;         // budget multiplier
  std::vector<double> mu;      // per-PU multipliers
  double duality_gap = 0.0;    // dual bound minus objective of `powers`, nats
  int iterations = 0;

  bool ok() const { return status == SolveStatus::optimal; }
};

/// KKT solution of the power problem by minimising its Lagrange dual over
/// (lambda, mu) >= 0. For fixed multipliers the inner maximiser is the
/// water-filling map P_n = [1 / (lambda + sum_l mu_l Omega[n][l]) - 1/g_n]^+.
/// Requires at least one positive gain.
WaterfillSolution dual_waterfilling(const PowerProblem& problem, double tol = 1e-9);

/// Classic single-constraint water-filling (budget only).
std::vector<double> budget_waterfilling(std::span<const double> g, double p_max);

/// delta_f * sum log2(1 + P_n g_n).
double capacity(std::span<const double> powers, std::span<const double> g, double delta_f_hz);

enum class PowerMethod { socp, waterfilling };
PowerMethod parse_power_method(std::string_view name);

}  // namespace ufcr
