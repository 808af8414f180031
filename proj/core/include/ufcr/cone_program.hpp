#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ufcr {

enum class Relation { less_equal, equal };

struct LinearConstraint {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Relation relation = Relation::less_equal;
  double bound = 0.0;
  std::string label;
};

/// z^2 <= x * y with x, y >= 0. Equivalent to the second-order cone
/// || (2z, x - y) ||_2 <= x + y.
struct HyperbolicConstraint {
  int z = -1;
  int x = -1;
  int y = -1;
};

/// Small dense conic program: maximise objective . v subject to linear
/// rows, non-negativity bounds and hyperbolic (rotated second-order)
/// cones. `start` must be strictly feasible for every inequality and
/// satisfy the equality rows.
struct ConeProgram {
  std::vector<std::string> names;
  std::vector<bool> nonnegative;
  std::vector<double> objective;
  std::vector<LinearConstraint> linear;
  std::vector<HyperbolicConstraint> hyperbolic;
  std::vector<double> start;

  // Filled by build_socp: variable of P_n per hole position (-1 when the
  // hole is excluded), of zeta_n, and of the root t.
  std::vector<int> power_var;
  std::vector<int> zeta_var;
  int root = -1;
  double root_bound = 1.0;  // a priori upper bound on the objective

  int add_variable(std::string name, bool nonneg, double initial = 0.0);
  int num_variables() const { return static_cast<int>(names.size()); }
  int count(Relation relation) const;
};

enum class SolveStatus { optimal, iteration_limit, line_search_failure, infeasible_start };

std::string_view to_string(SolveStatus status);

struct BarrierOptions {
  double gap_tol = 1e-9;        // stop when barrier gap <= gap_tol * max(1, |objective|)
  double centering_tol = 1e-9;  // Newton decrement^2 / 2
  double barrier_growth = 20.0;
  double initial_weight = 1.0;  // objective weight of the first centring step
  int max_newton_steps = 2000;
};

struct ConeSolution {
  SolveStatus status = SolveStatus::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
  double gap_bound = 0.0;
  int newton_steps = 0;
};

/// Primal log-barrier interior-point method with equality-constrained
/// Newton centering.
ConeSolution solve_cone_program(const ConeProgram& program, const BarrierOptions& options = {});

}  // namespace ufcr
