#include "ufcr/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ufcr {

void PowerProblem::validate() const {
  if (omega.rows() != static_cast<Eigen::Index>(g.size()))
    throw std::invalid_argument("gain vector and Omega table disagree on the hole count");
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");
  if (!(i_th > 0.0)) throw std::invalid_argument("i_th must be > 0");
  for (double v : g)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("gains must be finite and >= 0");
  if ((omega.array() < 0.0).any()) throw std::invalid_argument("Omega entries must be >= 0");
}

PowerProblem make_power_problem(const Allocation& allocation, const ChannelSet& channels,
                                const Scenario& scenario, const InterferenceFactors& omega) {
  PowerProblem p;
  p.g = aggregate_gains(allocation, channels, scenario);
  p.omega = omega.omega;
  p.p_max = scenario.p_max_watts;
  p.i_th = scenario.i_th_watts;
  p.delta_f_hz = scenario.delta_f_hz;
  return p;
}

ConeTree build_cone_tree(int n_leaves) {
  if (n_leaves < 1) throw std::invalid_argument("cone tree needs at least one leaf");
  ConeTree tree;
  tree.n_leaves = n_leaves;
  int padded = 1;
  while (padded < n_leaves) padded *= 2;
  tree.padded_leaves = padded;

  std::vector<TreeRef> level;
  for (int i = 0; i < n_leaves; ++i) level.push_back({TreeRef::Kind::leaf, i});
  for (int i = n_leaves; i < padded; ++i) level.push_back({TreeRef::Kind::root, 0});

  while (level.size() > 1) {
    std::vector<TreeRef> next;
    const bool last = level.size() == 2;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      const TreeRef parent = last ? TreeRef{TreeRef::Kind::root, 0}
                                  : TreeRef{TreeRef::Kind::node, tree.internal_nodes++};
      tree.constraints.push_back({parent, level[i], level[i + 1]});
      next.push_back(parent);
    }
    level = std::move(next);
  }
  return tree;
}

ConeProgram build_socp(const PowerProblem& problem) {
  problem.validate();
  const int n = problem.size();
  const int k_pu = static_cast<int>(problem.omega.cols());

  std::vector<int> active;
  for (int i = 0; i < n; ++i)
    if (problem.g[i] > 0.0) active.push_back(i);

  ConeProgram prog;
  prog.power_var.assign(static_cast<std::size_t>(n), -1);
  prog.zeta_var.assign(static_cast<std::size_t>(n), -1);
  if (active.empty()) return prog;
  const int m = static_cast<int>(active.size());

  // strictly interior uniform start
  double p0 = problem.p_max / m;
  for (int l = 0; l < k_pu; ++l) {
    double row = 0.0;
    for (int i : active) row += problem.omega(i, l);
    if (row > 0.0) p0 = std::min(p0, problem.i_th / row);
  }
  p0 *= 0.5;

  for (int i : active)
    prog.power_var[i] = prog.add_variable("P" + std::to_string(i), true, p0);
  for (int i : active)
    prog.zeta_var[i] = prog.add_variable("zeta" + std::to_string(i), false,
                                         1.0 + problem.g[i] * p0);

  LinearConstraint budget{{}, Relation::less_equal, problem.p_max, "budget"};
  for (int i : active) budget.terms.emplace_back(prog.power_var[i], 1.0);
  prog.linear.push_back(std::move(budget));

  for (int l = 0; l < k_pu; ++l) {
    LinearConstraint row{{}, Relation::less_equal, problem.i_th, "interference" + std::to_string(l)};
    for (int i : active)
      if (problem.omega(i, l) > 0.0) row.terms.emplace_back(prog.power_var[i], problem.omega(i, l));
    if (!row.terms.empty()) prog.linear.push_back(std::move(row));
  }

  for (int i : active) {
    prog.linear.push_back({{{prog.zeta_var[i], 1.0}, {prog.power_var[i], -problem.g[i]}},
                           Relation::equal,
                           1.0,
                           "zeta" + std::to_string(i)});
  }

  const ConeTree tree = build_cone_tree(m);
  std::vector<int> node_var;
  for (int j = 0; j < tree.internal_nodes; ++j)
    node_var.push_back(prog.add_variable("upsilon" + std::to_string(j), false));
  prog.root = prog.add_variable("t", false);
  prog.objective[prog.root] = 1.0;

  auto var_of = [&](const TreeRef& r) {
    switch (r.kind) {
      case TreeRef::Kind::leaf:
        return prog.zeta_var[active[r.index]];
      case TreeRef::Kind::node:
        return node_var[r.index];
      case TreeRef::Kind::root:
        break;
    }
    return prog.root;
  };
  for (const auto& c : tree.constraints)
    prog.hyperbolic.push_back({var_of(c.z), var_of(c.x), var_of(c.y)});
  if (m == 1) prog.linear.push_back({{{prog.root, 1.0}, {prog.zeta_var[active[0]], -1.0}},
                                     Relation::less_equal,
                                     0.0,
                                     "root"});

  double g_max = 0.0;
  for (int i : active) g_max = std::max(g_max, problem.g[i]);
  prog.root_bound = 1.0 + g_max * problem.p_max / m;  // AM-GM

  // Interior values for the tree: shrink t until the root cone is strict.
  double t0 = 0.5;
  for (int attempt = 0; attempt < 200; ++attempt, t0 *= 0.5) {
    prog.start[prog.root] = t0;
    for (const auto& c : prog.hyperbolic)
      if (c.z != prog.root)
        prog.start[c.z] = (1.0 - 1e-3) * std::sqrt(prog.start[c.x] * prog.start[c.y]);
    bool strict = true;
    for (const auto& c : prog.hyperbolic)
      strict = strict && prog.start[c.z] * prog.start[c.z] < prog.start[c.x] * prog.start[c.y];
    if (strict) break;
  }
  return prog;
}

PowerSolution solve_power(const ConeProgram& program, double tol) {
  PowerSolution out;
  out.powers.assign(program.power_var.size(), 0.0);
  if (program.root < 0) {
    out.status = SolveStatus::optimal;
    return out;
  }
  BarrierOptions opts;
  opts.gap_tol = tol;
  opts.initial_weight = 1.0 / std::max(1.0, program.root_bound);
  const ConeSolution sol = solve_cone_program(program, opts);
  out.status = sol.status;
  out.root_value = sol.objective;
  out.gap_bound = sol.gap_bound;
  out.iterations = sol.newton_steps;
  for (std::size_t i = 0; i < program.power_var.size(); ++i)
    if (program.power_var[i] >= 0) out.powers[i] = std::max(0.0, sol.x[program.power_var[i]]);
  return out;
}

PowerSolution solve_power(const PowerProblem& problem, double tol) {
  return solve_power(build_socp(problem), tol);
}

std::vector<double> budget_waterfilling(std::span<const double> g, double p_max) {
  std::vector<int> order;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] > 0.0) order.push_back(static_cast<int>(i));
  std::vector<double> p(g.size(), 0.0);
  if (order.empty()) return p;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return g[a] > g[b]; });

  double inv_sum = 0.0;
  double level = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    inv_sum += 1.0 / g[order[k]];
    const double candidate = (p_max + inv_sum) / static_cast<double>(k + 1);
    if (candidate <= 1.0 / g[order[k]]) break;
    level = candidate;
    used = k + 1;
  }
  for (std::size_t k = 0; k < used; ++k) p[order[k]] = std::max(0.0, level - 1.0 / g[order[k]]);
  return p;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Lagrange dual of the power problem in nats. Row a_n = (1, Omega_n1..),
// bound b = (p_max, i_th, ...).
struct DualModel {
  std::vector<int> active;
  std::vector<double> g;
  MatrixXd rows;  // active x (1 + L)
  VectorXd bound;

  struct Point {
    VectorXd nu;
    VectorXd power;  // over active
    VectorXd slack;  // gradient = b - A^T P
    MatrixXd hess;
    double value = std::numeric_limits<double>::infinity();
    bool finite = false;
  };

  Point evaluate(const VectorXd& nu) const {
    Point pt;
    pt.nu = nu;
    const Eigen::Index dim = bound.size();
    pt.power.setZero(static_cast<Eigen::Index>(active.size()));
    pt.hess.setZero(dim, dim);
    double value = bound.dot(nu);
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double u = rows.row(ii).dot(nu);
      if (!(u > 0.0)) return pt;
      const double gi = g[i];
      if (u < gi) {
        pt.power(ii) = 1.0 / u - 1.0 / gi;
        value += std::log(gi / u) - 1.0 + u / gi;
        pt.hess.noalias() += rows.row(ii).transpose() * rows.row(ii) / (u * u);
      }
    }
    pt.slack = bound - rows.transpose() * pt.power;
    pt.value = value;
    pt.finite = std::isfinite(value);
    return pt;
  }

  // Largest normalised violation of the projected-gradient optimality test.
  double residual(const Point& pt) const {
    double r = 0.0;
    for (Eigen::Index i = 0; i < bound.size(); ++i) {
      const double s = pt.slack(i) / bound(i);
      r = std::max(r, pt.nu(i) > 0.0 ? std::abs(s) : std::max(0.0, -s));
    }
    return r;
  }

  double objective(const VectorXd& power) const {
    double f = 0.0;
    for (std::size_t i = 0; i < active.size(); ++i)
      f += std::log1p(g[i] * power(static_cast<Eigen::Index>(i)));
    return f;
  }
};

}  // namespace

WaterfillSolution dual_waterfilling(const PowerProblem& problem, double tol) {
  problem.validate();
  const int n = problem.size();
  const auto k_pu = problem.omega.cols();

  DualModel model;
  for (int i = 0; i < n; ++i)
    if (problem.g[i] > 0.0) {
      model.active.push_back(i);
      model.g.push_back(problem.g[i]);
    }
  if (model.active.empty()) throw std::invalid_argument("water-filling needs a positive gain");

  const auto m = static_cast<Eigen::Index>(model.active.size());
  const Eigen::Index dim = 1 + k_pu;
  model.rows.resize(m, dim);
  for (Eigen::Index i = 0; i < m; ++i) {
    model.rows(i, 0) = 1.0;
    for (Eigen::Index l = 0; l < k_pu; ++l) model.rows(i, 1 + l) = problem.omega(model.active[i], l);
  }
  model.bound.resize(dim);
  model.bound(0) = problem.p_max;
  for (Eigen::Index l = 0; l < k_pu; ++l) model.bound(1 + l) = problem.i_th;

  // Budget-only water level as the starting multiplier.
  const auto start_power = budget_waterfilling(model.g, problem.p_max);
  double level = 0.0;
  for (std::size_t i = 0; i < start_power.size(); ++i)
    if (start_power[i] > 0.0) level = start_power[i] + 1.0 / model.g[i];
  VectorXd nu = VectorXd::Zero(dim);
  nu(0) = 1.0 / level;

  WaterfillSolution out;
  auto pt = model.evaluate(nu);
  constexpr int kMaxIterations = 500;

  // Scales the iterate's powers back inside every constraint.
  auto feasible_power = [&](const VectorXd& power) {
    const VectorXd load = model.rows.transpose() * power;
    double shrink = 1.0;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (load(i) > model.bound(i)) shrink = std::min(shrink, model.bound(i) / load(i));
    return VectorXd(power * shrink);
  };

  VectorXd power;
  for (int it = 0;; ++it) {
    out.iterations = it;
    power = feasible_power(pt.power);
    const double f = model.objective(power);
    // weak duality: any nu >= 0 bounds the optimum from above
    out.duality_gap = pt.value - f;
    if (out.duality_gap <= tol * std::max(1.0, f)) {
      out.status = SolveStatus::optimal;
      break;
    }
    if (it >= kMaxIterations) {
      out.status = SolveStatus::iteration_limit;
      break;
    }

    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (!(pt.nu(i) == 0.0 && pt.slack(i) >= 0.0)) free.push_back(i);
    const auto nf = static_cast<Eigen::Index>(free.size());

    MatrixXd hff(nf, nf);
    VectorXd gf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      gf(a) = pt.slack(free[a]);
      for (Eigen::Index b = 0; b < nf; ++b) hff(a, b) = pt.hess(free[a], free[b]);
    }
    // Projected Newton step on the Jacobi-scaled system, falling back to a
    // diagonally scaled gradient.
    VectorXd jac(nf);
    for (Eigen::Index a = 0; a < nf; ++a)
      jac(a) = hff(a, a) > 0.0 ? 1.0 / std::sqrt(hff(a, a)) : 0.0;
    VectorXd newton(nf);
    {
      MatrixXd reg = jac.asDiagonal() * hff * jac.asDiagonal();
      for (Eigen::Index a = 0; a < nf; ++a) reg(a, a) += 1e-12;
      newton = jac.asDiagonal() * reg.ldlt().solve(-(jac.asDiagonal() * gf));
    }
    VectorXd scaled(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      scaled(a) = -gf(a) * jac(a) * jac(a);
      // dual is linear along a multiplier no subband responds to
      if (jac(a) == 0.0 && gf(a) > 0.0) scaled(a) = -pt.nu(free[a]);
    }

    bool moved = false;
    for (const VectorXd* dir : {&newton, &scaled}) {
      if (!dir->allFinite()) continue;
      double step = 1.0;
      for (int tries = 0; tries < 80; ++tries, step *= 0.5) {
        VectorXd cand = pt.nu;
        for (Eigen::Index a = 0; a < nf; ++a)
          cand(free[a]) = std::max(0.0, pt.nu(free[a]) + step * (*dir)(a));
        auto trial = model.evaluate(cand);
        if (!trial.finite) continue;
        const double predicted = pt.slack.dot(cand - pt.nu);
        // Near the optimum the dual value stops resolving progress; a step
        // that halves the KKT residual without raising it is taken too.
        const bool sufficient = trial.value <= pt.value + 1e-4 * predicted;
        const bool residual = trial.value <= pt.value + 1e-14 * std::abs(pt.value) &&
                              model.residual(trial) <= 0.5 * model.residual(pt);
        if (sufficient || residual) {
          moved = trial.value < pt.value || (cand - pt.nu).norm() > 0.0;
          pt = std::move(trial);
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) {
      out.status = SolveStatus::line_search_failure;
      break;
    }
  }

  out.powers.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) out.powers[model.active[i]] = power(i);
  out.lambda = pt.nu(0);
  out.mu.assign(pt.nu.data() + 1, pt.nu.data() + dim);
  return out;
}

double capacity(std::span<const double> powers, std::span<const double> g, double delta_f_hz) {
  if (powers.size() != g.size()) throw std::invalid_argument("power and gain vectors differ in length");
  double bits = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) bits += std::log2(1.0 + powers[i] * g[i]);
  return delta_f_hz * bits;
}

PowerMethod parse_power_method(std::string_view name) {
  if (name == "socp") return PowerMethod::socp;
  if (name == "wf" || name == "waterfilling") return PowerMethod::waterfilling;
  throw std::invalid_argument("unknown power method '" + std::string(name) + "'");
}

}  // namespace ufcr
