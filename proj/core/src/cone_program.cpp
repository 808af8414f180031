#include "ufcr/cone_program.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace ufcr {

int ConeProgram::add_variable(std::string name, bool nonneg, double initial) {
  names.push_back(std::move(name));
  nonnegative.push_back(nonneg);
  objective.push_back(0.0);
  start.push_back(initial);
  return num_variables() - 1;
}

int ConeProgram::count(Relation relation) const {
  int c = 0;
  for (const auto& row : linear)
    if (row.relation == relation) ++c;
  return c;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::iteration_limit:
      return "iteration_limit";
    case SolveStatus::line_search_failure:
      return "line_search_failure";
    case SolveStatus::infeasible_start:
      return "infeasible_start";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

class Barrier {
 public:
  explicit Barrier(const ConeProgram& p) : cones_(p.hyperbolic) {
    const int n = p.num_variables();
    for (int j = 0; j < n; ++j)
      if (p.nonnegative[j]) bounds_.push_back(j);
    const int mi = p.count(Relation::less_equal);
    const int me = p.count(Relation::equal);
    G_.setZero(mi, n);
    h_.resize(mi);
    A_.setZero(me, n);
    b_.resize(me);
    int ri = 0;
    int re = 0;
    for (const auto& row : p.linear) {
      if (row.relation == Relation::less_equal) {
        for (auto [j, v] : row.terms) G_(ri, j) += v;
        h_(ri++) = row.bound;
      } else {
        for (auto [j, v] : row.terms) A_(re, j) += v;
        b_(re++) = row.bound;
      }
    }
  }

  double degree() const {
    return static_cast<double>(G_.rows() + bounds_.size() + 2 * cones_.size());
  }

  const MatrixXd& A() const { return A_; }
  const VectorXd& b() const { return b_; }

  // +inf outside the open domain.
  double value(const VectorXd& x) const {
    double phi = 0.0;
    const VectorXd slack = h_ - G_ * x;
    for (Eigen::Index i = 0; i < slack.size(); ++i) {
      if (!(slack(i) > 0.0)) return kInf;
      phi -= std::log(slack(i));
    }
    for (int j : bounds_) {
      if (!(x(j) > 0.0)) return kInf;
      phi -= std::log(x(j));
    }
    for (const auto& c : cones_) {
      const double q = x(c.x) * x(c.y) - x(c.z) * x(c.z);
      if (!(x(c.x) > 0.0) || !(x(c.y) > 0.0) || !(q > 0.0)) return kInf;
      phi -= std::log(q);
    }
    return phi;
  }

  void derivatives(const VectorXd& x, VectorXd& grad, MatrixXd& hess) const {
    const Eigen::Index n = x.size();
    grad.setZero(n);
    hess.setZero(n, n);
    const VectorXd slack = h_ - G_ * x;
    for (Eigen::Index i = 0; i < slack.size(); ++i) {
      const double inv = 1.0 / slack(i);
      grad += inv * G_.row(i).transpose();
      hess.noalias() += (inv * inv) * G_.row(i).transpose() * G_.row(i);
    }
    for (int j : bounds_) {
      grad(j) -= 1.0 / x(j);
      hess(j, j) += 1.0 / (x(j) * x(j));
    }
    for (const auto& c : cones_) {
      const double xz = x(c.z), xx = x(c.x), xy = x(c.y);
      const double q = xx * xy - xz * xz;
      const int idx[3] = {c.z, c.x, c.y};
      const double dq[3] = {-2.0 * xz, xy, xx};
      for (int a = 0; a < 3; ++a) {
        grad(idx[a]) -= dq[a] / q;
        for (int b = 0; b < 3; ++b) hess(idx[a], idx[b]) += dq[a] * dq[b] / (q * q);
      }
      // minus the Hessian of q over q
      hess(c.z, c.z) += 2.0 / q;
      hess(c.x, c.y) -= 1.0 / q;
      hess(c.y, c.x) -= 1.0 / q;
    }
  }

 private:
  std::vector<int> bounds_;
  std::vector<HyperbolicConstraint> cones_;
  MatrixXd G_;
  VectorXd h_;
  MatrixXd A_;
  VectorXd b_;
};

}  // namespace

ConeSolution solve_cone_program(const ConeProgram& program, const BarrierOptions& options) {
  const int n = program.num_variables();
  if (static_cast<int>(program.start.size()) != n ||
      static_cast<int>(program.objective.size()) != n)
    throw std::invalid_argument("cone program vectors are inconsistent");

  const Barrier barrier(program);
  const double degree = barrier.degree();
  if (degree <= 0.0) throw std::invalid_argument("cone program has no inequality constraints");

  VectorXd x = Eigen::Map<const VectorXd>(program.start.data(), n);
  const VectorXd c = Eigen::Map<const VectorXd>(program.objective.data(), n);
  const MatrixXd& A = barrier.A();
  const Eigen::Index me = A.rows();

  ConeSolution out;
  if (!std::isfinite(barrier.value(x))) {
    out.status = SolveStatus::infeasible_start;
    out.x = program.start;
    return out;
  }

  double s = options.initial_weight;
  if (!(s > 0.0)) throw std::invalid_argument("initial barrier weight must be positive");
  VectorXd grad(n);
  MatrixXd hess(n, n);
  MatrixXd kkt(n + me, n + me);
  VectorXd rhs(n + me);

  // minimise F(x) = -s c.x + phi(x); changes in F are formed directly to
  // avoid cancelling the large s c.x term

  while (true) {
    int tiny_steps = 0;
    for (;;) {
      if (out.newton_steps >= options.max_newton_steps) {
        out.status = SolveStatus::iteration_limit;
        out.x.assign(x.data(), x.data() + n);
        out.objective = c.dot(x);
        out.gap_bound = degree / s;
        return out;
      }
      barrier.derivatives(x, grad, hess);
      grad -= s * c;

      // symmetric diagonal equilibration of the Newton system
      VectorXd d(n);
      for (int j = 0; j < n; ++j) d(j) = 1.0 / std::sqrt(std::max(hess(j, j), 1e-300));
      kkt.setZero();
      kkt.topLeftCorner(n, n) = d.asDiagonal() * hess * d.asDiagonal();
      if (me > 0) {
        const MatrixXd ad = A * d.asDiagonal();
        kkt.bottomLeftCorner(me, n) = ad;
        kkt.topRightCorner(n, me) = ad.transpose();
      }
      rhs.head(n) = -(d.asDiagonal() * grad);
      if (me > 0) rhs.tail(me) = barrier.b() - A * x;
      const VectorXd sol = kkt.partialPivLu().solve(rhs);
      const VectorXd dx = d.asDiagonal() * sol.head(n);
      ++out.newton_steps;
      if (!dx.allFinite()) {
        out.status = SolveStatus::line_search_failure;
        out.x.assign(x.data(), x.data() + n);
        out.objective = c.dot(x);
        return out;
      }

      const VectorXd hs = sol.head(n);
      const double decrement = hs.dot(kkt.topLeftCorner(n, n) * hs);
      if (std::abs(decrement) * 0.5 <= options.centering_tol) break;
      // roundoff floor: a second tiny decrement in a row means centred
      if (std::abs(decrement) < 1e-6) {
        if (++tiny_steps >= 2) break;
      } else {
        tiny_steps = 0;
      }

      const double phi0 = barrier.value(x);
      const double slope = -s * c.dot(dx);
      double step = 1.0;
      bool accepted = false;
      for (int tries = 0; tries < 100; ++tries, step *= 0.5) {
        const VectorXd trial = x + step * dx;
        const double phi = barrier.value(trial);
        if (!std::isfinite(phi)) continue;
        if (step * slope + (phi - phi0) <= -0.01 * step * decrement) {
          x = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // No progress possible at this barrier weight; accept the point as
        // centred if the decrement is already small relative to the gap.
        if (std::abs(decrement) < 1e-6) break;
        out.status = SolveStatus::line_search_failure;
        out.x.assign(x.data(), x.data() + n);
        out.objective = c.dot(x);
        out.gap_bound = degree / s;
        return out;
      }
    }

    const double objective = c.dot(x);
    if (degree / s <= options.gap_tol * std::max(1.0, std::abs(objective))) {
      out.status = SolveStatus::optimal;
      out.x.assign(x.data(), x.data() + n);
      out.objective = objective;
      out.gap_bound = degree / s;
      return out;
    }
    s *= options.barrier_growth;
  }
}

}  // namespace ufcr
