#include "exomap/graph_optimizer.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <queue>
#include <vector>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

Vector6d factorResidual(const Factor& f, const SE3& from, const SE3& to) {
  return (f.relative_pose.inverse() * (from.inverse() * to)).log();
}

double totalCost(const std::vector<SE3>& poses, const std::vector<Factor>& factors) {
  double cost = 0.0;
  for (const auto& f : factors) {
    const Vector6d r = factorResidual(f, poses[static_cast<std::size_t>(f.from_id)],
                                      poses[static_cast<std::size_t>(f.to_id)]);
    cost += r.dot(f.information * r);
  }
  return cost;
}

void checkConnected(const PoseGraph& graph) {
  const std::size_t n = graph.nodes().size();
  if (n <= 1) return;
  std::vector<std::vector<int>> adj(n);
  for (const auto& f : graph.factors()) {
    adj[static_cast<std::size_t>(f.from_id)].push_back(f.to_id);
    adj[static_cast<std::size_t>(f.to_id)].push_back(f.from_id);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        queue.push(w);
      }
    }
  }
  if (count != n) throw InvalidArgumentError("pose graph is disconnected");
}

// Central-difference Jacobian of the factor residual w.r.t. the
// left-multiplicative twist of one endpoint.
Matrix6d numericJacobian(const Factor& f, const SE3& from, const SE3& to, bool wrt_from) {
  constexpr double kStep = 1e-6;
  Matrix6d jac;
  for (int k = 0; k < 6; ++k) {
    Vector6d delta = Vector6d::Zero();
    delta[k] = kStep;
    const SE3 plus = SE3::exp(delta) * (wrt_from ? from : to);
    delta[k] = -kStep;
    const SE3 minus = SE3::exp(delta) * (wrt_from ? from : to);
    const Vector6d rp = wrt_from ? factorResidual(f, plus, to) : factorResidual(f, from, plus);
    const Vector6d rm = wrt_from ? factorResidual(f, minus, to) : factorResidual(f, from, minus);
    jac.col(k) = (rp - rm) / (2.0 * kStep);
  }
  return jac;
}

}  // namespace

double graphCost(const PoseGraph& graph) {
  std::vector<SE3> poses;
  poses.reserve(graph.nodes().size());
  for (const auto& n : graph.nodes()) poses.push_back(n.pose);
  return totalCost(poses, graph.factors());
}

OptimizeResult optimize(PoseGraph& graph, const OptimizeOptions& options) {
  checkConnected(graph);

  OptimizeResult result;
  const std::size_t n = graph.nodes().size();
  if (n <= 1 || graph.factors().empty()) {
    result.converged = true;
    return result;
  }

  std::vector<SE3> poses;
  poses.reserve(n);
  for (const auto& node : graph.nodes()) poses.push_back(node.pose);
  const auto& factors = graph.factors();

  double cost = totalCost(poses, factors);
  if (!std::isfinite(cost)) throw NumericalError("non-finite initial graph cost");
  result.initial_cost = cost;

  // Node 0 is the gauge; state covers nodes 1..n-1.
  const std::size_t dim = 6 * (n - 1);
  const auto stateIndex = [](int node_id) { return 6 * (static_cast<std::size_t>(node_id) - 1); };

  double lambda = options.initial_lambda;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd gradient = Eigen::VectorXd::Zero(dim);

    for (const auto& f : factors) {
      const SE3& from = poses[static_cast<std::size_t>(f.from_id)];
      const SE3& to = poses[static_cast<std::size_t>(f.to_id)];
      const Vector6d r = factorResidual(f, from, to);
      const bool use_from = f.from_id != 0;
      const bool use_to = f.to_id != 0;
      Matrix6d j_from, j_to;
      if (use_from) j_from = numericJacobian(f, from, to, true);
      if (use_to) j_to = numericJacobian(f, from, to, false);

      if (use_from) {
        const std::size_t a = stateIndex(f.from_id);
        hessian.block<6, 6>(a, a) += j_from.transpose() * f.information * j_from;
        gradient.segment<6>(a) += j_from.transpose() * f.information * r;
      }
      if (use_to) {
        const std::size_t b = stateIndex(f.to_id);
        hessian.block<6, 6>(b, b) += j_to.transpose() * f.information * j_to;
        gradient.segment<6>(b) += j_to.transpose() * f.information * r;
      }
      if (use_from && use_to) {
        const std::size_t a = stateIndex(f.from_id);
        const std::size_t b = stateIndex(f.to_id);
        const Matrix6d cross = j_from.transpose() * f.information * j_to;
        hessian.block<6, 6>(a, b) += cross;
        hessian.block<6, 6>(b, a) += cross.transpose();
      }
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = hessian;
      for (std::size_t k = 0; k < dim; ++k) {
        damped(k, k) += lambda * std::max(hessian(k, k), 1e-12);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
      if (!step.allFinite()) {
        lambda *= options.lambda_increase;
        continue;
      }

      std::vector<SE3> candidate = poses;
      for (std::size_t node_id = 1; node_id < n; ++node_id) {
        const Vector6d xi = step.segment<6>(stateIndex(static_cast<int>(node_id)));
        candidate[node_id] = SE3::exp(xi) * candidate[node_id];
      }
      const double candidate_cost = totalCost(candidate, factors);
      if (!std::isfinite(candidate_cost)) throw NumericalError("non-finite graph cost");

      if (candidate_cost <= cost) {
        const double improvement = cost - candidate_cost;
        poses = std::move(candidate);
        cost = candidate_cost;
        lambda = std::max(lambda * options.lambda_decrease, 1e-12);
        accepted = true;
        ++result.iterations;
        if (improvement < options.relative_cost_tol * std::max(cost, 1.0)) {
          result.converged = true;
        }
      } else {
        lambda *= options.lambda_increase;
      }
    }

    if (!accepted || result.converged) {
      result.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) graph.nodes()[i].pose = poses[i];
  result.final_cost = cost;
  return result;
}

}  // namespace exomap
