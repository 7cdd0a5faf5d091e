#pragma once

#include "exomap/pose_graph.hpp"

namespace exomap {

struct OptimizeOptions {
  int max_iterations = 100;
  double relative_cost_tol = 1e-9;
  double initial_lambda = 1e-4;
  double lambda_increase = 10.0;
  double lambda_decrease = 0.1;
};

struct OptimizeResult {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Weighted cost of the graph: sum over factors of r^T * Omega * r with
/// r = log(measurement^-1 * (pose_from^-1 * pose_to)).
double graphCost(const PoseGraph& graph);

/// Levenberg-Marquardt over node poses with node 0 held fixed (gauge).
/// Poses update by left-multiplicative retraction, so rotations stay on the
/// manifold. Accepted iterations never increase the cost.
/// Throws InvalidArgumentError if the graph is not connected through its
/// factors and NumericalError on non-finite costs.
OptimizeResult optimize(PoseGraph& graph, const OptimizeOptions& options = {});

}  // namespace exomap
