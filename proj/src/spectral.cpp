#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "collision_census/error.hpp"
#include "collision_census/topology.hpp"

namespace census {

double spectral_lambda(const Topology& topology, Spectrum variant) {
  const auto n = topology.node_count();
  if (n > kSpectralGuard)
    throw Error(Errc::size_guard, "spectral_lambda needs A <= " + std::to_string(kSpectralGuard));
  if (!topology.is_regular()) throw Error(Errc::irregular_graph, "lambda is defined here for regular graphs only");

  const double inv_degree = 1.0 / topology.max_degree();
  Eigen::MatrixXd walk = Eigen::MatrixXd::Zero(n, n);
  for (Node v = 0; v < n; ++v)
    for (const Node w : topology.neighbors(v)) walk(v, w) = inv_degree;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(walk, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(Errc::precondition, "eigensolver did not converge");
  const auto& values = solver.eigenvalues();  // ascending
  const double second = values(n - 2);
  const double smallest = values(0);
  const double lambda = variant == Spectrum::absolute ? std::max(std::abs(second), std::abs(smallest))
                                                      : std::max(second, 0.0);
  return std::clamp(lambda, 0.0, 1.0);
}

}  // namespace census
