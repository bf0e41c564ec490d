#include "driftlab/gauss_hermite.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

#include "driftlab/errors.hpp"

namespace driftlab {

namespace {

GaussHermiteRule build_rule(std::size_t points) {
  // Jacobi matrix of the probabilists' Hermite polynomials: zero diagonal,
  // off-diagonal sqrt(k).
  const auto n = static_cast<Eigen::Index>(points);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    sub[k] = std::sqrt(static_cast<double>(k + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Gauss-Hermite eigen decomposition failed");
  }
  GaussHermiteRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    rule.weights[static_cast<std::size_t>(i)] = v * v;
    total += v * v;
  }
  for (auto& w : rule.weights) {
    w /= total;
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(std::size_t points) {
  if (points < 2) {
    throw InvalidArgument("Gauss-Hermite rule needs at least 2 points");
  }
  static std::mutex mutex;
  static std::map<std::size_t, GaussHermiteRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) {
    it = cache.emplace(points, build_rule(points)).first;
  }
  return it->second;
}

}  // namespace driftlab
