#pragma once

#include <cstddef>
#include <vector>

namespace driftlab {

/// Gauss-Hermite rule for expectations against the standard Gaussian:
/// E[f(Y)] ~= sum_i weights[i] * f(nodes[i]), weights summing to one.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      acc += weights[i] * f(nodes[i]);
    }
    return acc;
  }
};

/// Rule with `points` nodes (Golub-Welsch). Cached per size; thread safe.
const GaussHermiteRule& gauss_hermite_rule(std::size_t points = 160);

}  // namespace driftlab
