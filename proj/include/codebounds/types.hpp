#pragma once

#include <cstdint>
#include <vector>

#include "codebounds/errors.hpp"

namespace codebounds {

using Distribution = std::vector<double>;

inline constexpr double kDistributionTol = 1e-12;

// Throws unless p is a probability vector (entries >= 0, sum == 1 within tol).
void validate_distribution(const Distribution& p,
                           double tol = kDistributionTol);

// Row-stochastic matrix; rows index the conditioning symbol.
struct StochasticMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> p;  // row-major

  double operator()(int r, int c) const { return p[static_cast<size_t>(r) * cols + c]; }
  double& operator()(int r, int c) { return p[static_cast<size_t>(r) * cols + c]; }
  [[nodiscard]] Distribution row(int r) const {
    return Distribution(p.begin() + static_cast<long>(r) * cols,
                        p.begin() + static_cast<long>(r + 1) * cols);
  }
};

StochasticMatrix make_stochastic(int rows, int cols, std::vector<double> p);

// Discrete memoryless channel: X input symbols, Y output symbols.
struct Channel {
  int X = 0;
  int Y = 0;
  StochasticMatrix W;

  [[nodiscard]] Distribution row(int x) const { return W.row(x); }
};

Channel make_channel(int X, int Y, std::vector<double> W);

// A composition (type) is a distribution all of whose scaled entries n*P(x)
// are integral at block length n.
bool is_integral_composition(const Distribution& P, int n, double tol = 1e-9);

// Counts of each symbol scaled to a distribution.
Distribution composition_of(const std::vector<int>& word, int K);

}  // namespace codebounds
