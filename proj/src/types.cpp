#include "codebounds/types.hpp"

#include <cmath>
#include <numeric>

namespace codebounds {

void validate_distribution(const Distribution& p, double tol) {
  if (p.empty()) throw Error(Errc::invalid_input, "empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(Errc::invalid_input, "distribution entry out of range");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol)
    throw Error(Errc::invalid_input,
                "distribution sums to " + std::to_string(sum));
}

StochasticMatrix make_stochastic(int rows, int cols, std::vector<double> p) {
  if (rows < 1 || cols < 1 ||
      p.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
    throw Error(Errc::invalid_input, "stochastic matrix shape mismatch");
  StochasticMatrix m{rows, cols, std::move(p)};
  for (int r = 0; r < rows; ++r) validate_distribution(m.row(r));
  return m;
}

Channel make_channel(int X, int Y, std::vector<double> W) {
  if (X < 2) throw Error(Errc::invalid_channel, "need at least two inputs");
  try {
    return Channel{X, Y, make_stochastic(X, Y, std::move(W))};
  } catch (const Error& e) {
    throw Error(Errc::invalid_channel, e.what());
  }
}

bool is_integral_composition(const Distribution& P, int n, double tol) {
  validate_distribution(P);
  if (n < 1) throw Error(Errc::invalid_input, "block length must be positive");
  for (double v : P) {
    double scaled = v * n;
    if (std::abs(scaled - std::round(scaled)) > tol) return false;
  }
  return true;
}

Distribution composition_of(const std::vector<int>& word, int K) {
  if (word.empty()) throw Error(Errc::invalid_input, "empty word");
  Distribution P(static_cast<size_t>(K), 0.0);
  for (int s : word) {
    if (s < 0 || s >= K) throw Error(Errc::invalid_input, "symbol out of range");
    P[static_cast<size_t>(s)] += 1.0;
  }
  for (double& v : P) v /= static_cast<double>(word.size());
  return P;
}

}  // namespace codebounds
