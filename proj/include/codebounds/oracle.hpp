#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "codebounds/distances.hpp"
#include "codebounds/theta.hpp"

namespace codebounds {

inline constexpr int kOracleBudget = 20000;

// Vertex set = sequences over {0..K-1}; pair values are evaluated on demand
// from the base matrix (product of similarities, or sum of distances).
class CompatibilityGraph {
 public:
  enum class Mode { similarity, distance };

  static CompatibilityGraph similarity_graph(Eigen::MatrixXd g,
                                             std::vector<std::vector<int>> words);
  static CompatibilityGraph distance_graph(DistanceMatrix D,
                                           std::vector<std::vector<int>> words);

  [[nodiscard]] Mode mode() const { return mode_; }
  [[nodiscard]] int size() const { return static_cast<int>(words_.size()); }
  [[nodiscard]] const std::vector<std::vector<int>>& words() const {
    return words_;
  }
  [[nodiscard]] double similarity(int u, int v) const;
  [[nodiscard]] ExtReal distance(int u, int v) const;

 private:
  CompatibilityGraph(Mode mode, std::vector<std::vector<int>> words)
      : mode_(mode), words_(std::move(words)) {}

  Mode mode_;
  Eigen::MatrixXd g_;
  std::optional<DistanceMatrix> D_;
  std::vector<std::vector<int>> words_;
};

// Vertices of the n-fold power of G, optionally restricted to the words of
// composition P (requires n*P integral).
CompatibilityGraph kronecker_power(const WeightedGraph& G, int n,
                                   const Distribution* P = nullptr,
                                   int budget = kOracleBudget);

struct StableSetResult {
  int size = 0;
  std::vector<std::vector<int>> witness;
};

// alpha(G; eps): a largest set with pairwise similarity <= eps. Exact
// branch-and-bound; the witness is re-validated before returning.
StableSetResult max_stable_set(const CompatibilityGraph& graph, double eps);

struct MinDistResult {
  ExtReal distance{0.0};
  Code witness;
};

// Largest achievable minimum distance of an (n, M) code over D, exact.
// Optional composition restricts codewords to one composition class.
MinDistResult optimal_min_distance(int n, int M, const DistanceMatrix& D,
                                   const Distribution* P = nullptr,
                                   int budget = kOracleBudget);

struct ShiftResult {
  std::vector<int> shift;
  Code subcode;
};

// Searches symbol-wise shifts (mod K) for the one whose largest
// constant-composition bucket of the shifted code is biggest; pairwise
// distances are preserved whenever the distance is circularly symmetric.
ShiftResult shift_to_constant_composition(const Code& code,
                                          std::uint64_t seed = kDefaultSeed);

struct CoverResult {
  std::vector<int> a;
  Code subcode;
};

// Pigeonhole cover of a constant-composition code: the center sequence of
// composition F = P Vhat jointly typical with the most codewords, plus the
// covered subcode. Requires the joint counts n P(x) Vhat(x,a) to be integral.
CoverResult best_covered_subcode(const Code& code, const StochasticMatrix& Vhat,
                                 int budget = kOracleBudget);

}  // namespace codebounds
