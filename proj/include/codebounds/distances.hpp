#pragma once

#include <Eigen/Dense>
#include <vector>

#include "codebounds/extreal.hpp"
#include "codebounds/types.hpp"

namespace codebounds {

// Symmetric K x K matrix of extended-real distances, zero diagonal.
// Construction symmetrizes violations up to 1e-9 and rejects anything larger.
// The circularly_symmetric flag is set by an exact shift-invariance check
// d(x,x') == d(0, x'-x mod K); it is never guessed from near-equality.
class DistanceMatrix {
 public:
  DistanceMatrix(int K, std::vector<ExtReal> entries);  // row-major K*K

  [[nodiscard]] int K() const { return K_; }
  [[nodiscard]] ExtReal operator()(int x, int y) const {
    return e_[static_cast<size_t>(x) * K_ + y];
  }
  [[nodiscard]] bool circularly_symmetric() const { return circ_; }
  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] double max_finite() const;  // 0 if every off-diagonal is inf

  // Dense view of the finite case; throws infinite-distance otherwise.
  [[nodiscard]] Eigen::MatrixXd dense() const;

 private:
  int K_;
  std::vector<ExtReal> e_;
  bool circ_ = false;
};

// Symmetric similarity matrix with unit diagonal and entries in [0,1].
struct WeightedGraph {
  Eigen::MatrixXd g;

  [[nodiscard]] int K() const { return static_cast<int>(g.rows()); }
};

WeightedGraph make_graph(Eigen::MatrixXd g);

// A block code: M length-n words over {0..K-1}; repeats allowed.
struct Code {
  int K = 0;
  int n = 0;
  std::vector<std::vector<int>> words;

  [[nodiscard]] int M() const { return static_cast<int>(words.size()); }
  [[nodiscard]] double rate() const;  // ln(M)/n, in nats
};

Code make_code(int K, std::vector<std::vector<int>> words);

DistanceMatrix build_hamming(int K);
DistanceMatrix build_lee(int K);

// Squared Euclidean distances between the given points (rows).
DistanceMatrix build_from_points(const Eigen::MatrixXd& points);

// d(x,x') = -ln sum_y sqrt(W_x(y) W_x'(y)); +inf on disjoint output support.
DistanceMatrix build_bhattacharyya(const Channel& ch);

// Cycle graph distances: 1 on C_K edges, +inf elsewhere.
DistanceMatrix build_cycle(int K);

ExtReal sequence_distance(const std::vector<int>& x, const std::vector<int>& y,
                          const DistanceMatrix& D);

// Minimum sequence_distance over unordered index pairs; M >= 2 required.
ExtReal code_min_distance(const Code& code, const DistanceMatrix& D);

WeightedGraph to_similarity(const DistanceMatrix& D);   // g = exp(-d)
DistanceMatrix to_distance(const WeightedGraph& G);     // d = -ln g

WeightedGraph kronecker(const WeightedGraph& a, const WeightedGraph& b);

}  // namespace codebounds
