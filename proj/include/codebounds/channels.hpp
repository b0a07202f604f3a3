#pragma once

#include <vector>

#include "codebounds/bounds.hpp"
#include "codebounds/distances.hpp"

namespace codebounds {

struct ChernoffResult {
  ExtReal value{0.0};
  double argmin_s = 0.5;
  bool boundary = false;  // minimum attained at s = 0 or s = 1
  bool pairwise_reversible_pair = false;  // |argmin_s - 1/2| <= 1e-6
};

// D_C(Q1,Q2) = -ln min_{s in [0,1]} sum_y Q1(y)^{1-s} Q2(y)^s over the
// common support; +inf when the supports are disjoint. The minimum over the
// closed interval equals the open-interval infimum by continuity.
ChernoffResult chernoff_distance(const Distribution& Q1,
                                 const Distribution& Q2);

// Entry (x,x') = D_C(W_x, W_x'). Additive across channel uses by design.
DistanceMatrix additive_chernoff_matrix(const Channel& W);

// True when every pair of rows minimizes its Chernoff integrand at s = 1/2,
// i.e. Bhattacharyya and Chernoff distances coincide pair by pair.
bool pairwise_reversible(const Channel& W);

// 3x3 channel: input x lands on x with probability 1-eps and on x+1 (mod 3)
// with probability eps.
Channel ternary_unilateral(double eps);

// Output distribution of a word through the memoryless channel, indexed by
// output sequences with the last letter varying fastest.
Distribution product_row(const Channel& W, const std::vector<int>& word);

// Weighted log-likelihood sum between the ternary unilateral codewords
// (2,3,1) and (1,2,3), weighting outputs by the normalized geometric mean of
// the two word likelihoods. Equals 3 ln((1-eps)/eps): nonzero even though
// the words share a composition.
double blahut_counterexample(double eps);

// Error-exponent upper bound curve: built on Bhattacharyya distances for
// pairwise reversible channels, on additive Chernoff distances otherwise.
BoundCurve reliability_upper(const Channel& W,
                             const std::vector<double>& R_grid,
                             const BoundOptions& opts = {});

}  // namespace codebounds
