#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "codebounds/distances.hpp"

namespace codebounds {

// Relative PSD tolerance: an eigenvalue counts as nonnegative when it is
// >= -tol * max(|eigenvalues|).
inline constexpr double kPsdTol = 1e-9;

// Default curvature grid for the infinite-divisibility check. The two large
// entries matter: near rho -> inf the similarity matrix looks like
// ones - D/rho, so weak violations only surface at large rho.
const std::vector<double>& default_rho_grid();

// Double centering: dc(x,y) = -d(x,y) + rowmean(x) + rowmean(y) - grandmean.
// Positive semidefiniteness of the result is the negative-type condition.
// Requires all entries finite.
Eigen::MatrixXd center(const DistanceMatrix& D);

struct NegativeTypeResult {
  bool holds = false;
  // On failure: unit-norm zero-sum direction with positive distance form.
  std::optional<Eigen::VectorXd> witness;
  double min_eigenvalue = 0.0;
};

NegativeTypeResult check_negative_type(const DistanceMatrix& D,
                                       double tol = kPsdTol);

struct DivisibilityResult {
  bool holds = false;
  std::optional<double> failing_rho;
  double worst_eigenvalue = 0.0;  // most negative relative eigenvalue found
};

// exp(-d/rho) must be PSD for every rho on the grid; entries exp(-inf) = 0.
DivisibilityResult check_divisible(const DistanceMatrix& D,
                                   const std::vector<double>& rho_grid = {},
                                   double tol = kPsdTol);

struct ConcavityResult {
  bool holds = false;
  std::optional<Eigen::VectorXd> witness;  // zero-sum c with positive form
  double worst_form = 0.0;
};

// Samples random zero-sum directions (plus one spectral candidate) and
// checks the quadratic form sum c(x)c(y)d(x,y) <= tol. A sampled falsifier,
// not a proof.
ConcavityResult check_concavity_sampled(const DistanceMatrix& D,
                                        int trials = 200,
                                        std::uint64_t seed = 1729,
                                        double tol = 1e-9);

struct EmbedResult {
  Eigen::MatrixXd points;  // K rows; squared distances reproduce D
  double reconstruction_error = 0.0;
};

// Constructive embedding via the centered matrix's eigendecomposition;
// throws not-embeddable (with witness) when the matrix is not negative type.
EmbedResult euclidean_embed(const DistanceMatrix& D, double tol = 1e-8);

struct EmbeddingReport {
  // Unset fields mean "not applicable" (infinite entries present).
  std::optional<bool> divisible;
  std::optional<bool> negative_type;
  std::optional<bool> concave_form;
  std::optional<bool> embeddable;
  std::optional<Eigen::VectorXd> witness;
  double reconstruction_error = 0.0;

  [[nodiscard]] bool consistent() const;
};

// Runs all four checks. On matrices with infinite entries only the
// divisibility check applies and the rest are reported as not-applicable.
EmbeddingReport classify(const DistanceMatrix& D,
                         const std::vector<double>& rho_grid = {},
                         int trials = 200, std::uint64_t seed = 1729);

}  // namespace codebounds
