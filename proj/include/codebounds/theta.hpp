#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "codebounds/distances.hpp"

namespace codebounds {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct SolverOptions {
  int starts = 2;                // independent seeded starts, best kept
  std::uint64_t seed = kDefaultSeed;
  int max_iter = 500;            // Newton iterations per start
  double gap_tol = 1e-9;         // optimality gap target on the value scale
  double feas_tol = 1e-8;        // certification threshold for constraints
};

enum class SolverStatus { converged, max_iterations, infeasible };

const char* solver_status_name(SolverStatus s);

// Gram matrix of [handle, u_1 .. u_K]: row/column 0 is the handle. Unit
// diagonal; handle row nonnegative; |gram(x,y)| within the degree bound
// exp(-d(x,y)/rho) for 1 <= x < y.
struct Representation {
  Eigen::MatrixXd gram;
  double rho = 0.0;  // +inf for the orthogonality-constrained variant
};

struct ThetaResult {
  double value = 0.0;
  Representation representation;
  std::vector<double> per_symbol_cost;  // -ln gram(0,x)^2
  SolverStatus status = SolverStatus::converged;
  double feasibility_margin = 0.0;  // worst constraint violation, signed
};

// Worst-case variant: minimizes max_x -ln gram(0,x)^2 over representations
// of degree rho. rho may be +inf: entries with d = inf are then pinned to
// zero and all finite-distance pairs are unconstrained.
ThetaResult solve_theta(const DistanceMatrix& D, double rho,
                        const SolverOptions& opts = {});

// Weighted variant: minimizes sum_x P(x) * (-ln gram(0,x)^2).
ThetaResult solve_theta_P(const DistanceMatrix& D, double rho,
                          const Distribution& P,
                          const SolverOptions& opts = {});

// Same solves driven by a similarity matrix; degree bound g^(1/rho).
ThetaResult solve_theta_graph(const WeightedGraph& G, double rho,
                              const SolverOptions& opts = {});
ThetaResult solve_theta_graph_P(const WeightedGraph& G, double rho,
                                const Distribution& P,
                                const SolverOptions& opts = {});

struct ThetaVFResult {
  double value = 0.0;  // sum_a F(a) * theta(rho, V_a)
  std::vector<ThetaResult> components;
};

// Conditional variant: independent weighted solves per auxiliary symbol.
ThetaVFResult solve_theta_VF(const DistanceMatrix& D, double rho,
                             const Distribution& F, const StochasticMatrix& V,
                             const SolverOptions& opts = {});

// Classical orthogonality-constrained value on a similarity graph
// (confusable pairs free, zero-similarity pairs orthogonal), in nats.
ThetaResult lovasz_classical(const WeightedGraph& G,
                             const SolverOptions& opts = {});

// Closed form for the binary alphabet with unit distance:
// cos 2a = exp(-1/rho), sin 2b = (Q0 - Q1) sin 2a,
// value = -2 Q0 ln cos(a-b) - 2 Q1 ln cos(a+b).
double binary_theta_analytic(double rho, const Distribution& Q);

// Among M unit vectors whose squared inner products with a common unit
// handle are all at least c, some pair has inner product >= (Mc - 1)/(M - 1).
double spherical_bound(int M, double c);

}  // namespace codebounds
