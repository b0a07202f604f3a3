#pragma once

#include <string>
#include <vector>

#include "codebounds/distances.hpp"
#include "codebounds/theta.hpp"

namespace codebounds {

double entropy(const Distribution& P);  // nats, 0 ln 0 = 0
double binary_entropy(double t);

// I(F,V) = H(FV) - sum_a F(a) H(V_a)
double mutual_information(const Distribution& F, const StochasticMatrix& V);

struct InfoMeasures {
  double entropy = 0.0;
  std::vector<double> row_entropies;   // present when a conditional is given
  double mutual_information = 0.0;
  bool has_conditional = false;
};

InfoMeasures info_measures(const Distribution& P,
                           const StochasticMatrix* V = nullptr);

// Finite-length minimum distance bound:
// d_min <= -rho ln((M exp(-n theta) - 1)/(M - 1)), vacuous (+inf) when the
// numerator is nonpositive.
ExtReal plotkin_exponential(int M, int n, double theta, double rho);

enum class Method {
  elias_binary,
  umbrella,
  umbrella_P,
  general_elias,
  berlekamp,
  piret,
  blahut,
  circ_sym,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// One point of a rate / normalized-distance tradeoff. params holds a JSON
// object recording the parameters that produced the point.
struct BoundPoint {
  double R = 0.0;
  ExtReal delta{0.0};
  Method method = Method::umbrella;
  std::string params = "{}";
  bool boundary = false;  // sits exactly on the method's rate threshold
  bool vacuous = false;   // no method bound at this rate
};

struct BoundCurve {
  std::string distance_id;
  std::vector<BoundPoint> points;
};

struct BoundOptions {
  SolverOptions solver;
  std::vector<double> rho_grid;        // default: 2^-4 .. 2^20, log-spaced
  std::vector<Distribution> P_seeds;   // extra weightings for umbrella_P
  int refine_iters = 12;               // golden-section steps on ln rho
  int descent_iters = 200;             // local moves in blahut_search
};

const std::vector<double>& default_curve_rho_grid();

// (R, delta) = (theta(rho), rho * theta(rho)).
BoundPoint umbrella_point(const DistanceMatrix& D, double rho,
                          const BoundOptions& opts = {});

// (R, delta) = (I(F,V) + theta(rho,V|F), rho * theta(rho,V|F)).
BoundPoint general_elias_point(const DistanceMatrix& D, double rho,
                               const Distribution& F,
                               const StochasticMatrix& V,
                               const BoundOptions& opts = {});

// Binary reference curve: (ln 2 - h(lambda), 2 lambda (1 - lambda)).
std::vector<BoundPoint> elias_binary_curve(const std::vector<double>& lambdas);

struct BerlekampResult {
  BoundPoint point;
  double t = 0.0;          // minimum average distance at the rate constraint
  double mu = 0.0;         // exponential-family parameter (inf if capped)
  double d_uniform = 0.0;  // mean of d(0,.)
  Distribution Qstar;
};

// Circularly symmetric distances only. Minimizes sum Q(x) d(0,x) over
// distributions with H(Q) >= ln K - R via the exponential family, then
// reports delta = t (2 - t / d_uniform).
BerlekampResult berlekamp_bound(const DistanceMatrix& D, double R);

// sum_{x,x'} Q(x) Q(x') d(x,x')
double quadratic_form(const DistanceMatrix& D, const Distribution& Q);

// Squared-Euclidean circularly symmetric distances, R > ln K - H(Q):
// delta = quadratic form of Q.
BoundPoint piret_bound(const DistanceMatrix& D, const Distribution& Q,
                       double R);

// Squared-Euclidean distances, I(F,V) <= R:
// delta = sum_a F(a) * quadratic form of V_a.
BoundPoint blahut_eval(const DistanceMatrix& D, const Distribution& F,
                       const StochasticMatrix& V, double R);

// Heuristic search over factorizations (F,V) with FV = P and I(F,V) <= R.
// Returns the best evaluation found; makes no optimality claim.
BoundPoint blahut_search(const DistanceMatrix& D, const Distribution& P,
                         double R, const BoundOptions& opts = {});

// (R, delta) = (ln K - H(Q) + theta(rho,Q), rho * theta(rho,Q)),
// circularly symmetric distances.
BoundPoint circ_sym_point(const DistanceMatrix& D, const Distribution& Q,
                          double rho, const BoundOptions& opts = {});

struct EpsCapacityResult {
  double theta = 0.0;            // theta(G, rho)
  ExtReal alpha_bound{0.0};      // bound on the eps-stable-set size
  bool alpha_vacuous = false;    // eps^(1/rho) reached exp(-theta)
  double capacity_bound = 0.0;   // theta(G, rho), valid under the condition
  bool capacity_valid = false;   // eps < exp(-rho theta), or eps == 0
};

EpsCapacityResult eps_capacity_bound(const WeightedGraph& G, double eps,
                                     double rho,
                                     const BoundOptions& opts = {});

// Best-of merge across the requested methods on the rate grid. Inapplicable
// methods are skipped; rates no method covers yield vacuous points. The
// merged curve is nonincreasing in delta.
BoundCurve best_curve(const DistanceMatrix& D, const std::vector<double>& R_grid,
                      const std::vector<Method>& methods,
                      const BoundOptions& opts = {});

}  // namespace codebounds
