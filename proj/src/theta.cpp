/*
 * Degree-constrained theta solver.
 *
 * Both variants optimize over Gram matrices M of [f, u_1..u_K] with unit
 * diagonal, |M(x,y)| <= B(x,y) for symbol pairs, and M(0,x) > 0:
 *
 *   weighted:   minimize  -2 sum_x w_x ln M(0,x)
 *   worst-case: maximize  min_x M(0,x)        (value = -2 ln of it)
 *
 * The feasible set is convex; entries with B(x,y) = 0 are eliminated, and
 * B(x,y) >= 1 is implied by positive semidefiniteness, so only genuine box
 * constraints carry barriers. A damped Newton method follows the central
 * path of
 *
 *   t * objective - ln det M - sum ln(B - c) - sum ln(B + c) - sum ln h [...]
 *
 * and stops once the barrier gap nu/t is below the requested tolerance.
 * Iterates are strictly feasible throughout, so every reported value is a
 * certified upper bound on the optimum.
 */

#include "codebounds/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace codebounds {

namespace {

struct PairVar {
  int i, j;      // gram indices, 1 <= i < j <= K
  double bound;  // |entry| bound
  bool boxed;    // false when the PSD cone already implies the bound
};

struct CoreProblem {
  int K = 0;
  Eigen::MatrixXd B;            // (K+1)x(K+1); row/col 0 unused
  std::vector<double> weights;  // empty selects the worst-case mode
};

struct CoreState {
  std::vector<PairVar> pairs;
  int K = 0;
  bool max_mode = false;
  int np = 0;  // pair variables
  int dim = 0;

  [[nodiscard]] int hidx(int x) const { return np + x; }          // x in 0..K-1
  [[nodiscard]] int sidx() const { return np + K; }
};

Eigen::MatrixXd assemble(const CoreState& st, const Eigen::VectorXd& v) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(st.K + 1, st.K + 1);
  M.diagonal().setOnes();
  for (int e = 0; e < st.np; ++e) {
    const auto& pr = st.pairs[e];
    M(pr.i, pr.j) = v(e);
    M(pr.j, pr.i) = v(e);
  }
  for (int x = 0; x < st.K; ++x) {
    M(0, x + 1) = v(st.hidx(x));
    M(x + 1, 0) = v(st.hidx(x));
  }
  return M;
}

bool strictly_feasible(const CoreState& st, const Eigen::VectorXd& v,
                       Eigen::LLT<Eigen::MatrixXd>& llt) {
  for (int e = 0; e < st.np; ++e)
    if (st.pairs[e].boxed && std::abs(v(e)) >= st.pairs[e].bound) return false;
  double s = st.max_mode ? v(st.sidx()) : 0.0;
  for (int x = 0; x < st.K; ++x) {
    double h = v(st.hidx(x));
    if (h <= 0.0) return false;
    if (st.max_mode && h - s <= 0.0) return false;
  }
  llt.compute(assemble(st, v));
  return llt.info() == Eigen::Success;
}

double objective(const CoreState& st, const std::vector<double>& w,
                 const Eigen::VectorXd& v) {
  if (st.max_mode) return -v(st.sidx());
  double f = 0.0;
  for (int x = 0; x < st.K; ++x)
    f -= 2.0 * w[static_cast<size_t>(x)] * std::log(v(st.hidx(x)));
  return f;
}

double barrier(const CoreState& st, const Eigen::VectorXd& v,
               const Eigen::LLT<Eigen::MatrixXd>& llt) {
  double phi = 0.0;
  // -ln det M from the Cholesky factor
  for (int i = 0; i <= st.K; ++i) phi -= 2.0 * std::log(llt.matrixL()(i, i));
  for (int e = 0; e < st.np; ++e)
    if (st.pairs[e].boxed)
      phi -= std::log(st.pairs[e].bound - v(e)) +
             std::log(st.pairs[e].bound + v(e));
  double s = st.max_mode ? v(st.sidx()) : 0.0;
  for (int x = 0; x < st.K; ++x) {
    double h = v(st.hidx(x));
    phi -= std::log(h);
    if (st.max_mode) phi -= std::log(h - s);
  }
  return phi;
}

// Gradient and Hessian of t*objective + barrier at v; S = M(v)^{-1}.
void derivatives(const CoreState& st, const std::vector<double>& w, double t,
                 const Eigen::VectorXd& v, const Eigen::MatrixXd& S,
                 Eigen::VectorXd& g, Eigen::MatrixXd& H) {
  const int n = st.dim;
  g.setZero(n);
  H.setZero(n, n);

  auto entry = [&](int e, int& i, int& j) {
    if (e < st.np) {
      i = st.pairs[e].i;
      j = st.pairs[e].j;
    } else {
      i = 0;
      j = e - st.np + 1;
    }
  };

  const int nmat = st.max_mode ? st.dim - 1 : st.dim;  // vars living in M
  for (int e = 0; e < nmat; ++e) {
    int i, j;
    entry(e, i, j);
    g(e) -= 2.0 * S(i, j);
    for (int f = e; f < nmat; ++f) {
      int k, l;
      entry(f, k, l);
      double hef = 2.0 * (S(i, k) * S(j, l) + S(i, l) * S(j, k));
      H(e, f) += hef;
      if (f != e) H(f, e) += hef;
    }
  }

  for (int e = 0; e < st.np; ++e) {
    if (!st.pairs[e].boxed) continue;
    double lo = st.pairs[e].bound + v(e), hi = st.pairs[e].bound - v(e);
    g(e) += 1.0 / hi - 1.0 / lo;
    H(e, e) += 1.0 / (hi * hi) + 1.0 / (lo * lo);
  }

  double s = st.max_mode ? v(st.sidx()) : 0.0;
  for (int x = 0; x < st.K; ++x) {
    int e = st.hidx(x);
    double h = v(e);
    g(e) -= 1.0 / h;
    H(e, e) += 1.0 / (h * h);
    if (st.max_mode) {
      double q = h - s;
      g(e) -= 1.0 / q;
      g(st.sidx()) += 1.0 / q;
      H(e, e) += 1.0 / (q * q);
      H(e, st.sidx()) -= 1.0 / (q * q);
      H(st.sidx(), e) -= 1.0 / (q * q);
      H(st.sidx(), st.sidx()) += 1.0 / (q * q);
    } else {
      double wx = w[static_cast<size_t>(x)];
      g(e) -= 2.0 * t * wx / h;
      H(e, e) += 2.0 * t * wx / (h * h);
    }
  }
  if (st.max_mode) g(st.sidx()) -= t;
}

struct CoreResult {
  Eigen::VectorXd v;
  Eigen::MatrixXd M;
  double value = 0.0;
  SolverStatus status = SolverStatus::converged;
};

Eigen::VectorXd base_point(const CoreState& st) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(st.dim);
  double h0 = 0.5 / std::sqrt(static_cast<double>(st.K));
  for (int x = 0; x < st.K; ++x) v(st.hidx(x)) = h0;
  if (st.max_mode) v(st.sidx()) = 0.5 * h0;
  return v;
}

Eigen::VectorXd perturbed_point(const CoreState& st, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd base = base_point(st);
  Eigen::VectorXd pert = base;
  for (int e = 0; e < st.np; ++e)
    pert(e) = 0.2 * st.pairs[e].bound * uni(rng);
  for (int x = 0; x < st.K; ++x)
    pert(st.hidx(x)) = base(st.hidx(x)) * (1.0 + 0.4 * uni(rng));
  if (st.max_mode) pert(st.sidx()) = 0.5 * pert.segment(st.np, st.K).minCoeff();
  // back off toward the base point until strictly feasible
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (double a = 1.0; a > 1e-3; a *= 0.5) {
    Eigen::VectorXd cand = base + a * (pert - base);
    if (strictly_feasible(st, cand, llt)) return cand;
  }
  return base;
}

CoreResult run_barrier(const CoreState& st, const std::vector<double>& w,
                       Eigen::VectorXd v, const SolverOptions& opts) {
  const double nu = (st.K + 1) +
                    2.0 * static_cast<double>(std::count_if(
                              st.pairs.begin(), st.pairs.end(),
                              [](const PairVar& p) { return p.boxed; })) +
                    st.K + (st.max_mode ? st.K : 0);
  const double gap_target = std::max(opts.gap_tol, 1e-13);
  const double t_final = nu / gap_target;

  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!strictly_feasible(st, v, llt)) v = base_point(st);
  strictly_feasible(st, v, llt);

  CoreResult res;
  res.status = SolverStatus::converged;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  int iters = 0;
  double t = 1.0;

  while (true) {
    // center at t
    for (;;) {
      if (iters++ >= opts.max_iter) {
        res.status = SolverStatus::max_iterations;
        break;
      }
      Eigen::MatrixXd M = assemble(st, v);
      llt.compute(M);
      Eigen::MatrixXd S = llt.solve(Eigen::MatrixXd::Identity(st.K + 1, st.K + 1));
      derivatives(st, w, t, v, S, g, H);

      Eigen::VectorXd step;
      for (double ridge = 0.0;; ridge = std::max(1e-12, ridge * 100)) {
        Eigen::MatrixXd Hr = H;
        if (ridge > 0) Hr.diagonal().array() += ridge * (1.0 + H.diagonal().maxCoeff());
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Hr);
        step = ldlt.solve(-g);
        if (ldlt.info() == Eigen::Success && step.allFinite() &&
            -g.dot(step) >= 0)
          break;
        if (ridge > 1e-3) {  // give up on this stage
          step.setZero();
          break;
        }
      }
      double lambda2 = -g.dot(step);
      if (lambda2 <= 2e-9 || step.isZero()) break;

      double phi0 = t * objective(st, w, v) + barrier(st, v, llt);
      double eta = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 70; ++bt, eta *= 0.5) {
        Eigen::VectorXd cand = v + eta * step;
        Eigen::LLT<Eigen::MatrixXd> lltc;
        if (!strictly_feasible(st, cand, lltc)) continue;
        double phic = t * objective(st, w, cand) + barrier(st, cand, lltc);
        if (phic <= phi0 - 1e-4 * eta * lambda2) {
          v = cand;
          moved = true;
          break;
        }
      }
      if (!moved) break;  // stalled; accept current center
    }
    if (res.status == SolverStatus::max_iterations) break;
    if (t >= t_final) break;
    t = std::min(t * 20.0, t_final);
  }

  res.v = v;
  res.M = assemble(st, v);
  res.value = objective(st, w, v);
  return res;
}

CoreState make_state(const CoreProblem& prob) {
  CoreState st;
  st.K = prob.K;
  st.max_mode = prob.weights.empty();
  for (int i = 1; i <= prob.K; ++i)
    for (int j = i + 1; j <= prob.K; ++j) {
      double b = prob.B(i, j);
      if (b <= 0.0) continue;  // pinned to zero, not a variable
      st.pairs.push_back({i, j, std::min(b, 1.0), b < 1.0 - 1e-15});
    }
  st.np = static_cast<int>(st.pairs.size());
  st.dim = st.np + st.K + (st.max_mode ? 1 : 0);
  return st;
}

ThetaResult solve_core(const CoreProblem& prob, double rho,
                       const SolverOptions& opts) {
  if (opts.starts < 1 || opts.max_iter < 1)
    throw Error(Errc::invalid_input, "solver options out of range");
  CoreState st = make_state(prob);

  std::mt19937_64 rng(opts.seed);
  CoreResult best;
  bool have = false;
  for (int s = 0; s < opts.starts; ++s) {
    Eigen::VectorXd v0 = (s == 0) ? base_point(st) : perturbed_point(st, rng);
    CoreResult r = run_barrier(st, prob.weights, std::move(v0), opts);
    if (!have || r.value < best.value) {
      best = std::move(r);
      have = true;
    }
  }

  ThetaResult out;
  out.representation.gram = best.M;
  out.representation.rho = rho;
  out.status = best.status;
  out.per_symbol_cost.resize(static_cast<size_t>(st.K));
  for (int x = 0; x < st.K; ++x) {
    double h = best.M(0, x + 1);
    out.per_symbol_cost[static_cast<size_t>(x)] = -2.0 * std::log(h);
  }
  if (st.max_mode) {
    out.value = *std::max_element(out.per_symbol_cost.begin(),
                                  out.per_symbol_cost.end());
  } else {
    out.value = 0.0;
    for (int x = 0; x < st.K; ++x)
      out.value += prob.weights[static_cast<size_t>(x)] *
                   out.per_symbol_cost[static_cast<size_t>(x)];
  }

  // Certify feasibility of the returned gram matrix.
  double viol = 0.0;
  for (int i = 1; i <= st.K; ++i)
    for (int j = i + 1; j <= st.K; ++j)
      viol = std::max(viol, std::abs(best.M(i, j)) - prob.B(i, j));
  for (int x = 1; x <= st.K; ++x) viol = std::max(viol, -best.M(0, x));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(best.M,
                                                     Eigen::EigenvaluesOnly);
  viol = std::max(viol, -eig.eigenvalues()(0));
  out.feasibility_margin = std::max(viol, 0.0);
  if (out.feasibility_margin > opts.feas_tol)
    throw Error(Errc::invalid_input,
                "solver returned an infeasible representation (violation " +
                    std::to_string(out.feasibility_margin) + ")");
  if (out.value > 1e6) out.value = std::numeric_limits<double>::infinity();
  return out;
}

Eigen::MatrixXd degree_bounds_from_distance(const DistanceMatrix& D,
                                            double rho) {
  const int K = D.K();
  Eigen::MatrixXd B = Eigen::MatrixXd::Ones(K + 1, K + 1);
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y) {
      ExtReal d = D(x, y);
      double b;
      if (std::isinf(rho))
        b = d.is_finite() ? 1.0 : 0.0;
      else
        b = exp_neg((1.0 / rho) * d);
      B(x + 1, y + 1) = b;
    }
  return B;
}

Eigen::MatrixXd degree_bounds_from_graph(const WeightedGraph& G, double rho) {
  const int K = G.K();
  Eigen::MatrixXd B = Eigen::MatrixXd::Ones(K + 1, K + 1);
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y) {
      double g = G.g(x, y);
      double b;
      if (std::isinf(rho))
        b = g > 0.0 ? 1.0 : 0.0;
      else
        b = std::pow(g, 1.0 / rho);
      B(x + 1, y + 1) = b;
    }
  return B;
}

void check_rho(double rho) {
  if (std::isnan(rho) || rho <= 0.0)
    throw Error(Errc::invalid_input, "rho must be positive (or inf)");
}

}  // namespace

const char* solver_status_name(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iterations: return "max-iterations";
    case SolverStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

ThetaResult solve_theta(const DistanceMatrix& D, double rho,
                        const SolverOptions& opts) {
  check_rho(rho);
  CoreProblem prob{D.K(), degree_bounds_from_distance(D, rho), {}};
  return solve_core(prob, rho, opts);
}

ThetaResult solve_theta_P(const DistanceMatrix& D, double rho,
                          const Distribution& P, const SolverOptions& opts) {
  check_rho(rho);
  validate_distribution(P);
  if (static_cast<int>(P.size()) != D.K())
    throw Error(Errc::invalid_input, "weight vector length mismatch");
  CoreProblem prob{D.K(), degree_bounds_from_distance(D, rho), P};
  return solve_core(prob, rho, opts);
}

ThetaResult solve_theta_graph(const WeightedGraph& G, double rho,
                              const SolverOptions& opts) {
  check_rho(rho);
  CoreProblem prob{G.K(), degree_bounds_from_graph(G, rho), {}};
  return solve_core(prob, rho, opts);
}

ThetaResult solve_theta_graph_P(const WeightedGraph& G, double rho,
                                const Distribution& P,
                                const SolverOptions& opts) {
  check_rho(rho);
  validate_distribution(P);
  if (static_cast<int>(P.size()) != G.K())
    throw Error(Errc::invalid_input, "weight vector length mismatch");
  CoreProblem prob{G.K(), degree_bounds_from_graph(G, rho), P};
  return solve_core(prob, rho, opts);
}

ThetaVFResult solve_theta_VF(const DistanceMatrix& D, double rho,
                             const Distribution& F, const StochasticMatrix& V,
                             const SolverOptions& opts) {
  validate_distribution(F);
  if (V.rows != static_cast<int>(F.size()) || V.cols != D.K())
    throw Error(Errc::invalid_input, "conditional family shape mismatch");
  ThetaVFResult out;
  for (int a = 0; a < V.rows; ++a) {
    if (F[static_cast<size_t>(a)] == 0.0) continue;
    ThetaResult r = solve_theta_P(D, rho, V.row(a), opts);
    out.value += F[static_cast<size_t>(a)] * r.value;
    out.components.push_back(std::move(r));
  }
  return out;
}

ThetaResult lovasz_classical(const WeightedGraph& G, const SolverOptions& opts) {
  CoreProblem prob{G.K(), degree_bounds_from_graph(
                              G, std::numeric_limits<double>::infinity()),
                   {}};
  return solve_core(prob, std::numeric_limits<double>::infinity(), opts);
}

double binary_theta_analytic(double rho, const Distribution& Q) {
  check_rho(rho);
  validate_distribution(Q);
  if (Q.size() != 2)
    throw Error(Errc::invalid_input, "binary closed form needs |Q| = 2");
  double a = 0.5 * std::acos(std::isinf(rho) ? 1.0 : std::exp(-1.0 / rho));
  double b = 0.5 * std::asin((Q[0] - Q[1]) * std::sin(2.0 * a));
  return -2.0 * Q[0] * std::log(std::cos(a - b)) -
         2.0 * Q[1] * std::log(std::cos(a + b));
}

double spherical_bound(int M, double c) {
  if (M < 2) throw Error(Errc::invalid_input, "need at least two vectors");
  if (!(c >= 0.0 && c <= 1.0))
    throw Error(Errc::invalid_input, "handle product bound outside [0,1]");
  return (M * c - 1.0) / (M - 1.0);
}

}  // namespace codebounds
