#include "codebounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include <json.hpp>

#include "codebounds/embedding.hpp"

namespace codebounds {

namespace {

using nlohmann::json;

constexpr double kRateTol = 1e-9;

json q_json(const Distribution& Q) { return json(Q); }

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

Distribution push_forward(const Distribution& F, const StochasticMatrix& V) {
  Distribution P(static_cast<size_t>(V.cols), 0.0);
  for (int a = 0; a < V.rows; ++a)
    for (int x = 0; x < V.cols; ++x)
      P[static_cast<size_t>(x)] += F[static_cast<size_t>(a)] * V(a, x);
  return P;
}

void require_circular(const DistanceMatrix& D, const char* who) {
  if (!D.circularly_symmetric())
    throw Error(Errc::wrong_symmetry,
                std::string(who) + " needs a circularly symmetric distance");
}

void require_embeddable(const DistanceMatrix& D, const char* who) {
  if (!D.all_finite())
    throw Error(Errc::wrong_class,
                std::string(who) + " needs finite squared-Euclidean distances");
  NegativeTypeResult nt = check_negative_type(D);
  if (!nt.holds)
    throw Error(Errc::wrong_class,
                std::string(who) + " needs a squared-Euclidean distance");
}

void require_finite_rho(double rho) {
  if (std::isnan(rho) || !(rho > 0.0) || std::isinf(rho))
    throw Error(Errc::invalid_input, "rho must be positive and finite");
}

// Memoizes theta solves; the curve search hits the same (rho, weights)
// pairs many times across rate-grid queries.
class ThetaCache {
 public:
  ThetaCache(const DistanceMatrix& D, const SolverOptions& sopts)
      : D_(D), sopts_(sopts) {}

  double worst_case(double rho) { return get(rho, {}); }
  double weighted(double rho, const Distribution& P) { return get(rho, P); }

 private:
  double get(double rho, Distribution P) {
    auto key = std::make_pair(rho, P);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double v = P.empty() ? solve_theta(D_, rho, sopts_).value
                         : solve_theta_P(D_, rho, P, sopts_).value;
    memo_.emplace(std::move(key), v);
    return v;
  }

  const DistanceMatrix& D_;
  const SolverOptions& sopts_;
  std::map<std::pair<double, Distribution>, double> memo_;
};

}  // namespace

double entropy(const Distribution& P) {
  validate_distribution(P);
  double h = 0.0;
  for (double p : P) h -= xlogx(p);
  return h;
}

double binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw Error(Errc::invalid_input, "binary entropy argument outside [0,1]");
  return -xlogx(t) - xlogx(1.0 - t);
}

double mutual_information(const Distribution& F, const StochasticMatrix& V) {
  validate_distribution(F);
  if (V.rows != static_cast<int>(F.size()))
    throw Error(Errc::invalid_input, "conditional family shape mismatch");
  double mi = entropy(push_forward(F, V));
  for (int a = 0; a < V.rows; ++a)
    mi -= F[static_cast<size_t>(a)] * entropy(V.row(a));
  return std::max(mi, 0.0);
}

InfoMeasures info_measures(const Distribution& P, const StochasticMatrix* V) {
  InfoMeasures m;
  m.entropy = entropy(P);
  if (V != nullptr) {
    m.has_conditional = true;
    m.mutual_information = mutual_information(P, *V);
    for (int a = 0; a < V->rows; ++a) m.row_entropies.push_back(entropy(V->row(a)));
  }
  return m;
}

ExtReal plotkin_exponential(int M, int n, double theta, double rho) {
  if (M < 2 || n < 1) throw Error(Errc::invalid_input, "need M >= 2 and n >= 1");
  if (theta < 0.0) throw Error(Errc::invalid_input, "negative theta");
  require_finite_rho(rho);
  double num = M * std::exp(-n * theta) - 1.0;
  if (num <= 0.0) return ExtReal::infinity();
  return ExtReal(-rho * std::log(num / (M - 1.0)));
}

const char* method_name(Method m) {
  switch (m) {
    case Method::elias_binary: return "elias_binary";
    case Method::umbrella: return "umbrella";
    case Method::umbrella_P: return "umbrella_P";
    case Method::general_elias: return "general_elias";
    case Method::berlekamp: return "berlekamp";
    case Method::piret: return "piret";
    case Method::blahut: return "blahut";
    case Method::circ_sym: return "circ_sym";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::elias_binary, Method::umbrella, Method::umbrella_P,
                   Method::general_elias, Method::berlekamp, Method::piret,
                   Method::blahut, Method::circ_sym})
    if (name == method_name(m)) return m;
  throw Error(Errc::invalid_input, "unknown method '" + name + "'");
}

const std::vector<double>& default_curve_rho_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int e = -4; e <= 20; ++e) g.push_back(std::ldexp(1.0, e));
    return g;
  }();
  return grid;
}

BoundPoint umbrella_point(const DistanceMatrix& D, double rho,
                          const BoundOptions& opts) {
  require_finite_rho(rho);
  double th = solve_theta(D, rho, opts.solver).value;
  BoundPoint p;
  p.R = th;
  p.delta = rho * th;
  p.method = Method::umbrella;
  p.params = json{{"rho", rho}, {"theta", th}}.dump();
  return p;
}

BoundPoint general_elias_point(const DistanceMatrix& D, double rho,
                               const Distribution& F, const StochasticMatrix& V,
                               const BoundOptions& opts) {
  require_finite_rho(rho);
  double mi = mutual_information(F, V);
  ThetaVFResult tv = solve_theta_VF(D, rho, F, V, opts.solver);
  BoundPoint p;
  p.R = mi + tv.value;
  p.delta = rho * tv.value;
  p.method = Method::general_elias;
  p.params = json{{"rho", rho},
                  {"I", mi},
                  {"theta_VF", tv.value},
                  {"P", q_json(push_forward(F, V))}}
                 .dump();
  return p;
}

std::vector<BoundPoint> elias_binary_curve(const std::vector<double>& lambdas) {
  std::vector<BoundPoint> out;
  for (double lam : lambdas) {
    if (!(lam >= 0.0 && lam < 0.5))
      throw Error(Errc::invalid_input, "lambda outside [0, 1/2)");
    BoundPoint p;
    p.R = std::log(2.0) - binary_entropy(lam);
    p.delta = 2.0 * lam * (1.0 - lam);
    p.method = Method::elias_binary;
    p.params = json{{"lambda", lam}}.dump();
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

Distribution exp_family(const std::vector<double>& d0, double mu) {
  Distribution Q(d0.size());
  double Z = 0.0;
  for (size_t x = 0; x < d0.size(); ++x) {
    Q[x] = std::exp(-mu * d0[x]);
    Z += Q[x];
  }
  for (double& q : Q) q /= Z;
  return Q;
}

}  // namespace

BerlekampResult berlekamp_bound(const DistanceMatrix& D, double R) {
  require_circular(D, "berlekamp bound");
  if (!D.all_finite())
    throw Error(Errc::infinite_distance, "berlekamp bound needs finite distances");
  if (R < 0.0) throw Error(Errc::invalid_input, "negative rate");
  const int K = D.K();
  const double lnK = std::log(static_cast<double>(K));

  std::vector<double> d0(static_cast<size_t>(K));
  double dU = 0.0;
  for (int x = 0; x < K; ++x) {
    d0[static_cast<size_t>(x)] = D(0, x).finite_value();
    dU += d0[static_cast<size_t>(x)];
  }
  dU /= K;

  int zero_count = static_cast<int>(
      std::count_if(d0.begin(), d0.end(), [](double v) { return v == 0.0; }));
  double H_target = lnK - R;

  BerlekampResult res;
  res.d_uniform = dU;
  res.point.method = Method::berlekamp;
  res.point.R = R;

  if (H_target <= std::log(static_cast<double>(zero_count)) + 1e-12) {
    // The rate constraint is satisfiable at zero average distance.
    res.t = 0.0;
    res.mu = std::numeric_limits<double>::infinity();
    res.Qstar.assign(static_cast<size_t>(K), 0.0);
    for (int x = 0; x < K; ++x)
      if (d0[static_cast<size_t>(x)] == 0.0)
        res.Qstar[static_cast<size_t>(x)] = 1.0 / zero_count;
    res.point.delta = 0.0;
    res.point.boundary = (R >= lnK);
    res.point.params =
        json{{"t", 0.0}, {"mu", "inf"}, {"Q", q_json(res.Qstar)}}.dump();
    return res;
  }

  double lo = 0.0, hi = 1.0;
  while (entropy(exp_family(d0, hi)) > H_target) {
    hi *= 2.0;
    if (hi > 1e12)
      throw Error(Errc::invalid_input, "rate constraint unreachable");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (entropy(exp_family(d0, mid)) > H_target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
  }
  res.mu = 0.5 * (lo + hi);
  res.Qstar = exp_family(d0, res.mu);
  res.t = 0.0;
  for (int x = 0; x < K; ++x)
    res.t += res.Qstar[static_cast<size_t>(x)] * d0[static_cast<size_t>(x)];
  res.point.delta = res.t * (2.0 - res.t / dU);
  res.point.params = json{{"t", res.t},
                          {"mu", res.mu},
                          {"d_uniform", dU},
                          {"Q", q_json(res.Qstar)}}
                         .dump();
  return res;
}

double quadratic_form(const DistanceMatrix& D, const Distribution& Q) {
  validate_distribution(Q);
  if (static_cast<int>(Q.size()) != D.K())
    throw Error(Errc::invalid_input, "distribution length mismatch");
  double s = 0.0;
  for (int x = 0; x < D.K(); ++x)
    for (int y = 0; y < D.K(); ++y) {
      if (x == y) continue;
      double qq = Q[static_cast<size_t>(x)] * Q[static_cast<size_t>(y)];
      if (qq == 0.0) continue;
      if (!D(x, y).is_finite())
        throw Error(Errc::infinite_distance,
                    "quadratic form over infinite distance");
      s += qq * D(x, y).finite_value();
    }
  return s;
}

BoundPoint piret_bound(const DistanceMatrix& D, const Distribution& Q,
                       double R) {
  require_circular(D, "piret bound");
  require_embeddable(D, "piret bound");
  double threshold = std::log(static_cast<double>(D.K())) - entropy(Q);
  if (R < threshold - kRateTol)
    throw Error(Errc::condition_not_met,
                "rate below ln K - H(Q) for this distribution");
  BoundPoint p;
  p.R = R;
  p.delta = quadratic_form(D, Q);
  p.method = Method::piret;
  p.boundary = std::abs(R - threshold) <= kRateTol;
  p.params = json{{"Q", q_json(Q)}, {"rate_threshold", threshold}}.dump();
  return p;
}

BoundPoint blahut_eval(const DistanceMatrix& D, const Distribution& F,
                       const StochasticMatrix& V, double R) {
  require_embeddable(D, "blahut bound");
  if (V.cols != D.K())
    throw Error(Errc::invalid_input, "conditional family alphabet mismatch");
  double mi = mutual_information(F, V);
  if (mi > R + kRateTol)
    throw Error(Errc::condition_not_met, "I(F,V) exceeds the rate");
  double delta = 0.0;
  for (int a = 0; a < V.rows; ++a)
    delta += F[static_cast<size_t>(a)] * quadratic_form(D, V.row(a));
  BoundPoint p;
  p.R = R;
  p.delta = delta;
  p.method = Method::blahut;
  p.boundary = std::abs(R - mi) <= kRateTol;
  p.params =
      json{{"I", mi}, {"rows", V.rows}, {"P", q_json(push_forward(F, V))}}.dump();
  return p;
}

namespace {

struct Factorization {
  Distribution F;
  StochasticMatrix V;
};

double factorization_delta(const DistanceMatrix& D, const Factorization& fv) {
  double delta = 0.0;
  for (int a = 0; a < fv.V.rows; ++a)
    delta += fv.F[static_cast<size_t>(a)] * quadratic_form(D, fv.V.row(a));
  return delta;
}

// Shift-invariant family: row x is Q rotated by x. Push-forward of the
// uniform F is uniform again.
Factorization shift_family(int K, const Distribution& Q) {
  Factorization fv;
  fv.F.assign(static_cast<size_t>(K), 1.0 / K);
  fv.V.rows = K;
  fv.V.cols = K;
  fv.V.p.assign(static_cast<size_t>(K) * K, 0.0);
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y)
      fv.V(x, y) = Q[static_cast<size_t>((y - x + K) % K)];
  return fv;
}

// Mass lambda moved one step along the cycle; entropy h(lambda).
Distribution flip_distribution(int K, double lambda) {
  Distribution Q(static_cast<size_t>(K), 0.0);
  Q[0] = 1.0 - lambda;
  Q[1] = lambda;
  return Q;
}

double solve_flip_lambda(double target_entropy) {
  // h is increasing on (0, 1/2]; returns 1/2 when the target is ln 2.
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < target_entropy)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BoundPoint blahut_search(const DistanceMatrix& D, const Distribution& P,
                         double R, const BoundOptions& opts) {
  require_embeddable(D, "blahut search");
  validate_distribution(P);
  const int K = D.K();
  if (static_cast<int>(P.size()) != K)
    throw Error(Errc::invalid_input, "composition length mismatch");
  if (R < 0.0) throw Error(Errc::invalid_input, "negative rate");
  const double lnK = std::log(static_cast<double>(K));

  bool uniform = true;
  for (double p : P) uniform = uniform && std::abs(p - 1.0 / K) <= 1e-12;

  std::vector<std::pair<std::string, Factorization>> seeds;

  {
    Factorization single;
    single.F = {1.0};
    single.V.rows = 1;
    single.V.cols = K;
    single.V.p = P;
    seeds.emplace_back("single", std::move(single));
  }

  if (D.circularly_symmetric() && uniform) {
    if (R <= lnK) {
      BerlekampResult b = berlekamp_bound(D, R);
      seeds.emplace_back("exponential", shift_family(K, b.Qstar));
    }
    seeds.emplace_back("uniform_shift",
                       shift_family(K, Distribution(static_cast<size_t>(K), 1.0 / K)));
    double target = lnK - R;
    if (target > 0.0 && target <= std::log(2.0) + 1e-12) {
      double lam = solve_flip_lambda(std::min(target, std::log(2.0)));
      seeds.emplace_back("flip", shift_family(K, flip_distribution(K, lam)));
    }
  }

  double bestDelta = std::numeric_limits<double>::infinity();
  Factorization best;
  std::string bestName;
  auto consider = [&](const std::string& name, const Factorization& fv) {
    if (mutual_information(fv.F, fv.V) > R + kRateTol) return;
    double d = factorization_delta(D, fv);
    if (d < bestDelta) {
      bestDelta = d;
      best = fv;
      bestName = name;
    }
  };
  for (const auto& [name, fv] : seeds) consider(name, fv);
  if (!std::isfinite(bestDelta))
    throw Error(Errc::condition_not_met, "no admissible factorization found");

  // Local descent preserving the push-forward: move opposite multiples of a
  // zero-sum row direction between two rows. The objective is concave along
  // such segments, so only the segment endpoints matter.
  Factorization cur = best;
  if (cur.V.rows == 1) {  // give the descent two rows to trade between
    Factorization lifted;
    lifted.F = {0.5, 0.5};
    lifted.V.rows = 2;
    lifted.V.cols = K;
    lifted.V.p = cur.V.p;
    lifted.V.p.insert(lifted.V.p.end(), cur.V.p.begin(), cur.V.p.end());
    cur = std::move(lifted);
  }
  double curDelta = bestDelta;
  std::mt19937_64 rng(opts.solver.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick_row(0, cur.V.rows - 1);

  auto mi_at = [&](const Factorization& base, int a1, int a2,
                   const Eigen::VectorXd& z, double th) {
    Factorization f = base;
    for (int x = 0; x < K; ++x) {
      f.V(a1, x) += th * base.F[static_cast<size_t>(a2)] * z(x);
      f.V(a2, x) -= th * base.F[static_cast<size_t>(a1)] * z(x);
      // boundary steps can land a hair below zero in floating point
      if (f.V(a1, x) < 0.0 && f.V(a1, x) > -1e-12) f.V(a1, x) = 0.0;
      if (f.V(a2, x) < 0.0 && f.V(a2, x) > -1e-12) f.V(a2, x) = 0.0;
    }
    return std::make_pair(mutual_information(f.F, f.V), std::move(f));
  };

  for (int it = 0; it < opts.descent_iters; ++it) {
    int a1 = pick_row(rng), a2 = pick_row(rng);
    if (a1 == a2) continue;
    Eigen::VectorXd z(K);
    for (int x = 0; x < K; ++x) z(x) = gauss(rng);
    z.array() -= z.mean();
    if (z.norm() < 1e-12) continue;

    // Row nonnegativity limits on both sides: entry + theta * coeff >= 0.
    double thLo = -std::numeric_limits<double>::infinity();
    double thHi = std::numeric_limits<double>::infinity();
    for (int x = 0; x < K; ++x) {
      double c1 = cur.F[static_cast<size_t>(a2)] * z(x);
      double c2 = -cur.F[static_cast<size_t>(a1)] * z(x);
      for (auto [v, c] : {std::pair{cur.V(a1, x), c1}, std::pair{cur.V(a2, x), c2}}) {
        if (c < -1e-15) thHi = std::min(thHi, -v / c);
        if (c > 1e-15) thLo = std::max(thLo, -v / c);
      }
    }
    if (!(thHi > 0.0) || !(thLo < 0.0)) continue;

    // Shrink each side until the rate constraint holds at the endpoint.
    auto clip_side = [&](double th) {
      for (int b = 0; b < 40; ++b) {
        if (mi_at(cur, a1, a2, z, th).first <= R + kRateTol) return th;
        th *= 0.5;
      }
      return 0.0;
    };
    for (double th : {clip_side(thHi), clip_side(thLo)}) {
      if (th == 0.0) continue;
      auto [mi, f] = mi_at(cur, a1, a2, z, th);
      if (mi > R + kRateTol) continue;
      double d = factorization_delta(D, f);
      if (d < curDelta - 1e-15) {
        curDelta = d;
        cur = std::move(f);
        bestName = "descent";
      }
    }
  }

  if (curDelta < bestDelta) {
    bestDelta = curDelta;
    best = cur;
  }
  double mi = mutual_information(best.F, best.V);
  BoundPoint p;
  p.R = R;
  p.delta = bestDelta;
  p.method = Method::blahut;
  p.boundary = std::abs(R - mi) <= kRateTol;
  p.params = json{{"I", mi}, {"rows", best.V.rows}, {"seed", bestName}}.dump();
  return p;
}

BoundPoint circ_sym_point(const DistanceMatrix& D, const Distribution& Q,
                          double rho, const BoundOptions& opts) {
  require_circular(D, "circularly symmetric bound");
  require_finite_rho(rho);
  double th = solve_theta_P(D, rho, Q, opts.solver).value;
  BoundPoint p;
  p.R = std::log(static_cast<double>(D.K())) - entropy(Q) + th;
  p.delta = rho * th;
  p.method = Method::circ_sym;
  p.params = json{{"rho", rho}, {"theta", th}, {"Q", q_json(Q)}}.dump();
  return p;
}

EpsCapacityResult eps_capacity_bound(const WeightedGraph& G, double eps,
                                     double rho, const BoundOptions& opts) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw Error(Errc::invalid_input, "eps outside [0,1)");
  if (std::isnan(rho) || !(rho > 0.0))
    throw Error(Errc::invalid_input, "rho must be positive (or inf)");

  EpsCapacityResult res;
  res.theta = solve_theta_graph(G, rho, opts.solver).value;
  double e1r;
  if (std::isinf(rho))
    e1r = eps > 0.0 ? 1.0 : 0.0;
  else
    e1r = std::pow(eps, 1.0 / rho);
  double expTheta = std::exp(-res.theta);
  if (e1r < expTheta) {
    res.alpha_bound = (1.0 - e1r) / (expTheta - e1r);
  } else {
    res.alpha_bound = ExtReal::infinity();
    res.alpha_vacuous = true;
  }
  res.capacity_bound = res.theta;
  res.capacity_valid =
      eps == 0.0 || (!std::isinf(rho) && eps < std::exp(-rho * res.theta));
  return res;
}

namespace {

// Parametric candidate: admissible at any query rate >= threshold.
struct Candidate {
  double threshold = 0.0;
  double delta = 0.0;
  Method method = Method::umbrella;
  json params;
};

void golden_rho_refine(double lo, double hi, int iters,
                       const std::function<std::pair<double, double>(double)>& eval,
                       std::vector<std::pair<double, std::pair<double, double>>>& out) {
  // minimize over ln rho; record every evaluation (rho, (threshold, delta))
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo), b = std::log(hi);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  auto f = [&](double t) {
    double rho = std::exp(t);
    auto td = eval(rho);
    out.emplace_back(rho, td);
    return std::isfinite(td.second) ? td.second
                                    : std::numeric_limits<double>::infinity();
  };
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
}

}  // namespace

BoundCurve best_curve(const DistanceMatrix& D, const std::vector<double>& R_grid,
                      const std::vector<Method>& methods,
                      const BoundOptions& opts) {
  if (R_grid.empty()) return BoundCurve{};
  for (size_t i = 1; i < R_grid.size(); ++i)
    if (R_grid[i] <= R_grid[i - 1])
      throw Error(Errc::invalid_input, "rate grid must be strictly increasing");

  const int K = D.K();
  const double lnK = std::log(static_cast<double>(K));
  const auto& rho_grid =
      opts.rho_grid.empty() ? default_curve_rho_grid() : opts.rho_grid;
  ThetaCache cache(D, opts.solver);

  bool circ = D.circularly_symmetric();
  bool finite = D.all_finite();
  bool embeddable = finite && check_negative_type(D).holds;
  bool binary_unit = K == 2 && finite && D(0, 1) == ExtReal(1.0);

  auto has = [&](Method m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
  };

  // Rate-independent parametric candidates.
  std::vector<Candidate> cands;

  std::vector<Distribution> weightings;
  weightings.emplace_back(static_cast<size_t>(K), 1.0 / K);
  for (const auto& P : opts.P_seeds) weightings.push_back(P);

  std::vector<Distribution> q_seeds;
  if (circ && finite) {
    q_seeds.emplace_back(static_cast<size_t>(K), 1.0 / K);
    std::vector<double> d0(static_cast<size_t>(K));
    double dU = 0.0;
    for (int x = 0; x < K; ++x) {
      d0[static_cast<size_t>(x)] = D(0, x).finite_value();
      dU += d0[static_cast<size_t>(x)] / K;
    }
    if (dU > 0.0)
      for (double m : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
        q_seeds.push_back(exp_family(d0, m / dU));
    for (double lam : {0.05, 0.15, 0.3, 0.45})
      q_seeds.push_back(flip_distribution(K, lam));
  }

  if (has(Method::umbrella)) {
    for (double rho : rho_grid) {
      double th = cache.worst_case(rho);
      cands.push_back({th, rho * th, Method::umbrella, json{{"rho", rho}}});
    }
  }
  if (has(Method::umbrella_P)) {
    for (const auto& P : weightings)
      for (double rho : rho_grid) {
        double th = cache.weighted(rho, P);
        cands.push_back(
            {th, rho * th, Method::umbrella_P, json{{"rho", rho}, {"P", q_json(P)}}});
      }
  }
  if (has(Method::circ_sym) && circ && finite) {
    for (const auto& Q : q_seeds) {
      double hq = entropy(Q);
      for (double rho : rho_grid) {
        double th = cache.weighted(rho, Q);
        cands.push_back({lnK - hq + th, rho * th, Method::circ_sym,
                         json{{"rho", rho}, {"Q", q_json(Q)}}});
      }
    }
  }
  if (has(Method::general_elias)) {
    // Shift families on circular distances; flip family on the binary
    // alphabet; the single-row family coincides with umbrella_P.
    std::vector<std::pair<Distribution, StochasticMatrix>> families;
    if (circ && finite)
      for (const auto& Q : q_seeds) {
        Factorization fv = shift_family(K, Q);
        families.emplace_back(fv.F, fv.V);
      }
    if (binary_unit)
      for (double lam : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
        Factorization fv = shift_family(2, flip_distribution(2, lam));
        families.emplace_back(fv.F, fv.V);
      }
    for (const auto& [F, V] : families) {
      double mi = mutual_information(F, V);
      for (double rho : rho_grid) {
        double th = 0.0;
        for (int a = 0; a < V.rows; ++a)
          th += F[static_cast<size_t>(a)] * cache.weighted(rho, V.row(a));
        cands.push_back({mi + th, rho * th, Method::general_elias,
                         json{{"rho", rho}, {"I", mi}}});
      }
    }
  }

  BoundCurve curve;
  curve.points.reserve(R_grid.size());

  for (double R : R_grid) {
    BoundPoint bp;
    bp.R = R;
    bp.delta = ExtReal::infinity();
    bp.vacuous = true;

    auto offer = [&](double delta, Method m, json params, bool boundary = false) {
      if (!std::isfinite(delta)) return;
      if (bp.vacuous || ExtReal(delta) < bp.delta) {
        bp.delta = delta;
        bp.method = m;
        bp.params = params.dump();
        bp.boundary = boundary;
        bp.vacuous = false;
      }
    };

    for (const auto& c : cands)
      if (c.threshold <= R + kRateTol)
        offer(c.delta, c.method, c.params, std::abs(c.threshold - R) <= kRateTol);

    // Golden refinement on rho around the best parametric candidate.
    if (!bp.vacuous && (bp.method == Method::umbrella ||
                        bp.method == Method::umbrella_P ||
                        bp.method == Method::circ_sym)) {
      json ps = json::parse(bp.params);
      double rho0 = ps["rho"].get<double>();
      Distribution P;
      double hgap = 0.0;  // ln K - H(Q) offset of the rate threshold
      if (bp.method == Method::umbrella_P) P = ps["P"].get<Distribution>();
      if (bp.method == Method::circ_sym) {
        P = ps["Q"].get<Distribution>();
        hgap = lnK - entropy(P);
      }
      Method m = bp.method;
      std::vector<std::pair<double, std::pair<double, double>>> evals;
      golden_rho_refine(
          rho0 / 4.0, rho0 * 4.0, opts.refine_iters,
          [&](double rho) -> std::pair<double, double> {
            double th = P.empty() ? cache.worst_case(rho) : cache.weighted(rho, P);
            double thr = hgap + th;
            if (thr > R + kRateTol)
              return {thr, std::numeric_limits<double>::infinity()};
            return {thr, rho * th};
          },
          evals);
      for (const auto& [rho, td] : evals)
        if (std::isfinite(td.second)) {
          json params = json{{"rho", rho}};
          if (!P.empty())
            params[m == Method::circ_sym ? "Q" : "P"] = q_json(P);
          offer(td.second, m, params, std::abs(td.first - R) <= kRateTol);
        }
    }

    if (has(Method::elias_binary) && binary_unit && R < std::log(2.0)) {
      double lam = solve_flip_lambda(std::log(2.0) - R);
      offer(2.0 * lam * (1.0 - lam), Method::elias_binary, json{{"lambda", lam}});
    }
    if (has(Method::berlekamp) && circ && finite && R <= lnK) {
      BerlekampResult b = berlekamp_bound(D, R);
      offer(b.point.delta.finite_value(), Method::berlekamp,
            json::parse(b.point.params));
    }
    if (has(Method::piret) && circ && embeddable && R <= lnK) {
      BerlekampResult b = berlekamp_bound(D, R);
      BoundPoint pp = piret_bound(D, b.Qstar, R);
      offer(pp.delta.finite_value(), Method::piret, json::parse(pp.params),
            pp.boundary);
    }
    if (has(Method::blahut) && embeddable) {
      Distribution P(static_cast<size_t>(K), 1.0 / K);
      BoundPoint bs = blahut_search(D, P, R, opts);
      offer(bs.delta.finite_value(), Method::blahut, json::parse(bs.params),
            bs.boundary);
    }

    curve.points.push_back(std::move(bp));
  }

  // More rate never makes the merged bound worse.
  for (size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i - 1].vacuous) continue;
    if (curve.points[i].vacuous ||
        curve.points[i - 1].delta < curve.points[i].delta) {
      BoundPoint carried = curve.points[i - 1];
      carried.R = curve.points[i].R;
      carried.boundary = false;
      curve.points[i] = std::move(carried);
    }
  }
  return curve;
}

}  // namespace codebounds
