#include "codebounds/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace codebounds {

namespace {

// ln sum_y Q1(y)^{1-s} Q2(y)^s over the common support, in log space.
double ln_integrand(const std::vector<double>& lq1,
                    const std::vector<double>& lq2, double s) {
  double mx = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < lq1.size(); ++i)
    mx = std::max(mx, (1.0 - s) * lq1[i] + s * lq2[i]);
  double acc = 0.0;
  for (size_t i = 0; i < lq1.size(); ++i)
    acc += std::exp((1.0 - s) * lq1[i] + s * lq2[i] - mx);
  return mx + std::log(acc);
}

}  // namespace

ChernoffResult chernoff_distance(const Distribution& Q1,
                                 const Distribution& Q2) {
  validate_distribution(Q1);
  validate_distribution(Q2);
  if (Q1.size() != Q2.size())
    throw Error(Errc::invalid_input, "output alphabets differ");

  if (Q1 == Q2) {
    ChernoffResult r;
    r.value = 0.0;
    r.argmin_s = 0.5;
    r.pairwise_reversible_pair = true;
    return r;
  }

  std::vector<double> lq1, lq2;
  for (size_t y = 0; y < Q1.size(); ++y)
    if (Q1[y] > 0.0 && Q2[y] > 0.0) {
      lq1.push_back(std::log(Q1[y]));
      lq2.push_back(std::log(Q2[y]));
    }
  if (lq1.empty()) {
    ChernoffResult r;
    r.value = ExtReal::infinity();
    r.argmin_s = 0.5;
    r.pairwise_reversible_pair = true;
    return r;
  }

  auto f = [&](double s) { return ln_integrand(lq1, lq2, s); };

  // 64-point pre-scan brackets the minimum of the convex objective; ties
  // resolve toward the midpoint.
  constexpr int kGrid = 64;
  int best_i = 0;
  double best_v = f(0.0);
  for (int i = 1; i < kGrid; ++i) {
    double s = static_cast<double>(i) / (kGrid - 1);
    double v = f(s);
    double sb = static_cast<double>(best_i) / (kGrid - 1);
    if (v < best_v ||
        (v == best_v && std::abs(s - 0.5) < std::abs(sb - 0.5))) {
      best_v = v;
      best_i = i;
    }
  }
  double lo = static_cast<double>(std::max(0, best_i - 1)) / (kGrid - 1);
  double hi = static_cast<double>(std::min(kGrid - 1, best_i + 1)) / (kGrid - 1);

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
  }

  ChernoffResult r;
  r.argmin_s = 0.5 * (lo + hi);
  r.value = std::max(0.0, -f(r.argmin_s));
  r.boundary = r.argmin_s <= 1e-9 || r.argmin_s >= 1.0 - 1e-9;
  r.pairwise_reversible_pair = std::abs(r.argmin_s - 0.5) <= 1e-6;
  return r;
}

DistanceMatrix additive_chernoff_matrix(const Channel& W) {
  const int K = W.X;
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal(0.0));
  for (int x = 0; x < K; ++x)
    for (int y = x + 1; y < K; ++y) {
      ExtReal d = chernoff_distance(W.row(x), W.row(y)).value;
      e[static_cast<size_t>(x) * K + y] = d;
      e[static_cast<size_t>(y) * K + x] = d;
    }
  return DistanceMatrix(K, std::move(e));
}

bool pairwise_reversible(const Channel& W) {
  for (int x = 0; x < W.X; ++x)
    for (int y = x + 1; y < W.X; ++y)
      if (!chernoff_distance(W.row(x), W.row(y)).pairwise_reversible_pair)
        return false;
  return true;
}

Channel ternary_unilateral(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(Errc::invalid_input, "eps outside (0,1)");
  std::vector<double> W(9, 0.0);
  for (int x = 0; x < 3; ++x) {
    W[static_cast<size_t>(x) * 3 + x] = 1.0 - eps;
    W[static_cast<size_t>(x) * 3 + (x + 1) % 3] = eps;
  }
  return make_channel(3, 3, std::move(W));
}

Distribution product_row(const Channel& W, const std::vector<int>& word) {
  if (word.empty()) throw Error(Errc::invalid_input, "empty word");
  double total = std::pow(static_cast<double>(W.Y), word.size());
  if (total > (1 << 20))
    throw BudgetError("product output space too large", 1 << 20);
  for (int s : word)
    if (s < 0 || s >= W.X)
      throw Error(Errc::invalid_input, "word symbol out of range");

  Distribution out(static_cast<size_t>(total), 1.0);
  const int n = static_cast<int>(word.size());
  for (size_t idx = 0; idx < out.size(); ++idx) {
    size_t rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      int y = static_cast<int>(rest % static_cast<size_t>(W.Y));
      rest /= static_cast<size_t>(W.Y);
      out[idx] *= W.W(word[static_cast<size_t>(i)], y);
    }
  }
  return out;
}

double blahut_counterexample(double eps) {
  if (!(eps > 0.0 && eps < 0.5))
    throw Error(Errc::invalid_input, "eps outside (0,1/2)");
  Channel W = ternary_unilateral(eps);
  const std::vector<int> x = {1, 2, 0};   // (2,3,1) one-based
  const std::vector<int> xp = {0, 1, 2};  // (1,2,3) one-based

  double Z = 0.0, sum = 0.0;
  for (int y0 = 0; y0 < 3; ++y0)
    for (int y1 = 0; y1 < 3; ++y1)
      for (int y2 = 0; y2 < 3; ++y2) {
        const int y[3] = {y0, y1, y2};
        double px = 1.0, pxp = 1.0;
        for (int i = 0; i < 3; ++i) {
          px *= W.W(x[static_cast<size_t>(i)], y[i]);
          pxp *= W.W(xp[static_cast<size_t>(i)], y[i]);
        }
        double q = std::sqrt(px * pxp);
        if (q == 0.0) continue;
        Z += q;
        sum += q * std::log(px / pxp);
      }
  return sum / Z;
}

BoundCurve reliability_upper(const Channel& W,
                             const std::vector<double>& R_grid,
                             const BoundOptions& opts) {
  bool reversible = pairwise_reversible(W);
  DistanceMatrix D =
      reversible ? build_bhattacharyya(W) : additive_chernoff_matrix(W);
  std::vector<Method> methods = {Method::umbrella, Method::elias_binary,
                                 Method::berlekamp, Method::piret,
                                 Method::blahut,    Method::circ_sym};
  BoundCurve curve = best_curve(D, R_grid, methods, opts);
  curve.distance_id = reversible ? "bhattacharyya" : "additive-chernoff";
  return curve;
}

}  // namespace codebounds
