#include "codebounds/distances.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace codebounds {

namespace {
constexpr double kSymTol = 1e-9;
}

DistanceMatrix::DistanceMatrix(int K, std::vector<ExtReal> entries) : K_(K) {
  if (K < 1) throw Error(Errc::invalid_alphabet, "alphabet needs K >= 1");
  if (entries.size() != static_cast<size_t>(K) * static_cast<size_t>(K))
    throw Error(Errc::invalid_input, "distance matrix shape mismatch");
  e_ = std::move(entries);

  for (int x = 0; x < K; ++x) {
    ExtReal dxx = e_[static_cast<size_t>(x) * K + x];
    if (!dxx.is_finite() || std::abs(dxx.finite_value()) > kSymTol)
      throw Error(Errc::invalid_input, "nonzero diagonal entry");
    e_[static_cast<size_t>(x) * K + x] = 0.0;
  }
  for (int x = 0; x < K; ++x) {
    for (int y = x + 1; y < K; ++y) {
      ExtReal& a = e_[static_cast<size_t>(x) * K + y];
      ExtReal& b = e_[static_cast<size_t>(y) * K + x];
      if (a.is_finite() != b.is_finite())
        throw Error(Errc::invalid_input, "asymmetric finite/infinite pair");
      if (a.is_finite()) {
        double fa = a.finite_value(), fb = b.finite_value();
        if (fa < 0.0 || fb < 0.0)
          throw Error(Errc::invalid_input, "negative distance");
        if (std::abs(fa - fb) > kSymTol)
          throw Error(Errc::invalid_input, "asymmetry above tolerance");
        double avg = 0.5 * (fa + fb);
        a = avg;
        b = avg;
      }
    }
  }

  circ_ = true;
  for (int x = 0; x < K && circ_; ++x)
    for (int y = 0; y < K; ++y)
      if (!((*this)(x, y) == (*this)(0, (y - x + K) % K))) {
        circ_ = false;
        break;
      }
}

bool DistanceMatrix::all_finite() const {
  return std::all_of(e_.begin(), e_.end(),
                     [](ExtReal v) { return v.is_finite(); });
}

double DistanceMatrix::max_finite() const {
  double m = 0.0;
  for (ExtReal v : e_)
    if (v.is_finite()) m = std::max(m, v.finite_value());
  return m;
}

Eigen::MatrixXd DistanceMatrix::dense() const {
  if (!all_finite())
    throw Error(Errc::infinite_distance, "matrix has infinite entries");
  Eigen::MatrixXd D(K_, K_);
  for (int x = 0; x < K_; ++x)
    for (int y = 0; y < K_; ++y) D(x, y) = (*this)(x, y).finite_value();
  return D;
}

WeightedGraph make_graph(Eigen::MatrixXd g) {
  const int K = static_cast<int>(g.rows());
  if (K < 1 || g.cols() != K)
    throw Error(Errc::invalid_input, "similarity matrix shape mismatch");
  for (int x = 0; x < K; ++x) {
    if (std::abs(g(x, x) - 1.0) > kSymTol)
      throw Error(Errc::invalid_input, "similarity diagonal must be 1");
    g(x, x) = 1.0;
    for (int y = x + 1; y < K; ++y) {
      if (std::abs(g(x, y) - g(y, x)) > kSymTol)
        throw Error(Errc::invalid_input, "similarity asymmetry above tolerance");
      double avg = 0.5 * (g(x, y) + g(y, x));
      if (avg < -kSymTol || avg > 1.0 + kSymTol)
        throw Error(Errc::invalid_input, "similarity entry outside [0,1]");
      avg = std::clamp(avg, 0.0, 1.0);
      g(x, y) = avg;
      g(y, x) = avg;
    }
  }
  return WeightedGraph{std::move(g)};
}

double Code::rate() const {
  return std::log(static_cast<double>(words.size())) / n;
}

Code make_code(int K, std::vector<std::vector<int>> words) {
  if (K < 1) throw Error(Errc::invalid_alphabet, "alphabet needs K >= 1");
  if (words.empty()) throw Error(Errc::invalid_input, "empty code");
  const int n = static_cast<int>(words.front().size());
  if (n < 1) throw Error(Errc::invalid_input, "zero block length");
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) != n)
      throw Error(Errc::invalid_input, "codeword length mismatch");
    for (int s : w)
      if (s < 0 || s >= K)
        throw Error(Errc::invalid_input, "codeword symbol out of range");
  }
  return Code{K, n, std::move(words)};
}

DistanceMatrix build_hamming(int K) {
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal(1.0));
  for (int x = 0; x < K; ++x) e[static_cast<size_t>(x) * K + x] = 0.0;
  return DistanceMatrix(K, std::move(e));
}

DistanceMatrix build_lee(int K) {
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal(0.0));
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y) {
      int fwd = (y - x + K) % K;
      e[static_cast<size_t>(x) * K + y] = static_cast<double>(std::min(fwd, K - fwd));
    }
  return DistanceMatrix(K, std::move(e));
}

DistanceMatrix build_from_points(const Eigen::MatrixXd& points) {
  const int K = static_cast<int>(points.rows());
  if (K < 1) throw Error(Errc::invalid_alphabet, "need at least one point");
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal(0.0));
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y)
      e[static_cast<size_t>(x) * K + y] =
          (points.row(x) - points.row(y)).squaredNorm();
  return DistanceMatrix(K, std::move(e));
}

DistanceMatrix build_bhattacharyya(const Channel& ch) {
  const int K = ch.X;
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal(0.0));
  for (int x = 0; x < K; ++x)
    for (int y = x + 1; y < K; ++y) {
      double coeff = 0.0;
      for (int o = 0; o < ch.Y; ++o)
        coeff += std::sqrt(ch.W(x, o) * ch.W(y, o));
      ExtReal d = neg_log(std::min(coeff, 1.0));
      e[static_cast<size_t>(x) * K + y] = d;
      e[static_cast<size_t>(y) * K + x] = d;
    }
  return DistanceMatrix(K, std::move(e));
}

DistanceMatrix build_cycle(int K) {
  if (K < 3) throw Error(Errc::invalid_alphabet, "cycle needs K >= 3");
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal::infinity());
  for (int x = 0; x < K; ++x) {
    e[static_cast<size_t>(x) * K + x] = 0.0;
    e[static_cast<size_t>(x) * K + (x + 1) % K] = 1.0;
    e[static_cast<size_t>((x + 1) % K) * K + x] = 1.0;
  }
  return DistanceMatrix(K, std::move(e));
}

ExtReal sequence_distance(const std::vector<int>& x, const std::vector<int>& y,
                          const DistanceMatrix& D) {
  if (x.size() != y.size() || x.empty())
    throw Error(Errc::invalid_input, "sequence length mismatch");
  ExtReal total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    total += D(x[i], y[i]);
    if (!total.is_finite()) return ExtReal::infinity();
  }
  return total;
}

ExtReal code_min_distance(const Code& code, const DistanceMatrix& D) {
  if (code.M() < 2)
    throw Error(Errc::undefined_min_distance, "need at least two codewords");
  if (code.K > D.K())
    throw Error(Errc::invalid_input, "code alphabet exceeds distance matrix");
  ExtReal best = ExtReal::infinity();
  for (int i = 0; i < code.M(); ++i)
    for (int j = i + 1; j < code.M(); ++j)
      best = std::min(best, sequence_distance(code.words[i], code.words[j], D));
  return best;
}

WeightedGraph to_similarity(const DistanceMatrix& D) {
  Eigen::MatrixXd g(D.K(), D.K());
  for (int x = 0; x < D.K(); ++x)
    for (int y = 0; y < D.K(); ++y) g(x, y) = exp_neg(D(x, y));
  return WeightedGraph{std::move(g)};
}

DistanceMatrix to_distance(const WeightedGraph& G) {
  const int K = G.K();
  std::vector<ExtReal> e(static_cast<size_t>(K) * K, ExtReal(0.0));
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y)
      e[static_cast<size_t>(x) * K + y] = (x == y) ? ExtReal(0.0) : neg_log(G.g(x, y));
  return DistanceMatrix(K, std::move(e));
}

WeightedGraph kronecker(const WeightedGraph& a, const WeightedGraph& b) {
  const int Ka = a.K(), Kb = b.K();
  Eigen::MatrixXd g(Ka * Kb, Ka * Kb);
  for (int i = 0; i < Ka; ++i)
    for (int j = 0; j < Kb; ++j)
      for (int k = 0; k < Ka; ++k)
        for (int l = 0; l < Kb; ++l)
          g(i * Kb + j, k * Kb + l) = a.g(i, k) * b.g(j, l);
  return WeightedGraph{std::move(g)};
}

}  // namespace codebounds
