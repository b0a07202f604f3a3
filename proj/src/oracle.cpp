#include "codebounds/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace codebounds {

namespace {

std::vector<int> integral_counts(const Distribution& P, int n, const char* who) {
  validate_distribution(P);
  if (!is_integral_composition(P, n))
    throw Error(Errc::invalid_composition,
                std::string(who) + ": n*P is not integral");
  std::vector<int> c(P.size());
  for (size_t x = 0; x < P.size(); ++x)
    c[x] = static_cast<int>(std::llround(n * P[x]));
  return c;
}

std::vector<int> counts_of(const std::vector<int>& word, int K) {
  std::vector<int> c(static_cast<size_t>(K), 0);
  for (int s : word) ++c[static_cast<size_t>(s)];
  return c;
}

// All words of Z_K^n in lexicographic order, optionally restricted to one
// composition class.
std::vector<std::vector<int>> enumerate_words(int K, int n,
                                              const std::vector<int>* counts,
                                              int budget, const char* who) {
  double total = std::pow(static_cast<double>(K), n);
  if (total > static_cast<double>(budget))
    throw BudgetError(std::string(who) + ": sequence space too large",
                      static_cast<std::size_t>(budget));
  std::vector<std::vector<int>> words;
  std::vector<int> w(static_cast<size_t>(n), 0);
  for (;;) {
    if (counts == nullptr || counts_of(w, K) == *counts) words.push_back(w);
    int pos = n - 1;
    while (pos >= 0 && w[static_cast<size_t>(pos)] == K - 1)
      w[static_cast<size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++w[static_cast<size_t>(pos)];
  }
  return words;
}

class Bitset {
 public:
  explicit Bitset(int n) : n_(n), w_(static_cast<size_t>((n + 63) / 64), 0) {}

  void set(int i) { w_[static_cast<size_t>(i) >> 6] |= 1ULL << (i & 63); }
  void reset(int i) { w_[static_cast<size_t>(i) >> 6] &= ~(1ULL << (i & 63)); }
  [[nodiscard]] bool test(int i) const {
    return (w_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1ULL;
  }
  [[nodiscard]] bool any() const {
    for (std::uint64_t b : w_)
      if (b) return true;
    return false;
  }
  [[nodiscard]] int first() const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64) + std::countr_zero(w_[k]);
    return -1;
  }
  [[nodiscard]] int count() const {
    int c = 0;
    for (std::uint64_t b : w_) c += std::popcount(b);
    return c;
  }
  Bitset& operator&=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  void and_not(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
  }

 private:
  int n_;
  std::vector<std::uint64_t> w_;
};

// Branch-and-bound maximum clique with greedy-coloring bounds, candidates
// seeded in degeneracy order. target > 0 turns it into a decision search
// that stops at the first clique of that size.
class CliqueSolver {
 public:
  explicit CliqueSolver(int n) : n_(n), adj_(static_cast<size_t>(n), Bitset(n)) {}

  void add_edge(int u, int v) {
    adj_[static_cast<size_t>(u)].set(v);
    adj_[static_cast<size_t>(v)].set(u);
  }

  std::vector<int> solve(int target = 0) {
    target_ = target;
    best_.clear();
    Bitset P(n_);
    for (int v : degeneracy_order()) P.set(v);
    std::vector<int> R;
    expand(R, P);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  std::vector<int> degeneracy_order() {
    std::vector<int> deg(static_cast<size_t>(n_));
    std::vector<bool> gone(static_cast<size_t>(n_), false);
    for (int v = 0; v < n_; ++v)
      deg[static_cast<size_t>(v)] = adj_[static_cast<size_t>(v)].count();
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n_));
    for (int step = 0; step < n_; ++step) {
      int best = -1;
      for (int v = 0; v < n_; ++v)
        if (!gone[static_cast<size_t>(v)] &&
            (best < 0 ||
             deg[static_cast<size_t>(v)] < deg[static_cast<size_t>(best)]))
          best = v;
      gone[static_cast<size_t>(best)] = true;
      order.push_back(best);
      for (int v = 0; v < n_; ++v)
        if (!gone[static_cast<size_t>(v)] &&
            adj_[static_cast<size_t>(best)].test(v))
          --deg[static_cast<size_t>(v)];
    }
    return order;
  }

  bool expand(std::vector<int>& R, Bitset P) {
    if (!P.any()) {
      if (R.size() > best_.size()) {
        best_ = R;
        if (target_ > 0 && static_cast<int>(best_.size()) >= target_) return true;
      }
      return false;
    }
    std::vector<int> verts;
    std::vector<int> colors;
    Bitset uncolored = P;
    int c = 0;
    while (uncolored.any()) {
      ++c;
      Bitset avail = uncolored;
      while (avail.any()) {
        int v = avail.first();
        verts.push_back(v);
        colors.push_back(c);
        uncolored.reset(v);
        avail.reset(v);
        avail.and_not(adj_[static_cast<size_t>(v)]);
      }
    }
    std::size_t floor =
        target_ > 0 ? std::max(best_.size(), static_cast<std::size_t>(target_) - 1)
                    : best_.size();
    for (int i = static_cast<int>(verts.size()) - 1; i >= 0; --i) {
      if (R.size() + static_cast<std::size_t>(colors[static_cast<size_t>(i)]) <=
          floor)
        return false;
      int v = verts[static_cast<size_t>(i)];
      R.push_back(v);
      Bitset P2 = P;
      P2 &= adj_[static_cast<size_t>(v)];
      if (expand(R, P2)) return true;
      R.pop_back();
      P.reset(v);
    }
    return false;
  }

  int n_;
  int target_ = 0;
  std::vector<Bitset> adj_;
  std::vector<int> best_;
};

double log_multinomial(int n, const std::vector<int>& counts) {
  double v = std::lgamma(n + 1.0);
  for (int c : counts) v -= std::lgamma(c + 1.0);
  return v;
}

}  // namespace

CompatibilityGraph CompatibilityGraph::similarity_graph(
    Eigen::MatrixXd g, std::vector<std::vector<int>> words) {
  CompatibilityGraph cg(Mode::similarity, std::move(words));
  cg.g_ = std::move(g);
  return cg;
}

CompatibilityGraph CompatibilityGraph::distance_graph(
    DistanceMatrix D, std::vector<std::vector<int>> words) {
  CompatibilityGraph cg(Mode::distance, std::move(words));
  cg.D_.emplace(std::move(D));
  return cg;
}

double CompatibilityGraph::similarity(int u, int v) const {
  if (mode_ != Mode::similarity)
    throw std::logic_error("similarity query on a distance graph");
  const auto& a = words_[static_cast<size_t>(u)];
  const auto& b = words_[static_cast<size_t>(v)];
  double p = 1.0;
  for (size_t i = 0; i < a.size(); ++i) p *= g_(a[i], b[i]);
  return p;
}

ExtReal CompatibilityGraph::distance(int u, int v) const {
  if (mode_ != Mode::distance)
    throw std::logic_error("distance query on a similarity graph");
  return sequence_distance(words_[static_cast<size_t>(u)],
                           words_[static_cast<size_t>(v)], *D_);
}

CompatibilityGraph kronecker_power(const WeightedGraph& G, int n,
                                   const Distribution* P, int budget) {
  if (n < 1) throw Error(Errc::invalid_input, "power needs n >= 1");
  const int K = G.K();
  std::optional<std::vector<int>> counts;
  if (P != nullptr) {
    if (static_cast<int>(P->size()) != K)
      throw Error(Errc::invalid_composition, "composition length mismatch");
    counts = integral_counts(*P, n, "kronecker power");
  }
  auto words = enumerate_words(K, n, counts ? &*counts : nullptr, budget,
                               "kronecker power");
  return CompatibilityGraph::similarity_graph(G.g, std::move(words));
}

StableSetResult max_stable_set(const CompatibilityGraph& graph, double eps) {
  if (graph.mode() != CompatibilityGraph::Mode::similarity)
    throw Error(Errc::invalid_input, "stable sets need a similarity graph");
  if (eps < 0.0) throw Error(Errc::invalid_input, "negative eps");
  const int N = graph.size();
  CliqueSolver solver(N);
  for (int u = 0; u < N; ++u)
    for (int v = u + 1; v < N; ++v)
      if (graph.similarity(u, v) <= eps) solver.add_edge(u, v);
  std::vector<int> set = solver.solve();

  for (size_t i = 0; i < set.size(); ++i)
    for (size_t j = i + 1; j < set.size(); ++j)
      if (graph.similarity(set[i], set[j]) > eps)
        throw std::logic_error("stable-set witness failed re-validation");

  StableSetResult res;
  res.size = static_cast<int>(set.size());
  for (int v : set) res.witness.push_back(graph.words()[static_cast<size_t>(v)]);
  return res;
}

MinDistResult optimal_min_distance(int n, int M, const DistanceMatrix& D,
                                   const Distribution* P, int budget) {
  if (n < 1) throw Error(Errc::invalid_input, "need n >= 1");
  if (M < 2) throw Error(Errc::invalid_input, "need M >= 2");
  const int K = D.K();
  std::optional<std::vector<int>> counts;
  if (P != nullptr) {
    if (static_cast<int>(P->size()) != K)
      throw Error(Errc::invalid_composition, "composition length mismatch");
    counts = integral_counts(*P, n, "optimal min distance");
  }
  auto words = enumerate_words(K, n, counts ? &*counts : nullptr, budget,
                               "optimal min distance");
  const int N = static_cast<int>(words.size());
  if (M > N)
    throw Error(Errc::invalid_input,
                "M exceeds the number of available sequences (" +
                    std::to_string(N) + ")");

  auto pair_value = [&](int u, int v) {
    return sequence_distance(words[static_cast<size_t>(u)],
                             words[static_cast<size_t>(v)], D)
        .as_double();
  };

  std::set<double> achieved;
  for (int u = 0; u < N; ++u)
    for (int v = u + 1; v < N; ++v) achieved.insert(pair_value(u, v));
  std::vector<double> thresholds(achieved.begin(), achieved.end());

  auto feasible = [&](double T, std::vector<int>* witness) {
    CliqueSolver solver(N);
    for (int u = 0; u < N; ++u)
      for (int v = u + 1; v < N; ++v)
        if (pair_value(u, v) >= T) solver.add_edge(u, v);
    std::vector<int> set = solver.solve(M);
    if (static_cast<int>(set.size()) < M) return false;
    if (witness != nullptr) *witness = set;
    return true;
  };

  // The smallest achieved value admits the complete graph, so lo is feasible.
  int lo = 0, hi = static_cast<int>(thresholds.size()) - 1;
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (feasible(thresholds[static_cast<size_t>(mid)], nullptr))
      lo = mid;
    else
      hi = mid - 1;
  }
  std::vector<int> set;
  if (!feasible(thresholds[static_cast<size_t>(lo)], &set))
    throw std::logic_error("threshold search lost feasibility");

  std::vector<std::vector<int>> picked;
  for (int v : set) picked.push_back(words[static_cast<size_t>(v)]);
  std::sort(picked.begin(), picked.end());
  MinDistResult res;
  res.witness = make_code(K, std::move(picked));
  res.distance = code_min_distance(res.witness, D);
  double want = thresholds[static_cast<size_t>(lo)];
  if (res.distance.as_double() != want)
    throw std::logic_error("witness code failed distance re-validation");
  return res;
}

ShiftResult shift_to_constant_composition(const Code& code, std::uint64_t seed) {
  const int K = code.K;
  const int n = code.n;

  struct Best {
    std::size_t count = 0;
    std::vector<int> shift;
    std::vector<std::vector<int>> bucket;
  } best;

  auto try_shift = [&](const std::vector<int>& shift) {
    std::map<std::vector<int>, std::vector<std::vector<int>>> buckets;
    for (const auto& w : code.words) {
      std::vector<int> shifted(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i)
        shifted[static_cast<size_t>(i)] =
            (w[static_cast<size_t>(i)] + shift[static_cast<size_t>(i)]) % K;
      buckets[counts_of(shifted, K)].push_back(std::move(shifted));
    }
    for (auto& [comp, members] : buckets)
      if (members.size() > best.count) {
        best.count = members.size();
        best.shift = shift;
        best.bucket = std::move(members);
      }
  };

  try_shift(std::vector<int>(static_cast<size_t>(n), 0));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> sym(0, K - 1);
  for (int t = 0; t < 512; ++t) {
    std::vector<int> shift(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) shift[static_cast<size_t>(i)] = sym(rng);
    try_shift(shift);
  }
  if (std::pow(static_cast<double>(K), n) <= 4096.0) {
    std::vector<int> shift(static_cast<size_t>(n), 0);
    for (;;) {
      try_shift(shift);
      int pos = n - 1;
      while (pos >= 0 && shift[static_cast<size_t>(pos)] == K - 1)
        shift[static_cast<size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++shift[static_cast<size_t>(pos)];
    }
  }

  std::sort(best.bucket.begin(), best.bucket.end());
  ShiftResult res;
  res.shift = best.shift;
  res.subcode = make_code(K, std::move(best.bucket));

  // Pigeonhole floor: some composition class holds M / #compositions words.
  double n_comps = std::exp(std::lgamma(n + K) - std::lgamma(n + 1.0) -
                            std::lgamma(static_cast<double>(K)));
  if (static_cast<double>(res.subcode.M()) * n_comps <
      static_cast<double>(code.M()) * (1.0 - 1e-9))
    throw std::logic_error("shift search fell below the pigeonhole floor");
  return res;
}

CoverResult best_covered_subcode(const Code& code, const StochasticMatrix& Vhat,
                                 int budget) {
  if (Vhat.rows != code.K)
    throw Error(Errc::invalid_input, "conditional rows must match the alphabet");
  const int n = code.n;
  const int A = Vhat.cols;

  std::vector<int> comp = counts_of(code.words.front(), code.K);
  for (const auto& w : code.words)
    if (counts_of(w, code.K) != comp)
      throw Error(Errc::invalid_composition, "code is not constant-composition");

  // Joint counts N(x,a) = n P(x) Vhat(x,a) must be integers.
  std::vector<std::vector<int>> joint(static_cast<size_t>(code.K),
                                      std::vector<int>(static_cast<size_t>(A)));
  for (int x = 0; x < code.K; ++x)
    for (int a = 0; a < A; ++a) {
      double v = comp[static_cast<size_t>(x)] * Vhat(x, a);
      auto r = std::llround(v);
      if (std::abs(v - static_cast<double>(r)) > 1e-9)
        throw Error(Errc::invalid_composition,
                    "joint composition n*P(x)*V(x,a) is not integral");
      joint[static_cast<size_t>(x)][static_cast<size_t>(a)] =
          static_cast<int>(r);
    }
  std::vector<int> f_counts(static_cast<size_t>(A), 0);
  for (int x = 0; x < code.K; ++x)
    for (int a = 0; a < A; ++a)
      f_counts[static_cast<size_t>(a)] += joint[static_cast<size_t>(x)][static_cast<size_t>(a)];

  double class_size = std::exp(log_multinomial(n, f_counts));
  if (class_size > static_cast<double>(budget))
    throw BudgetError("cover search: center composition class too large",
                      static_cast<std::size_t>(budget));

  auto jointly_typical = [&](const std::vector<int>& w,
                             const std::vector<int>& a_seq) {
    std::vector<std::vector<int>> cnt(
        static_cast<size_t>(code.K), std::vector<int>(static_cast<size_t>(A), 0));
    for (int i = 0; i < n; ++i)
      ++cnt[static_cast<size_t>(w[static_cast<size_t>(i)])]
           [static_cast<size_t>(a_seq[static_cast<size_t>(i)])];
    return cnt == joint;
  };

  CoverResult best;
  std::size_t best_count = 0;
  std::vector<int> seq(static_cast<size_t>(n), 0);
  std::vector<int> rem = f_counts;
  auto evaluate = [&] {
    std::vector<std::vector<int>> members;
    for (const auto& w : code.words)
      if (jointly_typical(w, seq)) members.push_back(w);
    if (members.size() > best_count) {
      best_count = members.size();
      best.a = seq;
      best.subcode = Code{code.K, n, std::move(members)};
    }
  };
  // Lexicographic walk over the center composition class T_F^n.
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      evaluate();
      return;
    }
    for (int a = 0; a < A; ++a) {
      if (rem[static_cast<size_t>(a)] == 0) continue;
      --rem[static_cast<size_t>(a)];
      seq[static_cast<size_t>(pos)] = a;
      self(self, pos + 1);
      ++rem[static_cast<size_t>(a)];
    }
  };
  rec(rec, 0);

  if (best_count == 0)
    throw std::logic_error("cover search found no typical center");
  for (const auto& w : best.subcode.words)
    if (!jointly_typical(w, best.a))
      throw std::logic_error("covered subcode failed re-validation");
  return best;
}

}  // namespace codebounds
