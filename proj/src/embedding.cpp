#include "codebounds/embedding.hpp"

#include <cmath>
#include <random>

namespace codebounds {

namespace {

// Quadratic form sum_{x,y} c(x)c(y) d(x,y) straight off the raw entries.
double distance_form(const DistanceMatrix& D, const Eigen::VectorXd& c) {
  double form = 0.0;
  for (int x = 0; x < D.K(); ++x)
    for (int y = 0; y < D.K(); ++y)
      if (x != y) form += c(x) * c(y) * D(x, y).finite_value();
  return form;
}

Eigen::VectorXd zero_sum_unit(Eigen::VectorXd c) {
  double n0 = c.norm();
  c.array() -= c.mean();
  double n = c.norm();
  // a vector almost parallel to ones leaves only rounding noise behind;
  // normalizing that noise would amplify its ones-component, so drop it
  if (n <= 1e-10 * std::max(1.0, n0)) return Eigen::VectorXd::Zero(c.size());
  c /= n;
  c.array() -= c.mean();
  return c;
}

}  // namespace

const std::vector<double>& default_rho_grid() {
  static const std::vector<double> grid = {0.25, 0.5, 1.0,    2.0,  5.0,
                                           10.0, 100.0, 1e3, 1e4};
  return grid;
}

Eigen::MatrixXd center(const DistanceMatrix& D) {
  Eigen::MatrixXd M = D.dense();  // throws on infinite entries
  const int K = D.K();
  Eigen::VectorXd rowmean = M.rowwise().mean();
  double grand = M.mean();
  Eigen::MatrixXd C(K, K);
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y)
      C(x, y) = -M(x, y) + rowmean(x) + rowmean(y) - grand;
  return C;
}

NegativeTypeResult check_negative_type(const DistanceMatrix& D, double tol) {
  Eigen::MatrixXd C = center(D);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  const auto& vals = eig.eigenvalues();
  double scale = std::max(std::abs(vals(0)), std::abs(vals(vals.size() - 1)));
  NegativeTypeResult res;
  res.min_eigenvalue = vals(0);
  res.holds = vals(0) >= -tol * std::max(scale, 1e-300);
  if (!res.holds)
    res.witness = zero_sum_unit(eig.eigenvectors().col(0));
  return res;
}

DivisibilityResult check_divisible(const DistanceMatrix& D,
                                   const std::vector<double>& rho_grid,
                                   double tol) {
  const auto& grid = rho_grid.empty() ? default_rho_grid() : rho_grid;
  const int K = D.K();
  DivisibilityResult res;
  res.holds = true;
  for (double rho : grid) {
    if (!(rho > 0))
      throw Error(Errc::invalid_input, "rho grid entries must be positive");
    Eigen::MatrixXd G(K, K);
    for (int x = 0; x < K; ++x)
      for (int y = 0; y < K; ++y)
        G(x, y) = exp_neg((1.0 / rho) * D(x, y));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
    const auto& vals = eig.eigenvalues();
    double scale = std::max(std::abs(vals(0)), std::abs(vals(vals.size() - 1)));
    double rel = vals(0) / std::max(scale, 1e-300);
    if (rel < res.worst_eigenvalue) res.worst_eigenvalue = rel;
    if (vals(0) < -tol * std::max(scale, 1e-300) && res.holds) {
      res.holds = false;
      res.failing_rho = rho;
    }
  }
  return res;
}

ConcavityResult check_concavity_sampled(const DistanceMatrix& D, int trials,
                                        std::uint64_t seed, double tol) {
  Eigen::MatrixXd ignored = D.dense();  // reject infinite entries up front
  const int K = D.K();
  ConcavityResult res;
  res.holds = true;

  auto probe = [&](const Eigen::VectorXd& c) {
    double form = distance_form(D, c);
    if (form > res.worst_form) res.worst_form = form;
    if (form > tol && res.holds) {
      res.holds = false;
      res.witness = c;
    }
  };

  // Spectral candidate: most promising direction from the centered matrix,
  // evaluated on the raw distance form so it cross-checks the centering
  // identity rather than assuming it. The ones kernel of the centered matrix
  // sits at eigenvalue ~0 and would pollute the bottom eigenvector, so shift
  // it out of the way first.
  Eigen::MatrixXd C = center(D);
  double shift = C.cwiseAbs().maxCoeff() + 1.0;
  C += (shift / K) * Eigen::MatrixXd::Ones(K, K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  probe(zero_sum_unit(eig.eigenvectors().col(0)));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < trials && res.holds; ++t) {
    Eigen::VectorXd c(K);
    for (int x = 0; x < K; ++x) c(x) = gauss(rng);
    c = zero_sum_unit(c);
    if (c.norm() > 0) probe(c);
  }
  return res;
}

EmbedResult euclidean_embed(const DistanceMatrix& D, double tol) {
  NegativeTypeResult nt = check_negative_type(D);
  if (!nt.holds) {
    std::vector<double> w(nt.witness->data(),
                          nt.witness->data() + nt.witness->size());
    throw NotEmbeddableError("distance matrix is not negative type",
                             std::move(w));
  }
  Eigen::MatrixXd C = center(D);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  const auto& vals = eig.eigenvalues();
  const int K = D.K();
  double top = std::max(vals(K - 1), 0.0);

  std::vector<int> kept;
  for (int i = 0; i < K; ++i)
    if (vals(i) > kPsdTol * std::max(top, 1e-300)) kept.push_back(i);

  Eigen::MatrixXd pts(K, std::max<int>(1, static_cast<int>(kept.size())));
  pts.setZero();
  for (size_t j = 0; j < kept.size(); ++j)
    pts.col(static_cast<int>(j)) =
        eig.eigenvectors().col(kept[j]) * std::sqrt(vals(kept[j]) / 2.0);

  EmbedResult res;
  res.points = std::move(pts);
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y) {
      double got = (res.points.row(x) - res.points.row(y)).squaredNorm();
      res.reconstruction_error = std::max(
          res.reconstruction_error, std::abs(got - D(x, y).finite_value()));
    }
  if (res.reconstruction_error > tol)
    throw Error(Errc::not_embeddable,
                "embedding failed to reproduce distances (error " +
                    std::to_string(res.reconstruction_error) + ")");
  return res;
}

bool EmbeddingReport::consistent() const {
  auto all = {divisible, negative_type, concave_form, embeddable};
  std::optional<bool> ref;
  for (const auto& v : all) {
    if (!v) continue;
    if (!ref) ref = v;
    if (*ref != *v) return false;
  }
  return true;
}

EmbeddingReport classify(const DistanceMatrix& D,
                         const std::vector<double>& rho_grid, int trials,
                         std::uint64_t seed) {
  EmbeddingReport report;
  DivisibilityResult div = check_divisible(D, rho_grid);
  report.divisible = div.holds;

  if (!D.all_finite()) return report;  // the other three need finite entries

  NegativeTypeResult nt = check_negative_type(D);
  report.negative_type = nt.holds;
  if (nt.witness) report.witness = nt.witness;

  ConcavityResult cc = check_concavity_sampled(D, trials, seed);
  report.concave_form = cc.holds;
  if (!report.witness && cc.witness) report.witness = cc.witness;

  if (nt.holds) {
    try {
      EmbedResult emb = euclidean_embed(D);
      report.embeddable = true;
      report.reconstruction_error = emb.reconstruction_error;
    } catch (const Error&) {
      report.embeddable = false;
    }
  } else {
    report.embeddable = false;
  }
  return report;
}

}  // namespace codebounds
