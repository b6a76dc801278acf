#include "pgir/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pgir/error.hpp"
#include "pgir/spectral.hpp"

namespace pgir {

namespace {

constexpr double kNegativeEigenvalueSlack = 1e-10;

double sqrt_smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("max_cutoff: eigensolver did not converge");
  const double smallest = solver.eigenvalues()(0);
  if (smallest < -kNegativeEigenvalueSlack) {
    throw NumericalError("max_cutoff: restricted L^2 has eigenvalue " + std::to_string(smallest));
  }
  return std::sqrt(std::max(smallest, 0.0));
}

} // namespace

SamplingSet::SamplingSet(std::vector<bool> mask) : mask_(std::move(mask)) {
  if (mask_.empty()) throw InvalidArgument("sampling mask must cover at least one vertex");
  for (std::size_t v = 0; v < mask_.size(); ++v) {
    (mask_[v] ? sampled_ : unsampled_).push_back(static_cast<Eigen::Index>(v));
  }
}

SamplingSet SamplingSet::from_indices(Eigen::Index n, const std::vector<Vertex>& sampled) {
  if (n < 1) throw InvalidArgument("sampling mask must cover at least one vertex");
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  for (auto v : sampled) {
    if (v < 0 || v >= n) throw InvalidArgument("sampled vertex " + std::to_string(v) + " out of range");
    mask[static_cast<std::size_t>(v)] = true;
  }
  return SamplingSet(std::move(mask));
}

Eigen::VectorXd SamplingSet::indicator() const {
  Eigen::VectorXd d(size());
  for (Eigen::Index v = 0; v < size(); ++v) d(v) = mask_[static_cast<std::size_t>(v)] ? 1.0 : 0.0;
  return d;
}

Eigen::Index sample_count(Eigen::Index n, double fraction) {
  return static_cast<Eigen::Index>(std::floor(fraction * static_cast<double>(n) + 0.5));
}

SamplingSet uniform_sampling_set(Eigen::Index n, double fraction, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("uniform_sampling_set: n must be positive");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("uniform_sampling_set: fraction must lie in (0, 1]");
  const auto count = sample_count(n, fraction);
  if (count < 1) {
    throw InvalidArgument("uniform_sampling_set: fraction " + std::to_string(fraction) + " of " + std::to_string(n) +
                          " vertices rounds to zero samples");
  }
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Vertex{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `count` slots are a uniform draw.
  for (Eigen::Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  order.resize(static_cast<std::size_t>(count));
  return SamplingSet::from_indices(n, order);
}

double density(const SamplingSet& s) { return static_cast<double>(s.count()) / static_cast<double>(s.size()); }

double max_cutoff(const SymmetricMatrix& laplacian, const SamplingSet& s) {
  if (laplacian.order() != s.size()) throw InvalidArgument("max_cutoff: mask size does not match the Laplacian");
  if (s.count() == s.size()) return 2.0;
  if (s.count() == 0) return 0.0;
  const Eigen::MatrixXd squared = laplacian.dense() * laplacian.dense();
  const auto& idx = s.unsampled();
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) sub(i, j) = squared(idx[i], idx[j]);
  }
  return sqrt_smallest_eigenvalue(sub);
}

double max_cutoff(const SpectralBasis& basis, const SamplingSet& s) {
  if (basis.order() != s.size()) throw InvalidArgument("max_cutoff: mask size does not match the basis");
  if (s.count() == s.size()) return 2.0;
  if (s.count() == 0) return 0.0;
  const auto& idx = s.unsampled();
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd rows(k, basis.order());
  for (Eigen::Index r = 0; r < k; ++r) rows.row(r) = basis.eigenvectors().row(idx[static_cast<std::size_t>(r)]);
  const Eigen::MatrixXd scaled = rows * basis.eigenvalues().asDiagonal();
  const Eigen::MatrixXd sub = scaled * scaled.transpose();
  return sqrt_smallest_eigenvalue(sub);
}

} // namespace pgir
