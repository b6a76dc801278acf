#pragma once

#include <cstdint>
#include <vector>

#include "pgir/graph.hpp"

namespace pgir {

class SpectralBasis;

/// Vertex mask selecting the observed vertices (the diagonal of S).
class SamplingSet {
public:
  explicit SamplingSet(std::vector<bool> mask);

  /// Mask of size `n` with exactly the listed vertices set. Duplicates merge.
  static SamplingSet from_indices(Eigen::Index n, const std::vector<Vertex>& sampled);

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(mask_.size()); }
  Eigen::Index count() const noexcept { return static_cast<Eigen::Index>(sampled_.size()); }
  bool contains(Eigen::Index v) const { return mask_.at(static_cast<std::size_t>(v)); }
  const std::vector<bool>& mask() const noexcept { return mask_; }

  /// Ascending sampled / unsampled vertex indices.
  const std::vector<Eigen::Index>& sampled() const noexcept { return sampled_; }
  const std::vector<Eigen::Index>& unsampled() const noexcept { return unsampled_; }

  /// Diagonal of S as 0/1 doubles.
  Eigen::VectorXd indicator() const;

  friend bool operator==(const SamplingSet& a, const SamplingSet& b) { return a.mask_ == b.mask_; }

private:
  std::vector<bool> mask_;
  std::vector<Eigen::Index> sampled_;
  std::vector<Eigen::Index> unsampled_;
};

/// Number of samples drawn for a fraction: round-half-up of fraction * n.
Eigen::Index sample_count(Eigen::Index n, double fraction);

/// Exactly sample_count(n, fraction) vertices, uniformly without replacement.
SamplingSet uniform_sampling_set(Eigen::Index n, double fraction, std::uint64_t seed);

double density(const SamplingSet& s);

/// Largest uniquely recoverable cutoff: sqrt of the smallest eigenvalue of
/// the principal submatrix of L^2 on the unsampled vertices. Returns 2 when
/// every vertex is sampled and 0 when none is.
double max_cutoff(const SymmetricMatrix& laplacian, const SamplingSet& s);

/// Same quantity with L^2 restricted through the eigenbasis,
/// Phi_{S^c} diag(lambda^2) Phi_{S^c}^T, avoiding the n x n product.
double max_cutoff(const SpectralBasis& basis, const SamplingSet& s);

} // namespace pgir
