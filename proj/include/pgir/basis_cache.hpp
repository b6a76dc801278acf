#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "pgir/graph.hpp"
#include "pgir/spectral.hpp"

namespace pgir {

/// Environment variable naming the basis cache directory.
inline constexpr const char* kBasisCacheEnv = "PGIR_BASIS_CACHE";

/// Binary layout, little-endian host order:
///   8-byte magic "PGIRBAS1", u64 order, u64 graph hash,
///   order eigenvalues (f64), order*order eigenvector entries (f64, column-major).
void write_basis(std::ostream& out, const SpectralBasis& basis, std::uint64_t graph_hash);

/// Throws ParseError on a truncated or foreign file, or a hash mismatch.
SpectralBasis read_basis(std::istream& in, std::uint64_t expected_hash);

std::optional<std::filesystem::path> basis_cache_directory();

/// Eigendecomposition of the graph's normalized Laplacian, reusing
/// `<dir>/<hash>.basis` when present and writing it otherwise.
SpectralBasis cached_basis(const Graph& g, const std::optional<std::filesystem::path>& dir);

} // namespace pgir
