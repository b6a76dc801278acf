#include "pgir/basis_cache.hpp"

#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pgir/error.hpp"
#include "pgir/io.hpp"

namespace pgir {

namespace {

constexpr std::array<char, 8> kMagic = {'P', 'G', 'I', 'R', 'B', 'A', 'S', '1'};

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw ParseError("basis cache: truncated file", 0);
  return value;
}

std::string hex(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

} // namespace

void write_basis(std::ostream& out, const SpectralBasis& basis, std::uint64_t graph_hash) {
  out.write(kMagic.data(), kMagic.size());
  const auto n = static_cast<std::uint64_t>(basis.order());
  put(out, n);
  put(out, graph_hash);
  out.write(reinterpret_cast<const char*>(basis.eigenvalues().data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  // Eigen's default storage is column-major, matching the file layout.
  out.write(reinterpret_cast<const char*>(basis.eigenvectors().data()),
            static_cast<std::streamsize>(n * n * sizeof(double)));
}

SpectralBasis read_basis(std::istream& in, std::uint64_t expected_hash) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ParseError("basis cache: bad magic", 0);
  const auto n = get<std::uint64_t>(in);
  const auto hash = get<std::uint64_t>(in);
  if (hash != expected_hash) throw ParseError("basis cache: graph hash mismatch", 0);
  if (n == 0 || n > (1u << 20)) throw ParseError("basis cache: implausible order", 0);
  const auto order = static_cast<Eigen::Index>(n);
  Eigen::VectorXd values(order);
  Eigen::MatrixXd vectors(order, order);
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double))) ||
      !in.read(reinterpret_cast<char*>(vectors.data()), static_cast<std::streamsize>(n * n * sizeof(double)))) {
    throw ParseError("basis cache: truncated file", 0);
  }
  return SpectralBasis(std::move(values), std::move(vectors));
}

std::optional<std::filesystem::path> basis_cache_directory() {
  const char* dir = std::getenv(kBasisCacheEnv);
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

SpectralBasis cached_basis(const Graph& g, const std::optional<std::filesystem::path>& dir) {
  const auto hash = g.content_hash();
  if (!dir) return eigendecompose(normalized_laplacian(g));
  const auto file = *dir / (hex(hash) + ".basis");
  if (std::ifstream in(file, std::ios::binary); in) {
    try {
      auto basis = read_basis(in, hash);
      if (basis.order() == g.order()) return basis;
    } catch (const ParseError&) {
      // Stale or damaged entry; recompute and overwrite below.
    }
  }
  auto basis = eigendecompose(normalized_laplacian(g));
  std::filesystem::create_directories(*dir);
  std::ostringstream buf(std::ios::binary);
  write_basis(buf, basis, hash);
  io::write_file_atomic(file, buf.str());
  return basis;
}

} // namespace pgir
