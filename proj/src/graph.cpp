#include "pgir/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_set>

#include "pgir/error.hpp"

namespace pgir {

namespace {

void check_no_isolated(Vertex n, const std::vector<Edge>& edges) {
  std::vector<bool> touched(static_cast<std::size_t>(n), false);
  for (const auto& [u, v] : edges) {
    touched[static_cast<std::size_t>(u)] = true;
    touched[static_cast<std::size_t>(v)] = true;
  }
  auto it = std::find(touched.begin(), touched.end(), false);
  if (it != touched.end()) {
    throw InvalidArgument("isolated vertex " + std::to_string(it - touched.begin()) +
                          " (degree 0 leaves D^{-1/2} undefined)");
  }
}

bool has_isolated(Vertex n, const std::vector<Edge>& edges) {
  std::vector<bool> touched(static_cast<std::size_t>(n), false);
  for (const auto& [u, v] : edges) {
    touched[static_cast<std::size_t>(u)] = true;
    touched[static_cast<std::size_t>(v)] = true;
  }
  return std::find(touched.begin(), touched.end(), false) != touched.end();
}

// Row-major index of the pair (i, j), i < j, in the strict upper triangle.
Edge decode_pair(std::uint64_t k, std::uint64_t n) {
  std::uint64_t i = 0;
  std::uint64_t row_start = 0;
  // Closed-form guess, then nudge to absorb rounding.
  const double nn = static_cast<double>(n);
  const double disc = (2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * static_cast<double>(k);
  double guess = std::floor(((2.0 * nn - 1.0) - std::sqrt(std::max(disc, 0.0))) / 2.0);
  i = static_cast<std::uint64_t>(std::max(guess, 0.0));
  auto start_of = [n](std::uint64_t r) { return r * (2 * n - r - 1) / 2; };
  while (i > 0 && start_of(i) > k) --i;
  while (i + 1 < n && start_of(i + 1) <= k) ++i;
  row_start = start_of(i);
  const std::uint64_t j = i + 1 + (k - row_start);
  return {static_cast<Vertex>(i), static_cast<Vertex>(j)};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\f\v");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Vertex parse_index(std::string_view token, std::size_t line) {
  Vertex value = -1;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0) {
    throw ParseError("expected a non-negative integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

} // namespace

Graph::Graph(Vertex n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw InvalidArgument("graph needs at least one vertex");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for n = " +
                            std::to_string(n));
    }
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  check_no_isolated(n, edges);
  edges_ = std::move(edges);
}

std::uint64_t Graph::content_hash() const noexcept {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(n_));
  for (const auto& [u, v] : edges_) {
    mix(static_cast<std::uint64_t>(u));
    mix(static_cast<std::uint64_t>(v));
  }
  return h;
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw InvalidArgument("symmetric matrix must be square and non-empty");
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < entries_.rows(); ++i) {
      if (entries_(i, j) != entries_(j, i)) {
        throw InvalidArgument("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

Graph erdos_renyi(Vertex n, std::size_t m, std::uint64_t seed, int max_attempts) {
  if (n < 2) throw InvalidArgument("erdos_renyi: need n >= 2");
  const auto pairs = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  if (m < 1 || m > pairs) {
    throw InvalidArgument("erdos_renyi: m = " + std::to_string(m) + " outside [1, " + std::to_string(pairs) + "]");
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    // Floyd's algorithm: m distinct pair indices from [0, pairs).
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint64_t j = pairs - m; j < pairs; ++j) {
      std::uniform_int_distribution<std::uint64_t> pick(0, j);
      const std::uint64_t t = pick(rng);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> sorted(chosen.begin(), chosen.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Edge> edges;
    edges.reserve(m);
    for (auto k : sorted) edges.push_back(decode_pair(k, static_cast<std::uint64_t>(n)));
    if (!has_isolated(n, edges)) return Graph(n, std::move(edges));
  }
  throw InvalidArgument("erdos_renyi: no graph without isolated vertices after " + std::to_string(max_attempts) +
                        " attempts");
}

Graph load_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::optional<Vertex> declared;
  Vertex max_index = -1;
  bool seen_content = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tokens = split_ws(line);
    if (!seen_content && tokens.size() == 2 && tokens[0] == "n") {
      declared = parse_index(tokens[1], line_no);
      if (*declared < 1) throw ParseError("vertex count must be positive", line_no);
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (tokens.size() != 2) throw ParseError("expected two vertex indices", line_no);
    const Vertex u = parse_index(tokens[0], line_no);
    const Vertex v = parse_index(tokens[1], line_no);
    if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
    if (declared && (u >= *declared || v >= *declared)) {
      throw ParseError("vertex index exceeds declared n = " + std::to_string(*declared), line_no);
    }
    max_index = std::max({max_index, u, v});
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw ParseError("edge list contains no edges", 0);
  return Graph(declared.value_or(max_index + 1), std::move(edges));
}

std::string format_edge_list(const Graph& g, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "n " << g.order() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

std::vector<std::int64_t> degrees(const Graph& g) {
  std::vector<std::int64_t> d(static_cast<std::size_t>(g.order()), 0);
  for (const auto& [u, v] : g.edges()) {
    ++d[static_cast<std::size_t>(u)];
    ++d[static_cast<std::size_t>(v)];
  }
  return d;
}

SymmetricMatrix normalized_laplacian(const Graph& g) {
  const auto d = degrees(g);
  const Eigen::Index n = g.order();
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d[static_cast<std::size_t>(i)] == 0) throw InvalidArgument("zero degree at vertex " + std::to_string(i));
    inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(d[static_cast<std::size_t>(i)]));
  }
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [u, v] : g.edges()) {
    const double w = -inv_sqrt(u) * inv_sqrt(v);
    l(u, v) = w;
    l(v, u) = w;
  }
  return SymmetricMatrix(std::move(l));
}

} // namespace pgir
