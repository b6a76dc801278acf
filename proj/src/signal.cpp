#include "pgir/signal.hpp"

#include "pgir/error.hpp"

namespace pgir {

GraphSignal::GraphSignal(Eigen::VectorXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw InvalidArgument("graph signal has non-finite entries");
}

} // namespace pgir
