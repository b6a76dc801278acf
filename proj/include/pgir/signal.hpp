#pragma once

#include <Eigen/Dense>

namespace pgir {

/// Real-valued vector indexed by vertex. Entries are always finite.
class GraphSignal {
public:
  explicit GraphSignal(Eigen::VectorXd values);

  static GraphSignal zeros(Eigen::Index n) { return GraphSignal(Eigen::VectorXd::Zero(n)); }

  Eigen::Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Eigen::Index i) const { return values_(i); }
  double norm() const { return values_.norm(); }

private:
  Eigen::VectorXd values_;
};

} // namespace pgir
