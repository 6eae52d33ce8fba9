#include "wcf/types.hpp"

#include <cmath>
#include <sstream>

namespace wcf {

Side parse_side(const std::string& s) {
  if (s == "A" || s == "a") return Side::A;
  if (s == "B" || s == "b") return Side::B;
  throw InvalidArgument("side must be A or B, got '" + s + "'");
}

void ProtocolParams::validate() const {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (a.size() != static_cast<std::size_t>(n)) {
    std::ostringstream os;
    os << "expected " << n << " weights, got " << a.size();
    throw InvalidArgument(os.str());
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= 0.0 && a[i] <= 1.0)) {
      std::ostringstream os;
      os << "weight a_" << i + 1 << " = " << a[i] << " is outside [0,1]";
      throw InvalidArgument(os.str());
    }
  }
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("c must lie in (0,1)");
}

ProtocolParams ProtocolParams::make(std::vector<double> a, double c) {
  ProtocolParams p{static_cast<int>(a.size()), std::move(a), c};
  p.validate();
  return p;
}

std::string basis::to_string(std::uint64_t index, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 1; q <= n; ++q)
    if (bit(index, n, q)) s[static_cast<std::size_t>(q - 1)] = '1';
  return s;
}

DiagonalOperator::DiagonalOperator(int n_, Eigen::VectorXd d_) : n(n_), d(std::move(d_)) {
  if (n < 0 || d.size() != (Eigen::Index{1} << n))
    throw InvalidArgument("diagonal operator size does not match 2^n");
}

DiagonalOperator DiagonalOperator::zero(int n) {
  return {n, Eigen::VectorXd::Zero(Eigen::Index{1} << n)};
}

DiagonalOperator DiagonalOperator::identity(int n) {
  return {n, Eigen::VectorXd::Ones(Eigen::Index{1} << n)};
}

bool DiagonalOperator::is_projector() const {
  return ((d.array() == 0.0) || (d.array() == 1.0)).all();
}

bool DiagonalOperator::is_nonnegative() const { return (d.array() >= 0.0).all(); }

PureState::PureState(int k_, Eigen::VectorXcd amp_) : k(k_), amp(std::move(amp_)) {
  if (k < 0 || amp.size() != (Eigen::Index{1} << k))
    throw InvalidArgument("state size does not match 2^k");
}

}  // namespace wcf
