#ifndef WCF_TYPES_HPP
#define WCF_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wcf {

using Complex = std::complex<double>;

// Error kinds. The CLI maps each one onto a fixed exit code.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateProtocol : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCertificate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full-state operations (2n qubits) are capped at n = 10.
inline constexpr int kMaxStateN = 10;
/// Diagonal operators over n bits are capped at n = 14.
inline constexpr int kMaxDiagonalN = 14;

enum class Side { A, B };

inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }
Side parse_side(const std::string& s);

/// Protocol instance: n coin-determining messages with weights a_1..a_n.
/// c is the target honest probability that Bob wins.
struct ProtocolParams {
  int n = 0;
  std::vector<double> a;
  double c = 0.5;

  /// Throws InvalidArgument unless the invariants hold.
  void validate() const;

  static ProtocolParams make(std::vector<double> a, double c = 0.5);

  /// a_i for i in 1..n.
  double weight(int i) const { return a[static_cast<std::size_t>(i - 1)]; }
};

/// Basis strings b_1...b_n map to sum b_i 2^(n-i); qubit 1 is the most
/// significant bit.
namespace basis {

inline int bit(std::uint64_t index, int n, int qubit) {
  return static_cast<int>((index >> (n - qubit)) & 1u);
}

inline std::uint64_t index(const std::vector<int>& bits) {
  std::uint64_t j = 0;
  for (int b : bits) j = (j << 1) | static_cast<std::uint64_t>(b & 1);
  return j;
}

std::string to_string(std::uint64_t index, int n);

}  // namespace basis

/// Real diagonal operator over n-bit basis strings.
struct DiagonalOperator {
  int n = 0;
  Eigen::VectorXd d;

  DiagonalOperator() = default;
  DiagonalOperator(int n, Eigen::VectorXd d);

  static DiagonalOperator zero(int n);
  static DiagonalOperator identity(int n);

  Eigen::Index size() const { return d.size(); }
  double operator[](Eigen::Index j) const { return d[j]; }

  bool is_projector() const;
  bool is_nonnegative() const;
};

/// Complex amplitudes over k-qubit basis strings.
struct PureState {
  int k = 0;
  Eigen::VectorXcd amp;

  PureState() = default;
  PureState(int k, Eigen::VectorXcd amp);

  double norm_squared() const { return amp.squaredNorm(); }
};

}  // namespace wcf

#endif  // WCF_TYPES_HPP
