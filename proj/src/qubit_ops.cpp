#include "wcf/qubit_ops.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wcf/types.hpp"

namespace wcf {

namespace {

std::vector<int> complete_order(int num_qubits, std::span<const int> front) {
  std::vector<int> order(front.begin(), front.end());
  std::vector<bool> used(static_cast<std::size_t>(num_qubits), false);
  for (int q : front) {
    if (q < 0 || q >= num_qubits || used[static_cast<std::size_t>(q)])
      throw InvalidArgument("qubit targets must be distinct and in range");
    used[static_cast<std::size_t>(q)] = true;
  }
  for (int q = 0; q < num_qubits; ++q)
    if (!used[static_cast<std::size_t>(q)]) order.push_back(q);
  return order;
}

}  // namespace

Eigen::VectorXcd reorder_qubits(const Eigen::VectorXcd& psi, int num_qubits,
                                std::span<const int> order) {
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (static_cast<std::uint64_t>(psi.size()) != dim ||
      order.size() != static_cast<std::size_t>(num_qubits))
    throw InvalidArgument("reorder_qubits: size mismatch");
  // shift[p]: position of old qubit order[p] inside the old index.
  std::vector<int> shift(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) shift[p] = num_qubits - 1 - order[p];
  Eigen::VectorXcd out(psi.size());
  for (std::uint64_t y = 0; y < dim; ++y) {
    std::uint64_t x = 0;
    for (int p = 0; p < num_qubits; ++p) {
      const std::uint64_t b = (y >> (num_qubits - 1 - p)) & 1u;
      x |= b << shift[static_cast<std::size_t>(p)];
    }
    out[static_cast<Eigen::Index>(y)] = psi[static_cast<Eigen::Index>(x)];
  }
  return out;
}

Eigen::MatrixXcd split_qubits(const Eigen::VectorXcd& psi, int num_qubits,
                              std::span<const int> targets) {
  const auto order = complete_order(num_qubits, targets);
  const Eigen::VectorXcd moved = reorder_qubits(psi, num_qubits, order);
  const Eigen::Index rows = Eigen::Index{1} << targets.size();
  const Eigen::Index cols = moved.size() / rows;
  // Row-major reading of the moved vector.
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      moved.data(), rows, cols);
}

void apply_on_qubits(Eigen::VectorXcd& psi, int num_qubits, std::span<const int> targets,
                     const Eigen::MatrixXcd& U) {
  const Eigen::Index rows = Eigen::Index{1} << targets.size();
  if (U.rows() != rows || U.cols() != rows)
    throw InvalidArgument("apply_on_qubits: operator size does not match target count");
  const auto order = complete_order(num_qubits, targets);
  Eigen::VectorXcd moved = reorder_qubits(psi, num_qubits, order);
  const Eigen::Index cols = moved.size() / rows;
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<RowMat> view(moved.data(), rows, cols);
  view = (U * view).eval();
  std::vector<int> inverse(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) inverse[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
  psi = reorder_qubits(moved, num_qubits, inverse);
}

Eigen::MatrixXcd qubit_permutation_matrix(std::span<const int> perm) {
  const int m = static_cast<int>(perm.size());
  const Eigen::Index dim = Eigen::Index{1} << m;
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    Eigen::Index y = 0;
    for (int p = 0; p < m; ++p) {
      const Eigen::Index b = (x >> (m - 1 - perm[static_cast<std::size_t>(p)])) & 1;
      y |= b << (m - 1 - p);
    }
    P(y, x) = 1.0;
  }
  return P;
}

}  // namespace wcf
