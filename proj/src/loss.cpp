#include "mlsg/loss.hpp"

#include <cmath>

namespace mlsg {

namespace {
constexpr double kProbFloor = 1e-12;
}

double l21_distance(const Matrix& z1, const Matrix& z2, double epsilon) {
  if (z1.rows() != z2.rows() || z1.cols() != z2.cols())
    throw DimensionError("l21_distance: shape mismatch");
  if (epsilon < 0.0) throw DomainError("l21_distance: negative epsilon");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z1.rows(); ++i)
    sum += std::sqrt((z1.row(i) - z2.row(i)).squaredNorm() + epsilon);
  return sum - static_cast<double>(z1.rows()) * std::sqrt(epsilon);
}

Matrix l21_distance_backward(const Matrix& z1, const Matrix& z2, double epsilon) {
  if (z1.rows() != z2.rows() || z1.cols() != z2.cols())
    throw DimensionError("l21_distance_backward: shape mismatch");
  Matrix g(z1.rows(), z1.cols());
  for (Eigen::Index i = 0; i < z1.rows(); ++i) {
    Eigen::RowVectorXd diff = z1.row(i) - z2.row(i);
    g.row(i) = diff / std::sqrt(diff.squaredNorm() + epsilon);
  }
  return g;
}

double cross_entropy(const Matrix& predictions, const IntVector& labels,
                     const std::vector<int>& nodes) {
  if (nodes.empty()) throw DataError("cross_entropy: empty node set");
  double sum = 0.0;
  for (int i : nodes) {
    if (i < 0 || i >= predictions.rows()) throw DataError("cross_entropy: node id out of range");
    const double row_sum = predictions.row(i).sum();
    if (std::abs(row_sum - 1.0) > 1e-6)
      throw IntegrityError("cross_entropy: prediction row " + std::to_string(i) +
                           " does not sum to 1");
    const int y = labels[i];
    if (y < 0 || y >= predictions.cols())
      throw DataError("cross_entropy: label out of range at node " + std::to_string(i));
    sum -= std::log(std::max(predictions(i, y), kProbFloor));
  }
  return sum / static_cast<double>(nodes.size());
}

Matrix cross_entropy_softmax_backward(const Matrix& predictions, const IntVector& labels,
                                      const std::vector<int>& nodes) {
  if (nodes.empty()) throw DataError("cross_entropy_softmax_backward: empty node set");
  Matrix d = Matrix::Zero(predictions.rows(), predictions.cols());
  const double scale = 1.0 / static_cast<double>(nodes.size());
  for (int i : nodes) {
    const int y = labels[i];
    if (predictions(i, y) < kProbFloor) continue;  // clipped term, locally flat
    d.row(i) = predictions.row(i) * scale;
    d(i, y) -= scale;
  }
  return d;
}

double evaluate_accuracy(const Matrix& predictions, const IntVector& labels,
                         const std::vector<int>& nodes) {
  if (nodes.empty()) throw DataError("evaluate_accuracy: empty node set");
  int correct = 0;
  for (int i : nodes) {
    Eigen::Index best = 0;
    // Ties resolve to the lowest class id.
    for (Eigen::Index c = 1; c < predictions.cols(); ++c)
      if (predictions(i, c) > predictions(i, best)) best = c;
    if (static_cast<int>(best) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

}  // namespace mlsg
