#pragma once

#include <vector>

#include "mlsg/types.hpp"

namespace mlsg {

/// Decomposed objective values; total == l0 + alpha*reg_a + beta*reg_b by
/// construction. The *_smooth fields carry the epsilon-smoothed l2,1 values
/// the backward pass differentiates; the plain fields report epsilon = 0.
struct LossTerms {
  double l0 = 0.0;
  double reg_a = 0.0;
  double reg_b = 0.0;
  double total = 0.0;
  double reg_a_smooth = 0.0;
  double reg_b_smooth = 0.0;
  double total_smooth = 0.0;
};

/// sum_i sqrt(|z1_i - z2_i|^2 + eps) - n sqrt(eps). Exact l2,1 distance of
/// the row differences at eps = 0.
double l21_distance(const Matrix& z1, const Matrix& z2, double epsilon = 0.0);

/// d/d(z1) of the smoothed l21_distance; the z2 gradient is its negation.
Matrix l21_distance_backward(const Matrix& z1, const Matrix& z2, double epsilon);

/// Mean over `nodes` of -ln(max(p[true class], 1e-12)); rows must be on the
/// probability simplex to 1e-6.
double cross_entropy(const Matrix& predictions, const IntVector& labels,
                     const std::vector<int>& nodes);

/// d/d(logits) of cross_entropy(softmax_rows(logits)) -- the fused shortcut.
Matrix cross_entropy_softmax_backward(const Matrix& predictions, const IntVector& labels,
                                      const std::vector<int>& nodes);

/// Fraction of nodes whose argmax prediction (ties to the lowest class id)
/// matches the label.
double evaluate_accuracy(const Matrix& predictions, const IntVector& labels,
                         const std::vector<int>& nodes);

}  // namespace mlsg
