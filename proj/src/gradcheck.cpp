#include "mlsg/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace mlsg {

double relative_error(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 0.01});
  return std::abs(a - b) / denom;
}

bool near_relu_kink(const ForwardResult& fwd, double margin) {
  auto close = [&](const ChannelCache& c) {
    if (!c.valid) return false;
    if (c.s1.size() > 0 && c.s1.cwiseAbs().minCoeff() < margin) return true;
    return false;
  };
  return close(fwd.fea_cache) || close(fwd.sem_cache) || close(fwd.ori_cache);
}

GradCheckReport compare_gradients(const ModelParams& params, const GraphInputs& inputs,
                                  const ObjectiveConfig& objective, const ModelParams& analytic,
                                  double step) {
  ModelParams probe = params;
  auto loss_at = [&]() {
    return forward_full(probe, inputs, objective, true, nullptr).loss.total_smooth;
  };

  std::vector<std::string> names;
  std::vector<Matrix*> tensors;
  std::vector<const Matrix*> grads;
  for_each_param(probe, [&](const std::string& n, Matrix& m) {
    names.push_back(n);
    tensors.push_back(&m);
  });
  for_each_param(const_cast<ModelParams&>(analytic),
                 [&](const std::string&, Matrix& m) { grads.push_back(&m); });

  GradCheckReport report;
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    GradCheckBlock block;
    block.name = names[k];
    Matrix& w = *tensors[k];
    const Matrix& g = *grads[k];
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double saved = w(i, j);
        const double h = step * std::max(1.0, std::abs(saved));
        w(i, j) = saved + h;
        const double up = loss_at();
        w(i, j) = saved - h;
        const double down = loss_at();
        w(i, j) = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double err = relative_error(g(i, j), numeric);
        if (err > block.max_rel_err) {
          block.max_rel_err = err;
          block.row = static_cast<int>(i);
          block.col = static_cast<int>(j);
          block.analytic = g(i, j);
          block.numeric = numeric;
        }
      }
    report.max_rel_err = std::max(report.max_rel_err, block.max_rel_err);
    report.blocks.push_back(std::move(block));
  }
  std::sort(report.blocks.begin(), report.blocks.end(),
            [](const GradCheckBlock& a, const GradCheckBlock& b) {
              return a.max_rel_err > b.max_rel_err;
            });
  return report;
}

GradCheckReport gradient_check(const ModelParams& params, const GraphInputs& inputs,
                               const ObjectiveConfig& objective, double step) {
  ForwardResult fwd = forward_full(params, inputs, objective, true, nullptr);
  ModelParams analytic = backward_full(params, inputs, fwd, objective, 0.0);
  return compare_gradients(params, inputs, objective, analytic, step);
}

}  // namespace mlsg
