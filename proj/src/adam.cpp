#include "mlsg/adam.hpp"

#include <cmath>

namespace mlsg {

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamConfig& config) {
  if (config.lr <= 0.0) throw DomainError("adam_step: lr must be positive");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));

  std::vector<Matrix*> ps, ms, vs;
  std::vector<const Matrix*> gs;
  for_each_param(params, [&](const std::string&, Matrix& w) { ps.push_back(&w); });
  for_each_param(const_cast<ModelParams&>(grads),
                 [&](const std::string&, Matrix& w) { gs.push_back(&w); });
  for_each_param(state.m, [&](const std::string&, Matrix& w) { ms.push_back(&w); });
  for_each_param(state.v, [&](const std::string&, Matrix& w) { vs.push_back(&w); });

  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Matrix& g = *gs[k];
    if (!g.allFinite()) throw NumericError("adam_step: non-finite gradient");
    Matrix& m = *ms[k];
    Matrix& v = *vs[k];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseProduct(g);
    *ps[k] -= (config.lr * (m / bc1).array() / ((v / bc2).array().sqrt() + config.eps)).matrix();
  }
}

}  // namespace mlsg
