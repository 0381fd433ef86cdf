#include "imbtext/optimizer.hpp"

#include <cmath>

#include "imbtext/error.hpp"

namespace imbtext {

namespace {

void update_tensor(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                   std::vector<double>& v, const AdamWConfig& h, double bc1, double bc2, bool decay) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(g[i])) throw ValidationError("grad_step: non-finite gradient");
        m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
        v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g[i] * g[i];
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        double next = p[i] - h.lr * m_hat / (std::sqrt(v_hat) + h.eps);
        if (decay) next -= h.lr * h.weight_decay * p[i];
        p[i] = next;
    }
}

}  // namespace

OptimizerState init_optimizer(const ModelParams& params, AdamWConfig hyper) {
    OptimizerState state;
    state.hyper = hyper;
    state.m = zero_grads(params);
    state.v = zero_grads(params);
    return state;
}

void grad_step(ModelParams& params, const ParamGrads& grads, OptimizerState& state) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.hyper.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.hyper.beta2, static_cast<double>(state.step));
    if (params.trunk) {
        update_tensor(params.trunk->w.a, grads.trunk->w.a, state.m.trunk->w.a, state.v.trunk->w.a,
                      state.hyper, bc1, bc2, true);
        update_tensor(params.trunk->b, grads.trunk->b, state.m.trunk->b, state.v.trunk->b, state.hyper,
                      bc1, bc2, false);
    }
    update_tensor(params.head.w.a, grads.head.w.a, state.m.head.w.a, state.v.head.w.a, state.hyper, bc1,
                  bc2, true);
    update_tensor(params.head.b, grads.head.b, state.m.head.b, state.v.head.b, state.hyper, bc1, bc2,
                  false);
}

}  // namespace imbtext
