#pragma once

#include "imbtext/model.hpp"

namespace imbtext {

struct AdamWConfig {
    double lr = 3e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

// Adaptive-moment optimizer with decoupled weight decay. Moments are shaped
// like the parameters; `step` counts completed updates.
struct OptimizerState {
    long step = 0;
    ParamGrads m;
    ParamGrads v;
    AdamWConfig hyper;
};

OptimizerState init_optimizer(const ModelParams& params, AdamWConfig hyper);

// One update: bias-corrected moment step, then weight decay applied directly
// to the weight matrices (biases exempt). Non-finite gradients are an error.
void grad_step(ModelParams& params, const ParamGrads& grads, OptimizerState& state);

}  // namespace imbtext
