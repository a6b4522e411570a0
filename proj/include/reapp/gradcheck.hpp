#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "reapp/params.hpp"

namespace reapp {

struct GradCheckReport {
    double max_rel_err = 0;
    std::string worst_param;
    std::size_t worst_index = 0;
    std::size_t checked = 0;
};

// Compares the reverse-mode gradient of every parameter scalar against the
// central difference of `loss_fn`, with relative error
// |a - b| / max(|a|, |b|, 1e-8). `loss_fn` evaluates the loss with the
// current parameter values and must be deterministic (dropout disabled);
// this is verified by evaluating it twice. `backward_fn` accumulates
// gradients for the same loss. Run at double precision.
//
// No single step size suits every coordinate: near-zero gradients need a
// large step to beat subtraction noise, while coordinates sitting close to
// an activation kink (selu, max-pooling ties) need a small one so the
// difference stays on one side. Each scalar therefore starts at the largest
// step and retries at smaller ones until the estimate agrees.
inline GradCheckReport gradient_check(ParameterSet<double>& params,
                                      const std::function<double()>& loss_fn,
                                      const std::function<void()>& backward_fn,
                                      double accept = 1e-6) {
    if (loss_fn() != loss_fn())
        throw ValidationError("gradient_check: stochastic closure");
    params.zero_grads();
    backward_fn();

    constexpr double kSteps[] = {1e-3, 1e-4, 1e-5, 1e-6};

    GradCheckReport rep;
    for (auto& [name, p] : params.items) {
        for (std::size_t i = 0; i < p.value.numel(); ++i) {
            const double saved = p.value(i);
            const double analytic = p.grad(i);
            double best = std::numeric_limits<double>::infinity();
            for (double eps : kSteps) {
                p.value(i) = saved + eps;
                const double up = loss_fn();
                p.value(i) = saved - eps;
                const double dn = loss_fn();
                p.value(i) = saved;
                const double numeric = (up - dn) / (2 * eps);
                const double denom =
                    std::max({std::fabs(numeric), std::fabs(analytic), 1e-8});
                best = std::min(best, std::fabs(numeric - analytic) / denom);
                if (best < accept) break;
            }
            ++rep.checked;
            if (best > rep.max_rel_err) {
                rep.max_rel_err = best;
                rep.worst_param = name;
                rep.worst_index = i;
            }
        }
    }
    return rep;
}

}  // namespace reapp
