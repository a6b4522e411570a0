#pragma once

#include <cstddef>

#include "reapp/kernels.hpp"

namespace reapp::kern::detail {

struct Ops {
    float (*dot_f32)(const float*, const float*, std::size_t);
    double (*dot_f64)(const double*, const double*, std::size_t);
    void (*axpy_f32)(float, const float*, float*, std::size_t);
    void (*axpy_f64)(double, const double*, double*, std::size_t);
    void (*vadd_f32)(const float*, const float*, float*, std::size_t);
    void (*vadd_f64)(const double*, const double*, double*, std::size_t);
    void (*vmul_f32)(const float*, const float*, float*, std::size_t);
    void (*vmul_f64)(const double*, const double*, double*, std::size_t);
    void (*vscale_f32)(float, const float*, float*, std::size_t);
    void (*vscale_f64)(double, const double*, double*, std::size_t);
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

}  // namespace reapp::kern::detail
