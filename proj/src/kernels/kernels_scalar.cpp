#include "kernels_impl.hpp"

namespace reapp::kern::detail {
namespace {

template <typename T>
T dot_ref(const T* a, const T* b, std::size_t n) {
    T acc{0};
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

template <typename T>
void axpy_ref(T alpha, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void vadd_ref(const T* a, const T* b, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

template <typename T>
void vmul_ref(const T* a, const T* b, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

template <typename T>
void vscale_ref(T alpha, const T* x, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        dot_ref<float>,    dot_ref<double>,    axpy_ref<float>,
        axpy_ref<double>,  vadd_ref<float>,    vadd_ref<double>,
        vmul_ref<float>,   vmul_ref<double>,   vscale_ref<float>,
        vscale_ref<double>,
    };
    return ops;
}

}  // namespace reapp::kern::detail
