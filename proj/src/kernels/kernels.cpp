#include "reapp/kernels.hpp"

#include "kernels_impl.hpp"

namespace reapp::kern {
namespace {

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") &&
                   __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const detail::Ops* ops_for(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return &detail::scalar_ops();
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return &detail::avx2_ops();
#else
            return nullptr;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return &detail::neon_ops();
#else
            return nullptr;
#endif
    }
    return nullptr;
}

Backend pick_default() {
    if (backend_supported(Backend::Avx2)) return Backend::Avx2;
    if (backend_supported(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

struct State {
    Backend backend;
    const detail::Ops* ops;
    State() : backend(pick_default()), ops(ops_for(backend)) {}
};

State& state() {
    static State s;
    return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

Backend detect_backend() { return pick_default(); }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "?";
}

bool set_backend(Backend b) {
    if (!backend_supported(b)) return false;
    state().backend = b;
    state().ops = ops_for(b);
    return true;
}

float dot(const float* a, const float* b, std::size_t n) {
    return state().ops->dot_f32(a, b, n);
}
double dot(const double* a, const double* b, std::size_t n) {
    return state().ops->dot_f64(a, b, n);
}
void axpy(float alpha, const float* x, float* y, std::size_t n) {
    state().ops->axpy_f32(alpha, x, y, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    state().ops->axpy_f64(alpha, x, y, n);
}
void vadd(const float* a, const float* b, float* out, std::size_t n) {
    state().ops->vadd_f32(a, b, out, n);
}
void vadd(const double* a, const double* b, double* out, std::size_t n) {
    state().ops->vadd_f64(a, b, out, n);
}
void vmul(const float* a, const float* b, float* out, std::size_t n) {
    state().ops->vmul_f32(a, b, out, n);
}
void vmul(const double* a, const double* b, double* out, std::size_t n) {
    state().ops->vmul_f64(a, b, out, n);
}
void vscale(float alpha, const float* x, float* out, std::size_t n) {
    state().ops->vscale_f32(alpha, x, out, n);
}
void vscale(double alpha, const double* x, double* out, std::size_t n) {
    state().ops->vscale_f64(alpha, x, out, n);
}

}  // namespace reapp::kern
