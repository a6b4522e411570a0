#pragma once

#include <cstddef>

// Dense vector kernels used by the tensor/tape layer. Scalar reference
// implementations always exist; AVX2 (x86-64) and NEON (aarch64) variants
// are selected at runtime when the CPU supports them.
namespace reapp::kern {

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
// Best backend this CPU supports (the startup default).
Backend detect_backend();
const char* backend_name(Backend b);

// Returns false if the requested backend is not available on this CPU.
bool set_backend(Backend b);

float dot(const float* a, const float* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

// y += alpha * x
void axpy(float alpha, const float* x, float* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);

// out = a + b
void vadd(const float* a, const float* b, float* out, std::size_t n);
void vadd(const double* a, const double* b, double* out, std::size_t n);

// out = a * b (elementwise)
void vmul(const float* a, const float* b, float* out, std::size_t n);
void vmul(const double* a, const double* b, double* out, std::size_t n);

// out = alpha * x
void vscale(float alpha, const float* x, float* out, std::size_t n);
void vscale(double alpha, const double* x, double* out, std::size_t n);

}  // namespace reapp::kern
