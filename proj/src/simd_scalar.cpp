// Reference kernels. The AVX2 variants are tested against these.

#include <algorithm>
#include <cmath>

#include "casimir/simd.hpp"

namespace casimir::simd {
namespace {

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
    }
}

void weighted_acc(std::size_t n, const double* w, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = cplx(y[i].real() + w[i] * x[i].real(), y[i].imag() + w[i] * x[i].imag());
    }
}

void scaled_weighted_acc(std::size_t n, double alpha, const double* w, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        const double s = alpha * w[i];
        y[i] = cplx(y[i].real() + s * x[i].real(), y[i].imag() + s * x[i].imag());
    }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double scaled_max_norm(std::size_t n, const double* err, const double* a, const double* b,
                       double atol, double rtol) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
        m = std::max(m, std::abs(err[i]) / scale);
    }
    return m;
}

constexpr KernelTable table{caxpy, weighted_acc, scaled_weighted_acc, daxpy, scaled_max_norm};

}  // namespace

namespace detail {
const KernelTable& scalar_table() { return table; }
}  // namespace detail

}  // namespace casimir::simd
