#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>

namespace casimir::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

std::string to_string(Backend b);

/// Raw kernel signatures. Complex arrays are interleaved (re, im) doubles,
/// which std::complex<double> guarantees.
struct KernelTable {
    /// y += alpha * x
    void (*caxpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
    /// y[i] += w[i] * x[i], w real
    void (*weighted_acc)(std::size_t n, const double* w, const cplx* x, cplx* y);
    /// y[i] += alpha * w[i] * x[i], alpha and w real
    void (*scaled_weighted_acc)(std::size_t n, double alpha, const double* w, const cplx* x,
                                cplx* y);
    /// y += alpha * x over real arrays
    void (*daxpy)(std::size_t n, double alpha, const double* x, double* y);
    /// max_i |err[i]| / (atol + rtol * max(|a[i]|, |b[i]|))
    double (*scaled_max_norm)(std::size_t n, const double* err, const double* a,
                              const double* b, double atol, double rtol);
};

bool avx2_available();

/// Table for a specific backend; throws std::runtime_error when the CPU or
/// build lacks it.
const KernelTable& kernels(Backend b);

/// Widest backend the CPU supports, overridable with CASIMIR_SIM_KERNELS=scalar|avx2.
Backend default_backend();

/// Typed front end over a kernel table.
class Kernels {
public:
    explicit Kernels(Backend b = default_backend()) : backend_(b), table_(&kernels(b)) {}

    Backend backend() const { return backend_; }

    void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) const {
        table_->caxpy(x.size(), alpha, x.data(), y.data());
    }
    void weighted_acc(std::span<const double> w, std::span<const cplx> x,
                      std::span<cplx> y) const {
        table_->weighted_acc(x.size(), w.data(), x.data(), y.data());
    }
    void scaled_weighted_acc(double alpha, std::span<const double> w, std::span<const cplx> x,
                             std::span<cplx> y) const {
        table_->scaled_weighted_acc(x.size(), alpha, w.data(), x.data(), y.data());
    }
    void daxpy(double alpha, std::span<const double> x, std::span<double> y) const {
        table_->daxpy(x.size(), alpha, x.data(), y.data());
    }
    double scaled_max_norm(std::span<const double> err, std::span<const double> a,
                           std::span<const double> b, double atol, double rtol) const {
        return table_->scaled_max_norm(err.size(), err.data(), a.data(), b.data(), atol, rtol);
    }

private:
    Backend backend_;
    const KernelTable* table_;
};

namespace detail {
const KernelTable& scalar_table();
#if defined(CASIMIR_HAVE_AVX2_TU)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace casimir::simd
