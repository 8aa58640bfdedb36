// AVX2 + FMA kernels. Compiled with -mavx2 -mfma; only reached through the
// dispatcher after a CPUID check. One __m256d holds two complex doubles.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "casimir/simd.hpp"

namespace casimir::simd {
namespace {

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
        // (xi, xr) per complex lane
        const __m256d xswap = _mm256_permute_pd(xv, 0b0101);
        // ai * (xi, xr) -> subtract in even lanes, add in odd lanes
        const __m256d t = _mm256_mul_pd(ai, xswap);
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
        _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = cplx(y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
                    y[i].imag() + (alpha.real() * xi + alpha.imag() * xr));
    }
}

// Broadcasts w[i], w[i+1] to (w0, w0, w1, w1).
inline __m256d load_pair_weights(const double* w) {
    const __m128d wv = _mm_loadu_pd(w);
    const __m256d wide = _mm256_castpd128_pd256(wv);
    return _mm256_permute4x64_pd(wide, 0b01010000);
}

void weighted_acc(std::size_t n, const double* w, const cplx* x, cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d wv = load_pair_weights(w + i);
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
        _mm256_storeu_pd(ys + 2 * i, _mm256_fmadd_pd(wv, xv, yv));
    }
    for (; i < n; ++i) {
        y[i] = cplx(y[i].real() + w[i] * x[i].real(), y[i].imag() + w[i] * x[i].imag());
    }
}

void scaled_weighted_acc(std::size_t n, double alpha, const double* w, const cplx* x, cplx* y) {
    const __m256d av = _mm256_set1_pd(alpha);
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d wv = _mm256_mul_pd(av, load_pair_weights(w + i));
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
        _mm256_storeu_pd(ys + 2 * i, _mm256_fmadd_pd(wv, xv, yv));
    }
    for (; i < n; ++i) {
        const double s = alpha * w[i];
        y[i] = cplx(y[i].real() + s * x[i].real(), y[i].imag() + s * x[i].imag());
    }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d y0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        const __m256d y1 =
            _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double scaled_max_norm(std::size_t n, const double* err, const double* a, const double* b,
                       double atol, double rtol) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d atv = _mm256_set1_pd(atol);
    const __m256d rtv = _mm256_set1_pd(rtol);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d e = _mm256_andnot_pd(sign, _mm256_loadu_pd(err + i));
        const __m256d av = _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i));
        const __m256d bv = _mm256_andnot_pd(sign, _mm256_loadu_pd(b + i));
        const __m256d scale = _mm256_fmadd_pd(rtv, _mm256_max_pd(av, bv), atv);
        acc = _mm256_max_pd(acc, _mm256_div_pd(e, scale));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) {
        const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
        m = std::max(m, std::abs(err[i]) / scale);
    }
    return m;
}

constexpr KernelTable table{caxpy, weighted_acc, scaled_weighted_acc, daxpy, scaled_max_norm};

}  // namespace

namespace detail {
const KernelTable& avx2_table() { return table; }
}  // namespace detail

}  // namespace casimir::simd
