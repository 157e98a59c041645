#include "rpca/kernels.hpp"

#include <immintrin.h>

namespace rpca::kernels {
namespace {

inline __m256d shrink4(__m256d a, __m256d tau, __m256d neg_tau) {
  __m256d above = _mm256_cmp_pd(a, tau, _CMP_GT_OQ);
  __m256d below = _mm256_cmp_pd(a, neg_tau, _CMP_LT_OQ);
  __m256d out = _mm256_and_pd(above, _mm256_sub_pd(a, tau));
  return _mm256_blendv_pd(out, _mm256_add_pd(a, tau), below);
}

inline double shrink_one(double a, double tau) {
  if (a > tau) return a - tau;
  if (a < -tau) return a + tau;
  return 0.0;
}

// Matches the scalar fold: ((p0+p4)+(p2+p6)) + ((p1+p5)+(p3+p7)).
inline double fold(__m256d lo, __m256d hi) {
  __m256d q = _mm256_add_pd(lo, hi);
  __m128d s = _mm_add_pd(_mm256_castpd256_pd128(q), _mm256_extractf128_pd(q, 1));
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

void shrink(const double* a, double tau, double* out, std::size_t n) {
  const __m256d t = _mm256_set1_pd(tau), nt = _mm256_set1_pd(-tau);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, shrink4(_mm256_loadu_pd(a + i), t, nt));
  for (; i < n; ++i) out[i] = shrink_one(a[i], tau);
}

void masked_shrink(const double* r, const double* mask, double tau, double* out,
                   std::size_t n) {
  const __m256d t = _mm256_set1_pd(tau), nt = _mm256_set1_pd(-tau);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(r + i);
    __m256d observed = _mm256_cmp_pd(_mm256_loadu_pd(mask + i), zero, _CMP_NEQ_UQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(v, shrink4(v, t, nt), observed));
  }
  for (; i < n; ++i) out[i] = mask[i] != 0.0 ? shrink_one(r[i], tau) : r[i];
}

void sub_add_scaled(const double* a, const double* b, const double* c, double s, double* out,
                    std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(d, _mm256_mul_pd(sv, _mm256_loadu_pd(c + i))));
  }
  for (; i < n; ++i) out[i] = (a[i] - b[i]) + s * c[i];
}

void average(const double* a, const double* b, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                                               _mm256_loadu_pd(b + i))));
  for (; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]);
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                          _mm256_mul_pd(sv, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) y[i] = y[i] + s * x[i];
}

double residual3(const double* a, const double* b, const double* c, double* out,
                 std::size_t n) {
  __m256d lo = _mm256_setzero_pd(), hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d v0 = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)),
                               _mm256_loadu_pd(c + i));
    __m256d v1 = _mm256_sub_pd(
        _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)),
        _mm256_loadu_pd(c + i + 4));
    _mm256_storeu_pd(out + i, v0);
    _mm256_storeu_pd(out + i + 4, v1);
    lo = _mm256_add_pd(lo, _mm256_mul_pd(v0, v0));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(v1, v1));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    double v = (a[i] - b[i]) - c[i];
    out[i] = v;
    tail = tail + v * v;
  }
  return fold(lo, hi) + tail;
}

double sum_squares(const double* a, std::size_t n) {
  __m256d lo = _mm256_setzero_pd(), hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d v0 = _mm256_loadu_pd(a + i), v1 = _mm256_loadu_pd(a + i + 4);
    lo = _mm256_add_pd(lo, _mm256_mul_pd(v0, v0));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(v1, v1));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail = tail + a[i] * a[i];
  return fold(lo, hi) + tail;
}

double sum_abs(const double* a, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d lo = _mm256_setzero_pd(), hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    lo = _mm256_add_pd(lo, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
    hi = _mm256_add_pd(hi, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i + 4)));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail = tail + (a[i] < 0 ? -a[i] : a[i]);
  return fold(lo, hi) + tail;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d lo = _mm256_setzero_pd(), hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    hi = _mm256_add_pd(hi,
                       _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail = tail + a[i] * b[i];
  return fold(lo, hi) + tail;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2", shrink, masked_shrink, sub_add_scaled, average, axpy, residual3,
      sum_squares, sum_abs, dot,
  };
  return table;
}

}  // namespace rpca::kernels
