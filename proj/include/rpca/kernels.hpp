#pragma once

// Elementwise and reduction kernels behind the solver's inner loops.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant chosen at runtime. The two are bit-identical: elementwise kernels
// use the same operation order without fused multiply-add, and reductions
// accumulate into eight interleaved partial sums (lane i % 8) that are
// folded in a fixed order. Switching backends never changes a result.

#include <cstddef>
#include <string_view>

namespace rpca::kernels {

struct KernelTable {
  std::string_view name;

  /// out[i] = sgn(a[i]) * max(|a[i]| - tau, 0)
  void (*shrink)(const double* a, double tau, double* out, std::size_t n);
  /// out[i] = mask[i] != 0 ? shrink(r[i], tau) : r[i]
  void (*masked_shrink)(const double* r, const double* mask, double tau, double* out,
                        std::size_t n);
  /// out[i] = a[i] - b[i] + s * c[i]
  void (*sub_add_scaled)(const double* a, const double* b, const double* c, double s,
                         double* out, std::size_t n);
  /// out[i] = 0.5 * (a[i] + b[i])
  void (*average)(const double* a, const double* b, double* out, std::size_t n);
  /// y[i] += s * x[i]
  void (*axpy)(double s, const double* x, double* y, std::size_t n);
  /// out[i] = a[i] - b[i] - c[i]; returns sum of out[i]^2
  double (*residual3)(const double* a, const double* b, const double* c, double* out,
                      std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  double (*sum_abs)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar();
/// AVX2 table, or nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();

/// Backend used by the library. AVX2 when available unless the environment
/// variable RPCA_KERNELS=scalar is set at first use.
const KernelTable& active();

}  // namespace rpca::kernels
