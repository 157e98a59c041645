#include "rpca/kernels.hpp"

#include <cmath>

namespace rpca::kernels {
namespace {

inline double shrink_one(double a, double tau) {
  if (a > tau) return a - tau;
  if (a < -tau) return a + tau;
  return 0.0;
}

void shrink(const double* a, double tau, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = shrink_one(a[i], tau);
}

void masked_shrink(const double* r, const double* mask, double tau, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mask[i] != 0.0 ? shrink_one(r[i], tau) : r[i];
}

void sub_add_scaled(const double* a, const double* b, const double* c, double s, double* out,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] - b[i]) + s * c[i];
}

void average(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]);
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + s * x[i];
}

// Eight striped partial sums folded as ((p0+p4)+(p2+p6)) + ((p1+p5)+(p3+p7)),
// then the tail; this is exactly the AVX2 reduction order.
struct Striped {
  double p[8] = {0, 0, 0, 0, 0, 0, 0, 0};

  double fold(double tail) const {
    double q0 = p[0] + p[4], q1 = p[1] + p[5], q2 = p[2] + p[6], q3 = p[3] + p[7];
    return ((q0 + q2) + (q1 + q3)) + tail;
  }
};

double residual3(const double* a, const double* b, const double* c, double* out,
                 std::size_t n) {
  Striped acc;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) {
      double v = (a[i + k] - b[i + k]) - c[i + k];
      out[i + k] = v;
      acc.p[k] = acc.p[k] + v * v;
    }
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    double v = (a[i] - b[i]) - c[i];
    out[i] = v;
    tail = tail + v * v;
  }
  return acc.fold(tail);
}

double sum_squares(const double* a, std::size_t n) {
  Striped acc;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t k = 0; k < 8; ++k) acc.p[k] = acc.p[k] + a[i + k] * a[i + k];
  double tail = 0.0;
  for (; i < n; ++i) tail = tail + a[i] * a[i];
  return acc.fold(tail);
}

double sum_abs(const double* a, std::size_t n) {
  Striped acc;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t k = 0; k < 8; ++k) acc.p[k] = acc.p[k] + std::fabs(a[i + k]);
  double tail = 0.0;
  for (; i < n; ++i) tail = tail + std::fabs(a[i]);
  return acc.fold(tail);
}

double dot(const double* a, const double* b, std::size_t n) {
  Striped acc;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t k = 0; k < 8; ++k) acc.p[k] = acc.p[k] + a[i + k] * b[i + k];
  double tail = 0.0;
  for (; i < n; ++i) tail = tail + a[i] * b[i];
  return acc.fold(tail);
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      "scalar", shrink, masked_shrink, sub_add_scaled, average, axpy, residual3,
      sum_squares, sum_abs, dot,
  };
  return table;
}

}  // namespace rpca::kernels
