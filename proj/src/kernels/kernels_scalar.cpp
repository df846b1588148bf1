#include "itre/kernels.hpp"

#include <cmath>

// Scalar reference backend. The AVX2 backend mirrors the exact operation
// order used here; keep the two files in sync when touching either.

namespace itre::kernels {
namespace {

void luma_bt601_(const double* r, const double* g, const double* b,
                 double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (0.299 * r[i] + 0.587 * g[i]) + 0.114 * b[i];
}

void rgb_radius_(const double* r, const double* g, const double* b,
                 double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::sqrt((r[i] * r[i] + g[i] * g[i]) + b[i] * b[i]);
}

void hypot_map_(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void grad_h_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    double* orow = out + std::size_t(y) * w;
    for (int x = 0; x < w - 1; ++x) orow[x] = row[x + 1] - row[x];
    orow[w - 1] = row[0] - row[w - 1];
  }
}

void grad_v_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    const double* next = in + std::size_t((y + 1) % h) * w;
    double* orow = out + std::size_t(y) * w;
    for (int x = 0; x < w; ++x) orow[x] = next[x] - row[x];
  }
}

void div_h_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    double* orow = out + std::size_t(y) * w;
    orow[0] = row[w - 1] - row[0];
    for (int x = 1; x < w; ++x) orow[x] = row[x - 1] - row[x];
  }
}

void div_v_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    const double* prev = in + std::size_t((y + h - 1) % h) * w;
    double* orow = out + std::size_t(y) * w;
    for (int x = 0; x < w; ++x) orow[x] = prev[x] - row[x];
  }
}

void add_(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void scale_add_(const double* a, double s, const double* b, double* out,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

void sub_div_(const double* x, double sub, double div, double* out,
              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - sub) / div;
}

void clamp_(const double* x, double lo, double hi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    v = v > lo ? v : lo;
    v = v < hi ? v : hi;
    out[i] = v;
  }
}

void shrink_step_(const double* grad, const double* dual, const double* lam,
                  double inv_rho, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = grad[i] - dual[i] * inv_rho;
    double t = lam[i] * inv_rho;
    double m = std::fabs(v) - t;
    out[i] = m > 0.0 ? std::copysign(m, v) : 0.0;
  }
}

void dual_step_(double* dual, const double* q, const double* grad, double rho,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dual[i] = dual[i] + rho * (q[i] - grad[i]);
}

void divide_clamp01_(const double* s, const double* t, double eps1,
                     double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = s[i] / (t[i] + eps1);
    v = v > 0.0 ? v : 0.0;
    v = v < 1.0 ? v : 1.0;
    out[i] = v;
  }
}

void exposure_ratio_(const double* s, const double* t, double eps1,
                     double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s[i] / (t[i] + eps1) - 1.0;
}

void minmax_(const double* x, std::size_t n, double* mn_out, double* mx_out) {
  double mn = x[0], mx = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    double v = x[i];
    if (v < mn) mn = v;
    if (v > mx) mx = v;
  }
  // +0.0 collapses signed zeros so backends agree bit-for-bit
  *mn_out = mn + 0.0;
  *mx_out = mx + 0.0;
}

double sum_(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i];
    s1 += x[i + 1];
    s2 += x[i + 2];
    s3 += x[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sq_sum_(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * x[i];
    s1 += x[i + 1] * x[i + 1];
    s2 += x[i + 2] * x[i + 2];
    s3 += x[i + 3] * x[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot_(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double diff_sq_sum_(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    double d0 = a[i] - b[i];
    double d1 = a[i + 1] - b[i + 1];
    double d2 = a[i + 2] - b[i + 2];
    double d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double abs_weighted_sum_(const double* x, const double* w, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += w[i] * std::fabs(x[i]);
    s1 += w[i + 1] * std::fabs(x[i + 1]);
    s2 += w[i + 2] * std::fabs(x[i + 2]);
    s3 += w[i + 3] * std::fabs(x[i + 3]);
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

const Table kScalarTable = {
    "scalar",
    luma_bt601_,
    rgb_radius_,
    hypot_map_,
    grad_h_,
    grad_v_,
    div_h_,
    div_v_,
    add_,
    scale_add_,
    sub_div_,
    clamp_,
    shrink_step_,
    dual_step_,
    divide_clamp01_,
    exposure_ratio_,
    minmax_,
    sum_,
    sq_sum_,
    dot_,
    diff_sq_sum_,
    abs_weighted_sum_,
};

}  // namespace

const Table& scalar_table() { return kScalarTable; }

}  // namespace itre::kernels
