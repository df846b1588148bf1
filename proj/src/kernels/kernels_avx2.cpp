#include "itre/kernels.hpp"

// AVX2 backend. Mirrors the operation order of kernels_scalar.cpp exactly:
// one IEEE op sequence per element, 4-lane accumulators combined as
// (s0 + s2) + (s1 + s3), scalar tails identical to the reference loops.
// No FMA anywhere (the scalar side has contraction disabled).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace itre::kernels {
namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline double lane(__m256d v, int i) {
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, v);
  return tmp[i];
}

inline double combine4(__m256d acc) {
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  return (s[0] + s[2]) + (s[1] + s[3]);
}

void luma_bt601_(const double* r, const double* g, const double* b,
                 double* out, std::size_t n) {
  const __m256d wr = _mm256_set1_pd(0.299);
  const __m256d wg = _mm256_set1_pd(0.587);
  const __m256d wb = _mm256_set1_pd(0.114);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_add_pd(_mm256_mul_pd(wr, _mm256_loadu_pd(r + i)),
                                _mm256_mul_pd(wg, _mm256_loadu_pd(g + i)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wb, _mm256_loadu_pd(b + i)));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = (0.299 * r[i] + 0.587 * g[i]) + 0.114 * b[i];
}

void rgb_radius_(const double* r, const double* g, const double* b,
                 double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vr = _mm256_loadu_pd(r + i);
    __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    __m256d s = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(vr, vr), _mm256_mul_pd(vg, vg)),
        _mm256_mul_pd(vb, vb));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
  }
  for (; i < n; ++i)
    out[i] = std::sqrt((r[i] * r[i] + g[i] * g[i]) + b[i] * b[i]);
}

void hypot_map_(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    __m256d s = _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
  }
  for (; i < n; ++i) out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void grad_h_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    double* orow = out + std::size_t(y) * w;
    int x = 0;
    for (; x + 4 <= w - 1; x += 4) {
      __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + x + 1),
                                _mm256_loadu_pd(row + x));
      _mm256_storeu_pd(orow + x, d);
    }
    for (; x < w - 1; ++x) orow[x] = row[x + 1] - row[x];
    orow[w - 1] = row[0] - row[w - 1];
  }
}

void grad_v_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    const double* next = in + std::size_t((y + 1) % h) * w;
    double* orow = out + std::size_t(y) * w;
    int x = 0;
    for (; x + 4 <= w; x += 4) {
      _mm256_storeu_pd(orow + x, _mm256_sub_pd(_mm256_loadu_pd(next + x),
                                               _mm256_loadu_pd(row + x)));
    }
    for (; x < w; ++x) orow[x] = next[x] - row[x];
  }
}

void div_h_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    double* orow = out + std::size_t(y) * w;
    orow[0] = row[w - 1] - row[0];
    int x = 1;
    for (; x + 4 <= w; x += 4) {
      __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + x - 1),
                                _mm256_loadu_pd(row + x));
      _mm256_storeu_pd(orow + x, d);
    }
    for (; x < w; ++x) orow[x] = row[x - 1] - row[x];
  }
}

void div_v_(const double* in, double* out, int h, int w) {
  for (int y = 0; y < h; ++y) {
    const double* row = in + std::size_t(y) * w;
    const double* prev = in + std::size_t((y + h - 1) % h) * w;
    double* orow = out + std::size_t(y) * w;
    int x = 0;
    for (; x + 4 <= w; x += 4) {
      _mm256_storeu_pd(orow + x, _mm256_sub_pd(_mm256_loadu_pd(prev + x),
                                               _mm256_loadu_pd(row + x)));
    }
    for (; x < w; ++x) orow[x] = prev[x] - row[x];
  }
}

void add_(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void scale_add_(const double* a, double s, const double* b, double* out,
                std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i),
                              _mm256_mul_pd(vs, _mm256_loadu_pd(b + i)));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = a[i] + s * b[i];
}

void sub_div_(const double* x, double sub, double div, double* out,
              std::size_t n) {
  const __m256d vsub = _mm256_set1_pd(sub);
  const __m256d vdiv = _mm256_set1_pd(div);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vsub), vdiv);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = (x[i] - sub) / div;
}

void clamp_(const double* x, double lo, double hi, double* out, std::size_t n) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_max_pd(v, vlo);
    v = _mm256_min_pd(v, vhi);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    double v = x[i];
    v = v > lo ? v : lo;
    v = v < hi ? v : hi;
    out[i] = v;
  }
}

void shrink_step_(const double* grad, const double* dual, const double* lam,
                  double inv_rho, double* out, std::size_t n) {
  const __m256d virho = _mm256_set1_pd(inv_rho);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(grad + i),
                              _mm256_mul_pd(_mm256_loadu_pd(dual + i), virho));
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(lam + i), virho);
    __m256d m = _mm256_sub_pd(_mm256_andnot_pd(kSignMask, v), t);
    __m256d shrunk = _mm256_or_pd(m, _mm256_and_pd(v, kSignMask));
    __m256d mask = _mm256_cmp_pd(m, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(shrunk, mask));
  }
  for (; i < n; ++i) {
    double v = grad[i] - dual[i] * inv_rho;
    double t = lam[i] * inv_rho;
    double m = std::fabs(v) - t;
    out[i] = m > 0.0 ? std::copysign(m, v) : 0.0;
  }
}

void dual_step_(double* dual, const double* q, const double* grad, double rho,
                std::size_t n) {
  const __m256d vrho = _mm256_set1_pd(rho);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(q + i), _mm256_loadu_pd(grad + i));
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(dual + i), _mm256_mul_pd(vrho, d));
    _mm256_storeu_pd(dual + i, v);
  }
  for (; i < n; ++i) dual[i] = dual[i] + rho * (q[i] - grad[i]);
}

void divide_clamp01_(const double* s, const double* t, double eps1,
                     double* out, std::size_t n) {
  const __m256d veps = _mm256_set1_pd(eps1);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_div_pd(_mm256_loadu_pd(s + i),
                              _mm256_add_pd(_mm256_loadu_pd(t + i), veps));
    v = _mm256_max_pd(v, zero);
    v = _mm256_min_pd(v, one);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    double v = s[i] / (t[i] + eps1);
    v = v > 0.0 ? v : 0.0;
    v = v < 1.0 ? v : 1.0;
    out[i] = v;
  }
}

void exposure_ratio_(const double* s, const double* t, double eps1,
                     double* out, std::size_t n) {
  const __m256d veps = _mm256_set1_pd(eps1);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_div_pd(_mm256_loadu_pd(s + i),
                              _mm256_add_pd(_mm256_loadu_pd(t + i), veps));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(v, one));
  }
  for (; i < n; ++i) out[i] = s[i] / (t[i] + eps1) - 1.0;
}

void minmax_(const double* x, std::size_t n, double* mn_out, double* mx_out) {
  double mn, mx;
  if (n >= 4) {
    __m256d vmn = _mm256_loadu_pd(x);
    __m256d vmx = vmn;
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      vmn = _mm256_min_pd(vmn, v);
      vmx = _mm256_max_pd(vmx, v);
    }
    mn = lane(vmn, 0);
    mx = lane(vmx, 0);
    for (int k = 1; k < 4; ++k) {
      double a = lane(vmn, k), b = lane(vmx, k);
      if (a < mn) mn = a;
      if (b > mx) mx = b;
    }
    for (; i < n; ++i) {
      double v = x[i];
      if (v < mn) mn = v;
      if (v > mx) mx = v;
    }
  } else {
    mn = x[0];
    mx = x[0];
    for (std::size_t i = 1; i < n; ++i) {
      double v = x[i];
      if (v < mn) mn = v;
      if (v > mx) mx = v;
    }
  }
  *mn_out = mn + 0.0;
  *mx_out = mx + 0.0;
}

double sum_(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = combine4(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sq_sum_(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = combine4(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot_(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = combine4(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double diff_sq_sum_(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = combine4(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double abs_weighted_sum_(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d av = _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(x + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), av));
  }
  double s = combine4(acc);
  for (; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

const Table kAvx2Table = {
    "avx2",
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

const Table* avx2_table_impl() { return &kAvx2Table; }

}  // namespace itre::kernels

#else

namespace itre::kernels {
struct Table;
const Table* avx2_table_impl() { return nullptr; }
}  // namespace itre::kernels

#endif
