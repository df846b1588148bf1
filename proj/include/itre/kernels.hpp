#pragma once

#include <cstddef>

namespace itre::kernels {

// Flat-array kernels behind the pipeline's per-pixel inner loops.
//
// Two backends: a scalar reference and an AVX2 variant, selected once at
// startup. Both are written to produce bit-identical output: elementwise
// kernels evaluate the same IEEE operation sequence per element, and
// reductions accumulate four interleaved partials combined as
// (s0 + s2) + (s1 + s3) with a sequential tail, in both backends.
// The build disables FP contraction so neither side silently fuses.
struct Table {
  const char* name;

  // color / magnitude
  void (*luma_bt601)(const double* r, const double* g, const double* b,
                     double* out, std::size_t n);
  void (*rgb_radius)(const double* r, const double* g, const double* b,
                     double* out, std::size_t n);
  void (*hypot_map)(const double* a, const double* b, double* out, std::size_t n);

  // forward differences with periodic wrap, and their adjoints
  void (*grad_h)(const double* in, double* out, int h, int w);
  void (*grad_v)(const double* in, double* out, int h, int w);
  void (*div_h)(const double* in, double* out, int h, int w);
  void (*div_v)(const double* in, double* out, int h, int w);

  // elementwise algebra
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*scale_add)(const double* a, double s, const double* b, double* out,
                    std::size_t n);                                   // a + s*b
  void (*sub_div)(const double* x, double sub, double div, double* out,
                  std::size_t n);                                     // (x - sub)/div
  void (*clamp)(const double* x, double lo, double hi, double* out, std::size_t n);

  // solver steps
  void (*shrink_step)(const double* grad, const double* dual, const double* lam,
                      double inv_rho, double* out, std::size_t n);
  void (*dual_step)(double* dual, const double* q, const double* grad,
                    double rho, std::size_t n);                       // dual += rho*(q - grad)
  void (*divide_clamp01)(const double* s, const double* t, double eps1,
                         double* out, std::size_t n);                 // clamp(s/(t+eps1), 0, 1)
  void (*exposure_ratio)(const double* s, const double* t, double eps1,
                         double* out, std::size_t n);                 // s/(t+eps1) - 1

  // reductions (n >= 1 for minmax)
  void (*minmax)(const double* x, std::size_t n, double* mn, double* mx);
  double (*sum)(const double* x, std::size_t n);
  double (*sq_sum)(const double* x, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*diff_sq_sum)(const double* a, const double* b, std::size_t n);
  double (*abs_weighted_sum)(const double* x, const double* w, std::size_t n);
};

const Table& scalar_table();

// AVX2 table, or nullptr when the build or the running CPU lacks AVX2.
const Table* avx2_table();

// Backend in use. Picked once: ITRE_KERNELS=scalar|avx2 overrides, otherwise
// AVX2 when available, scalar fallback.
const Table& active();

}  // namespace itre::kernels
