#include "itre/admm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "itre/color.hpp"
#include "itre/errors.hpp"
#include "itre/grad.hpp"
#include "itre/kernels.hpp"

namespace itre {

namespace {

// FFTW's planner is not thread-safe; executes on distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_finite_plane(const GrayMap& g, const char* plane, int iteration) {
  for (double v : g.data) {
    if (!std::isfinite(v))
      throw NumericError("refine_transmission: non-finite value in plane " +
                         std::string(plane) + " at iteration " +
                         std::to_string(iteration));
  }
}

}  // namespace

LambdaMap lambda_map(const ImagePlanar& img, const SolverConfig& cfg) {
  GrayMap sat = hsv_saturation(img);
  GrayMap grad = gradient_magnitude(luma_yuv(img));
  LambdaMap lam(img.height, img.width);
  for (std::size_t i = 0; i < lam.data.size(); ++i) {
    double s = sat.data[i];
    lam.data[i] = std::exp(-s * s) * cfg.lambda_g / (grad.data[i] + cfg.eps);
  }
  return lam;
}

struct TUpdateSolver::Impl {
  int h, w;
  std::size_t n;
  fftw_complex* buf_in;
  fftw_complex* buf_out;
  fftw_plan fwd;
  fftw_plan inv;
  std::vector<double> diff_spectrum;  // sum_d |F(D_d)|^2, real
  std::vector<double> num_re, num_im;

  Impl(int height, int width) : h(height), w(width), n(std::size_t(h) * w) {
    buf_in = fftw_alloc_complex(n);
    buf_out = fftw_alloc_complex(n);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd = fftw_plan_dft_2d(h, w, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
      inv = fftw_plan_dft_2d(h, w, buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    num_re.resize(n);
    num_im.resize(n);

    // |F(kernel)|^2 of the two forward-difference kernels, padded to the
    // grid; imaginary residue of conj(F)*F is dropped (real by construction).
    diff_spectrum.assign(n, 0.0);
    std::vector<double> kernel(n, 0.0);
    kernel[0] -= 1.0;
    kernel[std::size_t(1) % w] += 1.0;  // horizontal: T(y, x+1) - T(y, x)
    accumulate_power(kernel);
    std::fill(kernel.begin(), kernel.end(), 0.0);
    kernel[0] -= 1.0;
    kernel[(std::size_t(1) % h) * w] += 1.0;  // vertical
    accumulate_power(kernel);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(buf_in);
    fftw_free(buf_out);
  }

  void forward_real(const double* src) {
    for (std::size_t i = 0; i < n; ++i) {
      buf_in[i][0] = src[i];
      buf_in[i][1] = 0.0;
    }
    fftw_execute(fwd);
  }

  void accumulate_power(const std::vector<double>& kernel) {
    forward_real(kernel.data());
    for (std::size_t i = 0; i < n; ++i)
      diff_spectrum[i] +=
          buf_out[i][0] * buf_out[i][0] + buf_out[i][1] * buf_out[i][1];
  }
};

TUpdateSolver::TUpdateSolver(int height, int width)
    : impl_(std::make_unique<Impl>(height, width)) {}

TUpdateSolver::~TUpdateSolver() = default;

TransmissionMap TUpdateSolver::solve(const SolverState& state,
                                     const TransmissionMap& target,
                                     const SolverConfig& cfg) {
  const auto& k = kernels::active();
  Impl& im = *impl_;
  const std::size_t n = im.n;
  const double rho = state.rho;
  const double inv_rho = 1.0 / rho;
  const double dual_sign = cfg.dual_sign_alternate ? -inv_rho : inv_rho;

  // spatial numerator: target + rho * D^T(Q + Y/rho)
  GrayMap tmp(im.h, im.w), acc_h(im.h, im.w), acc_v(im.h, im.w);
  k.scale_add(state.qh.data.data(), dual_sign, state.yh.data.data(),
              tmp.data.data(), n);
  k.div_h(tmp.data.data(), acc_h.data.data(), im.h, im.w);
  k.scale_add(state.qv.data.data(), dual_sign, state.yv.data.data(),
              tmp.data.data(), n);
  k.div_v(tmp.data.data(), acc_v.data.data(), im.h, im.w);
  k.add(acc_h.data.data(), acc_v.data.data(), tmp.data.data(), n);
  GrayMap num(im.h, im.w);
  k.scale_add(target.data.data(), rho, tmp.data.data(), num.data.data(), n);

  im.forward_real(num.data.data());
  for (std::size_t i = 0; i < n; ++i) {
    im.num_re[i] = im.buf_out[i][0];
    im.num_im[i] = im.buf_out[i][1];
  }
  if (cfg.alpha_exp != 0.0) {
    im.forward_real(state.e.data.data());
    for (std::size_t i = 0; i < n; ++i) {
      im.num_re[i] += im.buf_out[i][0];
      im.num_im[i] += im.buf_out[i][1];
    }
  }

  // denominator 1 + rho*sum|F(D_d)|^2 is real and >= 1
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 1.0 + rho * im.diff_spectrum[i];
    im.buf_in[i][0] = im.num_re[i] / denom;
    im.buf_in[i][1] = im.num_im[i] / denom;
  }
  fftw_execute(im.inv);

  TransmissionMap t(im.h, im.w);
  const double scale = 1.0 / double(n);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t.data[i] = im.buf_out[i][0] * scale;
    max_imag = std::max(max_imag, std::fabs(im.buf_out[i][1]) * scale);
  }
  if (!(max_imag < 1e-8))
    throw NumericError("t_update: imaginary residue " + std::to_string(max_imag) +
                       " exceeds 1e-8");
  return t;
}

TransmissionMap t_update(const SolverState& state, const TransmissionMap& target,
                         const SolverConfig& cfg) {
  TUpdateSolver solver(target.height, target.width);
  return solver.solve(state, target, cfg);
}

std::pair<GrayMap, GrayMap> q_update(const SolverState& state,
                                     const LambdaMap& lam) {
  const auto& k = kernels::active();
  const std::size_t n = state.t.data.size();
  auto [gh, gv] = forward_gradients(state.t);
  GrayMap qh(state.t.height, state.t.width), qv(state.t.height, state.t.width);
  const double inv_rho = 1.0 / state.rho;
  k.shrink_step(gh.data.data(), state.yh.data.data(), lam.data.data(), inv_rho,
                qh.data.data(), n);
  k.shrink_step(gv.data.data(), state.yv.data.data(), lam.data.data(), inv_rho,
                qv.data.data(), n);
  return {std::move(qh), std::move(qv)};
}

void dual_update(SolverState& state, const SolverConfig& cfg) {
  const auto& k = kernels::active();
  const std::size_t n = state.t.data.size();
  auto [gh, gv] = forward_gradients(state.t);
  k.dual_step(state.yh.data.data(), state.qh.data.data(), gh.data.data(),
              state.rho, n);
  k.dual_step(state.yv.data.data(), state.qv.data.data(), gv.data.data(),
              state.rho, n);
  state.rho *= cfg.p;
}

GrayMap e_update(const TransmissionMap& t, const GrayMap& s_gray,
                 const SolverConfig& cfg) {
  if (cfg.alpha_exp == 0.0) return GrayMap(t.height, t.width, 0.0);
  const auto& k = kernels::active();
  GrayMap pre(t.height, t.width);
  k.exposure_ratio(s_gray.data.data(), t.data.data(), cfg.eps1,
                   pre.data.data(), pre.data.size());
  GrayMap e = minmax_normalize(pre);
  for (double& v : e.data) v *= cfg.alpha_exp;
  return e;
}

double admm_objective(const TransmissionMap& t, const TransmissionMap& target,
                      const LambdaMap& lam, const GrayMap& s_gray,
                      const SolverConfig& cfg) {
  const auto& k = kernels::active();
  const std::size_t n = t.data.size();
  double fidelity = k.diff_sq_sum(t.data.data(), target.data.data(), n);
  auto [gh, gv] = forward_gradients(t);
  double smooth = k.abs_weighted_sum(gh.data.data(), lam.data.data(), n) +
                  k.abs_weighted_sum(gv.data.data(), lam.data.data(), n);
  double exposure = 0.0;
  if (cfg.alpha_exp != 0.0) {
    GrayMap pre(t.height, t.width);
    k.exposure_ratio(s_gray.data.data(), t.data.data(), cfg.eps1,
                     pre.data.data(), n);
    GrayMap nor = minmax_normalize(pre);
    exposure = cfg.alpha_exp * k.sq_sum(nor.data.data(), n);
  }
  return fidelity + smooth + exposure;
}

RefineResult refine_transmission_full(const TransmissionMap& target,
                                      const ImagePlanar& img,
                                      const SolverConfig& cfg,
                                      bool want_trace) {
  if (img.height != target.height || img.width != target.width)
    throw UsageError("refine_transmission: image and target dimensions differ");
  const auto& k = kernels::active();
  const int h = target.height, w = target.width;
  const std::size_t n = target.data.size();

  GrayMap s_gray = rgb_to_gray(img);
  LambdaMap lam = lambda_map(img, cfg);

  RefineResult res;
  SolverState& st = res.state;
  st.t = target;
  st.qh = GrayMap(h, w, 0.0);
  st.qv = GrayMap(h, w, 0.0);
  st.yh = GrayMap(h, w, 0.0);
  st.yv = GrayMap(h, w, 0.0);
  st.e = GrayMap(h, w, 0.0);
  st.rho = cfg.rho0;
  st.iteration = 0;

  TUpdateSolver solver(h, w);
  TransmissionMap t_prev(h, w);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    t_prev = st.t;
    const double rho_used = st.rho;

    st.t = solver.solve(st, target, cfg);
    check_finite_plane(st.t, "T", it);

    auto [qh, qv] = q_update(st, lam);
    st.qh = std::move(qh);
    st.qv = std::move(qv);
    check_finite_plane(st.qh, "Qh", it);
    check_finite_plane(st.qv, "Qv", it);

    dual_update(st, cfg);
    check_finite_plane(st.yh, "Yh", it);
    check_finite_plane(st.yv, "Yv", it);

    st.e = e_update(st.t, s_gray, cfg);
    check_finite_plane(st.e, "E", it);

    st.iteration = it + 1;

    if (want_trace) {
      auto [gh, gv] = forward_gradients(st.t);
      double residual =
          std::sqrt(k.diff_sq_sum(st.qh.data.data(), gh.data.data(), n) +
                    k.diff_sq_sum(st.qv.data.data(), gv.data.data(), n));
      res.trace.push_back(TraceRow{st.iteration,
                                   admm_objective(st.t, target, lam, s_gray, cfg),
                                   residual, rho_used});
    }

    double prev_norm = std::sqrt(k.sq_sum(t_prev.data.data(), n));
    double change = std::sqrt(k.diff_sq_sum(st.t.data.data(), t_prev.data.data(), n));
    if (prev_norm > 0.0 && change / prev_norm < cfg.convergence_tol) break;
  }

  res.t = TransmissionMap(h, w);
  k.clamp(st.t.data.data(), kTransmissionFloor, 1.0, res.t.data.data(), n);
  return res;
}

TransmissionMap refine_transmission(const TransmissionMap& target,
                                    const ImagePlanar& img,
                                    const SolverConfig& cfg) {
  return refine_transmission_full(target, img, cfg).t;
}

}  // namespace itre
