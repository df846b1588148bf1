#include "itre/wls.hpp"

#include <cmath>
#include <string>

#include "itre/errors.hpp"
#include "itre/kernels.hpp"

namespace itre {

namespace {

// out = (I + lambda * L) u with the inhomogeneous 5-point Laplacian.
void apply_system(const GrayMap& u, const WlsWeights& w, double lambda,
                  GrayMap& out) {
  const int h = u.height, wd = u.width;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < wd; ++x) {
      double c = u.at(y, x);
      double s = 0.0;
      if (x > 0) s += w.wx.at(y, x - 1) * (c - u.at(y, x - 1));
      if (x < wd - 1) s += w.wx.at(y, x) * (c - u.at(y, x + 1));
      if (y > 0) s += w.wy.at(y - 1, x) * (c - u.at(y - 1, x));
      if (y < h - 1) s += w.wy.at(y, x) * (c - u.at(y + 1, x));
      out.at(y, x) = c + lambda * s;
    }
  }
}

}  // namespace

WlsWeights wls_edge_weights(const GrayMap& guide, const WlsParams& params) {
  const int h = guide.height, w = guide.width;
  const double eps = params.guide_floor;
  const double alpha = params.exponent;
  GrayMap lg(h, w);
  for (std::size_t i = 0; i < guide.data.size(); ++i)
    lg.data[i] = std::log(guide.data[i] + eps);

  WlsWeights wts{GrayMap(h, w), GrayMap(h, w)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w - 1; ++x)
      wts.wx.at(y, x) =
          1.0 / (std::pow(std::fabs(lg.at(y, x + 1) - lg.at(y, x)), alpha) + eps);
  for (int y = 0; y < h - 1; ++y)
    for (int x = 0; x < w; ++x)
      wts.wy.at(y, x) =
          1.0 / (std::pow(std::fabs(lg.at(y + 1, x) - lg.at(y, x)), alpha) + eps);
  return wts;
}

GrayMap wls_smooth(const GrayMap& input, const GrayMap& guide,
                   const WlsParams& params) {
  if (!input.same_size(guide))
    throw UsageError("wls_smooth: input and guide dimensions differ");
  const auto& k = kernels::active();
  const int h = input.height, w = input.width;
  const std::size_t n = input.data.size();
  const double lambda = params.strength;

  WlsWeights wts = wls_edge_weights(guide, params);

  // Jacobi preconditioner = diagonal of (I + lambda*L)
  GrayMap inv_diag(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double d = 1.0;
      if (x > 0) d += lambda * wts.wx.at(y, x - 1);
      if (x < w - 1) d += lambda * wts.wx.at(y, x);
      if (y > 0) d += lambda * wts.wy.at(y - 1, x);
      if (y < h - 1) d += lambda * wts.wy.at(y, x);
      inv_diag.at(y, x) = 1.0 / d;
    }
  }

  const double f_norm = std::sqrt(k.sq_sum(input.data.data(), n));
  if (f_norm == 0.0) return GrayMap(h, w, 0.0);

  GrayMap u = input;  // warm start at the data term
  GrayMap r(h, w), z(h, w), p(h, w), ap(h, w);

  apply_system(u, wts, lambda, ap);
  for (std::size_t i = 0; i < n; ++i) r.data[i] = input.data[i] - ap.data[i];
  for (std::size_t i = 0; i < n; ++i) z.data[i] = r.data[i] * inv_diag.data[i];
  p = z;
  double rz = k.dot(r.data.data(), z.data.data(), n);

  for (int it = 0; it < params.max_solver_iterations; ++it) {
    if (std::sqrt(k.sq_sum(r.data.data(), n)) / f_norm <= params.solver_tolerance)
      return u;
    apply_system(p, wts, lambda, ap);
    double pap = k.dot(p.data.data(), ap.data.data(), n);
    double alpha = rz / pap;
    k.scale_add(u.data.data(), alpha, p.data.data(), u.data.data(), n);
    k.scale_add(r.data.data(), -alpha, ap.data.data(), r.data.data(), n);
    for (std::size_t i = 0; i < n; ++i) z.data[i] = r.data[i] * inv_diag.data[i];
    double rz_next = k.dot(r.data.data(), z.data.data(), n);
    double beta = rz_next / rz;
    rz = rz_next;
    k.scale_add(z.data.data(), beta, p.data.data(), p.data.data(), n);
  }
  if (std::sqrt(k.sq_sum(r.data.data(), n)) / f_norm <= params.solver_tolerance)
    return u;
  throw NumericError("wls_smooth: CG did not reach tolerance " +
                     std::to_string(params.solver_tolerance) + " within " +
                     std::to_string(params.max_solver_iterations) +
                     " iterations");
}

}  // namespace itre
