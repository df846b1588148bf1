#include "itre/rg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "itre/color.hpp"
#include "itre/errors.hpp"
#include "itre/kernels.hpp"

namespace itre {

namespace {

inline int quantize8(double v) {
  long q = std::lround(v * 255.0);
  return int(std::clamp(q, 0L, 255L));
}

}  // namespace

GrayMap neighborhood_max(const GrayMap& v, int radius) {
  if (radius < 1) throw UsageError("neighborhood_max: radius must be >= 1");
  const int h = v.height, w = v.width;
  // separable: max over rows, then over columns
  GrayMap rows(h, w), out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
      double m = v.at(y, x0);
      for (int xx = x0 + 1; xx <= x1; ++xx) m = std::max(m, v.at(y, xx));
      rows.at(y, x) = m;
    }
  }
  for (int y = 0; y < h; ++y) {
    int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
    for (int x = 0; x < w; ++x) {
      double m = rows.at(y0, x);
      for (int yy = y0 + 1; yy <= y1; ++yy) m = std::max(m, rows.at(yy, x));
      out.at(y, x) = m;
    }
  }
  return out;
}

GrayMap histogram_match(const GrayMap& source, const GrayMap& reference) {
  const std::size_t ns = source.data.size();
  const std::size_t nr = reference.data.size();
  if (ns == 0 || nr == 0)
    throw UsageError("histogram_match: empty input");

  long long hist_s[256] = {0};
  long long hist_r[256] = {0};
  for (double v : source.data) ++hist_s[quantize8(v)];
  for (double v : reference.data) ++hist_r[quantize8(v)];

  long long cdf_r[256];
  long long acc = 0;
  for (int j = 0; j < 256; ++j) {
    acc += hist_r[j];
    cdf_r[j] = acc;
  }

  // map each source bin's mid-mass quantile through the reference inverse CDF
  double lut[256];
  int j = 0;
  long long before = 0;
  for (int i = 0; i < 256; ++i) {
    double q = double(before) + 0.5 * double(hist_s[i]);  // mid-mass of bin i
    // smallest j with cdf_r[j]/nr >= q/ns  (exact in doubles: counts < 2^26)
    while (j < 255 && double(cdf_r[j]) * double(ns) < q * double(nr)) ++j;
    lut[i] = double(j) / 255.0;
    before += hist_s[i];
  }

  GrayMap out(source.height, source.width);
  for (std::size_t i = 0; i < ns; ++i)
    out.data[i] = lut[quantize8(source.data[i])];
  return out;
}

int rg_effective_radius(const RgParams& params, int height, int width) {
  if (!params.radius_auto) return std::max(1, params.neighborhood_radius);
  return std::max(7, std::min(height, width) / 50);
}

TransmissionMap apply_rg(const TransmissionMap& itr, const ImagePlanar& img,
                         const WlsParams& wls, const RgParams& params) {
  if (params.mode == RgMode::off) return itr;
  if (params.mode == RgMode::automatic) {
    // trigger only when the ITR degenerates toward 1 everywhere
    std::vector<double> sorted = itr.data;
    std::size_t k = std::size_t(0.05 * double(sorted.size() - 1));
    std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end());
    if (sorted[k] <= params.auto_trigger_threshold) return itr;
  }

  GrayMap v = hsv_value(img);
  int radius = rg_effective_radius(params, img.height, img.width);
  GrayMap tmp = neighborhood_max(v, radius);
  tmp = wls_smooth(tmp, v, wls);
  kernels::active().clamp(tmp.data.data(), 0.0, 1.0, tmp.data.data(),
                          tmp.data.size());

  GrayMap matched = histogram_match(itr, tmp);
  TransmissionMap out(itr.height, itr.width);
  kernels::active().clamp(matched.data.data(), kTransmissionFloor, 1.0,
                          out.data.data(), out.data.size());
  return out;
}

}  // namespace itre
