#include "itre/color.hpp"

#include <algorithm>
#include <cmath>

#include "itre/errors.hpp"
#include "itre/kernels.hpp"

namespace itre {

namespace {

void require_rgb(const ImagePlanar& img, const char* op) {
  if (img.channels != 3)
    throw UsageError(std::string(op) + ": expected a 3-channel image, got " +
                     std::to_string(img.channels));
}

}  // namespace

GrayMap rgb_to_gray(const ImagePlanar& img) {
  require_rgb(img, "rgb_to_gray");
  GrayMap out(img.height, img.width);
  kernels::active().luma_bt601(img.plane(0), img.plane(1), img.plane(2),
                               out.data.data(), img.plane_size());
  return out;
}

GrayMap luma_yuv(const ImagePlanar& img) {
  require_rgb(img, "luma_yuv");
  GrayMap out(img.height, img.width);
  kernels::active().luma_bt601(img.plane(0), img.plane(1), img.plane(2),
                               out.data.data(), img.plane_size());
  return out;
}

ImagePlanar rgb_to_hsv(const ImagePlanar& img) {
  require_rgb(img, "rgb_to_hsv");
  ImagePlanar out(img.height, img.width, 3);
  const double* rp = img.plane(0);
  const double* gp = img.plane(1);
  const double* bp = img.plane(2);
  double* hp = out.plane(0);
  double* sp = out.plane(1);
  double* vp = out.plane(2);
  const std::size_t n = img.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = rp[i], g = gp[i], b = bp[i];
    double v = std::max({r, g, b});
    double mn = std::min({r, g, b});
    double delta = v - mn;
    double h = 0.0;
    if (delta > 0.0) {
      if (v == r)
        h = std::fmod((g - b) / delta, 6.0);
      else if (v == g)
        h = (b - r) / delta + 2.0;
      else
        h = (r - g) / delta + 4.0;
      h /= 6.0;
      if (h < 0.0) h += 1.0;
      if (h >= 1.0) h -= 1.0;
    }
    hp[i] = h;
    sp[i] = v > 0.0 ? delta / v : 0.0;
    vp[i] = v;
  }
  return out;
}

ImagePlanar hsv_to_rgb(const ImagePlanar& hsv) {
  require_rgb(hsv, "hsv_to_rgb");
  ImagePlanar out(hsv.height, hsv.width, 3);
  const double* hp = hsv.plane(0);
  const double* sp = hsv.plane(1);
  const double* vp = hsv.plane(2);
  const std::size_t n = hsv.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    double h = hp[i] * 6.0, s = sp[i], v = vp[i];
    int sector = std::min(5, int(h));
    double f = h - sector;
    double p = v * (1.0 - s);
    double q = v * (1.0 - s * f);
    double t = v * (1.0 - s * (1.0 - f));
    double r, g, b;
    switch (sector) {
      case 0: r = v; g = t; b = p; break;
      case 1: r = q; g = v; b = p; break;
      case 2: r = p; g = v; b = t; break;
      case 3: r = p; g = q; b = v; break;
      case 4: r = t; g = p; b = v; break;
      default: r = v; g = p; b = q; break;
    }
    out.plane(0)[i] = r;
    out.plane(1)[i] = g;
    out.plane(2)[i] = b;
  }
  return out;
}

GrayMap hsv_value(const ImagePlanar& img) {
  require_rgb(img, "hsv_value");
  GrayMap out(img.height, img.width);
  const double* rp = img.plane(0);
  const double* gp = img.plane(1);
  const double* bp = img.plane(2);
  const std::size_t n = img.plane_size();
  for (std::size_t i = 0; i < n; ++i) out.data[i] = std::max({rp[i], gp[i], bp[i]});
  return out;
}

GrayMap hsv_saturation(const ImagePlanar& img) {
  require_rgb(img, "hsv_saturation");
  GrayMap out(img.height, img.width);
  const double* rp = img.plane(0);
  const double* gp = img.plane(1);
  const double* bp = img.plane(2);
  const std::size_t n = img.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::max({rp[i], gp[i], bp[i]});
    double mn = std::min({rp[i], gp[i], bp[i]});
    out.data[i] = v > 0.0 ? (v - mn) / v : 0.0;
  }
  return out;
}

}  // namespace itre
