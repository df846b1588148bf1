#include "itre/image.hpp"

#include <cmath>
#include <cstring>

#include "itre/errors.hpp"
#include "itre/kernels.hpp"

namespace itre {

GrayMap ImagePlanar::extract_channel(int c) const {
  GrayMap g(height, width);
  std::memcpy(g.data.data(), plane(c), plane_size() * sizeof(double));
  return g;
}

bool all_finite(const GrayMap& g) {
  for (double v : g.data)
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const ImagePlanar& img) {
  for (double v : img.data)
    if (!std::isfinite(v)) return false;
  return true;
}

bool in_unit_range(const ImagePlanar& img) {
  for (double v : img.data)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

void validate_input_image(const ImagePlanar& img) {
  if (img.channels != 3)
    throw UsageError("input image must have 3 channels, got " +
                     std::to_string(img.channels));
  if (img.height < 8 || img.width < 8)
    throw UsageError("input image must be at least 8x8, got " +
                     std::to_string(img.width) + "x" + std::to_string(img.height));
  if (!in_unit_range(img))
    throw NumericError("input image has samples outside [0,1] or non-finite");
}

GrayMap minmax_normalize(const GrayMap& g) {
  const auto& k = kernels::active();
  GrayMap out(g.height, g.width);
  if (g.data.empty()) return out;
  double mn, mx;
  k.minmax(g.data.data(), g.data.size(), &mn, &mx);
  if (mx == mn) return out;  // constant map maps to zero
  k.sub_div(g.data.data(), mn, mx - mn, out.data.data(), g.data.size());
  return out;
}

}  // namespace itre
