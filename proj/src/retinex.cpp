#include "itre/retinex.hpp"

#include "itre/errors.hpp"
#include "itre/kernels.hpp"

namespace itre {

ImagePlanar correct(const ImagePlanar& img, const TransmissionMap& t,
                    double eps1) {
  if (img.height != t.height || img.width != t.width)
    throw UsageError("correct: image and transmission dimensions differ");
  ImagePlanar out(img.height, img.width, img.channels);
  const auto& k = kernels::active();
  for (int c = 0; c < img.channels; ++c)
    k.divide_clamp01(img.plane(c), t.data.data(), eps1, out.plane(c),
                     img.plane_size());
  return out;
}

}  // namespace itre
