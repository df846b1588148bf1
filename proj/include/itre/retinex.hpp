#pragma once

#include "itre/image.hpp"

namespace itre {

// Per channel, clamp(S_c / (T + eps1), 0, 1).
ImagePlanar correct(const ImagePlanar& img, const TransmissionMap& t,
                    double eps1 = 0.1);

}  // namespace itre
