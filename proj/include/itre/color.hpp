#pragma once

#include "itre/image.hpp"

namespace itre {

// BT.601 luma, 0.299 r + 0.587 g + 0.114 b.
GrayMap rgb_to_gray(const ImagePlanar& img);

// Y plane of YUV; same BT.601 weights as rgb_to_gray.
GrayMap luma_yuv(const ImagePlanar& img);

// Hexcone HSV. Channel 0: h in [0,1), channel 1: s in [0,1], channel 2: v.
ImagePlanar rgb_to_hsv(const ImagePlanar& img);
ImagePlanar hsv_to_rgb(const ImagePlanar& hsv);

// Direct single-channel extracts (avoid a full HSV conversion).
GrayMap hsv_value(const ImagePlanar& img);       // max(r,g,b)
GrayMap hsv_saturation(const ImagePlanar& img);  // (v - min)/v, 0 for black

}  // namespace itre
