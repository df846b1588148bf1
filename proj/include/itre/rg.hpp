#pragma once

#include "itre/image.hpp"
#include "itre/wls.hpp"

namespace itre {

enum class RgMode { off, on, automatic };

struct RgParams {
  RgMode mode = RgMode::off;
  int neighborhood_radius = 7;  // square window half-width, >= 1
  bool radius_auto = true;      // scale radius as max(7, min(H,W)/50)
  double auto_trigger_threshold = 0.7;
};

// Max over the (2r+1)x(2r+1) window, replicate border.
GrayMap neighborhood_max(const GrayMap& v, int radius);

// 256-bin monotone remap of source values so the output distribution tracks
// the reference's. Equal source values map equally.
GrayMap histogram_match(const GrayMap& source, const GrayMap& reference);

// Robust-Guard: rebuild the target from a smoothed neighborhood-max of the
// v-channel and histogram-match the ITR map to it. Identity when disabled
// (or when auto mode does not trigger).
TransmissionMap apply_rg(const TransmissionMap& itr, const ImagePlanar& img,
                         const WlsParams& wls, const RgParams& params);

// Effective window half-width for an image, honoring radius_auto.
int rg_effective_radius(const RgParams& params, int height, int width);

}  // namespace itre
