#pragma once

#include <string>

#include "itre/image.hpp"

namespace itre {

struct MetricReport {
  std::string image_id;
  double eme = 0.0;  // blockwise log max/min contrast, >= 0
  double de = 0.0;   // discrete entropy in bits, [0, 8]
};

// Measure of enhancement over a blocks_h x blocks_v grid of the 8-bit
// quantized map; trailing remainder pixels fold into the last block.
double eme(const GrayMap& g, int blocks_h = 8, int blocks_v = 8);

// Shannon entropy of the 8-bit histogram, base 2.
double de(const GrayMap& g);

// Both metrics on the image's BT.601 luma.
MetricReport compute_metrics(const ImagePlanar& img, std::string image_id);

}  // namespace itre
