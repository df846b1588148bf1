#pragma once

#include <utility>

#include "itre/image.hpp"

namespace itre {

// Forward differences with periodic wrap, the same operator the FFT solver
// diagonalizes. Returns (horizontal, vertical).
std::pair<GrayMap, GrayMap> forward_gradients(const GrayMap& g);

// Adjoints of the periodic forward differences.
GrayMap divergence_h(const GrayMap& g);
GrayMap divergence_v(const GrayMap& g);

// sqrt(dh^2 + dv^2) of forward_gradients.
GrayMap gradient_magnitude(const GrayMap& g);

}  // namespace itre
