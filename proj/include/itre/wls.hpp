#pragma once

#include "itre/image.hpp"

namespace itre {

struct WlsParams {
  double strength = 1.0;      // smoothing weight on the guided Laplacian
  double exponent = 1.2;      // sensitivity to guide gradients
  double guide_floor = 1e-4;  // floor inside the log and the weight denominator
  double solver_tolerance = 1e-6;
  int max_solver_iterations = 2000;
};

// Forward-difference edge weights w = (|d log(guide + eps)|^alpha + eps)^-1,
// Neumann boundary. wx is H x (W-1) data stored in an H x W map (last column
// unused), wy likewise for rows. Exposed so tests can assemble the operator.
struct WlsWeights {
  GrayMap wx, wy;
};
WlsWeights wls_edge_weights(const GrayMap& guide, const WlsParams& params);

// Solves (I + strength * L_guide) u = input with Jacobi-preconditioned CG to
// |r|/|input| <= solver_tolerance. Throws NumericError on non-convergence.
GrayMap wls_smooth(const GrayMap& input, const GrayMap& guide,
                   const WlsParams& params);

}  // namespace itre
