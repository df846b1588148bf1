#pragma once

#include "itre/image.hpp"
#include "itre/sphere_cluster.hpp"
#include "itre/wls.hpp"

namespace itre {

inline constexpr double kItrDivEps = 1e-6;

// Broadcasts each cluster's max radius to its member pixels.
GrayMap cluster_max_map(const ClusterAssignment& assign);

// Per-pixel ratio radius / refined_max, clamped into [kTransmissionFloor, 1].
// refined_max is expected to be the WLS-smoothed cluster max map; passing the
// raw map gives the pre-smoothing ratio (<= 1 by construction).
TransmissionMap initial_itr(const ClusterAssignment& assign,
                            const GrayMap& refined_max);

// Full initial-transmission estimate: cluster, take per-cluster maxima,
// smooth them against the image luma, form the ratio.
TransmissionMap estimate_itr(const ImagePlanar& img,
                             const SphereCodebook& codebook,
                             const WlsParams& wls);

}  // namespace itre
