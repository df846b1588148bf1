#include "itre/itr.hpp"

#include <algorithm>

#include "itre/color.hpp"
#include "itre/errors.hpp"

namespace itre {

GrayMap cluster_max_map(const ClusterAssignment& assign) {
  GrayMap out(assign.height, assign.width);
  for (std::size_t i = 0; i < assign.labels.size(); ++i)
    out.data[i] = assign.cluster_max_radius[assign.labels[i]];
  return out;
}

TransmissionMap initial_itr(const ClusterAssignment& assign,
                            const GrayMap& refined_max) {
  if (refined_max.height != assign.height || refined_max.width != assign.width)
    throw UsageError("initial_itr: dimension mismatch");
  TransmissionMap t(assign.height, assign.width);
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    double ratio =
        assign.radii.data[i] / std::max(refined_max.data[i], kItrDivEps);
    t.data[i] = std::clamp(ratio, kTransmissionFloor, 1.0);
  }
  return t;
}

TransmissionMap estimate_itr(const ImagePlanar& img,
                             const SphereCodebook& codebook,
                             const WlsParams& wls) {
  ClusterAssignment assign = assign_clusters(img, codebook);
  GrayMap max_map = cluster_max_map(assign);
  GrayMap refined = wls_smooth(max_map, rgb_to_gray(img), wls);
  return initial_itr(assign, refined);
}

}  // namespace itre
