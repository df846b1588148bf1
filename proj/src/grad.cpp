#include "itre/grad.hpp"

#include "itre/kernels.hpp"

namespace itre {

std::pair<GrayMap, GrayMap> forward_gradients(const GrayMap& g) {
  const auto& k = kernels::active();
  GrayMap dh(g.height, g.width), dv(g.height, g.width);
  k.grad_h(g.data.data(), dh.data.data(), g.height, g.width);
  k.grad_v(g.data.data(), dv.data.data(), g.height, g.width);
  return {std::move(dh), std::move(dv)};
}

GrayMap divergence_h(const GrayMap& g) {
  GrayMap out(g.height, g.width);
  kernels::active().div_h(g.data.data(), out.data.data(), g.height, g.width);
  return out;
}

GrayMap divergence_v(const GrayMap& g) {
  GrayMap out(g.height, g.width);
  kernels::active().div_v(g.data.data(), out.data.data(), g.height, g.width);
  return out;
}

GrayMap gradient_magnitude(const GrayMap& g) {
  auto [dh, dv] = forward_gradients(g);
  GrayMap out(g.height, g.width);
  kernels::active().hypot_map(dh.data.data(), dv.data.data(), out.data.data(),
                              out.data.size());
  return out;
}

}  // namespace itre
