#include "itre/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "itre/color.hpp"
#include "itre/errors.hpp"

namespace itre {

namespace {

inline int quantize8(double v) {
  long q = std::lround(v * 255.0);
  return int(std::clamp(q, 0L, 255L));
}

}  // namespace

double eme(const GrayMap& g, int blocks_h, int blocks_v) {
  if (blocks_h < 1 || blocks_v < 1)
    throw UsageError("eme: block grid must be positive");
  if (g.height < blocks_v || g.width < blocks_h)
    throw UsageError("eme: image smaller than the block grid");

  const int bh = g.height / blocks_v;
  const int bw = g.width / blocks_h;
  double total = 0.0;
  for (int by = 0; by < blocks_v; ++by) {
    int y0 = by * bh;
    int y1 = (by == blocks_v - 1) ? g.height : y0 + bh;
    for (int bx = 0; bx < blocks_h; ++bx) {
      int x0 = bx * bw;
      int x1 = (bx == blocks_h - 1) ? g.width : x0 + bw;
      int mn = 255, mx = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          int q = quantize8(g.at(y, x));
          mn = std::min(mn, q);
          mx = std::max(mx, q);
        }
      }
      total += 20.0 * std::log10(double(mx + 1) / double(mn + 1));
    }
  }
  return total / (double(blocks_h) * double(blocks_v));
}

double de(const GrayMap& g) {
  long long hist[256] = {0};
  for (double v : g.data) ++hist[quantize8(v)];
  const double n = double(g.data.size());
  double entropy = 0.0;
  for (long long c : hist) {
    if (c == 0) continue;  // 0*log 0 := 0
    double p = double(c) / n;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

MetricReport compute_metrics(const ImagePlanar& img, std::string image_id) {
  GrayMap gray = rgb_to_gray(img);
  MetricReport r;
  r.image_id = std::move(image_id);
  r.eme = eme(gray);
  r.de = de(gray);
  return r;
}

}  // namespace itre
