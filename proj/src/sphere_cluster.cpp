#include "itre/sphere_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "itre/errors.hpp"
#include "itre/kernels.hpp"

namespace itre {

namespace {

inline double dist2(const Vec3& a, const Vec3& b) {
  double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

inline Vec3 normalized(const Vec3& v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

constexpr int kLeafSize = 8;

std::vector<Vec3> fibonacci_sphere(int n) {
  // golden-angle spiral; covers the full sphere (unused octants simply
  // receive no pixels)
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts(n);
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double theta = golden_angle * i;
    pts[i] = normalized({r * std::cos(theta), r * std::sin(theta), z});
  }
  return pts;
}

}  // namespace

KdTree3::KdTree3(const std::vector<Vec3>& points) : pts_(points) {
  if (pts_.empty()) return;
  order_.resize(pts_.size());
  for (std::size_t i = 0; i < pts_.size(); ++i) order_[i] = int(i);
  root_ = build(order_, 0, int(order_.size()));
}

int KdTree3::build(std::vector<int>& idx, int begin, int end) {
  Node node;
  int self = int(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) {
    nodes_[self].begin = begin;
    nodes_[self].end = end;
    return self;
  }
  // split the axis of largest spread at its median
  double lo[3] = {pts_[idx[begin]][0], pts_[idx[begin]][1], pts_[idx[begin]][2]};
  double hi[3] = {lo[0], lo[1], lo[2]};
  for (int i = begin + 1; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], pts_[idx[i]][a]);
      hi[a] = std::max(hi[a], pts_[idx[i]][a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  int mid = begin + (end - begin) / 2;
  std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end,
                   [&](int a, int b) { return pts_[a][axis] < pts_[b][axis]; });
  nodes_[self].axis = axis;
  nodes_[self].split = pts_[idx[mid]][axis];
  int left = build(idx, begin, mid);
  int right = build(idx, mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree3::search(int node, const Vec3& q, Best& best) const {
  const Node& nd = nodes_[node];
  if (nd.axis < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      int p = order_[i];
      double d2 = dist2(q, pts_[p]);
      if (d2 < best.d2 || (d2 == best.d2 && p < best.idx)) {
        best.d2 = d2;
        best.idx = p;
      }
    }
    return;
  }
  double diff = q[nd.axis] - nd.split;
  int near = diff < 0.0 ? nd.left : nd.right;
  int far = diff < 0.0 ? nd.right : nd.left;
  search(near, q, best);
  // <= so equal-distance candidates across the plane stay reachable and the
  // lowest-index tie rule holds exactly
  if (diff * diff <= best.d2) search(far, q, best);
}

int KdTree3::nearest(const Vec3& query) const {
  Best best{std::numeric_limits<double>::infinity(),
            std::numeric_limits<int>::max()};
  search(root_, query, best);
  return best.idx;
}

SphereCodebook build_codebook(int n) {
  if (n < 16) throw UsageError("codebook size must be at least 16");
  SphereCodebook cb;
  cb.centers = fibonacci_sphere(n);
  cb.index = KdTree3(cb.centers);
  return cb;
}

SphereCodebook build_codebook_kmeans(const ImagePlanar& img, int n) {
  if (n < 16) throw UsageError("codebook size must be at least 16");
  if (img.channels != 3) throw UsageError("kmeans codebook needs a 3-channel image");

  std::vector<Vec3> dirs;
  dirs.reserve(img.plane_size());
  const double* rp = img.plane(0);
  const double* gp = img.plane(1);
  const double* bp = img.plane(2);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    Vec3 v{rp[i], gp[i], bp[i]};
    double norm = pixel_radius(v);
    if (norm > 0.0) dirs.push_back({v[0] / norm, v[1] / norm, v[2] / norm});
  }

  std::vector<Vec3> centers = fibonacci_sphere(n);
  if (!dirs.empty()) {
    const int kIterations = 10;
    for (int it = 0; it < kIterations; ++it) {
      KdTree3 tree(centers);
      std::vector<Vec3> sums(n, Vec3{0, 0, 0});
      std::vector<long long> counts(n, 0);
      for (const Vec3& d : dirs) {
        int j = tree.nearest(d);
        sums[j][0] += d[0];
        sums[j][1] += d[1];
        sums[j][2] += d[2];
        ++counts[j];
      }
      for (int j = 0; j < n; ++j) {
        if (counts[j] == 0) continue;  // empty cluster keeps its center
        double norm = pixel_radius(sums[j]);
        if (norm > 0.0) centers[j] = {sums[j][0] / norm, sums[j][1] / norm,
                                      sums[j][2] / norm};
      }
    }
  }

  SphereCodebook cb;
  cb.centers = std::move(centers);
  cb.index = KdTree3(cb.centers);
  return cb;
}

double pixel_radius(const Vec3& rgb) {
  return std::sqrt((rgb[0] * rgb[0] + rgb[1] * rgb[1]) + rgb[2] * rgb[2]);
}

ClusterAssignment assign_clusters(const ImagePlanar& img,
                                  const SphereCodebook& codebook) {
  if (img.channels != 3) throw UsageError("assign_clusters needs a 3-channel image");
  const int n = codebook.size();
  ClusterAssignment out;
  out.height = img.height;
  out.width = img.width;
  out.labels.resize(img.plane_size());
  out.radii = GrayMap(img.height, img.width);
  out.cluster_max_radius.assign(n, 0.0);
  out.cluster_count.assign(n, 0);

  kernels::active().rgb_radius(img.plane(0), img.plane(1), img.plane(2),
                               out.radii.data.data(), img.plane_size());

  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  const Vec3 neutral{inv_sqrt3, inv_sqrt3, inv_sqrt3};
  const double* rp = img.plane(0);
  const double* gp = img.plane(1);
  const double* bp = img.plane(2);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    double radius = out.radii.data[i];
    Vec3 dir = radius == 0.0
                   ? neutral
                   : Vec3{rp[i] / radius, gp[i] / radius, bp[i] / radius};
    int j = codebook.index.nearest(dir);
    out.labels[i] = j;
    ++out.cluster_count[j];
    if (radius > out.cluster_max_radius[j]) out.cluster_max_radius[j] = radius;
  }
  return out;
}

}  // namespace itre
