#pragma once

#include <array>
#include <vector>

#include "itre/image.hpp"

namespace itre {

using Vec3 = std::array<double, 3>;

// Exact nearest-neighbor search over a fixed set of 3D points.
// Ties on distance resolve to the smallest point index, matching a
// lowest-index-wins linear scan exactly.
class KdTree3 {
 public:
  KdTree3() = default;
  explicit KdTree3(const std::vector<Vec3>& points);

  // Index of the nearest point (squared Euclidean metric).
  int nearest(const Vec3& query) const;
  bool empty() const { return nodes_.empty(); }

 private:
  struct Node {
    double split = 0.0;
    int axis = -1;        // -1 marks a leaf
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
  };
  struct Best {
    double d2;
    int idx;
  };

  int build(std::vector<int>& idx, int begin, int end);
  void search(int node, const Vec3& q, Best& best) const;

  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Vec3> pts_;
  int root_ = -1;
};

// Fixed set of unit RGB directions with a spatial index.
struct SphereCodebook {
  std::vector<Vec3> centers;  // unit norm
  KdTree3 index;

  int size() const { return int(centers.size()); }
};

enum class CodebookKind { fibonacci, kmeans };

// Fibonacci-sphere tessellation of n unit directions, n >= 16.
SphereCodebook build_codebook(int n);

// Lloyd's algorithm on the image's pixel directions (10 iterations,
// deterministic Fibonacci initialization).
SphereCodebook build_codebook_kmeans(const ImagePlanar& img, int n);

// Euclidean norm of an RGB triple, the per-pixel illumination proxy.
double pixel_radius(const Vec3& rgb);

// Per-pixel cluster labels plus per-cluster radius statistics.
struct ClusterAssignment {
  int height = 0, width = 0;
  std::vector<int> labels;               // nearest center index per pixel
  GrayMap radii;                         // RGB norm per pixel, in [0, sqrt(3)]
  std::vector<double> cluster_max_radius;  // length N
  std::vector<long long> cluster_count;    // length N

  int label(int y, int x) const { return labels[std::size_t(y) * width + x]; }
};

// Nearest-center assignment of every pixel's RGB direction. Zero pixels have
// no direction and take the center nearest (1,1,1)/sqrt(3).
ClusterAssignment assign_clusters(const ImagePlanar& img,
                                  const SphereCodebook& codebook);

}  // namespace itre
