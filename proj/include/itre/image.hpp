#pragma once

#include <cstddef>
#include <vector>

namespace itre {

// Single-channel map, row-major doubles.
struct GrayMap {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  GrayMap() = default;
  GrayMap(int h, int w, double fill = 0.0)
      : height(h), width(w), data(std::size_t(h) * std::size_t(w), fill) {}

  double& at(int y, int x) { return data[std::size_t(y) * width + x]; }
  double at(int y, int x) const { return data[std::size_t(y) * width + x]; }
  std::size_t pixel_count() const { return data.size(); }
  bool same_size(const GrayMap& o) const {
    return height == o.height && width == o.width;
  }
};

// H x W x C image, plane-major (channel, then row-major plane), values in [0,1].
struct ImagePlanar {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  ImagePlanar() = default;
  ImagePlanar(int h, int w, int c, double fill = 0.0)
      : height(h),
        width(w),
        channels(c),
        data(std::size_t(h) * std::size_t(w) * std::size_t(c), fill) {}

  std::size_t plane_size() const { return std::size_t(height) * width; }
  double* plane(int c) { return data.data() + std::size_t(c) * plane_size(); }
  const double* plane(int c) const {
    return data.data() + std::size_t(c) * plane_size();
  }
  double& at(int c, int y, int x) {
    return data[std::size_t(c) * plane_size() + std::size_t(y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[std::size_t(c) * plane_size() + std::size_t(y) * width + x];
  }
  GrayMap extract_channel(int c) const;
};

// Domain aliases; a transmission map carries values in (0,1].
using TransmissionMap = GrayMap;
using LambdaMap = GrayMap;

inline constexpr double kTransmissionFloor = 0.01;

bool all_finite(const GrayMap& g);
bool all_finite(const ImagePlanar& img);
bool in_unit_range(const ImagePlanar& img);

// Pipeline-entry contract: 3 channels, >= 8x8, finite samples in [0,1].
void validate_input_image(const ImagePlanar& img);

// (g - min) / (max - min); a constant map goes to all zeros.
GrayMap minmax_normalize(const GrayMap& g);

}  // namespace itre
