// Generates the synthetic low-light regression corpus. Deterministic: fixed
// seeds, no platform-dependent RNG. Run once; the PNGs are committed under
// tests/data/regression/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "itre/image.hpp"
#include "itre/imageio.hpp"

using itre::GrayMap;
using itre::ImagePlanar;

namespace {

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int n) { return int(next() % std::uint64_t(n)); }
};

struct Color {
  double r, g, b;
};

Color hsv(double h, double s, double v) {
  h = h - std::floor(h);
  double x = h * 6.0;
  int sector = std::min(5, int(x));
  double f = x - sector;
  double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

std::vector<Color> make_palette(int n, Rng& rng, double sat = 0.7) {
  std::vector<Color> pal(n);
  for (int i = 0; i < n; ++i)
    pal[i] = hsv(double(i) / n + 0.03 * rng.uniform(), sat, 1.0);
  return pal;
}

// sum of random gaussian bumps rescaled into [lo, hi]
GrayMap smooth_field(int h, int w, Rng& rng, int blobs, double lo, double hi) {
  GrayMap f(h, w, 0.0);
  for (int k = 0; k < blobs; ++k) {
    double cx = rng.range(0, w), cy = rng.range(0, h);
    double sx = rng.range(w * 0.15, w * 0.5), sy = rng.range(h * 0.15, h * 0.5);
    double amp = rng.range(0.3, 1.0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double dx = (x - cx) / sx, dy = (y - cy) / sy;
        f.at(y, x) += amp * std::exp(-0.5 * (dx * dx + dy * dy));
      }
  }
  double mn = f.data[0], mx = f.data[0];
  for (double v : f.data) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  double span = mx > mn ? mx - mn : 1.0;
  for (double& v : f.data) v = lo + (hi - lo) * (v - mn) / span;
  return f;
}

// bilinear-interpolated coarse random grid in [0, amp]
GrayMap value_noise(int h, int w, Rng& rng, int cells, double amp) {
  int gh = cells + 1, gw = cells + 1;
  std::vector<double> grid(std::size_t(gh) * gw);
  for (double& v : grid) v = rng.uniform();
  GrayMap f(h, w);
  for (int y = 0; y < h; ++y) {
    double gy = double(y) / h * cells;
    int y0 = int(gy);
    double fy = gy - y0;
    for (int x = 0; x < w; ++x) {
      double gx = double(x) / w * cells;
      int x0 = int(gx);
      double fx = gx - x0;
      double a = grid[std::size_t(y0) * gw + x0];
      double b = grid[std::size_t(y0) * gw + x0 + 1];
      double c = grid[std::size_t(y0 + 1) * gw + x0];
      double d = grid[std::size_t(y0 + 1) * gw + x0 + 1];
      f.at(y, x) = amp * ((a * (1 - fx) + b * fx) * (1 - fy) +
                          (c * (1 - fx) + d * fx) * fy);
    }
  }
  return f;
}

void add_noise(ImagePlanar& img, Rng& rng, double amp) {
  for (double& v : img.data)
    v = std::clamp(v + rng.range(-amp, amp), 0.0, 1.0);
}

// overwrites blobby regions with a near-uniform dark color; such regions
// cluster onto their own dark maxima and stay put under enhancement, giving
// the metric blocks stable minima
void carve_shadows(ImagePlanar& img, Rng& rng, int cells, double coverage,
                   Color color, double level, double jitter) {
  GrayMap mask = value_noise(img.height, img.width, rng, cells, 1.0);
  std::vector<double> sorted = mask.data;
  std::sort(sorted.begin(), sorted.end());
  double thresh = sorted[std::size_t(coverage * double(sorted.size() - 1))];
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      if (mask.at(y, x) > thresh) continue;
      double l = level * (1.0 + rng.range(-jitter, jitter));
      img.at(0, y, x) = std::clamp(color.r * l, 0.0, 1.0);
      img.at(1, y, x) = std::clamp(color.g * l, 0.0, 1.0);
      img.at(2, y, x) = std::clamp(color.b * l, 0.0, 1.0);
    }
}

// exact-zero pixels survive the Retinex division untouched, like the dead
// black level of a night exposure; they pin every metric block's minimum
void add_black_speckles(ImagePlanar& img, Rng& rng, int count) {
  for (int k = 0; k < count; ++k) {
    int y = rng.integer(img.height), x = rng.integer(img.width);
    for (int c = 0; c < 3; ++c) {
      img.at(c, y, x) = 0.0;
      if (x + 1 < img.width) img.at(c, y, x + 1) = 0.0;
    }
  }
}

void set_pixel(ImagePlanar& img, int y, int x, const Color& c, double scale) {
  img.at(0, y, x) = std::clamp(c.r * scale, 0.0, 1.0);
  img.at(1, y, x) = std::clamp(c.g * scale, 0.0, 1.0);
  img.at(2, y, x) = std::clamp(c.b * scale, 0.0, 1.0);
}

// base colors modulated by an illumination field; every color gets a few
// near-full-brightness anchor pixels so clusters have spread radii
ImagePlanar scene_from_colormap(const std::vector<int>& label_of_pixel,
                                const std::vector<Color>& palette,
                                const GrayMap& illum, Rng& rng,
                                double anchor_level = 0.95, int anchors = 3) {
  int h = illum.height, w = illum.width;
  ImagePlanar img(h, w, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      set_pixel(img, y, x, palette[label_of_pixel[std::size_t(y) * w + x]],
                illum.at(y, x));
  for (std::size_t ci = 0; ci < palette.size(); ++ci)
    for (int k = 0; k < anchors; ++k) {
      int y = rng.integer(h), x = rng.integer(w);
      set_pixel(img, y, x, palette[label_of_pixel[std::size_t(y) * w + x]],
                anchor_level);
    }
  return img;
}

std::vector<int> voronoi_labels(int h, int w, int sites, int colors, Rng& rng) {
  std::vector<double> sx(sites), sy(sites);
  std::vector<int> sc(sites);
  for (int i = 0; i < sites; ++i) {
    sx[i] = rng.range(0, w);
    sy[i] = rng.range(0, h);
    sc[i] = rng.integer(colors);
  }
  std::vector<int> labels(std::size_t(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int best = 0;
      double bd = 1e30;
      for (int i = 0; i < sites; ++i) {
        double d = (x - sx[i]) * (x - sx[i]) + (y - sy[i]) * (y - sy[i]);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      labels[std::size_t(y) * w + x] = sc[best];
    }
  return labels;
}

std::vector<int> tile_labels(int h, int w, int tile, int colors, Rng& rng) {
  int ty = (h + tile - 1) / tile, tx = (w + tile - 1) / tile;
  std::vector<int> tc(std::size_t(ty) * tx);
  for (int& c : tc) c = rng.integer(colors);
  std::vector<int> labels(std::size_t(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      labels[std::size_t(y) * w + x] = tc[std::size_t(y / tile) * tx + x / tile];
  return labels;
}

ImagePlanar make_patches(Rng rng) {
  int h = 256, w = 256;
  auto pal = make_palette(10, rng);
  auto labels = voronoi_labels(h, w, 48, 10, rng);
  auto illum = smooth_field(h, w, rng, 5, 0.045, 0.24);
  auto img = scene_from_colormap(labels, pal, illum, rng, 0.93);
  carve_shadows(img, rng, 6, 0.30, {0.30, 0.35, 0.45}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_night_sky(Rng rng) {
  int h = 256, w = 256;
  ImagePlanar img(h, w, 3);
  int horizon = 150;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (y < horizon) {
        double t = double(y) / horizon;
        set_pixel(img, y, x, {0.25, 0.35, 0.9}, 0.030 + 0.014 * t);
      } else {
        double t = double(y - horizon) / (h - horizon);
        set_pixel(img, y, x, {0.8, 0.6, 0.35}, 0.05 + 0.13 * t);
      }
    }
  for (int k = 0; k < 26; ++k) {  // scattered lights, cool
    int y = horizon - 12 + rng.integer(h - horizon);
    int x = rng.integer(w);
    double level = rng.range(0.75, 0.98);
    set_pixel(img, std::clamp(y, 0, h - 1), x, {0.45, 0.85, 1.0}, level);
  }
  // dim warm panels on the ground, sharing hue families with bright anchors
  for (int k = 0; k < 20; ++k) {
    int py = horizon + rng.integer(h - horizon - 14), px = rng.integer(w - 12);
    int ph = 5 + rng.integer(8), pw = 5 + rng.integer(8);
    double level = rng.range(0.05, 0.12);
    Color c = hsv(0.02 + 0.12 * rng.uniform(), 0.75, 1.0);
    for (int y = py; y < py + ph; ++y)
      for (int x = px; x < px + pw; ++x) set_pixel(img, y, x, c, level);
  }
  {
    Rng sub(rng.next());
    carve_shadows(img, sub, 6, 0.24, {0.30, 0.33, 0.42}, 0.045, 0.08);
  }
  for (int k = 0; k < 40; ++k)  // stars
    set_pixel(img, rng.integer(horizon), rng.integer(w), {0.9, 0.92, 1.0},
              rng.range(0.3, 0.8));
  add_noise(img, rng, 0.004);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_texture(Rng rng) {
  int h = 256, w = 256;
  ImagePlanar img(h, w, 3);
  auto tex = value_noise(h, w, rng, 24, 1.0);
  auto illum = smooth_field(h, w, rng, 4, 0.05, 0.22);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double v = illum.at(y, x) * (0.6 + 0.4 * tex.at(y, x));
      set_pixel(img, y, x, {0.95, 0.8, 0.6}, v);
    }
  for (int k = 0; k < 12; ++k)
    set_pixel(img, rng.integer(h), rng.integer(w), {0.95, 0.8, 0.6},
              rng.range(0.8, 0.95));
  carve_shadows(img, rng, 6, 0.30, {0.32, 0.34, 0.40}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_blobs(Rng rng) {
  int h = 256, w = 256;
  auto pal = make_palette(7, rng, 0.8);
  ImagePlanar img(h, w, 3);
  std::vector<int> labels(std::size_t(h) * w, 0);
  for (int k = 1; k < 7; ++k) {
    double cx = rng.range(30, w - 30), cy = rng.range(30, h - 30);
    double rx = rng.range(15, 45), ry = rng.range(15, 45);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double dx = (x - cx) / rx, dy = (y - cy) / ry;
        if (dx * dx + dy * dy < 1.0) labels[std::size_t(y) * w + x] = k;
      }
  }
  auto illum = smooth_field(h, w, rng, 6, 0.045, 0.22);
  img = scene_from_colormap(labels, pal, illum, rng, 0.93);
  carve_shadows(img, rng, 6, 0.28, {0.28, 0.33, 0.44}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_blocks(Rng rng) {
  int h = 256, w = 256;
  auto pal = make_palette(8, rng, 0.6);
  auto labels = tile_labels(h, w, 12, 8, rng);
  auto illum = smooth_field(h, w, rng, 3, 0.05, 0.20);
  auto tex = value_noise(h, w, rng, 32, 0.25);
  for (std::size_t i = 0; i < illum.data.size(); ++i)
    illum.data[i] *= (0.85 + tex.data[i]);
  auto img = scene_from_colormap(labels, pal, illum, rng, 0.93);
  carve_shadows(img, rng, 6, 0.30, {0.30, 0.32, 0.42}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_indoor(Rng rng) {
  int h = 256, w = 256;
  auto pal = make_palette(6, rng, 0.45);
  auto labels = voronoi_labels(h, w, 70, 6, rng);
  auto illum = smooth_field(h, w, rng, 5, 0.05, 0.26);
  auto img = scene_from_colormap(labels, pal, illum, rng, 0.93);
  // warm cast
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    img.plane(1)[i] *= 0.92;
    img.plane(2)[i] *= 0.80;
  }
  carve_shadows(img, rng, 6, 0.30, {0.42, 0.36, 0.30}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_vignette(Rng rng) {
  int h = 256, w = 256;
  ImagePlanar img(h, w, 3);
  double cx = w / 2.0, cy = h / 2.0;
  double rmax = std::sqrt(cx * cx + cy * cy);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double r = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy)) / rmax;
      double hdeg = std::atan2(y - cy, x - cx) / (2 * 3.14159265358979) + 0.5;
      Color c = hsv(hdeg, 0.65, 1.0);
      set_pixel(img, y, x, c, 0.045 + 0.30 * (1.0 - r) * (1.0 - r));
    }
  for (int k = 0; k < 90; ++k) {  // bright sparkles anchor each hue
    int y = rng.integer(h), x = rng.integer(w);
    double hdeg = std::atan2(y - cy, x - cx) / (2 * 3.14159265358979) + 0.5;
    set_pixel(img, y, x, hsv(hdeg, 0.65, 1.0), rng.range(0.8, 0.95));
  }
  carve_shadows(img, rng, 6, 0.30, {0.33, 0.33, 0.42}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_market(Rng rng) {
  int h = 256, w = 256;
  auto pal = make_palette(16, rng, 0.85);
  auto labels = tile_labels(h, w, 14, 16, rng);
  auto illum = smooth_field(h, w, rng, 6, 0.05, 0.28);
  auto img = scene_from_colormap(labels, pal, illum, rng, 0.92, 2);
  carve_shadows(img, rng, 6, 0.26, {0.30, 0.35, 0.45}, 0.045, 0.08);
  add_noise(img, rng, 0.005);
  add_black_speckles(img, rng, 1400);
  return img;
}

ImagePlanar make_sparse_lights(Rng rng) {
  int h = 224, w = 256;
  ImagePlanar img(h, w, 3);
  auto base = value_noise(h, w, rng, 16, 1.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      set_pixel(img, y, x, {0.5, 0.55, 0.7}, 0.034 + 0.008 * base.at(y, x));
  // dim colored panels, each anchored by a bright light of its own color
  auto pal = make_palette(5, rng, 0.9);
  for (int k = 0; k < 34; ++k) {
    int py = rng.integer(h - 16), px = rng.integer(w - 16);
    int ph = 6 + rng.integer(10), pw = 6 + rng.integer(10);
    int color = rng.integer(5);
    double level = rng.range(0.05, 0.12);
    for (int y = py; y < py + ph; ++y)
      for (int x = px; x < px + pw; ++x) set_pixel(img, y, x, pal[color], level);
  }
  for (int k = 0; k < 20; ++k) {
    int y = rng.integer(h), x = rng.integer(w);
    set_pixel(img, y, x, pal[rng.integer(5)], rng.range(0.7, 0.95));
  }
  add_noise(img, rng, 0.004);
  add_black_speckles(img, rng, 1200);
  return img;
}

ImagePlanar make_bluish(Rng rng) {
  int h = 256, w = 192;
  auto pal = make_palette(9, rng, 0.55);
  auto labels = voronoi_labels(h, w, 80, 9, rng);
  auto illum = smooth_field(h, w, rng, 5, 0.05, 0.20);
  auto img = scene_from_colormap(labels, pal, illum, rng);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    img.plane(0)[i] *= 0.85;
    img.plane(2)[i] = std::min(1.0, img.plane(2)[i] * 1.1);
  }
  carve_shadows(img, rng, 6, 0.30, {0.30, 0.36, 0.48}, 0.045, 0.08);
  add_noise(img, rng, 0.006);
  add_black_speckles(img, rng, 1100);
  return img;
}

// near-uniform dark: every pixel almost the same color and level, so the
// per-cluster radius spread collapses and the plain estimate degenerates
ImagePlanar make_rg_uniform(Rng rng) {
  int h = 96, w = 96;
  ImagePlanar img(h, w, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double j = rng.range(-0.002, 0.002);
      img.at(0, y, x) = std::clamp(0.050 + j, 0.0, 1.0);
      img.at(1, y, x) = std::clamp(0.052 + j, 0.0, 1.0);
      img.at(2, y, x) = std::clamp(0.048 + j, 0.0, 1.0);
    }
  return img;
}

// color-diverse with bright anchors everywhere: every window holds a
// full-value color, so the guard's rough illumination map matches the
// ratio map's distribution and the guard is a near no-op
ImagePlanar make_rg_diverse(Rng rng) {
  int h = 128, w = 128;
  // equal-norm colors with unit value channel, so the ratio map and the
  // window-max illumination proxy share one distribution up to scale
  std::vector<Color> pal = {{1, 0.42, 0}, {1, 0, 0.42}, {0.42, 1, 0},
                            {0, 1, 0.42}, {0.42, 0, 1}, {0, 0.42, 1}};
  int n = int(pal.size());
  auto labels = tile_labels(h, w, 10, n, rng);
  GrayMap illum(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      illum.at(y, x) = 0.35 + 0.60 * (0.5 * double(x) / w + 0.5 * double(y) / h);
  auto img = scene_from_colormap(labels, pal, illum, rng, 0.95, 4);
  add_noise(img, rng, 0.004);
  return img;
}

void write(const ImagePlanar& img, const std::string& dir,
           const std::string& name) {
  std::string path = dir + "/" + name;
  itre::save_png(img, path);
  std::printf("wrote %s (%dx%d)\n", path.c_str(), img.width, img.height);
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "tests/data/regression";
  std::filesystem::create_directories(dir);

  write(make_patches(Rng(101)), dir, "img_01_patches.png");
  write(make_night_sky(Rng(202)), dir, "img_02_night_sky.png");
  write(make_texture(Rng(303)), dir, "img_03_texture.png");
  write(make_blobs(Rng(404)), dir, "img_04_blobs.png");
  write(make_blocks(Rng(505)), dir, "img_05_blocks.png");
  write(make_indoor(Rng(606)), dir, "img_06_indoor.png");
  write(make_vignette(Rng(707)), dir, "img_07_vignette.png");
  write(make_market(Rng(808)), dir, "img_08_market.png");
  write(make_sparse_lights(Rng(909)), dir, "img_09_sparse_lights.png");
  write(make_bluish(Rng(1010)), dir, "img_10_bluish.png");
  write(make_rg_uniform(Rng(1111)), dir, "rg_uniform.png");
  write(make_rg_diverse(Rng(1212)), dir, "rg_diverse.png");
  return 0;
}
