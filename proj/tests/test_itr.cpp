#include <doctest.h>

#include <cmath>

#include "itre/color.hpp"
#include "itre/errors.hpp"
#include "itre/itr.hpp"
#include "test_util.hpp"

using namespace itre;
using testutil::Rng;

namespace {

// colorful scene where every occupied cluster's max radius is exactly 1:
// direction palette at full brightness anchors, everything else scaled down
ImagePlanar anchored_palette_image(int h, int w, Rng& rng) {
  ImagePlanar img(h, w, 3);
  const Vec3 palette[] = {
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1},
      {0, 1, 1}, {1, 0.5, 0.25}, {0.25, 1, 0.5}, {0.5, 0.25, 1}, {1, 1, 1},
  };
  const int np = 10;
  std::vector<int> pick(std::size_t(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int p = rng.integer(np);
      pick[std::size_t(y) * w + x] = p;
      double norm = pixel_radius(palette[p]);
      double b = rng.range(0.2, 1.0);
      img.at(0, y, x) = palette[p][0] / norm * b;
      img.at(1, y, x) = palette[p][1] / norm * b;
      img.at(2, y, x) = palette[p][2] / norm * b;
    }
  // one full-brightness anchor per palette entry
  for (int p = 0; p < np; ++p) {
    int y = p % h, x = (7 * p) % w;
    double norm = pixel_radius(palette[p]);
    img.at(0, y, x) = palette[p][0] / norm;
    img.at(1, y, x) = palette[p][1] / norm;
    img.at(2, y, x) = palette[p][2] / norm;
    pick[std::size_t(y) * w + x] = p;
  }
  return img;
}

}  // namespace

TEST_CASE("cluster_max_map broadcasts the per-cluster maximum") {
  SphereCodebook cb = build_codebook(64);

  ImagePlanar solid(8, 8, 3);
  for (std::size_t i = 0; i < solid.plane_size(); ++i) {
    solid.plane(0)[i] = 0.6;
    solid.plane(1)[i] = 0.0;
    solid.plane(2)[i] = 0.8;
  }
  ClusterAssignment a = assign_clusters(solid, cb);
  for (double v : cluster_max_map(a).data)
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  // two radii in one cluster: both pixels read the larger one
  ImagePlanar duo = solid;
  for (int c = 0; c < 3; ++c) duo.at(c, 0, 0) *= 0.5;
  ClusterAssignment b = assign_clusters(duo, cb);
  REQUIRE(b.label(0, 0) == b.label(0, 1));
  GrayMap m = cluster_max_map(b);
  CHECK(m.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(71);
  ImagePlanar img = testutil::random_image(32, 32, rng);
  ClusterAssignment c = assign_clusters(img, cb);
  GrayMap mm = cluster_max_map(c);
  // exhaustive per-cluster scan oracle
  std::vector<double> expect(cb.size(), 0.0);
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    expect[c.labels[i]] = std::max(expect[c.labels[i]], c.radii.data[i]);
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    CHECK(mm.data[i] == expect[c.labels[i]]);
}

TEST_CASE("initial_itr ratios and clamps") {
  SphereCodebook cb = build_codebook(64);
  ImagePlanar img(8, 8, 3);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    img.plane(0)[i] = 0.6;
    img.plane(2)[i] = 0.8;
  }
  for (int c = 0; c < 3; ++c) img.at(c, 0, 0) *= 0.5;  // radius 0.5 pixel
  ClusterAssignment a = assign_clusters(img, cb);
  GrayMap m = cluster_max_map(a);
  TransmissionMap t = initial_itr(a, m);
  CHECK(t.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.at(7, 7) == doctest::Approx(1.0).epsilon(1e-12));

  GrayMap bad(4, 4, 1.0);
  CHECK_THROWS_AS(initial_itr(a, bad), UsageError);
}

TEST_CASE("constant image estimates a unit transmission map") {
  SphereCodebook cb = build_codebook(100);
  ImagePlanar img(16, 16, 3, 0.42);
  TransmissionMap t = estimate_itr(img, cb, WlsParams{});
  for (double v : t.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pre-smoothing ratios never exceed one") {
  SphereCodebook cb = build_codebook(256);
  Rng rng(81);
  ImagePlanar img = testutil::random_image(32, 32, rng);
  ClusterAssignment a = assign_clusters(img, cb);
  GrayMap m = cluster_max_map(a);
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    double ratio = a.radii.data[i] / std::max(m.data[i], kItrDivEps);
    CHECK(ratio <= 1.0);  // exactly, no clamp needed
  }
}

TEST_CASE("dark and bright pixels of one cluster keep their radius ratio") {
  SphereCodebook cb = build_codebook(64);
  ImagePlanar img(8, 8, 3);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    img.plane(0)[i] = 0.6;
    img.plane(2)[i] = 0.8;
  }
  for (int c = 0; c < 3; ++c) img.at(c, 3, 3) *= 0.1;  // dark member, radius 0.1
  ClusterAssignment a = assign_clusters(img, cb);
  REQUIRE(a.label(3, 3) == a.label(0, 0));
  TransmissionMap t = initial_itr(a, cluster_max_map(a));
  CHECK(t.at(3, 3) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("itr map stays in [floor, 1]") {
  SphereCodebook cb = build_codebook(256);
  Rng rng(91);
  ImagePlanar img = testutil::random_image(24, 24, rng, 0.0, 0.6);
  TransmissionMap t = estimate_itr(img, cb, WlsParams{});
  for (double v : t.data) {
    CHECK(v >= kTransmissionFloor);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("itr is invariant under global dimming") {
  SphereCodebook cb = build_codebook(500);
  Rng rng(101);
  ImagePlanar base = anchored_palette_image(24, 24, rng);
  TransmissionMap t_base = estimate_itr(base, cb, WlsParams{});

  ImagePlanar dimmed = base;
  for (double& v : dimmed.data) v *= 0.5;
  TransmissionMap t_dim = estimate_itr(dimmed, cb, WlsParams{});

  for (std::size_t i = 0; i < t_base.data.size(); ++i)
    CHECK(t_dim.data[i] == doctest::Approx(t_base.data[i]).epsilon(1e-6));
}

TEST_CASE("noise-control: bounded gain, within-cluster gain tracks radii") {
  SphereCodebook cb = build_codebook(1000);
  Rng rng(111);
  // flat dark patch with additive noise
  ImagePlanar img(32, 32, 3);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    double base = 0.1;
    img.plane(0)[i] = base + rng.range(-0.01, 0.01);
    img.plane(1)[i] = base + rng.range(-0.01, 0.01);
    img.plane(2)[i] = base + rng.range(-0.01, 0.01);
  }
  ClusterAssignment a = assign_clusters(img, cb);
  TransmissionMap t = initial_itr(a, cluster_max_map(a));

  const double eps1 = 0.1;
  const double gain_cap = 1.0 / (kTransmissionFloor + eps1);
  for (double v : t.data) CHECK(1.0 / (v + eps1) <= gain_cap + 1e-12);

  // pick pairs within one cluster: gain ratio == inverse radius ratio +-5%
  int checked = 0;
  for (std::size_t i = 1; i < a.labels.size() && checked < 200; ++i) {
    if (a.labels[i] != a.labels[0]) continue;
    double gain_ratio = (t.data[0] + eps1) / (t.data[i] + eps1);
    double radius_ratio = a.radii.data[0] / a.radii.data[i];
    CHECK(gain_ratio / radius_ratio == doctest::Approx(1.0).epsilon(0.05));
    ++checked;
  }
  CHECK(checked > 0);
}
