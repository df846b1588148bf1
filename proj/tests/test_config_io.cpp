#include <doctest.h>

#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "itre/config.hpp"
#include "itre/errors.hpp"
#include "itre/imageio.hpp"
#include "test_util.hpp"

using namespace itre;
using testutil::Rng;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "itre_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

bool same_file_bytes(const std::string& a, const std::string& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(fa)), {});
  std::string sb((std::istreambuf_iterator<char>(fb)), {});
  return !sa.empty() && sa == sb;
}

}  // namespace

TEST_CASE("config defaults match the shipped behavior") {
  EnhanceConfig cfg;
  CHECK(cfg.solver.alpha_exp == 0.25);
  CHECK(cfg.solver.eps == 0.001);
  CHECK(cfg.solver.eps1 == 0.1);
  CHECK(cfg.solver.lambda_g == 0.001);
  CHECK(cfg.solver.rho0 == 2.0);
  CHECK(cfg.solver.p == 1.5);
  CHECK(cfg.solver.max_iterations == 20);
  CHECK(cfg.wls.strength == 1.0);
  CHECK(cfg.wls.exponent == 1.2);
  CHECK(cfg.wls.guide_floor == 1e-4);
  CHECK(cfg.rg.mode == RgMode::off);
  CHECK(cfg.rg.neighborhood_radius == 7);
  CHECK(cfg.rg.auto_trigger_threshold == 0.7);
  CHECK(cfg.codebook_size == 1000);
  CHECK(cfg.codebook == CodebookKind::fibonacci);
  CHECK(cfg.output_format == "png");
}

TEST_CASE("config round trip reproduces every field") {
  EnhanceConfig cfg;
  cfg.solver.alpha_exp = 0.17;
  cfg.solver.rho0 = 3.25;
  cfg.solver.p = 1.75;
  cfg.solver.max_iterations = 33;
  cfg.solver.convergence_tol = 2.5e-4;
  cfg.solver.dual_sign_alternate = true;
  cfg.wls.strength = 0.8;
  cfg.wls.exponent = 1.9;
  cfg.wls.guide_floor = 3e-5;
  cfg.wls.solver_tolerance = 1e-7;
  cfg.wls.max_solver_iterations = 555;
  cfg.rg.mode = RgMode::automatic;
  cfg.rg.neighborhood_radius = 11;
  cfg.rg.radius_auto = false;
  cfg.rg.auto_trigger_threshold = 0.55;
  cfg.codebook_size = 444;
  cfg.codebook = CodebookKind::kmeans;
  cfg.dump_intermediates = true;

  auto path = (temp_dir() / "roundtrip.conf").string();
  save_config_file(cfg, path);
  EnhanceConfig back;
  load_config_file(back, path);

  CHECK(back.solver.alpha_exp == cfg.solver.alpha_exp);
  CHECK(back.solver.eps == cfg.solver.eps);
  CHECK(back.solver.eps1 == cfg.solver.eps1);
  CHECK(back.solver.lambda_g == cfg.solver.lambda_g);
  CHECK(back.solver.rho0 == cfg.solver.rho0);
  CHECK(back.solver.p == cfg.solver.p);
  CHECK(back.solver.max_iterations == cfg.solver.max_iterations);
  CHECK(back.solver.convergence_tol == cfg.solver.convergence_tol);
  CHECK(back.solver.dual_sign_alternate == cfg.solver.dual_sign_alternate);
  CHECK(back.wls.strength == cfg.wls.strength);
  CHECK(back.wls.exponent == cfg.wls.exponent);
  CHECK(back.wls.guide_floor == cfg.wls.guide_floor);
  CHECK(back.wls.solver_tolerance == cfg.wls.solver_tolerance);
  CHECK(back.wls.max_solver_iterations == cfg.wls.max_solver_iterations);
  CHECK(back.rg.mode == cfg.rg.mode);
  CHECK(back.rg.neighborhood_radius == cfg.rg.neighborhood_radius);
  CHECK(back.rg.radius_auto == cfg.rg.radius_auto);
  CHECK(back.rg.auto_trigger_threshold == cfg.rg.auto_trigger_threshold);
  CHECK(back.codebook_size == cfg.codebook_size);
  CHECK(back.codebook == cfg.codebook);
  CHECK(back.dump_intermediates == cfg.dump_intermediates);
  CHECK(back.output_format == cfg.output_format);
}

TEST_CASE("config layering: default, then file, then flag") {
  EnhanceConfig cfg;
  CHECK(cfg.solver.alpha_exp == 0.25);  // built-in

  auto path = (temp_dir() / "layered.conf").string();
  {
    std::ofstream f(path);
    f << "# comment line\n\nalpha_exp = 0.1\nclusters = 512\n";
  }
  load_config_file(cfg, path);
  CHECK(cfg.solver.alpha_exp == 0.1);  // file over default
  CHECK(cfg.codebook_size == 512);

  apply_config_entry(cfg, "alpha_exp", "0.05");  // flag over file
  CHECK(cfg.solver.alpha_exp == 0.05);
}

TEST_CASE("config rejects junk") {
  EnhanceConfig cfg;
  CHECK_THROWS_AS(apply_config_entry(cfg, "no_such_key", "1"), UsageError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "alpha_exp", "abc"), UsageError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "alpha_exp", "-1"), UsageError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "p", "0.5"), UsageError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "clusters", "4"), UsageError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "codebook", "magic"), UsageError);
  CHECK_THROWS_AS(load_config_file(cfg, "/nonexistent/path.conf"), IoError);

  auto path = (temp_dir() / "broken.conf").string();
  {
    std::ofstream f(path);
    f << "alpha_exp 0.1\n";  // missing '='
  }
  CHECK_THROWS_AS(load_config_file(cfg, path), UsageError);
}

TEST_CASE("png save/load round trip at 8-bit precision") {
  Rng rng(77);
  ImagePlanar img = testutil::random_image(20, 30, rng);
  auto path = (temp_dir() / "rt.png").string();
  save_png(img, path);
  ImagePlanar back = load_image(path);
  REQUIRE(back.height == 20);
  REQUIRE(back.width == 30);
  REQUIRE(back.channels == 3);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    double quantized = std::round(img.data[i] * 255.0) / 255.0;
    CHECK(back.data[i] == doctest::Approx(quantized).epsilon(1e-12));
  }

  // identical pixels give byte-identical files
  auto path2 = (temp_dir() / "rt2.png").string();
  save_png(img, path2);
  CHECK(same_file_bytes(path, path2));
}

TEST_CASE("pfm round trip and stats") {
  Rng rng(78);
  GrayMap g = testutil::random_gray(17, 23, rng, -1.0, 2.0);
  auto path = (temp_dir() / "map.pfm").string();
  write_pfm(g, path);
  GrayMap back = read_pfm(path);
  REQUIRE(back.height == 17);
  REQUIRE(back.width == 23);
  double max_err = 0.0, mean_in = 0.0, mean_out = 0.0;
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    max_err = std::max(max_err, std::fabs(back.data[i] - g.data[i]));
    mean_in += g.data[i];
    mean_out += back.data[i];
  }
  CHECK(max_err < 1e-6);  // float32 rounding
  CHECK(mean_out / double(g.data.size()) ==
        doctest::Approx(mean_in / double(g.data.size())).epsilon(1e-6));
}

TEST_CASE("16-bit png reads divide by 65535") {
  auto path = (temp_dir() / "deep.png").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, f);
    png_set_IHDR(png, info, 4, 2, 16, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    // big-endian samples, row-major; pixel (y, x) has r = (y*4+x)*4369
    std::vector<unsigned char> row(4 * 3 * 2);
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 4; ++x) {
        unsigned r = unsigned((y * 4 + x) * 4369);
        unsigned g = 65535 - r;
        unsigned b = 32768;
        unsigned vals[3] = {r, g, b};
        for (int c = 0; c < 3; ++c) {
          row[(x * 3 + c) * 2] = (unsigned char)(vals[c] >> 8);
          row[(x * 3 + c) * 2 + 1] = (unsigned char)(vals[c] & 0xFF);
        }
      }
      png_bytep rp = row.data();
      png_write_row(png, rp);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
  }
  ImagePlanar img = load_image(path);
  REQUIRE(img.height == 2);
  REQUIRE(img.width == 4);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) {
      double r = (y * 4 + x) * 4369 / 65535.0;
      CHECK(img.at(0, y, x) == doctest::Approx(r).epsilon(1e-12));
      CHECK(img.at(1, y, x) == doctest::Approx(1.0 - r).epsilon(1e-12));
      CHECK(img.at(2, y, x) == doctest::Approx(32768 / 65535.0).epsilon(1e-12));
    }
}

TEST_CASE("corrupt and unsupported files raise IoError") {
  auto dir = temp_dir();
  auto bogus = (dir / "bogus.png").string();
  {
    std::ofstream f(bogus, std::ios::binary);
    f << "this is not a png at all";
  }
  CHECK_THROWS_AS(load_image(bogus), IoError);

  auto truncated = (dir / "trunc.png").string();
  {
    Rng rng(79);
    ImagePlanar img = testutil::random_image(16, 16, rng);
    auto good = (dir / "good.png").string();
    save_png(img, good);
    std::ifstream in(good, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    std::ofstream out(truncated, std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size() / 2));
  }
  CHECK_THROWS_AS(load_image(truncated), IoError);
  CHECK_THROWS_AS(load_image("/nonexistent/nope.png"), IoError);
}
