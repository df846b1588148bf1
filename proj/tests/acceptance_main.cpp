// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Needs the regression corpus directory and the CLI binary path.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "itre/admm.hpp"
#include "itre/color.hpp"
#include "itre/grad.hpp"
#include "itre/imageio.hpp"
#include "itre/itr.hpp"
#include "itre/kernels.hpp"
#include "itre/metrics.hpp"
#include "itre/pipeline.hpp"
#include "itre/rg.hpp"
#include "test_util.hpp"

using namespace itre;
using testutil::DenseMatrix;
using testutil::Rng;
namespace fs = std::filesystem;

namespace {

std::string g_corpus;
std::string g_itre_bin;
std::string g_workdir;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::vector<std::string> corpus_images() {
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(g_corpus)) {
    std::string name = e.path().filename().string();
    if (name.rfind("img_", 0) == 0 && e.path().extension() == ".png")
      files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double clamp_fraction(const ImagePlanar& img) {
  std::size_t n = 0;
  for (double v : img.data)
    if (v >= 0.99) ++n;
  return double(n) / double(img.data.size());
}

// ---- criterion 1: solver oracles ------------------------------------------

DenseMatrix dense_diff(int h, int w, bool horizontal) {
  const int n = h * w;
  DenseMatrix d(n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int i = y * w + x;
      int j = horizontal ? y * w + (x + 1) % w : ((y + 1) % h) * w + x;
      d.at(i, i) -= 1.0;
      d.at(i, j) += 1.0;
    }
  return d;
}

bool criterion1() {
  Timer timer;
  Rng rng(20240001);
  SolverConfig cfg;
  cfg.alpha_exp = 0.25;
  double worst_t = 0.0;

  const int shapes[][2] = {{8, 8}, {8, 16}, {16, 16}};
  for (auto [h, w] : shapes) {
    const int n = h * w;
    DenseMatrix dh = dense_diff(h, w, true);
    DenseMatrix dv = dense_diff(h, w, false);
    for (int trial = 0; trial < 20; ++trial) {
      SolverState st;
      st.t = testutil::random_gray(h, w, rng);
      st.qh = testutil::random_gray(h, w, rng, -0.5, 0.5);
      st.qv = testutil::random_gray(h, w, rng, -0.5, 0.5);
      st.yh = testutil::random_gray(h, w, rng, -0.5, 0.5);
      st.yv = testutil::random_gray(h, w, rng, -0.5, 0.5);
      st.e = testutil::random_gray(h, w, rng, 0.0, 0.3);
      st.rho = rng.range(0.5, 8.0);
      TransmissionMap target = testutil::random_gray(h, w, rng);

      TransmissionMap got = t_update(st, target, cfg);

      std::vector<double> rhs = target.data;
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          acc += dh.at(i, j) * (st.rho * st.qh.data[i] + st.yh.data[i]);
          acc += dv.at(i, j) * (st.rho * st.qv.data[i] + st.yv.data[i]);
        }
        rhs[j] += acc + st.e.data[j];
      }
      DenseMatrix m(n);
      for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i)
            acc += dh.at(i, j) * dh.at(i, k) + dv.at(i, j) * dv.at(i, k);
          m.at(j, k) += st.rho * acc;
        }
      auto expect = testutil::lu_solve(m, rhs);
      for (int i = 0; i < n; ++i)
        worst_t = std::max(worst_t, std::fabs(got.data[i] - expect[i]));
    }
  }

  // q_update against the grid-search prox oracle
  const auto& k = kernels::active();
  double worst_q = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double x = rng.range(-1.0, 1.0);
    double thresh = rng.range(0.0, 0.5);
    double rho = rng.range(0.5, 4.0);
    double grad = x, dual = 0.0, lam = thresh * rho, got;
    k.shrink_step(&grad, &dual, &lam, 1.0 / rho, &got, 1);
    double best_q = -2.0, best_val = 1e300;
    for (int i = 0; i <= 40000; ++i) {
      double q = -2.0 + i * 1e-4;
      double val = thresh * std::fabs(q) + 0.5 * (q - x) * (q - x);
      if (val < best_val) {
        best_val = val;
        best_q = q;
      }
    }
    worst_q = std::max(worst_q, std::fabs(got - best_q));
  }

  double secs = timer.seconds();
  bool ok = worst_t < 1e-6 && worst_q <= 1e-4 && secs < 10.0;
  std::printf(
      "%s criterion 1: solver oracles (t_update max err %.2e < 1e-6, "
      "q_update max err %.2e <= 1e-4, %.1f s < 10 s)\n",
      ok ? "PASS" : "FAIL", worst_t, worst_q, secs);
  return ok;
}

// ---- criterion 2: clustering oracle ----------------------------------------

bool criterion2() {
  SphereCodebook cb = build_codebook(256);
  Rng rng(20240002);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  long long mismatches = 0;
  for (int img_i = 0; img_i < 20; ++img_i) {
    ImagePlanar img = testutil::random_image(64, 64, rng);
    ClusterAssignment a = assign_clusters(img, cb);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        Vec3 rgb{img.at(0, y, x), img.at(1, y, x), img.at(2, y, x)};
        double r = pixel_radius(rgb);
        Vec3 dir = r == 0.0 ? Vec3{inv_sqrt3, inv_sqrt3, inv_sqrt3}
                            : Vec3{rgb[0] / r, rgb[1] / r, rgb[2] / r};
        int best = -1;
        double bd = 1e300;
        for (int j = 0; j < cb.size(); ++j) {
          double d0 = dir[0] - cb.centers[j][0];
          double d1 = dir[1] - cb.centers[j][1];
          double d2 = dir[2] - cb.centers[j][2];
          double d = d0 * d0 + d1 * d1 + d2 * d2;
          if (d < bd) {
            bd = d;
            best = j;
          }
        }
        if (a.label(y, x) != best) ++mismatches;
      }
  }
  bool ok = mismatches == 0;
  std::printf(
      "%s criterion 2: clustering equals exhaustive scan on 20 random 64x64 "
      "images, N=256 (%lld mismatches)\n",
      ok ? "PASS" : "FAIL", mismatches);
  return ok;
}

// ---- criterion 3: WLS oracle ------------------------------------------------

bool criterion3() {
  Rng rng(20240003);
  WlsParams p;
  double worst = 0.0;
  const int shapes[][2] = {{8, 8}, {12, 20}, {16, 16}, {24, 24}, {24, 8}};
  for (auto [h, w] : shapes) {
    GrayMap guide = testutil::random_gray(h, w, rng);
    GrayMap input = testutil::random_gray(h, w, rng);
    GrayMap got = wls_smooth(input, guide, p);

    const int n = h * w;
    WlsWeights wts = wls_edge_weights(guide, p);
    DenseMatrix m(n);
    auto idx = [&](int y, int x) { return y * w + x; };
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        int i = idx(y, x);
        m.at(i, i) = 1.0;
        auto couple = [&](int j, double wgt) {
          m.at(i, i) += p.strength * wgt;
          m.at(i, j) -= p.strength * wgt;
        };
        if (x > 0) couple(idx(y, x - 1), wts.wx.at(y, x - 1));
        if (x < w - 1) couple(idx(y, x + 1), wts.wx.at(y, x));
        if (y > 0) couple(idx(y - 1, x), wts.wy.at(y - 1, x));
        if (y < h - 1) couple(idx(y + 1, x), wts.wy.at(y, x));
      }
    auto expect = testutil::lu_solve(m, input.data);
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::fabs(got.data[i] - expect[i]));
  }

  double worst_const = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    GrayMap guide = testutil::random_gray(20, 20, rng);
    GrayMap input(20, 20, 0.2 + 0.3 * trial);
    GrayMap out = wls_smooth(input, guide, p);
    for (double v : out.data)
      worst_const = std::max(worst_const, std::fabs(v - input.data[0]));
  }

  bool ok = worst < 1e-5 && worst_const < 1e-8;
  std::printf(
      "%s criterion 3: WLS dense-solve oracle (max err %.2e < 1e-5, constant "
      "reproduction %.2e < 1e-8)\n",
      ok ? "PASS" : "FAIL", worst, worst_const);
  return ok;
}

// ---- criterion 4: ADMM feasibility -----------------------------------------

bool criterion4() {
  const auto& k = kernels::active();
  bool ok = true;
  double worst_ratio = 0.0, worst_secs = 0.0;
  for (const std::string& path : corpus_images()) {
    Timer timer;
    ImagePlanar img = load_image(path);
    SphereCodebook cb = build_codebook(1000);
    TransmissionMap target = estimate_itr(img, cb, WlsParams{});
    SolverConfig cfg;  // rho0=2, p=1.5, 20 iterations
    RefineResult r = refine_transmission_full(target, img, cfg);
    double secs = timer.seconds();

    auto [gh, gv] = forward_gradients(r.state.t);
    double num = std::sqrt(
        k.diff_sq_sum(r.state.qh.data.data(), gh.data.data(), gh.data.size()) +
        k.diff_sq_sum(r.state.qv.data.data(), gv.data.data(), gv.data.size()));
    double den = std::sqrt(k.sq_sum(gh.data.data(), gh.data.size()) +
                           k.sq_sum(gv.data.data(), gv.data.size()));
    double ratio = den > 0.0 ? num / den : 0.0;
    worst_ratio = std::max(worst_ratio, ratio);
    worst_secs = std::max(worst_secs, secs);
    if (!(ratio < 1e-2) || secs >= 5.0) ok = false;
  }
  std::printf(
      "%s criterion 4: ADMM feasibility |Q - grad T| (worst ratio %.2e < "
      "1e-2, worst %.2f s < 5 s per image)\n",
      ok ? "PASS" : "FAIL", worst_ratio, worst_secs);
  return ok;
}

// ---- criterion 5: exposure control ------------------------------------------

bool criterion5() {
  bool ok = true;
  for (const std::string& path : corpus_images()) {
    double prev_mean = 1e30;
    double clamp_at_0 = 0.0, clamp_at_03 = 0.0;
    for (double alpha : {0.0, 0.1, 0.3}) {
      EnhanceConfig cfg;
      cfg.solver.alpha_exp = alpha;
      ImagePlanar img = load_image(path);
      EnhanceOutputs out = enhance(img, cfg, path);
      double m = mean_of(out.output.data);
      if (m > prev_mean + 1e-9) {
        ok = false;
        std::printf("  exposure: mean(R) rose from %.6f to %.6f at alpha=%.1f (%s)\n",
                    prev_mean, m, alpha, path.c_str());
      }
      prev_mean = m;
      if (alpha == 0.0) clamp_at_0 = clamp_fraction(out.output);
      if (alpha == 0.3) clamp_at_03 = clamp_fraction(out.output);
    }
    if (clamp_at_03 > clamp_at_0) {
      ok = false;
      std::printf("  exposure: clamp fraction %.4f @0.3 > %.4f @0 (%s)\n",
                  clamp_at_03, clamp_at_0, path.c_str());
    }
  }
  std::printf(
      "%s criterion 5: mean output non-increasing over alpha {0, 0.1, 0.3}; "
      "clamped fraction no higher at 0.3\n",
      ok ? "PASS" : "FAIL");
  return ok;
}

// ---- criterion 6: Robust-Guard rescue and non-interference ------------------

bool criterion6() {
  ImagePlanar uniform = load_image(g_corpus + "/rg_uniform.png");
  ImagePlanar diverse = load_image(g_corpus + "/rg_diverse.png");

  EnhanceConfig off;
  EnhanceConfig on;
  on.rg.mode = RgMode::on;

  double mean_off = mean_of(enhance(uniform, off, "u_off").output.data);
  double mean_on = mean_of(enhance(uniform, on, "u_on").output.data);
  bool rescue = mean_on >= 2.0 * mean_off;

  double div_off = mean_of(enhance(diverse, off, "d_off").output.data);
  double div_on = mean_of(enhance(diverse, on, "d_on").output.data);
  double rel_change = std::fabs(div_on - div_off) / div_off;
  bool gentle = rel_change < 0.10;

  bool ok = rescue && gentle;
  std::printf(
      "%s criterion 6: RG rescue (uniform-dark mean %.4f -> %.4f, x%.2f >= 2) "
      "and non-interference (diverse change %.1f%% < 10%%)\n",
      ok ? "PASS" : "FAIL", mean_off, mean_on,
      mean_off > 0 ? mean_on / mean_off : 0.0, 100.0 * rel_change);
  return ok;
}

// ---- criterion 7: directional quality ---------------------------------------

bool criterion7() {
  bool ok = true;
  for (const std::string& path : corpus_images()) {
    ImagePlanar img = load_image(path);
    EnhanceConfig cfg;
    EnhanceOutputs out = enhance(img, cfg, path);
    MetricReport before = compute_metrics(img, path);
    if (!(out.report.de > before.de) || !(out.report.eme > before.eme)) {
      ok = false;
      std::printf("  quality: DE %.4f->%.4f EME %.4f->%.4f (%s)\n", before.de,
                  out.report.de, before.eme, out.report.eme, path.c_str());
    }
  }

  GrayMap constant(16, 16, 0.5);
  GrayMap uniform(16, 16);
  for (int i = 0; i < 256; ++i) uniform.data[i] = double(i) / 255.0;
  bool trivial = de(constant) == 0.0 && eme(constant) == 0.0 &&
                 de(uniform) == 8.0;
  if (!trivial) ok = false;

  std::printf(
      "%s criterion 7: DE and EME increase on all ten regression images; "
      "trivial metric identities hold\n",
      ok ? "PASS" : "FAIL");
  return ok;
}

// ---- criterion 8: twice-run stability ----------------------------------------

bool criterion8() {
  bool ok = true;
  double worst = -1.0;
  for (const std::string& path : corpus_images()) {
    ImagePlanar img = load_image(path);
    EnhanceConfig cfg;  // alpha_exp = 0.25 default
    EnhanceOutputs once = enhance(img, cfg, path);
    EnhanceOutputs twice = enhance(once.output, cfg, path);
    double delta = clamp_fraction(twice.output) - clamp_fraction(once.output);
    worst = std::max(worst, delta);
    if (!(delta < 0.05)) {
      ok = false;
      std::printf("  stability: clamped fraction grew %.2f pp (%s)\n",
                  100.0 * delta, path.c_str());
    }
  }
  std::printf(
      "%s criterion 8: chained run adds < 5 pp clamped pixels (worst %.2f pp)\n",
      ok ? "PASS" : "FAIL", 100.0 * worst);
  return ok;
}

// ---- criterion 9: determinism ------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), {});
}

bool dirs_identical(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a))
    names_a.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b))
    names_b.push_back(e.path().filename().string());
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  if (names_a != names_b || names_a.empty()) return false;
  for (const std::string& n : names_a) {
    std::string ca = slurp(a / n);
    if (ca.empty() || ca != slurp(b / n)) return false;
  }
  return true;
}

int run_cli_batch(const std::string& out_dir, int jobs) {
  fs::remove_all(out_dir);
  std::string cmd = "\"" + g_itre_bin + "\" batch \"" + g_corpus + "\" \"" +
                    out_dir + "\" --jobs " + std::to_string(jobs) +
                    " --metrics \"" + out_dir + "/metrics.csv\" > /dev/null";
  return std::system(cmd.c_str());
}

bool criterion9() {
  fs::create_directories(g_workdir);
  std::string r1 = g_workdir + "/run1_j1";
  std::string r2 = g_workdir + "/run2_j1";
  std::string r4 = g_workdir + "/run3_j4";
  bool ran = run_cli_batch(r1, 1) == 0 && run_cli_batch(r2, 1) == 0 &&
             run_cli_batch(r4, 4) == 0;
  bool same_rerun = ran && dirs_identical(r1, r2);
  bool same_jobs = ran && dirs_identical(r1, r4);
  bool ok = ran && same_rerun && same_jobs;
  std::printf(
      "%s criterion 9: byte-identical outputs across reruns (%s) and across "
      "--jobs 1 vs --jobs 4 (%s)\n",
      ok ? "PASS" : "FAIL", same_rerun ? "yes" : "no", same_jobs ? "yes" : "no");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--corpus") g_corpus = argv[i + 1];
    else if (flag == "--itre-bin") g_itre_bin = argv[i + 1];
    else if (flag == "--workdir") g_workdir = argv[i + 1];
  }
  if (g_corpus.empty() || g_itre_bin.empty() || g_workdir.empty()) {
    std::fprintf(stderr,
                 "usage: itre_acceptance --corpus DIR --itre-bin PATH "
                 "--workdir DIR\n");
    return 2;
  }
  if (corpus_images().size() != 10) {
    std::fprintf(stderr, "expected 10 img_*.png regression images in %s\n",
                 g_corpus.c_str());
    return 2;
  }

  int failures = 0;
  failures += !criterion1();
  failures += !criterion2();
  failures += !criterion3();
  failures += !criterion4();
  failures += !criterion5();
  failures += !criterion6();
  failures += !criterion7();
  failures += !criterion8();
  failures += !criterion9();

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
