#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "itre/admm.hpp"
#include "itre/config.hpp"
#include "itre/errors.hpp"
#include "itre/imageio.hpp"
#include "itre/pipeline.hpp"

namespace fs = std::filesystem;
using namespace itre;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartial = 4;

struct EnhanceArgs {
  std::string input;
  std::string output;
  std::string config_file;
  std::string dump_dir;
  std::string trace_csv;
  double alpha_exp = 0.25;
  int clusters = 1000;
  int max_iters = 20;
  int rg_radius = 7;
};

struct BatchArgs {
  std::string input_dir;
  std::string output_dir;
  std::string config_file;
  std::string metrics_csv;
  int jobs = 1;
};

struct MetricsArgs {
  std::vector<std::string> images;
  std::string csv;
};

void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iteration,objective,residual,rho\r\n";
  char buf[160];
  for (const TraceRow& row : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\r\n", row.iteration,
                  row.objective, row.residual, row.rho);
    out << buf;
  }
  if (!out) throw IoError("failed to write " + path);
}

int run_enhance(const EnhanceArgs& args, const CLI::App* cmd) {
  EnhanceConfig cfg;
  if (!args.config_file.empty()) load_config_file(cfg, args.config_file);
  // CLI flags override the config file
  if (cmd->count("--alpha-exp")) cfg.solver.alpha_exp = args.alpha_exp;
  if (cmd->count("--clusters")) cfg.codebook_size = args.clusters;
  if (cmd->count("--max-iters")) cfg.solver.max_iterations = args.max_iters;
  if (cmd->count("--rg")) cfg.rg.mode = RgMode::on;
  if (cmd->count("--rg-auto")) cfg.rg.mode = RgMode::automatic;
  if (cmd->count("--rg-radius")) {
    cfg.rg.neighborhood_radius = args.rg_radius;
    cfg.rg.radius_auto = false;
  }
  if (cmd->count("--dump-intermediates")) cfg.dump_intermediates = true;
  if (cfg.solver.alpha_exp < 0.0) throw UsageError("--alpha-exp must be >= 0");
  if (cfg.codebook_size < 16) throw UsageError("--clusters must be >= 16");
  if (cfg.solver.max_iterations < 1) throw UsageError("--max-iters must be >= 1");
  if (cfg.rg.neighborhood_radius < 1) throw UsageError("--rg-radius must be >= 1");

  ImagePlanar img = load_image(args.input);
  std::string id = fs::path(args.input).filename().string();
  bool want_trace = !args.trace_csv.empty();
  EnhanceOutputs result = enhance(img, cfg, id, want_trace);

  fs::path out_path = args.output.empty()
                          ? fs::path(args.input).parent_path() /
                                (fs::path(args.input).stem().string() +
                                 "_enhanced.png")
                          : fs::path(args.output);
  save_png(result.output, out_path.string());

  if (cfg.dump_intermediates) {
    fs::path dir = args.dump_dir.empty() ? out_path.parent_path()
                                         : fs::path(args.dump_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create dump directory: " + dir.string());
    write_pfm(result.itr_initial, (dir / "itr_initial.pfm").string());
    if (result.rg_applied)
      write_pfm(result.itr_guarded, (dir / "itr_guarded.pfm").string());
    write_pfm(result.transmission, (dir / "transmission.pfm").string());
    write_pfm(lambda_map(img, cfg.solver), (dir / "lambda.pfm").string());
  }
  if (want_trace) write_trace_csv(result.trace, args.trace_csv);

  std::printf("wrote %s  eme=%.4f de=%.4f\n", out_path.string().c_str(),
              result.report.eme, result.report.de);
  return kExitOk;
}

int run_batch(const BatchArgs& args) {
  EnhanceConfig cfg;
  if (!args.config_file.empty()) load_config_file(cfg, args.config_file);
  if (args.jobs < 1) throw UsageError("--jobs must be >= 1");

  BatchSummary summary = run_batch(args.input_dir, args.output_dir, cfg,
                                   args.jobs, args.metrics_csv);
  for (const BatchFailure& f : summary.failures)
    std::fprintf(stderr, "failed: %s: %s\n", f.file.c_str(), f.reason.c_str());
  std::printf("%d enhanced, %d failed\n", summary.processed, summary.failed);
  return summary.failed > 0 ? kExitPartial : kExitOk;
}

int run_metrics(const MetricsArgs& args) {
  std::vector<MetricReport> reports;
  for (const std::string& path : args.images) {
    ImagePlanar img = load_image(path);
    reports.push_back(
        compute_metrics(img, fs::path(path).filename().string()));
  }
  if (args.csv.empty())
    std::fputs(metrics_csv_string(reports).c_str(), stdout);
  else
    write_metrics_csv(reports, args.csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"itre - low-light image enhancement"};
  app.require_subcommand(1);

  EnhanceArgs en;
  CLI::App* enhance_cmd =
      app.add_subcommand("enhance", "Enhance a single image");
  enhance_cmd->add_option("input", en.input, "Input PNG/JPEG")->required();
  enhance_cmd->add_option("-o,--output", en.output,
                          "Output PNG (default <input>_enhanced.png)");
  enhance_cmd->add_option("--alpha-exp", en.alpha_exp,
                          "Over-exposure suppression strength");
  enhance_cmd->add_flag("--rg", "Enable the Robust-Guard fallback");
  enhance_cmd->add_flag("--rg-auto",
                        "Trigger Robust-Guard automatically on degenerate maps");
  enhance_cmd->add_option("--rg-radius", en.rg_radius,
                          "Robust-Guard window half-width");
  enhance_cmd->add_option("--clusters", en.clusters, "Color codebook size");
  enhance_cmd->add_option("--max-iters", en.max_iters, "Solver iteration cap");
  enhance_cmd->add_option("--config", en.config_file, "Config file (key = value)");
  enhance_cmd->add_option("--dump-intermediates", en.dump_dir,
                          "Write intermediate maps as PFM into this directory");
  enhance_cmd->add_option("--trace", en.trace_csv,
                          "Write per-iteration solver trace CSV");

  BatchArgs ba;
  CLI::App* batch_cmd = app.add_subcommand("batch", "Enhance a directory");
  batch_cmd->add_option("input_dir", ba.input_dir, "Directory of PNG/JPEG")
      ->required();
  batch_cmd->add_option("output_dir", ba.output_dir, "Output directory")
      ->required();
  batch_cmd->add_option("--jobs", ba.jobs, "Concurrent images");
  batch_cmd->add_option("--config", ba.config_file, "Config file (key = value)");
  batch_cmd->add_option("--metrics", ba.metrics_csv, "Write metric rows here");

  MetricsArgs ma;
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "No-reference metrics (EME, DE)");
  metrics_cmd->add_option("images", ma.images, "Input images")->required();
  metrics_cmd->add_option("--csv", ma.csv, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (enhance_cmd->parsed()) return run_enhance(en, enhance_cmd);
    if (batch_cmd->parsed()) return run_batch(ba);
    if (metrics_cmd->parsed()) return run_metrics(ma);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
}
