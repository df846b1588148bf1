#include "itre/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "itre/admm.hpp"
#include "itre/errors.hpp"
#include "itre/imageio.hpp"
#include "itre/itr.hpp"
#include "itre/retinex.hpp"
#include "itre/rg.hpp"

namespace fs = std::filesystem;

namespace itre {

namespace {

template <class F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(std::string(name) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string(name) + ": " + e.what());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

EnhanceOutputs enhance(const ImagePlanar& img, const EnhanceConfig& cfg,
                       const std::string& image_id, bool want_trace) {
  validate_input_image(img);

  EnhanceOutputs out;
  SphereCodebook codebook = stage("codebook", [&] {
    return cfg.codebook == CodebookKind::kmeans
               ? build_codebook_kmeans(img, cfg.codebook_size)
               : build_codebook(cfg.codebook_size);
  });

  out.itr_initial =
      stage("itr_estimation", [&] { return estimate_itr(img, codebook, cfg.wls); });

  out.itr_guarded = stage("robust_guard", [&] {
    return apply_rg(out.itr_initial, img, cfg.wls, cfg.rg);
  });
  out.rg_applied = out.itr_guarded.data != out.itr_initial.data;

  RefineResult refined = stage("transmission_refinement", [&] {
    return refine_transmission_full(out.itr_guarded, img, cfg.solver, want_trace);
  });
  out.transmission = std::move(refined.t);
  out.trace = std::move(refined.trace);

  out.output = stage("retinex_correction", [&] {
    return correct(img, out.transmission, cfg.solver.eps1);
  });

  out.report =
      stage("metrics", [&] { return compute_metrics(out.output, image_id); });
  return out;
}

std::string metrics_csv_string(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  out << "image_id,eme,de\r\n";
  for (const MetricReport& r : reports)
    out << csv_escape(r.image_id) << "," << fmt_metric(r.eme) << ","
        << fmt_metric(r.de) << "\r\n";
  return out.str();
}

void write_metrics_csv(const std::vector<MetricReport>& reports,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << metrics_csv_string(reports);
  if (!out) throw IoError("failed to write " + path);
}

BatchSummary run_batch(const std::string& input_dir,
                       const std::string& output_dir, const EnhanceConfig& cfg,
                       int jobs, const std::string& metrics_csv) {
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec))
    throw IoError("not a readable directory: " + input_dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input_dir, ec)) {
    if (entry.is_regular_file() && has_image_extension(entry.path()))
      files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list directory: " + input_dir);
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  if (files.empty())
    throw IoError("no decodable images (png/jpg/jpeg) in " + input_dir);

  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + output_dir);

  struct Slot {
    bool ok = false;
    MetricReport report;
    std::string error;
  };
  std::vector<Slot> slots(files.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      const fs::path& in_path = files[i];
      try {
        ImagePlanar img = load_image(in_path.string());
        std::string id = in_path.filename().string();
        EnhanceOutputs result = enhance(img, cfg, id);
        fs::path out_path =
            fs::path(output_dir) / (in_path.stem().string() + ".png");
        save_png(result.output, out_path.string());
        slots[i].ok = true;
        slots[i].report = std::move(result.report);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };

  int n_jobs = std::max(1, jobs);
  if (n_jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_jobs);
    for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchSummary summary;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (slots[i].ok) {
      ++summary.processed;
      summary.reports.push_back(std::move(slots[i].report));
    } else {
      ++summary.failed;
      summary.failures.push_back(
          BatchFailure{files[i].filename().string(), slots[i].error});
    }
  }
  if (!metrics_csv.empty()) write_metrics_csv(summary.reports, metrics_csv);
  return summary;
}

}  // namespace itre
