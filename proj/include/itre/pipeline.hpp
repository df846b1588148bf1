#pragma once

#include <string>
#include <vector>

#include "itre/config.hpp"
#include "itre/image.hpp"
#include "itre/metrics.hpp"

namespace itre {

struct EnhanceOutputs {
  ImagePlanar output;
  TransmissionMap transmission;  // refined T
  MetricReport report;           // metrics of the output
  TransmissionMap itr_initial;   // pre-guard estimate
  TransmissionMap itr_guarded;   // post-guard target (== itr_initial when off)
  bool rg_applied = false;
  std::vector<TraceRow> trace;   // filled when want_trace
};

// Full composition: estimate -> guard -> refine -> correct -> metrics.
// Errors from stages rethrow with a stage label prefix.
EnhanceOutputs enhance(const ImagePlanar& img, const EnhanceConfig& cfg,
                       const std::string& image_id = "",
                       bool want_trace = false);

struct BatchFailure {
  std::string file;
  std::string reason;
};

struct BatchSummary {
  int processed = 0;
  int failed = 0;
  std::vector<BatchFailure> failures;
  std::vector<MetricReport> reports;  // ordered by source filename
};

// Enhances every PNG/JPEG in input_dir into output_dir (as <stem>.png).
// Per-file failures are recorded without aborting the batch. Deterministic:
// the result is independent of the job count.
BatchSummary run_batch(const std::string& input_dir,
                       const std::string& output_dir, const EnhanceConfig& cfg,
                       int jobs = 1, const std::string& metrics_csv = "");

// RFC-4180 rows: image_id,eme,de with a header line.
void write_metrics_csv(const std::vector<MetricReport>& reports,
                       const std::string& path);
std::string metrics_csv_string(const std::vector<MetricReport>& reports);

}  // namespace itre
