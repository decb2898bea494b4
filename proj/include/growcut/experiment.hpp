#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "growcut/config.hpp"
#include "growcut/metrics.hpp"

namespace growcut::harness {

/// One corpus item: `<id>.png` (or `.pgm`), `<id>.gt.png` and an optional
/// `<id>.seeds.json` / `<id>.seeds.csv`.
struct CorpusEntry {
  std::string id;
  std::filesystem::path image;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> seeds;
};

/// Entries sorted by id.
std::vector<CorpusEntry> discover_corpus(const std::filesystem::path& dir);

struct ExperimentSpec {
  std::filesystem::path corpus_dir;
  std::vector<Method> methods{Method::GrowCut};
  MethodConfig config;
  std::filesystem::path output_dir;
  /// Overrides the DE seed so a spec alone fixes every random draw.
  std::uint64_t rng_seed = 1;
  /// Concurrent images; 0 picks the hardware concurrency.
  int workers = 0;
  /// Masks and contour overlays next to the CSVs.
  bool write_images = true;
};

/// Spec file:
/// `{"corpus_dir": P, "method": M | "methods": [M...], "output_dir": P,
///   "rng_seed": N, "workers": N, "write_images": bool, "config": {...}}`.
/// Relative paths resolve against the spec file's directory.
ExperimentSpec load_spec(const std::filesystem::path& path);

struct RunRecord {
  std::string image_id;
  Method method = Method::GrowCut;
  metrics::MetricsReport report;
  int iterations_used = 0;
  bool converged = false;
  std::size_t seed_count = 0;
  double wall_ms = 0.0;
};

struct RunFailure {
  std::string image_id;
  Method method = Method::GrowCut;
  std::string message;
};

struct ExperimentResult {
  /// Ordered by image id, then by method as listed in the spec.
  std::vector<RunRecord> records;
  std::vector<RunFailure> failures;
};

/// Segments every corpus image with every method and scores it against the
/// ground truth. Per-image failures are collected, not thrown. When
/// `output_dir` is set, writes records.csv, timings.csv, failures.csv and,
/// if enabled, masks/ and overlays/.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

/// Column names of records.csv, in order.
const std::vector<std::string>& record_columns();
std::string records_to_csv(const std::vector<RunRecord>& records);
/// Reads the columns summarize needs back from records.csv text.
std::vector<RunRecord> records_from_csv(std::string_view text);

/// Gray image with the ground-truth outline in black and the segmentation
/// outline in green, as packed RGB.
std::vector<std::uint8_t> overlay_rgb(const GrayImage& img, const BinaryMask& seg,
                                      const BinaryMask& gt);

struct Stats {
  std::size_t n = 0;
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single value.
  double std_dev = 0.0;
  /// Quartiles by linear interpolation between order statistics.
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Throws InvalidArgument on an empty sample.
Stats describe(std::vector<double> values);

struct MetricSummary {
  Method method = Method::GrowCut;
  std::string metric;
  Stats stats;
};

/// Spectrum-test aggregate for one method.
struct WilcoxonAggregate {
  Method method = Method::GrowCut;
  double average_p = 0.0;
  std::size_t rejected = 0;
  std::size_t not_rejected = 0;
  double min_p = 0.0;
  double max_p = 0.0;
  double std_p = 0.0;
};

struct Summary {
  std::vector<MetricSummary> metrics;
  std::vector<WilcoxonAggregate> wilcoxon;
};

/// Per method: statistics of every relative error and overlap metric, plus
/// the spectrum-test aggregate. Throws InvalidArgument on no records.
Summary summarize(const std::vector<RunRecord>& records);

std::string summary_to_csv(const Summary& s);
/// Columns: Techniques, Average p-value, #Reject Null Hypotheses,
/// #Not Reject Null Hypotheses, Min p-value, Max p Value, Standard Deviation.
std::string wilcoxon_to_csv(const Summary& s);

}  // namespace growcut::harness
