// Command-line front end: single-image segmentation, automatic seeding,
// batch experiments, report generation, the HTTP service and the phantom
// corpus generator.

#include <CLI11.hpp>

#include <iostream>

#include "growcut/config.hpp"
#include "growcut/contour.hpp"
#include "growcut/experiment.hpp"
#include "growcut/io.hpp"
#include "growcut/metrics.hpp"
#include "growcut/phantom.hpp"
#include "growcut/service.hpp"

namespace fs = std::filesystem;
using namespace growcut;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

MethodConfig config_or_default(const std::string& path) {
  return path.empty() ? MethodConfig{} : load_config(path);
}

int cmd_segment(const std::string& method_name, const std::string& image, const std::string& seeds_path,
                const std::string& out, const std::string& config, const std::string& gt_path,
                const std::string& contour_path) {
  const Method method = method_from_string(method_name);
  const MethodConfig cfg = config_or_default(config);
  const GrayImage img = io::load_gray_image(image);
  std::optional<SeedSet> seeds;
  if (!seeds_path.empty()) seeds = io::load_seeds(seeds_path);
  SeedSet used;
  const SegmentationResult r = segment(method, img, seeds, cfg, Kernel::Parallel, &used);
  io::save_mask(r.mask, out);

  json summary{{"method", method_name},
               {"iterations", r.iterations_used},
               {"converged", r.converged},
               {"seeds", used.size()},
               {"foreground_pixels", r.mask.count()}};
  if (!gt_path.empty()) {
    const auto rep = metrics::evaluate(img, r.mask, io::load_mask(gt_path), cfg.significance);
    summary["dsc"] = rep.overlap.dsc;
    summary["bac"] = rep.overlap.bac;
    summary["ssp_pvalue"] = rep.ssp_pvalue;
  }
  if (!contour_path.empty()) {
    json c = json::array();
    for (const Point& p : boundary_polyline(r.mask)) c.push_back({p.x, p.y});
    io::write_text(contour_path, c.dump() + "\n");
  }
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

int cmd_seeds(const std::string& strategy, const std::string& image, const std::string& out,
              const std::string& config) {
  const MethodConfig cfg = config_or_default(config);
  const GrayImage img = io::load_gray_image(image);
  SeedSet seeds;
  if (strategy == "mlt")
    seeds = mlt::generate_seeds(img, cfg.mlt, cfg.diffusion, cfg.seeding);
  else
    seeds = de::generate_seeds(img, cfg.de);
  io::save_seeds(seeds, out);
  std::cout << seeds.size() << " seeds written to " << out << "\n";
  return kOk;
}

int cmd_batch(const std::string& spec_path, int workers) {
  harness::ExperimentSpec spec = harness::load_spec(spec_path);
  if (workers >= 0) spec.workers = workers;
  if (spec.output_dir.empty()) spec.output_dir = fs::path(spec_path).parent_path() / "out";
  const auto res = harness::run_experiment(spec, &std::cerr);
  std::cout << res.records.size() << " records, " << res.failures.size() << " failures; output in "
            << spec.output_dir.string() << "\n";
  if (!res.records.empty()) {
    // Summarize what records.csv holds so `report` on it reproduces these files.
    const auto summary =
        harness::summarize(harness::records_from_csv(harness::records_to_csv(res.records)));
    io::write_text(spec.output_dir / "summary.csv", harness::summary_to_csv(summary));
    io::write_text(spec.output_dir / "wilcoxon.csv", harness::wilcoxon_to_csv(summary));
  }
  if (res.records.empty()) return kFatal;
  return res.failures.empty() ? kOk : kPartial;
}

int cmd_report(const std::string& records_path, const std::string& out_dir) {
  const auto bytes = io::read_file(records_path);
  const auto records =
      harness::records_from_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  const auto summary = harness::summarize(records);
  fs::create_directories(out_dir);
  io::write_text(fs::path(out_dir) / "summary.csv", harness::summary_to_csv(summary));
  const std::string table = harness::wilcoxon_to_csv(summary);
  io::write_text(fs::path(out_dir) / "wilcoxon.csv", table);
  std::cout << table;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded cellular-automaton segmentation toolkit"};
  app.require_subcommand(1);

  std::string method = "growcut", image, seeds, out, config, gt, contour;
  auto* seg = app.add_subcommand("segment", "Segment one image");
  seg->add_option("--method", method, "growcut | fuzzy | ssgc | regiongrow")
      ->check(CLI::IsMember({"growcut", "fuzzy", "ssgc", "regiongrow"}));
  seg->add_option("--image", image, "Input PGM/PNG")->required();
  seg->add_option("--seeds", seeds, "Seed file (.json or .csv)");
  seg->add_option("--out", out, "Output mask")->required();
  seg->add_option("--config", config, "JSON parameter blocks");
  seg->add_option("--gt", gt, "Ground-truth mask; prints overlap metrics");
  seg->add_option("--contour", contour, "Write the boundary polyline as JSON");

  std::string strategy = "mlt";
  auto* autoseed = app.add_subcommand("seeds", "Generate seeds automatically");
  autoseed->add_option("--strategy", strategy, "mlt | de")->check(CLI::IsMember({"mlt", "de"}));
  autoseed->add_option("--image", image, "Input PGM/PNG")->required();
  autoseed->add_option("--out", out, "Seed file (.json or .csv)")->required();
  autoseed->add_option("--config", config, "JSON parameter blocks");

  std::string spec;
  int workers = -1;
  auto* batch = app.add_subcommand("batch", "Run an experiment over a corpus");
  batch->add_option("--spec", spec, "Experiment spec JSON")->required();
  batch->add_option("--workers", workers, "Concurrent images (overrides the spec)");

  std::string records;
  auto* report = app.add_subcommand("report", "Summarize a records CSV");
  report->add_option("--records", records, "records.csv from batch")->required();
  report->add_option("--out", out, "Output directory")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--config", config, "Default parameter blocks");

  std::uint64_t rng_seed = 7;
  auto* phantoms = app.add_subcommand("phantoms", "Write the synthetic phantom corpus");
  phantoms->add_option("--out", out, "Output directory")->required();
  phantoms->add_option("--seed", rng_seed, "Noise seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*seg) return cmd_segment(method, image, seeds, out, config, gt, contour);
    if (*autoseed) return cmd_seeds(strategy, image, out, config);
    if (*batch) return cmd_batch(spec, workers);
    if (*report) return cmd_report(records, out);
    if (*serve) {
      std::cerr << "listening on " << host << ":" << port << "\n";
      service::serve(host, port, config_or_default(config));
      return kOk;
    }
    if (*phantoms) {
      phantom::PhantomParams p;
      p.rng_seed = rng_seed;
      for (const auto& id : phantom::write_corpus(out, p)) std::cout << id << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}
