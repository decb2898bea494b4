#include "growcut/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "growcut/contour.hpp"
#include "growcut/io.hpp"

namespace growcut::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<fs::path> first_existing(const fs::path& dir, const std::string& id,
                                       std::initializer_list<const char*> suffixes) {
  for (const char* suf : suffixes) {
    fs::path p = dir / (id + suf);
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

std::string record_stem(const RunRecord& r) {
  return r.image_id + "." + std::string(to_string(r.method));
}

}  // namespace

std::vector<CorpusEntry> discover_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("corpus directory not found: " + dir.string());
  std::vector<CorpusEntry> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    std::string id;
    for (const char* ext : {".png", ".pgm"})
      if (ends_with(name, ext)) id = name.substr(0, name.size() - 4);
    if (id.empty() || ends_with(id, ".gt")) continue;
    CorpusEntry c;
    c.id = id;
    c.image = e.path();
    c.truth = first_existing(dir, id, {".gt.png", ".gt.pgm"});
    c.seeds = first_existing(dir, id, {".seeds.json", ".seeds.csv"});
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  return out;
}

ExperimentSpec load_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("spec " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("spec must be a JSON object");
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  ExperimentSpec s;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "corpus_dir") {
        s.corpus_dir = resolve(v.get<std::string>());
      } else if (key == "output_dir") {
        s.output_dir = resolve(v.get<std::string>());
      } else if (key == "method") {
        s.methods = {method_from_string(v.get<std::string>())};
      } else if (key == "methods") {
        s.methods.clear();
        for (const auto& m : v) s.methods.push_back(method_from_string(m.get<std::string>()));
      } else if (key == "rng_seed") {
        s.rng_seed = v.get<std::uint64_t>();
      } else if (key == "workers") {
        s.workers = v.get<int>();
      } else if (key == "write_images") {
        s.write_images = v.get<bool>();
      } else if (key == "config") {
        s.config = config_from_json(v);
      } else {
        throw InvalidArgument("unknown spec key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad spec value: ") + e.what());
  }
  if (s.corpus_dir.empty()) throw InvalidArgument("spec needs corpus_dir");
  if (s.methods.empty()) throw InvalidArgument("spec needs at least one method");
  if (s.workers < 0) throw InvalidArgument("workers must be >= 0");
  return s;
}

std::vector<std::uint8_t> overlay_rgb(const GrayImage& img, const BinaryMask& seg,
                                      const BinaryMask& gt) {
  const Extent d = img.extent();
  std::vector<std::uint8_t> rgb(3 * d.area());
  for (std::size_t i = 0; i < d.area(); ++i)
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = img.pixels()[i];
  auto paint = [&](const BinaryMask& m, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (const auto& c : outer_contours(m))
      for (const Point& p : c.points) {
        const std::size_t i = 3 * d.index(p.x, p.y);
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
      }
  };
  paint(gt, 0, 0, 0);
  paint(seg, 0, 255, 0);
  return rgb;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  const auto entries = discover_corpus(spec.corpus_dir);
  MethodConfig cfg = spec.config;
  cfg.de.rng_seed = spec.rng_seed;
  cfg.validate();

  const bool write = !spec.output_dir.empty();
  if (write) {
    fs::create_directories(spec.output_dir);
    if (spec.write_images) {
      fs::create_directories(spec.output_dir / "masks");
      fs::create_directories(spec.output_dir / "overlays");
    }
  }

  struct Job {
    const CorpusEntry* entry;
    Method method;
  };
  std::vector<Job> jobs;
  for (const auto& e : entries)
    for (Method m : spec.methods) jobs.push_back({&e, m});

  struct Outcome {
    std::optional<RunRecord> record;
    std::optional<RunFailure> failure;
  };
  std::vector<Outcome> outcomes(jobs.size());
  std::mutex log_mutex;

  auto run_job = [&](const Job& job) -> Outcome {
    const CorpusEntry& e = *job.entry;
    try {
      if (!e.truth) throw IoError("missing ground truth");
      const GrayImage img = io::load_gray_image(e.image);
      const BinaryMask gt = io::load_mask(*e.truth);
      if (gt.extent() != img.extent()) throw InvalidArgument("ground truth size differs from image");
      std::optional<SeedSet> seeds;
      if (e.seeds) seeds = io::load_seeds(*e.seeds);
      if (job.method == Method::Fuzzy && seeds) seeds = foreground_only(*seeds);

      const auto t0 = std::chrono::steady_clock::now();
      SeedSet used;
      const SegmentationResult r = segment(job.method, img, seeds, cfg, Kernel::Parallel, &used);
      const auto t1 = std::chrono::steady_clock::now();

      RunRecord rec;
      rec.image_id = e.id;
      rec.method = job.method;
      rec.report = metrics::evaluate(img, r.mask, gt, cfg.significance);
      rec.iterations_used = r.iterations_used;
      rec.converged = r.converged;
      rec.seed_count = used.size();
      rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (write && spec.write_images) {
        io::save_mask(r.mask, spec.output_dir / "masks" / (record_stem(rec) + ".png"));
        const auto rgb = overlay_rgb(img, r.mask, gt);
        io::write_file(spec.output_dir / "overlays" / (record_stem(rec) + ".png"),
                       io::encode_png_rgb(img.width(), img.height(), rgb));
      }
      if (log) {
        std::lock_guard lock(log_mutex);
        *log << e.id << " " << to_string(job.method) << ": dsc " << fmt(rec.report.overlap.dsc)
             << ", " << rec.iterations_used << " iterations\n";
      }
      return {std::move(rec), std::nullopt};
    } catch (const std::exception& ex) {
      if (log) {
        std::lock_guard lock(log_mutex);
        *log << e.id << " " << to_string(job.method) << ": FAILED: " << ex.what() << "\n";
      }
      return {std::nullopt, RunFailure{e.id, job.method, ex.what()}};
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(
      jobs.size(), spec.workers > 0 ? static_cast<std::size_t>(spec.workers) : hw);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    // Share the cores between image workers and the kernels' own threads.
    if (n_workers > 1) omp_set_num_threads(static_cast<int>(std::max<std::size_t>(1, hw / n_workers)));
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) outcomes[i] = run_job(jobs[i]);
  };
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (auto& o : outcomes) {
    if (o.record) result.records.push_back(std::move(*o.record));
    if (o.failure) result.failures.push_back(std::move(*o.failure));
  }

  if (write) {
    io::write_text(spec.output_dir / "records.csv", records_to_csv(result.records));
    std::string timings = "image_id,method,wall_ms\n";
    for (const auto& r : result.records)
      timings += csv_field(r.image_id) + "," + std::string(to_string(r.method)) + "," +
                 fmt(r.wall_ms) + "\n";
    io::write_text(spec.output_dir / "timings.csv", timings);
    std::string failures = "image_id,method,message\n";
    for (const auto& f : result.failures)
      failures += csv_field(f.image_id) + "," + std::string(to_string(f.method)) + "," +
                  csv_field(f.message) + "\n";
    io::write_text(spec.output_dir / "failures.csv", failures);
  }
  return result;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"image_id", "method", "iterations", "converged", "seeds",
                               "dsc",      "sensitivity", "specificity", "bac", "tp", "fp", "tn", "fn"};
    for (const char* p : {"", "gt_"})
      for (const char* m : {"area", "perimeter", "form_factor", "solidity", "feret_x", "feret_y"})
        c.push_back(std::string(p) + m);
    for (const char* m : metrics::kShapeMetricNames) c.push_back(std::string("err_") + m);
    c.push_back("ssp_pvalue");
    c.push_back("ssp_reject");
    return c;
  }();
  return cols;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out;
  const auto& cols = record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : records) {
    const auto& o = r.report.overlap;
    std::vector<std::string> f{csv_field(r.image_id),
                               std::string(to_string(r.method)),
                               std::to_string(r.iterations_used),
                               r.converged ? "true" : "false",
                               std::to_string(r.seed_count),
                               fmt(o.dsc),
                               fmt(o.sensitivity),
                               fmt(o.specificity),
                               fmt(o.bac),
                               std::to_string(o.counts.tp),
                               std::to_string(o.counts.fp),
                               std::to_string(o.counts.tn),
                               std::to_string(o.counts.fn)};
    for (const auto* s : {&r.report.shape, &r.report.gt_shape}) {
      f.push_back(std::to_string(s->area));
      f.push_back(fmt(s->perimeter));
      f.push_back(fmt(s->form_factor));
      f.push_back(fmt(s->solidity));
      f.push_back(std::to_string(s->feret_x));
      f.push_back(std::to_string(s->feret_y));
    }
    for (const char* m : metrics::kShapeMetricNames) {
      const auto it = r.report.relative_errors.find(m);
      f.push_back(it == r.report.relative_errors.end() ? "" : fmt(it->second));
    }
    f.push_back(fmt(r.report.ssp_pvalue));
    f.push_back(r.report.ssp_reject ? "true" : "false");
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    out += "\n";
  }
  return out;
}

std::vector<RunRecord> records_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("records CSV is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"image_id", "method", "dsc", "ssp_pvalue", "ssp_reject"})
    if (!col.count(need)) throw InvalidArgument(std::string("records CSV lacks column ") + need);

  std::vector<RunRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size())
      throw InvalidArgument("records CSV line " + std::to_string(lineno) + " has " +
                            std::to_string(f.size()) + " fields, expected " +
                            std::to_string(header.size()));
    auto get = [&](const std::string& name) -> const std::string* {
      const auto it = col.find(name);
      return it == col.end() ? nullptr : &f[it->second];
    };
    auto num = [&](const std::string& name, double fallback = 0.0) {
      const std::string* s = get(name);
      if (!s || s->empty()) return fallback;
      try {
        return std::stod(*s);
      } catch (const std::exception&) {
        throw InvalidArgument("records CSV line " + std::to_string(lineno) + ": bad number in " +
                              name);
      }
    };
    RunRecord r;
    r.image_id = *get("image_id");
    r.method = method_from_string(*get("method"));
    r.iterations_used = static_cast<int>(num("iterations"));
    if (const auto* c = get("converged")) r.converged = *c == "true";
    r.seed_count = static_cast<std::size_t>(num("seeds"));
    auto& o = r.report.overlap;
    o.dsc = num("dsc");
    o.sensitivity = num("sensitivity");
    o.specificity = num("specificity");
    o.bac = num("bac");
    o.counts = {static_cast<std::size_t>(num("tp")), static_cast<std::size_t>(num("fp")),
                static_cast<std::size_t>(num("tn")), static_cast<std::size_t>(num("fn"))};
    for (const char* m : metrics::kShapeMetricNames) {
      const std::string* s = get(std::string("err_") + m);
      if (s && !s->empty()) r.report.relative_errors[m] = num(std::string("err_") + m);
    }
    r.report.ssp_pvalue = num("ssp_pvalue", 1.0);
    r.report.ssp_reject = *get("ssp_reject") == "true";
    out.push_back(std::move(r));
  }
  return out;
}

Stats describe(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("statistics of an empty sample");
  std::sort(v.begin(), v.end());
  Stats s;
  s.n = v.size();
  s.min = v.front();
  s.max = v.back();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(s.n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, s.n - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

Summary summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw InvalidArgument("nothing to summarize");
  Summary out;
  for (Method m : kAllMethods) {
    std::vector<const RunRecord*> rs;
    for (const auto& r : records)
      if (r.method == m) rs.push_back(&r);
    if (rs.empty()) continue;

    auto add = [&](const std::string& name, auto value_of) {
      std::vector<double> v;
      for (const auto* r : rs)
        if (auto x = value_of(*r)) v.push_back(*x);
      if (!v.empty()) out.metrics.push_back({m, name, describe(std::move(v))});
    };
    add("dsc", [](const RunRecord& r) { return std::optional(r.report.overlap.dsc); });
    add("sensitivity", [](const RunRecord& r) { return std::optional(r.report.overlap.sensitivity); });
    add("specificity", [](const RunRecord& r) { return std::optional(r.report.overlap.specificity); });
    add("bac", [](const RunRecord& r) { return std::optional(r.report.overlap.bac); });
    for (const char* name : metrics::kShapeMetricNames)
      add(std::string("err_") + name, [name](const RunRecord& r) -> std::optional<double> {
        const auto it = r.report.relative_errors.find(name);
        if (it == r.report.relative_errors.end()) return std::nullopt;
        return it->second;
      });

    WilcoxonAggregate w;
    w.method = m;
    std::vector<double> ps;
    for (const auto* r : rs) {
      ps.push_back(r->report.ssp_pvalue);
      (r->report.ssp_reject ? w.rejected : w.not_rejected) += 1;
    }
    const Stats ps_stats = describe(ps);
    w.average_p = ps_stats.mean;
    w.min_p = ps_stats.min;
    w.max_p = ps_stats.max;
    w.std_p = ps_stats.std_dev;
    out.wilcoxon.push_back(w);
  }
  return out;
}

std::string summary_to_csv(const Summary& s) {
  std::string out = "method,metric,n,mean,max,min,std,q1,median,q3\n";
  for (const auto& m : s.metrics) {
    const Stats& t = m.stats;
    out += std::string(to_string(m.method)) + "," + m.metric + "," + std::to_string(t.n) + "," +
           fmt(t.mean) + "," + fmt(t.max) + "," + fmt(t.min) + "," + fmt(t.std_dev) + "," +
           fmt(t.q1) + "," + fmt(t.median) + "," + fmt(t.q3) + "\n";
  }
  return out;
}

std::string wilcoxon_to_csv(const Summary& s) {
  std::string out =
      "Techniques,Average p-value,#Reject Null Hypotheses,#Not Reject Null Hypotheses,"
      "Min p-value,Max p Value,Standard Deviation\n";
  for (const auto& w : s.wilcoxon)
    out += std::string(to_string(w.method)) + "," + fmt(w.average_p) + "," +
           std::to_string(w.rejected) + "," + std::to_string(w.not_rejected) + "," +
           fmt(w.min_p) + "," + fmt(w.max_p) + "," + fmt(w.std_p) + "\n";
  return out;
}

}  // namespace growcut::harness
