#include "growcut/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <string>

namespace growcut {

using nlohmann::json;

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::GrowCut: return "growcut";
    case Method::Fuzzy: return "fuzzy";
    case Method::Ssgc: return "ssgc";
    case Method::RegionGrow: return "regiongrow";
  }
  return "growcut";
}

Method method_from_string(std::string_view name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

void MethodConfig::validate() const {
  growcut.validate();
  fuzzy.validate();
  mlt.validate();
  diffusion.validate();
  if (seeding.dilation_radius < 1) throw InvalidArgument("seeding dilation_radius must be >= 1");
  if (seeding.centroid_radius < 0) throw InvalidArgument("seeding centroid_radius must be >= 0");
  de.validate();
  regiongrow.validate();
  if (!(significance > 0.0 && significance < 1.0))
    throw InvalidArgument("metrics alpha must be in (0, 1)");
}

namespace {

Neighborhood neighborhood_from(const json& v) {
  const auto s = v.get<std::string>();
  if (s == "moore8") return Neighborhood::Moore8;
  if (s == "vonneumann4") return Neighborhood::VonNeumann4;
  throw InvalidArgument("unknown neighborhood '" + s + "'");
}

std::string neighborhood_name(Neighborhood n) {
  return n == Neighborhood::Moore8 ? "moore8" : "vonneumann4";
}

regiongrow::Criterion criterion_from(const json& v) {
  const auto s = v.get<std::string>();
  if (s == "seed_mean") return regiongrow::Criterion::SeedMean;
  if (s == "running_mean") return regiongrow::Criterion::RunningMean;
  throw InvalidArgument("unknown region-growing criterion '" + s + "'");
}

using Setter = std::function<void(const json&)>;

void apply_block(const std::string& block, const json& j, const std::map<std::string, Setter>& keys) {
  if (!j.is_object()) throw InvalidArgument("config block '" + block + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = keys.find(key);
    if (it == keys.end()) throw InvalidArgument("unknown key '" + block + "." + key + "'");
    try {
      it->second(value);
    } catch (const json::exception&) {
      throw InvalidArgument("bad value for '" + block + "." + key + "'");
    }
  }
}

template <typename T>
Setter set(T& field) {
  return [&field](const json& v) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw InvalidArgument("expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw InvalidArgument("expected a number");
    }
    field = v.get<T>();
  };
}

}  // namespace

MethodConfig config_from_json(const json& j, MethodConfig c) {
  if (j.is_null()) return c;
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  const std::map<std::string, std::function<void(const json&)>> blocks{
      {"growcut",
       [&](const json& b) {
         apply_block("growcut", b,
                     {{"neighborhood", [&](const json& v) { c.growcut.neighborhood = neighborhood_from(v); }},
                      {"max_iterations", set(c.growcut.max_iterations)},
                      {"max_intensity_norm", set(c.growcut.max_intensity_norm)}});
       }},
      {"fuzzy",
       [&](const json& b) {
         apply_block("fuzzy", b,
                     {{"neighborhood", [&](const json& v) { c.fuzzy.neighborhood = neighborhood_from(v); }},
                      {"max_iterations", set(c.fuzzy.max_iterations)},
                      {"max_intensity_norm", set(c.fuzzy.max_intensity_norm)},
                      {"alpha", set(c.fuzzy.alpha)},
                      {"sigma_floor", set(c.fuzzy.sigma_floor)}});
       }},
      {"mlt",
       [&](const json& b) {
         apply_block("mlt", b,
                     {{"level", set(c.mlt.level)},
                      {"depth", set(c.mlt.depth)},
                      {"min_region_fraction", set(c.mlt.min_region_fraction)}});
       }},
      {"diffusion",
       [&](const json& b) {
         apply_block("diffusion", b,
                     {{"iterations", set(c.diffusion.iterations)},
                      {"time_step", set(c.diffusion.time_step)},
                      {"contrast", set(c.diffusion.contrast)},
                      {"presmooth_sigma", set(c.diffusion.presmooth_sigma)}});
       }},
      {"seeding",
       [&](const json& b) {
         apply_block("seeding", b,
                     {{"dilation_radius", set(c.seeding.dilation_radius)},
                      {"centroid_radius", set(c.seeding.centroid_radius)}});
       }},
      {"de",
       [&](const json& b) {
         apply_block("de", b,
                     {{"points_per_solution", set(c.de.points_per_solution)},
                      {"population_size", set(c.de.population_size)},
                      {"generations", set(c.de.generations)},
                      {"differential_weight", set(c.de.differential_weight)},
                      {"crossover_rate", set(c.de.crossover_rate)},
                      {"brightness_weight", set(c.de.brightness_weight)},
                      {"rng_seed", set(c.de.rng_seed)}});
       }},
      {"regiongrow",
       [&](const json& b) {
         apply_block("regiongrow", b,
                     {{"tolerance", set(c.regiongrow.tolerance)},
                      {"neighborhood", [&](const json& v) { c.regiongrow.neighborhood = neighborhood_from(v); }},
                      {"criterion", [&](const json& v) { c.regiongrow.criterion = criterion_from(v); }}});
       }},
      {"metrics",
       [&](const json& b) { apply_block("metrics", b, {{"alpha", set(c.significance)}}); }},
  };
  for (const auto& [name, block] : j.items()) {
    const auto it = blocks.find(name);
    if (it == blocks.end()) throw InvalidArgument("unknown config block '" + name + "'");
    it->second(block);
  }
  c.validate();
  return c;
}

json config_to_json(const MethodConfig& c) {
  return {
      {"growcut",
       {{"neighborhood", neighborhood_name(c.growcut.neighborhood)},
        {"max_iterations", c.growcut.max_iterations},
        {"max_intensity_norm", c.growcut.max_intensity_norm}}},
      {"fuzzy",
       {{"neighborhood", neighborhood_name(c.fuzzy.neighborhood)},
        {"max_iterations", c.fuzzy.max_iterations},
        {"max_intensity_norm", c.fuzzy.max_intensity_norm},
        {"alpha", c.fuzzy.alpha},
        {"sigma_floor", c.fuzzy.sigma_floor}}},
      {"mlt",
       {{"level", c.mlt.level},
        {"depth", c.mlt.depth},
        {"min_region_fraction", c.mlt.min_region_fraction}}},
      {"diffusion",
       {{"iterations", c.diffusion.iterations},
        {"time_step", c.diffusion.time_step},
        {"contrast", c.diffusion.contrast},
        {"presmooth_sigma", c.diffusion.presmooth_sigma}}},
      {"seeding",
       {{"dilation_radius", c.seeding.dilation_radius},
        {"centroid_radius", c.seeding.centroid_radius}}},
      {"de",
       {{"points_per_solution", c.de.points_per_solution},
        {"population_size", c.de.population_size},
        {"generations", c.de.generations},
        {"differential_weight", c.de.differential_weight},
        {"crossover_rate", c.de.crossover_rate},
        {"brightness_weight", c.de.brightness_weight},
        {"rng_seed", c.de.rng_seed}}},
      {"regiongrow",
       {{"tolerance", c.regiongrow.tolerance},
        {"neighborhood", neighborhood_name(c.regiongrow.neighborhood)},
        {"criterion", c.regiongrow.criterion == regiongrow::Criterion::SeedMean ? "seed_mean"
                                                                               : "running_mean"}}},
      {"metrics", {{"alpha", c.significance}}},
  };
}

MethodConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

SeedSet foreground_only(const SeedSet& seeds) {
  std::vector<Seed> fg;
  for (const auto& s : seeds)
    if (s.label == Label::Foreground) fg.push_back(s);
  return SeedSet(std::move(fg));
}

SegmentationResult segment(Method method, const GrayImage& img, const std::optional<SeedSet>& seeds,
                           const MethodConfig& cfg, Kernel kernel, SeedSet* used) {
  auto require = [&]() -> const SeedSet& {
    if (!seeds || seeds->empty())
      throw SeedError(std::string(to_string(method)) + " needs seeds");
    seeds->check_bounds(img.extent());
    return *seeds;
  };
  SeedSet chosen;
  SegmentationResult r;
  switch (method) {
    case Method::GrowCut:
      chosen = require();
      r = run(img, chosen, cfg.growcut, kernel);
      break;
    case Method::Fuzzy:
      chosen = (!seeds || seeds->empty()) ? de::generate_seeds(img, cfg.de) : require();
      r = fuzzy::run_fuzzy(img, chosen, cfg.fuzzy, kernel);
      break;
    case Method::Ssgc: {
      mlt::SsgcTrace trace;
      r = mlt::run_ssgc(img, cfg.mlt, cfg.diffusion, cfg.growcut, cfg.seeding, &trace);
      chosen = std::move(trace.seeds);
      break;
    }
    case Method::RegionGrow:
      chosen = require();
      r = regiongrow::region_grow(img, chosen, cfg.regiongrow);
      break;
  }
  if (used) *used = std::move(chosen);
  return r;
}

}  // namespace growcut
