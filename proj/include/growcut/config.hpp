#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "growcut/autoseed_de.hpp"
#include "growcut/autoseed_mlt.hpp"
#include "growcut/fuzzy.hpp"
#include "growcut/growcut.hpp"
#include "growcut/region_grow.hpp"

namespace growcut {

enum class Method { GrowCut, Fuzzy, Ssgc, RegionGrow };

inline constexpr std::array<Method, 4> kAllMethods{Method::GrowCut, Method::Fuzzy, Method::Ssgc,
                                                   Method::RegionGrow};

/// "growcut", "fuzzy", "ssgc", "regiongrow".
std::string_view to_string(Method m) noexcept;
/// Throws InvalidArgument for an unknown name.
Method method_from_string(std::string_view name);

/// Parameters for every method, grouped the way config files are.
///
/// ```json
/// {"growcut": {"neighborhood": "moore8", "max_iterations": 10000, "max_intensity_norm": 255},
///  "fuzzy": {"alpha": 2, "sigma_floor": 1, ...},
///  "mlt": {"level": 10, "depth": 2, "min_region_fraction": 0.01},
///  "diffusion": {"iterations": 15, "time_step": 0.2, "contrast": 15, "presmooth_sigma": 1},
///  "seeding": {"dilation_radius": 5, "centroid_radius": 2},
///  "de": {"points_per_solution": 30, ...},
///  "regiongrow": {"tolerance": 32, "criterion": "seed_mean", ...},
///  "metrics": {"alpha": 0.05}}
/// ```
struct MethodConfig {
  GrowCutConfig growcut;
  fuzzy::FuzzyGrowCutConfig fuzzy;
  mlt::MltParams mlt;
  mlt::DiffusionParams diffusion;
  mlt::SeedSynthesisParams seeding;
  de::DeParams de;
  regiongrow::RegionGrowConfig regiongrow;
  /// Significance level of the spectrum comparison.
  double significance = 0.05;

  void validate() const;
};

/// Overlays the blocks present in `j` onto `base`. Unknown blocks or keys
/// and wrongly typed values throw InvalidArgument.
MethodConfig config_from_json(const nlohmann::json& j, MethodConfig base = {});
nlohmann::json config_to_json(const MethodConfig& cfg);
MethodConfig load_config(const std::filesystem::path& path);

/// Runs `method` on `img`. GrowCut and RegionGrow need seeds; Fuzzy uses
/// the given object seeds, or differential-evolution seeds when `seeds` is
/// empty; SSGC generates its own and ignores `seeds`. `used`, when given,
/// receives the seeds the method actually ran with.
SegmentationResult segment(Method method, const GrayImage& img, const std::optional<SeedSet>& seeds,
                           const MethodConfig& cfg, Kernel kernel = Kernel::Parallel,
                           SeedSet* used = nullptr);

/// The Foreground subset of `seeds`.
SeedSet foreground_only(const SeedSet& seeds);

}  // namespace growcut
