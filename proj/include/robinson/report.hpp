#pragma once

// Pipeline orchestration: derive -> check -> complex -> cohomology -> zeta ->
// enumerate -> classify, each stage producing one section of the JSON report.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robinson/ap.hpp"
#include "robinson/substitution.hpp"
#include "robinson/zeta.hpp"

namespace robinson {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct PipelineConfig {
  std::filesystem::path tileset_path = "robinson.tiles.json";
  std::optional<std::filesystem::path> cache_path;  // derived rules, read if valid, else written
  EnsembleOptions ensemble;
  int seed_patch_size = 8;  // seed of the adjacency closure
  int max_power = 4;
  int depth = 6;
  int fault_row_length = 16;
  int fault_row_margin = 4;
  int legality_power = 4;  // substitution legality property, m <= this
  std::optional<std::filesystem::path> out_path;
  std::optional<std::filesystem::path> svg_dir;
  bool rerun_for_determinism = true;
};

using Json = nlohmann::ordered_json;

// One acceptance criterion as asserted by the pipeline.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  Json document;
  std::vector<CriterionResult> criteria;
  std::string content_hash;  // over the document minus timings and the hash itself

  bool passed() const;
};

// Stages share one lazily filled state; each accessor runs what it needs.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  const PipelineConfig& config() const noexcept { return cfg_; }
  const std::vector<Prototile>& prototiles();
  const TileSet& tiles();
  const Derivation& rules();
  const AdjacencyTables& adjacency();
  const CheckResult& border_forcing();
  const CellComplex& complex();
  const ApproximantCohomology& approximant();
  const InducedAction& action();
  const CohomologyResult& cohomology();
  const RationalFunctionZ& zeta();
  const FixedPointAccounting& classification();

  Json census_section();
  Json substitution_section();
  Json complex_section();
  Json cohomology_section();
  Json zeta_section();
  Json periodic_section();
  Json classification_section();
  Json fault_rows_section();
  Json properties_section();

  // Seconds spent per stage so far.
  const std::map<std::string, double>& timings() const noexcept { return timings_; }
  // Where the rules came from: "cache" or "derived".
  const std::string& rules_source() const noexcept { return rules_source_; }

 private:
  template <typename F>
  auto timed(const std::string& stage, F&& f);

  PipelineConfig cfg_;
  std::map<std::string, double> timings_;
  std::string rules_source_;
  std::optional<std::vector<Prototile>> prototiles_;
  std::optional<TileSet> tiles_;
  std::optional<Derivation> rules_;
  std::optional<AdjacencyTables> adjacency_;
  std::optional<CheckResult> border_forcing_;
  std::optional<CellComplex> complex_;
  std::optional<ApproximantCohomology> approximant_;
  std::optional<InducedAction> action_;
  std::optional<CohomologyResult> cohomology_;
  std::optional<RationalFunctionZ> zeta_;
  std::optional<FixedPointAccounting> classification_;
  std::map<std::string, Json> sections_;
};

// Runs every stage and evaluates the acceptance criteria; errors propagate
// tagged with module and check. Writes the report (atomically) and SVGs when
// the config names output paths.
Report run_pipeline(const PipelineConfig& cfg);

std::string content_hash(const Json& document);
// Write to a sibling temporary file, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& text);

// SVGs of all oriented tiles, a few rule entries and a generated patch;
// returns the file names relative to dir.
std::vector<std::string> write_figures(Pipeline& p, const std::filesystem::path& dir);

}  // namespace robinson
