// robinson-lab: drive the Robinson tiling pipeline stage by stage.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "robinson/errors.hpp"
#include "robinson/render.hpp"
#include "robinson/report.hpp"

#ifndef ROBINSON_DATA_DIR
#define ROBINSON_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using robinson::Json;

namespace {

struct Options {
  std::string tileset;
  std::string cache;
  std::string rules;  // positional rules file, same role as --cache
  std::uint64_t seed = 0;
  int margin = 8;
  int size = 16;
  int max_power = 4;
  int depth = 6;
  std::string out;
  std::string svg;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--tileset", o.tileset, "tile set JSON (default: robinson.tiles.json here or in the data dir)");
  sub->add_option("--cache", o.cache, "derived rules JSON, read if valid and written otherwise");
  sub->add_option("--seed", o.seed, "first patch seed");
  sub->add_option("--margin", o.margin, "extendability margin of generated patches");
  sub->add_option("--max-power", o.max_power, "largest power m for zeta series and periodic points");
  sub->add_option("--depth", o.depth, "substitution depth for the fixed point classification");
  sub->add_option("--out", o.out, "write the JSON result here instead of stdout");
  sub->add_option("--svg", o.svg, "directory for SVG figures");
}

fs::path default_tileset() {
  if (fs::exists("robinson.tiles.json")) return "robinson.tiles.json";
  return fs::path(ROBINSON_DATA_DIR) / "robinson.tiles.json";
}

robinson::PipelineConfig config_from(const Options& o) {
  robinson::PipelineConfig cfg;
  cfg.tileset_path = o.tileset.empty() ? default_tileset() : fs::path(o.tileset);
  if (!o.rules.empty()) cfg.cache_path = o.rules;
  if (!o.cache.empty()) cfg.cache_path = o.cache;
  cfg.ensemble.seed = o.seed;
  cfg.ensemble.margin = o.margin;
  cfg.max_power = o.max_power;
  cfg.depth = o.depth;
  if (!o.out.empty()) cfg.out_path = o.out;
  if (!o.svg.empty()) cfg.svg_dir = o.svg;
  return cfg;
}

void emit(const Options& o, const Json& j) {
  std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    robinson::write_atomic(o.out, text);
  }
}

bool is_true(const Json& claim) { return claim.at("value") == true; }

Json patch_json(const robinson::TileSet& ts, const robinson::Patch& p) {
  Json j;
  j["origin"] = {p.origin().x, p.origin().y};
  j["width"] = p.width();
  j["height"] = p.height();
  Json rows = Json::array();
  // Top row first, as drawn.
  for (int y = p.origin().y + p.height() - 1; y >= p.origin().y; --y) {
    Json row = Json::array();
    for (int x = p.origin().x; x < p.origin().x + p.width(); ++x) row.push_back(ts.label(p.at(x, y)));
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

int cmd_gen(const Options& o) {
  auto cfg = config_from(o);
  robinson::Pipeline p(cfg);
  robinson::GenerateOptions g;
  g.width = g.height = o.size;
  g.margin = o.margin;
  g.seed = o.seed;
  auto patch = robinson::generate_patch(p.tiles(), g);
  Json j = patch_json(p.tiles(), patch);
  j["legal"] = robinson::legal(p.tiles(), patch);
  j["hierarchical"] = robinson::hierarchical(p.tiles(), patch);
  if (!o.svg.empty()) robinson::write_atomic(fs::path(o.svg) / "patch.svg", robinson::render_patch(p.tiles(), patch));
  emit(o, j);
  return j["legal"] == true ? 0 : 1;
}

int cmd_derive(Options o) {
  // The derived rules are the product: --out names the rules file.
  if (o.cache.empty() && o.rules.empty()) o.cache = o.out.empty() ? "rules.json" : o.out;
  auto cfg = config_from(o);
  cfg.out_path.reset();
  robinson::Pipeline p(cfg);
  const auto& d = p.rules();
  Json j;
  j["rules"] = cfg.cache_path->string();
  j["source"] = p.rules_source();
  j["doubled_tiles"] = d.catalog.size();
  j["ensemble_patches"] = d.ensemble_patches;
  j["tileset_hash"] = robinson::tileset_hash(p.prototiles());
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_check(const Options& o) {
  robinson::Pipeline p(config_from(o));
  Json j;
  j["census"] = p.census_section();
  j["substitution"] = p.substitution_section();
  emit(o, j);
  const auto& s = j["substitution"];
  bool ok = s["overlap_consistency"]["ok"] == true && s["covariance"]["ok"] == true &&
            s["border_forcing"]["ok"] == true && is_true(s["column_sums_4"]) && is_true(s["image_centers_anchored"]);
  return ok ? 0 : 1;
}

int cmd_complex(const Options& o) {
  robinson::Pipeline p(config_from(o));
  Json j = p.complex_section();
  j["boundary_squared_zero"] = p.properties_section()["boundary_squared_zero"];
  emit(o, j);
  return is_true(j["boundary_squared_zero"]) ? 0 : 1;
}

int cmd_cohomology(const Options& o) {
  robinson::Pipeline p(config_from(o));
  Json j;
  j["complex"] = p.complex_section();
  j["cohomology"] = p.cohomology_section();
  emit(o, j);
  return 0;
}

int cmd_zeta(const Options& o) {
  robinson::Pipeline p(config_from(o));
  Json j = p.zeta_section();
  j["periodic_points"] = p.periodic_section();
  emit(o, j);
  bool ok = is_true(j["multiplicativity"]);
  for (const auto& e : j["periodic_points"]) ok = ok && e["match"] == true;
  return ok ? 0 : 1;
}

int cmd_render(const Options& o) {
  if (o.svg.empty()) {
    std::cerr << "robinson-lab render: --svg DIR is required\n";
    return 2;
  }
  robinson::Pipeline p(config_from(o));
  Json j;
  j["figures"] = robinson::write_figures(p, o.svg);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_report(const Options& o) {
  auto r = robinson::run_pipeline(config_from(o));
  if (o.out.empty()) std::cout << r.document.dump(2) << "\n";
  for (const auto& c : r.criteria) {
    std::cerr << (c.passed ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << c.detail << "\n";
  }
  std::cerr << "content hash " << r.content_hash << "\n";
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robinson tilings: substitution rules, Anderson-Putnam cohomology and zeta function"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "generate a legal patch by constraint search");
  add_common(gen, o);
  gen->add_option("--size", o.size, "window edge in unit tiles");
  auto* derive = app.add_subcommand("derive", "derive doubled tiles and the substitution rules");
  add_common(derive, o);
  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> verbs;
  for (auto [name, help, fn] : {std::tuple{"check", "run the substitution checks", &cmd_check},
                                {"complex", "build the Anderson-Putnam complex", &cmd_complex},
                                {"cohomology", "approximant and hull cohomology", &cmd_cohomology},
                                {"zeta", "zeta function, series and periodic points", &cmd_zeta}}) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    sub->add_option("rules", o.rules, "rules JSON (read if valid, else derived and written)");
    verbs.emplace_back(sub, fn);
  }
  auto* render = app.add_subcommand("render", "write SVG figures of tiles, rules and a patch");
  add_common(render, o);
  auto* report = app.add_subcommand("report", "run the full pipeline and write the JSON report");
  add_common(report, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(o);
    if (*derive) return cmd_derive(o);
    if (*render) return cmd_render(o);
    if (*report) return cmd_report(o);
    for (auto [sub, fn] : verbs) {
      if (*sub) return fn(o);
    }
  } catch (const robinson::Error& e) {
    std::cerr << "robinson-lab: error in " << e.module() << " (" << e.check() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "robinson-lab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
