#include "robinson/report.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "robinson/errors.hpp"

namespace robinson {

namespace {

constexpr const char* kModule = "cli-report";

Json claim(Json value, const char* check) {
  Json j;
  j["value"] = std::move(value);
  j["check"] = check;
  return j;
}

Json spectrum_json(const std::map<mpz_class, int>& s) {
  Json j = Json::object();
  // Descending eigenvalues read better next to the group names.
  for (auto it = s.rbegin(); it != s.rend(); ++it) j[it->first.get_str()] = it->second;
  return j;
}

Json factors_json(const std::map<mpz_class, int>& f) {
  Json j = Json::array();
  for (const auto& [c, m] : f) j.push_back({{"c", c.get_str()}, {"multiplicity", m}});
  return j;
}

Json violations_json(const CheckResult& r, std::size_t limit = 20) {
  Json j = Json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < limit; ++i) {
    const auto& v = r.violations[i];
    j.push_back({{"kind", v.kind}, {"tiles", v.tiles}, {"detail", v.detail}});
  }
  return j;
}

Json check_json(const CheckResult& r, const char* check) {
  Json j;
  j["ok"] = r.ok;
  j["warning"] = r.warning;
  j["violations"] = r.violations.size();
  j["examples"] = violations_json(r);
  j["check"] = check;
  return j;
}

Json fault_class_json(const FaultRowClass& c) {
  return {{"direction", c.direction},
          {"multiplicity", c.multiplicity},
          {"companion_side", c.companion_side},
          {"description", describe(c)}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(kModule, "read", "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.max_power < 1) throw PreconditionError(kModule, "config", "max power must be at least 1");
  if (cfg_.depth < 1) throw PreconditionError(kModule, "config", "depth must be at least 1");
}

template <typename F>
auto Pipeline::timed(const std::string& stage, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  auto result = f();
  timings_[stage] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

const std::vector<Prototile>& Pipeline::prototiles() {
  if (!prototiles_) prototiles_ = load_tileset(cfg_.tileset_path);
  return *prototiles_;
}

const TileSet& Pipeline::tiles() {
  if (!tiles_) tiles_.emplace(timed("tiles", [&] { return TileSet(prototiles()); }));
  return *tiles_;
}

const Derivation& Pipeline::rules() {
  if (rules_) return *rules_;
  const auto& ts = tiles();
  if (cfg_.cache_path && std::filesystem::exists(*cfg_.cache_path)) {
    try {
      rules_ = timed("rules", [&] { return parse_rules(prototiles(), read_file(*cfg_.cache_path)); });
      rules_source_ = "cache";
      return *rules_;
    } catch (const Error& e) {
      std::cerr << "ignoring cache " << cfg_.cache_path->string() << ": " << e.what() << "\n";
    }
  }
  rules_ = timed("rules", [&] { return derive_rules(ts, cfg_.ensemble); });
  rules_source_ = "derived";
  if (cfg_.cache_path) write_atomic(*cfg_.cache_path, serialize_rules(prototiles(), *rules_));
  return *rules_;
}

const AdjacencyTables& Pipeline::adjacency() {
  if (!adjacency_) {
    const auto& d = rules();
    adjacency_ = timed("adjacency", [&] {
      GenerateOptions g;
      g.width = g.height = cfg_.seed_patch_size;
      g.margin = cfg_.ensemble.margin;
      g.seed = cfg_.ensemble.seed;
      return adjacency_tables(d.normal, to_doubled(d.catalog, generate_hierarchical_patch(tiles(), g)));
    });
  }
  return *adjacency_;
}

const CheckResult& Pipeline::border_forcing() {
  if (!border_forcing_) {
    border_forcing_ = timed("checks", [&] { return check_border_forcing(rules().normal, rules().overlap, adjacency()); });
  }
  return *border_forcing_;
}

const CellComplex& Pipeline::complex() {
  if (!complex_) {
    const auto& bf = border_forcing();
    complex_ = timed("complex", [&] { return build_complex(rules().catalog.size(), adjacency(), bf); });
  }
  return *complex_;
}

const ApproximantCohomology& Pipeline::approximant() {
  if (!approximant_) {
    const auto& c = complex();
    approximant_ = timed("cohomology", [&] { return approximant_cohomology(c); });
  }
  return *approximant_;
}

const InducedAction& Pipeline::action() {
  if (!action_) {
    const auto& h = approximant();
    action_ = timed("cohomology", [&] { return induced_maps(rules().normal, complex(), h); });
  }
  return *action_;
}

const CohomologyResult& Pipeline::cohomology() {
  if (!cohomology_) {
    const auto& act = action();
    cohomology_ = timed("cohomology", [&] { return hull_cohomology(approximant(), act); });
  }
  return *cohomology_;
}

const RationalFunctionZ& Pipeline::zeta() {
  if (!zeta_) {
    const auto& s = cohomology().spectra;
    zeta_ = timed("zeta", [&] { return zeta_from_spectra({s[0], s[1], s[2]}); });
  }
  return *zeta_;
}

const FixedPointAccounting& Pipeline::classification() {
  if (!classification_) {
    const auto& d = rules();
    classification_ = timed("classify", [&] { return classify_fixed_points(tiles(), d.catalog, d.overlap, cfg_.depth); });
  }
  return *classification_;
}

Json Pipeline::census_section() {
  const auto& ts = tiles();
  const auto& d = rules();
  Json j;
  j["prototiles"] = ts.prototiles().size();
  Json orbits = Json::object();
  auto sizes = ts.orbit_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) orbits[ts.prototiles()[i].id] = sizes[i];
  j["orbit_sizes"] = claim(orbits, "oriented_orbit");
  j["oriented_tiles"] = claim(ts.size(), "oriented_orbit");
  j["doubled_tiles"] = claim(d.catalog.size(), "derive_doubled_tiles");
  std::map<int, int> per_base;
  for (const auto& t : d.catalog.tiles()) ++per_base[t.base];
  std::set<int> split;
  for (const auto& [base, n] : per_base) split.insert(n);
  Json sj;
  sj["centers"] = per_base.size();
  sj["classes_per_center"] = split.size() == 1 ? Json(*split.begin()) : Json(std::vector<int>(split.begin(), split.end()));
  j["split"] = claim(sj, "derive_doubled_tiles");
  j["ensemble_patches"] = d.ensemble_patches;
  return j;
}

Json Pipeline::substitution_section() {
  const auto& ts = tiles();
  const auto& d = rules();
  const auto& adj = adjacency();
  Json j;
  timed("checks", [&] {
    j["adjacency"] = claim({{"horizontal", adj.horizontal.size()},
                            {"vertical", adj.vertical.size()},
                            {"quadruples", adj.quadruples.size()}},
                           "adjacency_tables");
    j["overlap_consistency"] = check_json(check_overlap_consistency(d.overlap, adj), "check_overlap_consistency");
    auto cov = check_covariance(ts, d.catalog, d.overlap);
    j["covariance"] = check_json(cov, "check_covariance");
    j["covariance"]["cases"] = d.catalog.size() * 8;
    j["image_centers_anchored"] = claim(image_centers_anchored(ts, d.catalog, d.overlap), "image_centers_anchored");
    j["normal_anchor"] = NormalRule::anchor;
    j["border_forcing"] = check_json(border_forcing(), "check_border_forcing");
    auto m = substitution_matrix(d.normal);
    bool sums = true;
    for (std::size_t c = 0; c < m.entries.size(); ++c) {
      std::int64_t s = 0;
      for (const auto& row : m.entries) s += row[c];
      sums = sums && s == 4;
    }
    j["column_sums_4"] = claim(sums, "substitution_matrix");
    j["primitivity_power"] = claim(m.primitivity_power, "substitution_matrix");
    return 0;
  });
  return j;
}

Json Pipeline::complex_section() {
  const auto& c = complex();
  Json j;
  j["f_vector"] = claim({c.vertices, c.edges, c.faces}, "build_complex");
  j["euler_characteristic"] = claim(c.euler_characteristic(), "build_complex");
  j["boundary_ranks"] = claim({c.boundary1.rank(), c.boundary2.rank()}, "build_complex");
  return j;
}

Json Pipeline::cohomology_section() {
  const auto& r = cohomology();
  Json j;
  Json approx = Json::array(), hull = Json::array(), spectra = Json::array(), index = Json::array();
  for (int k = 0; k < 3; ++k) {
    approx.push_back(r.approximant[k].to_string());
    hull.push_back(r.hull[k].to_string());
    spectra.push_back(spectrum_json(r.spectra[k]));
    index.push_back(r.hull[k].eigen_index.get_str());
  }
  j["approximant"] = claim(approx, "approximant_cohomology");
  j["hull"] = claim(hull, "direct_limit");
  j["spectra"] = claim(spectra, "direct_limit");
  j["eigen_lattice_index"] = claim(index, "direct_limit");
  return j;
}

namespace {

// Eq. (4) as printed, unreduced.
RationalFunctionZ printed_zeta() {
  RationalFunctionZ z;
  z.numerator = {{2, 2}, {1, 1}};
  z.denominator = {{1, 9}, {4, 1}, {2, 10}};
  return z;
}

mpz_class closed_form(int m) {
  mpz_class two = 1;
  two <<= m;
  return two * two + 8 * two + 8;
}

}  // namespace

Json Pipeline::zeta_section() {
  const auto& z = zeta();
  Json j;
  timed("zeta", [&] {
    auto reduced = z.reduced();
    j["function"] = claim(z.to_string(), "zeta_from_action");
    j["reduced"] = claim(reduced.to_string(), "zeta_from_action");
    j["numerator_factors"] = factors_json(reduced.numerator);
    j["denominator_factors"] = factors_json(reduced.denominator);
    j["matches_printed"] = claim(z == printed_zeta(), "zeta_from_action");
    const auto& act = action();
    j["cochain_cancellation"] = claim(zeta_from_matrices({act.A0, act.A1, act.A2}) == z, "zeta_from_action");

    auto series = zeta_series(z, std::max(cfg_.max_power, 3));
    Json a = Json::array(), orbits = Json::array();
    bool closed = true;
    for (std::size_t m = 1; m <= series.a.size(); ++m) {
      a.push_back(series.a[m - 1].get_str());
      closed = closed && series.a[m - 1] == closed_form(static_cast<int>(m));
    }
    for (const auto& o : series.primitive_orbits()) orbits.push_back(o.get_str());
    j["series"] = claim(a, "zeta_series");
    j["primitive_orbits"] = claim(orbits, "zeta_series");
    j["closed_form_numeric"] = claim(closed, "zeta_series");
    // 4^m + 8 2^m + 8 is the log-derivative of 1 / ((1-4z)(1-2z)^8(1-z)^8).
    RationalFunctionZ cf;
    cf.denominator = {{4, 1}, {2, 8}, {1, 8}};
    j["closed_form_symbolic"] = claim(cf == z, "zeta_series");

    auto f = factor_zeta(z);
    j["factorization"] = claim({{"n2d", f.n2d}, {"n1d", f.n1d}, {"nfp", f.nfp}}, "factor_zeta");
    j["reconstruction"] = claim(f.reconstruct() == printed_zeta(), "factor_zeta");
    // Series of the components add up to the series of the product.
    auto s2 = zeta_series(solenoid_2d_zeta(), static_cast<int>(series.a.size()));
    auto s1 = zeta_series(solenoid_1d_zeta(), static_cast<int>(series.a.size()));
    auto s0 = zeta_series(fixed_point_zeta(), static_cast<int>(series.a.size()));
    bool additive = true;
    for (std::size_t m = 0; m < series.a.size(); ++m) {
      additive = additive && series.a[m] == f.n2d * s2.a[m] + f.n1d * s1.a[m] + f.nfp * s0.a[m];
    }
    j["multiplicativity"] = claim(additive, "zeta_series");
    return 0;
  });
  return j;
}

Json Pipeline::periodic_section() {
  const auto& z = zeta();
  const auto& d = rules();
  Json j = Json::array();
  timed("enumerate", [&] {
    // m = 1..3 always: they back an acceptance criterion.
    const int top = std::max(cfg_.max_power, 3);
    auto series = zeta_series(z, top);
    for (int m = 1; m <= top; ++m) {
      auto rep = enumerate_periodic_points(d.overlap, m);
      Json e;
      e["m"] = m;
      e["anchors"] = ((1 << m) - 1) * ((1 << m) - 1);
      e["count"] = claim(rep.count(), "enumerate_periodic_points");
      e["a_m"] = claim(series.a[m - 1].get_str(), "zeta_series");
      e["match"] = series.a[m - 1] == rep.count();
      j.push_back(e);
    }
    return 0;
  });
  return j;
}

Json Pipeline::classification_section() {
  const auto& fa = classification();
  const auto& ts = tiles();
  const auto& cat = rules().catalog;
  Json j;
  Json pts = Json::array();
  for (const auto& p : fa.points) {
    Json e;
    e["tile"] = p.tile;
    e["base"] = ts.label(cat[p.tile].base);
    e["kind"] = to_string(p.kind);
    e["free_half_lines"] = p.free_half_lines;
    e["supertiles"] = p.supertiles;
    e["row"] = p.row ? fault_class_json(*p.row) : Json(nullptr);
    e["column"] = p.column ? fault_class_json(*p.column) : Json(nullptr);
    e["legal"] = p.legal;
    pts.push_back(e);
  }
  j["depth"] = cfg_.depth;
  j["points"] = pts;
  j["total"] = claim(fa.points.size(), "classify_fixed_points");
  j["per_kind"] = claim(fa.per_kind, "classify_fixed_points");
  j["undetermined"] = claim(fa.undetermined, "classify_fixed_points");
  j["line_classes"] = claim({{"horizontal", fa.horizontal_classes}, {"vertical", fa.vertical_classes}},
                            "classify_fixed_points");
  j["partition"] = claim({{"n2d", fa.partition.n2d}, {"n1d", fa.partition.n1d}, {"nfp", fa.partition.nfp}},
                         "classify_fixed_points");
  return j;
}

Json Pipeline::fault_rows_section() {
  const auto& ts = tiles();
  Json j;
  timed("fault_rows", [&] {
    for (Axis axis : {Axis::horizontal, Axis::vertical}) {
      auto classes = enumerate_fault_rows(ts, cfg_.fault_row_length, cfg_.fault_row_margin, axis);
      std::map<std::pair<int, int>, std::set<int>> patterns;
      Json list = Json::array();
      for (const auto& c : classes) {
        patterns[{c.multiplicity, c.companion_side}].insert(c.direction);
        list.push_back(fault_class_json(c));
      }
      bool both = true;
      for (const auto& [pat, dirs] : patterns) both = both && dirs.size() == 2;
      Json e;
      e["classes"] = claim(list, "enumerate_fault_rows");
      e["count"] = claim(classes.size(), "enumerate_fault_rows");
      e["line_patterns"] = claim(patterns.size(), "enumerate_fault_rows");
      e["both_directions"] = claim(both, "enumerate_fault_rows");
      j[axis == Axis::horizontal ? "horizontal" : "vertical"] = e;
    }
    return 0;
  });
  return j;
}

Json Pipeline::properties_section() {
  const auto& c = complex();
  const auto& act = action();
  const auto& d = rules();
  Json j;
  timed("properties", [&] {
    j["boundary_squared_zero"] = claim((c.boundary1 * c.boundary2).is_zero(), "build_complex");

    IntegerMatrix delta0 = c.boundary1.transpose(), delta1 = c.boundary2.transpose();
    j["cochain_commutation"] =
        claim(act.A1 * delta0 == delta0 * act.A0 && act.A2 * delta1 == delta1 * act.A1, "induced_maps");

    bool snf = true;
    for (const auto* m : {&delta0, &delta1}) {
      auto s = smith_normal_form(*m);
      snf = snf && abs(s.U.determinant()) == 1 && abs(s.V.determinant()) == 1 && s.U * *m * s.V == s.D;
      auto f = s.invariant_factors();
      for (std::size_t i = 0; i + 1 < f.size(); ++i) snf = snf && f[i + 1] % f[i] == 0;
      for (int r = 0; r < s.D.rows(); ++r) {
        for (int col = 0; col < s.D.cols(); ++col) snf = snf && (r == col || s.D(r, col) == 0);
      }
    }
    j["smith_normal_form"] = claim(snf, "smith_normal_form");

    bool ch = true;
    for (const auto* a : {&act.A0, &act.A1, &act.A2}) ch = ch && char_poly(*a).eval(*a).is_zero();
    j["cayley_hamilton"] = claim(ch, "char_poly");

    GenerateOptions g;
    g.width = g.height = cfg_.seed_patch_size;
    g.margin = cfg_.ensemble.margin;
    g.seed = cfg_.ensemble.seed + 1;
    auto seed = to_doubled(d.catalog, generate_hierarchical_patch(tiles(), g));
    Json legal_m = Json::array();
    bool all_legal = true;
    for (int m = 1; m <= cfg_.legality_power; ++m) {
      auto img = substitute_patch(d.normal, seed, m);
      bool ok = legal_doubled(d.catalog, img) && legal(tiles(), to_unit(d.catalog, img));
      legal_m.push_back(ok);
      all_legal = all_legal && ok;
    }
    j["substitution_legality"] = claim({{"per_power", legal_m}, {"ok", all_legal}}, "substitute_patch");
    return 0;
  });
  return j;
}

std::string content_hash(const Json& document) {
  Json copy = document;
  copy.erase("timings");
  copy.erase("content_hash");
  return fnv1a64(copy.dump());
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(kModule, "write", "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw ValidationError(kModule, "write", "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace robinson
