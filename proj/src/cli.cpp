#include "ridgeprox/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ridgeprox/criteria.hpp"
#include "ridgeprox/paths.hpp"
#include "ridgeprox/repro.hpp"

namespace ridgeprox::cli {

namespace {

using Clock = std::chrono::steady_clock;

const char* const kDocumentKeys[] = {"points", "labels", "directions", "field", "exact", "tolerances"};

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw Error("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

Rational rational_at(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer() || j.is_number_unsigned()) return parse_rational(j.dump());
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>())) throw Error(where + ": number is not finite");
    return rational_from_double(j.get<double>());
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  throw Error(where + ": expected a number or a \"p/q\" string");
}

double double_at(const nlohmann::json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  return rational_at(j, where).convert_to<double>();
}

std::vector<Rational> rational_row(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw Error(where + ": expected an array");
  std::vector<Rational> row;
  for (std::size_t i = 0; i < j.size(); ++i) row.push_back(rational_at(j[i], where + "[" + std::to_string(i) + "]"));
  return row;
}

Vector to_doubles(const ExactVector& v) {
  Vector out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(r.convert_to<double>());
  return out;
}

ExactVector parse_vector_text(const std::string& text, const std::string& what) {
  if (trim(text).empty()) throw Error(what + " is required");
  ExactVector out;
  for (const auto& tok : split(text, ',')) {
    try {
      out.push_back(parse_rational(tok));
    } catch (const Error& e) {
      throw Error(what + ": " + e.what());
    }
  }
  return out;
}

Tolerance make_tolerance(const CommonOptions& common, Tolerance base) {
  if (common.abs_tol) base.abs_tol = *common.abs_tol;
  if (common.rel_tol) base.rel_tol = *common.rel_tol;
  if (!(base.abs_tol >= 0) || !(base.rel_tol >= 0)) throw Error("tolerances must be nonnegative");
  return base;
}

PointSet make_point_set(std::vector<ExactVector> rows, ExactVector d1, ExactVector d2, std::vector<std::string> labels,
                        bool exact, Tolerance tol) {
  if (exact) return PointSet::exact(std::move(rows), std::move(d1), std::move(d2), std::move(labels), tol);
  std::vector<Vector> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(to_doubles(r));
  return PointSet(std::move(pts), Direction(to_doubles(d1)), Direction(to_doubles(d2)), tol, std::move(labels));
}

Json json_vector(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(json_number(x));
  return out;
}

template <class T>
Json json_indices(const std::vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x);
  return out;
}

Json json_path(const Path& p) {
  Json steps = Json::array();
  for (auto s : p.steps) steps.push_back(std::string(to_string(s)));
  return Json{{"points", json_indices(p.points)}, {"steps", steps}};
}

Json common_echo(const CommonOptions& c) {
  Json j;
  j["input"] = c.input;
  j["exact"] = c.exact;
  j["abs_tol"] = c.abs_tol ? json_number(*c.abs_tol) : Json(nullptr);
  j["rel_tol"] = c.rel_tol ? json_number(*c.rel_tol) : Json(nullptr);
  j["max_closed_points"] = c.max_closed_points;
  j["seed"] = c.seed;
  if (!c.dir1.empty()) j["dir1"] = c.dir1;
  if (!c.dir2.empty()) j["dir2"] = c.dir2;
  return j;
}

std::vector<std::string> merge_warnings(const PointSet& ps) {
  std::vector<std::string> out;
  for (int which : {1, 2}) {
    const auto merged = fibers(ps, which).merged_classes;
    if (merged > 0) {
      out.push_back(std::to_string(merged) + " a" + std::to_string(which) +
                    "-fibers merged distinct projection values under the tolerance");
    }
  }
  return out;
}

Json finish(std::string name, Json options, std::uint64_t digest, Json results, const std::vector<std::string>& warnings,
            Clock::time_point start) {
  Json report;
  report["command"] = Json{{"name", std::move(name)}, {"options", std::move(options)}};
  report["input_digest"] = hex64(digest);
  report["results"] = std::move(results);
  report["warnings"] = json_indices(warnings);
  report["timing_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

Json json_probe(const SectionProbe& p) {
  Json j;
  j["probe"] = p.probe;
  j["x0"] = json_vector(p.x0);
  j["delta"] = json_number(p.delta);
  j["delta0"] = p.delta0 ? json_number(*p.delta0) : Json(nullptr);
  j["sigma_witness"] = p.sigma_witness ? Json(*p.sigma_witness) : Json(nullptr);
  j["failures"] = json_indices(p.failures);
  return j;
}

std::string probe_csv(const SectionSystemReport& report) {
  std::string csv = "probe,delta,delta0,pass\n";
  for (const auto& p : report.per_probe) {
    csv += std::to_string(p.probe) + "," + format_double(p.delta) + "," + (p.delta0 ? format_double(*p.delta0) : "") +
           "," + (p.delta0 ? "true" : "false") + "\n";
  }
  return csv;
}

Json section_results(const SectionSystemReport& report, const SectionSystemOptions& options) {
  Json j;
  j["passes"] = report.passes;
  j["deltas"] = json_vector(options.deltas);
  j["shrink"] = json_number(options.shrink);
  std::size_t failed = 0;
  for (const auto& p : report.per_probe) failed += p.delta0 ? 0 : 1;
  j["failed_probes"] = failed;
  Json probes = Json::array();
  for (const auto& p : report.per_probe) probes.push_back(json_probe(p));
  j["probes"] = std::move(probes);
  return j;
}

SectionSystemOptions section_options(const std::vector<double>& deltas, double shrink, std::size_t max_steps,
                                     std::vector<std::size_t> probes) {
  SectionSystemOptions o;
  if (!deltas.empty()) o.deltas = deltas;
  for (double d : o.deltas) {
    if (!(d > 0) || !std::isfinite(d)) throw Error("every delta must be positive");
  }
  if (!(shrink > 0 && shrink < 1)) throw Error("shrink must lie in (0, 1)");
  o.shrink = shrink;
  o.max_steps = max_steps;
  o.probes = std::move(probes);
  return o;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + 16, value, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

InputDocument parse_document(std::string_view text, const CommonOptions& common) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw Error("document: expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(kDocumentKeys), std::end(kDocumentKeys), key) == std::end(kDocumentKeys)) {
      throw Error("document: unknown key '" + key + "'");
    }
  }
  if (!doc.contains("points")) throw Error("document: missing 'points'");
  if (!doc.contains("directions")) throw Error("document: missing 'directions'");

  const auto& jp = doc["points"];
  if (!jp.is_array()) throw Error("points: expected an array");
  if (jp.empty()) throw Error("points: the point set is empty");
  std::vector<ExactVector> rows;
  for (std::size_t i = 0; i < jp.size(); ++i) rows.push_back(rational_row(jp[i], "points[" + std::to_string(i) + "]"));

  const auto& jd = doc["directions"];
  if (!jd.is_array() || jd.size() != 2) throw Error("directions: expected exactly two vectors");
  ExactVector d1 = rational_row(jd[0], "directions[0]");
  ExactVector d2 = rational_row(jd[1], "directions[1]");

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const auto& jl = doc["labels"];
    if (!jl.is_array()) throw Error("labels: expected an array of strings");
    for (std::size_t i = 0; i < jl.size(); ++i) {
      if (!jl[i].is_string()) throw Error("labels[" + std::to_string(i) + "]: expected a string");
      labels.push_back(jl[i].get<std::string>());
    }
  }

  bool exact = common.exact;
  if (doc.contains("exact")) {
    if (!doc["exact"].is_boolean()) throw Error("exact: expected a boolean");
    exact = exact || doc["exact"].get<bool>();
  }

  Tolerance tol;
  if (doc.contains("tolerances")) {
    const auto& jt = doc["tolerances"];
    if (!jt.is_object()) throw Error("tolerances: expected an object");
    for (const auto& [key, value] : jt.items()) {
      if (key == "abs") {
        tol.abs_tol = double_at(value, "tolerances.abs");
      } else if (key == "rel") {
        tol.rel_tol = double_at(value, "tolerances.rel");
      } else {
        throw Error("tolerances: unknown key '" + key + "'");
      }
    }
  }
  tol = make_tolerance(common, tol);

  std::optional<ScalarField> field;
  if (doc.contains("field")) {
    const auto& jf = doc["field"];
    if (!jf.is_array()) throw Error("field: expected an array");
    if (jf.size() != rows.size()) {
      throw Error("field: expected " + std::to_string(rows.size()) + " values, got " + std::to_string(jf.size()));
    }
    ScalarField f;
    for (std::size_t i = 0; i < jf.size(); ++i) {
      f.push_back(double_at(jf[i], "field[" + std::to_string(i) + "]"));
      if (!std::isfinite(f.back())) throw Error("field[" + std::to_string(i) + "]: value is not finite");
    }
    field = std::move(f);
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw Error("points[" + std::to_string(i) + "]: expected dimension " + std::to_string(rows[0].size()) + ", got " +
                  std::to_string(rows[i].size()));
    }
  }
  return {make_point_set(std::move(rows), std::move(d1), std::move(d2), std::move(labels), exact, tol), std::move(field),
          fnv1a64(text)};
}

InputDocument parse_points_csv(std::string_view text, const CommonOptions& common) {
  ExactVector d1 = parse_vector_text(common.dir1, "--dir1");
  ExactVector d2 = parse_vector_text(common.dir2, "--dir2");

  std::vector<std::string> header;
  std::vector<ExactVector> rows;
  std::vector<std::string> labels;
  ScalarField field;
  std::ptrdiff_t f_col = -1;
  std::ptrdiff_t label_col = -1;
  std::size_t width = 0;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line, ',');
    const std::string where = "line " + std::to_string(line_no);

    if (width == 0) {
      width = cells.size();
      bool numeric = true;
      for (const auto& c : cells) {
        try {
          (void)parse_rational(c);
        } catch (const Error&) {
          numeric = false;
        }
      }
      if (!numeric) {
        header = cells;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c] == "f") f_col = static_cast<std::ptrdiff_t>(c);
          if (cells[c] == "label") label_col = static_cast<std::ptrdiff_t>(c);
        }
        continue;
      }
    }
    if (cells.size() != width) {
      throw Error(where + ": expected " + std::to_string(width) + " columns, got " + std::to_string(cells.size()));
    }
    ExactVector row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto col = static_cast<std::ptrdiff_t>(c);
      if (col == label_col) {
        labels.push_back(cells[c]);
        continue;
      }
      Rational v;
      try {
        v = parse_rational(cells[c]);
      } catch (const Error& e) {
        const std::string name = header.empty() ? std::to_string(c) : header[c];
        throw Error(where + ", column " + name + ": " + e.what());
      }
      if (col == f_col) {
        field.push_back(v.convert_to<double>());
      } else {
        row.push_back(std::move(v));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("points: the point set is empty");

  std::optional<ScalarField> f;
  if (f_col >= 0) f = std::move(field);
  return {make_point_set(std::move(rows), std::move(d1), std::move(d2), std::move(labels), common.exact,
                         make_tolerance(common, {})),
          std::move(f), fnv1a64(text)};
}

InputDocument load_input(const CommonOptions& common) {
  if (common.input.empty()) throw Error("--input is required");
  const std::string text = read_file(common.input);
  if (std::filesystem::path(common.input).extension() == ".csv") return parse_points_csv(text, common);
  return parse_document(text, common);
}

Output cmd_analyze(const CommonOptions& common) {
  const auto start = Clock::now();
  const InputDocument in = load_input(common);
  const PointSet& ps = in.points;
  const PathGraph graph(ps);
  auto warnings = merge_warnings(ps);

  Json r;
  r["points"] = ps.size();
  r["dimension"] = ps.dim();
  r["exact"] = ps.is_exact();
  r["fibers"] = Json{{"a1", graph.fibers(StepKind::perp_a1).size()}, {"a2", graph.fibers(StepKind::perp_a2).size()}};
  const RelationGraph rel = graph.relation_graph();
  r["edges"] = Json{{"perp_a1", rel.count(StepKind::perp_a1)}, {"perp_a2", rel.count(StepKind::perp_a2)}};
  const OrbitPartition orb = graph.orbits();
  Json sizes = Json::array();
  Json members = Json::array();
  for (const auto& c : orb.classes) {
    sizes.push_back(c.size());
    members.push_back(json_indices(c));
  }
  r["orbits"] = Json{{"count", orb.size()}, {"sizes", sizes}, {"members", members}};
  r["irreducible_bound"] = graph.irreducible_bound();

  const ClosedPathLimits limits;
  if (ps.size() <= limits.max_set_points) {
    Json paths = Json::array();
    for (const auto& p : graph.closed_paths(common.max_closed_points, limits)) paths.push_back(json_path(p));
    r["closed_paths"] = std::move(paths);
  } else {
    r["closed_paths"] = nullptr;
    warnings.push_back("closed-path enumeration skipped: more than " + std::to_string(limits.max_set_points) +
                       " points");
  }
  return {finish("analyze", common_echo(common), in.digest, std::move(r), warnings, start), ""};
}

Output cmd_fit(const CommonOptions& common, const FitArgs& args) {
  const auto start = Clock::now();
  if (args.method != "lp" && args.method != "alternating") {
    throw Error("unknown method '" + args.method + "' (expected lp or alternating)");
  }
  const InputDocument in = load_input(common);
  if (!in.field) throw Error("fit needs a field");
  const PointSet& ps = in.points;
  const PathGraph graph(ps);

  ApproxResult res;
  if (args.method == "lp") {
    ridgeprox::FitOptions fo;
    fo.max_closed_points = common.max_closed_points;
    res = minimax_fit(ps, *in.field, fo);
  } else {
    res = alternating_algorithm(ps, *in.field, args.max_rounds, args.stop_tol);
  }

  auto table = [](const FiberPartition& fib, const std::vector<double>& values) {
    Json t = Json::array();
    for (std::size_t c = 0; c < fib.size(); ++c) {
      t.push_back(Json{{"level", json_number(fib.class_value[c])}, {"value", json_number(values[c])}});
    }
    return t;
  };

  Json r;
  r["method"] = args.method;
  r["error"] = json_number(res.error);
  r["u"] = table(graph.fibers(StepKind::perp_a1), res.ridge_sum.u);
  r["v"] = table(graph.fibers(StepKind::perp_a2), res.ridge_sum.v);
  if (res.certificate) {
    Json cert = json_path(res.certificate->path);
    cert["alternating_sum"] = json_number(res.certificate->alternating_sum);
    cert["functional_value"] = json_number(res.certificate->functional_value);
    r["certificate"] = std::move(cert);
  } else {
    r["certificate"] = nullptr;
  }
  r[args.method == "lp" ? "pivots" : "rounds"] = res.iterations;

  Json echo = common_echo(common);
  echo["method"] = args.method;
  if (args.method == "alternating") {
    echo["max_rounds"] = args.max_rounds;
    echo["stop_tol"] = json_number(args.stop_tol);
  }
  return {finish("fit", std::move(echo), in.digest, std::move(r), merge_warnings(ps), start), ""};
}

Output cmd_check(const CommonOptions& common, const CheckArgs& args) {
  const auto start = Clock::now();
  static const char* const kCriteria[] = {"path-bound", "cross-section", "thm21", "thm22"};
  if (std::find(std::begin(kCriteria), std::end(kCriteria), args.criterion) == std::end(kCriteria)) {
    throw Error("unknown criterion '" + args.criterion + "' (expected path-bound, cross-section, thm21 or thm22)");
  }
  const InputDocument in = load_input(common);
  const PointSet& ps = in.points;
  Json echo = common_echo(common);
  echo["criterion"] = args.criterion;
  Json r;
  std::string csv;

  if (args.criterion == "path-bound") {
    echo["threshold"] = args.threshold;
    const PathGraph graph(ps);
    std::size_t best = 1, from = 0, to = 0;
    for (std::size_t s = 0; s < ps.size(); ++s) {
      const auto lengths = graph.shortest_lengths(s);
      for (std::size_t t = s + 1; t < lengths.size(); ++t) {
        if (lengths[t] > best) {
          best = lengths[t];
          from = s;
          to = t;
        }
      }
    }
    const PathBoundCheck check = check_uniform_path_bound(ps, args.threshold);
    r["threshold"] = args.threshold;
    r["bound"] = check.bound;
    r["passes"] = check.passes;
    r["witness"] = best > 1 ? json_path(*graph.shortest(from, to)) : Json(nullptr);
  } else if (args.criterion == "cross-section") {
    bool any = false;
    for (int which : {1, 2}) {
      const auto w = find_cross_section(ps, which);
      const std::string key = "a" + std::to_string(which);
      if (w) {
        any = true;
        r[key] = Json{{"level", json_number(w->level)}, {"section", json_indices(w->section)}};
      } else {
        r[key] = nullptr;
      }
    }
    r["passes"] = any;
  } else if (args.criterion == "thm21") {
    if (ps.dim() < 3) throw Error("thm21 needs points of dimension 3 or more");
    const auto basis = complete_basis(ps);
    const auto options = section_options(args.deltas, args.shrink, args.max_steps, args.probes);
    echo["deltas"] = json_vector(options.deltas);
    echo["shrink"] = json_number(options.shrink);
    echo["max_steps"] = options.max_steps;
    echo["probes"] = json_indices(options.probes);
    const auto report = check_section_system(ps, basis, options);
    r = section_results(report, options);
    csv = probe_csv(report);
  } else {
    std::vector<ScalarField> family;
    if (!args.fields.empty()) {
      echo["fields"] = args.fields;
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(read_file(args.fields));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("malformed field family: ") + e.what());
      }
      if (!doc.is_array()) throw Error("field family: expected an array of fields");
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "fields[" + std::to_string(i) + "]";
        if (!doc[i].is_array() || doc[i].size() != ps.size()) {
          throw Error(where + ": expected " + std::to_string(ps.size()) + " values");
        }
        ScalarField f;
        for (std::size_t j = 0; j < doc[i].size(); ++j) f.push_back(double_at(doc[i][j], where));
        if (!constant_on_fibers(ps, f, 1)) throw Error(where + ": field is not constant on a1-fibers");
        family.push_back(std::move(f));
      }
    } else {
      echo["samples"] = args.samples;
      const auto first = fibers(ps, 1);
      std::mt19937_64 rng(common.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (std::size_t s = 0; s < args.samples; ++s) {
        std::vector<double> level(first.size());
        for (auto& v : level) v = dist(rng);
        ScalarField f(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) f[i] = level[first.class_of[i]];
        family.push_back(std::move(f));
      }
    }
    const std::size_t n0 = irreducible_bound(ps);
    const double c = static_cast<double>(n0) / 2.0;
    const auto probe = variation_ratio_probe(ps, family);
    bool passes = true;
    Json rows = Json::array();
    for (const auto& rep : probe.reports) {
      const bool holds = rep.lhs <= c * rep.rhs + 1e-9;
      passes = passes && holds;
      rows.push_back(Json{{"lhs", json_number(rep.lhs)},
                          {"rhs", json_number(rep.rhs)},
                          {"ratio", json_number(rep.ratio)},
                          {"holds", holds}});
    }
    r["n0"] = n0;
    r["c"] = json_number(c);
    r["max_ratio"] = json_number(probe.max_ratio);
    r["passes"] = passes;
    r["fields"] = std::move(rows);
  }
  return {finish("check", std::move(echo), in.digest, std::move(r), merge_warnings(ps), start), csv};
}

Output cmd_repro(const CommonOptions& common, const ReproArgs& args) {
  const auto start = Clock::now();
  Json echo = common_echo(common);
  echo["case"] = args.case_name;
  Json r;
  std::string csv;
  std::vector<std::string> warnings;

  if (args.case_name == "section1") {
    echo["n"] = args.n;
    echo["series"] = args.series;
    const auto rows = verify_g2_divergence(args.n, SeriesSpec::parse(args.series));
    csv = "k,partial_sum,g2_span\n";
    Json table = Json::array();
    bool monotone = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (i > 0 && !(row.g2_span > rows[i - 1].g2_span)) monotone = false;
      worst = std::max(worst, row.minimax_error);
      csv += std::to_string(row.k) + "," + format_double(row.partial_sum) + "," + format_double(row.g2_span) + "\n";
      table.push_back(Json{{"k", row.k},
                           {"partial_sum", json_number(row.partial_sum)},
                           {"g2_span", json_number(row.g2_span)},
                           {"minimax_error", json_number(row.minimax_error)}});
    }
    r["rows"] = std::move(table);
    r["monotone"] = monotone;
    r["max_minimax_error"] = json_number(worst);
  } else if (args.case_name == "square") {
    if (args.k == 0) throw Error("k must be at least 1");
    echo["k"] = args.k;
    echo["extra_grid"] = args.extra_grid;
    csv = "k,lhs,rhs,ratio\n";
    Json table = Json::array();
    bool ok = true;
    for (std::size_t k = 1; k <= args.k; ++k) {
      const SquareCheck check = verify_square_ratio(k, args.extra_grid);
      ok = ok && check.ok();
      for (const auto& d : check.diagnostics) warnings.push_back("k = " + std::to_string(k) + ": " + d);
      csv += std::to_string(k) + "," + format_double(check.report.lhs) + "," + format_double(check.report.rhs) + "," +
             format_double(check.report.ratio) + "\n";
      table.push_back(Json{{"k", k},
                           {"lhs", json_number(check.report.lhs)},
                           {"rhs", json_number(check.report.rhs)},
                           {"ratio", json_number(check.report.ratio)},
                           {"ok", check.ok()}});
    }
    r["rows"] = std::move(table);
    r["passes"] = ok;
  } else if (args.case_name == "examples") {
    const ExampleSet which = parse_example_set(args.set);
    echo["set"] = args.set;
    echo["density"] = args.density;
    ExampleOptions eo;
    if (!args.ball_dir1.empty()) eo.ball_dir1 = parse_vector_text(args.ball_dir1, "--ball-dir1");
    if (!args.ball_dir2.empty()) eo.ball_dir2 = parse_vector_text(args.ball_dir2, "--ball-dir2");
    std::optional<ExactVector> probe;
    if (!args.probe.empty()) {
      std::string joined;
      for (const auto& p : args.probe) joined += (joined.empty() ? "" : ",") + p;
      probe = parse_vector_text(joined, "--probe");
      eo.forced.push_back(*probe);
      echo["probe"] = joined;
    }
    const PointSet ps = build_example_set(which, args.density, eo);
    std::vector<std::size_t> probes;
    if (probe) {
      const auto idx = ps.find(*probe);
      if (!idx) throw Error("probe point is missing from the sample");
      probes.push_back(*idx);
    }
    const auto options = section_options(args.deltas, 0.5, 20, probes);
    echo["deltas"] = json_vector(options.deltas);
    const auto basis = complete_basis(ps);
    const auto report = check_section_system(ps, basis, options);
    r = section_results(report, options);
    r["points"] = ps.size();
    csv = probe_csv(report);
  } else {
    throw Error("unknown case '" + args.case_name + "' (expected section1, square or examples)");
  }
  const std::uint64_t digest = fnv1a64(echo.dump());
  return {finish("repro", std::move(echo), digest, std::move(r), warnings, start), csv};
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ridge-sum approximation on finite point sets"};
  app.require_subcommand(1);

  CommonOptions common;
  FitArgs fit;
  CheckArgs check;
  ReproArgs repro;

  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--input", common.input, "Point-set document (.json) or CSV points (.csv)");
    sub->add_flag("--exact", common.exact, "Exact rational arithmetic");
    sub->add_option("--abs-tol", common.abs_tol, "Absolute tolerance for projection equality");
    sub->add_option("--rel-tol", common.rel_tol, "Relative tolerance for projection equality");
    sub->add_option("--out", common.out, "Write the JSON report here instead of stdout");
    sub->add_option("--csv", common.csv, "Write the CSV series here");
    sub->add_option("--max-closed-points", common.max_closed_points, "Longest closed path enumerated");
    sub->add_option("--seed", common.seed, "Seed for randomized sweeps");
    sub->add_option("--dir1", common.dir1, "First direction for CSV input, e.g. 1,0");
    sub->add_option("--dir2", common.dir2, "Second direction for CSV input");
  };

  auto* analyze = app.add_subcommand("analyze", "Orbits, path bound and closed paths");
  add_common(analyze);

  auto* fit_cmd = app.add_subcommand("fit", "Best sup-norm approximation by ridge sums");
  add_common(fit_cmd);
  fit_cmd->add_option("--method", fit.method, "lp or alternating")->check(CLI::IsMember({"lp", "alternating"}));
  fit_cmd->add_option("--max-rounds", fit.max_rounds, "Round limit for the alternating method");
  fit_cmd->add_option("--stop-tol", fit.stop_tol, "Stopping tolerance for the alternating method");

  auto* check_cmd = app.add_subcommand("check", "Sufficient conditions on the point set");
  add_common(check_cmd);
  check_cmd->add_option("criterion", check.criterion, "path-bound, cross-section, thm21 or thm22")->required();
  check_cmd->add_option("--threshold", check.threshold, "Path-length threshold");
  check_cmd->add_option("--deltas", check.deltas, "Comma-separated delta values")->delimiter(',');
  check_cmd->add_option("--shrink", check.shrink, "Factor between successive delta0 trials");
  check_cmd->add_option("--max-steps", check.max_steps, "Number of delta0 trials");
  check_cmd->add_option("--probe", check.probes, "Probe point indices")->delimiter(',');
  check_cmd->add_option("--fields", check.fields, "JSON list of fields constant on a1-fibers");
  check_cmd->add_option("--samples", check.samples, "Random fields when --fields is absent");

  auto* repro_cmd = app.add_subcommand("repro", "Reproduce the explicit constructions");
  add_common(repro_cmd);
  repro_cmd->add_option("--case", repro.case_name, "section1, square or examples")->required();
  repro_cmd->add_option("--n", repro.n, "Truncation length for section1");
  repro_cmd->add_option("--series", repro.series, "harmonic, unit or power:P");
  repro_cmd->add_option("--k", repro.k, "Largest k for square");
  repro_cmd->add_option("--extra-grid", repro.extra_grid, "Grid nodes per axis added to the square set");
  repro_cmd->add_option("--set", repro.set, "Example set: a, b or c");
  repro_cmd->add_option("--density", repro.density, "Sample nodes per axis");
  repro_cmd->add_option("--deltas", repro.deltas, "Comma-separated delta values")->delimiter(',');
  repro_cmd->add_option("--probe", repro.probe, "Probe point forced into the sample, e.g. 7/4,0,0")->delimiter(',');
  repro_cmd->add_option("--ball-dir1", repro.ball_dir1, "First direction for the ball");
  repro_cmd->add_option("--ball-dir2", repro.ball_dir2, "Second direction for the ball");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Output result;
    if (analyze->parsed()) {
      result = cmd_analyze(common);
    } else if (fit_cmd->parsed()) {
      result = cmd_fit(common, fit);
    } else if (check_cmd->parsed()) {
      result = cmd_check(common, check);
    } else {
      result = cmd_repro(common, repro);
    }
    const std::string text = result.report.dump(2) + "\n";
    if (!common.csv.empty() && !result.csv.empty()) write_file_atomic(common.csv, result.csv);
    if (common.out.empty()) {
      out << text;
    } else {
      write_file_atomic(common.out, text);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ridgeprox::cli
