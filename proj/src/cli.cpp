#include "shiftgeom/cli.hpp"

#include "shiftgeom/bundle.hpp"
#include "shiftgeom/toeplitz.hpp"
#include "shiftgeom/weighted_shift.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace shiftgeom {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kConfigKeys{
    "command", "frame",     "symbol",  "second_symbol", "grid",    "truncation",  "thresholds",
    "carleson_depth", "probe_stride", "output_dir", "points", "heatmap", "order", "lambda",
    "epsilon", "spike_count", "length", "radii"};

[[noreturn]] void bad(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::data, message, field);
}

double get_number(const Json& v, const std::string& field) {
  if (!v.is_number()) bad(field, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(field, "must be finite");
  return d;
}

long long get_integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "must be an integer");
  return v.get<long long>();
}

cplx get_complex(const Json& v, const std::string& field) {
  if (v.is_number()) return {get_number(v, field), 0.0};
  if (!v.is_array() || v.size() != 2) bad(field, "must be [re, im]");
  return {get_number(v[0], field + "[0]"), get_number(v[1], field + "[1]")};
}

fs::path get_path(const Json& v, const std::string& field, const fs::path& base) {
  if (!v.is_string() || v.get<std::string>().empty()) bad(field, "must be a non-empty path string");
  const fs::path p(v.get<std::string>());
  return p.is_absolute() ? p : base / p;
}

void check_keys(const Json& obj, const std::set<std::string>& keys, const std::string& prefix) {
  if (!obj.is_object()) bad(prefix.empty() ? "root" : prefix, "must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!keys.count(it.key())) bad(prefix.empty() ? it.key() : prefix + "." + it.key(), "unknown key");
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message(), "output_dir");
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string(), path.string());
  out.imbue(std::locale::classic());
  fn(out);
}

Json summarize_field(const DefectField& field) {
  double lo = INFINITY;
  double hi = -INFINITY;
  std::vector<double> weighted;
  const auto& area = field.grid->area_weights();
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double v = field.values[i];
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    weighted.push_back(v * area[i]);
  }
  Json failures = Json::array();
  for (const PointFailure& f : field.failures) failures.push_back({{"index", f.index}, {"message", f.message}});
  return {{"min", lo}, {"max", hi}, {"integral", tree_sum(weighted)}, {"partial", field.partial()},
          {"failures", std::move(failures)}};
}

Json run_curvature(const RunConfig& c) {
  const AnalyticFrame frame = parse_frame(read_json_file(c.frame));
  auto grid = std::make_shared<const ComplexGrid>(build_grid(c.grid));
  const DefectField field = defect_field(frame, grid);
  const GramBounds gram = gram_bounds(frame, *grid);

  Json points = Json::array();
  for (cplx z : c.points) {
    const BundleCurvature b = full_bundle_curvature(frame, z, c.truncation);
    points.push_back({{"lambda", complex_json(z)},
                      {"total", b.total},
                      {"shift_part", b.shift_part},
                      {"defect", b.defect},
                      {"direct_total", b.direct_total},
                      {"discrepancy", b.discrepancy},
                      {"truncation_error", b.truncation_error}});
  }
  Json report{{"command", "curvature"},
              {"frame", {{"rows", frame.rows()}, {"cols", frame.cols()}}},
              {"grid", grid_to_json(*grid)},
              {"truncation", c.truncation},
              {"gram_bounds", {{"c_min", gram.c_min}, {"c_max", gram.c_max}, {"max_condition", gram.max_condition}}},
              {"defect_field", summarize_field(field)},
              {"points", std::move(points)}};
  write_text_file(c.output_dir / "report.json", dump_json(report));
  if (c.heatmap) {
    write_with(c.output_dir / "grid.csv", [&](std::ostream& o) { write_grid_csv(*grid, o); });
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    write_heatmap_csv(field, buf);  // refuses partial fields
    write_text_file(c.output_dir / "defect.csv", buf.str());
  }
  return report;
}

Json run_criteria(const RunConfig& c) {
  const AnalyticFrame frame = parse_frame(read_json_file(c.frame));
  auto grid = std::make_shared<const ComplexGrid>(build_grid(c.grid));
  CriteriaOptions opt;
  opt.thresholds = c.thresholds;
  opt.carleson_depth = c.carleson_depth;
  opt.probe_stride = c.probe_stride;
  const CriteriaReport r = similarity_verdict(frame, grid, opt);
  Json report = criteria_to_json(r, *grid);
  report["command"] = "criteria";
  write_text_file(c.output_dir / "report.json", dump_json(report));
  if (c.heatmap) write_with(c.output_dir / "criteria.csv", [&](std::ostream& o) { write_criteria_csv(r, *grid, o); });
  return report;
}

// Residual of the kernel action for orders 2..N and the geometric decay rate of its tail.
Json kernel_action_decay(const MatrixSymbol& f, cplx lambda, int order) {
  CVector e = CVector::Zero(f.rows());
  e(0) = 1.0;
  Json residuals = Json::array();
  std::vector<double> r;
  for (int n = 2; n <= order; ++n) {
    r.push_back(kernel_action_check(f, lambda, e, n));
    residuals.push_back({{"order", n}, {"residual", r.back()}});
  }
  // fit over the stretch where the residual sits well above roundoff
  double rate = NAN;
  std::size_t first = r.size() / 2;
  std::size_t last = first;
  for (std::size_t i = first; i < r.size() && r[i] > 1e-12; ++i) last = i;
  if (last > first && r[first] > 0.0) rate = std::pow(r[last] / r[first], 1.0 / static_cast<double>(last - first));
  return {{"lambda", complex_json(lambda)}, {"residuals", std::move(residuals)}, {"decay_ratio", rate},
          {"expected_ratio", std::abs(lambda)}};
}

Json run_toeplitz(const RunConfig& c) {
  const MatrixSymbol f = parse_symbol(read_json_file(c.symbol));
  const ToeplitzSection s = toeplitz_section(f, c.order);
  Json report{{"command", "toeplitz"},
              {"symbol", {{"rows", f.rows()}, {"cols", f.cols()}, {"analytic", f.analytic()}}},
              {"order", c.order},
              {"section", {{"norm", operator_norm(s.matrix)}, {"aliasing_bound", s.aliasing_bound}}}};
  if (f.analytic()) {
    std::optional<MatrixSymbol> g;
    if (!c.second_symbol.empty()) g = parse_symbol(read_json_file(c.second_symbol));
    else if (f.rows() == f.cols()) g = f;
    if (g) {
      if (f.cols() != g->rows()) throw Error(ErrorKind::data, "symbol dimensions do not compose", "second_symbol");
      report["multiplicativity"] = multiplicativity_check(f, *g, c.order);
    }
    report["kernel_action"] = kernel_action_decay(f, c.lambda, c.order);
    report["intertwining"] = intertwining_check(f, c.order);
    if (f.rows() == 1 && f.cols() == 1) {
      const InnerOuter io = scalar_inner_outer(f.entry(0, 0));
      Json zeros = Json::array();
      for (cplx z : io.zeros) zeros.push_back(complex_json(z));
      report["inner_outer"] = {{"zeros", std::move(zeros)},
                               {"inner_modulus_error", io.inner_modulus_error},
                               {"modulus_error", io.modulus_error},
                               {"outer_winding", io.outer_winding}};
    }
    if (f.rows() >= f.cols()) {
      const ComplexGrid grid = build_grid(c.grid);
      const MarginResult m = left_invertibility_margin(f, grid);
      report["left_invertibility"] = {{"delta", m.delta}, {"argmin", complex_json(m.argmin)},
                                      {"failures", m.failures.size()}, {"grid", grid_to_json(grid)}};
    }
  }
  write_text_file(c.output_dir / "report.json", dump_json(report));
  return report;
}

Json run_counterexample(const RunConfig& c) {
  const CounterexampleReport r = build_counterexample(c.epsilon, c.spike_count, c.length, c.radii);
  Json report = counterexample_to_json(r);
  report["command"] = "counterexample";
  report["spike_count"] = c.spike_count;
  write_text_file(c.output_dir / "report.json", dump_json(report));
  if (c.heatmap) {
    const WeightSequence w = build_spike_weight(c.epsilon, c.spike_count, r.length);
    write_with(c.output_dir / "weights.csv", [&](std::ostream& o) { write_weight_csv(w, o); });
  }
  return report;
}

int exit_code_for(const Error& e) { return e.is_numerical() ? 3 : 2; }

void report_error(const fs::path* out_dir, const std::string& kind, const std::string& message,
                  const std::string& field, int code) {
  Json err{{"error", {{"kind", kind}, {"message", message}, {"field", field}, {"exit_code", code}}}};
  const std::string text = dump_json(err);
  std::cerr << text;
  if (out_dir) {
    try {
      ensure_dir(*out_dir);
      write_text_file(*out_dir / "error.json", text);
    } catch (const std::exception&) {
      // stderr already has it
    }
  }
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "curvature") return Command::curvature;
  if (name == "criteria") return Command::criteria;
  if (name == "toeplitz") return Command::toeplitz;
  if (name == "counterexample") return Command::counterexample;
  return std::nullopt;
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::curvature: return "curvature";
    case Command::criteria: return "criteria";
    case Command::toeplitz: return "toeplitz";
    case Command::counterexample: return "counterexample";
  }
  return "unknown";
}

RunConfig parse_run_config(const Json& doc, const fs::path& base_dir) {
  check_keys(doc, kConfigKeys, "");
  RunConfig c;
  if (doc.contains("command")) {
    const Json& v = doc["command"];
    if (!v.is_string() || !parse_command(v.get<std::string>()))
      bad("command", "must be one of curvature, criteria, toeplitz, counterexample");
    c.command = *parse_command(v.get<std::string>());
  }
  if (doc.contains("frame")) c.frame = get_path(doc["frame"], "frame", base_dir);
  if (doc.contains("symbol")) c.symbol = get_path(doc["symbol"], "symbol", base_dir);
  if (doc.contains("second_symbol")) c.second_symbol = get_path(doc["second_symbol"], "second_symbol", base_dir);
  if (doc.contains("output_dir")) c.output_dir = get_path(doc["output_dir"], "output_dir", base_dir);
  if (doc.contains("grid")) {
    const Json& g = doc["grid"];
    check_keys(g, {"radial_count", "angular_count", "margin"}, "grid");
    if (g.contains("radial_count")) c.grid.radial_count = static_cast<int>(get_integer(g["radial_count"], "grid.radial_count"));
    if (g.contains("angular_count"))
      c.grid.angular_count = static_cast<int>(get_integer(g["angular_count"], "grid.angular_count"));
    if (g.contains("margin")) c.grid.margin = get_number(g["margin"], "grid.margin");
  }
  if (doc.contains("truncation")) {
    const long long n = get_integer(doc["truncation"], "truncation");
    if (n < 1) bad("truncation", "must be >= 1");
    c.truncation = static_cast<std::size_t>(n);
  }
  if (doc.contains("thresholds")) {
    const Json& t = doc["thresholds"];
    check_keys(t, {"M", "C"}, "thresholds");
    if (t.contains("M")) c.thresholds.green_bound = get_number(t["M"], "thresholds.M");
    if (t.contains("C")) c.thresholds.constant = get_number(t["C"], "thresholds.C");
  }
  if (doc.contains("carleson_depth")) c.carleson_depth = static_cast<int>(get_integer(doc["carleson_depth"], "carleson_depth"));
  if (doc.contains("probe_stride")) c.probe_stride = static_cast<int>(get_integer(doc["probe_stride"], "probe_stride"));
  if (doc.contains("points")) {
    const Json& p = doc["points"];
    if (!p.is_array()) bad("points", "must be a list of [re, im]");
    c.points.clear();
    for (std::size_t i = 0; i < p.size(); ++i) c.points.push_back(get_complex(p[i], "points[" + std::to_string(i) + "]"));
  }
  if (doc.contains("heatmap")) {
    if (!doc["heatmap"].is_boolean()) bad("heatmap", "must be true or false");
    c.heatmap = doc["heatmap"].get<bool>();
  }
  if (doc.contains("order")) c.order = static_cast<int>(get_integer(doc["order"], "order"));
  if (doc.contains("lambda")) c.lambda = get_complex(doc["lambda"], "lambda");
  if (doc.contains("epsilon")) c.epsilon = get_number(doc["epsilon"], "epsilon");
  if (doc.contains("spike_count")) c.spike_count = static_cast<int>(get_integer(doc["spike_count"], "spike_count"));
  if (doc.contains("length")) {
    const long long n = get_integer(doc["length"], "length");
    if (n < 0) bad("length", "must be >= 0");
    c.length = static_cast<std::size_t>(n);
  }
  if (doc.contains("radii")) {
    const Json& r = doc["radii"];
    if (!r.is_array() || r.empty()) bad("radii", "must be a non-empty list");
    c.radii.clear();
    for (std::size_t i = 0; i < r.size(); ++i) c.radii.push_back(get_number(r[i], "radii[" + std::to_string(i) + "]"));
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.grid.radial_count < 1 || c.grid.radial_count > 4096) bad("grid.radial_count", "must lie in [1, 4096]");
  if (c.grid.angular_count < 1 || c.grid.angular_count > 65536) bad("grid.angular_count", "must lie in [1, 65536]");
  if (!(c.grid.margin > 0.0 && c.grid.margin < 1.0)) bad("grid.margin", "must lie in (0, 1)");
  if (c.truncation < 1 || c.truncation > 65536) bad("truncation", "must lie in [1, 65536]");
  if (!(c.thresholds.green_bound > 0.0)) bad("thresholds.M", "must be positive");
  if (!(c.thresholds.constant > 0.0)) bad("thresholds.C", "must be positive");
  if (c.carleson_depth < 0 || c.carleson_depth > 30) bad("carleson_depth", "must lie in [0, 30]");
  if (c.probe_stride < 1) bad("probe_stride", "must be >= 1");
  for (std::size_t i = 0; i < c.points.size(); ++i)
    if (!(std::abs(c.points[i]) < 1.0)) bad("points[" + std::to_string(i) + "]", "must lie in the open unit disk");
  if (c.order < 2 || c.order > 4096) bad("order", "must lie in [2, 4096]");
  if (!(std::abs(c.lambda) < 1.0)) bad("lambda", "must lie in the open unit disk");
  if (!(c.epsilon > 0.0)) bad("epsilon", "must be positive");
  if (c.spike_count < 1 || c.spike_count > 40) bad("spike_count", "must lie in [1, 40]");
  for (std::size_t i = 0; i < c.radii.size(); ++i)
    if (!(c.radii[i] >= 0.0 && c.radii[i] < 1.0)) bad("radii[" + std::to_string(i) + "]", "must lie in [0, 1)");
  switch (c.command) {
    case Command::curvature:
    case Command::criteria:
      if (c.frame.empty()) bad("frame", "required for this command");
      break;
    case Command::toeplitz:
      if (c.symbol.empty()) bad("symbol", "required for this command");
      break;
    case Command::counterexample:
      break;
  }
}

Json run(const RunConfig& config) {
  validate(config);
  ensure_dir(config.output_dir);
  switch (config.command) {
    case Command::curvature: return run_curvature(config);
    case Command::criteria: return run_criteria(config);
    case Command::toeplitz: return run_toeplitz(config);
    case Command::counterexample: return run_counterexample(config);
  }
  throw Error(ErrorKind::parameter, "unknown command", "command");
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Eigenvector bundle geometry of backward-shift models on the disk", "shiftgeom"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  int grid_radial = 0;
  int grid_angular = 0;
  double margin = 0.0;
  long long truncation = 0;
  app.add_option("command", command, "curvature | criteria | toeplitz | counterexample")->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* k_opt = app.add_option("--grid-radial", grid_radial, "radial levels K");
  auto* m_opt = app.add_option("--grid-angular", grid_angular, "angular samples M");
  auto* x_opt = app.add_option("--margin", margin, "grid margin");
  auto* n_opt = app.add_option("--truncation", truncation, "coefficient truncation N");

  fs::path out_path;
  const fs::path* out_ptr = nullptr;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(nullptr, "parameter", e.what(), "argv", 2);
    return 2;
  }
  if (!out_dir.empty()) {
    out_path = out_dir;
    out_ptr = &out_path;
  }

  try {
    const auto cmd = parse_command(command);
    if (!cmd) throw Error(ErrorKind::parameter, "unknown command '" + command + "'", "command");
    const fs::path cfg(config_path);
    const Json doc = read_json_file(cfg);
    RunConfig config = parse_run_config(doc, cfg.parent_path().empty() ? fs::path(".") : cfg.parent_path());
    if (doc.contains("command") && config.command != *cmd)
      throw Error(ErrorKind::data, "config command does not match the command line", "command");
    config.command = *cmd;
    if (out_opt->count()) config.output_dir = out_dir;
    out_path = config.output_dir;
    out_ptr = &out_path;
    if (k_opt->count()) config.grid.radial_count = grid_radial;
    if (m_opt->count()) config.grid.angular_count = grid_angular;
    if (x_opt->count()) config.grid.margin = margin;
    if (n_opt->count()) {
      if (truncation < 1) throw Error(ErrorKind::data, "must be >= 1", "truncation");
      config.truncation = static_cast<std::size_t>(truncation);
      config.order = static_cast<int>(std::min<long long>(truncation, 1 << 20));
    }
    std::error_code ec;
    fs::remove(config.output_dir / "error.json", ec);
    run(config);
    return 0;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(out_ptr, std::string(to_string(e.kind())), e.what(), e.field(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(out_ptr, "internal", e.what(), "", 3);
    return 3;
  }
}

}  // namespace shiftgeom
