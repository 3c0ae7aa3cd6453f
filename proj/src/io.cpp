#include "shiftgeom/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace shiftgeom {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_into(const Json& v, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        newline(depth + 1);
        dump_into(v[i], indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? fmt17(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

std::string at_path(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorKind::data, "expected an object", path.empty() ? "root" : path);
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::data, "missing field", at_path(path, key));
  return *it;
}

int require_dim(const Json& doc, const std::string& key) {
  const Json& v = require(doc, key, "");
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096)
    throw Error(ErrorKind::data, "must be an integer in [1, 4096]", key);
  return v.get<int>();
}

cplx parse_complex(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw Error(ErrorKind::data, "coefficient must be [re, im]", path);
  const cplx c(v[0].get<double>(), v[1].get<double>());
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(ErrorKind::data, "non-finite coefficient", path);
  return c;
}

Polynomial parse_poly(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw Error(ErrorKind::data, "must be a non-empty coefficient list", path);
  std::vector<cplx> c;
  for (std::size_t i = 0; i < v.size(); ++i) c.push_back(parse_complex(v[i], path + "[" + std::to_string(i) + "]"));
  return Polynomial(std::move(c));
}

Json poly_to_json(const Polynomial& p) {
  Json arr = Json::array();
  for (const cplx& c : p.coeffs()) arr.push_back(Json::array({c.real(), c.imag()}));
  return arr;
}

struct RationalMatrix {
  int rows;
  int cols;
  std::vector<Rational> entries;
};

RationalMatrix parse_entries(const Json& doc, bool allow_other_keys) {
  if (!doc.is_object()) throw Error(ErrorKind::data, "document must be an object", "root");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "rows" && it.key() != "cols" && it.key() != "entries" && !(allow_other_keys && it.key() == "analytic"))
      throw Error(ErrorKind::data, "unknown field", it.key());
  RationalMatrix m;
  m.rows = require_dim(doc, "rows");
  m.cols = require_dim(doc, "cols");
  const Json& e = require(doc, "entries", "");
  if (!e.is_array() || e.size() != static_cast<std::size_t>(m.rows))
    throw Error(ErrorKind::data, "entries must be a list of `rows` rows", "entries");
  for (int i = 0; i < m.rows; ++i) {
    const std::string rp = "entries[" + std::to_string(i) + "]";
    const Json& row = e[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(m.cols))
      throw Error(ErrorKind::data, "row must have `cols` entries", rp);
    for (int j = 0; j < m.cols; ++j) {
      const std::string ep = rp + "[" + std::to_string(j) + "]";
      const Json& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_object()) throw Error(ErrorKind::data, "entry must be an object {num, den}", ep);
      for (auto it = cell.begin(); it != cell.end(); ++it)
        if (it.key() != "num" && it.key() != "den") throw Error(ErrorKind::data, "unknown field", ep + "." + it.key());
      Polynomial num = parse_poly(require(cell, "num", ep), ep + ".num");
      Polynomial den = cell.contains("den") ? parse_poly(cell.at("den"), ep + ".den") : Polynomial::constant(1.0);
      if (den.is_zero()) throw Error(ErrorKind::data, "zero denominator", ep + ".den");
      m.entries.emplace_back(std::move(num), std::move(den));
    }
  }
  return m;
}

Json entries_to_json(int rows, int cols, const std::vector<Rational>& entries) {
  Json e = Json::array();
  for (int i = 0; i < rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < cols; ++j) {
      const Rational& r = entries[static_cast<std::size_t>(i * cols + j)];
      row.push_back({{"num", poly_to_json(r.num())}, {"den", poly_to_json(r.den())}});
    }
    e.push_back(std::move(row));
  }
  return {{"rows", rows}, {"cols", cols}, {"entries", std::move(e)}};
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump_into(value, indent, 0, out);
  out += '\n';
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string(), path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::data, std::string("JSON parse error: ") + e.what(), path.string());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string(), path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string(), path.string());
}

AnalyticFrame parse_frame(const Json& doc) {
  RationalMatrix m = parse_entries(doc, false);
  return AnalyticFrame(m.rows, m.cols, std::move(m.entries));
}

Json frame_to_json(const AnalyticFrame& frame) { return entries_to_json(frame.rows(), frame.cols(), frame.entries()); }

MatrixSymbol parse_symbol(const Json& doc) {
  RationalMatrix m = parse_entries(doc, true);
  const Json& a = require(doc, "analytic", "");
  if (!a.is_boolean()) throw Error(ErrorKind::data, "must be true or false", "analytic");
  const SymbolClass cls = a.get<bool>() ? SymbolClass::analytic : SymbolClass::general;
  return MatrixSymbol(m.rows, m.cols, std::move(m.entries), cls);
}

Json symbol_to_json(const MatrixSymbol& symbol) {
  Json j = entries_to_json(symbol.rows(), symbol.cols(), symbol.entries());
  j["analytic"] = symbol.analytic();
  return j;
}

void write_heatmap_csv(const DefectField& field, std::ostream& out) {
  if (field.partial())
    throw Error(ErrorKind::partial,
                "defect field is partial (" + std::to_string(field.failures.size()) + " failed points); heatmap refused");
  if (!field.grid) throw Error(ErrorKind::parameter, "defect field has no grid", "field");
  const auto& pts = field.grid->points();
  out << "re,im,value\n";
  for (std::size_t i = 0; i < pts.size(); ++i)
    out << fmt17(pts[i].real()) << ',' << fmt17(pts[i].imag()) << ',' << fmt17(field.values[i]) << '\n';
  if (!out) throw Error(ErrorKind::io, "failed writing heatmap CSV");
}

void write_criteria_csv(const CriteriaReport& report, const ComplexGrid& grid, std::ostream& out) {
  out << "re,im,defect,green_potential\n";
  for (const GreenProbe& p : report.probes) {
    const cplx z = grid.points().at(p.index);
    out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(p.defect) << ',' << fmt17(p.potential) << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "failed writing criteria CSV");
}

Json grid_to_json(const ComplexGrid& grid) {
  return {{"radial_count", grid.radial_count()},
          {"angular_count", grid.angular_count()},
          {"margin", grid.margin()},
          {"points", grid.size()}};
}

Json criteria_to_json(const CriteriaReport& r, const ComplexGrid& grid) {
  Json failures = Json::array();
  for (const PointFailure& f : r.failures) failures.push_back({{"index", f.index}, {"message", f.message}});
  return {
      {"gram_bounds", {{"c_min", r.gram.c_min}, {"c_max", r.gram.c_max}, {"max_condition", r.gram.max_condition}}},
      {"green_inf", r.green_inf},
      {"carleson_const", r.carleson_const},
      {"pointwise_const", r.pointwise_const},
      {"verdict", r.verdict()},
      {"grid", grid_to_json(grid)},
      {"thresholds", {{"M", r.thresholds.green_bound}, {"C", r.thresholds.constant}}},
      {"checks",
       {{"gram", r.gram_pass}, {"green", r.green_pass}, {"carleson", r.carleson_pass}, {"pointwise", r.pointwise_pass}}},
      {"carleson_depth", r.carleson_depth},
      {"probe_count", r.probes.size()},
      {"partial", r.partial},
      {"failures", std::move(failures)},
  };
}

Json counterexample_to_json(const CounterexampleReport& r) {
  Json spikes = Json::array();
  for (const SpikeBound& s : r.spikes)
    spikes.push_back({{"j", s.j},
                      {"N_j", s.start},
                      {"A_j", s.peak},
                      {"A_j_grid", s.grid_peak},
                      {"x_star", s.x_star},
                      {"bound", s.bound}});
  Json radii = Json::array();
  for (double x : r.radii) radii.push_back(x);
  return {
      {"epsilon", r.epsilon},
      {"alpha", r.alpha},
      {"length", r.length},
      {"spikes", std::move(spikes)},
      {"ratio_check", r.ratio.max_ratio},
      {"ratio_bound", r.ratio.bound},
      {"kernel_ratio",
       {{"min", r.kernel.min_ratio},
        {"max", r.kernel.max_ratio},
        {"certified_error", r.kernel.max_error},
        {"lower_bound", r.kernel.lower_bound},
        {"holds", r.kernel.holds}}},
      {"radii", std::move(radii)},
      {"max_weight", r.max_weight},
      {"growth_max", r.growth_max},
      {"almost_isometry", {{"max_ratio", r.isometry.max_ratio}, {"bound", r.isometry.bound}, {"holds", r.isometry.holds}}},
  };
}

}  // namespace shiftgeom
