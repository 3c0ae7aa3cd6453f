#pragma once

#include "shiftgeom/bundle.hpp"
#include "shiftgeom/criteria.hpp"
#include "shiftgeom/toeplitz.hpp"
#include "shiftgeom/weighted_shift.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace shiftgeom {

using Json = nlohmann::json;

/// Serializes with sorted keys, floats at 17 significant digits, non-finite as null.
std::string dump_json(const Json& value, int indent = 2);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {rows, cols, entries[i][j] = {num: [[re, im], ...], den: [[re, im], ...]}}; den defaults to [1].
AnalyticFrame parse_frame(const Json& doc);
Json frame_to_json(const AnalyticFrame& frame);

/// Frame format plus "analytic": bool.
MatrixSymbol parse_symbol(const Json& doc);
Json symbol_to_json(const MatrixSymbol& symbol);

/// CSV `re,im,value`, radial-major. Partial fields are refused.
void write_heatmap_csv(const DefectField& field, std::ostream& out);
/// CSV `re,im,defect,green_potential`, one row per probe.
void write_criteria_csv(const CriteriaReport& report, const ComplexGrid& grid, std::ostream& out);

Json grid_to_json(const ComplexGrid& grid);
Json criteria_to_json(const CriteriaReport& report, const ComplexGrid& grid);
Json counterexample_to_json(const CounterexampleReport& report);

}  // namespace shiftgeom
