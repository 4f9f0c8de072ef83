#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lms/core.hpp"
#include "lms/search.hpp"

namespace lms::io {

/// Version of the JSON report layout written by to_json(SolverReport).
inline constexpr int kReportSchemaVersion = 1;

/// Reads the observation table: header `x1,...,xp,y`, one row per
/// observation, decimal reals. Malformed text throws ErrorCode::parse;
/// shape and rank problems surface from Dataset as invalid_dataset.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const Dataset& data);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const IndexSet& s);  // one-based
nlohmann::json to_json(const CandidateFit& fit);
nlohmann::json to_json(const LocalMinimumRecord& record);
nlohmann::json to_json(const SolverReport& report);
nlohmann::json to_json(const std::vector<ProfilePoint>& profile);

}  // namespace lms::io
