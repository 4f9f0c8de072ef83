#include "lms/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lms::io {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& text, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::parse, "line " + std::to_string(line) + ": '" + text +
                                      "' is not a decimal real");
  }
  return value;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) header = split_fields(line);
  }
  if (header.size() < 2) throw Error(ErrorCode::parse, "missing header row `x1,...,xp,y`");
  const std::size_t p = header.size() - 1;
  for (std::size_t j = 0; j < p; ++j) {
    if (header[j] != "x" + std::to_string(j + 1)) {
      throw Error(ErrorCode::parse, "header column " + std::to_string(j + 1) + " must be x" +
                                        std::to_string(j + 1) + ", found '" + header[j] + "'");
    }
  }
  if (header.back() != "y") throw Error(ErrorCode::parse, "last header column must be y");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != p + 1) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(p + 1) + " fields, found " +
                                        std::to_string(fields.size()));
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_real(f, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::parse, "no observations");

  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix x(n, static_cast<Eigen::Index>(p));
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < p; ++j) x(i, static_cast<Eigen::Index>(j)) = r[j];
    y(i) = r[p];
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open '" + path + "'");
  return read_csv(in);
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::domain, "cannot format real");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t j = 0; j < data.p(); ++j) out << 'x' << j + 1 << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.p(); ++j) {
      out << format_real(data.x()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
          << ',';
    }
    out << format_real(data.response(i)) << '\n';
  }
}

nlohmann::json to_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

nlohmann::json to_json(const IndexSet& s) { return nlohmann::json(s.one_based()); }

nlohmann::json to_json(const CandidateFit& fit) {
  return {{"theta", to_json(fit.theta)}, {"rho", fit.rho},          {"active", to_json(fit.active)},
          {"eps", fit.eps},             {"lambda", fit.lambda}, {"degenerate", fit.degenerate}};
}

nlohmann::json to_json(const LocalMinimumRecord& record) {
  auto j = to_json(record.fit);
  j["k"] = record.k;
  j["value"] = record.value;
  return j;
}

nlohmann::json to_json(const SolverReport& report) {
  nlohmann::json optimizers = nlohmann::json::array();
  for (const auto& f : report.optimizers) optimizers.push_back(to_json(f));
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : report.trace) {
    trace.push_back({{"subset", to_json(t.subset)}, {"theta", to_json(t.theta)}, {"value", t.value}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"value", report.value},
          {"value_squared", report.value * report.value},
          {"optimizers", optimizers},
          {"subproblems_solved", report.subproblems_solved},
          {"candidates_examined", report.candidates_examined},
          {"trace", trace},
          {"warnings", report.warnings}};
}

nlohmann::json to_json(const std::vector<ProfilePoint>& profile) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& pt : profile) out.push_back({{"theta", pt.theta}, {"value", pt.value}});
  return out;
}

}  // namespace lms::io
