#pragma once

#include "traitpref/core.hpp"
#include "traitpref/inference.hpp"
#include "traitpref/simulate.hpp"
#include "traitpref/solver.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace traitpref::io {

using nlohmann::json;
namespace fs = std::filesystem;

// ============================================================================
// CSV

/// One parsed CSV file: rows of raw string fields. Handles quoted fields with
/// embedded separators, doubled quotes and line breaks.
using CsvRows = std::vector<std::vector<std::string>>;

[[nodiscard]] inline CsvRows parse_csv(std::string_view text, char sep = ',')
{
  CsvRows rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i)
  {
    const char ch = text[i];
    if (quoted)
    {
      if (ch == '"')
      {
        if (i + 1 < text.size() && text[i + 1] == '"')
        {
          field.push_back('"');
          ++i;
        }
        else
          quoted = false;
      }
      else
        field.push_back(ch);
      continue;
    }
    if (ch == '"')
    {
      quoted = true;
      any = true;
    }
    else if (ch == sep)
    {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    }
    else if (ch == '\n' || ch == '\r')
    {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
        ++i;
      if (any || !field.empty())
      {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    }
    else
    {
      field.push_back(ch);
      any = true;
    }
  }
  if (quoted)
    throw DatasetError("unterminated quoted CSV field");
  if (any || !field.empty())
  {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[nodiscard]] inline std::string read_text(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DatasetError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& path, const std::string& text)
{
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DatasetError("cannot write '" + path.string() + "'");
  out << text;
}

[[nodiscard]] inline std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

[[nodiscard]] inline bool parse_double(std::string_view s, double& out)
{
  const std::string t = trim(s);
  if (t.empty())
    return false;
  const char* first = t.data();
  if (*first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size();
}

/// Shortest representation that reads back to the same double.
[[nodiscard]] inline std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

[[nodiscard]] inline std::string quote_csv(const std::string& s)
{
  if (s.find_first_of(",\"\n\r") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
      out += "\"\"";
    else
      out += c;
  }
  return out + "\"";
}

struct LabelledMatrix
{
  Matrix<double> values;
  std::vector<std::string> header; // empty when the file had no header row
};

/// Numeric CSV; a first row containing any non-numeric cell is a header.
[[nodiscard]] inline LabelledMatrix read_matrix_csv(const fs::path& path)
{
  const auto rows = parse_csv(read_text(path));
  LabelledMatrix out;
  std::size_t first = 0;
  if (!rows.empty())
  {
    double tmp = 0.0;
    const bool header = std::any_of(rows[0].begin(), rows[0].end(), [&](const std::string& c) {
      return !parse_double(c, tmp);
    });
    if (header)
    {
      for (const auto& c : rows[0])
        out.header.push_back(trim(c));
      first = 1;
    }
  }
  std::vector<std::vector<double>> data;
  for (std::size_t r = first; r < rows.size(); ++r)
  {
    std::vector<double> vals;
    for (const auto& cell : rows[r])
    {
      double v = 0.0;
      if (!parse_double(cell, v))
        throw DatasetError(
            path.string() + ": row " + std::to_string(r + 1) + ": '" + cell + "' is not a number");
      vals.push_back(v);
    }
    if (!data.empty() && vals.size() != data.front().size())
      throw DatasetError(path.string() + ": row " + std::to_string(r + 1) + " has a different column count");
    data.push_back(std::move(vals));
  }
  if (!out.header.empty() && !data.empty() && out.header.size() != data.front().size())
    throw DatasetError(path.string() + ": header and data column counts differ");
  out.values = Matrix<double>::from_rows(data);
  return out;
}

[[nodiscard]] inline std::string matrix_to_csv(
    const Matrix<double>& m, const std::vector<std::string>& header = {})
{
  std::string out;
  if (!header.empty())
  {
    for (std::size_t c = 0; c < header.size(); ++c)
      out += (c ? "," : "") + quote_csv(header[c]);
    out += '\n';
  }
  for (std::size_t r = 0; r < m.rows(); ++r)
  {
    for (std::size_t c = 0; c < m.cols(); ++c)
      out += (c ? "," : "") + format_double(m(r, c));
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline std::string matrix_to_csv(const Matrix<int>& m)
{
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r)
  {
    for (std::size_t c = 0; c < m.cols(); ++c)
      out += (c ? "," : "") + std::to_string(m(r, c));
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline Matrix<int> to_integer_matrix(const Matrix<double>& m, const std::string& what)
{
  Matrix<int> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
    {
      const double v = m(r, c);
      if (v != std::floor(v))
        throw DatasetError(what + ": entry " + format_double(v) + " is not an integer");
      out(r, c) = static_cast<int>(v);
    }
  return out;
}

[[nodiscard]] inline std::vector<int> read_int_vector_csv(const fs::path& path)
{
  const auto m = read_matrix_csv(path).values;
  std::vector<int> out;
  for (double v : m.data())
  {
    if (v != std::floor(v))
      throw DatasetError(path.string() + ": entry " + format_double(v) + " is not an integer");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// ============================================================================
// JSON envelope {"rows": M, "cols": U, "data": [[...]]}

template <typename T>
[[nodiscard]] json matrix_to_json(const Matrix<T>& m)
{
  json data = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    data.push_back(std::vector<T>(m.row(r).begin(), m.row(r).end()));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

template <typename T>
[[nodiscard]] Matrix<T> matrix_from_json(const json& j)
{
  const json& data = j.is_object() ? j.at("data") : j;
  std::vector<std::vector<T>> rows;
  for (const auto& r : data)
    rows.push_back(r.get<std::vector<T>>());
  auto m = Matrix<T>::from_rows(rows);
  if (j.is_object())
  {
    if (j.contains("rows") && j.at("rows").get<std::size_t>() != m.rows())
      throw DatasetError("matrix envelope: 'rows' does not match data");
    if (j.contains("cols") && !rows.empty() && j.at("cols").get<std::size_t>() != m.cols())
      throw DatasetError("matrix envelope: 'cols' does not match data");
  }
  return m;
}

// ============================================================================
// Inference output

[[nodiscard]] inline json inference_to_json(
    const PreferenceWeights& w,
    const VariationStats& stats,
    const WeightFunctionParams& params,
    const std::string& method,
    const std::vector<std::string>& trait_names = {})
{
  json j;
  j["method"] = method;
  j["params"] = {{"alpha", params.alpha}, {"beta", params.beta}, {"tau", params.tau}, {"c", params.c}};
  j["weights"] = matrix_to_json(w.values());
  if (!trait_names.empty())
    j["trait_names"] = trait_names;
  json st;
  if (!stats.cv_obs.empty())
  {
    st["cv_obs"] = matrix_to_json(stats.cv_obs);
    st["aggregate_mean"] = matrix_to_json(stats.aggregate_mean);
    st["aggregate_std"] = matrix_to_json(stats.aggregate_std);
    st["obs_zero_mean"] = stats.obs_zero_mean;
  }
  if (!stats.cv_div.empty())
  {
    st["cv_div"] = stats.cv_div;
    st["trait_mean"] = stats.trait_mean;
    st["trait_std"] = stats.trait_std;
    st["div_zero_mean"] = stats.div_zero_mean;
  }
  j["stats"] = std::move(st);
  return j;
}

/// Minimal structural check of an inference document.
[[nodiscard]] inline std::vector<std::string> validate_inference_json(const json& j)
{
  std::vector<std::string> problems;
  if (!j.is_object())
    return {"document is not an object"};
  for (const char* key : {"method", "params", "weights", "stats"})
    if (!j.contains(key))
      problems.push_back(std::string("missing '") + key + "'");
  if (j.contains("weights"))
  {
    try
    {
      const auto w = matrix_from_json<double>(j.at("weights"));
      for (double v : w.data())
        if (!(v >= 0.0 && v <= 1.0))
          problems.push_back("weight outside [0,1]");
    }
    catch (const std::exception& e)
    {
      problems.push_back(std::string("weights: ") + e.what());
    }
  }
  if (j.contains("params"))
    for (const char* key : {"alpha", "beta", "tau", "c"})
      if (!j.at("params").contains(key) || !j.at("params").at(key).is_number())
        problems.push_back(std::string("params.") + key + " missing or not a number");
  return problems;
}

// ============================================================================
// Allocation result

[[nodiscard]] inline json allocation_to_json(const AllocationResult& r)
{
  return {
      {"assignment", matrix_to_json(r.assignment.counts())},
      {"objective", r.objective},
      {"optimal", r.optimal},
      {"mode", to_string(r.mode_used)},
      {"nodes_explored", r.nodes_explored},
      {"wall_time_ms", std::chrono::duration<double, std::milli>(r.wall_time).count()},
  };
}

// ============================================================================
// Scenario files

[[nodiscard]] inline json scenario_to_json(const SimulationScenario& sc)
{
  json j{
      {"name", sc.name},
      {"mu", matrix_to_json(sc.mu)},
      {"sigma", matrix_to_json(sc.sigma)},
      {"w_star", matrix_to_json(sc.w_star.values())},
      {"agents_per_species", sc.supply.agents()},
      {"task_count", sc.task_count},
      {"demo_count", sc.demo_count},
      {"seed", sc.seed},
  };
  if (sc.target_assignment)
    j["target_assignment"] = matrix_to_json(sc.target_assignment->counts());
  return j;
}

[[nodiscard]] inline SimulationScenario scenario_from_json(const json& j)
{
  try
  {
    SimulationScenario sc;
    sc.name = j.value("name", std::string("custom"));
    sc.mu = matrix_from_json<double>(j.at("mu"));
    sc.sigma = matrix_from_json<double>(j.at("sigma"));
    sc.task_count = j.value("task_count", std::size_t{3});
    const json& w = j.at("w_star");
    if (w.is_array() && !w.empty() && w.front().is_number())
      sc.w_star = PreferenceWeights::broadcast(sc.task_count, w.get<std::vector<double>>());
    else
      sc.w_star = PreferenceWeights(matrix_from_json<double>(w));
    const json& a = j.at("agents_per_species");
    if (a.is_number())
      sc.supply = TeamComposition(std::vector<int>(sc.mu.rows(), a.get<int>()));
    else
      sc.supply = TeamComposition(a.get<std::vector<int>>());
    sc.demo_count = j.value("demo_count", std::size_t{1000});
    sc.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("target_assignment"))
      sc.target_assignment = AssignmentMatrix(matrix_from_json<int>(j.at("target_assignment")));
    sc.validate();
    return sc;
  }
  catch (const json::exception& e)
  {
    throw InvalidArgument(std::string("invalid scenario: ") + e.what());
  }
}

[[nodiscard]] inline SimulationScenario load_scenario(const fs::path& path)
{
  json j;
  try
  {
    j = json::parse(read_text(path));
  }
  catch (const json::parse_error& e)
  {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

// ============================================================================
// Demonstration-set directories: X_####.csv / Q_####.csv plus manifest.json

inline constexpr const char* demo_manifest_name = "manifest.json";

[[nodiscard]] inline std::string demo_file(char kind, std::size_t i)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c_%04zu.csv", kind, i);
  return buf;
}

inline void save_demonstrations(
    const DemonstrationSet& demos,
    const fs::path& dir,
    const json& extra = json::object())
{
  fs::create_directories(dir);
  json records = json::array();
  for (std::size_t i = 0; i < demos.size(); ++i)
  {
    const auto xname = demo_file('X', i);
    const auto qname = demo_file('Q', i);
    write_text(dir / xname, matrix_to_csv(demos[i].assignment.counts()));
    write_text(dir / qname, matrix_to_csv(demos[i].traits.values(), demos[i].traits.trait_names()));
    records.push_back({{"X", xname}, {"Q", qname}});
  }
  json manifest{
      {"format", "traitpref-demonstrations"},
      {"version", 1},
      {"task_count", demos.task_count()},
      {"trait_count", demos.trait_count()},
      {"records", std::move(records)},
  };
  for (auto it = extra.begin(); it != extra.end(); ++it)
    manifest[it.key()] = it.value();
  write_text(dir / demo_manifest_name, manifest.dump(2) + "\n");
}

[[nodiscard]] inline json load_demo_manifest(const fs::path& dir)
{
  const auto path = dir / demo_manifest_name;
  if (!fs::exists(path))
    throw DatasetError("'" + path.string() + "' not found");
  try
  {
    return json::parse(read_text(path));
  }
  catch (const json::parse_error& e)
  {
    throw DatasetError(path.string() + ": " + e.what());
  }
}

[[nodiscard]] inline DemonstrationSet load_demonstrations(const fs::path& dir)
{
  const json manifest = load_demo_manifest(dir);
  std::vector<Demonstration> records;
  for (const auto& rec : manifest.at("records"))
  {
    const auto x = read_matrix_csv(dir / rec.at("X").get<std::string>());
    const auto q = read_matrix_csv(dir / rec.at("Q").get<std::string>());
    records.push_back(
        {AssignmentMatrix(to_integer_matrix(x.values, rec.at("X").get<std::string>())),
         SpeciesTraitMatrix(q.values, q.header)});
  }
  return DemonstrationSet(std::move(records));
}

} // namespace traitpref::io
