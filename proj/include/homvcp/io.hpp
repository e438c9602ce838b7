#pragma once

// Solution directories and run manifests. Machine files (json) keep full
// precision; human files (csv) use 6 significant digits.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homvcp/engine.hpp"

namespace homvcp {

namespace fs = std::filesystem;

/// Throws IoError when the file is missing or unreadable and SchemaError on
/// malformed json.
nlohmann::json read_json_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& text);

/// Shortest representation with at most 6 significant digits.
std::string format_human(double value);
std::string csv_rows(const std::vector<Vec>& rows);

nlohmann::json vec_to_json(const Vec& v);
/// Throws SchemaError for non-numeric arrays and DimensionMismatch when
/// `expected` >= 0 differs from the length.
Vec vec_from_json(const nlohmann::json& doc, int expected = -1);

/// Overrides fields of `base` from a config document with optional
/// sections "engine", "scalarize" and "solver".
EngineConfig engine_config_from_json(const nlohmann::json& doc, EngineConfig base = {});
nlohmann::json engine_config_to_json(const EngineConfig& config);

nlohmann::json solution_to_json(const ApproxSolution& solution);
ApproxSolution solution_from_json(const nlohmann::json& doc);

/// Closed export chain in original coordinates for m = 2 (far points at
/// distance `far` on the extreme cone rays); the original vertices otherwise.
std::vector<Vec> export_vertices(const ApproxSolution& solution, double far);

struct SolutionFiles {
  fs::path solution;
  fs::path vertices;
  fs::path x;
};

/// Writes solution.json (with the problem document), vertices.csv and X.csv.
SolutionFiles write_solution_dir(const fs::path& dir, const ApproxSolution& solution,
                                 const nlohmann::json& problem_doc);

struct LoadedSolution {
  ApproxSolution solution;
  nlohmann::json problem_doc;
};

LoadedSolution read_solution_dir(const fs::path& dir);

/// Writes manifest.json into `dir`.
fs::path write_manifest(const fs::path& dir, const nlohmann::json& manifest);

}  // namespace homvcp
