#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "monosig/meanfield.hpp"
#include "monosig/monotonicity.hpp"
#include "monosig/order.hpp"
#include "monosig/system.hpp"

namespace monosig {

using Json = nlohmann::ordered_json;

// System document:
//   { "labels": [...], "alpha": [...], "gA": [[col 0], [col 1], ...],
//     "gB": [...], "committed": [labels] }
// The inner arrays of gA and gB are columns.
Json to_json(const SignallingSystem& system);
/// Throws InvalidInput on schema errors or an invalid system.
SignallingSystem system_from_json(const Json& doc);

// Order document: { "edges": [["B", "AB"], ["AB", "A"]] }, each pair less -> greater.
Json to_json(const PartialOrder& order, const SpinSpace& spins);
PartialOrder order_from_json(const Json& doc, const SpinSpace& spins);

Json to_json(const MonotonicityReport& report, const SpinSpace& spins);
Json to_json(const SweepResult& sweep);

/// Parses a JSON file; throws InvalidInput with the path on failure.
Json read_json(const std::filesystem::path& path);

/// 12 significant digits.
std::string format_number(double x);

/// Header "t,<label1>,...", one row per recorded state.
void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& labels);
std::string to_csv(const Trajectory& traj, const std::vector<std::string>& labels);

/// Writes through a temporary file in the same directory and renames it,
/// so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace monosig
