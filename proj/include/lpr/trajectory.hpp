#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpr/linalg.hpp"
#include "lpr/model.hpp"

namespace lpr {

// Reduced-state time series. Row layout: t, state (x, f~, xdot, f~dot, p), E.
struct Trajectory {
  Dims dims;
  std::vector<double> times;
  std::vector<VecD> states;
  std::vector<double> energies;
  nlohmann::json metadata = nlohmann::json::object();
  std::string error;  // non-empty when the run was truncated

  bool truncated() const { return !error.empty(); }
  // Throws ShapeError on ragged rows and DomainError on non-increasing times.
  void validate() const;
};

std::vector<std::string> column_names(const Dims& dims);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Header line, one row per sample, and "# truncated: <msg>" last when
// truncated. Metadata is carried only by the JSON form.
void write_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_csv(std::istream& is);

// {"columns": [...], "t": [...], "x1": [...], ..., "E": [...],
//  "truncated": null | msg, "metadata": {...}}
nlohmann::json to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

// Writes to `path` in "csv" or "json" form, or to stdout when path is empty.
void write_trajectory(const std::string& path, const std::string& format, const Trajectory& traj);

}  // namespace lpr
