#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lpr {

// One named residual, maximised over the points it was evaluated at.
struct CheckEntry {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::vector<double> worst_point;
  bool passed() const { return max_residual <= tolerance; }
};

class CheckReport {
 public:
  // Folds a residual observed at `point` into the entry called `name`.
  void record(const std::string& name, double residual, double tolerance,
              const std::vector<double>& point = {});
  void merge(const CheckReport& other);

  bool passed() const;
  const std::vector<CheckEntry>& entries() const { return entries_; }
  const CheckEntry* find(const std::string& name) const;
  double residual(const std::string& name) const;

  nlohmann::json to_json() const;

 private:
  std::vector<CheckEntry> entries_;
};

}  // namespace lpr
