#include "lpr/check_report.hpp"

#include <cmath>
#include <limits>

namespace lpr {

void CheckReport::record(const std::string& name, double residual, double tolerance,
                         const std::vector<double>& point) {
  // NaN must never pass.
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  for (auto& e : entries_) {
    if (e.name != name) continue;
    if (residual > e.max_residual) {
      e.max_residual = residual;
      e.worst_point = point;
    }
    return;
  }
  entries_.push_back({name, residual, tolerance, point});
}

void CheckReport::merge(const CheckReport& other) {
  for (const auto& e : other.entries_) record(e.name, e.max_residual, e.tolerance, e.worst_point);
}

bool CheckReport::passed() const {
  for (const auto& e : entries_)
    if (!e.passed()) return false;
  return true;
}

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

double CheckReport::residual(const std::string& name) const {
  const auto* e = find(name);
  return e ? e->max_residual : std::numeric_limits<double>::quiet_NaN();
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& e : entries_) {
    checks.push_back({{"name", e.name},
                      {"max_residual", std::isfinite(e.max_residual) ? nlohmann::json(e.max_residual)
                                                                      : nlohmann::json("inf")},
                      {"tolerance", e.tolerance},
                      {"passed", e.passed()},
                      {"worst_point", e.worst_point}});
  }
  return {{"passed", passed()}, {"checks", checks}};
}

}  // namespace lpr
