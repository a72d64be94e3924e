#include "lpr/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lpr/errors.hpp"

namespace lpr {

namespace {

constexpr const char* kTruncatedTag = "# truncated: ";

int row_width(const Dims& d) { return 2 * d.n_x() + 2 * d.n_v + d.n_g + 2; }

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("malformed number '" + std::string(s) + "' in trajectory");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Infers the dimensions from the column names.
Dims dims_from_columns(const std::vector<std::string>& cols) {
  auto count = [&](const std::string& prefix) {
    int n = 0;
    while (std::find(cols.begin(), cols.end(), prefix + std::to_string(n + 1)) != cols.end()) ++n;
    return n;
  };
  Dims d;
  const int nx = count("x"), nv = count("f"), ng = count("p");
  d.n_g = ng;
  d.n_p = nx + ng;
  d.n_v = nv;
  if (cols != column_names(d)) throw ConfigError("trajectory columns do not follow the fixed layout");
  return d;
}

}  // namespace

void Trajectory::validate() const {
  if (times.size() != states.size() || times.size() != energies.size())
    throw ShapeError("trajectory columns have different lengths");
  const long w = row_width(dims) - 2;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].size() != w) throw ShapeError("trajectory row has wrong width");
    if (k > 0 && !(times[k] > times[k - 1])) throw DomainError("trajectory times are not strictly increasing");
  }
}

std::vector<std::string> column_names(const Dims& d) {
  std::vector<std::string> cols{"t"};
  auto add = [&](const char* prefix, int n) {
    for (int i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
  };
  add("x", d.n_x());
  add("f", d.n_v);
  add("xdot", d.n_x());
  add("fdot", d.n_v);
  add("p", d.n_g);
  cols.push_back("E");
  return cols;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("float formatting failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  traj.validate();
  const auto cols = column_names(traj.dims);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_double(traj.times[k]);
    for (int i = 0; i < traj.states[k].size(); ++i) os << ',' << format_double(traj.states[k](i));
    os << ',' << format_double(traj.energies[k]) << '\n';
  }
  if (traj.truncated()) {
    std::string msg = traj.error;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    os << kTruncatedTag << msg << '\n';
  }
}

Trajectory read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty trajectory file");
  std::vector<std::string> cols;
  for (auto c : split(line, ',')) cols.emplace_back(c);
  Trajectory traj;
  traj.dims = dims_from_columns(cols);
  const std::size_t width = cols.size();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind(kTruncatedTag, 0) == 0) {
      traj.error = line.substr(std::string(kTruncatedTag).size());
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != width) throw ConfigError("trajectory row has " + std::to_string(fields.size()) + " fields");
    traj.times.push_back(parse_double(fields.front()));
    VecD s(width - 2);
    for (std::size_t i = 1; i + 1 < width; ++i) s(i - 1) = parse_double(fields[i]);
    traj.states.push_back(std::move(s));
    traj.energies.push_back(parse_double(fields.back()));
  }
  traj.validate();
  return traj;
}

nlohmann::json to_json(const Trajectory& traj) {
  traj.validate();
  const auto cols = column_names(traj.dims);
  nlohmann::json j = nlohmann::json::object();
  j["columns"] = cols;
  j["t"] = traj.times;
  for (std::size_t i = 1; i + 1 < cols.size(); ++i) {
    std::vector<double> series;
    series.reserve(traj.states.size());
    for (const auto& s : traj.states) series.push_back(s(static_cast<int>(i - 1)));
    j[cols[i]] = std::move(series);
  }
  j["E"] = traj.energies;
  j["truncated"] = traj.truncated() ? nlohmann::json(traj.error) : nlohmann::json(nullptr);
  j["metadata"] = traj.metadata;
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  try {
    const auto cols = j.at("columns").get<std::vector<std::string>>();
    Trajectory traj;
    traj.dims = dims_from_columns(cols);
    traj.times = j.at("t").get<std::vector<double>>();
    traj.energies = j.at("E").get<std::vector<double>>();
    traj.states.assign(traj.times.size(), VecD(cols.size() - 2));
    for (std::size_t i = 1; i + 1 < cols.size(); ++i) {
      const auto series = j.at(cols[i]).get<std::vector<double>>();
      if (series.size() != traj.times.size()) throw ShapeError("column " + cols[i] + " has wrong length");
      for (std::size_t k = 0; k < series.size(); ++k) traj.states[k](static_cast<int>(i - 1)) = series[k];
    }
    if (j.contains("truncated") && !j["truncated"].is_null()) traj.error = j["truncated"].get<std::string>();
    if (j.contains("metadata")) traj.metadata = j["metadata"];
    traj.validate();
    return traj;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed trajectory JSON: ") + e.what());
  }
}

void write_trajectory(const std::string& path, const std::string& format, const Trajectory& traj) {
  std::ostringstream buf;
  if (format == "csv")
    write_csv(buf, traj);
  else if (format == "json")
    buf << to_json(traj).dump(2) << '\n';
  else
    throw ConfigError("unknown output format '" + format + "' (expected csv or json)");
  if (path.empty() || path == "-") {
    std::cout << buf.str();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << buf.str();
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace lpr
