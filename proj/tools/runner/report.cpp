#include "report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavelab::runner {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}
std::string fmt(std::size_t x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }

json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

std::string CsvTable::render() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) os << ',';
      const auto& c = cells[k];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        os << '"';
        for (char ch : c) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      } else {
        os << c;
      }
    }
    os << '\n';
  };
  line(columns);
  for (const auto& r : rows) {
    if (r.size() != columns.size()) throw std::logic_error("csv row width mismatch in " + name);
    line(r);
  }
  return os.str();
}

void RunReport::check(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
  if (!pass && status == kPass) status = kAssertionFailure;
}

json RunReport::summary() const {
  json s = json::object();
  for (const auto& [k, v] : results.items())
    if (v.is_primitive()) s[k] = v;
  return s;
}

json RunReport::to_json(bool include_wall_clock) const {
  json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["config"] = config;
  j["results"] = results;
  j["refinement"] = refinement;
  json cs = json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = cs;
  json files = json::array();
  for (const auto& t : tables) files.push_back(t.name + ".csv");
  j["artifacts"] = files;
  if (!error.is_null()) j["error"] = error;
  j["status"] = status;
  if (include_wall_clock) j["wall_clock"] = wall_clock;
  return j;
}

std::filesystem::path RunReport::write(const std::filesystem::path& out) const {
  const auto dir = out / command / config_hash;
  std::filesystem::create_directories(dir);
  for (const auto& t : tables) {
    std::ofstream f(dir / (t.name + ".csv"), std::ios::binary);
    f << t.render();
    if (!f) throw std::runtime_error("cannot write " + (dir / (t.name + ".csv")).string());
  }
  std::ofstream f(dir / "report.json", std::ios::binary);
  f << to_json().dump(2) << '\n';
  if (!f) throw std::runtime_error("cannot write " + (dir / "report.json").string());
  return dir;
}

}  // namespace wavelab::runner
