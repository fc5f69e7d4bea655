#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wavelab::runner {

namespace {

const json& empty_object() {
  static const json e = json::object();
  return e;
}

std::string kind_name(const json& v) {
  return v.type_name();
}

}  // namespace

const std::vector<std::string>& command_ids() {
  static const std::vector<std::string> ids = {"exponents", "solve",     "free",      "iterate",    "threshold", "blowup",
                                               "john-check", "norm",     "verify-1d", "verify-2d",  "hardy",     "splitting",
                                               "domination", "overlap",  "geometry",  "sweep"};
  return ids;
}

bool is_command(const std::string& id) {
  const auto& ids = command_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  bool any = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string part = text.substr(pos, comma - pos);
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("grid", "expected t=<N>,r=<N>, got '" + text + "'");
    const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), n);
    if (ec != std::errc() || ptr != val.data() + val.size() || n < 1)
      throw ConfigError("grid." + key, "expected a positive integer, got '" + val + "'");
    if (key == "t") g.t = n;
    else if (key == "r") g.r = n;
    else throw ConfigError("grid." + key, "unknown axis (expected t or r)");
    any = true;
    pos = comma + 1;
  }
  if (!any) throw ConfigError("grid", "empty grid spec");
  return g;
}

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  j["params"] = params;
  j["seed"] = seed;
  if (grid) {
    json g = json::object();
    if (grid->t) g["t"] = grid->t;
    if (grid->r) g["r"] = grid->r;
    j["grid"] = g;
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (k != "command" && k != "params" && k != "seed" && k != "grid" && k != "out")
      throw ConfigError(k, "unknown field");
  ExperimentConfig c;
  if (!j.contains("command") || !j["command"].is_string()) throw ConfigError("command", "required string");
  c.command = j["command"].get<std::string>();
  if (!is_command(c.command)) throw ConfigError("command", "unknown command '" + c.command + "'");
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("params", "must be an object");
    c.params = j["params"];
  }
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("seed", "must be a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw ConfigError("grid", "must be an object {t, r}");
    GridSpec gs;
    for (const auto& [k, v] : g.items()) {
      if (k != "t" && k != "r") throw ConfigError("grid." + k, "unknown axis (expected t or r)");
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) throw ConfigError("grid." + k, "must be a positive integer");
      (k == "t" ? gs.t : gs.r) = v.get<std::size_t>();
    }
    if (!gs.t && !gs.r) throw ConfigError("grid", "empty grid spec");
    c.grid = gs;
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out", "must be a string");
    c.out = j["out"].get<std::string>();
  }
  return c;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

ParamReader::ParamReader(const json& object, std::string path) : obj_(&object), path_(std::move(path)) {
  if (!obj_->is_object()) throw ConfigError(path_, "must be an object");
}

const json* ParamReader::lookup(const std::string& key) {
  used_.insert(key);
  const auto it = obj_->find(key);
  return it == obj_->end() || it->is_null() ? nullptr : &*it;
}

bool ParamReader::has(const std::string& key) const {
  const auto it = obj_->find(key);
  return it != obj_->end() && !it->is_null();
}

double ParamReader::number(const std::string& key, std::optional<double> fallback) {
  const json* v = lookup(key);
  if (!v) {
    if (!fallback) throw ConfigError(field(key), "required number");
    return *fallback;
  }
  if (!v->is_number()) throw ConfigError(field(key), "expected number, got " + kind_name(*v));
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ConfigError(field(key), "must be finite");
  return x;
}

double ParamReader::positive(const std::string& key, std::optional<double> fallback) {
  const double x = number(key, fallback);
  if (!(x > 0.0)) throw ConfigError(field(key), "must be > 0");
  return x;
}

std::int64_t ParamReader::integer(const std::string& key, std::optional<std::int64_t> fallback) {
  const json* v = lookup(key);
  if (!v) {
    if (!fallback) throw ConfigError(field(key), "required integer");
    return *fallback;
  }
  if (!v->is_number_integer()) throw ConfigError(field(key), "expected integer, got " + kind_name(*v));
  return v->get<std::int64_t>();
}

std::size_t ParamReader::count(const std::string& key, std::optional<std::size_t> fallback, std::size_t minimum) {
  const std::int64_t x =
      integer(key, fallback ? std::optional<std::int64_t>(static_cast<std::int64_t>(*fallback)) : std::nullopt);
  if (x < static_cast<std::int64_t>(minimum)) throw ConfigError(field(key), "must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(x);
}

bool ParamReader::boolean(const std::string& key, bool fallback) {
  const json* v = lookup(key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(field(key), "expected boolean, got " + kind_name(*v));
  return v->get<bool>();
}

std::string ParamReader::string(const std::string& key, std::optional<std::string> fallback,
                                const std::vector<std::string>& choices) {
  const json* v = lookup(key);
  std::string s;
  if (!v) {
    if (!fallback) throw ConfigError(field(key), "required string");
    s = *fallback;
  } else {
    if (!v->is_string()) throw ConfigError(field(key), "expected string, got " + kind_name(*v));
    s = v->get<std::string>();
  }
  if (!choices.empty() && std::find(choices.begin(), choices.end(), s) == choices.end()) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
    throw ConfigError(field(key), "'" + s + "' is not one of {" + list + "}");
  }
  return s;
}

std::vector<double> ParamReader::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  const json* v = lookup(key);
  if (!v) {
    if (!fallback) throw ConfigError(field(key), "required array of numbers");
    return *fallback;
  }
  if (!v->is_array()) throw ConfigError(field(key), "expected array, got " + kind_name(*v));
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const auto& e = (*v)[i];
    if (!e.is_number() || !std::isfinite(e.get<double>()))
      throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "expected finite number");
    out.push_back(e.get<double>());
  }
  return out;
}

ParamReader ParamReader::object(const std::string& key) {
  const json* v = lookup(key);
  if (!v) return ParamReader(empty_object(), field(key));
  if (!v->is_object()) throw ConfigError(field(key), "expected object, got " + kind_name(*v));
  return ParamReader(*v, field(key));
}

const json& ParamReader::raw(const std::string& key) {
  const json* v = lookup(key);
  return v ? *v : empty_object();
}

void ParamReader::finish() const {
  for (const auto& [k, v] : obj_->items())
    if (!used_.count(k)) throw ConfigError(field(k), "unknown field");
}

}  // namespace wavelab::runner
