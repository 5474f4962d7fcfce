#include "pcia/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "pcia/serialize.hpp"

namespace pcia {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (const char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

json parse_toml_value(const std::string& raw);

std::vector<std::string> split_top_level(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  bool in_str = false;
  for (const char c : body) {
    if (in_str) {
      if (c == '"') in_str = false;
      cur += c;
      continue;
    }
    if (c == '"') in_str = true;
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  parts.push_back(cur);
  if (!parts.empty() && trim(parts.back()).empty()) parts.pop_back();
  return parts;
}

json parse_toml_value(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError("toml: empty value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError("toml: unterminated string: " + v);
    const std::string inner = v.substr(1, v.size() - 2);
    if (inner.find('"') != std::string::npos ||
        inner.find('\\') != std::string::npos)
      throw ConfigError("toml: escapes are not supported: " + v);
    return inner;
  }
  if (v.front() == '[') {
    if (v.back() != ']') throw ConfigError("toml: unterminated array: " + v);
    json arr = json::array();
    const std::string body = v.substr(1, v.size() - 2);
    if (trim(body).empty()) return arr;
    for (const std::string& part : split_top_level(body))
      arr.push_back(parse_toml_value(part));
    return arr;
  }
  // Number: integer when it parses fully without a fraction or exponent.
  const bool integral =
      v.find_first_not_of("+-0123456789") == std::string::npos;
  try {
    std::size_t used = 0;
    if (integral) {
      if (v.front() == '-') {
        const long long x = std::stoll(v, &used);
        if (used == v.size()) return x;
      } else {
        const unsigned long long x = std::stoull(v, &used);
        if (used == v.size()) return x;
      }
    } else {
      const double x = std::stod(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("toml: cannot parse value: " + v);
}

json toml_to_json(const std::string& text) {
  json root = json::object();
  json* cur = &root;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    // Cut comments outside strings.
    std::string line;
    bool in_str = false;
    for (const char c : raw) {
      if (c == '"') in_str = !in_str;
      if (c == '#' && !in_str) break;
      line += c;
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("toml: malformed section header" + where);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name))
        throw ConfigError("toml: bad section name" + where);
      if (!root.contains(name)) root[name] = json::object();
      cur = &root[name];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("toml: expected key = value" + where);
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) throw ConfigError("toml: bad key" + where);
    if (cur->contains(key)) throw ConfigError("toml: duplicate key " + key);
    (*cur)[key] = parse_toml_value(line.substr(eq + 1));
  }
  return root;
}

template <typename T>
T take(json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  T out;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad type for key " + key);
  }
  j.erase(key);
  return out;
}

template <typename T>
T take_required(json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("config: missing key " + key);
  return take<T>(j, key, T{});
}

/// Scalar or array; scalars broadcast to `count` entries.
template <typename T>
std::vector<T> take_broadcast(json& j, const std::string& key, int count) {
  if (!j.contains(key)) throw ConfigError("config: missing key " + key);
  const json v = j.at(key);
  j.erase(key);
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return std::vector<T>(count, v.get<T>());
  } catch (const json::exception&) {
    throw ConfigError("config: bad type for key " + key);
  }
}

ExperimentConfig config_from_json(json j) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  ExperimentConfig cfg;
  cfg.model = take_required<std::string>(j, "model");

  if (cfg.model == "demo_fivepair") {
    cfg.k = take<int>(j, "k", 5);
    cfg.nt = take<Index>(j, "nt", 2);
    cfg.nr = take<Index>(j, "nr", 2);
  } else {
    cfg.k = take_required<int>(j, "k");
    cfg.nt = take_required<Index>(j, "nt");
    cfg.nr = take_required<Index>(j, "nr");
  }
  if (cfg.model == "symmetric") {
    cfg.l = take_required<int>(j, "l");
    cfg.e1 = take_required<int>(j, "e1");
    cfg.e2 = take_required<int>(j, "e2");
  }
  if (cfg.model == "geometric") {
    cfg.area_km = take_required<double>(j, "area_km");
    cfg.l_km = take_required<double>(j, "l_km");
    cfg.s_km = take_required<double>(j, "s_km");
  }

  cfg.d_max = take_broadcast<int>(j, "d_max", cfg.k);
  cfg.snr_db = take_broadcast<double>(j, "snr_db", 1);
  cfg.drops = take<int>(j, "drops", 1);
  cfg.seed = take<std::uint64_t>(j, "seed", 0);
  cfg.dof_lo_db = take<double>(j, "dof_lo_db", 40.0);
  cfg.dof_hi_db = take<double>(j, "dof_hi_db", 60.0);

  std::vector<std::string> names = take<std::vector<std::string>>(
      j, "schemes",
      {"proposed", "bl1", "bl2", "bl3", "bl4", "bl5"});
  for (const std::string& name : names) {
    try {
      cfg.schemes.push_back(scheme_from_name(name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (j.contains("stage2")) {
    json s2 = j.at("stage2");
    j.erase("stage2");
    if (!s2.is_object()) throw ConfigError("config: stage2 must be a table");
    cfg.stage2.eps = take<double>(s2, "eps", cfg.stage2.eps);
    cfg.stage2.max_iters = take<int>(s2, "max_iters", cfg.stage2.max_iters);
    if (!s2.empty())
      throw ConfigError("config: unknown stage2 key " +
                        s2.begin().key());
  }
  if (!j.empty())
    throw ConfigError("config: unknown key " + j.begin().key());

  validate_config(cfg);
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text,
                              const std::string& format) {
  if (format == "toml") return config_from_json(toml_to_json(text));
  if (format == "json") {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: invalid json: ") + e.what());
    }
    return config_from_json(std::move(j));
  }
  throw ConfigError("config: unknown format " + format);
}

ExperimentConfig load_config(const std::string& path) {
  std::string format;
  if (path.size() > 5 && path.substr(path.size() - 5) == ".toml")
    format = "toml";
  else if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
    format = "json";
  else
    throw ConfigError("config: expected a .toml or .json path: " + path);
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, format);
}

void validate_config(const ExperimentConfig& cfg) {
  static const std::set<std::string> models{
      "symmetric", "geometric", "unequal", "fully_connected", "demo_fivepair"};
  if (!models.count(cfg.model))
    throw ConfigError("config: unknown model " + cfg.model);
  if (cfg.k < 1) throw ConfigError("config: k must be at least 1");
  if (cfg.nt < 1 || cfg.nr < 1)
    throw ConfigError("config: antenna counts must be at least 1");
  if (cfg.model == "demo_fivepair" &&
      (cfg.k != 5 || cfg.nt != 2 || cfg.nr != 2))
    throw ConfigError("config: demo_fivepair is a fixed 5-pair 2x2 scenario");
  if (cfg.model == "symmetric") {
    if (cfg.l < 0) throw ConfigError("config: l must be nonnegative");
    if (cfg.e1 < 1 || cfg.e1 > cfg.nt)
      throw ConfigError("config: e1 must be in 1..nt");
    if (cfg.e2 < 0 || cfg.e2 > cfg.nt)
      throw ConfigError("config: e2 must be in 0..nt");
  }
  if (cfg.model == "geometric") {
    if (cfg.area_km <= 0) throw ConfigError("config: area_km must be positive");
    if (cfg.l_km <= 0) throw ConfigError("config: l_km must be positive");
    if (cfg.s_km < 0) throw ConfigError("config: s_km must be nonnegative");
  }
  if (static_cast<int>(cfg.d_max.size()) != cfg.k)
    throw ConfigError("config: d_max must have one entry per pair");
  for (const int d : cfg.d_max)
    if (d < 0) throw ConfigError("config: d_max entries must be nonnegative");
  if (cfg.snr_db.empty()) throw ConfigError("config: snr_db must be nonempty");
  for (std::size_t i = 1; i < cfg.snr_db.size(); ++i)
    if (cfg.snr_db[i] <= cfg.snr_db[i - 1])
      throw ConfigError("config: snr_db must be strictly increasing");
  if (cfg.drops < 1) throw ConfigError("config: drops must be at least 1");
  if (cfg.schemes.empty()) throw ConfigError("config: schemes must be nonempty");
  std::set<Scheme> seen;
  for (const Scheme s : cfg.schemes)
    if (!seen.insert(s).second)
      throw ConfigError("config: duplicate scheme " + scheme_name(s));
  if (cfg.dof_lo_db >= cfg.dof_hi_db)
    throw ConfigError("config: dof window must satisfy lo < hi");
  if (cfg.stage2.eps <= 0) throw ConfigError("config: stage2.eps must be positive");
  if (cfg.stage2.max_iters < 1)
    throw ConfigError("config: stage2.max_iters must be at least 1");
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j{{"model", cfg.model},
         {"k", cfg.k},
         {"nt", cfg.nt},
         {"nr", cfg.nr},
         {"l", cfg.l},
         {"e1", cfg.e1},
         {"e2", cfg.e2},
         {"area_km", cfg.area_km},
         {"l_km", cfg.l_km},
         {"s_km", cfg.s_km},
         {"d_max", cfg.d_max},
         {"snr_db", cfg.snr_db},
         {"drops", cfg.drops},
         {"seed", cfg.seed},
         {"dof_lo_db", cfg.dof_lo_db},
         {"dof_hi_db", cfg.dof_hi_db},
         {"stage2", {{"eps", cfg.stage2.eps}, {"max_iters", cfg.stage2.max_iters}}}};
  json names = json::array();
  for (const Scheme s : cfg.schemes) names.push_back(scheme_name(s));
  j["schemes"] = std::move(names);
  const std::string canon = j.dump();  // keys are kept sorted

  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

NetworkInstance generate_instance(const ExperimentConfig& cfg, int drop) {
  if (drop < 0 || drop >= cfg.drops)
    throw ConfigError("generate_instance: drop index out of range");
  const std::uint64_t seed = derive_seed(cfg.seed, drop);
  if (cfg.model == "symmetric")
    return gen_symmetric(cfg.k, cfg.nt, cfg.nr, cfg.l, cfg.e1, cfg.e2, seed);
  if (cfg.model == "geometric")
    return gen_random_geometric(cfg.k, cfg.nt, cfg.nr, cfg.area_km, cfg.l_km,
                                cfg.s_km, seed);
  if (cfg.model == "unequal") return gen_unequal(cfg.k, cfg.nt, cfg.nr, seed);
  if (cfg.model == "fully_connected")
    return gen_fully_connected(cfg.k, cfg.nt, cfg.nr, seed);
  if (cfg.model == "demo_fivepair") return gen_demo_fivepair(seed);
  throw ConfigError("generate_instance: unknown model " + cfg.model);
}

}  // namespace pcia
