#include "crteq/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace crteq {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw ConfigError("bad value '" + value + "' for key '" + key + "' (expected " + expected + ")");
}

u64 to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used == value.size() && value.front() != '-') return v;
  } catch (const std::logic_error&) {
  }
  // Accept 1e6 style literals when they are exact integers.
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used == value.size() && d >= 0 && d < 1.8e19 && d == static_cast<double>(static_cast<u64>(d))) {
      return static_cast<u64>(d);
    }
  } catch (const std::logic_error&) {
  }
  bad_value(key, value, "non-negative integer");
}

i64 to_i64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size()) return v;
  } catch (const std::logic_error&) {
  }
  bad_value(key, value, "integer");
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::logic_error&) {
  }
  bad_value(key, value, "number");
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true|false");
}

std::vector<std::string> split(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  return out;
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, const std::string& value, F convert) {
  std::vector<T> out;
  if (value.empty() || value == "none") return out;
  for (const std::string& tok : split(value)) out.push_back(convert(key, tok));
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F format) {
  if (values.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format(values[i]);
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "system",     "poly",        "g",          "d",         "curve1",      "curve2",       "pseudo",
      "system_file", "restrict_mod", "restrict_residues", "ladder", "k",       "theorem",      "weighting",
      "H",          "disc_mode",   "max_work",   "samples",   "seed",        "alpha",        "delta",
      "per_q",      "x",           "epsilon",    "h_set",     "profile",     "expsum_f1",    "expsum_f2",
      "p_limit",    "ffield_curve", "ffield_primes", "ffield_hmax", "q",     "threads"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  auto u = [&] { return to_u64(key, value); };
  if (key == "system") {
    static const std::set<std::string> kinds{"poly", "veronese", "image", "graph", "bezout",
                                             "curve", "pseudo", "hooley", "file"};
    if (!kinds.count(value)) bad_value(key, value, "poly|veronese|image|graph|bezout|curve|pseudo|hooley|file");
    c.system.kind = value;
  } else if (key == "poly") {
    c.system.poly = value;
  } else if (key == "g") {
    c.system.g = value;
  } else if (key == "d") {
    c.system.d = static_cast<unsigned>(u());
  } else if (key == "curve1") {
    c.system.curve1 = value;
  } else if (key == "curve2") {
    c.system.curve2 = value;
  } else if (key == "pseudo") {
    if (value != "f1" && value != "f2" && value != "f3") bad_value(key, value, "f1|f2|f3");
    c.system.pseudo = value;
  } else if (key == "system_file") {
    c.system.file = value;
  } else if (key == "restrict_mod") {
    c.system.restrict_mod = u();
  } else if (key == "restrict_residues") {
    c.system.restrict_residues = to_list<u64>(key, value, to_u64);
  } else if (key == "ladder") {
    c.ladder = to_list<u64>(key, value, to_u64);
  } else if (key == "k") {
    if (value == "none") {
      c.k.reset();
    } else {
      c.k = static_cast<unsigned>(u());
    }
  } else if (key == "theorem") {
    const u64 t = u();
    if (t < 1 || t > 4) bad_value(key, value, "1|2|3|4");
    c.theorem = static_cast<int>(t);
  } else if (key == "weighting") {
    if (value != "uniform" && value != "rho") bad_value(key, value, "uniform|rho");
    c.weighting = parse_weighting(value);
  } else if (key == "H") {
    if (value == "auto") {
      c.H.reset();
    } else {
      c.H = u();
      if (*c.H == 0) bad_value(key, value, "auto or a positive integer");
    }
  } else if (key == "disc_mode") {
    if (value == "exact") {
      c.disc_mode = BoxMode::exact;
    } else if (value == "bounds") {
      c.disc_mode = BoxMode::bounds;
    } else {
      bad_value(key, value, "exact|bounds");
    }
  } else if (key == "max_work") {
    c.max_work = to_double(key, value);
  } else if (key == "samples") {
    c.samples = u();
  } else if (key == "seed") {
    c.seed = u();
  } else if (key == "alpha") {
    if (value == "fit") {
      c.alpha.reset();
    } else {
      c.alpha = to_double(key, value);
    }
  } else if (key == "delta") {
    if (value == "auto") {
      c.delta.reset();
    } else {
      c.delta = to_double(key, value);
    }
  } else if (key == "per_q") {
    c.per_q = to_bool(key, value);
  } else if (key == "x") {
    c.x = u();
  } else if (key == "epsilon") {
    c.epsilon = to_double(key, value);
  } else if (key == "h_set") {
    c.h_set = to_list<i64>(key, value, to_i64);
  } else if (key == "profile") {
    c.profile = to_list<double>(key, value, to_double);
  } else if (key == "expsum_f1") {
    c.expsum_f1 = value;
  } else if (key == "expsum_f2") {
    c.expsum_f2 = value;
  } else if (key == "p_limit") {
    c.p_limit = u();
  } else if (key == "ffield_curve") {
    c.ffield_curve = value;
  } else if (key == "ffield_primes") {
    c.ffield_primes = to_list<u64>(key, value, to_u64);
  } else if (key == "ffield_hmax") {
    c.ffield_hmax = to_i64(key, value);
  } else if (key == "q") {
    c.q = u();
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(u());
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source, ExperimentConfig base) {
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      apply_setting(base, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string echo_config(const ExperimentConfig& c, bool include_threads) {
  auto u = [](u64 v) { return std::to_string(v); };
  auto i = [](i64 v) { return std::to_string(v); };
  std::ostringstream out;
  out << "system = " << c.system.kind << '\n'
      << "poly = " << c.system.poly << '\n'
      << "g = " << c.system.g << '\n'
      << "d = " << c.system.d << '\n'
      << "curve1 = " << c.system.curve1 << '\n'
      << "curve2 = " << c.system.curve2 << '\n'
      << "pseudo = " << c.system.pseudo << '\n'
      << "system_file = " << c.system.file << '\n'
      << "restrict_mod = " << c.system.restrict_mod << '\n'
      << "restrict_residues = " << join(c.system.restrict_residues, u) << '\n'
      << "ladder = " << join(c.ladder, u) << '\n'
      << "k = " << (c.k ? std::to_string(*c.k) : "none") << '\n'
      << "theorem = " << c.theorem << '\n'
      << "weighting = " << to_string(c.weighting) << '\n'
      << "H = " << (c.H ? std::to_string(*c.H) : "auto") << '\n'
      << "disc_mode = " << (c.disc_mode == BoxMode::exact ? "exact" : "bounds") << '\n'
      << "max_work = " << num(c.max_work) << '\n'
      << "samples = " << c.samples << '\n'
      << "seed = " << c.seed << '\n'
      << "alpha = " << (c.alpha ? num(*c.alpha) : "fit") << '\n'
      << "delta = " << (c.delta ? num(*c.delta) : "auto") << '\n'
      << "per_q = " << (c.per_q ? "true" : "false") << '\n'
      << "x = " << c.x << '\n'
      << "epsilon = " << num(c.epsilon) << '\n'
      << "h_set = " << join(c.h_set, i) << '\n'
      << "profile = " << join(c.profile, num) << '\n'
      << "expsum_f1 = " << c.expsum_f1 << '\n'
      << "expsum_f2 = " << c.expsum_f2 << '\n'
      << "p_limit = " << c.p_limit << '\n'
      << "ffield_curve = " << c.ffield_curve << '\n'
      << "ffield_primes = " << join(c.ffield_primes, u) << '\n'
      << "ffield_hmax = " << c.ffield_hmax << '\n'
      << "q = " << c.q << '\n';
  if (include_threads) out << "threads = " << c.threads << '\n';
  return out.str();
}

}  // namespace crteq
