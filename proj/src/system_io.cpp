#include <fstream>
#include <map>
#include <sstream>

#include "crteq/crt_sets.hpp"

namespace crteq {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error("local system line " + std::to_string(line_no) + ": " + what);
}

u64 parse_u64(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(token, &used);
    if (used != token.size() || token.front() == '-') fail(line_no, "bad integer '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line_no, "bad integer '" + token + "'");
  }
}

}  // namespace

LocalSystem read_local_system(std::istream& in, const std::string& description) {
  std::optional<unsigned> dim;
  std::optional<u64> support;
  std::map<u64, std::vector<u64>> rows;  // keyed by p^v
  u64 largest = 1;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string first, second, third, extra;
    ss >> first >> second;
    if (first == "dim") {
      dim = static_cast<unsigned>(parse_u64(second, line_no));
      if (*dim == 0) fail(line_no, "dimension must be positive");
      continue;
    }
    if (first == "support") {
      support = parse_u64(second, line_no);
      continue;
    }
    ss >> third;
    if (third.empty() || (ss >> extra)) fail(line_no, "expected `p v a_1,...,a_n`");
    const u64 p = parse_u64(first, line_no);
    const u64 v = parse_u64(second, line_no);
    if (!is_prime(p)) fail(line_no, std::to_string(p) + " is not prime");
    if (v == 0) fail(line_no, "exponent must be positive");
    const u64 pv = checked_pow(p, static_cast<unsigned>(v));
    std::vector<u64> coords;
    std::stringstream cs(third);
    std::string tok;
    while (std::getline(cs, tok, ',')) coords.push_back(parse_u64(tok, line_no));
    if (!dim) dim = static_cast<unsigned>(coords.size());
    if (coords.size() != *dim) fail(line_no, "tuple has " + std::to_string(coords.size()) + " coordinates");
    for (u64 c : coords) {
      if (c >= pv) fail(line_no, "coordinate " + std::to_string(c) + " not reduced mod " + std::to_string(pv));
    }
    auto& bucket = rows[pv];
    bucket.insert(bucket.end(), coords.begin(), coords.end());
    largest = std::max(largest, pv);
  }
  if (!dim) throw Error("local system file declares no dimension and no tuples");
  const unsigned n = *dim;
  auto sets = std::make_shared<std::map<u64, PointSet>>();
  for (auto& [pv, flat] : rows) (*sets)[pv] = PointSet::from_rows(n, std::move(flat));
  const u64 limit = support.value_or(largest);
  return LocalSystem(
      n,
      [sets, n](const PrimePower& pp) {
        if (auto it = sets->find(pp.value); it != sets->end()) return it->second;
        return PointSet(n);
      },
      limit, description);
}

LocalSystem load_local_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open local system file '" + path + "'");
  return read_local_system(in, path);
}

void write_local_system(std::ostream& out, const LocalSystem& system, u64 limit) {
  out << "# " << system.description() << "\n";
  out << "dim " << system.dim() << "\n";
  out << "support " << limit << "\n";
  for (u64 p : sieve_primes(limit)) {
    u64 value = p;
    for (unsigned v = 1; value <= limit; ++v) {
      const auto set = system.local_set(PrimePower{p, v, value});
      for (std::size_t i = 0; i < set->size(); ++i) {
        out << p << ' ' << v << ' ';
        const auto row = (*set)[i];
        for (unsigned c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
      }
      if (value > limit / p) break;
      value *= p;
    }
  }
}

}  // namespace crteq
