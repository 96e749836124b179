#include "crteq/report.hpp"

#include <cstdio>
#include <sstream>

namespace crteq {

std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fmt_f(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const DiscrepancyResult& r) {
  Json j;
  j["q"] = r.q;
  j["method"] = std::string(to_string(r.method));
  if (r.is_exact()) {
    j["value"] = r.upper;
  } else {
    j["bounds"] = Json::array({r.lower, r.upper});
  }
  if (r.H) j["H"] = *r.H;
  if (r.seed) j["seed"] = *r.seed;
  if (r.witness) {
    Json w = Json::array();
    for (const Arc& a : *r.witness) {
      w.push_back({{"start", a.start}, {"length", a.length}, {"closed", a.closed}, {"denominator", r.q}});
    }
    j["witness"] = w;
  }
  return j;
}

Json to_json(const WeylSpectrum& ws) {
  Json j;
  j["q"] = ws.q;
  j["H"] = ws.H;
  j["dim"] = ws.dim;
  Json entries = Json::array();
  for (const WeylEntry& e : ws.entries) entries.push_back({{"h", e.h}, {"W", to_json(e.value)}});
  j["entries"] = entries;
  return j;
}

Json to_json(const TheoremBound& b) {
  Json j;
  j["theorem"] = b.id;
  j["value"] = b.value;
  j["factor"] = b.factor;
  j["exponent_sum"] = b.exponent_sum;
  if (b.delta) j["delta"] = *b.delta;
  j["in_range"] = b.violations.empty();
  j["violations"] = b.violations;
  return j;
}

Json to_json(const PrimeSums& s) {
  return {{"primes_in_Q", s.primes_in_Q},       {"sum_inv_p", s.inv_rho_ge1},
          {"sum_inv_p_rho_ge2", s.inv_rho_ge2}, {"sum_damped", s.damped},
          {"sum_lambda_ratio", s.lambda_ratio}, {"sum_sqrt_ratio", s.sqrt_ratio}};
}

Json to_json(const SweepReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["alpha"] = r.alpha;
  j["alpha_source"] = r.alpha_fitted ? "min assumption-1 ratio over ladder" : "config";
  j["constant_convention"] = "C = 1; fitted constant = average disc / factor";
  j["includes_q1"] = true;
  Json rows = Json::array();
  for (const SweepRow& row : r.rows) {
    Json o;
    o["x"] = row.x;
    o["empty"] = row.empty;
    o["moduli"] = row.moduli;
    o["total_weight"] = row.total_weight;
    o["average_disc"] = row.average_disc;
    o["exact_moduli"] = row.exact_count;
    o["H"] = row.H;
    o["P"] = row.script_P;
    o["P_tilde"] = row.script_P_tilde;
    o["prime_sums"] = to_json(row.sums);
    o["assumption1"] = {{"log_sum", row.assumption1.log_sum}, {"ratio", row.assumption1.ratio}};
    o["bound"] = to_json(row.bound);
    o["fitted_constant"] = row.fitted_constant;
    o["lhs_over_rhs"] = row.lhs_over_rhs;
    if (!row.per_q.empty()) {
      Json per = Json::array();
      for (const QStat& s : row.per_q) {
        per.push_back({{"q", s.q}, {"rho", s.rho}, {"omega", s.omega}, {"disc", to_json(s.disc)}});
      }
      o["per_q"] = per;
    }
    rows.push_back(o);
  }
  j["rows"] = rows;
  j["strictly_decreasing"] = r.strictly_decreasing;
  j["constant_spread"] = r.constant_spread;
  return j;
}

Json to_json(const RootTable& t) {
  Json j;
  j["source"] = t.source;
  j["x"] = t.x;
  j["primes"] = t.primes;
  j["histogram"] = t.histogram;
  Json moments = Json::array();
  for (std::size_t i = 0; i < t.moments.size(); ++i) {
    moments.push_back({{"order", i + 1},
                       {"numerator", t.moment_numerators[i]},
                       {"denominator", t.primes},
                       {"value", t.moments[i]}});
  }
  j["moments"] = moments;
  if (!t.reference.empty()) {
    j["reference_label"] = t.reference_label;
    j["reference"] = t.reference;
  }
  return j;
}

Json to_json(const CounterexampleReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  Json rows = Json::array();
  for (const CounterexampleRow& row : r.rows) {
    rows.push_back({{"x", row.x},
                    {"moduli", row.moduli},
                    {"M_x", row.M_x},
                    {"mu_mass", row.mu_mass},
                    {"proof_floor", row.proof_floor},
                    {"uniform_mass", row.uniform_mass},
                    {"uniform_avg_disc", row.uniform_avg_disc},
                    {"rho_avg_disc", row.rho_avg_disc}});
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const PrimeWeylReport& r) {
  Json j;
  j["x"] = r.x;
  j["primes"] = r.primes;
  j["primes_in_Q"] = r.primes_in_Q;
  Json rows = Json::array();
  for (const PrimeWeylRow& row : r.rows) {
    rows.push_back({{"h", row.h}, {"uniform", to_json(row.uniform)}, {"weighted", to_json(row.weighted)}});
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const WeilScan& s) {
  Json j;
  j["p_limit"] = s.p_limit;
  j["global_max"] = s.global_max;
  j["global_argmax_p"] = s.global_argmax_p;
  j["fitted_G"] = s.fitted_G;
  j["growth_slope"] = s.growth_slope;
  Json rows = Json::array();
  for (const WeilPrimeRow& row : s.rows) rows.push_back({{"p", row.p}, {"max_abs", row.max_abs}, {"argmax_a", row.argmax_a}});
  j["rows"] = rows;
  return j;
}

Json to_json(const FunctionFieldReport& r) {
  Json j;
  j["curve"] = r.curve;
  Json rows = Json::array();
  for (const FunctionFieldRow& row : r.rows) {
    Json sums = Json::array();
    for (const FunctionFieldSums& s : row.sums) sums.push_back({{"h", s.h}, {"c1", to_json(s.c1)}, {"c2", to_json(s.c2)}});
    rows.push_back({{"p", row.p},
                    {"Z_p", row.Z_p},
                    {"points", row.points},
                    {"c1_at_zero", row.c1_at_zero},
                    {"max_abs_c1", row.max_abs_c1},
                    {"max_abs_c2", row.max_abs_c2},
                    {"sums", sums}});
  }
  j["rows"] = rows;
  if (r.c2_exponent) {
    j["c2_exponent"] = *r.c2_exponent;
  } else {
    j["c2_exponent"] = nullptr;
  }
  return j;
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "x,moduli,average_disc,exact_moduli,H,P,P_tilde,factor,rhs,fitted_constant,in_range\n";
  for (const SweepRow& row : r.rows) {
    out << row.x << ',' << row.moduli << ',' << fmt_g(row.average_disc, 12) << ',' << row.exact_count << ','
        << row.H << ',' << fmt_g(row.script_P, 12) << ',' << fmt_g(row.script_P_tilde, 12) << ','
        << fmt_g(row.bound.factor, 12) << ',' << fmt_g(row.bound.value, 12) << ','
        << fmt_g(row.fitted_constant, 12) << ',' << (row.bound.violations.empty() ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string table_csv(const RootTable& t) {
  std::ostringstream out;
  out << "k,count" << (t.reference.empty() ? "" : ",reference") << '\n';
  for (std::size_t k = 0; k < t.histogram.size(); ++k) {
    out << k << ',' << t.histogram[k];
    if (!t.reference.empty()) out << ',' << (k < t.reference.size() ? fmt_f(t.reference[k], 1) : "0.0");
    out << '\n';
  }
  return out.str();
}

namespace {

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (r.size() > width.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) line += " | ";
      line += std::string(width[c] - r[c].size(), ' ') + r[c];
    }
    out += line + '\n';
  }
  return out;
}

}  // namespace

std::string table_text(const RootTable& t) {
  std::vector<std::vector<std::string>> dist{{"k"}, {"Empirical"}};
  if (!t.reference.empty()) dist.push_back({"Reference"});
  for (std::size_t k = 0; k < t.histogram.size(); ++k) {
    dist[0].push_back(std::to_string(k));
    dist[1].push_back(std::to_string(t.histogram[k]));
    if (!t.reference.empty()) dist[2].push_back(k < t.reference.size() ? fmt_f(t.reference[k], 1) : "0.0");
  }
  std::vector<std::vector<std::string>> mom{{"n"}, {"Empirical"}};
  for (std::size_t i = 0; i < t.moments.size(); ++i) {
    mom[0].push_back(std::to_string(i + 1));
    mom[1].push_back(fmt_g(t.moments[i], 5));
  }
  std::string out = "# " + t.source + ", primes p <= " + std::to_string(t.x) + ", pi(x) = " + std::to_string(t.primes) + "\n";
  if (!t.reference.empty()) out += "# reference: " + t.reference_label + "\n";
  return out + "\nDistribution\n" + aligned(dist) + "\nMoments\n" + aligned(mom);
}

std::string counterexample_csv(const CounterexampleReport& r) {
  std::ostringstream out;
  out << "x,moduli,M_x,mu_mass,proof_floor,uniform_mass,uniform_avg_disc,rho_avg_disc\n";
  for (const CounterexampleRow& row : r.rows) {
    out << row.x << ',' << row.moduli << ',' << row.M_x << ',' << fmt_g(row.mu_mass, 12) << ','
        << fmt_g(row.proof_floor, 12) << ',' << fmt_g(row.uniform_mass, 12) << ','
        << fmt_g(row.uniform_avg_disc, 12) << ',' << fmt_g(row.rho_avg_disc, 12) << '\n';
  }
  return out.str();
}

std::string primes_csv(const PrimeWeylReport& r) {
  std::ostringstream out;
  out << "h,uniform_re,uniform_im,uniform_abs,weighted_re,weighted_im,weighted_abs\n";
  for (const PrimeWeylRow& row : r.rows) {
    out << row.h << ',' << fmt_g(row.uniform.real(), 12) << ',' << fmt_g(row.uniform.imag(), 12) << ','
        << fmt_g(std::abs(row.uniform), 12) << ',' << fmt_g(row.weighted.real(), 12) << ','
        << fmt_g(row.weighted.imag(), 12) << ',' << fmt_g(std::abs(row.weighted), 12) << '\n';
  }
  return out.str();
}

std::string weil_csv(const WeilScan& s) {
  std::ostringstream out;
  out << "p,max_abs,argmax_a\n";
  for (const WeilPrimeRow& row : s.rows) out << row.p << ',' << fmt_g(row.max_abs, 12) << ',' << row.argmax_a << '\n';
  return out.str();
}

std::string ffield_csv(const FunctionFieldReport& r) {
  std::ostringstream out;
  out << "p,h,c1_re,c1_im,c2_re,c2_im,c2_abs\n";
  for (const FunctionFieldRow& row : r.rows) {
    for (const FunctionFieldSums& s : row.sums) {
      out << row.p << ',' << s.h << ',' << fmt_g(s.c1.real(), 12) << ',' << fmt_g(s.c1.imag(), 12) << ','
          << fmt_g(s.c2.real(), 12) << ',' << fmt_g(s.c2.imag(), 12) << ',' << fmt_g(std::abs(s.c2), 12) << '\n';
    }
  }
  return out.str();
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace crteq
