#include "crteq/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "crteq/config.hpp"
#include "crteq/parallel.hpp"
#include "crteq/report.hpp"

namespace crteq {

namespace {

namespace fs = std::filesystem;

struct Outputs {
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> files;  // name, checksum

  void write(const std::string& name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << body;
    files.emplace_back(name, fnv1a64_hex(body));
  }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json report_envelope(const std::string& subcommand, const ExperimentConfig& config, Json result) {
  Json j;
  j["subcommand"] = subcommand;
  Json echo = Json::object();
  std::istringstream lines(echo_config(config, false));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    echo[line.substr(0, eq)] = line.substr(eq + 3);
  }
  j["config"] = echo;
  j["result"] = std::move(result);
  return j;
}

// Builds everything a subcommand parses up front so bad input exits with 2.
void validate(const std::string& sub, const ExperimentConfig& c) {
  try {
    if (sub == "sweep" || sub == "primes" || sub == "disc" || (sub == "table" && c.system.kind != "pseudo")) {
      (void)make_system(c.system);
    }
    if (sub == "table" && c.system.kind != "pseudo" && c.system.kind != "poly") {
      throw ConfigError("table needs system = pseudo or poly");
    }
    if (sub == "expsum") {
      const IntPolynomial f2 = IntPolynomial::parse(c.expsum_f2);
      (void)IntPolynomial::parse(c.expsum_f1);
      if (f2.is_zero()) throw ConfigError("expsum_f2 must be nonzero");
    }
    if (sub == "ffield") (void)BivariatePoly::parse(c.ffield_curve);
    if (sub == "sweep" && c.theorem >= 3 && !c.k) throw ConfigError("theorems 3 and 4 need k");
    if (sub == "primes" && c.h_set.empty()) throw ConfigError("h_set is empty");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void run_subcommand(const std::string& sub, const ExperimentConfig& c, Outputs& files, std::ostream& out) {
  const unsigned threads = resolve_threads(c.threads);
  if (sub == "sweep") {
    const SweepReport r = run_theorem_sweep(c);
    files.write("report.json", dump(report_envelope(sub, c, to_json(r))));
    files.write("sweep.csv", sweep_csv(r));
    out << sweep_csv(r);
  } else if (sub == "table") {
    const RootTable t = c.system.kind == "pseudo"
                            ? poisson_table(parse_pseudo_poly(c.system.pseudo), c.x, threads)
                            : poisson_table(IntPolynomial::parse(c.system.poly), c.x, c.profile, threads);
    files.write("report.json", dump(report_envelope(sub, c, to_json(t))));
    files.write("table.csv", table_csv(t));
    files.write("table.txt", table_text(t));
    out << table_text(t);
  } else if (sub == "counterexample") {
    const CounterexampleReport r = counterexample_demo(c.epsilon, c.ladder, threads);
    files.write("report.json", dump(report_envelope(sub, c, to_json(r))));
    files.write("counterexample.csv", counterexample_csv(r));
    out << counterexample_csv(r);
  } else if (sub == "primes") {
    const PrimeWeylReport r = prime_moduli_weyl(make_system(c.system), c.x, c.h_set, threads);
    files.write("report.json", dump(report_envelope(sub, c, to_json(r))));
    files.write("primes.csv", primes_csv(r));
    out << primes_csv(r);
  } else if (sub == "expsum") {
    const RationalExpSumSpec spec{IntPolynomial::parse(c.expsum_f1), IntPolynomial::parse(c.expsum_f2), std::nullopt};
    const WeilScan s = weil_bound_scan(spec, c.p_limit, threads);
    Json result = to_json(s);
    if (c.q != 0) result["V_1_q"] = {{"q", c.q}, {"value", to_json(V(spec, 1, c.q))}};
    files.write("report.json", dump(report_envelope(sub, c, result)));
    files.write("weil.csv", weil_csv(s));
    out << "global max |V(a;p)| = " << fmt_g(s.global_max, 12) << " at p = " << s.global_argmax_p << '\n';
  } else if (sub == "ffield") {
    const FunctionFieldReport r = function_field_experiment(BivariatePoly::parse(c.ffield_curve), c.ffield_primes, c.ffield_hmax);
    files.write("report.json", dump(report_envelope(sub, c, to_json(r))));
    files.write("ffield.csv", ffield_csv(r));
    out << ffield_csv(r);
  } else if (sub == "disc") {
    const LocalSystem system = make_system(c.system);
    DiscOptions options;
    options.mode = c.disc_mode;
    options.budget = BoxBudget{c.max_work, c.samples, c.seed, c.H.value_or(0)};
    options.et_only = false;
    Json result;
    if (c.q != 0) {
      const ResidueSet rs = build_A_q(system, c.q);
      if (rs.rho() == 0) throw Error("rho(" + std::to_string(c.q) + ") = 0: Delta_q is undefined");
      const DiscrepancyResult d = discrepancy_of(rs, options);
      const u64 H = c.H.value_or(default_cutoff(prime_sums(system, std::max<u64>(c.q, 2))));
      result["rho"] = rs.rho();
      result["disc"] = to_json(d);
      result["spectrum"] = to_json(weyl_spectrum(rs, H));
      result["erdos_turan"] = erdos_turan_bound(weyl_spectrum(rs, H));
      out << "disc = " << fmt_g(d.lower, 12) << (d.is_exact() ? "" : " .. " + fmt_g(d.upper, 12)) << " ("
          << to_string(d.method) << ")\n";
    } else {
      const AggregateStats s = aggregate_measure_stats(system, c.x, c.weighting, c.k, std::nullopt, options, threads);
      std::string csv = "q,rho,omega,method,lower,upper\n";
      Json per = Json::array();
      for (const QStat& q : s.per_q) {
        csv += std::to_string(q.q) + ',' + std::to_string(q.rho) + ',' + std::to_string(q.omega) + ',' +
               std::string(to_string(q.disc.method)) + ',' + fmt_g(q.disc.lower, 12) + ',' + fmt_g(q.disc.upper, 12) + '\n';
        per.push_back(to_json(q.disc));
      }
      result["moduli"] = s.moduli;
      result["average_disc"] = s.average_disc;
      result["per_q"] = per;
      files.write("disc.csv", csv);
      out << "average disc over " << s.moduli << " moduli = " << fmt_g(s.average_disc, 12) << '\n';
    }
    files.write("report.json", dump(report_envelope(sub, c, result)));
  }
}

const char* kPolyHelp =
    "Polynomials are comma separated integer coefficients, constant term first (\"1,0,1\" = X^2+1). "
    "Bivariate polynomials are semicolon separated coef,degX,degY triples.";

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CRT residue sets: equidistribution experiments"};
  app.footer(kPolyHelp);
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  unsigned threads = 0;
  std::vector<std::string> sets;

  struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const FlagSpec flags[] = {
      {"--system", "system", "poly|veronese|image|graph|bezout|curve|pseudo|hooley|file"},
      {"--poly", "poly", "polynomial f"},
      {"--ladder", "ladder", "ascending x values, comma separated"},
      {"--theorem", "theorem", "1|2|3|4"},
      {"--k", "k", "number of distinct prime factors"},
      {"--weighting", "weighting", "uniform|rho"},
      {"--x", "x", "bound for table, primes and disc"},
      {"--epsilon", "epsilon", "region [0, epsilon]"},
      {"--q", "q", "single modulus for disc"},
      {"--p-limit", "p_limit", "prime bound for expsum"},
      {"--freq", "h_set", "frequencies h, comma separated"},
      {"--disc-mode", "disc_mode", "exact|bounds"},
      {"--H", "H", "Erdos-Turan cutoff (auto or integer)"},
  };

  std::map<std::string, std::string> flag_storage;
  std::string pseudo, seed;
  const std::vector<std::string> names{"sweep", "table", "counterexample", "primes", "expsum", "ffield", "disc"};
  const std::vector<std::string> about{"theorem sweep over an x ladder",
                                       "root-count histogram and moments over primes",
                                       "weighted versus uniform measures for the counterexample system",
                                       "Weyl sums averaged over prime moduli",
                                       "rational exponential sums and the Weil-bound scan",
                                       "Weyl sums along fibres of a plane curve over F_p",
                                       "discrepancy of one A_q or of every q <= x"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], about[i]);
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads (default CRT_EQUIDIST_THREADS or 1)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--set", sets, "override key=value (repeatable)");
    sub->add_option("--pseudo", pseudo, "pseudo-polynomial f1|f2|f3 (sets system = pseudo)");
    for (const FlagSpec& f : flags) sub->add_option(f.flag, flag_storage[f.key], f.help);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::string sub_name;
  for (CLI::App* s : app.get_subcommands()) sub_name = s->get_name();

  ExperimentConfig config;
  const auto start = std::chrono::steady_clock::now();
  Outputs files;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (!pseudo.empty()) {
      apply_setting(config, "system", "pseudo");
      apply_setting(config, "pseudo", pseudo);
    }
    for (const FlagSpec& f : flags) {
      if (!flag_storage[f.key].empty()) apply_setting(config, f.key, flag_storage[f.key]);
    }
    if (!seed.empty()) apply_setting(config, "seed", seed);
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (threads != 0) config.threads = threads;
    validate(sub_name, config);

    files.dir = out_dir;
    std::error_code ec;
    fs::create_directories(files.dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
    files.write("config.echo.txt", echo_config(config, false));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  int code = kExitOk;
  try {
    run_subcommand(sub_name, config, files, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitCompute;
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json manifest;
  manifest["subcommand"] = sub_name;
  manifest["exit_code"] = code;
  manifest["threads"] = resolve_threads(config.threads);
  manifest["wall_seconds"] = seconds;
  Json list = Json::array();
  for (const auto& [name, sum] : files.files) list.push_back({{"file", name}, {"fnv1a64", sum}});
  manifest["files"] = list;
  try {
    std::ofstream mf(files.dir / "manifest.json", std::ios::binary);
    mf << dump(manifest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (code == kExitOk) code = kExitCompute;
  }
  return code;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace crteq
