#pragma once

// JSON, CSV and aligned-text renderings of experiment results.

#include <string>
#include <string_view>

#include <json.hpp>

#include "crteq/experiments.hpp"

namespace crteq {

using Json = nlohmann::ordered_json;

/// Locale-free "%.*g".
std::string fmt_g(double v, int digits = 10);
/// Locale-free "%.*f".
std::string fmt_f(double v, int decimals);

Json to_json(const Complex& z);
Json to_json(const DiscrepancyResult& r);
Json to_json(const WeylSpectrum& ws);
Json to_json(const TheoremBound& b);
Json to_json(const PrimeSums& s);
Json to_json(const SweepReport& r);
Json to_json(const RootTable& t);
Json to_json(const CounterexampleReport& r);
Json to_json(const PrimeWeylReport& r);
Json to_json(const WeilScan& s);
Json to_json(const FunctionFieldReport& r);

std::string sweep_csv(const SweepReport& r);
std::string table_csv(const RootTable& t);
/// Rows k / empirical / reference plus a moments block, columns aligned.
std::string table_text(const RootTable& t);
std::string counterexample_csv(const CounterexampleReport& r);
std::string primes_csv(const PrimeWeylReport& r);
std::string weil_csv(const WeilScan& s);
std::string ffield_csv(const FunctionFieldReport& r);

/// FNV-1a, 64 bit, as 16 hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace crteq
