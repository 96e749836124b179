#pragma once

// Dense polynomials over F_p, coefficients low to high, always trimmed.

#include <vector>

#include "crteq/modarith.hpp"

namespace crteq::polymod {

using Poly = std::vector<u64>;

void trim(Poly& a);
Poly sub(const Poly& a, const Poly& b, u64 p);
Poly mul(const Poly& a, const Poly& b, u64 p);
/// Quotient and remainder; b must be nonzero.
void divmod(const Poly& a, const Poly& b, u64 p, Poly& quotient, Poly& remainder);
Poly rem(const Poly& a, const Poly& b, u64 p);
Poly make_monic(const Poly& a, u64 p);
Poly gcd(Poly a, Poly b, u64 p);
/// base^exp mod modulus.
Poly pow_mod(const Poly& base, u64 exp, const Poly& modulus, u64 p);

/// Distinct roots in F_p of a nonzero polynomial: gcd with x^p - x, then
/// equal-degree splitting with the deterministic shifts x + 0, x + 1, ...
std::vector<u64> roots(const Poly& f, u64 p);

}  // namespace crteq::polymod
