#include "poly_mod.hpp"

#include <algorithm>

namespace crteq::polymod {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly sub(const Poly& a, const Poly& b, u64 p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const u64 x = i < a.size() ? a[i] : 0;
    const u64 y = i < b.size() ? b[i] : 0;
    r[i] = x >= y ? x - y : x + (p - y);
  }
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
  }
  trim(r);
  return r;
}

void divmod(const Poly& a, const Poly& b, u64 p, Poly& quotient, Poly& remainder) {
  if (b.empty()) throw Error("polynomial division by zero");
  remainder = a;
  trim(remainder);
  if (remainder.size() < b.size()) {
    quotient.clear();
    return;
  }
  quotient.assign(remainder.size() - b.size() + 1, 0);
  const u64 lead_inv = mod_inverse(static_cast<i64>(b.back()), p);
  for (std::size_t i = remainder.size(); i-- >= b.size();) {
    const u64 coef = mul_mod(remainder[i], lead_inv, p);
    const std::size_t shift = i - (b.size() - 1);
    quotient[shift] = coef;
    if (coef == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const u64 t = mul_mod(coef, b[j], p);
      u64& slot = remainder[shift + j];
      slot = slot >= t ? slot - t : slot + (p - t);
    }
  }
  trim(remainder);
  trim(quotient);
}

Poly rem(const Poly& a, const Poly& b, u64 p) {
  Poly q, r;
  divmod(a, b, p, q, r);
  return r;
}

Poly make_monic(const Poly& a, u64 p) {
  if (a.empty()) return a;
  const u64 inv = mod_inverse(static_cast<i64>(a.back()), p);
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_mod(a[i], inv, p);
  return r;
}

Poly gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

Poly pow_mod(const Poly& base, u64 exp, const Poly& modulus, u64 p) {
  Poly result{1};
  result = rem(result, modulus, p);
  Poly b = rem(base, modulus, p);
  while (exp > 0) {
    if (exp & 1) result = rem(mul(result, b, p), modulus, p);
    exp >>= 1;
    if (exp > 0) b = rem(mul(b, b, p), modulus, p);
  }
  return result;
}

namespace {

void split(const Poly& g, u64 p, std::vector<u64>& out) {
  const std::size_t deg = g.size() - 1;
  if (deg == 0) return;
  if (deg == 1) {
    out.push_back((p - g[0] % p) % p);  // g is monic: x + g0
    return;
  }
  if (p == 2) {
    // Only candidates are 0 and 1.
    for (u64 x : {0ULL, 1ULL}) {
      u64 acc = 0;
      for (std::size_t i = g.size(); i-- > 0;) acc = (acc * x + g[i]) % 2;
      if (acc == 0) out.push_back(x);
    }
    return;
  }
  for (u64 shift = 0; shift < p; ++shift) {
    const Poly w = pow_mod(Poly{shift, 1}, (p - 1) / 2, g, p);
    const Poly d = gcd(sub(w, Poly{1}, p), g, p);
    if (d.size() > 1 && d.size() < g.size()) {
      Poly q, r;
      divmod(g, d, p, q, r);
      split(d, p, out);
      split(make_monic(q, p), p, out);
      return;
    }
  }
  throw Error("polynomial root splitting failed");
}

}  // namespace

std::vector<u64> roots(const Poly& f, u64 p) {
  Poly fp = f;
  trim(fp);
  if (fp.empty()) throw Error("roots: zero polynomial");
  fp = make_monic(fp, p);
  if (fp.size() == 1) return {};
  const Poly xp = pow_mod(Poly{0, 1}, p, fp, p);
  const Poly g = gcd(fp, sub(xp, Poly{0, 1}, p), p);
  std::vector<u64> out;
  if (g.size() > 1) split(g, p, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace crteq::polymod
