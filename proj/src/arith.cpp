#include "shadiv/arith.hpp"

#include <random>
#include <stdexcept>

#include <boost/multiprecision/miller_rabin.hpp>

namespace shadiv {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n <= BigInt(std::numeric_limits<std::uint32_t>::max())) {
    return is_prime(n.convert_to<std::uint64_t>());
  }
  std::mt19937_64 engine(0x5ead1u);
  return boost::multiprecision::miller_rabin_test(n, 32, engine);
}

BigInt next_prime_above(const BigInt& n) {
  BigInt candidate = n < 2 ? BigInt(2) : n + 1;
  while (!is_prime(candidate)) ++candidate;
  return candidate;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::domain_error("isqrt of negative integer");
  return boost::multiprecision::sqrt(n);
}

std::uint64_t mod_small(const BigInt& n, std::uint64_t m) {
  BigInt r = n % m;
  if (r < 0) r += m;
  return r.convert_to<std::uint64_t>();
}

unsigned valuation(const BigInt& n, std::uint64_t d) {
  if (n == 0) throw std::domain_error("valuation of zero");
  unsigned v = 0;
  BigInt m = n;
  while (m % d == 0) {
    m /= d;
    ++v;
  }
  return v;
}

bool is_squarefree(const BigInt& n) {
  if (n == 0) return false;
  BigInt m = boost::multiprecision::abs(n);
  for (BigInt d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      m /= d;
      if (m % d == 0) return false;
    }
  }
  return true;
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  b %= m;
  while (e > 0) {
    if (e & 1u) result = result * b % m;
    b = b * b % m;
    e >>= 1u;
  }
  return result;
}

}  // namespace shadiv
