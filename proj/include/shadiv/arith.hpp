#pragma once

/**
 * @file arith.hpp
 * @brief Integer helpers shared by the finite-field and curve layers.
 */

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace shadiv {

using BigInt = boost::multiprecision::cpp_int;

/// Deterministic primality for machine integers (trial division up to sqrt).
bool is_prime(std::uint64_t n);

/// Primality for arbitrary integers. Exact below 2^32, Miller-Rabin (fixed seed) above.
bool is_prime(const BigInt& n);

/// Least prime strictly greater than n.
BigInt next_prime_above(const BigInt& n);

/// All primes in [2, bound], increasing.
std::vector<std::uint32_t> primes_up_to(std::uint32_t bound);

/// floor(sqrt(n)) for n >= 0.
BigInt isqrt(const BigInt& n);

/// Residue of n modulo m in [0, m).
std::uint64_t mod_small(const BigInt& n, std::uint64_t m);

/// Largest e with d^e | n (n != 0, d >= 2).
unsigned valuation(const BigInt& n, std::uint64_t d);

/// True iff n != 0 and no square of a prime divides n.
bool is_squarefree(const BigInt& n);

/// b^e mod m, all operands below 2^32.
std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m);

}  // namespace shadiv
