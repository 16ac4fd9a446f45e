#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ilab {

using Integer = mpz_class;
using Rational = mpq_class;
using RatVec = std::vector<Rational>;

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Always "num/den", even for integers, so files round-trip bit-exactly.
std::string to_string(const Rational& q);

/// Accepts "n", "-n", "n/d". Rejects zero denominators and trailing junk.
Rational parse_rational(std::string_view text);

/// num / den in lowest terms (mpq_class(num, den) skips canonicalization).
Rational ratio(long num, long den);

/// Lossy; for logging and heuristics only.
double to_double(const Rational& q);

}  // namespace ilab
