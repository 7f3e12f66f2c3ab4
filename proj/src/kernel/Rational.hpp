#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "kernel/Common.hpp"

namespace peregrine {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool isIntegral(const Rational& q) {
  return denominator(q) == 1;
}

/** Largest integer <= q. */
inline Integer rationalFloor(const Rational& q) {
  Integer n = numerator(q);
  Integer d = denominator(q);
  Integer r = n / d;
  if (n < 0 && r * d != n) {
    --r;
  }
  return r;
}

/** Smallest integer >= q. */
inline Integer rationalCeil(const Rational& q) {
  return -rationalFloor(-q);
}

/** Parses a decimal string like "12.034" or "-0.5". */
inline Rational rationalFromDecimal(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    return Rational(Integer(s));
  }
  std::string intPart = s.substr(0, dot);
  std::string fracPart = s.substr(dot + 1);
  PER_ASSERT(!fracPart.empty());
  bool neg = !intPart.empty() && intPart[0] == '-';
  if (neg) {
    intPart = intPart.substr(1);
  }
  if (intPart.empty()) {
    intPart = "0";
  }
  Integer scale = 1;
  for (size_t i = 0; i < fracPart.size(); ++i) {
    scale *= 10;
  }
  Integer num = Integer(intPart) * scale + Integer(fracPart);
  if (neg) {
    num = -num;
  }
  return Rational(num, scale);
}

/**
 * Renders q as a finite decimal if the denominator divides a power of
 * ten, otherwise returns false. Used by printers; rationals such as 1/3
 * have to fall back to an explicit quotient.
 */
inline bool rationalToDecimal(const Rational& q, std::string& out) {
  Integer den = denominator(q);
  unsigned twos = 0;
  unsigned fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) {
    return false;
  }
  unsigned digits = std::max(twos, fives);
  Integer scale = 1;
  for (unsigned i = 0; i < digits; ++i) {
    scale *= 10;
  }
  Integer scaled = numerator(q) * (scale / denominator(q));
  bool neg = scaled < 0;
  if (neg) {
    scaled = -scaled;
  }
  std::string body = scaled.str();
  std::string result;
  if (digits == 0) {
    result = body + ".0";
  } else {
    while (body.size() <= digits) {
      body.insert(body.begin(), '0');
    }
    result = body.substr(0, body.size() - digits) + "." + body.substr(body.size() - digits);
  }
  if (neg) {
    result.insert(result.begin(), '-');
  }
  out = result;
  return true;
}

} // namespace peregrine
