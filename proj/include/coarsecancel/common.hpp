#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccl {

// Absolute comparison tolerance used throughout. Shortest-path sums over
// rational edge lengths are exact in doubles for the test corpora; the
// tolerance absorbs accumulated rounding in the hyperbolic-trig formulas.
inline constexpr double kDefaultTol = 1e-9;

// Four-point hyperbolicity constant of the hyperbolic plane, obtained by
// maximizing the four-point defect over sampled quadruples of H^2 (the
// supremum is ln 2; test code carries the sampling routine). Configurable
// wherever it enters a formula.
inline constexpr double kBoldDeltaDefault = 0.6931471805599453;

class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a window is too small to decide a classification question.
class inconclusive_error : public error {
public:
  explicit inconclusive_error(const std::string& what) : error(what) {}
};

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return std::lcm(a, b);
}

// Direction qualifier attached to every numeric invariant we report: a
// window computation rarely yields the true value of a quantity defined
// over an infinite group, so each field says which side of the truth it
// sits on.
enum class Bound { Exact, Lower, Upper };

inline const char* to_string(Bound b) {
  switch (b) {
    case Bound::Exact: return "exact";
    case Bound::Lower: return "lower";
    case Bound::Upper: return "upper";
  }
  return "?";
}

}  // namespace ccl
