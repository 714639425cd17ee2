#pragma once
#include <stdexcept>
#include <string>

namespace rtflab {

struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};

// inverting an element that is exactly zero
struct InversionOfZero : Error {
  explicit InversionOfZero(const std::string& m = "inversion of zero") : Error(m) {}
};

// a computation needed a coefficient beyond the tracked precision
struct PrecisionUnderflow : Error {
  explicit PrecisionUnderflow(const std::string& m = "precision underflow") : Error(m) {}
};

// valuation requested of an element that is zero up to its precision
struct UncertainValuation : Error {
  explicit UncertainValuation(const std::string& m = "uncertain valuation") : Error(m) {}
};

// an enumeration would exceed the configured budget
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& m = "enumeration budget exceeded") : Error(m) {}
};

// orbital input is not regular semisimple (x in {0,1} or singular gamma)
struct NonRegularInput : Error {
  explicit NonRegularInput(const std::string& m = "non-regular input") : Error(m) {}
};

// a character outside the supported range for this engine
struct UnsupportedCharacter : Error {
  explicit UnsupportedCharacter(const std::string& m = "unsupported character") : Error(m) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(m) {}
};

}  // namespace rtflab
