#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stokes_lab {

/// Bad input to a public operation (out-of-range parameter, unknown mode, non-unitary map, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical routine failed to meet its stopping criterion.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, int pieces, int max_order, double last_increment)
      : std::runtime_error(what), pieces_(pieces), max_order_(max_order),
        last_increment_(last_increment) {}

  int pieces() const noexcept { return pieces_; }
  int max_order() const noexcept { return max_order_; }
  double last_increment() const noexcept { return last_increment_; }

 private:
  int pieces_;
  int max_order_;
  double last_increment_;
};

/// The truncated state lost more norm than the leak tolerance allows.
class TruncationLeak : public std::runtime_error {
 public:
  TruncationLeak(const std::string& what, double defect)
      : std::runtime_error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// The linearized Stokes formulas were asked to work outside the equal-real-amplitude frame.
class UnsupportedFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on an observable with zero (or negative) variance.
class DegenerateConditioning : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Scenario configuration could not be read; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace stokes_lab
