#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mormor {

/// Thrown when a caller breaks an operation's precondition (mismatched
/// dimensions, non-orthonormal basis, invalid sizes, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solve. Carries the parameter being solved for
/// when there is one.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what,
                       std::optional<double> parameter = std::nullopt)
      : std::runtime_error(what), parameter_(parameter) {}

  std::optional<double> parameter() const { return parameter_; }

 private:
  std::optional<double> parameter_;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}
}  // namespace detail

}  // namespace mormor
