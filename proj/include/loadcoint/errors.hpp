#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace loadcoint {

/// Process exit codes shared by every subcommand.
enum class ExitCode : int { ok = 0, validation = 2, degeneracy = 3 };

/// Bad or incomplete input: malformed CSV, gaps, bad flags, bad JSON.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A closed-form quantity is undefined for the given data (zero denominator,
/// singular tangent, ...). `equation()` names the formula that broke.
class DegeneracyError : public std::runtime_error {
public:
  DegeneracyError(std::string equation, const std::string& what)
      : std::runtime_error(what + " [" + equation + "]"), equation_(std::move(equation)) {}

  const std::string& equation() const noexcept { return equation_; }

private:
  std::string equation_;
};

namespace eq {
inline constexpr const char* angle = "Eq. (4)";
inline constexpr const char* inverse_temperature = "Eq. (8)";
inline constexpr const char* work = "Eq. (10)";
inline constexpr const char* times = "Eq. (11)";
inline constexpr const char* reserve = "Eq. (12)";
inline constexpr const char* moments = "Eq. (13)";
inline constexpr const char* price = "Eq. (14)";
}  // namespace eq

}  // namespace loadcoint
