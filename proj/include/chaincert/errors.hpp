#pragma once

#include <stdexcept>
#include <string>

namespace chaincert {

// Everything the library can reject. Validation-class codes describe bad
// input (a CLI maps them to exit 2); the rest signal numerical failure,
// misuse, or a certification-level problem.
enum class Errc {
  non_square,
  negative_entry,
  column_sum_off,
  not_ergodic,
  not_reversible,
  singular_system,
  dimension_mismatch,
  no_convergence,
  too_small,
  too_large,
  no_valid_prefix,
  zero_proper_vector,
  mass_exceeds_half,
  not_an_eigenvector,
  sandwich_violation,
  out_of_range,
  disconnected,
  periodic,
  parse_error,
};

const char* errc_name(Errc c);
bool is_validation_error(Errc c);

class ChainError : public std::runtime_error {
 public:
  ChainError(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace chaincert
