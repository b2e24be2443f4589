#ifndef QAUTH_ERRORS_H
#define QAUTH_ERRORS_H

#include <stdexcept>
#include <string>

namespace qauth {

/// Operands disagree on qubit count or block length.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An analysis refused to run because its applicability guard failed.
///
/// `code()` is a stable machine-readable tag such as "RANK_GUARD",
/// "NOT_WEIGHT_DETERMINED" or "NO_EVENT".
class GuardError : public std::runtime_error {
 public:
  GuardError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline void check_dims(size_t a, size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

}  // namespace qauth

#endif  // QAUTH_ERRORS_H
