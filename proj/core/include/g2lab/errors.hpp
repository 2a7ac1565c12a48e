#ifndef G2LAB_ERRORS_HPP
#define G2LAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace g2lab {

// Every failure the library can raise, by contract name. CLI maps
// config kinds to exit code 2 and numeric kinds to exit code 3.
enum class ErrorKind {
  zero_vector,
  zero_field,
  dim_mismatch,
  non_hermitian,
  missing_structure,
  index_out_of_range,
  invalid_weights,
  incompatible_source_detector,
  channel_count_mismatch,
  undefined_ratio,
  empty_setting,
  invalid_config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Config errors are caller mistakes; everything else is a numeric or
  // structural failure detected mid-computation.
  bool is_config_error() const noexcept {
    return kind_ == ErrorKind::invalid_config ||
           kind_ == ErrorKind::incompatible_source_detector;
  }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind) noexcept;

}  // namespace g2lab

#endif
