#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arlkit {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyFresnelRegion,
  kSingularFim,
  kDegenerateQ,
  kDegenerateQuartic,
  kNegativeDiscriminant,
  kNegativeRadicand,
  kInvalidLowNoiseRegime,
  kNoSignChange,
  kNoAdmissibleRoot,
  kConfigParse,
  kConfigValidation,
  kIo,
};

/// Short snake_case tag used in CSV status fields and CLI messages.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace arlkit
