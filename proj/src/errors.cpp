#include "arlkit/errors.hpp"

namespace arlkit {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kEmptyFresnelRegion: return "empty_fresnel_region";
    case ErrorCode::kSingularFim: return "singular_fim";
    case ErrorCode::kDegenerateQ: return "degenerate_q";
    case ErrorCode::kDegenerateQuartic: return "degenerate_quartic";
    case ErrorCode::kNegativeDiscriminant: return "negative_discriminant";
    case ErrorCode::kNegativeRadicand: return "negative_radicand";
    case ErrorCode::kInvalidLowNoiseRegime: return "invalid_low_noise_regime";
    case ErrorCode::kNoSignChange: return "no_sign_change";
    case ErrorCode::kNoAdmissibleRoot: return "no_admissible_root";
    case ErrorCode::kConfigParse: return "config_parse";
    case ErrorCode::kConfigValidation: return "config_validation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace arlkit
