#pragma once

#include <stdexcept>
#include <string>

namespace modlie {

enum class Errc {
  UnsupportedRank,
  RootNotInSystem,
  BadCharacteristic,
  MixedAlgebras,
  CoefficientOverflow,
  NotModP,
  NonStandardCharacter,
  IncompatibleWeight,
  NotCartanElement,
  ExhaustedField,
  ArityMismatch,
  UnsolvedSpec,
  SyntaxError,
  UnknownRoot,
  Config,
  Internal
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::UnsupportedRank: return "UnsupportedRank";
    case Errc::RootNotInSystem: return "RootNotInSystem";
    case Errc::BadCharacteristic: return "BadCharacteristic";
    case Errc::MixedAlgebras: return "MixedAlgebras";
    case Errc::CoefficientOverflow: return "CoefficientOverflow";
    case Errc::NotModP: return "NotModP";
    case Errc::NonStandardCharacter: return "NonStandardCharacter";
    case Errc::IncompatibleWeight: return "IncompatibleWeight";
    case Errc::NotCartanElement: return "NotCartanElement";
    case Errc::ExhaustedField: return "ExhaustedField";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::UnsolvedSpec: return "UnsolvedSpec";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownRoot: return "UnknownRoot";
    case Errc::Config: return "Config";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace modlie
