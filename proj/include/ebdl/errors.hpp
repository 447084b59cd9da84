#pragma once

#include <stdexcept>
#include <string>

namespace ebdl {

enum class Errc {
  NotPrime,
  CharTooSmall,
  FieldTooLarge,
  ZeroPolynomial,
  Reducible,
  MixedCurves,
  Singular,
  OrderNotDivisible,
  MapsToInfinity,
  ZeroFunction,
  HitsInfinity,
  NdNotInvertible,
  SupportHitsF,
  SearchExhausted,
  NoDegreeKFactor,
  NotSquare,
  OrientationFailed,
  DegeneratePair,
  GroupUnderdetermined,
  FactorizationTimeout,
  MoreRelationsNeeded,
  InconsistentSystem,
  BudgetExhausted,
  NoSolutionInBudget,
  DescentFailed,
  NotInSubgroup,
  Parse,
  Overflow,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::CharTooSmall: return "CharTooSmall";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::Reducible: return "Reducible";
    case Errc::MixedCurves: return "MixedCurves";
    case Errc::Singular: return "Singular";
    case Errc::OrderNotDivisible: return "OrderNotDivisible";
    case Errc::MapsToInfinity: return "MapsToInfinity";
    case Errc::ZeroFunction: return "ZeroFunction";
    case Errc::HitsInfinity: return "HitsInfinity";
    case Errc::NdNotInvertible: return "NdNotInvertible";
    case Errc::SupportHitsF: return "SupportHitsF";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::NoDegreeKFactor: return "NoDegreeKFactor";
    case Errc::NotSquare: return "NotSquare";
    case Errc::OrientationFailed: return "OrientationFailed";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::GroupUnderdetermined: return "GroupUnderdetermined";
    case Errc::FactorizationTimeout: return "FactorizationTimeout";
    case Errc::MoreRelationsNeeded: return "MoreRelationsNeeded";
    case Errc::InconsistentSystem: return "InconsistentSystem";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::NoSolutionInBudget: return "NoSolutionInBudget";
    case Errc::DescentFailed: return "DescentFailed";
    case Errc::NotInSubgroup: return "NotInSubgroup";
    case Errc::Parse: return "Parse";
    case Errc::Overflow: return "Overflow";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ebdl
