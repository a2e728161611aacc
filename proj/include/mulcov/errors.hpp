#pragma once

#include <stdexcept>
#include <string>

namespace mulcov {

enum class errc {
  zero_input,
  factorization_budget_exceeded,
  support_mismatch,
  not_a_subgroup,
  bound_exceeded,
  conductor_mismatch,
  division_by_zero,
  not_a_multiple,
  not_squarefree,
  not_prime,
  not_simple,
  not_independent,
  not_simple_in_context,
  conductor_incompatible,
  shape_mismatch,
  not_a_compatible_root,
  transcendental_addition,
  unsupported_value_shape,
  no_conjugate_choice,
  signature_mismatch,
  budget_exceeded,
  inconsistent,
  malformed_input,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_input: return "ZeroInput";
    case errc::factorization_budget_exceeded: return "FactorizationBudgetExceeded";
    case errc::support_mismatch: return "SupportMismatch";
    case errc::not_a_subgroup: return "NotASubgroup";
    case errc::bound_exceeded: return "BoundExceeded";
    case errc::conductor_mismatch: return "ConductorMismatch";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::not_a_multiple: return "NotAMultiple";
    case errc::not_squarefree: return "NotSquarefree";
    case errc::not_prime: return "NotPrime";
    case errc::not_simple: return "NotSimple";
    case errc::not_independent: return "NotIndependent";
    case errc::not_simple_in_context: return "NotSimpleInContext";
    case errc::conductor_incompatible: return "ConductorIncompatible";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::not_a_compatible_root: return "NotACompatibleRoot";
    case errc::transcendental_addition: return "TranscendentalAddition";
    case errc::unsupported_value_shape: return "UnsupportedValueShape";
    case errc::no_conjugate_choice: return "NoConjugateChoice";
    case errc::signature_mismatch: return "SignatureMismatch";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::inconsistent: return "Inconsistent";
    case errc::malformed_input: return "MalformedInput";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace mulcov
