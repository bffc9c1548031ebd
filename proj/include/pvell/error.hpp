#pragma once

#include <stdexcept>
#include <string>

namespace pvell {

enum class Err {
  DegenerateModulus,
  NonconvergentNome,
  NearThetaZero,
  PoleProximity,
  BranchPoint,
  NoConvergence,
  DegeneratePhi,
  SingularChart,
  ZeroGauge,
  OnCriticalRay,
  NonGenericMonodromy,
  UnitValue,
  SingularY,
  SingularDenominator,
  StripViolation,
  TailNotConverged,
  SingularPoint,
  StepUnderflow,
  MaxSteps,
  CoalescingTurningPoints,
  TraceStall,
  InvalidInput,
};

const char* err_name(Err e) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace pvell
