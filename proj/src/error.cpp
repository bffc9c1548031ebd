#include "pvell/error.hpp"

namespace pvell {

const char* err_name(Err e) noexcept {
  switch (e) {
    case Err::DegenerateModulus: return "DegenerateModulus";
    case Err::NonconvergentNome: return "NonconvergentNome";
    case Err::NearThetaZero: return "NearThetaZero";
    case Err::PoleProximity: return "PoleProximity";
    case Err::BranchPoint: return "BranchPoint";
    case Err::NoConvergence: return "NoConvergence";
    case Err::DegeneratePhi: return "DegeneratePhi";
    case Err::SingularChart: return "SingularChart";
    case Err::ZeroGauge: return "ZeroGauge";
    case Err::OnCriticalRay: return "OnCriticalRay";
    case Err::NonGenericMonodromy: return "NonGenericMonodromy";
    case Err::UnitValue: return "UnitValue";
    case Err::SingularY: return "SingularY";
    case Err::SingularDenominator: return "SingularDenominator";
    case Err::StripViolation: return "StripViolation";
    case Err::TailNotConverged: return "TailNotConverged";
    case Err::SingularPoint: return "SingularPoint";
    case Err::StepUnderflow: return "StepUnderflow";
    case Err::MaxSteps: return "MaxSteps";
    case Err::CoalescingTurningPoints: return "CoalescingTurningPoints";
    case Err::TraceStall: return "TraceStall";
    case Err::InvalidInput: return "InvalidInput";
  }
  return "UnknownError";
}

}  // namespace pvell
