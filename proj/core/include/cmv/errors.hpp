#pragma once

#include <stdexcept>
#include <string>

namespace cmv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CMV_DECLARE_ERROR(Name)        \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

CMV_DECLARE_ERROR(ModulusError);          // |alpha| >= 1 or |eta| != 1
CMV_DECLARE_ERROR(FrequencyRangeError);   // omega outside (0, 1)
CMV_DECLARE_ERROR(SupportError);          // index outside a sequence's support
CMV_DECLARE_ERROR(SizeError);             // matrix dimension too small
CMV_DECLARE_ERROR(SingularError);         // numerically singular linear system
CMV_DECLARE_ERROR(WindowError);           // index outside the trusted window interior
CMV_DECLARE_ERROR(DegenerateRhoError);    // rho(n) vanishes numerically
CMV_DECLARE_ERROR(OverflowError);         // magnitudes beyond double range
CMV_DECLARE_ERROR(NormalizationError);    // |eta0|^2 + |eta1|^2 != 2
CMV_DECLARE_ERROR(InsufficientDataError);
CMV_DECLARE_ERROR(DiskError);             // spectral parameter outside the open disk
CMV_DECLARE_ERROR(DepthError);            // Schur depth invalid or not converged
CMV_DECLARE_ERROR(PoleError);             // vanishing denominator
CMV_DECLARE_ERROR(HorizonError);          // solution horizon exhausted
CMV_DECLARE_ERROR(DomainError);           // argument outside the mathematical domain
CMV_DECLARE_ERROR(DegenerateError);       // F+ - M- vanishes
CMV_DECLARE_ERROR(ConventionError);       // origin normalizations inconsistent with decaying solutions

#undef CMV_DECLARE_ERROR

}  // namespace cmv
