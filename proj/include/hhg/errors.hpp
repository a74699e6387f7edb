#pragma once

#include <stdexcept>
#include <string>

namespace hhg {

// Error category, mapped to CLI exit codes: domain -> 1, format -> 2.
enum class ErrorKind { domain, format };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

#define HHG_ERROR_TYPE(Name, Kind)                                                       \
    class Name : public Error {                                                          \
      public:                                                                            \
        explicit Name(const std::string& msg) : Error(ErrorKind::Kind, #Name ": " + msg) {} \
    }

// fock space / states
HHG_ERROR_TYPE(TruncationOverflow, domain);
HHG_ERROR_TYPE(InvalidState, domain);
HHG_ERROR_TYPE(ZeroIntensity, domain);

// Hamiltonian / propagation
HHG_ERROR_TYPE(NonHermitian, domain);
HHG_ERROR_TYPE(StepTooLarge, domain);
HHG_ERROR_TYPE(NonPositiveInput, domain);

// multimode squeezer models
HHG_ERROR_TYPE(ZeroGain, domain);
HHG_ERROR_TYPE(EmptySpectrum, domain);
HHG_ERROR_TYPE(InvalidK, domain);

// detector simulation
HHG_ERROR_TYPE(ConfigError, domain);

// correlator
HHG_ERROR_TYPE(UnsortedStream, domain);
HHG_ERROR_TYPE(EmptyChannel, domain);
HHG_ERROR_TYPE(FitFailure, domain);
HHG_ERROR_TYPE(InsufficientCounts, domain);
HHG_ERROR_TYPE(RejectedFit, domain);
HHG_ERROR_TYPE(RejectedInput, domain);
HHG_ERROR_TYPE(InvalidEfficiency, domain);
HHG_ERROR_TYPE(ZeroRate, domain);
HHG_ERROR_TYPE(TooFewRuns, domain);

// strong-field analysis
HHG_ERROR_TYPE(NonPositiveData, domain);
HHG_ERROR_TYPE(DegenerateFit, domain);
HHG_ERROR_TYPE(NoCrossover, domain);
HHG_ERROR_TYPE(MissingLatticeConstant, domain);
HHG_ERROR_TYPE(UnknownMaterial, domain);

// malformed inputs (files, magic bytes, unparsable config)
HHG_ERROR_TYPE(FormatError, format);

#undef HHG_ERROR_TYPE

}  // namespace hhg
