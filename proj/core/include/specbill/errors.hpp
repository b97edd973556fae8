#pragma once

#include <stdexcept>
#include <string>

namespace specbill {

// Base for all numerical/domain failures raised by the library. The CLI maps
// these to exit code 3 and prints code() verbatim; configuration problems use
// std::invalid_argument (exit code 2) instead.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define SPECBILL_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}           \
  };

SPECBILL_DEFINE_ERROR(ComponentsIntersect)  // obstacle components touch or overlap
SPECBILL_DEFINE_ERROR(NoGraphChart)         // endpoint tangent not horizontal
SPECBILL_DEFINE_ERROR(DiagonalSingularity)  // consecutive same-component points coincide
SPECBILL_DEFINE_ERROR(OutOfChart)           // abscissa outside germ validity radius
SPECBILL_DEFINE_ERROR(NoConvergence)        // iteration exhausted without meeting tolerance
SPECBILL_DEFINE_ERROR(CollapsedLink)        // link length fell below threshold during Newton
SPECBILL_DEFINE_ERROR(NotHyperbolic)        // |trace| <= 2 or c <= 1
SPECBILL_DEFINE_ERROR(SpectralMismatch)     // direct and spectral cube sums disagree
SPECBILL_DEFINE_ERROR(MissingCoefficient)   // germ lacks a required Taylor order
SPECBILL_DEFINE_ERROR(Degenerate)           // f''(0) = 0: parabolic bouncing ball
SPECBILL_DEFINE_ERROR(SingularSystem)       // decoupling 2x2 system numerically singular
SPECBILL_DEFINE_ERROR(OddObstruction)       // f'''(0) = 0 but later odd data nonzero
SPECBILL_DEFINE_ERROR(NegativeSquare)       // (f''')^2 recovered negative: inconsistent table
SPECBILL_DEFINE_ERROR(OriginSingularity)    // Hankel function evaluated at z = 0
SPECBILL_DEFINE_ERROR(PhaseJump)            // log-det phase step >= pi even after refinement
SPECBILL_DEFINE_ERROR(WindowTooNarrow)      // k-window cannot resolve the target lengths

#undef SPECBILL_DEFINE_ERROR

}  // namespace specbill
