#pragma once

#include <stdexcept>
#include <string>

namespace cavcool {

#define CAVCOOL_ERROR(Name)                                                    \
    struct Name : std::runtime_error {                                        \
        explicit Name(const std::string& msg) : std::runtime_error(msg) {}    \
    };

// model / geometry
CAVCOOL_ERROR(NonPositiveRate)       // a rate or frequency input that must be > 0 is not
CAVCOOL_ERROR(TrapDestabilized)      // cavity backaction drives a trap frequency imaginary
CAVCOOL_ERROR(ApproximationViolated) // effective cavity linewidth too far from bare linewidth
CAVCOOL_ERROR(NoConvergence)         // fixed-point iteration exhausted its budget
CAVCOOL_ERROR(InvalidStep)           // lattice shift index outside [0, step_count)
CAVCOOL_ERROR(DimensionMismatch)

// linear dynamics
CAVCOOL_ERROR(EigenFailure)          // eigensolver did not converge; retry with balancing
CAVCOOL_ERROR(NotHurwitz)            // drift matrix has a marginal or unstable eigenvalue
CAVCOOL_ERROR(SolverSingular)
CAVCOOL_ERROR(NegativeOccupation)
CAVCOOL_ERROR(StepSizeUnderflow)

// mode structure
CAVCOOL_ERROR(WrongGeometry)         // operation requires the uniform base lattice spacing
CAVCOOL_ERROR(StructureViolation)

// sweeps / io
CAVCOOL_ERROR(ConfigInvalid)
CAVCOOL_ERROR(OutputUnwritable)

#undef CAVCOOL_ERROR

} // namespace cavcool
