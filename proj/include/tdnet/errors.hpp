#ifndef TDNET_ERRORS_HPP
#define TDNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tdnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NodeNotFound : Error { using Error::Error; };
struct NotAdjacent : Error { using Error::Error; };
struct InvalidRoute : Error { using Error::Error; };
struct InvalidHopCount : Error { using Error::Error; };
struct FlowNegative : Error { using Error::Error; };
struct FlowUnbounded : Error { using Error::Error; };
struct NoCoupling : Error { using Error::Error; };
struct SingularCoupling : Error { using Error::Error; };
struct NonDifferentiableFlow : Error { using Error::Error; };
struct ZeroDenominatorRate : Error { using Error::Error; };
struct NoRoute : Error { using Error::Error; };
struct EnumerationCapExceeded : Error { using Error::Error; };
struct InfeasibleDegreeSequence : Error { using Error::Error; };
struct OddK : Error { using Error::Error; };
struct BackboneTooSmall : Error { using Error::Error; };
struct SinkhornNonConvergence : Error { using Error::Error; };
struct MissingRouteSet : Error { using Error::Error; };
struct NonPositiveBracket : Error { using Error::Error; };
struct LpInfeasible : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace tdnet

#endif
