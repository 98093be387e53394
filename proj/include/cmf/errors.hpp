#ifndef CMF_ERRORS_HPP
#define CMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmf {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Incompatible block structure between algebra values or polynomials.
class SpecMismatch : public Error { public: using Error::Error; };

/// Module elements or operators that live in different spaces.
class SpaceMismatch : public Error { public: using Error::Error; };

/// Matrix, algebra element, or operator not invertible at the requested tolerance.
class Singular : public Error { public: using Error::Error; };

/// Ambient matrix that cannot be represented in the module basis.
class NotInSpan : public Error { public: using Error::Error; };

/// Point outside every interval and atom of the measure.
class OutOfDomain : public Error { public: using Error::Error; };

/// Lower frame bound not bounded away from zero.
class NotAFrame : public Error { public: using Error::Error; };

/// ker(gram) not contained in ker(form): no finite upper bound exists.
class KernelViolation : public Error { public: using Error::Error; };

/// A pair of maps that fails the duality identity.
class NotDual : public Error { public: using Error::Error; };

/// Characteristic-function hypothesis of the subset-removal check fails.
class HypothesisFails : public Error { public: using Error::Error; };

/// Subset integral that vanishes.
class ZeroVector : public Error { public: using Error::Error; };

/// Operation defined only for purely atomic measures.
class NotApplicable : public Error { public: using Error::Error; };

/// Coefficients that do not synthesize the requested element.
class NotACoefficient : public Error { public: using Error::Error; };

/// Malformed descriptor file.
class ParseError : public Error { public: using Error::Error; };

}  // namespace cmf

#endif  // CMF_ERRORS_HPP
