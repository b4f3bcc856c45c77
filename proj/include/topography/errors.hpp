#pragma once

#include <stdexcept>
#include <string>

namespace topography {

/// Base of every domain error raised by the library. `name()` is the stable
/// identifier surfaced by the CLI.
class TopographyError : public std::runtime_error {
public:
    TopographyError(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define TOPOGRAPHY_DEFINE_ERROR(Type)                                          \
    class Type : public TopographyError {                                      \
    public:                                                                    \
        explicit Type(const std::string& what) : TopographyError(#Type, what) {} \
    }

/// A rational mutation divided by a zero cluster entry.
TOPOGRAPHY_DEFINE_ERROR(DivisionByZero);
/// A Laurent (or integer) quotient does not exist.
TOPOGRAPHY_DEFINE_ERROR(InexactDivision);
/// Farey addition/subtraction on a non-neighbor pair.
TOPOGRAPHY_DEFINE_ERROR(NotNeighbors);
/// A cluster does not solve the discriminant equation it was paired with.
TOPOGRAPHY_DEFINE_ERROR(InconsistentDiscriminant);
/// Laurent evaluation hit a zero coordinate under a negative exponent.
TOPOGRAPHY_DEFINE_ERROR(EvalAtZero);
/// Word operation that only accepts {L,R} received an S.
TOPOGRAPHY_DEFINE_ERROR(SInBody);
/// Brute-force enumeration requested beyond its size cap.
TOPOGRAPHY_DEFINE_ERROR(TooLarge);
/// Malformed textual input (words, fractions, forms).
TOPOGRAPHY_DEFINE_ERROR(ParseError);

#undef TOPOGRAPHY_DEFINE_ERROR

}  // namespace topography
