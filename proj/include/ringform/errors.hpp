#pragma once

#include <stdexcept>
#include <string>

namespace ringform {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define RINGFORM_DEFINE_ERROR(Name)                 \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    }

RINGFORM_DEFINE_ERROR(CoincidentAgents);
RINGFORM_DEFINE_ERROR(InvalidOrder);
RINGFORM_DEFINE_ERROR(NotSymmetric);
RINGFORM_DEFINE_ERROR(InvalidExponent);
RINGFORM_DEFINE_ERROR(CollisionError);
RINGFORM_DEFINE_ERROR(DegenerateD);
RINGFORM_DEFINE_ERROR(MixedSignViolated);
RINGFORM_DEFINE_ERROR(PreconditionViolated);
RINGFORM_DEFINE_ERROR(DomainError);
RINGFORM_DEFINE_ERROR(ScenarioError);

#undef RINGFORM_DEFINE_ERROR

}  // namespace ringform
