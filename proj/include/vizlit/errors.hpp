#pragma once

#include <stdexcept>
#include <string>

namespace vizlit {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    User = 1,       // bad flags, bad paths, misuse
    Data = 2,       // schema/invariant violations, infeasible constraints
    Transport = 3,  // network/provider exhaustion
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define VIZLIT_DEFINE_ERROR(Name, Kind)                                          \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& msg) : Error(ErrorKind::Kind, msg) {}   \
    }

VIZLIT_DEFINE_ERROR(SchemaError, Data);
VIZLIT_DEFINE_ERROR(MissingAsset, Data);
VIZLIT_DEFINE_ERROR(InvariantViolation, Data);
VIZLIT_DEFINE_ERROR(ConstraintInfeasible, Data);
VIZLIT_DEFINE_ERROR(RenderUnsupported, Data);
VIZLIT_DEFINE_ERROR(KeyMismatch, Data);
VIZLIT_DEFINE_ERROR(ModeMismatch, Data);
VIZLIT_DEFINE_ERROR(PackMismatch, Data);
VIZLIT_DEFINE_ERROR(AlignmentMissing, Data);
VIZLIT_DEFINE_ERROR(UnsupportedTask, Data);
VIZLIT_DEFINE_ERROR(IncompleteRun, Data);
VIZLIT_DEFINE_ERROR(EmptyTaskList, User);
VIZLIT_DEFINE_ERROR(AuthError, Transport);
VIZLIT_DEFINE_ERROR(RateLimited, Transport);
VIZLIT_DEFINE_ERROR(TransportError, Transport);
VIZLIT_DEFINE_ERROR(ProviderRefusal, Transport);

#undef VIZLIT_DEFINE_ERROR

}  // namespace vizlit
