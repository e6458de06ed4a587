#ifndef IFM_ERRORS_HPP
#define IFM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ifm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateChannel : Error {
    using Error::Error;
};

struct InvalidChannelKind : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct ChannelNotInRegistry : Error {
    using Error::Error;
};

struct InvalidObjectPlacement : Error {
    using Error::Error;
};

struct SharedLossChannel : Error {
    using Error::Error;
};

struct NotAState : Error {
    using Error::Error;
};

struct CannotCalibrate : Error {
    using Error::Error;
};

struct PhaseUndefined : Error {
    using Error::Error;
};

struct ImplausibleInput : Error {
    using Error::Error;
};

/// Parser diagnostic with a 1-based source line number.
struct ParseError : Error {
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

}  // namespace ifm

#endif
