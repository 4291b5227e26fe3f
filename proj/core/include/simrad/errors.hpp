#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace simrad {

/// Base of every error raised by the library. `name()` is the stable
/// identifier printed by the CLI (e.g. "GeometryMismatch").
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define SIMRAD_DEFINE_ERROR(Type)                                            \
    class Type : public Error {                                              \
    public:                                                                  \
        explicit Type(const std::string& what) : Error(#Type, what) {}       \
    }

SIMRAD_DEFINE_ERROR(InvalidArgument);
SIMRAD_DEFINE_ERROR(ZeroVector);
SIMRAD_DEFINE_ERROR(SupportOverflow);
SIMRAD_DEFINE_ERROR(GeometryMismatch);
SIMRAD_DEFINE_ERROR(NotAdmissible);
SIMRAD_DEFINE_ERROR(InsufficientCoverage);
SIMRAD_DEFINE_ERROR(FileNotFound);
SIMRAD_DEFINE_ERROR(FormatError);

#undef SIMRAD_DEFINE_ERROR

} // namespace simrad
