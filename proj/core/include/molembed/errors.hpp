#pragma once

#include <stdexcept>
#include <string>

namespace molembed {

// Error taxonomy shared across the library. `kind()` is the stable
// machine-readable tag the CLI puts into its JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define MOLEMBED_DEFINE_ERROR(NAME, KIND)                                      \
    class NAME : public Error {                                                \
    public:                                                                    \
        explicit NAME(const std::string& message) : Error(KIND, message) {}    \
    };

MOLEMBED_DEFINE_ERROR(InvalidInputError, "invalid-input")
MOLEMBED_DEFINE_ERROR(ShapeError, "shape")
MOLEMBED_DEFINE_ERROR(VocabError, "vocab")
MOLEMBED_DEFINE_ERROR(LengthError, "length")
MOLEMBED_DEFINE_ERROR(DegenerateInputError, "degenerate-input")
MOLEMBED_DEFINE_ERROR(NumericError, "numeric")
MOLEMBED_DEFINE_ERROR(CheckpointError, "checkpoint")
MOLEMBED_DEFINE_ERROR(ParseError, "parse")
MOLEMBED_DEFINE_ERROR(ConfigError, "config")
MOLEMBED_DEFINE_ERROR(IoError, "io")

#undef MOLEMBED_DEFINE_ERROR

} // namespace molembed
