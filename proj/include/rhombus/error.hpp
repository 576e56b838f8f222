#pragma once

#include <stdexcept>
#include <string>

namespace rhombus {

enum class ErrorCode {
    InvalidBasis,
    BasisMismatch,
    InvalidShape,
    InvalidPatch,
    InvalidTileset,
    Overlap,
    NotParallel,
    NotBoundary,
    NotAVertex,
    RankExceedsKnownPrefix,
    Budget,
    RotationNotInBasis,
    NoOccurrence,
    Unindexable,
    SingularGrid,
    Parse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rhombus
