#pragma once

#include <stdexcept>
#include <string>

namespace textsnake {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry
class DegeneratePolygon : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class EmptyInput        : public Error { using Error::Error; };
class DegenerateInput   : public Error { using Error::Error; };

// labelgen
class UnsupportedPolygon : public Error { using Error::Error; };
class ForkedInstance     : public Error { using Error::Error; };
class DegenerateWidth    : public Error { using Error::Error; };

// maps
class ThresholdOutOfRange : public Error { using Error::Error; };
class IoError             : public Error { using Error::Error; };
class BadMagic            : public Error { using Error::Error; };
class DimensionOverflow   : public Error { using Error::Error; };

// postproc
class OffComponent : public Error { using Error::Error; };
class EmptyAxis    : public Error { using Error::Error; };

// rectify
class DegenerateSnake : public Error { using Error::Error; };

// cli_io
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what_part)
        : Error("parse error at line " + std::to_string(line) + ": " + what_part),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

class GenerationFailure : public Error { using Error::Error; };

// bench
class UnknownCase     : public Error { using Error::Error; };
class InvalidArgument : public Error { using Error::Error; };

}  // namespace textsnake
