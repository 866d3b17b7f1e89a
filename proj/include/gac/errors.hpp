#ifndef GAC_ERRORS_HPP
#define GAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gac {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values: out-of-range coordinates, NaN angles,
// unknown scheme names, T_Gsync shorter than the fix duration, ...
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Iterative geodesic solution failed to converge (near-antipodal input).
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Malformed input text; carries the 1-based line number when known.
struct ParseError : Error {
    ParseError(const std::string& msg, long line_no)
        : Error(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
          line(line_no) {}
    long line;
};

// Well-formed input that violates a trace invariant.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem failures: missing files, unwritable sinks.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace gac

#endif  // GAC_ERRORS_HPP
