#include "exbound/errors.hpp"

namespace exbound {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

ConvergenceError::ConvergenceError(const std::string& what, std::size_t iterations,
                                   double relative_residual)
    : Error(what), iterations_(iterations), relative_residual_(relative_residual) {}

}  // namespace exbound
