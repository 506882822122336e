#pragma once

#include <stdexcept>
#include <string>

namespace elrf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data structures (dangling variable ids, bad shapes).
struct StructuralError : Error {
    using Error::Error;
};

// A documented operation precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

// A configured resource cap was exceeded (row caps, retry caps).
struct ResourceLimitError : Error {
    using Error::Error;
};

// Text input rejected; carries a 1-based position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& message)
        : Error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " +
                message),
          line(line_),
          column(column_) {}
};

}  // namespace elrf
