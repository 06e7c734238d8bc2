#pragma once

#include <stdexcept>
#include <string>

namespace synaudit {

// Configuration or input problems: bad paths, malformed config, missing files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Data that fails schema validation: unknown categories, unparsable numerics,
// mismatched widths.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Broken internal invariants; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace synaudit
