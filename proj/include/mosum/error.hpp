#pragma once

#include <stdexcept>

namespace mosum {

/// Raised when caller-supplied data or parameters violate a documented
/// precondition (index out of range, bandwidth too large, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mosum
