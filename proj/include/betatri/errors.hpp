#pragma once

#include <stdexcept>
#include <string>

namespace betatri {

// Thrown when an operation would exceed a configured resource cap
// (exhaustive state spaces, O(n^4) sums). Distinct from std::domain_error
// so callers can map it to a dedicated exit status.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace betatri
