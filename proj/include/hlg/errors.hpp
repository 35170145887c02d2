#pragma once

#include <stdexcept>
#include <string>

namespace hlg {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed (non-convergence, non-concavity, underflow).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw domain_error(what);
}

} // namespace detail
} // namespace hlg
