#pragma once

#include <stdexcept>
#include <string>

namespace anisodec {

/// A precondition on a physical input was violated. `field()` names the
/// offending parameter so front ends can report it.
class DomainError : public std::domain_error {
public:
    DomainError(std::string field, const std::string& what)
        : std::domain_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A numerical routine produced a non-finite value or failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw DomainError(field, what);
}
}  // namespace detail

}  // namespace anisodec
