#pragma once

#include <stdexcept>
#include <string>

namespace concbound {

// A parameter sits outside its mathematical domain. The message names the
// violated constraint.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed configuration or request. Maps to CLI exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact computation would exceed its enumeration budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_domain(bool ok, const std::string& constraint) {
    if (!ok) throw DomainError(constraint);
}

inline void require_usage(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

}  // namespace concbound
