#pragma once

#include <stdexcept>
#include <string>

namespace opacity {

// Malformed or inconsistent model (unknown place, bad arc, secret outside Q, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reachability exploration hit the state or token bound.
class BoundError : public ModelError {
public:
    using ModelError::ModelError;
};

// Operation called outside its precondition (firing a disabled transition,
// mixing state sets of different systems).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EnforcementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shipped corpus files missing or not matching their documented content.
class PackagingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace opacity
