#pragma once

#include <stdexcept>

namespace crossmap {

// Input text violates the file-format grammar (bad header, bad token, ...).
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed input violates a semantic invariant (dangling synapse
// endpoint, duplicate neuron id, negative spike count, ...).
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The workload cannot fit the hardware (n > k*s).
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The instance exceeds an exhaustive-search enumeration cap.
class instance_too_large_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace crossmap
