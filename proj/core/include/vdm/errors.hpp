#pragma once

#include <stdexcept>
#include <string>

namespace vdm {

// Invalid values or combinations of arguments (mismatched n, wrong phase
// variant, unnormalized density, ...). CLI maps this family to exit code 3.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A size/cost guard was exceeded (partition order, lattice enumeration, ...).
class size_error : public domain_error {
public:
    explicit size_error(const std::string& what) : domain_error(what) {}
};

// No exact value is known and the caller did not opt into an estimator.
// Carries the canonical text of the offending partition.
class coefficient_unavailable : public domain_error {
public:
    explicit coefficient_unavailable(const std::string& partition_text)
        : domain_error("no exact expansion coefficient known for partition " + partition_text),
          partition(partition_text) {}
    std::string partition;
};

// Inversion produced values outside the physically meaningful range
// (negative recovered moments, complex roots beyond tolerance, ...).
class estimation_noise_error : public domain_error {
public:
    explicit estimation_noise_error(const std::string& what) : domain_error(what) {}
};

} // namespace vdm
