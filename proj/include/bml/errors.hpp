#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bml {

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct JunctionDoublyOccupied : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptyInterval : std::domain_error {
    using std::domain_error::domain_error;
};

struct DensityTooHigh : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct HypothesisNotMet : std::logic_error {
    using std::logic_error::logic_error;
};

struct EmptyInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when cycle detection runs out of its step budget. Carries how far it got.
struct ResourceLimit : std::runtime_error {
    ResourceLimit(const std::string& what, std::uint64_t steps_taken)
        : std::runtime_error(what), steps(steps_taken) {}
    std::uint64_t steps;
};

}  // namespace bml
