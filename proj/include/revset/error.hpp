#pragma once

#include <stdexcept>
#include <string>

namespace revset {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (schema violations, dangling ids,
/// dimension mismatches, unknown ids).
class DataError : public Error {
public:
    using Error::Error;
};

/// An aggregation whose weighted sum is the zero vector.
class DegenerateAggregate : public Error {
public:
    DegenerateAggregate() : Error("DegenerateAggregate: weighted sum is the zero vector") {}
};

/// The request is well-formed but no admissible answer exists.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class NoEligibleReviewers : public InfeasibleError {
public:
    explicit NoEligibleReviewers(const std::string& manuscript_id)
        : InfeasibleError("NoEligibleReviewers: no conflict-free reviewer with usable vectors for manuscript '" +
                          manuscript_id + "'") {}
};

class ThresholdTooStrict : public InfeasibleError {
public:
    explicit ThresholdTooStrict(double threshold)
        : InfeasibleError("ThresholdTooStrict: no reviewer keeps a publication with similarity >= " +
                          std::to_string(threshold)),
          threshold_(threshold) {}

    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
};

class NoFeasibleSet : public InfeasibleError {
public:
    explicit NoFeasibleSet(const std::string& detail) : InfeasibleError("NoFeasibleSet: " + detail) {}
};

}  // namespace revset
