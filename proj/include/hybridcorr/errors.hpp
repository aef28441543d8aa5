#pragma once

#include <stdexcept>
#include <string>

namespace hybridcorr {

// A state, operator, or pending displacement does not fit the configured
// Fock cutoff within the requested tolerance.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double deficit)
        : std::runtime_error(what), deficit_(deficit) {}
    double deficit() const { return deficit_; }

private:
    double deficit_;
};

// A constructed state violates hermiticity, trace, or positivity bounds.
class InvariantViolation : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Measurement or reflection subspaces collapse onto each other (beta too
// small for the requested basis size).
class DegenerateBasisError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kraus family fails the completeness check on the union subspace.
class ChannelConstructionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hybridcorr
