#pragma once

#include <stdexcept>
#include <string>

namespace subpress {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No cyclically admissible subword exists; the caller should extend the trajectory.
class NoClosure : public Error {
public:
    using Error::Error;
};

/// Gelfand iteration did not settle within the squaring budget.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double last_estimate, double last_gap)
        : Error(what), estimate(last_estimate), gap(last_gap) {}
    double estimate;
    double gap;
};

class GridTooShort : public Error {
public:
    using Error::Error;
};

/// Bernoulli sampling requested on a subshift that is not the full shift.
class UnsupportedSft : public Error {
public:
    using Error::Error;
};

}  // namespace subpress
