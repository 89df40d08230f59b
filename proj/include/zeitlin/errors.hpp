#pragma once

#include <stdexcept>
#include <string>

namespace zeitlin {

struct invalid_size : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct size_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input lies (partly) outside the operator's range, e.g. a matrix with
// nonzero trace handed to the Poisson solver.
struct degenerate_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct quadrature_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct insufficient_data : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace zeitlin
