#pragma once
#include <stdexcept>

namespace fairaudit {

// bad input: shapes, labels, files, flags. CLI maps this to exit code 2.
struct data_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// numeric breakdown (non-finite intermediates, failed solve). CLI exit code 3.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fairaudit
