#pragma once
#include <stdexcept>
#include <string>

namespace bankopt {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BracketingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoCaseAdmissible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultipleCasesAdmissible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

} // namespace bankopt
