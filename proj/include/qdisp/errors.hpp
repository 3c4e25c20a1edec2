#ifndef QDISP_ERRORS_HPP
#define QDISP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdisp {

// Error taxonomy shared by all modules. The CLI maps these onto its
// exit-code contract (2 invalid input, 3 physicality, 4 truncation).
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& msg, int suggested_dim = 0)
        : std::runtime_error(msg), suggested_dim(suggested_dim) {}
    int suggested_dim;
};

struct degenerate_input : std::runtime_error {
    explicit degenerate_input(const std::string& msg) : std::runtime_error(msg) {}
};

struct unphysical_input : std::runtime_error {
    explicit unphysical_input(const std::string& msg) : std::runtime_error(msg) {}
};

struct internal_inconsistency : std::runtime_error {
    explicit internal_inconsistency(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qdisp

#endif
