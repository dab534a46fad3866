#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipuc {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Alternation or operand-characteristic violation.
struct ill_formed : error {
    using error::error;
};

class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t position)
        : error(what + " at position " + std::to_string(position)), position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

struct fit_error : error {
    using error::error;
};

struct unbound_variable : error {
    using error::error;
};

struct characteristic_mismatch : error {
    using error::error;
};

struct non_sentence : error {
    using error::error;
};

struct stale_redex : error {
    using error::error;
};

struct step_budget_exceeded : error {
    using error::error;
};

struct format_error : error {
    using error::error;
};

} // namespace ipuc
