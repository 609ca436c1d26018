#pragma once

#include <stdexcept>
#include <string>

namespace lda {

// Raised when an enumeration would exceed its configured work budget.
// The command line maps this to a distinct exit code so callers can tell
// "too expensive" apart from "invalid input".
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace lda
