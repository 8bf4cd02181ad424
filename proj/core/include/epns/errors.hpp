#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epns {

/// A computation produced NaN/Inf or left its stability region.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

}  // namespace epns
