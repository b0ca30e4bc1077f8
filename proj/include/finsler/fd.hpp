#pragma once

#include <functional>
#include <span>

namespace finsler {

using ScalarFn =
    std::function<double(std::span<const double>, std::span<const double>)>;

// Central finite-difference estimate of d^{|a|+|b|} f / dx^a dy^b with one
// Richardson extrapolation step: error O(step^4). Test oracle only; the
// production differentiation path is jet arithmetic. Supports |a|+|b| <= 4.
double fd_oracle(const ScalarFn& f, std::span<const double> x,
                 std::span<const double> y, std::span<const int> alpha,
                 std::span<const int> beta, double step);

}  // namespace finsler
