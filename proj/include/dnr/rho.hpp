#pragma once

#include "dnr/error.hpp"

#include <cmath>
#include <string>

namespace dnr {

/// Deformation parameter rho >= 1 and r = 2(1 - 1/rho) in [0, 2).
class RhoParam {
public:
    explicit RhoParam(double rho) : rho_(rho), r_(2.0 * (1.0 - 1.0 / rho)) {
        if (!std::isfinite(rho) || rho < 1.0)
            throw Error(ErrorKind::RhoOutOfRange, "rho must be finite and >= 1, got " + std::to_string(rho));
        if (rho == 1.0) r_ = 0.0;
        if (rho == 2.0) r_ = 1.0;
    }

    double rho() const noexcept { return rho_; }
    double r() const noexcept { return r_; }
    bool at_most_two() const noexcept { return rho_ <= 2.0; }

private:
    double rho_;
    double r_;
};

}  // namespace dnr
