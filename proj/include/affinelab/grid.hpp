#pragma once

#include "affinelab/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace affinelab {

// Uniform angular grid theta_j = 2*pi*j/n on [0, 2*pi). n must be even so
// that antipodal samples pair up as j <-> j + n/2.
class AngularGrid {
public:
    explicit AngularGrid(int n_samples) : n_(n_samples) {
        if (n_ < 8 || n_ % 2 != 0)
            throw Error("AngularGrid: n_samples must be even and >= 8, got " +
                        std::to_string(n_samples));
    }

    int size() const { return n_; }
    double delta() const { return 2.0 * std::numbers::pi / n_; }
    double angle(int j) const { return delta() * j; }

    std::vector<double> angles() const {
        std::vector<double> t(n_);
        for (int j = 0; j < n_; ++j) t[j] = angle(j);
        return t;
    }

    friend bool operator==(const AngularGrid& a, const AngularGrid& b) {
        return a.n_ == b.n_;
    }

private:
    int n_;
};

} // namespace affinelab
