#pragma once

#include <vector>

namespace affinelab {

// Trigonometric interpolant of real periodic samples on a uniform grid
// theta_j = 2*pi*j/n (n even):
//
//   f(theta) = a0/2 + sum_{k=1}^{n/2-1} (a_k cos k theta + b_k sin k theta)
//            + (a_{n/2}/2) cos((n/2) theta)
//
// Derivatives on the grid are computed by coefficient multiplication; the
// Nyquist mode is dropped for odd derivative orders (its sine factor
// vanishes at the nodes). Off-grid evaluation sums the series directly.
class TrigSeries {
public:
    explicit TrigSeries(const std::vector<double>& samples);

    int size() const { return n_; }

    double eval(double theta) const;
    double eval_derivative(double theta) const;

    // Samples of the order-th derivative at the grid nodes (order 1 or 2).
    std::vector<double> grid_derivative(int order) const;

    // Resample onto an m-point uniform grid (trigonometric interpolation).
    std::vector<double> resample(int m) const;

    const std::vector<double>& cos_coeffs() const { return a_; }
    const std::vector<double>& sin_coeffs() const { return b_; }

private:
    int n_;
    std::vector<double> a_, b_;  // index k = 0..n/2; b_[0] = b_[n/2] = 0
};

} // namespace affinelab
