#include "affinelab/spectral.hpp"

#include "affinelab/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

namespace affinelab {

namespace {

// fftw planning is not thread safe; plans are created once per size under a
// lock and then executed on caller-owned buffers via the new-array API
// (legal because the plans are created with FFTW_UNALIGNED).
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan r2c(int n) {
        std::scoped_lock lock(mutex_);
        auto it = r2c_.find(n);
        if (it != r2c_.end()) return it->second;
        std::vector<double> in(n);
        std::vector<std::complex<double>> out(n / 2 + 1);
        fftw_plan p = fftw_plan_dft_r2c_1d(
            n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw Error("fftw r2c plan creation failed");
        r2c_[n] = p;
        return p;
    }

    fftw_plan c2r(int n) {
        std::scoped_lock lock(mutex_);
        auto it = c2r_.find(n);
        if (it != c2r_.end()) return it->second;
        std::vector<std::complex<double>> in(n / 2 + 1);
        std::vector<double> out(n);
        fftw_plan p = fftw_plan_dft_c2r_1d(
            n, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw Error("fftw c2r plan creation failed");
        c2r_[n] = p;
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<int, fftw_plan> r2c_, c2r_;
};

std::vector<std::complex<double>> forward(const std::vector<double>& samples) {
    const int n = static_cast<int>(samples.size());
    std::vector<double> in(samples);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_execute_dft_r2c(PlanCache::instance().r2c(n), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> inverse(std::vector<std::complex<double>> spectrum, int n) {
    std::vector<double> out(n);
    fftw_execute_dft_c2r(PlanCache::instance().c2r(n),
                         reinterpret_cast<fftw_complex*>(spectrum.data()),
                         out.data());
    for (double& v : out) v /= n;
    return out;
}

} // namespace

TrigSeries::TrigSeries(const std::vector<double>& samples)
    : n_(static_cast<int>(samples.size())) {
    if (n_ < 8 || n_ % 2 != 0)
        throw Error("TrigSeries: sample count must be even and >= 8");
    const auto spec = forward(samples);
    const int half = n_ / 2;
    a_.assign(half + 1, 0.0);
    b_.assign(half + 1, 0.0);
    for (int k = 0; k <= half; ++k) {
        a_[k] = 2.0 * spec[k].real() / n_;
        b_[k] = -2.0 * spec[k].imag() / n_;
    }
    b_[0] = b_[half] = 0.0;
}

double TrigSeries::eval(double theta) const {
    const int half = n_ / 2;
    // incremental rotation for cos(k theta), sin(k theta)
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    double ck = 1.0, sk = 0.0;
    double acc = 0.5 * a_[0];
    for (int k = 1; k < half; ++k) {
        const double cn = ck * c1 - sk * s1;
        const double sn = sk * c1 + ck * s1;
        ck = cn;
        sk = sn;
        acc += a_[k] * ck + b_[k] * sk;
    }
    const double cn = ck * c1 - sk * s1;
    acc += 0.5 * a_[half] * cn;
    return acc;
}

double TrigSeries::eval_derivative(double theta) const {
    const int half = n_ / 2;
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    double ck = 1.0, sk = 0.0;
    double acc = 0.0;
    for (int k = 1; k < half; ++k) {
        const double cn = ck * c1 - sk * s1;
        const double sn = sk * c1 + ck * s1;
        ck = cn;
        sk = sn;
        acc += k * (b_[k] * ck - a_[k] * sk);
    }
    const double sn = sk * c1 + ck * s1;
    acc -= 0.5 * a_[half] * half * sn;
    return acc;
}

std::vector<double> TrigSeries::grid_derivative(int order) const {
    if (order != 1 && order != 2)
        throw Error("TrigSeries::grid_derivative: order must be 1 or 2");
    const int half = n_ / 2;
    std::vector<std::complex<double>> spec(half + 1);
    for (int k = 0; k <= half; ++k) {
        const std::complex<double> c(0.5 * n_ * a_[k], -0.5 * n_ * b_[k]);
        if (order == 1) {
            spec[k] = (k == half) ? 0.0 : std::complex<double>(0.0, k) * c;
        } else {
            spec[k] = -static_cast<double>(k) * k * c;
        }
    }
    return inverse(std::move(spec), n_);
}

std::vector<double> TrigSeries::resample(int m) const {
    if (m == n_) {
        std::vector<std::complex<double>> spec(n_ / 2 + 1);
        for (int k = 0; k <= n_ / 2; ++k)
            spec[k] = std::complex<double>(0.5 * n_ * a_[k], -0.5 * n_ * b_[k]);
        return inverse(std::move(spec), n_);
    }
    std::vector<double> out(m);
    const double dt = 2.0 * std::acos(-1.0) / m;
    for (int j = 0; j < m; ++j) out[j] = eval(dt * j);
    return out;
}

} // namespace affinelab
