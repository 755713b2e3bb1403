#include "npgap/fourier.hpp"

#include "npgap/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace npgap::fourier {

namespace {

// The FFTW planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> forward(const Eigen::VectorXd& v) {
    int n = int(v.size());
    std::vector<double> in(v.data(), v.data() + n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(p);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(p);
    }
    return out;
}

// Unnormalized real inverse transform of a half spectrum of length m/2+1.
Eigen::VectorXd backward(std::vector<std::complex<double>> spec, int m) {
    std::vector<double> out(m);
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        p = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(spec.data()), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(p);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(p);
    }
    return Eigen::Map<Eigen::VectorXd>(out.data(), m);
}

void require_even(int n) {
    if (n < 2 || n % 2) throw DomainError("trigonometric grids need an even size");
}

}  // namespace

Eigen::VectorXd resample(const Eigen::VectorXd& v, int m) {
    int n = int(v.size());
    require_even(n);
    require_even(m);
    if (m < n) throw DomainError("resample target must not be coarser");
    if (m == n) return v;
    auto x = forward(v);
    std::vector<std::complex<double>> y(m / 2 + 1, 0.0);
    for (int j = 0; j < n / 2; ++j) y[j] = x[j];
    y[n / 2] = 0.5 * x[n / 2].real();
    return backward(std::move(y), m) / double(n);
}

Eigen::VectorXd resample_adjoint(const Eigen::VectorXd& a, int n) {
    int m = int(a.size());
    require_even(n);
    require_even(m);
    if (m < n) throw DomainError("resample adjoint needs m >= n");
    if (m == n) return a;
    auto x = forward(a);
    std::vector<std::complex<double>> y(n / 2 + 1);
    for (int j = 0; j < n / 2; ++j) y[j] = x[j];
    y[n / 2] = x[n / 2].real();
    return backward(std::move(y), n) / double(n);
}

Eigen::VectorXd derivative(const Eigen::VectorXd& v) {
    int n = int(v.size());
    require_even(n);
    auto x = forward(v);
    for (int j = 0; j < n / 2; ++j) x[j] *= std::complex<double>(0, j);
    x[n / 2] = 0;
    return backward(std::move(x), n) / double(n);
}

Interpolant::Interpolant(const Eigen::VectorXd& v) : n_(int(v.size())) {
    require_even(n_);
    c_ = forward(v);
    for (auto& c : c_) c /= double(n_);
    c_[n_ / 2] *= 0.5;
}

double Interpolant::value(double s) const { return deriv(s, 0); }

double Interpolant::deriv(double s, int order) const {
    // f(s) = c0 + 2 Re sum_{j>=1} c_j e^{i j s}, Nyquist term already halved.
    std::complex<double> acc = 0;
    std::complex<double> e = std::polar(1.0, s), ej = 1.0;
    for (int j = 1; j <= n_ / 2; ++j) {
        ej *= e;
        std::complex<double> f = std::pow(std::complex<double>(0, j), order);
        acc += c_[j] * f * ej;
    }
    double r = 2.0 * acc.real();
    if (order == 0) r += c_[0].real();
    return r;
}

}  // namespace npgap::fourier
