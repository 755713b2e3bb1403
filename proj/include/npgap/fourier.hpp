#pragma once

#include <Eigen/Core>

#include <complex>
#include <vector>

// Trigonometric interpolation on equispaced periodic grids (FFTW backed).
// Samples v_k sit at s = 2 pi k / n; n is even and the Nyquist mode is split
// symmetrically so that every operation below uses the same real interpolant.
namespace npgap::fourier {

// Interpolant values at m >= n equispaced points. m must be even.
Eigen::VectorXd resample(const Eigen::VectorXd& v, int m);

// Transpose of resample: maps a length-m covector to length n.
Eigen::VectorXd resample_adjoint(const Eigen::VectorXd& a, int n);

// d/ds of the interpolant at the nodes (Nyquist mode dropped).
Eigen::VectorXd derivative(const Eigen::VectorXd& v);

// Interpolant and its derivatives at arbitrary parameters.
class Interpolant {
public:
    explicit Interpolant(const Eigen::VectorXd& v);
    double value(double s) const;
    double deriv(double s, int order) const;
    int size() const { return n_; }

private:
    int n_;
    std::vector<std::complex<double>> c_;  // modes 0..n/2, Nyquist already halved
};

}  // namespace npgap::fourier
