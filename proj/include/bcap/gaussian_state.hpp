#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "bcap/constants.hpp"

namespace bcap {

/// Symplectic form Omega = [[0, I_n], [-I_n, 0]] in xxpp ordering.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Displacement vector of an n-mode coherent amplitude vector:
/// sqrt(2) [-Im a_1 .. -Im a_n, Re a_1 .. Re a_n].
Eigen::VectorXd coherent_displacement(const Eigen::VectorXcd& alpha);

/// Gaussian state: covariance matrix (vacuum = identity) plus displacement
/// vector, xxpp ordering. Construction validates symmetry and the
/// physicality condition cov + i Omega >= 0 (within kPsdTolerance).
class GaussianState {
  public:
    GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd disp);

    static GaussianState vacuum(int n_modes);
    static GaussianState coherent(const Eigen::VectorXcd& alpha);
    static GaussianState thermal(int n_modes, double mean_photons);

    int n_modes() const { return n_modes_; }
    const Eigen::MatrixXd& cov() const { return cov_; }
    const Eigen::VectorXd& disp() const { return disp_; }

    /// Minimum eigenvalue of cov + i Omega (>= -kPsdTolerance for any
    /// physical state).
    double physicality_margin() const;

    /// Symplectic eigenvalues (all >= 1 for physical states; == 1 for pure).
    Eigen::VectorXd symplectic_eigenvalues() const;

    GaussianState displaced(const Eigen::VectorXd& shift) const;

    /// chi(x) = exp(-x^T cov x / 4 + i disp^T x).
    std::complex<double> characteristic_function(const Eigen::VectorXd& x) const;

    std::string to_json() const;
    static GaussianState from_json(const std::string& text);

  private:
    int n_modes_;
    Eigen::MatrixXd cov_;
    Eigen::VectorXd disp_;
};

namespace detail {

/// Solves M X = B for symmetric positive (semi)definite M via pivoted LDLT.
/// Rejects matrices violating PSD beyond kPsdTolerance (relative to the
/// largest diagonal entry) and matrices that are singular at working
/// precision; tiny negative pivots within tolerance are clamped.
Eigen::MatrixXd psd_solve(const Eigen::MatrixXd& m, const Eigen::MatrixXd& rhs);

/// log det M for symmetric positive definite M, same acceptance rules.
double psd_log_det(const Eigen::MatrixXd& m);

}  // namespace detail

}  // namespace bcap
