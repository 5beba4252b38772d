#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "bcap/symplectic.hpp"

namespace bcap {

/// General-dyne (Gaussian) measurement: POVM covariance Gamma_M plus,
/// optionally, an outcome vector d_M in the same displacement convention as
/// states. Heterodyne is Gamma_M = I; homodyne is represented numerically as
/// a squeezed measurement at r = kHomodyneSqueeze.
struct GeneralDyneMeasurement {
    enum class Kind { heterodyne, homodyne_x, homodyne_p, squeezed, general };

    Eigen::MatrixXd cov_m;
    std::optional<Eigen::VectorXd> outcome;
    Kind kind = Kind::general;

    static GeneralDyneMeasurement heterodyne(int n_modes);
    static GeneralDyneMeasurement homodyne_x();
    static GeneralDyneMeasurement homodyne_p();
    static GeneralDyneMeasurement squeezed(double r);  // diag(e^-2r, e^2r)
    static GeneralDyneMeasurement general(Eigen::MatrixXd cov);

    GeneralDyneMeasurement with_outcome(Eigen::VectorXd d_m) const;

    int n_modes() const { return static_cast<int>(cov_m.rows()) / 2; }

    /// Validates symmetry and cov_m + i Omega >= 0.
    void validate() const;

    static const char* kind_name(Kind k);
};

/// Measurement obtained by inserting the Gaussian unitary S in front of the
/// detectors: covariance S^T Gamma_M S, outcome S^T d_M.
GeneralDyneMeasurement compose_measurement(const GeneralDyneMeasurement& meas,
                                           const SymplecticMap& s);

/// Normalized probability density of obtaining the recorded outcome when
/// measuring the given state: a Gaussian over outcomes with mean disp and
/// covariance (cov + Gamma_M)/2. Integrates to 1 over R^{2n}.
double overlap_probability_density(const GaussianState& state,
                                   const GeneralDyneMeasurement& meas);

/// log of the same density; preferred inside estimators.
double overlap_log_density(const GaussianState& state,
                           const GeneralDyneMeasurement& meas);

}  // namespace bcap
