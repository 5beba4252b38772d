#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bcap/measurement.hpp"

namespace bcap {

/// Result of conditioning a joint Gaussian state on a general-dyne outcome
/// obtained on its trailing modes. With the joint covariance partitioned as
/// [[A, C], [C^T, B]] (A = kept block) and M = B + Gamma_M:
///   cov_out   = A - C M^-1 C^T            (outcome independent)
///   gain      = C M^-1
///   disp_base = d_A - gain * d_B
/// and the conditional displacement is disp_base + gain * d_M.
struct ConditionResult {
    Eigen::MatrixXd cov_out;
    Eigen::MatrixXd gain;
    Eigen::VectorXd disp_base;     // \tilde d_out
    Eigen::VectorXd disp_outcome;  // gain * d_M

    GaussianState state() const { return GaussianState(cov_out, disp_base + disp_outcome); }
};

/// Conditions `joint` (modes 0..n_keep-1 kept) on the outcome recorded in
/// meas_b, which measures the remaining modes. Throws on bad partitions,
/// missing outcomes, or singular B + Gamma_M.
ConditionResult condition_on_partial_measurement(const GaussianState& joint, int n_keep,
                                                 const GeneralDyneMeasurement& meas_b);

/// The deterministic (trace preserving) map left after cancelling the
/// measurement back-action with the displacement -gain * d_M. cov_out and
/// gain depend only on covariances, so they are shared by every symbol of an
/// ensemble sent through the same circuit.
struct FeedforwardElimination {
    int n_keep;
    Eigen::MatrixXd cov_out;
    Eigen::MatrixXd gain;

    /// Corrected output displacement for one symbol's joint displacement.
    Eigen::VectorXd corrected_disp(const Eigen::VectorXd& joint_disp) const;
    GaussianState corrected_state(const Eigen::VectorXd& joint_disp) const;
};

FeedforwardElimination eliminate_feedforward(const Eigen::MatrixXd& joint_cov, int n_keep,
                                             const GeneralDyneMeasurement& meas_b);

}  // namespace bcap
