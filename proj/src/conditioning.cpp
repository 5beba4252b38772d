#include "bcap/conditioning.hpp"

#include <stdexcept>

namespace bcap {

namespace {

// Gathers the xxpp-ordered indices of modes [first, first+count).
std::vector<int> mode_indices(int n_total, int first, int count) {
    std::vector<int> idx;
    idx.reserve(2 * static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) idx.push_back(first + i);
    for (int i = 0; i < count; ++i) idx.push_back(n_total + first + i);
    return idx;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
    return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
    return out;
}

}  // namespace

ConditionResult condition_on_partial_measurement(const GaussianState& joint, int n_keep,
                                                 const GeneralDyneMeasurement& meas_b) {
    const int n = joint.n_modes();
    const int n_meas = n - n_keep;
    if (n_keep <= 0 || n_meas <= 0) throw std::invalid_argument("bad partition");
    if (meas_b.cov_m.rows() != 2 * n_meas)
        throw std::invalid_argument("measurement does not match the measured modes");
    if (!meas_b.outcome) throw std::invalid_argument("conditioning requires an outcome");

    const auto idx_a = mode_indices(n, 0, n_keep);
    const auto idx_b = mode_indices(n, n_keep, n_meas);
    const Eigen::MatrixXd a = gather(joint.cov(), idx_a, idx_a);
    const Eigen::MatrixXd c = gather(joint.cov(), idx_a, idx_b);
    const Eigen::MatrixXd b = gather(joint.cov(), idx_b, idx_b);
    const Eigen::VectorXd d_a = gather(joint.disp(), idx_a);
    const Eigen::VectorXd d_b = gather(joint.disp(), idx_b);

    // gain = C (B + Gamma_M)^-1, via a solve against C^T.
    const Eigen::MatrixXd gain =
        detail::psd_solve(b + meas_b.cov_m, c.transpose()).transpose();

    ConditionResult res;
    res.cov_out = a - gain * c.transpose();
    res.cov_out = 0.5 * (res.cov_out + res.cov_out.transpose().eval());
    res.gain = gain;
    res.disp_base = d_a - gain * d_b;
    res.disp_outcome = gain * (*meas_b.outcome);
    return res;
}

Eigen::VectorXd FeedforwardElimination::corrected_disp(const Eigen::VectorXd& joint_disp) const {
    const int keep = static_cast<int>(cov_out.rows()) / 2;
    const int n_total = keep + static_cast<int>(gain.cols()) / 2;
    if (joint_disp.size() != 2 * n_total)
        throw std::invalid_argument("joint displacement length mismatch");
    const Eigen::VectorXd d_a = gather(joint_disp, mode_indices(n_total, 0, keep));
    const Eigen::VectorXd d_b = gather(joint_disp, mode_indices(n_total, keep, n_total - keep));
    return d_a - gain * d_b;
}

GaussianState FeedforwardElimination::corrected_state(const Eigen::VectorXd& joint_disp) const {
    return GaussianState(cov_out, corrected_disp(joint_disp));
}

FeedforwardElimination eliminate_feedforward(const Eigen::MatrixXd& joint_cov, int n_keep,
                                             const GeneralDyneMeasurement& meas_b) {
    // Route through the conditioning path with a zero outcome; cov and gain
    // are outcome independent, which is the whole point of the correction.
    GaussianState probe(joint_cov, Eigen::VectorXd::Zero(joint_cov.rows()));
    auto meas = meas_b.with_outcome(Eigen::VectorXd::Zero(meas_b.cov_m.rows()));
    auto cond = condition_on_partial_measurement(probe, n_keep, meas);
    return FeedforwardElimination{n_keep, std::move(cond.cov_out), std::move(cond.gain)};
}

}  // namespace bcap
