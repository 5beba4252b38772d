#include "bcap/measurement.hpp"

#include <stdexcept>

namespace bcap {

GeneralDyneMeasurement GeneralDyneMeasurement::heterodyne(int n_modes) {
    return {Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes), std::nullopt, Kind::heterodyne};
}

GeneralDyneMeasurement GeneralDyneMeasurement::squeezed(double r) {
    Eigen::MatrixXd cov(2, 2);
    cov << std::exp(-2.0 * r), 0.0, 0.0, std::exp(2.0 * r);
    return {std::move(cov), std::nullopt, Kind::squeezed};
}

GeneralDyneMeasurement GeneralDyneMeasurement::homodyne_x() {
    auto m = squeezed(kHomodyneSqueeze);
    m.kind = Kind::homodyne_x;
    return m;
}

GeneralDyneMeasurement GeneralDyneMeasurement::homodyne_p() {
    auto m = squeezed(-kHomodyneSqueeze);
    m.kind = Kind::homodyne_p;
    return m;
}

GeneralDyneMeasurement GeneralDyneMeasurement::general(Eigen::MatrixXd cov) {
    GeneralDyneMeasurement m{std::move(cov), std::nullopt, Kind::general};
    m.validate();
    return m;
}

GeneralDyneMeasurement GeneralDyneMeasurement::with_outcome(Eigen::VectorXd d_m) const {
    if (d_m.size() != cov_m.rows()) throw std::invalid_argument("outcome length mismatch");
    GeneralDyneMeasurement m = *this;
    m.outcome = std::move(d_m);
    return m;
}

void GeneralDyneMeasurement::validate() const {
    // A general-dyne POVM covariance obeys the same physicality condition as
    // a state covariance.
    GaussianState probe(cov_m, Eigen::VectorXd::Zero(cov_m.rows()));
    (void)probe;
}

const char* GeneralDyneMeasurement::kind_name(Kind k) {
    switch (k) {
        case Kind::heterodyne: return "heterodyne";
        case Kind::homodyne_x: return "homodyne-x";
        case Kind::homodyne_p: return "homodyne-p";
        case Kind::squeezed: return "squeezed";
        case Kind::general: return "general";
    }
    return "general";
}

GeneralDyneMeasurement compose_measurement(const GeneralDyneMeasurement& meas,
                                           const SymplecticMap& s) {
    if (meas.cov_m.rows() != s.matrix().rows())
        throw std::invalid_argument("measurement/map dimension mismatch");
    GeneralDyneMeasurement out = meas;
    out.cov_m = s.matrix().transpose() * meas.cov_m * s.matrix();
    out.cov_m = 0.5 * (out.cov_m + out.cov_m.transpose().eval());
    if (meas.outcome) out.outcome = s.matrix().transpose() * (*meas.outcome);
    if (meas.kind != GeneralDyneMeasurement::Kind::heterodyne || !s.is_orthogonal())
        out.kind = GeneralDyneMeasurement::Kind::general;
    return out;
}

double overlap_log_density(const GaussianState& state, const GeneralDyneMeasurement& meas) {
    if (!meas.outcome) throw std::invalid_argument("measurement carries no outcome");
    if (meas.cov_m.rows() != state.cov().rows())
        throw std::invalid_argument("state/measurement dimension mismatch");
    const Eigen::MatrixXd sigma = 0.5 * (state.cov() + meas.cov_m);
    const Eigen::VectorXd delta = *meas.outcome - state.disp();
    const int dim = static_cast<int>(sigma.rows());
    const Eigen::VectorXd solved = detail::psd_solve(sigma, delta);
    const double quad = delta.dot(solved);
    const double log_det = detail::psd_log_det(sigma);
    return -0.5 * (quad + log_det + dim * std::log(2.0 * M_PI));
}

double overlap_probability_density(const GaussianState& state,
                                   const GeneralDyneMeasurement& meas) {
    return std::exp(overlap_log_density(state, meas));
}

}  // namespace bcap
