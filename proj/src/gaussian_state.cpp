#include "bcap/gaussian_state.hpp"

#include <json.hpp>
#include <stdexcept>

namespace bcap {

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    omega.topRightCorner(n_modes, n_modes) = Eigen::MatrixXd::Identity(n_modes, n_modes);
    omega.bottomLeftCorner(n_modes, n_modes) = -Eigen::MatrixXd::Identity(n_modes, n_modes);
    return omega;
}

Eigen::VectorXd coherent_displacement(const Eigen::VectorXcd& alpha) {
    const int n = static_cast<int>(alpha.size());
    Eigen::VectorXd d(2 * n);
    for (int i = 0; i < n; ++i) {
        d(i) = -std::sqrt(2.0) * alpha(i).imag();
        d(n + i) = std::sqrt(2.0) * alpha(i).real();
    }
    return d;
}

GaussianState::GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd disp)
    : cov_(std::move(cov)), disp_(std::move(disp)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0 || cov_.rows() == 0)
        throw std::invalid_argument("covariance matrix must be 2n x 2n");
    if (disp_.size() != cov_.rows())
        throw std::invalid_argument("displacement length must match covariance");
    n_modes_ = static_cast<int>(cov_.rows()) / 2;

    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale)
        throw std::invalid_argument("covariance matrix is not symmetric");
    cov_ = 0.5 * (cov_ + cov_.transpose().eval());

    if (physicality_margin() < -kPsdTolerance)
        throw std::invalid_argument("covariance violates cov + i Omega >= 0");
}

GaussianState GaussianState::vacuum(int n_modes) {
    return GaussianState(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
                         Eigen::VectorXd::Zero(2 * n_modes));
}

GaussianState GaussianState::coherent(const Eigen::VectorXcd& alpha) {
    const int n = static_cast<int>(alpha.size());
    return GaussianState(Eigen::MatrixXd::Identity(2 * n, 2 * n), coherent_displacement(alpha));
}

GaussianState GaussianState::thermal(int n_modes, double mean_photons) {
    if (mean_photons < 0.0) throw std::invalid_argument("thermal photon number must be >= 0");
    return GaussianState(
        (1.0 + 2.0 * mean_photons) * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
        Eigen::VectorXd::Zero(2 * n_modes));
}

double GaussianState::physicality_margin() const {
    Eigen::MatrixXcd m = cov_.cast<std::complex<double>>();
    m += std::complex<double>(0.0, 1.0) * symplectic_form(n_modes_).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::VectorXd GaussianState::symplectic_eigenvalues() const {
    // Eigenvalues of Omega * cov come in pairs +/- i nu_k.
    Eigen::EigenSolver<Eigen::MatrixXd> es(symplectic_form(n_modes_) * cov_, false);
    std::vector<double> nus;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double im = es.eigenvalues()(i).imag();
        if (im > 0.0) nus.push_back(im);
    }
    std::sort(nus.begin(), nus.end());
    Eigen::VectorXd out(static_cast<int>(nus.size()));
    for (std::size_t i = 0; i < nus.size(); ++i) out(static_cast<int>(i)) = nus[i];
    return out;
}

GaussianState GaussianState::displaced(const Eigen::VectorXd& shift) const {
    if (shift.size() != disp_.size()) throw std::invalid_argument("displacement size mismatch");
    return GaussianState(cov_, disp_ + shift);
}

std::complex<double> GaussianState::characteristic_function(const Eigen::VectorXd& x) const {
    if (x.size() != disp_.size()) throw std::invalid_argument("argument size mismatch");
    const double quad = -0.25 * x.dot(cov_ * x);
    const double phase = disp_.dot(x);
    return std::exp(std::complex<double>(quad, phase));
}

std::string GaussianState::to_json() const {
    nlohmann::json j;
    j["n_modes"] = n_modes_;
    std::vector<double> cov_flat;
    cov_flat.reserve(static_cast<std::size_t>(cov_.size()));
    for (int r = 0; r < cov_.rows(); ++r)
        for (int c = 0; c < cov_.cols(); ++c) cov_flat.push_back(cov_(r, c));
    j["cov"] = cov_flat;
    j["disp"] = std::vector<double>(disp_.data(), disp_.data() + disp_.size());
    return j.dump();
}

GaussianState GaussianState::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const int n = j.at("n_modes").get<int>();
    const auto cov_flat = j.at("cov").get<std::vector<double>>();
    const auto disp_flat = j.at("disp").get<std::vector<double>>();
    if (cov_flat.size() != static_cast<std::size_t>(4 * n * n) ||
        disp_flat.size() != static_cast<std::size_t>(2 * n))
        throw std::invalid_argument("serialized state has inconsistent sizes");
    Eigen::MatrixXd cov(2 * n, 2 * n);
    for (int r = 0; r < 2 * n; ++r)
        for (int c = 0; c < 2 * n; ++c) cov(r, c) = cov_flat[static_cast<std::size_t>(r) * 2 * n + c];
    Eigen::VectorXd disp = Eigen::Map<const Eigen::VectorXd>(disp_flat.data(), 2 * n);
    return GaussianState(std::move(cov), std::move(disp));
}

namespace detail {

namespace {

Eigen::LDLT<Eigen::MatrixXd> checked_ldlt(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("symmetric factorization failed");
    const Eigen::VectorXd d = ldlt.vectorD();
    const double scale = std::max(d.cwiseAbs().maxCoeff(), 1e-300);
    if (d.minCoeff() < -kPsdTolerance * scale)
        throw std::runtime_error("matrix is not positive semidefinite within tolerance");
    // Pivots in [-tol, 0] are clamped to the boundary, which leaves nothing
    // to invert through. Any strictly positive pivot is usable: with
    // pivoting, the factorization stays accurate even when the spectrum
    // spans the capped-homodyne e^{+-2 r_cap} range.
    if (d.minCoeff() <= 0.0)
        throw std::runtime_error("matrix is singular within tolerance");
    return ldlt;
}

}  // namespace

Eigen::MatrixXd psd_solve(const Eigen::MatrixXd& m, const Eigen::MatrixXd& rhs) {
    if (m.rows() != rhs.rows()) throw std::invalid_argument("psd_solve dimension mismatch");
    return checked_ldlt(m).solve(rhs);
}

double psd_log_det(const Eigen::MatrixXd& m) {
    const auto ldlt = checked_ldlt(m);
    return ldlt.vectorD().array().log().sum();
}

}  // namespace detail

}  // namespace bcap
