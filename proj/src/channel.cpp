#include "bcap/channel.hpp"

#include <stdexcept>

namespace bcap {

ChannelParams::ChannelParams(double eta_, double input_thermal_)
    : eta(eta_), input_thermal(input_thermal_) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
    if (input_thermal < 0.0) throw std::invalid_argument("thermal photon number must be >= 0");
}

GaussianState apply_channel(std::complex<double> beta, const ChannelParams& ch) {
    const std::complex<double> alpha = std::sqrt(ch.eta) * beta;
    const double nth = ch.noise_photons();
    Eigen::VectorXcd a(1);
    a(0) = alpha;
    return GaussianState((1.0 + 2.0 * nth) * Eigen::MatrixXd::Identity(2, 2),
                         coherent_displacement(a));
}

ReceivedEnsemble::ReceivedEnsemble(int n_modes_, double noise_photons_, double power_bound_,
                                   std::vector<double> priors_,
                                   std::vector<Eigen::VectorXcd> symbols_)
    : n_modes(n_modes_),
      noise_photons(noise_photons_),
      power_bound(power_bound_),
      priors(std::move(priors_)),
      symbols(std::move(symbols_)) {
    if (n_modes <= 0) throw std::invalid_argument("ensemble needs at least one mode");
    if (noise_photons < 0.0) throw std::invalid_argument("noise photons must be >= 0");
    if (priors.size() != symbols.size() || priors.empty())
        throw std::invalid_argument("priors and symbols must align");
    double total = 0.0;
    for (double p : priors) {
        if (p < 0.0) throw std::invalid_argument("negative prior");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("priors must sum to 1");
    for (const auto& s : symbols)
        if (s.size() != n_modes) throw std::invalid_argument("symbol mode count mismatch");
    if (mean_photons_per_mode() > power_bound + 1e-12)
        throw std::invalid_argument("ensemble exceeds its power bound");
}

Eigen::MatrixXd ReceivedEnsemble::thermal_cov() const {
    return (1.0 + 2.0 * noise_photons) * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
}

Eigen::VectorXd ReceivedEnsemble::displacement(std::size_t symbol_index) const {
    return coherent_displacement(symbols.at(symbol_index));
}

GaussianState ReceivedEnsemble::state(std::size_t symbol_index) const {
    return GaussianState(thermal_cov(), displacement(symbol_index));
}

double ReceivedEnsemble::mean_photons_per_mode() const {
    double total = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) total += priors[i] * symbols[i].squaredNorm();
    return total / n_modes;
}

}  // namespace bcap
