#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "bcap/gaussian_state.hpp"

namespace bcap {

/// Lossy-noisy bosonic channel: beamsplitter of transmissivity eta with a
/// thermal state of mean photon number input_thermal on the idle port.
/// Coherent input beta comes out as a displaced thermal state with amplitude
/// sqrt(eta) beta and added noise noise_photons() = (1-eta) * input_thermal.
struct ChannelParams {
    double eta;
    double input_thermal;

    ChannelParams(double eta_, double input_thermal_);

    double noise_photons() const { return (1.0 - eta) * input_thermal; }
};

GaussianState apply_channel(std::complex<double> beta, const ChannelParams& ch);

/// Ensemble of displaced thermal states sharing the covariance
/// (1 + 2 noise_photons) I, with discrete symbols alpha and prior weights.
struct ReceivedEnsemble {
    int n_modes;
    double noise_photons;
    double power_bound;  // mean photons per mode allowed by the prior
    std::vector<double> priors;
    std::vector<Eigen::VectorXcd> symbols;

    ReceivedEnsemble(int n_modes_, double noise_photons_, double power_bound_,
                     std::vector<double> priors_, std::vector<Eigen::VectorXcd> symbols_);

    Eigen::MatrixXd thermal_cov() const;
    Eigen::VectorXd displacement(std::size_t symbol_index) const;
    GaussianState state(std::size_t symbol_index) const;
    /// Mean of |alpha|^2 per mode under the prior.
    double mean_photons_per_mode() const;
};

}  // namespace bcap
