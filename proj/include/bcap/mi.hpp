#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "bcap/symplectic.hpp"

namespace bcap {

/// One n-mode Gaussian-receiver channel instance: diagonal signal powers per
/// quadrature, isotropic thermal noise, diagonal squeezed measurement
/// diag(e^{-2 r_i}) (+) diag(e^{2 r_i}), and a passive circuit S_U in front
/// of the detectors.
struct MiInstance {
    int n;
    Eigen::VectorXd powers;    // length 2n, diagonal of P
    double nth;                // gamma_th = (1 + 2 nth) I
    Eigen::VectorXd squeezes;  // length n, r_i
    SymplecticMap s_u;         // orthogonal symplectic

    MiInstance(int n_, Eigen::VectorXd powers_, double nth_, Eigen::VectorXd squeezes_,
               SymplecticMap s_u_);
    static MiInstance identity_circuit(int n, Eigen::VectorXd powers, double nth,
                                       Eigen::VectorXd squeezes);

    double mean_photons_per_mode() const { return powers.sum() / (2.0 * n); }
    Eigen::MatrixXd gamma_meas() const;  // diagonal measurement covariance
    Eigen::MatrixXd gamma_th() const;
    MiInstance with_circuit(SymplecticMap s) const;
};

/// Total mutual information over the n uses, in bits:
/// (1/2) log2 det(2P + gamma_th + S^T gamma_M S) / det(gamma_th + gamma_M).
double mutual_info(const MiInstance& inst);

struct IdentityOptimalReport {
    int n;
    double nbar;
    double nth;
    int trials;
    double max_gap;  // max over trials of MI(S_U) - MI(I)
    std::uint64_t seed;

    std::string to_json() const;
};

/// Samples `trials` random aligned instances (all power on the squeezed,
/// low-noise quadratures, powers and squeezings sorted together so that the
/// identity pairing is the oppositely sorted one) and a Haar-like random
/// orthogonal symplectic for each; reports the largest amount by which the
/// circuit beat the bare detectors. The theorem under test says this never
/// exceeds zero beyond round-off.
IdentityOptimalReport verify_identity_optimal(int n, double nbar, double nth, int trials,
                                              std::uint64_t seed);

/// Random instance generator used by verify_identity_optimal; exposed for
/// tests.
MiInstance aligned_random_instance(int n, double nbar, double nth, Rng& rng,
                                   double max_squeeze = 1.5);

struct LagrangeAllocation {
    Eigen::VectorXd mode_photons;  // length n
    double rate_bits_per_use;
};

/// Optimal power allocation over n uses with homodyne detection on the first
/// t uses and heterodyne on the rest (x = (n-t)/n):
/// homodyne modes get (nu-1)/4, heterodyne modes nu/2 - 1 with
/// nu = (4 nbar + 1 + 3x)/(1+x); rate = (1+x)/2 log2(nu) - x.
/// Throws if the split would force a negative photon number (nu < 2 with
/// heterodyne modes present).
LagrangeAllocation lagrange_allocation(int n, int t, double nbar);

struct MonteCarloMi {
    double estimate_bits;
    double std_error;
    std::int64_t samples;
};

/// Plug-in Monte Carlo estimate of mutual_info: symbols from the Gaussian
/// prior, outcomes from the conditional density, averaged log-likelihood
/// ratio with the exact closed-form marginal. Chunked independent RNG
/// streams derived from `seed` keep the estimate reproducible and
/// parallel-safe.
MonteCarloMi monte_carlo_mi(const MiInstance& inst, std::int64_t samples, std::uint64_t seed);

}  // namespace bcap
