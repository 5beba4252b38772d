#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace bcap {

double binary_entropy(double p);

/// Discrete memoryless channel: rows of `transitions` are the conditional
/// output distributions, `prior` the input distribution.
struct DiscreteChannel {
    Eigen::MatrixXd transitions;
    Eigen::VectorXd prior;

    DiscreteChannel(Eigen::MatrixXd transitions_, Eigen::VectorXd prior_);
    static DiscreteChannel uniform_prior(Eigen::MatrixXd transitions);
};

/// I(X;Y) in bits for a fixed prior.
double discrete_mutual_information(const Eigen::MatrixXd& transitions,
                                   const Eigen::VectorXd& prior);

/// Channel capacity in bits via Blahut-Arimoto alternating maximization,
/// converged to 1e-9 (upper/lower capacity bounds within 1e-12 of each
/// other or iteration cap).
double discrete_capacity(const Eigen::MatrixXd& transitions);

/// Minimum-error probability for discriminating |alpha> vs |-alpha| with
/// equal priors, |alpha|^2 = nbar: (1 - sqrt(1 - e^{-4 nbar}))/2.
double helstrom_bpsk_error(double nbar);

/// Shannon capacity of BPSK with the optimal (Helstrom-achieving) binary
/// receiver: 1 - h2(p_Helstrom) bits per mode.
double bpsk_dolinar_capacity(double nbar);

struct OokOptimum {
    double bits;
    double duty_cycle;     // prior on the "on" symbol
    double pulse_energy;   // nbar / duty_cycle
};

/// On-off keying with an ideal single-photon detector (Z-channel with click
/// probability 1 - e^{-E}); duty cycle optimized by golden section on log q
/// over q in [1e-3 nbar, 1].
OokOptimum ook_spd_optimum(double nbar);
double ook_spd_capacity(double nbar);

/// Per-slot rate of M-ary PPM with an ideal SPD, pulse energy M*nbar:
/// (1 - e^{-M nbar}) log2(M) / M.
double ppm_slot_rate(int frame_size, double nbar);

struct PpmOptimum {
    int frame_size;
    double bits;
};

/// Best integer frame size >= 2 (doubling bracket expansion, then scan).
PpmOptimum ppm_spd_optimum(double nbar);
double ppm_spd_capacity(double nbar);

/// Holevo quantity of the equiprobable M-ary PSK constellation with
/// |alpha|^2 = nbar on the pure-loss channel: entropy of the eigenvalues of
/// the circulant Gram matrix (1/M) G, computed by DFT of its first row.
double mpsk_holevo(int m, double nbar);

/// Envelope over M in {2, 4, ..., 2^max_log2_m}.
double mpsk_holevo_envelope(double nbar, int max_log2_m = 16);

/// g(nbar): the ultimate limit with unconstrained modulation and receiver.
double ultimate_holevo(double nbar);

struct AsymptoticRow {
    double nbar;
    double holevo_nats;          // g(nbar) in nats
    double holevo_expansion;     // -nbar ln nbar + nbar
    double ook_nats;             // ook_spd_capacity in nats
    double ook_expansion;        // -nbar ln nbar - nbar ln ln(1/nbar)
    double ratio;                // ook_nats / holevo_nats
};

struct AsymptoticReport {
    std::vector<AsymptoticRow> rows;  // sorted by nbar descending
    /// True when the ratio increases as nbar decreases across every pair of
    /// consecutive decade-spaced grid points.
    bool ratio_monotone;
};

/// Low-flux scaling comparison on a grid of nbar values in (0, 0.1].
AsymptoticReport asymptotic_scaling_report(std::span<const double> nbar_grid);

struct PieSePoint {
    double nbar;
    double se_bits;               // bits per mode
    double pie_bits_per_photon;   // se_bits / nbar
};

struct PieSeSeries {
    std::string label;
    std::vector<PieSePoint> points;
};

/// Photon-efficiency / spectral-efficiency trade-off data for the standard
/// receiver lineup: ultimate Holevo, Gaussian receiver, BPSK + Dolinar,
/// BPSK Holevo, OOK + SPD, PPM + SPD, and the M-PSK Holevo envelope.
std::vector<PieSeSeries> pie_se_curves(std::span<const double> nbar_grid);

}  // namespace bcap
