#pragma once

#include <string>

namespace bcap {

/// Entropy of a thermal state with mean photon number x, in bits:
/// g(x) = (x+1) log2(x+1) - x log2 x, g(0) = 0.
double g_entropy(double x);

/// Ultimate capacity of the pure-loss channel: g(eta * nbar_in).
double holevo_pure_loss(double eta, double nbar_in);

/// Ultimate capacity with loss and thermal noise:
/// g(eta nbar_in + (1-eta) env_thermal) - g((1-eta) env_thermal).
double holevo_thermal(double eta, double nbar_in, double env_thermal);

/// Same quantity parameterized by what arrives at the receiver: mean signal
/// photons nbar and mean noise photons nth per mode.
double holevo_received(double nbar, double nth);

/// Signal power split across the two quadratures of one mode:
/// (n1 + n2)/2 = nbar.
struct PowerSplit {
    double n1;
    double n2;

    static PowerSplit of(double n1, double nbar);
    double nbar() const { return 0.5 * (n1 + n2); }
};

/// Single-mode mutual information of a squeezed general-dyne receiver with
/// per-quadrature powers (n1, n2), measurement squeezing r, noise nth:
/// (1/2) log2 [ (2 n1 + 1 + 2 nth + e^-2r)(2 n2 + 1 + 2 nth + e^2r)
///            / ((1 + 2 nth + e^-2r)(1 + 2 nth + e^2r)) ].
double single_mode_mi(const PowerSplit& split, double r, double nth);

enum class Regime { homodyne, time_share, heterodyne };
const char* regime_name(Regime r);

struct FixedMeasurementCapacity {
    double bits;
    Regime regime;  // homodyne or heterodyne
};

/// Best fixed per-mode measurement: max of the homodyne branch
/// (1/2) log2(1 + 4 nbar/(1+2 nth)) and the heterodyne branch
/// log2(1 + nbar/(1+nth)); homodyne wins below the crossover
/// nbar = 2(1+nth)/(1+2 nth).
FixedMeasurementCapacity fixed_measurement_capacity(double nbar, double nth);

/// Crossover photon number between the two branches above.
double fixed_measurement_crossover(double nth);

/// Root of nu (1 + 2 ln 2 - ln nu) = 3 on [4, 20]; the stationary value of
/// the homodyne/heterodyne time-sharing rate. Computed once and cached.
double solve_nu_star();

struct TimeShareSolution {
    double x;             // heterodyne fraction in [0, 1]
    double nu;            // (4 nbar + 1 + 3x)/(1 + x)
    double per_mode_hom;  // (nu - 1)/4
    double per_mode_het;  // nu/2 - 1
    double rate_bits;     // per channel use
};

/// Optimal homodyne/heterodyne time sharing for the pure-loss channel
/// (nth = 0); x clamps to {0, 1} outside the sharing window.
TimeShareSolution time_share_solution(double nbar);

struct GaussianCapacityResult {
    double nbar;
    double nth;
    double capacity_bits;
    Regime regime;
};

/// Capacity of the lossy(-noisy) channel under coherent-state modulation and
/// the best Gaussian receiver: the exact piecewise expression at nth = 0 and
/// the numerically optimized hom/het time share for nth > 0.
GaussianCapacityResult gaussian_capacity(double nbar, double nth);

/// The numeric time-sharing optimizer used for nth > 0 (golden section over
/// the heterodyne fraction with the closed-form inner power allocation).
/// Exposed so it can be checked against the closed form at nth = 0.
GaussianCapacityResult gaussian_capacity_time_shared(double nbar, double nth);

/// Branch rates, shared by sweeps and tests.
double homodyne_rate(double nbar, double nth);
double heterodyne_rate(double nbar, double nth);

}  // namespace bcap
