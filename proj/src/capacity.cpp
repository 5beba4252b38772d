#include "bcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcap {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // 1/ln 2

double log2_1p(double x) { return std::log1p(x) * kLog2E; }

}  // namespace

double g_entropy(double x) {
    if (x < 0.0) throw std::invalid_argument("g is defined for x >= 0");
    if (x == 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double holevo_pure_loss(double eta, double nbar_in) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
    if (nbar_in < 0.0) throw std::invalid_argument("nbar must be >= 0");
    return g_entropy(eta * nbar_in);
}

double holevo_thermal(double eta, double nbar_in, double env_thermal) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
    if (nbar_in < 0.0 || env_thermal < 0.0) throw std::invalid_argument("photon numbers must be >= 0");
    const double nth_received = (1.0 - eta) * env_thermal;
    return g_entropy(eta * nbar_in + nth_received) - g_entropy(nth_received);
}

double holevo_received(double nbar, double nth) {
    if (nbar < 0.0 || nth < 0.0) throw std::invalid_argument("photon numbers must be >= 0");
    return g_entropy(nbar + nth) - g_entropy(nth);
}

PowerSplit PowerSplit::of(double n1, double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    if (n1 < 0.0 || n1 > 2.0 * nbar) throw std::invalid_argument("n1 must lie in [0, 2 nbar]");
    return PowerSplit{n1, 2.0 * nbar - n1};
}

double single_mode_mi(const PowerSplit& split, double r, double nth) {
    if (nth < 0.0) throw std::invalid_argument("nth must be >= 0");
    const double em = std::exp(-2.0 * r), ep = std::exp(2.0 * r);
    const double num = (2.0 * split.n1 + 1.0 + 2.0 * nth + em) *
                       (2.0 * split.n2 + 1.0 + 2.0 * nth + ep);
    const double den = (1.0 + 2.0 * nth + em) * (1.0 + 2.0 * nth + ep);
    return 0.5 * std::log2(num / den);
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::homodyne: return "homodyne";
        case Regime::time_share: return "time-share";
        case Regime::heterodyne: return "heterodyne";
    }
    return "homodyne";
}

double homodyne_rate(double nbar, double nth) {
    return 0.5 * log2_1p(4.0 * nbar / (1.0 + 2.0 * nth));
}

double heterodyne_rate(double nbar, double nth) { return log2_1p(nbar / (1.0 + nth)); }

FixedMeasurementCapacity fixed_measurement_capacity(double nbar, double nth) {
    if (nbar < 0.0 || nth < 0.0) throw std::invalid_argument("photon numbers must be >= 0");
    const double hom = homodyne_rate(nbar, nth);
    const double het = heterodyne_rate(nbar, nth);
    if (hom >= het) return {hom, Regime::homodyne};
    return {het, Regime::heterodyne};
}

double fixed_measurement_crossover(double nth) {
    if (nth < 0.0) throw std::invalid_argument("nth must be >= 0");
    return 2.0 * (1.0 + nth) / (1.0 + 2.0 * nth);
}

double solve_nu_star() {
    static const double nu_star = [] {
        // f(nu) = nu (1 + 2 ln 2 - ln nu) - 3; sign change on [4, 20].
        const double c = 1.0 + 2.0 * std::log(2.0);
        auto f = [c](double nu) { return nu * (c - std::log(nu)) - 3.0; };
        double lo = 4.0, hi = 20.0;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0.0 ? lo : hi) = mid;
        }
        double nu = 0.5 * (lo + hi);
        for (int i = 0; i < 8; ++i) {  // Newton polish
            const double deriv = c - std::log(nu) - 1.0;
            nu -= f(nu) / deriv;
        }
        return nu;
    }();
    return nu_star;
}

namespace {

double time_share_rate(double nbar, double x) {
    // (1+x)/2 log2((4 nbar + 1 + 3x)/(1+x)) - x, the pure-loss sharing rate.
    return 0.5 * (1.0 + x) * std::log2((4.0 * nbar + 1.0 + 3.0 * x) / (1.0 + x)) - x;
}

}  // namespace

TimeShareSolution time_share_solution(double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    const double nu_star = solve_nu_star();
    double x = (4.0 * nbar + 1.0 - nu_star) / (nu_star - 3.0);
    x = std::clamp(x, 0.0, 1.0);
    const double nu = (4.0 * nbar + 1.0 + 3.0 * x) / (1.0 + x);
    TimeShareSolution sol;
    sol.x = x;
    sol.nu = nu;
    // Clamped endpoints allocate nothing to the unused receiver.
    sol.per_mode_hom = x >= 1.0 ? 0.0 : 0.25 * (nu - 1.0);
    sol.per_mode_het = x <= 0.0 ? 0.0 : 0.5 * nu - 1.0;
    sol.rate_bits = time_share_rate(nbar, x);
    return sol;
}

namespace {

// Rate of sharing a fraction x of the uses with heterodyne at noise nth,
// with the jointly optimal power split (common marginal-rate multiplier).
double thermal_share_rate(double nbar, double nth, double x) {
    const double a = 1.0 + 2.0 * nth;  // homodyne noise floor
    const double b = 1.0 + nth;        // heterodyne noise floor
    if (x <= 0.0) return homodyne_rate(nbar, nth);
    if (x >= 1.0) return heterodyne_rate(nbar, nth);
    const double mu = 2.0 * (nbar + 0.25 * (1.0 - x) * a + x * b) / (1.0 + x);
    double n_hom = 0.25 * (2.0 * mu - a);
    double n_het = mu - b;
    if (n_het < 0.0) {
        n_het = 0.0;
        n_hom = nbar / (1.0 - x);
    }
    return (1.0 - x) * homodyne_rate(n_hom, nth) + x * heterodyne_rate(n_het, nth);
}

}  // namespace

GaussianCapacityResult gaussian_capacity_time_shared(double nbar, double nth) {
    if (nbar < 0.0 || nth < 0.0) throw std::invalid_argument("photon numbers must be >= 0");
    auto rate = [&](double x) { return thermal_share_rate(nbar, nth, x); };

    // Coarse scan to bracket the best fraction, then golden-section polish.
    constexpr int kScan = 64;
    int best = 0;
    double best_rate = rate(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double r = rate(static_cast<double>(i) / kScan);
        if (r > best_rate) {
            best_rate = r;
            best = i;
        }
    }
    double lo = std::max(0.0, (best - 1.0) / kScan);
    double hi = std::min(1.0, (best + 1.0) / kScan);
    const double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = rate(x1), f2 = rate(x2);
    for (int i = 0; i < 90; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rate(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rate(x1);
        }
    }
    double x_opt = 0.5 * (lo + hi);
    double r_opt = rate(x_opt);

    // Ties break toward smaller x, and the endpoints always get a say. The
    // interior and endpoint paths evaluate the same rate through different
    // arithmetic, so "tie" means equal to within round-off.
    constexpr double kTieTolerance = 1e-12;
    const double r_hom = rate(0.0), r_het = rate(1.0);
    Regime regime = Regime::time_share;
    if (r_hom + kTieTolerance >= r_opt && r_hom >= r_het) {
        x_opt = 0.0;
        r_opt = r_hom;
        regime = Regime::homodyne;
    } else if (r_het + kTieTolerance >= r_opt) {
        x_opt = 1.0;
        r_opt = r_het;
        regime = Regime::heterodyne;
    }
    return {nbar, nth, r_opt, regime};
}

GaussianCapacityResult gaussian_capacity(double nbar, double nth) {
    if (nbar < 0.0 || nth < 0.0) throw std::invalid_argument("photon numbers must be >= 0");
    if (nth > 0.0) return gaussian_capacity_time_shared(nbar, nth);
    const double nu_star = solve_nu_star();
    const double b_hom = 0.25 * (nu_star - 1.0);
    const double b_het = 0.5 * (nu_star - 2.0);
    if (nbar <= b_hom) return {nbar, nth, homodyne_rate(nbar, 0.0), Regime::homodyne};
    if (nbar <= b_het) {
        const double rate =
            (std::log2(nu_star) - 2.0) / (nu_star - 3.0) * (2.0 * nbar - 1.0) + 1.0;
        return {nbar, nth, rate, Regime::time_share};
    }
    return {nbar, nth, heterodyne_rate(nbar, 0.0), Regime::heterodyne};
}

}  // namespace bcap
