#include "bcap/receivers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "bcap/capacity.hpp"

namespace bcap {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void validate_channel(const Eigen::MatrixXd& transitions) {
    if (transitions.rows() < 1 || transitions.cols() < 1)
        throw std::invalid_argument("empty transition matrix");
    if (transitions.minCoeff() < 0.0) throw std::invalid_argument("negative transition probability");
    for (int r = 0; r < transitions.rows(); ++r)
        if (std::abs(transitions.row(r).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("transition rows must sum to 1");
}

}  // namespace

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability out of range");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

DiscreteChannel::DiscreteChannel(Eigen::MatrixXd transitions_, Eigen::VectorXd prior_)
    : transitions(std::move(transitions_)), prior(std::move(prior_)) {
    validate_channel(transitions);
    if (prior.size() != transitions.rows()) throw std::invalid_argument("prior length mismatch");
    if (prior.minCoeff() < 0.0 || std::abs(prior.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("prior must be a distribution");
}

DiscreteChannel DiscreteChannel::uniform_prior(Eigen::MatrixXd transitions) {
    const int m = static_cast<int>(transitions.rows());
    return DiscreteChannel(std::move(transitions),
                           Eigen::VectorXd::Constant(m, 1.0 / m));
}

double discrete_mutual_information(const Eigen::MatrixXd& transitions,
                                   const Eigen::VectorXd& prior) {
    validate_channel(transitions);
    if (prior.size() != transitions.rows()) throw std::invalid_argument("prior length mismatch");
    const Eigen::VectorXd output = transitions.transpose() * prior;
    double mi = 0.0;
    for (int x = 0; x < transitions.rows(); ++x) {
        if (prior(x) <= 0.0) continue;
        for (int y = 0; y < transitions.cols(); ++y) {
            const double w = transitions(x, y);
            if (w > 0.0) mi += prior(x) * w * std::log2(w / output(y));
        }
    }
    return mi;
}

double discrete_capacity(const Eigen::MatrixXd& transitions) {
    validate_channel(transitions);
    const int n_in = static_cast<int>(transitions.rows());
    const int n_out = static_cast<int>(transitions.cols());
    Eigen::VectorXd prior = Eigen::VectorXd::Constant(n_in, 1.0 / n_in);

    // Blahut-Arimoto; the gap max_x D(x) - sum_x p(x) D(x) brackets C.
    Eigen::VectorXd d(n_in);
    for (int iter = 0; iter < 20000; ++iter) {
        const Eigen::VectorXd output = transitions.transpose() * prior;
        for (int x = 0; x < n_in; ++x) {
            double acc = 0.0;
            for (int y = 0; y < n_out; ++y) {
                const double w = transitions(x, y);
                if (w > 0.0 && output(y) > 0.0) acc += w * std::log(w / output(y));
            }
            d(x) = acc;
        }
        const double lower = prior.dot(d);
        const double upper = d.maxCoeff();
        if (upper - lower < 1e-12) return lower / std::log(2.0);
        Eigen::VectorXd next = prior.array() * (d.array() - upper).exp();
        prior = next / next.sum();
    }
    return prior.dot(d) / std::log(2.0);
}

double helstrom_bpsk_error(double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    // |<alpha|-alpha>|^2 = e^{-4 nbar}; -expm1 keeps the tiny-overlap regime
    // accurate.
    return 0.5 * (1.0 - std::sqrt(-std::expm1(-4.0 * nbar)));
}

double bpsk_dolinar_capacity(double nbar) {
    return 1.0 - binary_entropy(helstrom_bpsk_error(nbar));
}

namespace {

// I(X;Y) of on-off keying through an ideal SPD at duty cycle q and pulse
// energy nbar/q (a Z-channel whose prior is pinned by the power constraint).
double ook_rate(double nbar, double q) {
    const double miss = std::exp(-nbar / q);
    const double p_click = q * (1.0 - miss);
    return binary_entropy(p_click) - q * binary_entropy(miss);
}

}  // namespace

OokOptimum ook_spd_optimum(double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    if (nbar == 0.0) return {0.0, 0.0, 0.0};

    // Golden section on log q over [1e-3 nbar, 1]; a coarse scan first keeps
    // the bracket on the unimodal bump.
    const double t_lo_full = std::log(std::min(1e-3 * nbar, 0.25));
    constexpr int kScan = 160;
    double best_t = t_lo_full, best_rate = -1.0;
    for (int i = 0; i <= kScan; ++i) {
        const double t = t_lo_full + (0.0 - t_lo_full) * i / kScan;
        const double r = ook_rate(nbar, std::exp(t));
        if (r > best_rate) {
            best_rate = r;
            best_t = t;
        }
    }
    const double step = (0.0 - t_lo_full) / kScan;
    double lo = std::max(t_lo_full, best_t - step), hi = std::min(0.0, best_t + step);
    double t1 = hi - kInvPhi * (hi - lo), t2 = lo + kInvPhi * (hi - lo);
    double f1 = ook_rate(nbar, std::exp(t1)), f2 = ook_rate(nbar, std::exp(t2));
    for (int i = 0; i < 80; ++i) {
        if (f1 < f2) {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + kInvPhi * (hi - lo);
            f2 = ook_rate(nbar, std::exp(t2));
        } else {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - kInvPhi * (hi - lo);
            f1 = ook_rate(nbar, std::exp(t1));
        }
    }
    const double q = std::exp(0.5 * (lo + hi));
    return {ook_rate(nbar, q), q, nbar / q};
}

double ook_spd_capacity(double nbar) { return ook_spd_optimum(nbar).bits; }

double ppm_slot_rate(int frame_size, double nbar) {
    if (frame_size < 2) throw std::invalid_argument("frame size must be >= 2");
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    const double detect = -std::expm1(-static_cast<double>(frame_size) * nbar);
    return detect * std::log2(static_cast<double>(frame_size)) / frame_size;
}

PpmOptimum ppm_spd_optimum(double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    if (nbar == 0.0) return {2, 0.0};

    // Double the frame size until the (unimodal) rate has clearly peaked;
    // the peak then sits within a factor of two of the best doubling point.
    long long best_m = 2;
    double best = ppm_slot_rate(2, nbar);
    int declines = 0;
    for (long long m = 4; declines < 2 && m <= (1LL << 30); m *= 2) {
        const double r = ppm_slot_rate(static_cast<int>(m), nbar);
        if (r > best) {
            best = r;
            best_m = m;
            declines = 0;
        } else {
            ++declines;
        }
    }

    // Integer ternary search inside the bracket, then a short final scan.
    long long lo = std::max<long long>(2, best_m / 2);
    long long hi = std::min<long long>(1LL << 30, best_m * 2);
    while (hi - lo > 64) {
        const long long m1 = lo + (hi - lo) / 3;
        const long long m2 = hi - (hi - lo) / 3;
        if (ppm_slot_rate(static_cast<int>(m1), nbar) < ppm_slot_rate(static_cast<int>(m2), nbar))
            lo = m1 + 1;
        else
            hi = m2 - 1;
    }
    for (long long m = lo; m <= hi; ++m) {
        const double r = ppm_slot_rate(static_cast<int>(m), nbar);
        if (r > best) {
            best = r;
            best_m = m;
        }
    }
    return {static_cast<int>(best_m), best};
}

double ppm_spd_capacity(double nbar) { return ppm_spd_optimum(nbar).bits; }

double mpsk_holevo(int m, double nbar) {
    if (m < 2) throw std::invalid_argument("constellation needs at least 2 symbols");
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    if (nbar == 0.0) return 0.0;

    // Overlaps <alpha_0|alpha_k> = exp(nbar (e^{2 pi i k/M} - 1)) form a
    // circulant row; the average-state eigenvalues are its DFT / M.
    std::vector<std::complex<double>> row(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double angle = 2.0 * M_PI * k / m;
        row[static_cast<std::size_t>(k)] =
            std::exp(std::complex<double>(nbar * (std::cos(angle) - 1.0), nbar * std::sin(angle)));
    }
    std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(m));
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, row);

    double sum = 0.0;
    std::vector<double> eig(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        double lambda = spectrum[static_cast<std::size_t>(k)].real() / m;
        if (lambda < -1e-12)
            throw std::runtime_error("Gram spectrum went negative beyond tolerance");
        lambda = std::max(lambda, 0.0);
        eig[static_cast<std::size_t>(k)] = lambda;
        sum += lambda;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::runtime_error("Gram spectrum lost normalization");
    double chi = 0.0;
    for (double lambda : eig) {
        const double p = lambda / sum;
        chi -= xlog2x(p);
    }
    return chi;
}

double mpsk_holevo_envelope(double nbar, int max_log2_m) {
    double best = 0.0;
    for (int k = 1; k <= max_log2_m; ++k) best = std::max(best, mpsk_holevo(1 << k, nbar));
    return best;
}

double ultimate_holevo(double nbar) { return g_entropy(nbar); }

AsymptoticReport asymptotic_scaling_report(std::span<const double> nbar_grid) {
    if (nbar_grid.empty()) throw std::invalid_argument("empty grid");
    std::vector<double> grid(nbar_grid.begin(), nbar_grid.end());
    for (double v : grid)
        if (!(v > 0.0 && v <= 0.1))
            throw std::invalid_argument("grid values must lie in (0, 0.1]");
    std::sort(grid.begin(), grid.end(), std::greater<>());

    const double ln2 = std::log(2.0);
    AsymptoticReport report;
    report.rows.reserve(grid.size());
    for (double v : grid) {
        AsymptoticRow row;
        row.nbar = v;
        row.holevo_nats = g_entropy(v) * ln2;
        row.holevo_expansion = -v * std::log(v) + v;
        row.ook_nats = ook_spd_capacity(v) * ln2;
        row.ook_expansion = -v * std::log(v) - v * std::log(std::log(1.0 / v));
        row.ratio = row.ook_nats / row.holevo_nats;
        report.rows.push_back(row);
    }
    report.ratio_monotone = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const bool decade_step = report.rows[i].nbar <= report.rows[i - 1].nbar / 9.99;
        if (decade_step && report.rows[i].ratio <= report.rows[i - 1].ratio)
            report.ratio_monotone = false;
    }
    return report;
}

std::vector<PieSeSeries> pie_se_curves(std::span<const double> nbar_grid) {
    if (nbar_grid.empty()) throw std::invalid_argument("empty grid");
    for (double v : nbar_grid)
        if (!(v > 0.0)) throw std::invalid_argument("grid values must be positive");

    struct Entry {
        const char* label;
        double (*se)(double);
    };
    static const Entry entries[] = {
        {"holevo-ultimate", [](double n) { return ultimate_holevo(n); }},
        {"gaussian-receiver", [](double n) { return gaussian_capacity(n, 0.0).capacity_bits; }},
        {"bpsk-dolinar", [](double n) { return bpsk_dolinar_capacity(n); }},
        {"bpsk-holevo", [](double n) { return mpsk_holevo(2, n); }},
        {"ook-spd", [](double n) { return ook_spd_capacity(n); }},
        {"ppm-spd", [](double n) { return ppm_spd_capacity(n); }},
        {"mpsk-holevo-envelope", [](double n) { return mpsk_holevo_envelope(n); }},
    };

    std::vector<PieSeSeries> out;
    for (const auto& entry : entries) {
        PieSeSeries series;
        series.label = entry.label;
        series.points.reserve(nbar_grid.size());
        for (double nbar : nbar_grid) {
            const double se = entry.se(nbar);
            series.points.push_back(PieSePoint{nbar, se, se / nbar});
        }
        out.push_back(std::move(series));
    }
    return out;
}

}  // namespace bcap
