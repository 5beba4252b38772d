#include "bcap/mi.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

#include "bcap/parallel.hpp"

namespace bcap {

MiInstance::MiInstance(int n_, Eigen::VectorXd powers_, double nth_, Eigen::VectorXd squeezes_,
                       SymplecticMap s_u_)
    : n(n_),
      powers(std::move(powers_)),
      nth(nth_),
      squeezes(std::move(squeezes_)),
      s_u(std::move(s_u_)) {
    if (n <= 0) throw std::invalid_argument("need at least one mode");
    if (powers.size() != 2 * n || squeezes.size() != n)
        throw std::invalid_argument("instance dimensions are inconsistent");
    if (powers.minCoeff() < 0.0) throw std::invalid_argument("negative signal power");
    if (nth < 0.0) throw std::invalid_argument("negative thermal noise");
    if (s_u.n_modes() != n) throw std::invalid_argument("circuit mode count mismatch");
    if (!s_u.is_orthogonal()) throw std::invalid_argument("circuit must be orthogonal symplectic");
}

MiInstance MiInstance::identity_circuit(int n, Eigen::VectorXd powers, double nth,
                                        Eigen::VectorXd squeezes) {
    return MiInstance(n, std::move(powers), nth, std::move(squeezes),
                      SymplecticMap::identity(n));
}

Eigen::MatrixXd MiInstance::gamma_meas() const {
    Eigen::VectorXd diag(2 * n);
    for (int i = 0; i < n; ++i) {
        diag(i) = std::exp(-2.0 * squeezes(i));
        diag(n + i) = std::exp(2.0 * squeezes(i));
    }
    return diag.asDiagonal();
}

Eigen::MatrixXd MiInstance::gamma_th() const {
    return (1.0 + 2.0 * nth) * Eigen::MatrixXd::Identity(2 * n, 2 * n);
}

MiInstance MiInstance::with_circuit(SymplecticMap s) const {
    return MiInstance(n, powers, nth, squeezes, std::move(s));
}

double mutual_info(const MiInstance& inst) {
    const Eigen::MatrixXd rotated =
        inst.s_u.matrix().transpose() * inst.gamma_meas() * inst.s_u.matrix();
    const Eigen::MatrixXd noise = inst.gamma_th() + 0.5 * (rotated + rotated.transpose());
    Eigen::MatrixXd signal_plus_noise = noise;
    signal_plus_noise += (2.0 * inst.powers).asDiagonal().toDenseMatrix();
    // The denominator uses det(gamma_th + gamma_M) directly: it equals
    // det(noise) because gamma_th is a multiple of the identity and the
    // circuit is orthogonal.
    const double log_den = detail::psd_log_det(inst.gamma_th() + inst.gamma_meas());
    const double log_num = detail::psd_log_det(signal_plus_noise);
    return 0.5 * (log_num - log_den) / std::log(2.0);
}

MiInstance aligned_random_instance(int n, double nbar, double nth, Rng& rng,
                                   double max_squeeze) {
    // All signal power on the x (squeezed, low-noise) quadratures, with
    // powers and squeezings sorted together so the identity pairing puts the
    // largest power on the quietest quadrature. In that configuration the
    // identity circuit attains the oppositely-sorted determinant bound, so
    // no orthogonal symplectic can beat it.
    std::vector<double> power(n), squeeze(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        power[i] = rng.uniform();
        total += power[i];
        squeeze[i] = rng.uniform(0.0, max_squeeze);
    }
    std::sort(power.begin(), power.end(), std::greater<>());
    std::sort(squeeze.begin(), squeeze.end(), std::greater<>());
    Eigen::VectorXd p = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd r(n);
    const double scale = total > 0.0 ? 2.0 * n * nbar / total : 0.0;  // trace(P)/(2n) == nbar
    for (int i = 0; i < n; ++i) {
        p(i) = power[i] * scale;
        r(i) = squeeze[i];
    }
    return MiInstance::identity_circuit(n, std::move(p), nth, std::move(r));
}

std::string IdentityOptimalReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["nbar"] = nbar;
    j["nth"] = nth;
    j["trials"] = trials;
    j["max_gap"] = max_gap;
    j["seed"] = seed;
    return j.dump();
}

IdentityOptimalReport verify_identity_optimal(int n, double nbar, double nth, int trials,
                                              std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("need at least one mode");
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    std::vector<double> gaps(static_cast<std::size_t>(trials), 0.0);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng(stream_seed(seed, t));
        const MiInstance base = aligned_random_instance(n, nbar, nth, rng);
        const SymplecticMap circuit = random_orthogonal_symplectic(n, rng);
        gaps[t] = mutual_info(base.with_circuit(circuit)) - mutual_info(base);
    });
    double max_gap = 0.0;
    if (trials > 0) max_gap = *std::max_element(gaps.begin(), gaps.end());
    return IdentityOptimalReport{n, nbar, nth, trials, max_gap, seed};
}

LagrangeAllocation lagrange_allocation(int n, int t, double nbar) {
    if (n <= 0 || t < 0 || t > n) throw std::invalid_argument("need 0 <= t <= n");
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    const double x = static_cast<double>(n - t) / n;
    const double nu = (4.0 * nbar + 1.0 + 3.0 * x) / (1.0 + x);
    const double hom = 0.25 * (nu - 1.0);
    const double het = 0.5 * nu - 1.0;
    if (t < n && het < 0.0)
        throw std::invalid_argument(
            "infeasible split: heterodyne modes would need negative photon numbers");
    LagrangeAllocation out;
    out.mode_photons.resize(n);
    for (int i = 0; i < n; ++i) out.mode_photons(i) = i < t ? hom : het;
    out.rate_bits_per_use = 0.5 * (1.0 + x) * std::log2(nu) - x;
    return out;
}

MonteCarloMi monte_carlo_mi(const MiInstance& inst, std::int64_t samples, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("need at least 1e3 samples");
    const int d = 2 * inst.n;

    const Eigen::MatrixXd rotated =
        inst.s_u.matrix().transpose() * inst.gamma_meas() * inst.s_u.matrix();
    const Eigen::MatrixXd noise_cov = 0.5 * (inst.gamma_th() + rotated);
    Eigen::MatrixXd marginal_cov = noise_cov;
    marginal_cov += inst.powers.asDiagonal().toDenseMatrix();

    Eigen::LLT<Eigen::MatrixXd> noise_chol(0.5 * (noise_cov + noise_cov.transpose()));
    Eigen::LLT<Eigen::MatrixXd> marg_chol(0.5 * (marginal_cov + marginal_cov.transpose()));
    if (noise_chol.info() != Eigen::Success || marg_chol.info() != Eigen::Success)
        throw std::runtime_error("covariance factorization failed");

    const Eigen::MatrixXd noise_l = noise_chol.matrixL();
    auto log_det = [](const Eigen::MatrixXd& l) {
        return 2.0 * l.diagonal().array().log().sum();
    };
    const double log_det_noise = log_det(noise_l);
    const double log_det_marg = log_det(Eigen::MatrixXd(marg_chol.matrixL()));
    const Eigen::VectorXd prior_sd = inst.powers.cwiseSqrt();

    // log p(y|x) - log p(y) = ((y - marg_mean)..) with the constant parts
    // precomputed; accumulated per independent chunk stream.
    constexpr std::int64_t kChunk = 1024;
    const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> chunk_sum(static_cast<std::size_t>(n_chunks), 0.0);
    std::vector<double> chunk_sq(static_cast<std::size_t>(n_chunks), 0.0);

    parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t c) {
        Rng rng(stream_seed(seed, c));
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
        const std::int64_t count = std::min(kChunk, samples - begin);
        Eigen::VectorXd symbol(d), z(d), outcome(d);
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            for (int k = 0; k < d; ++k) symbol(k) = prior_sd(k) * rng.normal();
            for (int k = 0; k < d; ++k) z(k) = rng.normal();
            outcome = symbol + noise_l * z;
            const double q_cond =
                noise_chol.matrixL().solve(outcome - symbol).squaredNorm();
            const double q_marg = marg_chol.matrixL().solve(outcome).squaredNorm();
            const double log_ratio =
                0.5 * (q_marg - q_cond + log_det_marg - log_det_noise) / std::log(2.0);
            sum += log_ratio;
            sum_sq += log_ratio * log_ratio;
        }
        chunk_sum[c] = sum;
        chunk_sq[c] = sum_sq;
    });

    const double total = std::accumulate(chunk_sum.begin(), chunk_sum.end(), 0.0);
    const double total_sq = std::accumulate(chunk_sq.begin(), chunk_sq.end(), 0.0);
    const double mean = total / samples;
    const double var = std::max(0.0, total_sq / samples - mean * mean);
    return MonteCarloMi{mean, std::sqrt(var / samples), samples};
}

}  // namespace bcap
