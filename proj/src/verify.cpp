#include "bcap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "bcap/capacity.hpp"
#include "bcap/conditioning.hpp"
#include "bcap/mi.hpp"
#include "bcap/receivers.hpp"
#include "bcap/rng.hpp"

namespace bcap {

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string SuiteReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["pass"] = pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"tolerance", c.tolerance},
                               {"observed", c.observed},
                               {"pass", c.pass}});
    return j.dump(2);
}

std::vector<std::string> verify_suite_names() {
    return {"gaussian-core", "identity-optimal", "feedforward", "oracles", "all"};
}

bool is_verify_suite(const std::string& name) {
    const auto names = verify_suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

void add_check(SuiteReport& rep, std::string name, double tolerance, double observed) {
    rep.checks.push_back({std::move(name), tolerance, observed, observed <= tolerance});
}

void run_gaussian_core(SuiteReport& rep, std::uint64_t seed) {
    // Symplectic closure of random products.
    {
        Rng rng(stream_seed(seed, 1));
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 4.0);
            const auto s1 = random_symplectic(n, rng);
            const auto s2 = random_symplectic(n, rng);
            worst = std::max(worst, SymplecticMap::symplectic_defect(s1.then(s2).matrix()));
        }
        add_check(rep, "symplectic-closure", 1e-9, worst);
    }

    // Conditioning keeps states physical.
    {
        Rng rng(stream_seed(seed, 2));
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 2 + static_cast<int>(rng.uniform() * 2.0);
            const int keep = 1 + static_cast<int>(rng.uniform() * (n - 1));
            const auto s = random_symplectic(n, rng);
            Eigen::VectorXd nu(2 * n);
            for (int i = 0; i < n; ++i) {
                nu(i) = 1.0 + 2.0 * rng.uniform();
                nu(n + i) = nu(i);
            }
            const Eigen::MatrixXd cov =
                s.matrix().transpose() * nu.asDiagonal().toDenseMatrix() * s.matrix();
            Eigen::VectorXd disp(2 * n);
            for (int i = 0; i < 2 * n; ++i) disp(i) = rng.normal();
            GaussianState joint(cov, disp);
            const int n_meas = n - keep;
            auto meas = (rng.uniform() < 0.5)
                            ? GeneralDyneMeasurement::heterodyne(n_meas)
                            : compose_measurement(GeneralDyneMeasurement::heterodyne(n_meas),
                                                  random_symplectic(n_meas, rng));
            Eigen::VectorXd outcome(2 * n_meas);
            for (int i = 0; i < 2 * n_meas; ++i) outcome(i) = rng.normal();
            auto out = condition_on_partial_measurement(joint, keep, meas.with_outcome(outcome));
            worst = std::max(worst, -out.state().physicality_margin());
        }
        add_check(rep, "conditioning-physicality", 1e-9, worst);
    }

    // Pure state + pure measurement => pure conditional output.
    {
        Rng rng(stream_seed(seed, 3));
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 2 + static_cast<int>(rng.uniform() * 2.0);
            const int keep = 1 + static_cast<int>(rng.uniform() * (n - 1));
            const auto s = random_symplectic(n, rng);
            const GaussianState joint = s.apply(GaussianState::vacuum(n));
            const int n_meas = n - keep;
            auto meas = compose_measurement(GeneralDyneMeasurement::heterodyne(n_meas),
                                            random_symplectic(n_meas, rng));
            auto out = condition_on_partial_measurement(
                joint, keep, meas.with_outcome(Eigen::VectorXd::Zero(2 * n_meas)));
            const Eigen::VectorXd nus = out.state().symplectic_eigenvalues();
            worst = std::max(worst, (nus.array() - 1.0).abs().maxCoeff());
        }
        add_check(rep, "purity-preservation", 1e-8, worst);
    }

    // Outcome density integrates to 1 (single mode, squeezed measurement).
    {
        Eigen::VectorXcd alpha(1);
        alpha(0) = std::complex<double>(0.7, -0.4);
        GaussianState state =
            GaussianState::thermal(1, 0.5).displaced(coherent_displacement(alpha));
        auto meas = GeneralDyneMeasurement::squeezed(0.6);
        const Eigen::MatrixXd sigma = 0.5 * (state.cov() + meas.cov_m);
        const double s1 = std::sqrt(sigma(0, 0)), s2 = std::sqrt(sigma(1, 1));
        const int grid = 400;
        const double half1 = 10.0 * s1, half2 = 10.0 * s2;
        double integral = 0.0;
        const double dx = 2.0 * half1 / grid, dy = 2.0 * half2 / grid;
        for (int i = 0; i <= grid; ++i) {
            for (int j = 0; j <= grid; ++j) {
                Eigen::VectorXd d(2);
                d << state.disp()(0) - half1 + i * dx, state.disp()(1) - half2 + j * dy;
                const double w = ((i == 0 || i == grid) ? 0.5 : 1.0) *
                                 ((j == 0 || j == grid) ? 0.5 : 1.0);
                integral += w * overlap_probability_density(state, meas.with_outcome(d));
            }
        }
        integral *= dx * dy;
        add_check(rep, "density-normalization", 1e-6, std::abs(integral - 1.0));
    }

    // Euler round trips on random symplectics.
    {
        Rng rng(stream_seed(seed, 5));
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 3.0);
            const auto s = random_symplectic(n, rng);
            const auto parts = euler_decompose(s);
            worst = std::max(worst,
                             (parts.reconstruct() - s.matrix()).cwiseAbs().maxCoeff());
            if (!parts.o.is_orthogonal() || !parts.o_prime.is_orthogonal()) worst = 1.0;
        }
        add_check(rep, "euler-roundtrip", 1e-8, worst);
    }
}

void run_identity_optimal(SuiteReport& rep, std::uint64_t seed, int trials) {
    for (int n : {2, 3}) {
        const auto report = verify_identity_optimal(n, 1.0, 0.0, trials, seed);
        add_check(rep, "identity-optimal-n" + std::to_string(n), 1e-9, report.max_gap);
    }
}

void run_feedforward(SuiteReport& rep, std::uint64_t seed) {
    Rng rng(stream_seed(seed, 10));
    double worst = 0.0;
    for (int circuit = 0; circuit < 100; ++circuit) {
        const int keep = 1 + static_cast<int>(rng.uniform() * 2.0);
        const int meas_modes = 1 + static_cast<int>(rng.uniform() * 2.0);
        const int n = keep + meas_modes;
        const auto s = random_symplectic(n, rng);
        Eigen::VectorXd nu(2 * n);
        for (int i = 0; i < n; ++i) {
            nu(i) = 1.0 + rng.uniform();
            nu(n + i) = nu(i);
        }
        const Eigen::MatrixXd joint_cov =
            s.matrix().transpose() * nu.asDiagonal().toDenseMatrix() * s.matrix();
        Eigen::VectorXd joint_disp(2 * n);
        for (int i = 0; i < 2 * n; ++i) joint_disp(i) = rng.normal();
        const GaussianState joint(joint_cov, joint_disp);

        auto meas = compose_measurement(GeneralDyneMeasurement::heterodyne(meas_modes),
                                        random_symplectic(meas_modes, rng));
        const auto determin = eliminate_feedforward(joint_cov, keep, meas);
        const Eigen::VectorXd reference = determin.corrected_disp(joint_disp);

        std::vector<Eigen::VectorXd> probes;
        for (int p = 0; p < 20; ++p) {
            Eigen::VectorXd x(2 * keep);
            for (int i = 0; i < 2 * keep; ++i) x(i) = rng.normal();
            probes.push_back(x);
        }
        const GaussianState ref_state(determin.cov_out, reference);
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd outcome(2 * meas_modes);
            for (int i = 0; i < 2 * meas_modes; ++i) outcome(i) = 3.0 * rng.normal();
            auto cond = condition_on_partial_measurement(joint, keep, meas.with_outcome(outcome));
            // Displacement correction -gain * outcome makes the output
            // deterministic.
            const GaussianState corrected = cond.state().displaced(-cond.disp_outcome);
            for (const auto& x : probes) {
                const auto diff = corrected.characteristic_function(x) -
                                  ref_state.characteristic_function(x);
                worst = std::max(worst, std::abs(diff));
            }
        }
    }
    add_check(rep, "feedforward-outcome-independence", 1e-9, worst);
}

void run_oracles(SuiteReport& rep, std::uint64_t seed) {
    // Monte Carlo MI agrees with the determinant formula.
    {
        Rng rng(stream_seed(seed, 20));
        double worst_sigma = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 3.0);
            Eigen::VectorXd p(2 * n), r(n);
            for (int i = 0; i < 2 * n; ++i) p(i) = 2.0 * rng.uniform();
            for (int i = 0; i < n; ++i) r(i) = rng.uniform(-1.2, 1.2);
            const double nth = trial % 3 == 0 ? 0.0 : rng.uniform();
            auto inst = MiInstance::identity_circuit(n, p, nth, r)
                            .with_circuit(random_orthogonal_symplectic(n, rng));
            const auto mc = monte_carlo_mi(inst, 100000, stream_seed(seed, 300 + trial));
            const double exact = mutual_info(inst);
            worst_sigma = std::max(worst_sigma,
                                   std::abs(mc.estimate_bits - exact) / mc.std_error);
        }
        add_check(rep, "monte-carlo-vs-closed-form", 3.0, worst_sigma);
    }

    // Blahut-Arimoto against an exhaustive prior grid on binary channels.
    {
        Rng rng(stream_seed(seed, 21));
        double worst = 0.0;
        for (int trial = 0; trial < 4; ++trial) {
            Eigen::MatrixXd w(2, 2);
            const double a = rng.uniform(), b = rng.uniform();
            w << 1.0 - a, a, b, 1.0 - b;
            const double cap = discrete_capacity(w);
            double grid_best = 0.0;
            for (int i = 0; i <= 4000; ++i) {
                Eigen::VectorXd prior(2);
                prior << i / 4000.0, 1.0 - i / 4000.0;
                grid_best = std::max(grid_best, discrete_mutual_information(w, prior));
            }
            worst = std::max(worst, std::abs(cap - grid_best));
        }
        add_check(rep, "blahut-arimoto-vs-grid", 1e-5, worst);
    }
}

}  // namespace

SuiteReport run_verify_suite(const std::string& suite, std::uint64_t seed) {
    if (!is_verify_suite(suite)) throw std::invalid_argument("unknown verify suite: " + suite);
    SuiteReport rep;
    rep.suite = suite;
    rep.seed = seed;
    if (suite == "gaussian-core" || suite == "all") run_gaussian_core(rep, seed);
    if (suite == "identity-optimal" || suite == "all")
        run_identity_optimal(rep, seed, suite == "all" ? 2000 : 10000);
    if (suite == "feedforward" || suite == "all") run_feedforward(rep, seed);
    if (suite == "oracles" || suite == "all") run_oracles(rep, seed);
    return rep;
}

}  // namespace bcap
