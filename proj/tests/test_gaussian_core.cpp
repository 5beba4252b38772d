#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <complex>

#include "bcap/channel.hpp"
#include "bcap/conditioning.hpp"
#include "bcap/constants.hpp"
#include "bcap/measurement.hpp"
#include "bcap/rng.hpp"
#include "bcap/symplectic.hpp"
#include "fock_oracle.hpp"

using namespace bcap;

namespace {

Eigen::VectorXcd single_alpha(std::complex<double> a) {
    Eigen::VectorXcd v(1);
    v(0) = a;
    return v;
}

// Two-mode squeezed covariance in xxpp ordering.
Eigen::MatrixXd two_mode_squeezed_cov(double r) {
    const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = ch;
    cov(0, 1) = cov(1, 0) = sh;
    cov(2, 3) = cov(3, 2) = -sh;
    return cov;
}

}  // namespace

TEST_CASE("state invariants and constructors") {
    const auto vac = GaussianState::vacuum(2);
    CHECK(vac.cov().isApprox(Eigen::MatrixXd::Identity(4, 4)));
    CHECK(vac.disp().norm() == 0.0);
    CHECK(vac.physicality_margin() > -1e-12);

    // displacement convention
    const Eigen::VectorXd d1 = coherent_displacement(single_alpha({1.0, 0.0}));
    CHECK(d1(0) == doctest::Approx(0.0));
    CHECK(d1(1) == doctest::Approx(std::sqrt(2.0)));
    const Eigen::VectorXd di = coherent_displacement(single_alpha({0.0, 1.0}));
    CHECK(di(0) == doctest::Approx(-std::sqrt(2.0)));
    CHECK(di(1) == doctest::Approx(0.0));

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(GaussianState(asym, Eigen::VectorXd::Zero(2)), std::invalid_argument);

    // below the vacuum limit
    CHECK_THROWS_AS(GaussianState(0.5 * Eigen::MatrixXd::Identity(2, 2),
                                  Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);

    CHECK_THROWS_AS(GaussianState::thermal(1, -0.1), std::invalid_argument);
}

TEST_CASE("json serialization round trip") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 3.0);
        const auto s = random_symplectic(n, rng);
        Eigen::VectorXd disp(2 * n);
        for (int i = 0; i < 2 * n; ++i) disp(i) = rng.normal();
        const GaussianState state(s.matrix().transpose() * s.matrix(), disp);
        const auto back = GaussianState::from_json(state.to_json());
        CHECK(back.n_modes() == state.n_modes());
        CHECK((back.cov() - state.cov()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((back.disp() - state.disp()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("apply_channel closed forms") {
    // identity channel on vacuum input
    const auto out0 = apply_channel(0.0, ChannelParams(1.0, 0.0));
    CHECK(out0.cov().isApprox(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(out0.disp().norm() == 0.0);

    // amplitude scaling: sqrt(0.25) * 2 = 1
    const auto out1 = apply_channel(2.0, ChannelParams(0.25, 0.0));
    CHECK(out1.cov().isApprox(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(out1.disp()(0) == doctest::Approx(0.0));
    CHECK(out1.disp()(1) == doctest::Approx(std::sqrt(2.0)));

    // thermal noise: N_th = (1 - 0.5) * 2 = 1
    const auto out2 = apply_channel(1.0, ChannelParams(0.5, 2.0));
    CHECK(out2.cov().isApprox(3.0 * Eigen::MatrixXd::Identity(2, 2), 1e-12));
    CHECK(out2.disp().norm() == doctest::Approx(1.0));

    CHECK_THROWS_AS(ChannelParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("apply_channel against the Fock beamsplitter oracle") {
    // |beta> with a thermal state on the idle port, then trace out the
    // reflected arm; moments must match the displaced thermal closed form.
    const double beta = 1.0, eta = 0.5, input_thermal = 2.0;
    const int cutoff = 45;
    const double theta = std::acos(std::sqrt(eta));

    const auto weights_full = fock::thermal_weights(input_thermal, cutoff);
    const auto signal = fock::coherent_state(beta, cutoff);

    std::vector<double> weights;
    std::vector<Eigen::Vector2d> means;
    std::vector<Eigen::Matrix2d> covs;
    for (int k = 0; k <= cutoff; ++k) {
        fock::Vec idle = fock::Vec::Zero(cutoff + 1);
        idle(k) = 1.0;
        const auto mixed = fock::beamsplit(fock::product_state(signal, idle), theta);
        Eigen::Vector2d mean;
        Eigen::Matrix2d cov;
        fock::mode1_moments(mixed, mean, cov);
        weights.push_back(weights_full[k]);
        means.push_back(mean);
        covs.push_back(cov);
    }
    Eigen::Vector2d mean_phys;
    Eigen::Matrix2d cov_phys;
    fock::mix_moments(weights, means, covs, mean_phys, cov_phys);
    Eigen::Vector2d disp_oracle;
    Eigen::Matrix2d cov_oracle;
    fock::to_toolkit_convention(mean_phys, cov_phys, disp_oracle, cov_oracle);

    const auto out = apply_channel(beta, ChannelParams(eta, input_thermal));
    CHECK((out.cov() - cov_oracle).cwiseAbs().maxCoeff() < 1e-5);
    CHECK((out.disp() - disp_oracle).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("overlap density closed forms") {
    const auto vac = GaussianState::vacuum(1);
    const auto het = GeneralDyneMeasurement::heterodyne(1);

    // centered Gaussian with covariance (I + I)/2 = I
    const double at0 =
        overlap_probability_density(vac, het.with_outcome(Eigen::Vector2d::Zero()));
    CHECK(at0 == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));

    // peak sits at the state's displacement
    const auto state = GaussianState::coherent(single_alpha({0.8, -0.3}));
    const double peak = overlap_probability_density(state, het.with_outcome(state.disp()));
    for (double dx : {-0.3, 0.2, 0.7}) {
        Eigen::VectorXd off = state.disp();
        off(0) += dx;
        CHECK(peak > overlap_probability_density(state, het.with_outcome(off)));
    }
    CHECK(peak == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));

    // thermal N = 1: covariance (3I + I)/2 = 2I
    const auto th = GaussianState::thermal(1, 1.0);
    const double th0 = overlap_probability_density(th, het.with_outcome(Eigen::Vector2d::Zero()));
    CHECK(th0 == doctest::Approx(1.0 / (2.0 * M_PI * 2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(overlap_probability_density(vac, het), std::invalid_argument);
    CHECK_THROWS_AS(
        overlap_probability_density(vac, GeneralDyneMeasurement::heterodyne(2).with_outcome(
                                             Eigen::VectorXd::Zero(4))),
        std::invalid_argument);
}

TEST_CASE("overlap density integrates to one") {
    Eigen::VectorXcd alpha = single_alpha({0.5, 0.2});
    const GaussianState state =
        GaussianState::thermal(1, 0.7).displaced(coherent_displacement(alpha));
    const auto meas = GeneralDyneMeasurement::squeezed(0.5);
    const Eigen::MatrixXd sigma = 0.5 * (state.cov() + meas.cov_m);
    const double s1 = std::sqrt(sigma(0, 0)), s2 = std::sqrt(sigma(1, 1));
    const int grid = 500;
    double integral = 0.0;
    const double dx = 20.0 * s1 / grid, dy = 20.0 * s2 / grid;
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            Eigen::Vector2d d(state.disp()(0) - 10.0 * s1 + i * dx,
                              state.disp()(1) - 10.0 * s2 + j * dy);
            const double w =
                ((i == 0 || i == grid) ? 0.5 : 1.0) * ((j == 0 || j == grid) ? 0.5 : 1.0);
            integral += w * overlap_probability_density(state, meas.with_outcome(d));
        }
    }
    integral *= dx * dy;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("overlap density matches independently sampled heterodyne statistics") {
    // Thermal state, N = 1; samples drawn by the physical two-stage route
    // (thermal amplitude plus heterodyne noise), never via the density.
    const auto th = GaussianState::thermal(1, 1.0);
    const auto het = GeneralDyneMeasurement::heterodyne(1);

    Rng rng(20240817);
    const int n_samples = 1000000;
    const int bins = 8;
    const double sd = std::sqrt(2.0);  // claimed per-component std dev
    const double lo = -4.0 * sd, hi = 4.0 * sd;
    const double width = (hi - lo) / bins;
    std::vector<long> counts(bins * bins + 1, 0);
    for (int s = 0; s < n_samples; ++s) {
        // alpha_signal ~ CN(0, 1): Re/Im variance 1/2 each
        const double re_s = std::sqrt(0.5) * rng.normal();
        const double im_s = std::sqrt(0.5) * rng.normal();
        // heterodyne adds one unit of vacuum noise: alpha_M ~ CN(alpha, 1)
        const double re_m = re_s + std::sqrt(0.5) * rng.normal();
        const double im_m = im_s + std::sqrt(0.5) * rng.normal();
        const double d1 = -std::sqrt(2.0) * im_m;
        const double d2 = std::sqrt(2.0) * re_m;
        const int i = static_cast<int>(std::floor((d1 - lo) / width));
        const int j = static_cast<int>(std::floor((d2 - lo) / width));
        if (i < 0 || i >= bins || j < 0 || j >= bins)
            ++counts[bins * bins];
        else
            ++counts[i * bins + j];
    }

    // expected probabilities by integrating the emitted density per cell
    std::vector<double> probs(bins * bins + 1, 0.0);
    double inside = 0.0;
    const int sub = 24;
    for (int i = 0; i < bins; ++i) {
        for (int j = 0; j < bins; ++j) {
            double cell = 0.0;
            for (int a = 0; a <= sub; ++a) {
                for (int b = 0; b <= sub; ++b) {
                    Eigen::Vector2d d(lo + (i + double(a) / sub) * width,
                                      lo + (j + double(b) / sub) * width);
                    const double w = ((a == 0 || a == sub) ? 0.5 : 1.0) *
                                     ((b == 0 || b == sub) ? 0.5 : 1.0);
                    cell += w * overlap_probability_density(th, het.with_outcome(d));
                }
            }
            probs[i * bins + j] = cell * (width / sub) * (width / sub);
            inside += probs[i * bins + j];
        }
    }
    probs[bins * bins] = 1.0 - inside;

    double chi2 = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c) {
        const double expected = probs[c] * n_samples;
        if (expected > 5.0) chi2 += (counts[c] - expected) * (counts[c] - expected) / expected;
    }
    // 64 df; anything structurally wrong lands orders of magnitude higher
    CHECK(chi2 < 150.0);
}

TEST_CASE("euler decomposition") {
    // identity: all squeezes vanish, reconstruction is exact
    const auto id_parts = euler_decompose(SymplecticMap::identity(2));
    CHECK(id_parts.squeezes.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((id_parts.reconstruct() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-10);

    // already in normal form
    const auto sq = SymplecticMap::single_mode_squeezer(0.8);
    const auto sq_parts = euler_decompose(sq);
    REQUIRE(sq_parts.squeezes.size() == 1);
    CHECK(std::abs(sq_parts.squeezes(0)) == doctest::Approx(0.8).epsilon(1e-10));
    CHECK((sq_parts.reconstruct() - sq.matrix()).cwiseAbs().maxCoeff() < 1e-10);

    // purely passive input: the whole spectrum sits in the unit eigenspace
    {
        Rng orng(19);
        for (int trial = 0; trial < 10; ++trial) {
            const auto passive = random_orthogonal_symplectic(3, orng);
            const auto parts = euler_decompose(passive);
            CHECK(parts.squeezes.cwiseAbs().maxCoeff() < 1e-7);
            CHECK((parts.reconstruct() - passive.matrix()).cwiseAbs().maxCoeff() < 1e-8);
        }
    }

    // repeated squeezing parameter: the paired eigenvalues have multiplicity
    // two and the partner construction must still produce a symplectic basis
    {
        Rng drng(23);
        const auto mixer1 = random_orthogonal_symplectic(2, drng);
        const auto mixer2 = random_orthogonal_symplectic(2, drng);
        const auto equal =
            mixer1
                .then(SymplecticMap::embed(2, {0}, SymplecticMap::single_mode_squeezer(0.9)))
                .then(SymplecticMap::embed(2, {1}, SymplecticMap::single_mode_squeezer(0.9)))
                .then(mixer2);
        const auto parts = euler_decompose(equal);
        CHECK(parts.squeezes(0) == doctest::Approx(0.9).epsilon(1e-9));
        CHECK(parts.squeezes(1) == doctest::Approx(0.9).epsilon(1e-9));
        CHECK((parts.reconstruct() - equal.matrix()).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(parts.o.is_orthogonal());
        CHECK(parts.o_prime.is_orthogonal());
    }

    // mixed degeneracy: passive circuit on two modes beside one strong
    // squeezer
    {
        Rng mrng(29);
        const auto mixed =
            SymplecticMap::embed(3, {2}, SymplecticMap::single_mode_squeezer(1.8))
                .then(SymplecticMap::embed(3, {0, 1}, random_orthogonal_symplectic(2, mrng)));
        const auto parts = euler_decompose(mixed);
        CHECK(parts.squeezes(0) == doctest::Approx(1.8).epsilon(1e-9));
        CHECK(std::abs(parts.squeezes(1)) < 1e-8);
        CHECK(std::abs(parts.squeezes(2)) < 1e-8);
        CHECK((parts.reconstruct() - mixed.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    }

    // random products of rotations and squeezers, n = 3
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        SymplecticMap s = random_orthogonal_symplectic(3, rng);
        for (int k = 0; k < 5; ++k) {
            const int mode = static_cast<int>(rng.uniform() * 3.0);
            s = s.then(SymplecticMap::embed(3, {mode}, SymplecticMap::single_mode_squeezer(
                                                           rng.uniform(-1.2, 1.2))));
            s = s.then(random_orthogonal_symplectic(3, rng));
        }
        const auto parts = euler_decompose(s);
        CHECK((parts.reconstruct() - s.matrix()).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(parts.o.is_orthogonal());
        CHECK(parts.o_prime.is_orthogonal());
        for (int i = 0; i + 1 < parts.squeezes.size(); ++i)
            CHECK(parts.squeezes(i) >= parts.squeezes(i + 1) - 1e-12);
    }
}

TEST_CASE("symplectic map basics") {
    Eigen::MatrixXd bogus = Eigen::MatrixXd::Identity(4, 4);
    bogus(0, 0) = 2.0;
    CHECK_THROWS_AS(SymplecticMap{bogus}, std::invalid_argument);

    // closure under composition
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 4.0);
        const auto s1 = random_symplectic(n, rng);
        const auto s2 = random_symplectic(n, rng);
        CHECK(SymplecticMap::symplectic_defect(s1.then(s2).matrix()) < 1e-9);
    }

    // beamsplitter convention: mode 1 keeps sqrt(eta)
    const auto bs = SymplecticMap::two_mode_beamsplitter(0.25);
    Eigen::VectorXcd alpha(2);
    alpha << 2.0, 0.0;
    const auto out = bs.apply(GaussianState::coherent(alpha));
    Eigen::VectorXcd expect(2);
    expect << 1.0, -std::sqrt(0.75) * 2.0;
    CHECK((out.disp() - coherent_displacement(expect)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compose_measurement") {
    const auto het = GeneralDyneMeasurement::heterodyne(2);
    Rng rng(3);

    // heterodyne composed with any passive circuit stays heterodyne
    const auto passive = random_orthogonal_symplectic(2, rng);
    const auto composed = compose_measurement(het, passive);
    CHECK((composed.cov_m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    // identity leaves outcomes alone
    Eigen::VectorXd outcome(4);
    outcome << 0.3, -0.2, 1.0, 0.4;
    const auto with = het.with_outcome(outcome);
    const auto same = compose_measurement(with, SymplecticMap::identity(2));
    CHECK((same.cov_m - with.cov_m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((*same.outcome - outcome).cwiseAbs().maxCoeff() == 0.0);

    // squeezer in front of a single-mode heterodyne
    const auto sq = compose_measurement(GeneralDyneMeasurement::heterodyne(1),
                                        SymplecticMap::single_mode_squeezer(0.7));
    CHECK(sq.cov_m(0, 0) == doctest::Approx(std::exp(-1.4)).epsilon(1e-12));
    CHECK(sq.cov_m(1, 1) == doctest::Approx(std::exp(1.4)).epsilon(1e-12));
    CHECK(std::abs(sq.cov_m(0, 1)) < 1e-15);
}

TEST_CASE("conditioning on a partial measurement") {
    // product state: nothing changes, gain vanishes
    {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
        cov(0, 0) = cov(2, 2) = 3.0;  // thermal mode 1
        Eigen::VectorXd disp(4);
        disp << 0.5, -0.1, 0.2, 0.7;
        const GaussianState joint(cov, disp);
        Eigen::VectorXd outcome(2);
        outcome << 2.0, -1.0;
        const auto res = condition_on_partial_measurement(
            joint, 1, GeneralDyneMeasurement::heterodyne(1).with_outcome(outcome));
        CHECK(res.gain.cwiseAbs().maxCoeff() == 0.0);
        Eigen::MatrixXd expect(2, 2);
        expect << 3.0, 0.0, 0.0, 3.0;
        CHECK((res.cov_out - expect).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(res.disp_outcome.cwiseAbs().maxCoeff() == 0.0);
    }

    // beamsplitter on (coherent, vacuum), heterodyne the reflected arm:
    // output stays a coherent state
    {
        Eigen::VectorXcd alpha(2);
        alpha << std::complex<double>(1.2, 0.4), 0.0;
        const auto joint =
            SymplecticMap::two_mode_beamsplitter(0.5).apply(GaussianState::coherent(alpha));
        const auto res = condition_on_partial_measurement(
            joint, 1, GeneralDyneMeasurement::heterodyne(1).with_outcome(Eigen::Vector2d::Zero()));
        CHECK((res.cov_out - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

        // Fock oracle for the same conditional map: project the reflected
        // arm on the vacuum (heterodyne outcome 0)
        const int cutoff = 40;
        const auto mixed = fock::beamsplit(
            fock::product_state(fock::coherent_state({1.2, 0.4}, cutoff),
                                fock::coherent_state(0.0, cutoff)),
            std::acos(std::sqrt(0.5)));
        fock::Vec kept = fock::Vec::Zero(cutoff + 1);
        for (int n1 = 0; n1 <= cutoff; ++n1) kept(n1) = mixed.at(n1, 0);
        kept /= kept.norm();
        Eigen::Vector2d mean_phys;
        Eigen::Matrix2d cov_phys;
        fock::moments(kept, mean_phys, cov_phys);
        Eigen::Vector2d disp_oracle;
        Eigen::Matrix2d cov_oracle;
        fock::to_toolkit_convention(mean_phys, cov_phys, disp_oracle, cov_oracle);
        CHECK((res.cov_out - cov_oracle).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((res.disp_base + res.disp_outcome - disp_oracle).cwiseAbs().maxCoeff() < 1e-8);
    }

    // homodyne-x on one arm of a two-mode squeezed state gives a pure output
    {
        const GaussianState joint(two_mode_squeezed_cov(0.5), Eigen::VectorXd::Zero(4));
        const auto res = condition_on_partial_measurement(
            joint, 1,
            GeneralDyneMeasurement::homodyne_x().with_outcome(Eigen::Vector2d(0.3, 0.0)));
        CHECK(res.cov_out.determinant() == doctest::Approx(1.0).epsilon(1e-9));

        // Schur-complement oracle evaluated with plain dense inverses
        const Eigen::MatrixXd cov = joint.cov();
        Eigen::MatrixXd a(2, 2), b(2, 2), c(2, 2);
        a << cov(0, 0), cov(0, 2), cov(2, 0), cov(2, 2);
        b << cov(1, 1), cov(1, 3), cov(3, 1), cov(3, 3);
        c << cov(0, 1), cov(0, 3), cov(2, 1), cov(2, 3);
        const Eigen::MatrixXd gamma_m = GeneralDyneMeasurement::homodyne_x().cov_m;
        const Eigen::MatrixXd oracle = a - c * (b + gamma_m).inverse() * c.transpose();
        CHECK((res.cov_out - oracle).cwiseAbs().maxCoeff() < 1e-9);
    }

    // bad partitions and missing outcomes are rejected
    const auto vac2 = GaussianState::vacuum(2);
    CHECK_THROWS_AS(condition_on_partial_measurement(
                        vac2, 2, GeneralDyneMeasurement::heterodyne(1).with_outcome(
                                     Eigen::Vector2d::Zero())),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        condition_on_partial_measurement(vac2, 1, GeneralDyneMeasurement::heterodyne(1)),
        std::invalid_argument);
}

TEST_CASE("conditioning keeps physicality and purity") {
    Rng rng(13);
    double worst_phys = 0.0, worst_purity = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 2.0);
        const int keep = 1 + static_cast<int>(rng.uniform() * (n - 1));
        const int n_meas = n - keep;
        const auto s = random_symplectic(n, rng);

        // mixed input for the physicality check
        Eigen::VectorXd nu(2 * n);
        for (int i = 0; i < n; ++i) {
            nu(i) = 1.0 + 2.0 * rng.uniform();
            nu(n + i) = nu(i);
        }
        Eigen::VectorXd disp(2 * n);
        for (int i = 0; i < 2 * n; ++i) disp(i) = rng.normal();
        const GaussianState mixed(
            s.matrix().transpose() * nu.asDiagonal().toDenseMatrix() * s.matrix(), disp);
        auto meas = compose_measurement(GeneralDyneMeasurement::heterodyne(n_meas),
                                        random_symplectic(n_meas, rng));
        Eigen::VectorXd outcome(2 * n_meas);
        for (int i = 0; i < 2 * n_meas; ++i) outcome(i) = 2.0 * rng.normal();
        const auto cond = condition_on_partial_measurement(mixed, keep, meas.with_outcome(outcome));
        worst_phys = std::max(worst_phys, -cond.state().physicality_margin());

        // pure input + pure measurement => pure output
        const GaussianState pure = s.apply(GaussianState::vacuum(n));
        const auto cond_pure =
            condition_on_partial_measurement(pure, keep, meas.with_outcome(outcome));
        const Eigen::VectorXd nus = cond_pure.state().symplectic_eigenvalues();
        worst_purity = std::max(worst_purity, (nus.array() - 1.0).abs().maxCoeff());
    }
    CHECK(worst_phys < 1e-9);
    CHECK(worst_purity < 1e-8);
}

TEST_CASE("feedforward elimination") {
    // no correlations: the correction gain is zero
    {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
        const auto det = eliminate_feedforward(cov, 1, GeneralDyneMeasurement::heterodyne(1));
        CHECK(det.gain.cwiseAbs().maxCoeff() == 0.0);
    }

    Rng rng(99);

    // random two-mode circuits: the corrected conditional output does not
    // depend on the outcome
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_symplectic(2, rng);
        Eigen::VectorXd nu(4);
        nu << 1.0 + rng.uniform(), 1.0 + rng.uniform(), 0.0, 0.0;
        nu(2) = nu(0);
        nu(3) = nu(1);
        const Eigen::MatrixXd cov =
            s.matrix().transpose() * nu.asDiagonal().toDenseMatrix() * s.matrix();
        Eigen::VectorXd disp(4);
        for (int i = 0; i < 4; ++i) disp(i) = rng.normal();
        const GaussianState joint(cov, disp);
        auto meas = compose_measurement(GeneralDyneMeasurement::heterodyne(1),
                                        random_symplectic(1, rng));
        const auto det = eliminate_feedforward(cov, 1, meas);
        const GaussianState reference(det.cov_out, det.corrected_disp(disp));

        for (int outcome_trial = 0; outcome_trial < 100; ++outcome_trial) {
            Eigen::VectorXd outcome(2);
            outcome << 4.0 * rng.normal(), 4.0 * rng.normal();
            const auto cond =
                condition_on_partial_measurement(joint, 1, meas.with_outcome(outcome));
            const GaussianState corrected = cond.state().displaced(-cond.disp_outcome);
            for (int probe = 0; probe < 20; ++probe) {
                Eigen::VectorXd x(2);
                x << rng.normal(), rng.normal();
                CHECK(std::abs(corrected.characteristic_function(x) -
                               reference.characteristic_function(x)) < 1e-9);
            }
        }
    }

    // ensemble of four displaced thermal symbols through a fixed circuit:
    // the corrected symbol mixture is outcome independent, with the prior
    // untouched
    {
        const int n = 2;
        std::vector<Eigen::VectorXcd> symbols;
        for (int k = 0; k < 4; ++k) {
            Eigen::VectorXcd a(n);
            a << std::complex<double>(std::cos(k * 1.1), std::sin(k * 0.7)),
                std::complex<double>(0.3 * k, -0.2);
            symbols.push_back(a);
        }
        const ReceivedEnsemble ensemble(n, 0.4, 10.0, {0.1, 0.2, 0.3, 0.4}, symbols);
        const auto circuit = random_symplectic(n, rng);
        const Eigen::MatrixXd joint_cov =
            circuit.matrix().transpose() * ensemble.thermal_cov() * circuit.matrix();
        const auto meas = GeneralDyneMeasurement::heterodyne(1);
        const auto det = eliminate_feedforward(joint_cov, 1, meas);

        auto mixture_cf = [&](const Eigen::VectorXd& x,
                              const std::vector<GaussianState>& states) {
            std::complex<double> acc = 0.0;
            for (std::size_t k = 0; k < states.size(); ++k)
                acc += ensemble.priors[k] * states[k].characteristic_function(x);
            return acc;
        };

        // deterministic-route mixture
        std::vector<GaussianState> route_b;
        for (std::size_t k = 0; k < symbols.size(); ++k)
            route_b.push_back(det.corrected_state(
                circuit.matrix().transpose() * ensemble.displacement(k)));

        for (int outcome_trial = 0; outcome_trial < 5; ++outcome_trial) {
            Eigen::VectorXd outcome(2);
            outcome << 3.0 * rng.normal(), 3.0 * rng.normal();
            std::vector<GaussianState> route_a;
            for (std::size_t k = 0; k < symbols.size(); ++k) {
                const GaussianState in(joint_cov,
                                       circuit.matrix().transpose() * ensemble.displacement(k));
                const auto cond =
                    condition_on_partial_measurement(in, 1, meas.with_outcome(outcome));
                route_a.push_back(cond.state().displaced(-cond.disp_outcome));
            }
            for (int probe = 0; probe < 20; ++probe) {
                Eigen::VectorXd x(2);
                x << rng.normal(), rng.normal();
                CHECK(std::abs(mixture_cf(x, route_a) - mixture_cf(x, route_b)) < 1e-9);
            }
        }
    }
}

TEST_CASE("received ensemble invariants") {
    Eigen::VectorXcd a(1), b(1);
    a << std::complex<double>(1.0, 0.0);
    b << std::complex<double>(-1.0, 0.0);
    const ReceivedEnsemble ens(1, 0.5, 1.0, {0.5, 0.5}, {a, b});
    CHECK(ens.thermal_cov()(0, 0) == doctest::Approx(2.0));
    CHECK(ens.mean_photons_per_mode() == doctest::Approx(1.0));
    CHECK(ens.displacement(0).squaredNorm() == doctest::Approx(2.0));

    CHECK_THROWS_AS(ReceivedEnsemble(1, 0.5, 0.5, {0.5, 0.5}, {a, b}), std::invalid_argument);
    CHECK_THROWS_AS(ReceivedEnsemble(1, 0.5, 2.0, {0.7, 0.7}, {a, b}), std::invalid_argument);
}
