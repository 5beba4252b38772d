#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcap/capacity.hpp"
#include "bcap/channel.hpp"
#include "bcap/conditioning.hpp"
#include "bcap/measurement.hpp"
#include "bcap/mi.hpp"
#include "bcap/receivers.hpp"
#include "bcap/symplectic.hpp"
#include "bcap/verify.hpp"

namespace py = pybind11;
using namespace bcap;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Capacities of lossy bosonic channels under coherent-state modulation";

    // --- Gaussian phase-space calculus ---
    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("cov"), py::arg("disp"))
        .def_static("vacuum", &GaussianState::vacuum, py::arg("n_modes"))
        .def_static("coherent", &GaussianState::coherent, py::arg("alpha"))
        .def_static("thermal", &GaussianState::thermal, py::arg("n_modes"), py::arg("mean_photons"))
        .def_property_readonly("n_modes", &GaussianState::n_modes)
        .def_property_readonly("cov", &GaussianState::cov)
        .def_property_readonly("disp", &GaussianState::disp)
        .def("physicality_margin", &GaussianState::physicality_margin)
        .def("symplectic_eigenvalues", &GaussianState::symplectic_eigenvalues)
        .def("displaced", &GaussianState::displaced, py::arg("shift"))
        .def("characteristic_function", &GaussianState::characteristic_function, py::arg("x"))
        .def("to_json", &GaussianState::to_json)
        .def_static("from_json", &GaussianState::from_json, py::arg("text"));

    py::class_<SymplecticMap>(m, "SymplecticMap")
        .def(py::init<Eigen::MatrixXd>(), py::arg("matrix"))
        .def_static("identity", &SymplecticMap::identity, py::arg("n_modes"))
        .def_static("single_mode_squeezer", &SymplecticMap::single_mode_squeezer, py::arg("r"))
        .def_static("phase_rotation", &SymplecticMap::phase_rotation, py::arg("phi"))
        .def_static("two_mode_beamsplitter", &SymplecticMap::two_mode_beamsplitter, py::arg("eta"))
        .def_static("from_unitary", &SymplecticMap::from_unitary, py::arg("u"))
        .def_property_readonly("matrix", &SymplecticMap::matrix)
        .def("then", &SymplecticMap::then)
        .def("apply", &SymplecticMap::apply)
        .def("is_orthogonal", &SymplecticMap::is_orthogonal,
             py::arg("tol") = kSymplecticTolerance);

    py::class_<EulerDecomposition>(m, "EulerDecomposition")
        .def_readonly("o", &EulerDecomposition::o)
        .def_readonly("squeezes", &EulerDecomposition::squeezes)
        .def_readonly("o_prime", &EulerDecomposition::o_prime)
        .def("reconstruct", &EulerDecomposition::reconstruct);
    m.def("euler_decompose", &euler_decompose, py::arg("s"));

    py::class_<GeneralDyneMeasurement> meas(m, "GeneralDyneMeasurement");
    meas.def_static("heterodyne", &GeneralDyneMeasurement::heterodyne, py::arg("n_modes"))
        .def_static("homodyne_x", &GeneralDyneMeasurement::homodyne_x)
        .def_static("homodyne_p", &GeneralDyneMeasurement::homodyne_p)
        .def_static("squeezed", &GeneralDyneMeasurement::squeezed, py::arg("r"))
        .def_static("general", &GeneralDyneMeasurement::general, py::arg("cov"))
        .def("with_outcome", &GeneralDyneMeasurement::with_outcome, py::arg("d_m"))
        .def_readonly("cov_m", &GeneralDyneMeasurement::cov_m)
        .def_readonly("outcome", &GeneralDyneMeasurement::outcome);

    m.def("compose_measurement", &compose_measurement, py::arg("meas"), py::arg("s"));
    m.def("overlap_probability_density", &overlap_probability_density, py::arg("state"),
          py::arg("meas"));

    py::class_<ConditionResult>(m, "ConditionResult")
        .def_readonly("cov_out", &ConditionResult::cov_out)
        .def_readonly("gain", &ConditionResult::gain)
        .def_readonly("disp_base", &ConditionResult::disp_base)
        .def_readonly("disp_outcome", &ConditionResult::disp_outcome)
        .def("state", &ConditionResult::state);
    m.def("condition_on_partial_measurement", &condition_on_partial_measurement,
          py::arg("joint"), py::arg("n_keep"), py::arg("meas_b"));

    py::class_<FeedforwardElimination>(m, "FeedforwardElimination")
        .def_readonly("n_keep", &FeedforwardElimination::n_keep)
        .def_readonly("cov_out", &FeedforwardElimination::cov_out)
        .def_readonly("gain", &FeedforwardElimination::gain)
        .def("corrected_disp", &FeedforwardElimination::corrected_disp, py::arg("joint_disp"))
        .def("corrected_state", &FeedforwardElimination::corrected_state, py::arg("joint_disp"));
    m.def("eliminate_feedforward", &eliminate_feedforward, py::arg("joint_cov"),
          py::arg("n_keep"), py::arg("meas_b"));

    // --- Channel ---
    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<double, double>(), py::arg("eta"), py::arg("input_thermal"))
        .def_readonly("eta", &ChannelParams::eta)
        .def_readonly("input_thermal", &ChannelParams::input_thermal)
        .def_property_readonly("noise_photons", &ChannelParams::noise_photons);
    m.def(
        "apply_channel",
        [](std::complex<double> beta, double eta, double input_thermal) {
            return apply_channel(beta, ChannelParams(eta, input_thermal));
        },
        py::arg("beta"), py::arg("eta"), py::arg("input_thermal") = 0.0);
    m.def("coherent_displacement", &coherent_displacement, py::arg("alpha"));

    // --- Closed-form capacities ---
    m.def("g_entropy", &g_entropy, py::arg("x"));
    m.def("holevo_pure_loss", &holevo_pure_loss, py::arg("eta"), py::arg("nbar_in"));
    m.def("holevo_thermal", &holevo_thermal, py::arg("eta"), py::arg("nbar_in"),
          py::arg("env_thermal"));
    m.def("holevo_received", &holevo_received, py::arg("nbar"), py::arg("nth"));
    m.def(
        "single_mode_mi",
        [](double n1, double nbar, double r, double nth) {
            return single_mode_mi(PowerSplit::of(n1, nbar), r, nth);
        },
        py::arg("n1"), py::arg("nbar"), py::arg("r"), py::arg("nth") = 0.0);
    m.def("solve_nu_star", &solve_nu_star);
    m.def("homodyne_rate", &homodyne_rate, py::arg("nbar"), py::arg("nth") = 0.0);
    m.def("heterodyne_rate", &heterodyne_rate, py::arg("nbar"), py::arg("nth") = 0.0);

    py::class_<FixedMeasurementCapacity>(m, "FixedMeasurementCapacity")
        .def_readonly("bits", &FixedMeasurementCapacity::bits)
        .def_property_readonly("regime", [](const FixedMeasurementCapacity& r) {
            return std::string(regime_name(r.regime));
        });
    m.def("fixed_measurement_capacity", &fixed_measurement_capacity, py::arg("nbar"),
          py::arg("nth") = 0.0);
    m.def("fixed_measurement_crossover", &fixed_measurement_crossover, py::arg("nth") = 0.0);

    py::class_<TimeShareSolution>(m, "TimeShareSolution")
        .def_readonly("x", &TimeShareSolution::x)
        .def_readonly("nu", &TimeShareSolution::nu)
        .def_readonly("per_mode_hom", &TimeShareSolution::per_mode_hom)
        .def_readonly("per_mode_het", &TimeShareSolution::per_mode_het)
        .def_readonly("rate_bits", &TimeShareSolution::rate_bits);
    m.def("time_share_solution", &time_share_solution, py::arg("nbar"));

    py::class_<GaussianCapacityResult>(m, "GaussianCapacityResult")
        .def_readonly("nbar", &GaussianCapacityResult::nbar)
        .def_readonly("nth", &GaussianCapacityResult::nth)
        .def_readonly("capacity_bits", &GaussianCapacityResult::capacity_bits)
        .def_property_readonly("regime", [](const GaussianCapacityResult& r) {
            return std::string(regime_name(r.regime));
        });
    m.def("gaussian_capacity", &gaussian_capacity, py::arg("nbar"), py::arg("nth") = 0.0);

    // --- Matrix-form mutual information ---
    py::class_<MiInstance>(m, "MiInstance")
        .def(py::init(&MiInstance::identity_circuit), py::arg("n"), py::arg("powers"),
             py::arg("nth"), py::arg("squeezes"))
        .def("with_circuit", &MiInstance::with_circuit, py::arg("s"))
        .def_readonly("n", &MiInstance::n)
        .def_readonly("powers", &MiInstance::powers)
        .def_readonly("nth", &MiInstance::nth)
        .def_readonly("squeezes", &MiInstance::squeezes);
    m.def("mutual_info", &mutual_info, py::arg("inst"));

    py::class_<IdentityOptimalReport>(m, "IdentityOptimalReport")
        .def_readonly("n", &IdentityOptimalReport::n)
        .def_readonly("nbar", &IdentityOptimalReport::nbar)
        .def_readonly("nth", &IdentityOptimalReport::nth)
        .def_readonly("trials", &IdentityOptimalReport::trials)
        .def_readonly("max_gap", &IdentityOptimalReport::max_gap)
        .def_readonly("seed", &IdentityOptimalReport::seed)
        .def("to_json", &IdentityOptimalReport::to_json);
    m.def("verify_identity_optimal", &verify_identity_optimal, py::arg("n"), py::arg("nbar"),
          py::arg("nth"), py::arg("trials"), py::arg("seed") = 0);

    py::class_<LagrangeAllocation>(m, "LagrangeAllocation")
        .def_readonly("mode_photons", &LagrangeAllocation::mode_photons)
        .def_readonly("rate_bits_per_use", &LagrangeAllocation::rate_bits_per_use);
    m.def("lagrange_allocation", &lagrange_allocation, py::arg("n"), py::arg("t"),
          py::arg("nbar"));

    py::class_<MonteCarloMi>(m, "MonteCarloMi")
        .def_readonly("estimate_bits", &MonteCarloMi::estimate_bits)
        .def_readonly("std_error", &MonteCarloMi::std_error)
        .def_readonly("samples", &MonteCarloMi::samples);
    m.def("monte_carlo_mi", &monte_carlo_mi, py::arg("inst"), py::arg("samples"),
          py::arg("seed") = 0);

    // --- Structured non-Gaussian receivers ---
    m.def("binary_entropy", &binary_entropy, py::arg("p"));
    m.def("discrete_capacity", &discrete_capacity, py::arg("transitions"));
    m.def("discrete_mutual_information", &discrete_mutual_information, py::arg("transitions"),
          py::arg("prior"));
    m.def("helstrom_bpsk_error", &helstrom_bpsk_error, py::arg("nbar"));
    m.def("bpsk_dolinar_capacity", &bpsk_dolinar_capacity, py::arg("nbar"));
    m.def("ook_spd_capacity", &ook_spd_capacity, py::arg("nbar"));
    m.def("ppm_slot_rate", &ppm_slot_rate, py::arg("frame_size"), py::arg("nbar"));
    m.def("ppm_spd_capacity", &ppm_spd_capacity, py::arg("nbar"));
    m.def("mpsk_holevo", &mpsk_holevo, py::arg("m"), py::arg("nbar"));
    m.def("mpsk_holevo_envelope", &mpsk_holevo_envelope, py::arg("nbar"),
          py::arg("max_log2_m") = 16);
    m.def("ultimate_holevo", &ultimate_holevo, py::arg("nbar"));
    m.def(
        "pie_se_curves",
        [](const std::vector<double>& grid) {
            py::list out;
            for (const auto& series : pie_se_curves(grid)) {
                py::dict d;
                d["series"] = series.label;
                py::list pts;
                for (const auto& p : series.points)
                    pts.append(py::make_tuple(p.nbar, p.se_bits, p.pie_bits_per_photon));
                d["points"] = pts;
                out.append(d);
            }
            return out;
        },
        py::arg("nbar_grid"));

    // --- Verification suites ---
    m.def(
        "run_verify_suite",
        [](const std::string& suite, std::uint64_t seed) {
            const auto rep = run_verify_suite(suite, seed);
            return py::make_tuple(rep.pass(), rep.to_json());
        },
        py::arg("suite"), py::arg("seed") = 0);

#ifdef BCAP_VERSION
    m.attr("__version__") = BCAP_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
