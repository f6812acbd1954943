#include <iostream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wva/brute_force.hpp"
#include "wva/config.hpp"
#include "wva/ensemble.hpp"
#include "wva/error.hpp"
#include "wva/estimation.hpp"
#include "wva/pointer_fock.hpp"
#include "wva/weak_protocol.hpp"

namespace py = pybind11;
using namespace wva;

namespace {

py::list outcomes_to_list(const std::vector<HomodyneOutcome>& dist)
{
    py::list out;
    for (const auto& o : dist)
        out.append(py::make_tuple(o.x, o.probability));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Weak-value measurement simulator";
    m.attr("__version__") = "1.0.0";

    static py::exception<Error> error_type(m, "WvaError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.code())) + ": " + e.what();
            PyErr_SetString(error_type.ptr(), msg.c_str());
        }
    });

    m.attr("DEFAULT_FOCK_DIM") = default_fock_dim;

    // pointer Fock space
    py::class_<PointerState>(m, "PointerState")
        .def(py::init<CVector, double>(), py::arg("amps"), py::arg("width") = 1.0)
        .def_static("normalized", &PointerState::normalized, py::arg("amps"), py::arg("width") = 1.0)
        .def_static("fock", &PointerState::fock, py::arg("dim"), py::arg("width"), py::arg("n"))
        .def_property_readonly("dim", &PointerState::dim)
        .def_property_readonly("width", &PointerState::width)
        .def_property_readonly("amps", &PointerState::amps)
        .def("norm", &PointerState::norm);

    m.def("make_ladder", [](int dim) {
        auto l = make_ladder(dim);
        return py::make_tuple(l.a.entries(), l.a_dag.entries());
    }, py::arg("dim"), "(a, a_dag) truncated to dim levels");
    m.def("ground_state", &ground_state, py::arg("dim") = default_fock_dim, py::arg("width") = 1.0);
    m.def("position_wavefunction", &position_wavefunction, py::arg("state"), py::arg("x"));
    m.def("displaced_gaussian_overlap", &displaced_gaussian_overlap,
          py::arg("d1"), py::arg("d2"), py::arg("width"));
    m.def("mean_position", &mean_position, py::arg("state"));

    // weak protocol
    py::class_<ProtocolParams>(m, "ProtocolParams")
        .def(py::init([](double kappa, double phi, double width, double beta) {
                 return ProtocolParams{kappa, phi, width, beta};
             }),
             py::arg("kappa") = 0.0, py::arg("phi") = 0.0, py::arg("width") = 1.0,
             py::arg("beta") = 0.0)
        .def_readwrite("kappa", &ProtocolParams::kappa)
        .def_readwrite("phi", &ProtocolParams::phi)
        .def_readwrite("width", &ProtocolParams::width)
        .def_readwrite("beta", &ProtocolParams::beta)
        .def("validate", &ProtocolParams::validate);

    py::class_<JointState>(m, "JointState")
        .def_property_readonly("dim", &JointState::dim)
        .def_property_readonly("width", &JointState::width)
        .def_property_readonly("amps_plus", &JointState::amps_plus)
        .def_property_readonly("amps_minus", &JointState::amps_minus)
        .def_property_readonly("is_normalized", &JointState::is_normalized)
        .def("squared_norm", &JointState::squared_norm);

    py::class_<PostSelection>(m, "PostSelection")
        .def_readonly("pointer", &PostSelection::pointer)
        .def_readonly("probability", &PostSelection::probability)
        .def_readonly("leading_order", &PostSelection::leading_order);

    m.def("evolve_first_order", &evolve_first_order, py::arg("params"),
          py::arg("dim") = default_fock_dim);
    m.def("evolve_exact", &evolve_exact, py::arg("params"), py::arg("dim") = default_fock_dim);
    m.def("post_select", &post_select, py::arg("state"), py::arg("phi"));
    m.def("weak_value", &weak_value, py::arg("phi"));
    m.def("classify_regime", [](const ProtocolParams& p) {
        return std::string(to_string(classify_regime(p)));
    }, py::arg("params"));
    m.def("conditional_pdf", &conditional_pdf, py::arg("pointer"), py::arg("x"));
    m.def("first_order_mean_position", &first_order_mean_position,
          py::arg("kappa"), py::arg("phi"), py::arg("width") = 1.0);
    m.def("two_gaussian_mean_position", &two_gaussian_mean_position,
          py::arg("kappa"), py::arg("phi"), py::arg("width") = 1.0);

    // ensemble
    py::class_<DickeState>(m, "DickeState")
        .def(py::init<int, CVector>(), py::arg("n_atoms"), py::arg("amps"))
        .def_static("basis", &DickeState::basis, py::arg("n_atoms"), py::arg("m"))
        .def_property_readonly("n_atoms", &DickeState::n_atoms)
        .def_property_readonly("amps", &DickeState::amps);

    py::class_<CollectiveSpinOps>(m, "CollectiveSpinOps")
        .def_readonly("n_atoms", &CollectiveSpinOps::n_atoms)
        .def_readonly("jx", &CollectiveSpinOps::jx)
        .def_readonly("jy", &CollectiveSpinOps::jy)
        .def_readonly("jz", &CollectiveSpinOps::jz)
        .def("j_minus", &CollectiveSpinOps::j_minus);

    m.def("build_spin_ops", &build_spin_ops, py::arg("n_atoms"));
    m.def("hp_quadratures", [](const CollectiveSpinOps& ops) {
        auto q = hp_quadratures(ops);
        return py::make_tuple(q.x, q.p);
    }, py::arg("ops"));

    py::class_<PhotonEnsembleState>(m, "PhotonEnsembleState")
        .def_property_readonly("n_photons", &PhotonEnsembleState::n_photons)
        .def_property_readonly("n_atoms", &PhotonEnsembleState::n_atoms)
        .def_property_readonly("amps", &PhotonEnsembleState::amps)
        .def("amplitude", &PhotonEnsembleState::amplitude,
             py::arg("stokes_photons"), py::arg("excitations"));

    py::class_<Detection>(m, "Detection")
        .def_readonly("atomic", &Detection::atomic)
        .def_readonly("prob_weight", &Detection::prob_weight);

    m.def("raman_scatter_first_order", &raman_scatter_first_order,
          py::arg("n_photons"), py::arg("n_atoms"), py::arg("kappa"));
    m.def("detect_photon", &detect_photon, py::arg("state"), py::arg("phi"));
    m.def("atomic_homodyne_distribution", [](const DickeState& s) {
        return outcomes_to_list(atomic_homodyne_distribution(s));
    }, py::arg("atomic"), "list of (x, probability)");
    m.def("continuum_tv_distance", [](const DickeState& s, double phi, double kappa) {
        return continuum_tv_distance(atomic_homodyne_distribution(s), phi, kappa);
    }, py::arg("atomic"), py::arg("phi"), py::arg("kappa"));
    m.def("brute_force_homodyne", [](int n_atoms, double phi, double kappa) {
        return outcomes_to_list(brute_force_homodyne(n_atoms, phi, kappa));
    }, py::arg("n_atoms"), py::arg("phi"), py::arg("kappa"));

    // estimation
    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("trial_index", &TrialRecord::trial_index)
        .def_readonly("detected", &TrialRecord::detected)
        .def_readonly("is_background", &TrialRecord::is_background)
        .def_readonly("homodyne_sample", &TrialRecord::homodyne_sample);

    py::class_<SummaryStats>(m, "SummaryStats")
        .def_readonly("strategy", &SummaryStats::strategy)
        .def_readonly("regime", &SummaryStats::regime)
        .def_readonly("kappa_hat", &SummaryStats::kappa_hat)
        .def_readonly("rmse", &SummaryStats::rmse)
        .def_readonly("n_detections", &SummaryStats::n_detections)
        .def_readonly("n_trials", &SummaryStats::n_trials)
        .def_readonly("detection_rate", &SummaryStats::detection_rate)
        .def_readonly("insufficient_data", &SummaryStats::insufficient_data)
        .def_readonly("snr_warning", &SummaryStats::snr_warning)
        .def_readonly("kappa", &SummaryStats::kappa)
        .def_readonly("phi", &SummaryStats::phi)
        .def_readonly("beta", &SummaryStats::beta)
        .def_readonly("master_seed", &SummaryStats::master_seed);

    m.def("run_trials", [](const ProtocolParams& p, std::int64_t n, std::uint64_t seed) {
        py::gil_scoped_release release;
        return run_trials(p, n, seed);
    }, py::arg("params"), py::arg("n_trials"), py::arg("master_seed") = 42);
    m.def("run_estimate", [](const ProtocolParams& p, std::int64_t n, std::uint64_t seed) {
        py::gil_scoped_release release;
        return run_estimate(p, n, seed);
    }, py::arg("params"), py::arg("n_trials"), py::arg("master_seed") = 42);
    m.def("sweep_phi", [](double kappa, double beta, std::vector<double> grid, std::int64_t n,
                          std::uint64_t seed, double width) {
        py::gil_scoped_release release;
        return sweep_phi(kappa, beta, grid, n, seed, width);
    }, py::arg("kappa"), py::arg("beta"), py::arg("phi_grid"), py::arg("n_trials"),
       py::arg("master_seed") = 42, py::arg("width") = 1.0);

    m.def("cli", [](std::vector<std::string> args) {
        return cli_main(args, std::cout, std::cerr);
    }, py::arg("args"), "Run the command-line front end; returns the exit code.");
}
