// Python bindings for the core library. Matrices and vectors cross the
// boundary as numpy arrays; reports come back as plain structs.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "otai/analysis.hpp"
#include "otai/experiments.hpp"
#include "otai/linalg.hpp"
#include "otai/models.hpp"
#include "otai/rng.hpp"

namespace py = pybind11;

using namespace otai;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Forward-model solvability and security toolkit (C++ core)";

    const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base);
    py::register_exception<ShapeError>(m, "ShapeError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<ComputationError>(m, "ComputationError", base);
    py::register_exception<EstimationError>(m, "EstimationError", base);
    py::register_exception<IoError>(m, "IoError", base);

    // ------------------------------------------------------------- rng
    py::class_<SeedSpec>(m, "SeedSpec")
        .def(py::init([](std::uint64_t master_seed, std::vector<std::uint64_t> path) {
                 return SeedSpec{master_seed, std::move(path)};
             }),
             py::arg("master_seed"), py::arg("stream_path") = std::vector<std::uint64_t>{})
        .def_readonly("master_seed", &SeedSpec::master_seed)
        .def_readonly("stream_path", &SeedSpec::stream_path)
        .def("child", &SeedSpec::child, py::arg("index"))
        .def("__repr__", [](const SeedSpec& s) {
            std::string r = "SeedSpec(" + std::to_string(s.master_seed) + ", [";
            for (std::size_t i = 0; i < s.stream_path.size(); ++i) {
                if (i) r += ", ";
                r += std::to_string(s.stream_path[i]);
            }
            return r + "])";
        });

    // ---------------------------------------------------------- linalg
    py::class_<linalg::CondNumber>(m, "CondNumber")
        .def_readonly("value", &linalg::CondNumber::value)
        .def_readonly("rank_deficient", &linalg::CondNumber::rank_deficient)
        .def("__repr__", [](const linalg::CondNumber& c) {
            return "CondNumber(value=" + experiments::format_float(c.value) +
                   ", rank_deficient=" + (c.rank_deficient ? "True" : "False") + ")";
        });

    m.def("sample_gaussian", &linalg::sample_gaussian, py::arg("rows"), py::arg("cols"),
          py::arg("mean"), py::arg("std"), py::arg("seed"));
    m.def("singular_values", &linalg::singular_values, py::arg("matrix"));
    m.def("condition_number", &linalg::condition_number, py::arg("matrix"));

    // ---------------------------------------------------------- models
    py::class_<models::SystemParams>(m, "SystemParams")
        .def_static("uniform", &models::SystemParams::uniform, py::arg("d"), py::arg("s"),
                    py::arg("M"), py::arg("alpha") = 1.0, py::arg("sigma_gamma") = 0.0,
                    py::arg("delta") = 1.0)
        .def("with_users", &models::SystemParams::with_users, py::arg("M"))
        .def("validate", &models::SystemParams::validate)
        .def_readwrite("d", &models::SystemParams::d)
        .def_readwrite("s", &models::SystemParams::s)
        .def_readwrite("M", &models::SystemParams::M)
        .def_readwrite("alphas", &models::SystemParams::alphas)
        .def_readwrite("sigma_gamma", &models::SystemParams::sigma_gamma)
        .def_readwrite("delta", &models::SystemParams::delta);

    py::class_<models::GradientSet>(m, "GradientSet")
        .def(py::init<std::vector<linalg::Vector>>(), py::arg("vectors"))
        .def_static("gaussian", &models::GradientSet::gaussian, py::arg("M"), py::arg("d"),
                    py::arg("seed"))
        .def_static("from_csv", &models::GradientSet::from_csv, py::arg("path"))
        .def("sparsify", &models::GradientSet::sparsify, py::arg("delta"))
        .def_property_readonly("users", &models::GradientSet::users)
        .def_property_readonly("length", &models::GradientSet::length)
        .def_property_readonly("vectors", &models::GradientSet::vectors)
        .def_property_readonly("sparsified", &models::GradientSet::sparsified)
        .def("stacked_sparsified", &models::GradientSet::stacked_sparsified);

    py::enum_<models::ModelKind>(m, "ModelKind")
        .value("SharedA", models::ModelKind::SharedA)
        .value("PerUserB", models::ModelKind::PerUserB)
        .value("EavesSharedA", models::ModelKind::EavesSharedA)
        .value("EavesPerUserB", models::ModelKind::EavesPerUserB);

    py::enum_<analysis::FadingKind>(m, "FadingKind")
        .value("Identity", analysis::FadingKind::Identity)
        .value("Gaussian", analysis::FadingKind::Gaussian);

    py::class_<models::BlockMeta>(m, "BlockMeta")
        .def_readonly("user", &models::BlockMeta::user)
        .def_readonly("col_begin", &models::BlockMeta::col_begin)
        .def_readonly("cols", &models::BlockMeta::cols)
        .def_readonly("scale", &models::BlockMeta::scale);

    py::class_<models::LinearOperator>(m, "LinearOperator")
        .def_readonly("matrix", &models::LinearOperator::matrix)
        .def_readonly("kind", &models::LinearOperator::kind)
        .def_readonly("blocks", &models::LinearOperator::blocks);

    py::class_<models::FadingSet>(m, "FadingSet")
        .def_static("identity", &models::FadingSet::identity, py::arg("M"), py::arg("s"))
        .def_readonly("matrices", &models::FadingSet::matrices);

    m.def("noise_stream", &models::noise_stream, py::arg("trial_seed"), py::arg("M"));
    m.def("sparsify",
          py::overload_cast<const linalg::Vector&, double>(&models::sparsify), py::arg("g"),
          py::arg("delta"));
    m.def("build_shared", &models::build_shared, py::arg("params"), py::arg("seed"));
    m.def("build_per_user", &models::build_per_user, py::arg("params"), py::arg("seed"));
    m.def("build_eaves_shared", &models::build_eaves_shared, py::arg("params"),
          py::arg("fading"), py::arg("seed"));
    m.def("build_eaves_per_user", &models::build_eaves_per_user, py::arg("params"),
          py::arg("fading"), py::arg("seed"));
    m.def("sample_gaussian_fading", &models::sample_gaussian_fading, py::arg("params"),
          py::arg("seed"));
    m.def("transmit", &models::transmit, py::arg("op"), py::arg("grads"),
          py::arg("sigma_gamma"), py::arg("seed"));
    m.def("mean_target", &models::mean_target, py::arg("grads"), py::arg("M"));

    // -------------------------------------------------------- analysis
    py::class_<analysis::CondEstimate>(m, "CondEstimate")
        .def_readonly("mean", &analysis::CondEstimate::mean)
        .def_readonly("stderr", &analysis::CondEstimate::stderr_)
        .def_readonly("trials", &analysis::CondEstimate::trials)
        .def_readonly("infinite_count", &analysis::CondEstimate::infinite_count)
        .def_readonly("master_seed", &analysis::CondEstimate::master_seed);

    py::class_<analysis::SolvabilityRow>(m, "SolvabilityRow")
        .def_readonly("M", &analysis::SolvabilityRow::M)
        .def_readonly("estimate", &analysis::SolvabilityRow::estimate)
        .def_readonly("bound", &analysis::SolvabilityRow::bound)
        .def_readonly("satisfied", &analysis::SolvabilityRow::satisfied);

    py::class_<analysis::SolvabilityReport>(m, "SolvabilityReport")
        .def_readonly("kind", &analysis::SolvabilityReport::kind)
        .def_readonly("rows", &analysis::SolvabilityReport::rows)
        .def_readonly("all_satisfied", &analysis::SolvabilityReport::all_satisfied);

    py::class_<analysis::SecurityRow>(m, "SecurityRow")
        .def_readonly("M", &analysis::SecurityRow::M)
        .def_readonly("legit", &analysis::SecurityRow::legit)
        .def_readonly("eaves", &analysis::SecurityRow::eaves)
        .def_readonly("diff_mean", &analysis::SecurityRow::diff_mean)
        .def_readonly("diff_stderr", &analysis::SecurityRow::diff_stderr)
        .def_readonly("secure", &analysis::SecurityRow::secure);

    py::class_<analysis::SecurityReport>(m, "SecurityReport")
        .def_readonly("kind", &analysis::SecurityReport::kind)
        .def_readonly("paired", &analysis::SecurityReport::paired)
        .def_readonly("rows", &analysis::SecurityReport::rows)
        .def_readonly("all_secure", &analysis::SecurityReport::all_secure);

    py::class_<analysis::TailBound>(m, "TailBound")
        .def_readonly("d", &analysis::TailBound::d)
        .def_readonly("epsilon", &analysis::TailBound::epsilon)
        .def_readonly("z", &analysis::TailBound::z)
        .def_readonly("mu", &analysis::TailBound::mu)
        .def_readonly("beta", &analysis::TailBound::beta)
        .def_readonly("exact_prob", &analysis::TailBound::exact_prob)
        .def_readonly("exp_bound", &analysis::TailBound::exp_bound);

    m.def("solvability_bound_shared", &analysis::solvability_bound_shared, py::arg("d"),
          py::arg("s"));
    m.def("solvability_bound_per_user", &analysis::solvability_bound_per_user, py::arg("d"),
          py::arg("s"), py::arg("M"));
    m.def("estimate_expected_cond", &analysis::estimate_expected_cond, py::arg("kind"),
          py::arg("params"), py::arg("fading"), py::arg("trials"), py::arg("master_seed"),
          py::arg("threads") = 1);
    m.def("estimate_fading_cond", &analysis::estimate_fading_cond, py::arg("s"), py::arg("M"),
          py::arg("trials"), py::arg("master_seed"), py::arg("threads") = 1);
    m.def("run_paired_security", &analysis::run_paired_security, py::arg("kind"),
          py::arg("proto"), py::arg("M_grid"), py::arg("trials"), py::arg("master_seed"),
          py::arg("threads") = 1, py::arg("fading") = analysis::FadingKind::Gaussian);
    m.def("check_tbc", &analysis::check_tbc, py::arg("d"), py::arg("s"), py::arg("M_grid"),
          py::arg("trials"), py::arg("master_seed"), py::arg("threads") = 1,
          py::arg("fading") = analysis::FadingKind::Gaussian);
    m.def("check_meshed_security", &analysis::check_meshed_security, py::arg("kind"),
          py::arg("params"), py::arg("M_star"), py::arg("trials"), py::arg("master_seed"),
          py::arg("threads") = 1);
    m.def("z_value", &analysis::z_value, py::arg("grads"), py::arg("M"),
          py::arg("sigma_gamma"));
    m.def("approximation_probability", &analysis::approximation_probability, py::arg("d"),
          py::arg("epsilon"), py::arg("z"));
    m.def("tail_bound", &analysis::tail_bound, py::arg("d"), py::arg("epsilon"), py::arg("z"));
    m.def("chi2_cdf", &analysis::chi2_cdf, py::arg("d"), py::arg("x"));
    m.def("chi2_sf", &analysis::chi2_sf, py::arg("d"), py::arg("x"));
    m.def("fact1_bounds", &analysis::fact1_bounds, py::arg("N"), py::arg("n"));

    // ----------------------------------------------------- experiments
    py::enum_<experiments::DofMode>(m, "DofMode")
        .value("PaperD", experiments::DofMode::PaperD)
        .value("PhysicalS", experiments::DofMode::PhysicalS);

    py::class_<experiments::SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("d", &experiments::SweepSpec::d)
        .def_readwrite("s", &experiments::SweepSpec::s)
        .def_readwrite("M_grid", &experiments::SweepSpec::M_grid)
        .def_readwrite("trials", &experiments::SweepSpec::trials)
        .def_readwrite("master_seed", &experiments::SweepSpec::master_seed)
        .def_readwrite("model", &experiments::SweepSpec::model)
        .def_readwrite("fading", &experiments::SweepSpec::fading)
        .def_readwrite("threads", &experiments::SweepSpec::threads)
        .def("validate", &experiments::SweepSpec::validate);

    py::class_<experiments::SweepRow>(m, "SweepRow")
        .def_readonly("M", &experiments::SweepRow::M)
        .def_readonly("legit_mean", &experiments::SweepRow::legit_mean)
        .def_readonly("legit_stderr", &experiments::SweepRow::legit_stderr)
        .def_readonly("eaves_mean", &experiments::SweepRow::eaves_mean)
        .def_readonly("eaves_stderr", &experiments::SweepRow::eaves_stderr)
        .def_readonly("diff_mean", &experiments::SweepRow::diff_mean)
        .def_readonly("diff_stderr", &experiments::SweepRow::diff_stderr);

    py::class_<experiments::ConcentrationRow>(m, "ConcentrationRow")
        .def_readonly("M", &experiments::ConcentrationRow::M)
        .def_readonly("z", &experiments::ConcentrationRow::z)
        .def_readonly("epsilon", &experiments::ConcentrationRow::epsilon)
        .def_readonly("empirical", &experiments::ConcentrationRow::empirical)
        .def_readonly("exact", &experiments::ConcentrationRow::exact)
        .def_readonly("bound", &experiments::ConcentrationRow::bound);

    m.def("run_fig1", &experiments::run_fig1, py::arg("spec"));
    m.def("run_solvability_sweep", &experiments::run_solvability_sweep, py::arg("spec"));
    m.def("run_concentration", &experiments::run_concentration, py::arg("params"),
          py::arg("grads"), py::arg("epsilon"), py::arg("transmissions"),
          py::arg("master_seed"), py::arg("dof") = experiments::DofMode::PhysicalS,
          py::arg("threads") = 1);
    m.def("write_fig1_csv", &experiments::write_fig1_csv, py::arg("path"), py::arg("rows"));
    m.def("write_solvability_csv", &experiments::write_solvability_csv, py::arg("path"),
          py::arg("report"));
    m.def("write_security_csv", &experiments::write_security_csv, py::arg("path"),
          py::arg("report"));
    m.def("write_concentration_csv", &experiments::write_concentration_csv, py::arg("path"),
          py::arg("rows"));
}
