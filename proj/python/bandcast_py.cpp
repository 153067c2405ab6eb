#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>

#include "bandcast/approximator.hpp"
#include "bandcast/error.hpp"
#include "bandcast/sinc_ops.hpp"
#include "bandcast/solver.hpp"
#include "bandcast/streaming_filter.hpp"

namespace py = pybind11;
using namespace bandcast;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array to_array(const Matrix& m) {
  Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Vector to_vector(const Array& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a one-dimensional array");
  return Vector(a.data(), a.data() + a.size());
}

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a two-dimensional array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = a.at(i, j);
  }
  return m;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["method"] = to_string(r.method);
  d["iterations"] = r.iterations;
  d["achieved_residual"] = r.achieved_residual;
  d["condition_estimate"] = r.condition_estimate;
  d["lambda_max_estimate"] = r.lambda_max_estimate;
  d["lambda_min_estimate"] = r.lambda_min_estimate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_bandcast, m) {
  m.doc() = "Band-limited least-squares approximation, forecasting and streaming filters";

  auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<EmptyWindow>(m, "EmptyWindow", error.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", error.ptr());
  py::register_exception<SingularSystem>(m, "SingularSystem", error.ptr());
  py::register_exception<NonConsecutiveTime>(m, "NonConsecutiveTime", error.ptr());

  py::class_<TimeWindow>(m, "TimeWindow")
      .def(py::init<TimeIndex, TimeIndex>(), py::arg("q"), py::arg("s"))
      .def_property_readonly("q", &TimeWindow::first)
      .def_property_readonly("s", &TimeWindow::last)
      .def_property_readonly("sample_count", &TimeWindow::sample_count)
      .def("contains", &TimeWindow::contains, py::arg("t"))
      .def("__len__", &TimeWindow::sample_count)
      .def(py::self == py::self)
      .def("__repr__", [](const TimeWindow& w) {
        return "TimeWindow(" + std::to_string(w.first()) + ", " + std::to_string(w.last()) + ")";
      });
  m.def("new_window", &new_window, py::arg("q"), py::arg("s"));
  m.def("is_unique_regime", &is_unique_regime, py::arg("window"), py::arg("half_order"));

  py::class_<Signal>(m, "Signal")
      .def(py::init([](const TimeWindow& w, const Array& values) { return Signal(w, to_vector(values)); }),
           py::arg("window"), py::arg("values"))
      .def_property_readonly("window", &Signal::window)
      .def_property_readonly("values", [](const Signal& s) { return to_array(s.values()); })
      .def("at", &Signal::at, py::arg("t"));

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init([](double omega, int half_order, double epsilon, double solver_tol, int solver_max_iter) {
             FitConfig c{omega, half_order, epsilon, solver_tol, solver_max_iter};
             c.validate();
             return c;
           }),
           py::arg("omega"), py::arg("half_order"), py::arg("epsilon") = 1e-3, py::arg("solver_tol") = 1e-10,
           py::arg("solver_max_iter") = 0)
      .def_readwrite("omega", &FitConfig::omega)
      .def_readwrite("half_order", &FitConfig::half_order)
      .def_readwrite("epsilon", &FitConfig::epsilon)
      .def_readwrite("solver_tol", &FitConfig::solver_tol)
      .def_readwrite("solver_max_iter", &FitConfig::solver_max_iter)
      .def("validate", &FitConfig::validate);

  py::enum_<Band>(m, "Band").value("low", Band::low).value("high", Band::high);

  py::class_<BandlimitedModel>(m, "BandlimitedModel")
      .def(py::init([](double omega, const Array& coefficients, Band band) {
             return BandlimitedModel(omega, to_vector(coefficients), band);
           }),
           py::arg("omega"), py::arg("coefficients"), py::arg("band") = Band::low)
      .def_static("zero", &BandlimitedModel::zero, py::arg("omega"), py::arg("half_order"))
      .def_property_readonly("omega", &BandlimitedModel::omega)
      .def_property_readonly("half_order", &BandlimitedModel::half_order)
      .def_property_readonly("band", &BandlimitedModel::band)
      .def_property_readonly("coefficients", [](const BandlimitedModel& b) { return to_array(b.coefficients()); })
      .def("coefficient", &BandlimitedModel::coefficient, py::arg("k"))
      .def("__call__", [](const BandlimitedModel& b, TimeIndex t) { return synthesize(b, t); }, py::arg("t"));

  py::enum_<SolveMethod>(m, "SolveMethod")
      .value("direct_factorization", SolveMethod::direct_factorization)
      .value("conjugate_gradient", SolveMethod::conjugate_gradient);

  py::class_<SolverInfo>(m, "SolverInfo")
      .def_readonly("method", &SolverInfo::method)
      .def_readonly("iterations", &SolverInfo::iterations)
      .def_readonly("achieved_residual", &SolverInfo::achieved_residual)
      .def_readonly("condition_estimate", &SolverInfo::condition_estimate)
      .def_readonly("lambda_max_estimate", &SolverInfo::lambda_max_estimate)
      .def_readonly("lambda_min_estimate", &SolverInfo::lambda_min_estimate)
      .def_readonly("note", &SolverInfo::note);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("window", &FitResult::window)
      .def_readonly("model", &FitResult::model)
      .def_property_readonly("fitted_values", [](const FitResult& r) { return to_array(r.fitted_values); })
      .def_readonly("residual_l2", &FitResult::residual_l2)
      .def_readonly("normal_residual", &FitResult::normal_residual)
      .def_readonly("unique_regime", &FitResult::unique_regime)
      .def_readonly("solver_info", &FitResult::solver_info);

  m.def("sinc", &sinc, py::arg("x"));
  m.def("basis_value", &basis_value, py::arg("k"), py::arg("t"), py::arg("omega"));
  m.def("synthesize", py::overload_cast<const BandlimitedModel&, TimeIndex>(&synthesize), py::arg("model"),
        py::arg("t"));
  m.def(
      "synthesize",
      [](const BandlimitedModel& model, const py::array_t<TimeIndex, py::array::c_style | py::array::forcecast>& ts) {
        Array out(ts.size());
        for (py::ssize_t i = 0; i < ts.size(); ++i) out.mutable_data()[i] = synthesize(model, ts.data()[i]);
        return out;
      },
      py::arg("model"), py::arg("times"));
  m.def(
      "analyze",
      [](const Signal& s, double omega, int half_order) { return to_array(analyze(s, omega, half_order)); },
      py::arg("signal"), py::arg("omega"), py::arg("half_order"));
  m.def(
      "gram", [](const TimeWindow& w, double omega, int n) { return to_array(gram(w, omega, n).entries); },
      py::arg("window"), py::arg("omega"), py::arg("half_order"));
  m.def(
      "design_matrix", [](const TimeWindow& w, double omega, int n) { return to_array(design_matrix(w, omega, n)); },
      py::arg("window"), py::arg("omega"), py::arg("half_order"));
  m.def("spectrum", &spectrum, py::arg("model"), py::arg("omega_eval"));

  m.def(
      "regularize", [](const Array& r, double eps) { return to_array(regularize(to_matrix(r), eps)); },
      py::arg("matrix"), py::arg("epsilon"));
  m.def(
      "solve_spd",
      [](const Array& mat, const Array& b, double tol, int max_iter) {
        SolveOutcome out = solve_spd(to_matrix(mat), to_vector(b), tol, max_iter);
        return py::make_tuple(to_array(out.y), report_dict(out.report));
      },
      py::arg("matrix"), py::arg("b"), py::arg("tol") = 1e-10, py::arg("max_iter") = 1000,
      "Returns (y, report) where report is a dict of solver diagnostics.");
  m.def(
      "condition_estimate",
      [](const Array& mat, int iters) {
        const EigenBounds e = condition_estimate(to_matrix(mat), iters);
        return py::make_tuple(e.lambda_max, e.lambda_min);
      },
      py::arg("matrix"), py::arg("iters") = kDefaultConditionIters, "Returns (lambda_max, lambda_min) estimates.");
  m.def(
      "symmetric_eigenvalues", [](const Array& mat) { return to_array(symmetric_eigenvalues(to_matrix(mat))); },
      py::arg("matrix"));

  m.def("fit", &fit, py::arg("signal"), py::arg("config"));
  m.def(
      "forecast", [](const FitResult& r, int horizon) { return to_array(forecast(r, horizon)); }, py::arg("result"),
      py::arg("horizon"));
  m.def("objective", &objective, py::arg("signal"), py::arg("model"));
  m.def("objective_regularized", &objective_regularized, py::arg("signal"), py::arg("model"), py::arg("epsilon"));
  m.def(
      "brute_force_fit", [](const Signal& s, const FitConfig& c) { return to_array(brute_force_fit(s, c)); },
      py::arg("signal"), py::arg("config"));
  m.def("fit_highband", &fit_highband, py::arg("signal"), py::arg("config"));

  py::enum_<FilterMode>(m, "FilterMode").value("expanding", FilterMode::expanding).value("sliding", FilterMode::sliding);

  py::class_<FilterOutput>(m, "FilterOutput")
      .def_readonly("t_now", &FilterOutput::t_now)
      .def_readonly("smoothed_now", &FilterOutput::smoothed_now)
      .def_property_readonly("forecasts", [](const FilterOutput& o) { return to_array(o.forecasts); })
      .def_readonly("unique_regime", &FilterOutput::unique_regime)
      .def_readonly("residual_l2", &FilterOutput::residual_l2)
      .def_readonly("model", &FilterOutput::model)
      .def_readonly("frame_offset", &FilterOutput::frame_offset);

  py::class_<FilterState>(m, "FilterState")
      .def(py::init<FilterMode, FitConfig, int, int>(), py::arg("mode"), py::arg("config"), py::arg("horizon"),
           py::arg("width") = 0)
      .def_property_readonly("mode", &FilterState::mode)
      .def_property_readonly("horizon", &FilterState::horizon)
      .def_property_readonly("width", &FilterState::width)
      .def_property_readonly("buffer_start", &FilterState::buffer_start)
      .def_property_readonly("buffer",
                             [](const FilterState& s) { return std::vector<double>(s.buffer().begin(), s.buffer().end()); })
      .def("push", &FilterState::push, py::arg("t"), py::arg("value"));
  m.def("run_offline", &run_offline, py::arg("signal"), py::arg("state_template"));
}
