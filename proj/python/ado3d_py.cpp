#include "ado3d/errors.hpp"
#include "ado3d/hankel.hpp"
#include "ado3d/monte_carlo.hpp"
#include "ado3d/quadrature.hpp"
#include "ado3d/spectral.hpp"
#include "ado3d/transport.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

namespace py = pybind11;
using namespace ado3d;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
  return Array(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> from_array(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_ado3d, m) {
  m.doc() = "3D analytical discrete ordinates for a pencil beam in an infinite medium.";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "gauss_legendre",
      [](int half_order) {
        const QuadratureSet q = gauss_legendre(half_order);
        return py::make_tuple(to_array(q.nodes), to_array(q.weights));
      },
      py::arg("half_order"), "2N Gauss-Legendre nodes and weights, positive nodes first.");

  py::class_<MediumParams>(m, "MediumParams")
      .def(py::init(&MediumParams::make), py::arg("mu_a") = 0.01, py::arg("mu_s") = 10.0,
           py::arg("g") = 0.9, py::arg("l_max") = 3)
      .def_readonly("mu_a", &MediumParams::mu_a)
      .def_readonly("mu_s", &MediumParams::mu_s)
      .def_property_readonly("g", [](const MediumParams& p) { return p.phase.anisotropy; })
      .def_property_readonly("l_max", [](const MediumParams& p) { return p.phase.degree; })
      .def_property_readonly("mu_t", &MediumParams::mu_t)
      .def_property_readonly("albedo", &MediumParams::albedo);

  py::class_<InversionParams>(m, "InversionParams")
      .def(py::init<>())
      .def_readwrite("de_step", &InversionParams::de_step)
      .def_readwrite("de_halfwidth", &InversionParams::de_halfwidth)
      .def_readwrite("trapezoids", &InversionParams::trapezoids)
      .def_readwrite("segment2_upper", &InversionParams::segment2_upper);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def_readonly("medium", &SpectralModel::medium)
      .def_property_readonly("max_order", &SpectralModel::max_order)
      .def(
          "eigenvalues", [](const SpectralModel& s, int order) { return to_array(s.order(order).eigenvalues); },
          py::arg("m") = 0, "Positive eigenvalues of azimuthal order m, descending.");

  m.def("build_spectral_model", &build_spectral_model, py::arg("medium"), py::arg("half_order"),
        py::arg("max_order") = -1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "density_curve",
      [](const SpectralModel& model, double rho, const Array& z, const InversionParams& params) {
        const std::vector<double> grid = from_array(z);
        DensityField f;
        {
          py::gil_scoped_release release;
          f = density_curve(model, rho, grid, params);
        }
        return to_array(f.u);
      },
      py::arg("model"), py::arg("rho"), py::arg("z"), py::arg("params") = InversionParams{},
      "Energy density U(rho, z) in 1/mm^2 along a z grid in mm.");

  m.def(
      "f_kernel",
      [](const SpectralModel& model, double q, double z) { return f_kernel(model.order(0), q, z); },
      py::arg("model"), py::arg("q"), py::arg("z"), "m = 0 kernel F(q, z*) in scaled units.");

  m.def("exp_diff_C", &exp_diff_C, py::arg("tau"), py::arg("zeta"), py::arg("eta"),
        py::arg("rel_eps") = 1e-7);

  m.def("sample_hg", &sample_hg, py::arg("g"), py::arg("u"));

  m.def(
      "run_mc",
      [](const MediumParams& medium, const std::vector<double>& rho, const Array& z,
         std::uint64_t photons, std::uint64_t seed, bool analog, int threads) {
        McConfig config;
        config.photons = photons;
        config.seed = seed;
        config.mode = analog ? WeightMode::Analog : WeightMode::ImplicitCapture;
        config.threads = threads;
        config.shells = shells_around(rho, 0.05);
        config.z_edges = edges_around(from_array(z));
        McResult result;
        {
          py::gil_scoped_release release;
          result = run_mc(medium, config);
        }
        py::list fields;
        for (const auto& f : result.fields) {
          fields.append(py::make_tuple(to_array(f.u), to_array(*f.stderr_u)));
        }
        return fields;
      },
      py::arg("medium"), py::arg("rho"), py::arg("z"), py::arg("photons") = 100000,
      py::arg("seed") = 20240531, py::arg("analog") = true, py::arg("threads") = 0,
      "Monte Carlo U and its standard error per rho shell, as (U, stderr) tuples.");
}
