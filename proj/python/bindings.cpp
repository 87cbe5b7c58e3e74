#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardy/duality.hpp"
#include "hardy/errors.hpp"
#include "hardy/kernels.hpp"

namespace py = pybind11;
using namespace hardy;

namespace {

std::vector<cplx> to_vector(py::array_t<cplx, py::array::c_style | py::array::forcecast> a) {
  return {a.data(), a.data() + a.size()};
}

py::array_t<cplx> to_array(std::span<const cplx> v) { return py::array_t<cplx>(v.size(), v.data()); }

SymbolData symbol_from_coefficients(std::size_t grid, const std::map<int, cplx>& terms) {
  if (terms.empty()) return SymbolData::zero(CircleGrid(grid));
  const int lo = terms.begin()->first;
  std::vector<cplx> values(static_cast<std::size_t>(terms.rbegin()->first - lo + 1));
  for (const auto& [p, c] : terms) values[static_cast<std::size_t>(p - lo)] = c;
  return SymbolData::from_coefficients(CircleGrid(grid), CoeffSeries(lo, std::move(values)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kernels, dual data and duality checks for Hardy spaces with a Hankel metric and point masses";

  auto error = py::register_exception<Error>(m, "HardyError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<SzegoViolation>(m, "SzegoViolation", error.ptr());
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", error.ptr());
  py::register_exception<OrderViolation>(m, "OrderViolation", error.ptr());

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("unit", &Tolerances::unit)
      .def_readwrite("touch", &Tolerances::touch)
      .def_readwrite("outer", &Tolerances::outer)
      .def_readwrite("blaschke", &Tolerances::blaschke)
      .def_readwrite("fft", &Tolerances::fft)
      .def_readwrite("psd", &Tolerances::psd)
      .def_readwrite("order", &Tolerances::order);

  py::class_<SymbolData>(m, "Symbol")
      .def_static("zero", [](std::size_t grid) { return SymbolData::zero(CircleGrid(grid)); }, py::arg("grid"))
      .def_static(
          "from_samples",
          [](py::array_t<cplx, py::array::c_style | py::array::forcecast> values) {
            return SymbolData::from_samples(CircleGrid(static_cast<std::size_t>(values.size())), to_vector(values));
          },
          py::arg("values"))
      .def_static("from_coefficients", &symbol_from_coefficients, py::arg("grid"), py::arg("terms"),
                  "Symbol sum_p terms[p] t^p sampled on a grid of the given size.")
      .def_static(
          "from_function",
          [](std::size_t grid, const std::function<cplx(cplx)>& fn) {
            return SymbolData::from_function(CircleGrid(grid), fn);
          },
          py::arg("grid"), py::arg("fn"))
      .def_property_readonly("grid_size", [](const SymbolData& s) { return s.grid().size(); })
      .def_property_readonly("values", [](const SymbolData& s) { return to_array(s.values()); })
      .def_property_readonly("sup_modulus", &SymbolData::sup_modulus)
      .def("coefficient", &SymbolData::coefficient, py::arg("p"));

  py::class_<SzegoReport>(m, "SzegoReport")
      .def_readonly("is_contractive", &SzegoReport::is_contractive)
      .def_readonly("sup_modulus", &SzegoReport::sup_modulus)
      .def_readonly("log_integral", &SzegoReport::log_integral)
      .def_readonly("touching_nodes", &SzegoReport::touching_nodes);
  m.def("validate_szego", &validate_szego, py::arg("symbol"), py::arg("tol") = Tolerances{});

  py::class_<OuterData>(m, "Outer")
      .def_property_readonly("values", [](const OuterData& o) { return to_array(o.values()); })
      .def_property_readonly("value_at_zero", &OuterData::value_at_zero)
      .def("at", &OuterData::at, py::arg("z"))
      .def("modulus_residual", &OuterData::modulus_residual, py::arg("symbol"));
  m.def("build_outer", &build_outer, py::arg("symbol"), py::arg("tol") = Tolerances{});

  py::class_<MassSet>(m, "Masses")
      .def(py::init([](std::vector<cplx> points, std::vector<double> weights) {
             return MassSet(std::move(points), std::move(weights));
           }),
           py::arg("points") = std::vector<cplx>{}, py::arg("weights") = std::vector<double>{})
      .def_property_readonly("points", [](const MassSet& s) { return std::vector<cplx>(s.points().begin(), s.points().end()); })
      .def_property_readonly("weights",
                             [](const MassSet& s) { return std::vector<double>(s.weights().begin(), s.weights().end()); })
      .def_property_readonly("blaschke_sum", &MassSet::blaschke_sum)
      .def("__len__", &MassSet::size);

  py::class_<SpaceData>(m, "Space")
      .def(py::init([](SymbolData symbol, MassSet masses, int shift, double rho, std::optional<std::size_t> cutoff) {
             return SpaceData{std::move(symbol), std::move(masses), shift, rho, cutoff};
           }),
           py::arg("symbol"), py::arg("masses") = MassSet{}, py::arg("shift") = 0, py::arg("rho") = 1.0,
           py::arg("cutoff") = py::none())
      .def_readonly("symbol", &SpaceData::symbol)
      .def_readonly("masses", &SpaceData::masses)
      .def_readonly("shift", &SpaceData::shift)
      .def_readonly("rho", &SpaceData::rho)
      .def_readonly("cutoff", &SpaceData::mass_cutoff)
      .def("with_shift", &SpaceData::with_shift, py::arg("n"))
      .def("with_rho", &SpaceData::with_rho, py::arg("rho"))
      .def("with_cutoff", &SpaceData::with_cutoff, py::arg("n"));

  m.def(
      "gram_analytic",
      [](const SpaceData& s, int degree, std::optional<int> hankel) {
        return build_gram_analytic(s, degree, hankel).entries();
      },
      py::arg("space"), py::arg("degree"), py::arg("hankel") = py::none(),
      "Gram matrix of the metric on z^0..z^degree.");
  m.def(
      "gram_laurent",
      [](const SpaceData& s, int half_band, std::optional<int> hankel) {
        return build_gram_laurent(s, half_band, hankel).entries();
      },
      py::arg("space"), py::arg("half_band"), py::arg("hankel") = py::none(),
      "Gram matrix on z^-M..z^M followed by one coordinate per mass.");
  m.def("kernel_value_at_origin", &kernel_value_at_origin, py::arg("space"), py::arg("degree"),
        py::arg("hankel") = py::none(), py::arg("tol") = Tolerances{}, "K^alpha(0) = ||k^alpha||.");
  m.def(
      "kernel_at_point",
      [](const SpaceData& s, cplx z, int degree) {
        const auto k = kernel_at_point(build_gram_analytic(s, degree), z);
        return py::make_tuple(k.coefficients, k.value_at_point);
      },
      py::arg("space"), py::arg("z"), py::arg("degree"), "Coefficients of k_z and k_z(z).");
  m.def(
      "asymptotic_sweep",
      [](const SpaceData& s, int n_max, int degree) { return asymptotic_sweep(s, n_max, degree).values; },
      py::arg("space"), py::arg("n_max"), py::arg("degree"), "List of (n, K^{alpha_n}(0)).");
  m.def(
      "orthonormal_gram",
      [](const SpaceData& s, int n_first, int n_last, int degree) {
        return orthonormal_system(s, n_first, n_last, degree).system_gram;
      },
      py::arg("space"), py::arg("n_first"), py::arg("n_last"), py::arg("degree"));

  py::class_<SandwichReport>(m, "SandwichReport")
      .def_readonly("k_truncated", &SandwichReport::k_truncated)
      .def_readonly("k_full", &SandwichReport::k_full)
      .def_readonly("k_regularized", &SandwichReport::k_regularized)
      .def_readonly("k_both", &SandwichReport::k_both)
      .def_readonly("upper_bound", &SandwichReport::upper_bound)
      .def_readonly("lower_bound", &SandwichReport::lower_bound)
      .def_readonly("psd_margin_truncated", &SandwichReport::psd_margin_truncated)
      .def_readonly("psd_margin_regularized", &SandwichReport::psd_margin_regularized)
      .def_property_readonly("scalar_margin", &SandwichReport::scalar_margin)
      .def_property_readonly("max_identity_residual", &SandwichReport::max_identity_residual);
  m.def("sandwich_check", &sandwich_check, py::arg("space"), py::arg("cutoff"), py::arg("rho"), py::arg("n"),
        py::arg("degree"), py::arg("hankel") = py::none(), py::arg("tol") = Tolerances{});

  py::enum_<MassConvention>(m, "MassConvention")
      .value("unitary", MassConvention::unitary)
      .value("printed", MassConvention::printed);

  py::class_<DualData>(m, "Dual")
      .def_property_readonly("T_at_zero", &DualData::T_at_zero)
      .def_property_readonly("symbol", [](const DualData& d) { return d.dual.symbol; })
      .def_property_readonly("masses", [](const DualData& d) { return d.dual.masses; })
      .def_property_readonly("space", [](const DualData& d) { return d.dual.space(); })
      .def_readonly("provenance", &DualData::provenance)
      .def("modulus_residual", &DualData::modulus_residual);
  m.def(
      "build_dual",
      [](const SpaceData& s, MassConvention c) { return build_dual(make_regular(s), c); },
      py::arg("space"), py::arg("convention") = MassConvention::unitary);

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("T_at_zero", &IdentityReport::T_at_zero)
      .def_readonly("k_shifted", &IdentityReport::k_shifted)
      .def_readonly("k_dual", &IdentityReport::k_dual)
      .def_readonly("product", &IdentityReport::product)
      .def_readonly("residual", &IdentityReport::residual)
      .def_readonly("vector_residual", &IdentityReport::vector_residual);
  m.def("duality_identity", &duality_identity, py::arg("dual"), py::arg("degree"), py::arg("hankel") = py::none());

  py::class_<TheoremReport>(m, "TheoremReport")
      .def_readonly("complement_dimension", &TheoremReport::complement_dimension)
      .def_readonly("membership_residual", &TheoremReport::max_membership_residual)
      .def_readonly("orthogonality_residual", &TheoremReport::orthogonality_residual)
      .def_readonly("converse_residual", &TheoremReport::converse_residual)
      .def_property_readonly("max_residual", &TheoremReport::max_residual);
  m.def("theorem_check", &theorem_check, py::arg("dual"), py::arg("half_band"), py::arg("hankel") = py::none());

  m.def(
      "tau_residuals",
      [](const DualData& dual, py::array_t<cplx, py::array::c_style | py::array::forcecast> laurent,
         std::vector<cplx> mass_values) {
        const int band = static_cast<int>(laurent.size() / 2);
        if (laurent.size() % 2 != 1) throw InvalidArgument("Laurent coefficients need odd length 2M+1");
        const auto v = canonical_vector(dual.primal, CoeffSeries(-band, to_vector(laurent)), std::move(mass_values));
        const double n0 = laurent_norm_squared(v, dual.primal);
        const auto image = apply_tau(v, dual);
        const double n1 = laurent_norm_squared(image, dual.dual);
        const auto back = apply_tau(image, dual);
        return py::make_tuple(n0, n1, coordinate_distance(back, v) / coordinate_norm(v));
      },
      py::arg("dual"), py::arg("laurent"), py::arg("mass_values"),
      "For f with Laurent coefficients z^-M..z^M: (||f||^2, ||tau f||^2, ||tau tau f - f|| / ||f||).");
}
