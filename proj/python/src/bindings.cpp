#include "braggsim/config.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/fwm_classical.hpp"
#include "braggsim/fwm_quantum.hpp"
#include "braggsim/scenario.hpp"
#include "braggsim/transfer_matrix.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace braggsim;

namespace {

py::dict table(const SweepResult& r) {
  py::dict d;
  for (std::size_t c = 0; c < r.columns.size(); ++c) d[py::str(r.columns[c])] = r.data[c];
  d["scalars"] = r.scalars;
  d["notes"] = r.notes;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bragg-waveguide filter and four-wave-mixing pair source simulator";

  py::class_<GratingSpec>(m, "GratingSpec")
      .def(py::init<>())
      .def_readwrite("period", &GratingSpec::period)
      .def_readwrite("duty_cycle", &GratingSpec::duty_cycle)
      .def_readwrite("n_periods", &GratingSpec::n_periods)
      .def_readwrite("n_lo", &GratingSpec::n_lo)
      .def_readwrite("delta_n", &GratingSpec::delta_n)
      .def_readwrite("lead_in_length", &GratingSpec::lead_in_length)
      .def_readwrite("lead_out_length", &GratingSpec::lead_out_length)
      .def("total_length", &GratingSpec::total_length)
      .def("grating_only", &GratingSpec::grating_only);

  py::class_<NonlinearParams>(m, "NonlinearParams")
      .def(py::init<>())
      .def_readwrite("gamma", &NonlinearParams::gamma)
      .def_readwrite("pump_power", &NonlinearParams::pump_power)
      .def_readwrite("signal_power", &NonlinearParams::signal_power)
      .def_readwrite("coupling_loss_db", &NonlinearParams::coupling_loss_db);

  m.def("paper_grating", &presets::paper_grating);
  m.def("paper_nonlinear", &presets::paper_nonlinear);

  m.def("transmission_spectrum",
        [](const GratingSpec& g, double center, double span, std::size_t n) {
          return table(transmission_spectrum(g, make_wavelength_grid(center, span, n)));
        },
        py::arg("spec"), py::arg("center_wavelength"), py::arg("span"), py::arg("n_points"));
  m.def("stopband_center", &stopband_center);
  m.def("design_periods", &design_periods, py::arg("rejection_db"), py::arg("n_lo"), py::arg("delta_n"));
  m.def("rejection_db_for_periods", &rejection_db_for_periods);

  m.def("stimulated_idler_power",
        [](const GratingSpec& g, const NonlinearParams& p, double lp, double ls) {
          return stimulated_idler(g, p, lp, ls).idler_power_internal;
        },
        py::arg("spec"), py::arg("params"), py::arg("lambda_p"), py::arg("lambda_s"));
  m.def("spont_rate",
        [](double stim_power, double idler_wavelength, double signal_power, double width) {
          StimulatedResult s;
          s.idler_power_internal = stim_power;
          s.idler_wavelength = idler_wavelength;
          CollectionWindow w;
          w.width = width;
          const SpontRate r = spont_from_stim(s, signal_power, w);
          return py::make_tuple(r.power, r.rate);
        },
        "Returns (spontaneous power W, pairs/s).", py::arg("stim_power"), py::arg("idler_wavelength"),
        py::arg("signal_power"), py::arg("width"));

  m.def("roundtrip_config", [](const std::string& text) { return serialize_config(parse_config(text)); });
  m.def("run",
        [](const std::string& config, const std::string& sub, const std::string& out_dir, bool force) {
          const auto s = parse_subcommand(sub);
          if (!s) throw py::value_error("unknown subcommand '" + sub + "'");
          RunRequest r;
          r.config_path = config;
          r.subcommand = *s;
          r.out_dir = out_dir;
          r.force = force;
          const RunStatus st = run_scenario_files(r);
          py::dict d;
          d["exit_code"] = st.exit_code;
          d["error"] = st.error;
          d["written"] = st.written;
          d["messages"] = st.messages;
          return d;
        },
        py::arg("config"), py::arg("subcommand"), py::arg("out_dir"), py::arg("force") = false);

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
}
