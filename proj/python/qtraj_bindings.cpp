#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qtraj/classical.hpp"
#include "qtraj/config.hpp"
#include "qtraj/ensemble.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/oracle.hpp"
#include "qtraj/propagator.hpp"
#include "qtraj/stats.hpp"
#include "qtraj/wigner.hpp"

namespace py = pybind11;
using namespace qtraj;

namespace {

py::array_t<double> grid_array(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
  py::array_t<double> out({rows, cols});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_qtraj, m) {
  m.doc() = "Quantum trajectories of a measured, driven pendulum";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);

  py::class_<SimParams>(m, "SimParams")
      .def(py::init<>())
      .def_readwrite("kbar", &SimParams::kbar)
      .def_readwrite("xi", &SimParams::xi)
      .def_readwrite("D", &SimParams::D)
      .def_readwrite("epsilon", &SimParams::epsilon)
      .def_readwrite("steps_per_period", &SimParams::steps_per_period)
      .def_readwrite("n_periods", &SimParams::n_periods)
      .def_readwrite("grid_size", &SimParams::grid_size)
      .def_readwrite("seed", &SimParams::seed)
      .def("validate", &SimParams::validate)
      .def("dt", &SimParams::dt)
      .def("xi_at", &SimParams::xi_at)
      .def("D_at", &SimParams::D_at);

  m.def("modulation_factor", &modulation_factor, py::arg("t"), py::arg("epsilon"));

  py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
      .def(py::init<std::size_t, double>(), py::arg("n"), py::arg("kbar"))
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("kbar", &Grid::kbar)
      .def_property_readonly("dx", &Grid::dx)
      .def_property_readonly("x", [](const Grid& g) { return py::array_t<double>(g.size(), g.x().data()); })
      .def_property_readonly("p", [](const Grid& g) { return py::array_t<double>(g.size(), g.p().data()); });

  py::class_<WaveFunction>(m, "WaveFunction")
      .def(py::init([](std::shared_ptr<Grid> g, py::array_t<cplx, py::array::c_style | py::array::forcecast> amps,
                       double t) {
             if (static_cast<std::size_t>(amps.size()) != g->size()) throw py::value_error("amplitude count differs from grid size");
             return WaveFunction(g, std::vector<cplx>(amps.data(), amps.data() + amps.size()), t);
           }),
           py::arg("grid"), py::arg("amps"), py::arg("time") = 0.0)
      .def_readwrite("time", &WaveFunction::time)
      .def_property(
          "amps", [](const WaveFunction& w) { return py::array_t<cplx>(w.amps.size(), w.amps.data()); },
          [](WaveFunction& w, py::array_t<cplx, py::array::c_style | py::array::forcecast> a) {
            if (static_cast<std::size_t>(a.size()) != w.size()) throw py::value_error("amplitude count differs");
            w.amps.assign(a.data(), a.data() + a.size());
          })
      .def("norm_squared", &WaveFunction::norm_squared)
      .def("normalize", &WaveFunction::normalize)
      .def("measurement_moments", [](const WaveFunction& w) {
        const auto mm = measurement_moments(w);
        return py::make_tuple(mm.mean, mm.mean_sq);
      })
      .def("momentum_moments", [](const WaveFunction& w) {
        const auto mm = momentum_moments(w, Fft(w.size()));
        return py::make_tuple(mm.mean, mm.mean_sq);
      });

  m.def(
      "gaussian_state",
      [](std::shared_ptr<Grid> g, double x0, double p0, double sigma_x) { return gaussian_state(g, x0, p0, sigma_x); },
      py::arg("grid"), py::arg("x0"), py::arg("p0"), py::arg("sigma_x"));
  m.def("inner_product", &inner_product);

  py::class_<WienerStep>(m, "WienerStep")
      .def(py::init([](double dW, double dt) { return WienerStep{dW, dt}; }), py::arg("dW"), py::arg("dt"))
      .def_readwrite("dW", &WienerStep::dW)
      .def_readwrite("dt", &WienerStep::dt);

  py::class_<NoiseStream>(m, "NoiseStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id"))
      .def("normal", &NoiseStream::normal)
      .def("wiener", &NoiseStream::wiener, py::arg("dt"))
      .def("save", &NoiseStream::save)
      .def("restore", &NoiseStream::restore);

  py::class_<SplitStepPropagator>(m, "SplitStepPropagator")
      .def(py::init([](std::shared_ptr<Grid> g, const SimParams& p) { return SplitStepPropagator(g, p); }))
      .def("sse_step", &SplitStepPropagator::sse_step, py::arg("psi"), py::arg("w"))
      .def("advance", &SplitStepPropagator::advance, py::arg("psi"), py::arg("n_steps"), py::arg("dt"),
           py::arg("noise"), py::call_guard<py::gil_scoped_release>());

  m.def("dense_oracle_step", &dense_oracle_step, py::arg("psi"), py::arg("w"), py::arg("params"));

  m.def(
      "wigner_transform",
      [](const WaveFunction& psi) {
        const WignerGrid w = wigner_transform(psi);
        py::dict out;
        out["x"] = py::array_t<double>(w.x.size(), w.x.data());
        out["p"] = py::array_t<double>(w.p.size(), w.p.data());
        out["P"] = grid_array(w.values, w.nx, w.np);
        out["dx"] = w.dx;
        out["dp"] = w.dp;
        out["max_imag"] = w.max_imag;
        return out;
      },
      py::arg("psi"), "Wigner function on (x, p); P has shape (nx, np).");

  m.def("angle", &angle);
  m.def(
      "average_angle",
      [](const std::vector<WaveFunction>& states, std::optional<std::size_t> budget, std::uint64_t seed, int workers) {
        const AngleAverage a = average_angle(states, budget, seed, workers);
        return py::make_tuple(a.mean, a.std_error, a.n_pairs);
      },
      py::arg("states"), py::arg("pair_budget") = py::none(), py::arg("sample_seed") = 0, py::arg("workers") = 1);

  py::enum_<OrbitKind>(m, "OrbitKind").value("regular", OrbitKind::regular).value("chaotic", OrbitKind::chaotic);
  m.def(
      "classify_orbit",
      [](double x0, double p0, const SimParams& params) {
        const auto c = classify_orbit(x0, p0, params);
        return py::make_tuple(c.kind, c.exponent);
      },
      py::arg("x0"), py::arg("p0"), py::arg("params"));
  m.def(
      "stroboscopic_portrait",
      [](const std::vector<std::pair<double, double>>& seeds, int n_periods, const SimParams& params) {
        std::vector<PhaseSpacePoint> pts;
        for (const auto& [x, p] : seeds) pts.push_back({x, p});
        const auto out = stroboscopic_portrait(pts, n_periods, params);
        py::array_t<double> arr({out.size(), std::size_t{4}});
        auto v = arr.mutable_unchecked<2>();
        for (std::size_t i = 0; i < out.size(); ++i) {
          v(i, 0) = static_cast<double>(out[i].strobe_index);
          v(i, 1) = static_cast<double>(out[i].seed_index);
          v(i, 2) = out[i].x;
          v(i, 3) = out[i].p;
        }
        return arr;
      },
      py::arg("seeds"), py::arg("n_periods"), py::arg("params"),
      "Rows of (strobe_index, seed_index, x, p).");

  auto summary_dict = [](const RunSummary& s) {
    py::dict d;
    d["run_id"] = s.run_id;
    d["run_dir"] = s.run_dir;
    d["completed"] = s.completed;
    d["strobe"] = s.strobe;
    d["files"] = s.files;
    d["wall_time_s"] = s.wall_seconds;
    return d;
  };
  m.def(
      "simulate",
      [summary_dict](const std::filesystem::path& config, const std::filesystem::path& out, int workers,
                     std::optional<std::uint64_t> seed) {
        ScenarioSpec spec = load_scenario(config);
        if (seed) spec.params.seed = *seed;
        RunSummary s;
        {
          py::gil_scoped_release release;
          s = run_scenario(spec, out, {workers, std::nullopt});
        }
        return summary_dict(s);
      },
      py::arg("config"), py::arg("out"), py::arg("workers") = 1, py::arg("seed") = py::none());
  m.def(
      "resume",
      [summary_dict](const std::filesystem::path& run_dir, int workers) {
        RunSummary s;
        {
          py::gil_scoped_release release;
          s = resume(run_dir, {workers, std::nullopt});
        }
        return summary_dict(s);
      },
      py::arg("run_dir"), py::arg("workers") = 1);
  m.def(
      "emit",
      [](const std::filesystem::path& run_dir, const std::string& figure,
         const std::vector<std::filesystem::path>& companions, std::optional<int> strobe) {
        return emit_plot_data(run_dir, figure_from_string(figure), companions, strobe);
      },
      py::arg("run_dir"), py::arg("figure"), py::arg("companions") = std::vector<std::filesystem::path>{},
      py::arg("strobe") = py::none());
}
