#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mvce/bench.hpp"
#include "mvce/datagen.hpp"
#include "mvce/error.hpp"
#include "mvce/leverage.hpp"
#include "mvce/sampling.hpp"
#include "mvce/solver.hpp"

namespace py = pybind11;
using namespace mvce;

namespace {

using InMatrix = Eigen::Ref<const RowMatrix>;

DataMatrix to_data(const InMatrix& x) { return DataMatrix(RowMatrix(x)); }

DesignVector start_for(const DataMatrix& x, const std::string& init, std::uint64_t seed) {
  if (init == "ky") return init_kumar_yildirim(x, seed);
  if (init == "khachiyan") return init_khachiyan(x.rows());
  throw InvalidArgument("init must be 'ky' or 'khachiyan'");
}

py::dict solve_dict(const SolveResult& r) {
  py::dict out;
  out["u"] = r.state.u.weights();
  out["g"] = r.state.g;
  out["xi"] = Vector(r.state.xi);
  out["m_inv"] = Matrix(r.state.m_inv);
  out["kind"] = std::string(to_string(r.certificate.kind));
  out["gap_bound"] = r.certificate.gap_bound;
  out["iterations"] = r.certificate.iterations;
  out["runtime_ms"] = r.certificate.runtime_ms;
  if (!r.g_trace.empty()) out["g_trace"] = r.g_trace;
  return out;
}

py::dict record_dict(const BenchRecord& r) {
  py::dict out;
  out["dataset"] = r.dataset;
  out["method"] = r.method;
  out["n"] = r.n;
  out["d"] = r.d;
  out["s"] = r.s;
  out["epsilon"] = r.epsilon;
  out["delta"] = r.delta;
  out["seed"] = r.seed;
  out["g_full"] = r.g_full;
  out["g_sampled"] = r.g_sampled;
  out["g_init"] = r.g_init;
  out["gap"] = r.gap;
  out["initial_gap"] = r.initial_gap;
  out["bound_thm2"] = r.bound_thm2;
  out["bound_thm3"] = r.bound_thm3;
  out["max_violation"] = r.max_violation;
  out["containment_warning"] = r.containment_warning;
  out["iterations"] = r.iterations;
  out["time_lev_ms"] = r.time_lev_ms;
  out["time_sample_ms"] = r.time_sample_ms;
  out["time_solve_ms"] = r.time_solve_ms;
  out["time_total_ms"] = r.time_total_ms;
  out["time_full_ms"] = r.time_full_ms;
  out["error"] = r.error;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sampled minimum volume covering ellipsoids and D-optimal designs";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<RankDeficient>(m, "RankDeficient", base);
  py::register_exception<FormatError>(m, "FormatError", base);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
  py::register_exception<SketchTooSmall>(m, "SketchTooSmall", base);
  py::register_exception<DegenerateScale>(m, "DegenerateScale", base);
  py::register_exception<ThresholdUnreachable>(m, "ThresholdUnreachable", base);
  py::register_exception<NotFeasible>(m, "NotFeasible", base);
  py::register_exception<BoundViolation>(m, "BoundViolation", base);
  py::register_exception<MaxIterations>(m, "MaxIterations", base);

  // linear algebra
  m.def(
      "gram",
      [](const InMatrix& x, std::optional<std::vector<double>> w) {
        const DataMatrix xm = to_data(x);
        return w ? Matrix(gram(xm, std::span<const double>(*w)).matrix()) : Matrix(gram(xm).matrix());
      },
      py::arg("x"), py::arg("w") = py::none());
  m.def("log_det", [](const Matrix& a) { return log_det(SpdMatrix(a)); }, py::arg("a"));
  m.def(
      "extreme_gen_eigs",
      [](const Matrix& a, const Matrix& b) {
        const auto e = extreme_gen_eigs(SpdMatrix(a), SpdMatrix(b));
        return py::make_tuple(e.lambda_min, e.lambda_max);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "load_matrix",
      [](const std::filesystem::path& path, bool header) {
        return RowMatrix(load_matrix(path, format_from_path(path), header).values());
      },
      py::arg("path"), py::arg("header") = false);
  m.def(
      "save_matrix",
      [](const InMatrix& x, const std::filesystem::path& path) {
        save_matrix(to_data(x), path, format_from_path(path));
      },
      py::arg("x"), py::arg("path"));

  // leverage
  py::class_<LeverageProfile>(m, "LeverageProfile")
      .def_readonly("scores", &LeverageProfile::scores)
      .def_readonly("order", &LeverageProfile::order)
      .def_readonly("alpha", &LeverageProfile::alpha)
      .def_readonly("seed", &LeverageProfile::seed)
      .def_readonly("dim", &LeverageProfile::dim)
      .def_property_readonly("exact", [](const LeverageProfile& p) { return p.mode == LeverageMode::exact; })
      .def("sum", &LeverageProfile::sum)
      .def("__len__", &LeverageProfile::size)
      .def_static(
          "from_scores",
          [](std::vector<double> scores, std::size_t dim) { return LeverageProfile::from_scores(std::move(scores), dim); },
          py::arg("scores"), py::arg("dim"));
  m.def("exact_leverage", [](const InMatrix& x) { return exact_leverage(to_data(x)); }, py::arg("x"));
  m.def(
      "approx_leverage",
      [](const InMatrix& x, double alpha, std::uint64_t seed) { return approx_leverage(to_data(x), alpha, seed); },
      py::arg("x"), py::arg("alpha"), py::arg("seed") = 0);
  m.def(
      "scaled_row_leverage",
      [](const InMatrix& x, std::size_t i, double a) {
        auto r = scaled_row_leverage(to_data(x), i, a);
        return py::make_tuple(r.own, r.cross);
      },
      py::arg("x"), py::arg("i"), py::arg("a"));

  // sampling
  m.def(
      "sample",
      [](const LeverageProfile& profile, const std::string& method, std::optional<double> epsilon,
         std::optional<std::size_t> s, std::uint64_t seed) {
        const auto kind = parse_sample_method(method);
        auto need_s = [&] {
          if (!s) throw InvalidArgument("method '" + method + "' needs s");
          return *s;
        };
        switch (kind) {
          case SampleMethod::det:
            return (epsilon ? sample_deterministic(profile, *epsilon) : sample_top(profile, need_s())).indices;
          case SampleMethod::det_approx:
            return (epsilon ? sample_deterministic_approx(profile, *epsilon) : sample_top(profile, need_s())).indices;
          case SampleMethod::uniform:
            return sample_uniform(profile.size(), profile.dim, need_s(), seed).indices;
          case SampleMethod::proportional:
            return sample_proportional(profile, need_s(), seed).indices;
        }
        return std::vector<std::size_t>{};
      },
      py::arg("profile"), py::arg("method") = "det", py::arg("epsilon") = py::none(),
      py::arg("s") = py::none(), py::arg("seed") = 0);
  m.def("predict_sample_size", &predict_sample_size, py::arg("d"), py::arg("epsilon"), py::arg("eta"),
        py::arg("alpha") = 0.0);

  // solver
  m.def(
      "solve",
      [](const InMatrix& x, double delta, const std::string& init, const std::string& algo, std::uint64_t seed,
         bool trace) {
        const DataMatrix xm = to_data(x);
        SolveOptions opt{.delta = delta, .record_trace = trace};
        const auto u0 = start_for(xm, init, seed);
        if (algo == "wa") return solve_dict(solve_wolfe_atwood(xm, u0, opt));
        if (algo == "fp") return solve_dict(solve_fixed_point(xm, u0, opt));
        throw InvalidArgument("algo must be 'wa' or 'fp'");
      },
      py::arg("x"), py::arg("delta") = 1e-7, py::arg("init") = "ky", py::arg("algo") = "wa", py::arg("seed") = 0,
      py::arg("trace") = false);
  m.def(
      "min_volume_ellipsoid",
      [](const InMatrix& x, double delta, std::uint64_t seed) {
        const auto e = min_volume_ellipsoid(to_data(x), delta, seed);
        return py::make_tuple(Matrix(e.q), Vector(e.center));
      },
      py::arg("x"), py::arg("delta") = 1e-9, py::arg("seed") = 0);
  m.def(
      "ellipsoid_volume",
      [](const Matrix& q) { return volume(Ellipsoid{q, Vector::Zero(q.rows())}); }, py::arg("q"));
  m.def("bound_initial_gap", &bound_initial_gap, py::arg("d"), py::arg("s"), py::arg("epsilon"));
  m.def("bound_final_gap", &bound_final_gap, py::arg("d"), py::arg("epsilon"), py::arg("delta"));
  m.def("certificate_gap", &certificate_gap, py::arg("d"), py::arg("delta"));

  // data and experiments
  m.def(
      "generate",
      [](const std::string& family, std::size_t n, std::size_t d, std::uint64_t seed,
         std::map<std::string, double> params) {
        return RowMatrix(generate({parse_family(family), n, d, seed, std::move(params)}).values());
      },
      py::arg("family"), py::arg("n"), py::arg("d"), py::arg("seed") = 0,
      py::arg("params") = std::map<std::string, double>{});
  m.def(
      "run_pipeline",
      [](const InMatrix& x, const std::string& method, std::optional<double> epsilon,
         std::optional<double> s_fraction, double delta, const std::string& leverage, double alpha,
         std::uint64_t seed, bool compute_full) {
        PipelineConfig cfg;
        cfg.method = parse_sample_method(method);
        cfg.epsilon = epsilon;
        cfg.s_fraction = s_fraction;
        cfg.delta = delta;
        if (leverage == "exact") {
          cfg.leverage = LeverageMode::exact;
        } else if (leverage == "approx") {
          cfg.leverage = LeverageMode::approximate;
        } else {
          throw InvalidArgument("leverage must be 'exact' or 'approx'");
        }
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.compute_full = compute_full;
        cfg.validate();
        py::gil_scoped_release release;
        const auto r = run_pipeline(to_data(x), cfg, "array");
        py::gil_scoped_acquire acquire;
        return record_dict(r);
      },
      py::arg("x"), py::arg("method") = "det", py::arg("epsilon") = py::none(),
      py::arg("s_fraction") = py::none(), py::arg("delta") = 1e-9, py::arg("leverage") = "exact",
      py::arg("alpha") = 0.25, py::arg("seed") = 0, py::arg("compute_full") = true);
}
