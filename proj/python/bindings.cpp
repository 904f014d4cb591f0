#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "slowcode/fmcw.hpp"
#include "slowcode/metrics.hpp"
#include "slowcode/mimo.hpp"
#include "slowcode/pcaf.hpp"
#include "slowcode/serialization.hpp"
#include "slowcode/siso.hpp"

namespace py = pybind11;
using namespace slowcode;

namespace {

std::vector<Code> to_codes(const std::vector<CVector>& entries) {
    std::vector<Code> codes;
    codes.reserve(entries.size());
    for (const auto& e : entries) codes.push_back(Code::from_entries(e));
    return codes;
}

std::vector<CVector> to_entries(const CodeSet& set) {
    std::vector<CVector> out;
    for (const auto& c : set.codes()) out.push_back(c.entries());
    return out;
}

}  // namespace

PYBIND11_MODULE(_slowcode, m) {
    m.doc() = "Slow-time code design for FMCW mutual-interference mitigation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidDimension>(m, "InvalidDimension", base.ptr());
    py::register_exception<InvalidLag>(m, "InvalidLag", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<LoadingError>(m, "LoadingError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    py::enum_<AuxInit>(m, "AuxInit").value("random", AuxInit::random).value("closed_form", AuxInit::closed_form);
    py::enum_<ZetaMode>(m, "ZetaMode").value("analytic", ZetaMode::analytic).value("exact", ZetaMode::exact);
    py::enum_<GammaMode>(m, "GammaMode").value("frobenius", GammaMode::frobenius).value("exact", GammaMode::exact);
    py::enum_<EmitterKind>(m, "EmitterKind")
        .value("target", EmitterKind::target)
        .value("interferer", EmitterKind::interferer);
    py::enum_<Window>(m, "Window").value("none", Window::none).value("hann", Window::hann);

    py::class_<DesignConfig>(m, "DesignConfig")
        .def(py::init<>())
        .def_readwrite("n_len", &DesignConfig::n_len)
        .def_readwrite("p_max", &DesignConfig::p_max)
        .def_readwrite("n_f", &DesignConfig::n_f)
        .def_readwrite("outer_tol", &DesignConfig::outer_tol)
        .def_readwrite("outer_cap", &DesignConfig::outer_cap)
        .def_readwrite("inner_tol", &DesignConfig::inner_tol)
        .def_readwrite("inner_cap", &DesignConfig::inner_cap)
        .def_readwrite("seed", &DesignConfig::seed)
        .def_readwrite("zeta_mode", &DesignConfig::zeta_mode)
        .def_readwrite("gamma_mode", &DesignConfig::gamma_mode)
        .def_readwrite("aux_init", &DesignConfig::aux_init)
        .def_readwrite("sqrt_cache_bytes", &DesignConfig::sqrt_cache_bytes)
        .def("validate", &DesignConfig::validate)
        .def_static("from_json", [](const std::string& text) { return design_config_from_json(nlohmann::json::parse(text)); })
        .def("to_json", [](const DesignConfig& c) { return to_json(c).dump(); });

    py::class_<FmcwParams>(m, "FmcwParams")
        .def(py::init<>())
        .def_readwrite("f_c", &FmcwParams::f_c)
        .def_readwrite("bandwidth", &FmcwParams::bandwidth)
        .def_readwrite("t_c", &FmcwParams::t_c)
        .def_readwrite("f_s", &FmcwParams::f_s)
        .def_readwrite("m_fast", &FmcwParams::m_fast)
        .def_readwrite("n_slow", &FmcwParams::n_slow)
        .def_property_readonly("prf", &FmcwParams::prf)
        .def_property_readonly("wavelength", &FmcwParams::wavelength);

    py::class_<Emitter>(m, "Emitter")
        .def(py::init([](double range_m, double speed_mps, double snr_db, EmitterKind kind, int delay_lag) {
                 return Emitter{range_m, speed_mps, snr_db, kind, delay_lag};
             }),
             py::arg("range_m"), py::arg("speed_mps") = 0.0, py::arg("snr_db") = 0.0,
             py::arg("kind") = EmitterKind::target, py::arg("delay_lag") = 0)
        .def_readwrite("range_m", &Emitter::range_m)
        .def_readwrite("speed_mps", &Emitter::speed_mps)
        .def_readwrite("snr_db", &Emitter::snr_db)
        .def_readwrite("kind", &Emitter::kind)
        .def_readwrite("delay_lag", &Emitter::delay_lag);

    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));
    m.def("restart_seed", &restart_seed, py::arg("base"), py::arg("restart"));
    m.def(
        "random_unimodular_code", [](int n_len, std::uint64_t seed) { return random_unimodular_code(n_len, seed).entries(); },
        py::arg("n_len"), py::arg("seed"));
    m.def("doppler_shift_pair", [](int n_len) {
        const auto [x, y] = doppler_shift_pair(n_len);
        return py::make_tuple(x.entries(), y.entries());
    });

    m.def(
        "pcaf_grid",
        [](const CVector& x, const CVector& y, int p_max, int n_f) { return pcaf_grid(x, y, p_max, n_f).values(); },
        py::arg("x"), py::arg("y"), py::arg("p_max"), py::arg("n_f"),
        "Rows are lags -(N-1)..N-1, columns are bins -p_max..p_max.");
    m.def(
        "objective", [](const CVector& x, const CVector& y, int p_max, int n_f) { return objective_siso(x, y, p_max, n_f); },
        py::arg("x"), py::arg("y"), py::arg("p_max"), py::arg("n_f"));
    m.def(
        "build_b",
        [](const CVector& z, bool for_y, int p_max, int n_f) {
            return build_B_fast(z, for_y ? Side::for_y : Side::for_x, p_max, n_f);
        },
        py::arg("z"), py::arg("for_y"), py::arg("p_max"), py::arg("n_f"));

    m.def(
        "psl_db",
        [](const CVector& x, const CVector& y, int n_f, const std::string& region) {
            const RegionSpec r = RegionSpec::parse(region);
            return psl_db(pcaf_grid(x, y, r.p_max, n_f), r);
        },
        py::arg("x"), py::arg("y"), py::arg("n_f"), py::arg("region"));
    m.def(
        "isl",
        [](const CVector& x, const CVector& y, int n_f, const std::string& region) {
            const RegionSpec r = RegionSpec::parse(region);
            return isl(pcaf_grid(x, y, r.p_max, n_f), r);
        },
        py::arg("x"), py::arg("y"), py::arg("n_f"), py::arg("region"));

    m.def(
        "design_siso",
        [](const DesignConfig& cfg, const CVector& x0, const CVector& y0, bool single_sided) {
            SisoDesignResult r;
            {
                py::gil_scoped_release release;
                r = design_siso(cfg, Code::from_entries(x0), Code::from_entries(y0), {single_sided});
            }
            py::dict out;
            out["x"] = r.x.entries();
            out["y"] = r.y.entries();
            out["objective_trace"] = r.objective_trace;
            out["outer_iters"] = r.outer_iters;
            out["converged"] = r.converged;
            return out;
        },
        py::arg("cfg"), py::arg("x0"), py::arg("y0"), py::arg("single_sided") = false);

    m.def(
        "design_mimo",
        [](const DesignConfig& cfg, const std::vector<CVector>& x0, const std::vector<CVector>& y0) {
            const auto xs = to_codes(x0);
            const auto ys = to_codes(y0);
            MimoDesignResult r;
            {
                py::gil_scoped_release release;
                r = design_mimo(cfg, xs, ys);
            }
            py::dict out;
            out["x"] = to_entries(r.x);
            out["y"] = to_entries(r.y);
            out["surrogate_trace"] = r.surrogate_trace;
            out["quartic_trace"] = r.quartic_trace;
            out["outer_iters"] = r.outer_iters;
            out["converged"] = r.converged;
            return out;
        },
        py::arg("cfg"), py::arg("x0"), py::arg("y0"));
    m.def(
        "quartic_objective",
        [](const DesignConfig& cfg, const std::vector<CVector>& x, const std::vector<CVector>& y) {
            const QuarticBreakdown q = quartic_objective(to_codes(x), to_codes(y), cfg);
            return py::make_tuple(q.x_self, q.y_self, q.cross);
        },
        py::arg("cfg"), py::arg("x"), py::arg("y"));

    m.def(
        "simulate",
        [](const FmcwParams& params, const std::vector<Emitter>& emitters, std::optional<CVector> x,
           std::optional<CVector> y, double noise_power, std::uint64_t seed, int pad_m, int pad_n, Window window) {
            SimScenario sc;
            sc.params = params;
            sc.emitters = emitters;
            sc.noise_power = noise_power;
            sc.seed = seed;
            if (x || y) {
                if (!x || !y) throw ConfigError("pair coding needs both x and y");
                sc.coding = {CodingKind::pair, Code::from_entries(*x), Code::from_entries(*y)};
            }
            sc.validate();
            if (pad_m <= 0) pad_m = default_pad_m(params);
            if (pad_n <= 0) pad_n = default_pad_n(params);
            return range_doppler_map(synthesize_samples(sc), params, pad_m, pad_n, window).values;
        },
        py::arg("params"), py::arg("emitters"), py::arg("x") = py::none(), py::arg("y") = py::none(),
        py::arg("noise_power") = 1.0, py::arg("seed") = 1, py::arg("pad_m") = 0, py::arg("pad_n") = 0,
        py::arg("window") = Window::none, "Complex range-Doppler map, rows k and columns p.");

    m.def(
        "load_codebook",
        [](const std::filesystem::path& path) {
            py::dict out;
            for (const auto& set : deserialize_codebook(path)) out[py::str(set.label())] = to_entries(set);
            return out;
        },
        py::arg("path"));
}
