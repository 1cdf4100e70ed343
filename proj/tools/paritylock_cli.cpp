#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "paritylock/error.hpp"
#include "paritylock/estimation.hpp"
#include "paritylock/interferometry.hpp"
#include "paritylock/io.hpp"
#include "paritylock/noise.hpp"
#include "paritylock/parallel.hpp"
#include "paritylock/preparation.hpp"
#include "paritylock/scenarios.hpp"
#include "paritylock/validation.hpp"

using namespace paritylock;
namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_max;
    std::string out = ".";
    int threads = 0;
};

// Flags win over the config file, which wins over defaults. Every value read lands in `resolved`.
class Params {
public:
    Params(json file, std::string command) : file_(std::move(file)), command_(std::move(command)) {
        if (file_.contains(command_) && file_[command_].is_object()) section_ = file_[command_];
    }

    template <class T>
    T get(const std::string& key, const std::optional<T>& flag, T fallback) {
        T v = fallback;
        if (flag) {
            v = *flag;
        } else if (const json* j = lookup(key)) {
            try {
                v = j->get<T>();
            } catch (const json::exception&) {
                throw Error(ErrorKind::ParseError, "config key '" + key + "' has the wrong type");
            }
        }
        resolved[key] = v;
        return v;
    }

    bool has(const std::string& key) const { return lookup(key) != nullptr; }

    json resolved = json::object();

private:
    const json* lookup(const std::string& key) const {
        if (section_.contains(key)) return &section_[key];
        if (file_.is_object() && file_.contains(key)) return &file_[key];
        return nullptr;
    }
    json file_;
    json section_ = json::object();
    std::string command_;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read config " + path);
    try {
        json j = json::parse(f);
        if (!j.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
    }
}

struct Context {
    Globals g;
    Params p;
    std::uint64_t seed;
    int n_max;
    fs::path out;

    Context(const Globals& globals, const std::string& command)
        : g(globals), p(load_config(globals.config_path), command) {
        seed = p.get<std::uint64_t>("seed", g.seed, 1);
        n_max = p.get<int>("n_max", g.n_max, kDefaultNMax);
        out = g.out;
        fs::create_directories(out);
        command_ = command;
    }

    OutputHeader header() const { return {command_, p.resolved, seed}; }
    fs::path file(const std::string& name) const { return out / name; }

private:
    std::string command_;
};

std::vector<double> resolve_phases(Context& c, const std::optional<std::string>& flag, int N, std::uint64_t stream) {
    std::string spec = "random";
    if (flag) {
        spec = *flag;
    } else if (c.p.has("phases")) {
        json tmp = c.p.get<json>("phases", std::nullopt, json("random"));
        if (tmp.is_array()) {
            std::vector<double> ph = tmp.get<std::vector<double>>();
            if (static_cast<int>(ph.size()) != N) throw Error(ErrorKind::InvalidPhases, "phases length must equal N");
            return ph;
        }
        spec = tmp.get<std::string>();
    }
    std::vector<double> ph;
    if (spec == "random") {
        ph = sample_phase_vectors(N, 1, derive_seed(c.seed, stream))[0];
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                ph.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidPhases, "bad phase '" + tok + "'");
            }
        }
        if (static_cast<int>(ph.size()) != N) throw Error(ErrorKind::InvalidPhases, "phases length must equal N");
    }
    c.p.resolved["phases"] = ph;
    return ph;
}

std::vector<double> resolve_areas(Context& c, const std::optional<std::vector<double>>& flag, int N,
                                  const std::string& policy) {
    std::vector<double> a;
    if (flag || c.p.has("areas")) {
        a = c.p.get<std::vector<double>>("areas", flag, {});
        if (static_cast<int>(a.size()) != N) throw Error(ErrorKind::InvalidArgument, "areas length must equal N");
    } else if (policy == "compensated") {
        a = compensated_areas(N);
    } else if (policy == "half") {
        a = uniform_areas(N);
    } else {
        throw Error(ErrorKind::InvalidArgument, "area policy must be half or compensated");
    }
    c.p.resolved["areas"] = a;
    return a;
}

RabiModel resolve_model(Context& c, const std::optional<double>& eta_flag) {
    const double eta = c.p.get<double>("eta", eta_flag, 0.0);
    if (eta < 0) throw Error(ErrorKind::InvalidArgument, "eta must be >= 0");
    return eta > 0 ? RabiModel::beyond_ld(eta) : RabiModel::lamb_dicke();
}

json dist_json(const FockDistribution& d) { return {{"probs", d.probs}, {"mean", d.mean}, {"std", d.std}}; }

json spectrum_json(const CoherenceSpectrum& s) {
    json A = json::object(), B = json::object();
    for (auto& [h, v] : s.A) A[std::to_string(h.first) + "," + std::to_string(h.second)] = v;
    for (auto& [h, v] : s.B) B[std::to_string(h.first) + "," + std::to_string(h.second)] = v;
    return {{"dc", s.dc}, {"A", A}, {"B", B}, {"R", s.R()}, {"R_labels", {"0,1", "1,0", "1,-1", "2,-1"}}};
}

json metric_json(const MetricPair& m) {
    return {{"contrast", m.contrast}, {"visibility", m.visibility}, {"contrast_stderr", m.contrast_stderr},
            {"visibility_stderr", m.visibility_stderr}};
}

void note(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

// ---- commands ----------------------------------------------------------------

struct PrepareArgs {
    std::optional<int> n;
    std::optional<std::vector<double>> areas;
    std::optional<std::string> phases, policy;
    std::optional<double> eta;
};

int cmd_prepare(const Globals& g, const PrepareArgs& a) {
    Context c(g, "prepare");
    if (!a.n && !c.p.has("N")) throw CLI::RequiredError("--n");
    const int N = c.p.get<int>("N", a.n, 0);
    if (N < 0) throw Error(ErrorKind::InvalidArgument, "N must be >= 0");
    const auto areas = resolve_areas(c, a.areas, N, c.p.get<std::string>("policy", a.policy, "half"));
    const auto phases = resolve_phases(c, a.phases, N, 0);
    const auto model = resolve_model(c, a.eta);
    const auto seq = build_sequence(areas, phases, model);
    const JointState psi = prepare(seq, c.n_max);

    const auto dist = fock_distribution(psi);
    json parities = json::object();
    for (auto [name, cond] : {std::pair{"g", Condition::g}, std::pair{"e", Condition::e}}) {
        try {
            parities[name] = parity_expectation(psi, cond);
        } catch (const Error&) {
            parities[name] = nullptr;
        }
    }
    json pulses = json::array();
    for (const auto& p : seq.pulses) pulses.push_back(to_json(p));
    const auto [pg, pe] = qubit_populations(psi);
    const auto h = c.header();
    write_json(c.file("prepare_state.json"), h,
               {{"state", to_json(psi)},
                {"sequence", pulses},
                {"distribution", dist_json(dist)},
                {"conditional_parity", parities},
                {"qubit_populations", {{"g", pg}, {"e", pe}}}});
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < dist.probs.size(); ++n) rows.push_back({double(n), dist.probs[n]});
    write_csv(c.file("prepare_distribution.csv"), h, {"n", "p"}, rows);
    note(c.file("prepare_state.json"));
    note(c.file("prepare_distribution.csv"));
    std::printf("<n> = %.6f  dn = %.6f\n", dist.mean, dist.std);
    return 0;
}

struct FringeArgs {
    std::optional<int> n, samples, grid;
    std::optional<std::vector<double>> areas;
    std::optional<std::string> phases, mode, kind, model;
    std::optional<double> w, t1, t2, eta;
    bool spectrum = false;
};

int cmd_fringe(const Globals& g, const FringeArgs& a) {
    Context c(g, "fringe");
    const int N = c.p.get<int>("N", a.n, 8);
    const auto areas = resolve_areas(c, a.areas, N, "half");
    const auto rmodel = resolve_model(c, a.eta);
    const std::string mode = c.p.get<std::string>("mode", a.mode, "two");
    const int grid = c.p.get<int>("grid", a.grid, kDefaultGrid);
    const int samples = c.p.get<int>("samples", a.samples, 1);
    const double w = c.p.get<double>("w", a.w, 1.0);
    const std::string model_name = c.p.get<std::string>("model", a.model, "w-mixture");
    const bool want_spectrum = c.p.get<bool>("spectrum", a.spectrum ? std::optional<bool>(true) : std::nullopt, false);
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");

    VerificationSpec spec;
    if (mode == "two") {
        spec = VerificationSpec::two_pulse(c.p.get<double>("t1", a.t1, kDefaultVerificationArea),
                                           c.p.get<double>("t2", a.t2, kDefaultVerificationArea), grid);
    } else if (mode == "single") {
        spec = VerificationSpec::single_pulse(c.p.get<double>("t1", a.t1, kDefaultVerificationArea), grid,
                                              pulse_kind_from_string(c.p.get<std::string>("kind", a.kind, "RSB")));
    } else {
        throw Error(ErrorKind::InvalidArgument, "mode must be two or single");
    }
    spec.rabi_model = rmodel;
    spec.validate();
    const auto noise = DecoherenceModel::make(decoherence_kind_from_string(model_name), w);
    const bool noisy = !(noise.kind == DecoherenceModel::Kind::WMixture && w == 1.0);

    const auto phases = resolve_phases(c, a.phases, N, 0);
    const JointState psi = prepare(build_sequence(areas, phases, rmodel), c.n_max);
    const FringeSurface surf = noisy ? scan_fringe(apply_model(psi, noise), spec) : scan_fringe(psi, spec);

    // extraction first: an under-sampled request fails before anything is written
    std::optional<CoherenceSpectrum> spectrum;
    if (want_spectrum) spectrum = fourier_spectrum(surf);

    const auto h = c.header();
    std::vector<std::vector<double>> rows;
    if (mode == "two") {
        for (std::size_t i = 0; i < surf.grid1.size(); ++i)
            for (std::size_t j = 0; j < surf.grid2.size(); ++j) rows.push_back({surf.grid1[i], surf.grid2[j], surf.pg(i, j)});
        write_csv(c.file("fringe.csv"), h, {"phi1", "phi2", "pg"}, rows);
    } else {
        for (std::size_t i = 0; i < surf.grid1.size(); ++i) rows.push_back({surf.grid1[i], surf.pg(i, 0)});
        write_csv(c.file("fringe.csv"), h, {"phi1", "pg"}, rows);
    }
    note(c.file("fringe.csv"));

    json metrics = {{"realization", {{"contrast", surf.contrast}, {"visibility", surf.visibility}}}};
    if (mode == "two") {
        metrics["realization"]["sum_axis"] = {{"contrast", surf.sum_axis.mean_contrast},
                                              {"visibility", surf.sum_axis.mean_visibility}};
        metrics["realization"]["diff_axis"] = {{"contrast", surf.diff_axis.mean_contrast},
                                               {"visibility", surf.diff_axis.mean_visibility}};
    }
    if (samples > 1) {
        PrepConfig prep{N, areas, c.n_max, rmodel};
        const auto m = averaged_metrics(prep, noisy ? std::optional(noise) : std::nullopt, spec, samples,
                                        derive_seed(c.seed, 1));
        metrics["averaged"] = {{"samples", m.samples}, {"total", metric_json(m.total)}};
        if (mode == "two") {
            metrics["averaged"]["sum_axis"] = metric_json(m.sum_axis);
            metrics["averaged"]["diff_axis"] = metric_json(m.diff_axis);
        }
        std::printf("averaged over %d: C = %.4f V = %.4f", m.samples, m.total.contrast, m.total.visibility);
        if (mode == "two")
            std::printf("  sum-axis V = %.4f  diff-axis V = %.4f", m.sum_axis.visibility, m.diff_axis.visibility);
        std::printf("\n");
    } else {
        std::printf("C = %.4f V = %.4f\n", surf.contrast, surf.visibility);
    }
    write_json(c.file("fringe_metrics.json"), h, metrics);
    note(c.file("fringe_metrics.json"));

    if (spectrum) {
        json s = spectrum_json(*spectrum);
        if (mode == "two") s["predicted_max"] = predicted_max(*spectrum);
        write_json(c.file("fringe_spectrum.json"), h, s);
        note(c.file("fringe_spectrum.json"));
    }
    return 0;
}

struct ValidateArgs {
    bool quick = false;
    bool inject_e2 = false;
};

int cmd_validate(const Globals& g, const ValidateArgs& a) {
    Context c(g, "validate");
    ValidationOptions opt;
    opt.quick = c.p.get<bool>("quick", a.quick ? std::optional<bool>(true) : std::nullopt, false);
    opt.seed = c.seed;
    if (g.n_max || c.p.has("n_max")) opt.n_max = c.n_max;
    opt.flip_e2 = a.inject_e2;
    if (opt.flip_e2) c.p.resolved["inject_e2_flip"] = true;
    const auto results = run_validation(opt);
    bool ok = true;
    json checks = json::array();
    for (const auto& r : results) {
        ok = ok && r.pass;
        std::printf("%s %-20s %.3e (tol %.0e)%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value, r.tolerance,
                    r.detail.empty() ? "" : "  ", r.detail.c_str());
        checks.push_back({{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}, {"pass", r.pass}});
    }
    write_json(c.file("validate.json"), c.header(), {{"checks", checks}, {"pass", ok}});
    note(c.file("validate.json"));
    return ok ? 0 : 1;
}

struct FitArgs {
    std::optional<std::string> csv, phases;
    std::optional<int> n, shots, n_fit_max, resamples, grid;
    std::optional<double> w, eta;
};

json phonon_json(const PhononFit& f) {
    return {{"probs", f.probs}, {"sigmas", f.uncertainties}, {"residual", f.residual}, {"flags", f.flags}};
}

int cmd_fit(const Globals& g, const FitArgs& a) {
    Context c(g, "fit");
    FlopModel fm;
    const double eta = c.p.get<double>("eta", a.eta, fm.rabi_model.eta);
    fm.rabi_model = eta > 0 ? RabiModel::beyond_ld(eta) : RabiModel::lamb_dicke();
    const int n_fit_max = c.p.get<int>("n_fit_max", a.n_fit_max, kDefaultFitNMax);
    const int resamples = c.p.get<int>("resamples", a.resamples, kDefaultResamples);
    json report = json::object();

    const std::string csv = c.p.get<std::string>("csv", a.csv, "");
    if (!csv.empty()) {
        const auto rec = read_flop_csv(csv);
        report["phonon_fit"] = phonon_json(fit_phonon_distribution(rec, fm, n_fit_max, resamples, c.seed));
    } else {
        // round trip: simulate a flop record and a single-pulse fringe, then fit both
        const int N = c.p.get<int>("N", a.n, 1);
        const double w = c.p.get<double>("w", a.w, 0.9);
        const int shots = c.p.get<int>("shots", a.shots, 100);
        const auto phases = resolve_phases(c, a.phases, N, 0);
        const JointState psi = prepare(build_half_transfer_sequence(N, phases), c.n_max);
        const auto dist = fock_distribution(psi);
        const auto rec = simulate_rabi_flop(dist, fm, default_flop_times(), shots, derive_seed(c.seed, 2));
        write_flop_csv(c.file("fit_flop.csv"), c.header(), rec);
        note(c.file("fit_flop.csv"));
        report["phonon_fit"] = phonon_json(fit_phonon_distribution(rec, fm, n_fit_max, resamples, c.seed));
        report["true_distribution"] = dist_json(dist);

        WScenario s;
        s.N = N;
        s.w = w;
        s.shots = shots;
        s.grid = c.p.get<int>("grid", a.grid, 64);
        s.seed = derive_seed(c.seed, 3);
        s.n_max = c.n_max;
        const auto e = run_w_scenario(s);
        report["w_estimate"] = {{"w_true", w},
                                {"w_hat", e.w_hat},
                                {"w_raw", e.w_raw},
                                {"area_hat", e.area_hat},
                                {"measured_dc", e.measured_dc},
                                {"measured_amplitude", e.measured_amplitude},
                                {"ideal_amplitude", e.ideal_amplitude},
                                {"flags", e.flags}};
        std::printf("w_hat = %.4f (true %.4f)\n", e.w_hat, w);
    }
    write_json(c.file("fit_report.json"), c.header(), report);
    note(c.file("fit_report.json"));
    return 0;
}

struct FlopArgs {
    std::optional<int> n, shots, points;
    std::optional<std::string> phases;
    std::optional<double> t_max, eta;
};

int cmd_rabi_flop(const Globals& g, const FlopArgs& a) {
    Context c(g, "rabi-flop");
    const int N = c.p.get<int>("N", a.n, 8);
    const int shots = c.p.get<int>("shots", a.shots, 100);
    const int points = c.p.get<int>("points", a.points, 200);
    const double t_max = c.p.get<double>("t_max", a.t_max, 4.0);
    FlopModel fm;
    const double eta = c.p.get<double>("eta", a.eta, fm.rabi_model.eta);
    fm.rabi_model = eta > 0 ? RabiModel::beyond_ld(eta) : RabiModel::lamb_dicke();
    const auto phases = resolve_phases(c, a.phases, N, 0);
    const auto dist = fock_distribution(prepare(build_half_transfer_sequence(N, phases), c.n_max));
    const auto rec = simulate_rabi_flop(dist, fm, default_flop_times(points, t_max), shots, derive_seed(c.seed, 2));
    write_flop_csv(c.file("rabi_flop.csv"), c.header(), rec);
    note(c.file("rabi_flop.csv"));
    return 0;
}

struct SweepArgs {
    std::optional<std::string> method;
    std::optional<int> n, samples, grid, steps;
    std::optional<std::vector<double>> dphi;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
    Context c(g, "sweep-instability");
    const std::string method = c.p.get<std::string>("method", a.method, "sideband");
    InstabilityMethod m;
    if (method == "sideband") m = InstabilityMethod::Sideband;
    else if (method == "rabi") m = InstabilityMethod::RabiGate;
    else throw Error(ErrorKind::InvalidArgument, "method must be sideband or rabi");
    const int N = c.p.get<int>("N", a.n, 4);
    const int samples = c.p.get<int>("samples", a.samples, 32);
    InstabilityOptions opt;
    opt.grid = c.p.get<int>("grid", a.grid, opt.grid);
    opt.trotter_steps = c.p.get<int>("trotter_steps", a.steps, opt.trotter_steps);
    // a sideband sweep uses the global default cutoff; Rabi gates get their own larger default
    if (g.n_max || c.p.has("n_max") || m == InstabilityMethod::Sideband) opt.n_max = c.n_max;
    else c.p.resolved["n_max"] = 80;
    const auto dphi = c.p.get<std::vector<double>>("dphi", a.dphi, {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2});
    const auto rows = instability_sweep(m, N, dphi, samples, c.seed, opt);
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) {
        out.push_back({r.dphi, r.mean_contrast, r.mean_visibility, r.stderr_contrast, r.mean_phonons});
        std::printf("dphi %.3f  C %.4f  V %.4f\n", r.dphi, r.mean_contrast, r.mean_visibility);
    }
    write_csv(c.file("instability_" + method + ".csv"), c.header(),
              {"dphi", "mean_contrast", "mean_visibility", "stderr", "mean_phonons"}, out);
    note(c.file("instability_" + method + ".csv"));
    return 0;
}

struct CatArgs {
    std::optional<double> alpha, beta, w, phi, measure_w;
    std::optional<int> points;
};

int cmd_cat(const Globals& g, const CatArgs& a) {
    Context c(g, "cat-visibility");
    CatSpec s;
    s.alpha = c.p.get<double>("alpha", a.alpha, 1.0);
    s.beta = c.p.get<double>("beta", a.beta, s.alpha.real());
    s.weight = c.p.get<double>("w", a.w, 0.5);
    s.rel_phase = c.p.get<double>("phi", a.phi, 0.0);
    CatSpec m = s;
    m.weight = c.p.get<double>("measure_w", a.measure_w, 0.5);
    const int points = c.p.get<int>("points", a.points, 21);
    if (points < 2) throw Error(ErrorKind::InvalidArgument, "points must be >= 2");

    const auto r = cat_metrics(s, m);
    const auto t = cat_metrics_truncated(s, m);
    json body = {{"analytic", {{"a", r.a}, {"b", r.b}, {"C", r.C}, {"V", r.V}}},
                 {"truncated", {{"a", t.a}, {"b", t.b}, {"C", t.C}, {"V", t.V}}}};
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < points; ++i) {
        CatSpec si = s;
        si.weight = double(i) / (points - 1);
        CatSpec bal = m, swp = m, mat = m;
        bal.weight = 0.5;
        swp.weight = 1 - si.weight;
        mat.weight = si.weight;
        auto safe = [](const CatSpec& x, const CatSpec& y) {
            try {
                return cat_metrics(x, y);
            } catch (const Error&) {
                return CatMetrics{0, 0, 0, std::nan("")};
            }
        };
        const auto b = safe(si, bal), sw = safe(si, swp), mt = safe(si, mat);
        rows.push_back({si.weight, b.V, b.C, sw.V, sw.C, mt.V, mt.C});
    }
    write_json(c.file("cat.json"), c.header(), body);
    write_csv(c.file("cat_sweep.csv"), c.header(),
              {"w", "V_balanced", "C_balanced", "V_swapped", "C_swapped", "V_matched", "C_matched"}, rows);
    note(c.file("cat.json"));
    note(c.file("cat_sweep.csv"));
    std::printf("C = %.6f V = %.6f\n", r.C, r.V);
    return 0;
}

struct DetectArgs {
    std::optional<int> n, samples, budget, grid;
};

int cmd_detect(const Globals& g, const DetectArgs& a) {
    Context c(g, "optimize-detection");
    const int N = c.p.get<int>("N", a.n, 4);
    const int samples = c.p.get<int>("samples", a.samples, 32);
    const int budget = c.p.get<int>("budget", a.budget, 30);
    const int grid = c.p.get<int>("grid", a.grid, kDefaultGrid);
    const auto r = optimize_detection_areas(N, samples, c.seed, budget, grid, c.n_max);
    std::vector<std::string> cols = {"realization", "visibility", "baseline_visibility"};
    for (int j = 1; j <= N; ++j) cols.push_back("area_" + std::to_string(j));
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < samples; ++i) {
        std::vector<double> row = {double(i), r.visibility[i], r.baseline[i]};
        row.insert(row.end(), r.areas[i].begin(), r.areas[i].end());
        rows.push_back(row);
    }
    write_json(c.file("detection.json"), c.header(),
               {{"mean_visibility", r.mean_visibility},
                {"mean_contrast", r.mean_contrast},
                {"baseline_visibility", r.baseline_visibility},
                {"baseline_contrast", r.baseline_contrast}});
    write_csv(c.file("detection_areas.csv"), c.header(), cols, rows);
    note(c.file("detection.json"));
    note(c.file("detection_areas.csv"));
    std::printf("<V> = %.4f  <C> = %.4f  (baseline <V> = %.4f)\n", r.mean_visibility, r.mean_contrast,
                r.baseline_visibility);
    return 0;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidCutoff:
        case ErrorKind::InvalidPhases:
        case ErrorKind::ParseError:
        case ErrorKind::AliasingError:
        case ErrorKind::DimensionMismatch:
            return 2;
        default:
            return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parity-locked qubit-oscillator preparation and interferometry"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON config; flags override its values");
    app.add_option("--seed", g.seed, "base RNG seed");
    app.add_option("--n-max", g.n_max, "Fock cutoff")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads (0: hardware)")->check(CLI::NonNegativeNumber);

    std::function<int()> run;

    PrepareArgs pa;
    auto* prep = app.add_subcommand("prepare", "prepare a state; write it and its phonon distribution");
    prep->add_option("--n", pa.n, "number of preparation pulses");
    prep->add_option("--areas", pa.areas, "pulse areas")->delimiter(',');
    prep->add_option("--phases", pa.phases, "'random' or comma-separated phases");
    prep->add_option("--policy", pa.policy, "area policy: half or compensated");
    prep->add_option("--eta", pa.eta, "Lamb-Dicke parameter (beyond-LD couplings when > 0)");
    prep->callback([&] { run = [&] { return cmd_prepare(g, pa); }; });

    FringeArgs fa;
    auto* fr = app.add_subcommand("fringe", "scan verification phases; metrics and harmonic spectrum");
    fr->add_option("--n", fa.n, "number of preparation pulses");
    fr->add_option("--areas", fa.areas, "preparation areas")->delimiter(',');
    fr->add_option("--phases", fa.phases, "'random' or comma-separated phases");
    fr->add_option("--mode", fa.mode, "two or single");
    fr->add_option("--kind", fa.kind, "single-pulse kind: RSB or BSB");
    fr->add_option("--model", fa.model, "decoherence model");
    fr->add_option("--w", fa.w, "coherence factor");
    fr->add_option("--t1", fa.t1, "first verification area");
    fr->add_option("--t2", fa.t2, "second verification area");
    fr->add_option("--grid", fa.grid, "phase grid points per axis");
    fr->add_option("--samples", fa.samples, "random phase realizations to average");
    fr->add_option("--eta", fa.eta, "Lamb-Dicke parameter (beyond-LD couplings when > 0)");
    fr->add_flag("--spectrum", fa.spectrum, "extract Fourier harmonics");
    fr->callback([&] { run = [&] { return cmd_fringe(g, fa); }; });

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "run the identity and equivalence suite");
    val->add_flag("--quick", va.quick, "reduced draws");
    val->add_flag("--inject-e2-flip", va.inject_e2)->group("");
    val->callback([&] { run = [&] { return cmd_validate(g, va); }; });

    FitArgs fia;
    auto* fit = app.add_subcommand("fit", "fit a Rabi-flop record and estimate w");
    fit->add_option("--csv", fia.csv, "flop record (time_ms,pg,shots); omit for a simulated round trip");
    fit->add_option("--n", fia.n, "preparation pulses for the round trip");
    fit->add_option("--w", fia.w, "planted coherence factor");
    fit->add_option("--shots", fia.shots, "shots per point");
    fit->add_option("--phases", fia.phases, "'random' or comma-separated phases");
    fit->add_option("--grid", fia.grid, "readout fringe points");
    fit->add_option("--n-fit-max", fia.n_fit_max, "largest fitted Fock level");
    fit->add_option("--resamples", fia.resamples, "bootstrap replicas");
    fit->add_option("--eta", fia.eta, "Lamb-Dicke parameter of the flop model (0: Lamb-Dicke)");
    fit->callback([&] { run = [&] { return cmd_fit(g, fia); }; });

    FlopArgs fl;
    auto* flop = app.add_subcommand("rabi-flop", "simulate a blue-sideband Rabi-flop record");
    flop->add_option("--n", fl.n, "preparation pulses");
    flop->add_option("--shots", fl.shots, "shots per point (0: exact)");
    flop->add_option("--points", fl.points, "time points");
    flop->add_option("--t-max", fl.t_max, "last time in ms");
    flop->add_option("--phases", fl.phases, "'random' or comma-separated phases");
    flop->add_option("--eta", fl.eta, "Lamb-Dicke parameter of the flop model (0: Lamb-Dicke)");
    flop->callback([&] { run = [&] { return cmd_rabi_flop(g, fl); }; });

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep-instability", "max contrast versus phase instability");
    sw->add_option("--method", sa.method, "sideband or rabi");
    sw->add_option("--n", sa.n, "preparation pulses or gates");
    sw->add_option("--dphi", sa.dphi, "instability scales")->delimiter(',');
    sw->add_option("--samples", sa.samples, "instability draws");
    sw->add_option("--grid", sa.grid, "verification grid per axis");
    sw->add_option("--steps", sa.steps, "Trotter steps per Rabi gate");
    sw->callback([&] { run = [&] { return cmd_sweep(g, sa); }; });

    CatArgs ca;
    auto* cat = app.add_subcommand("cat-visibility", "cat-state contrast and visibility");
    cat->add_option("--alpha", ca.alpha, "amplitude on the e branch");
    cat->add_option("--beta", ca.beta, "amplitude on the g branch (default alpha)");
    cat->add_option("--w", ca.w, "state weight");
    cat->add_option("--phi", ca.phi, "relative phase");
    cat->add_option("--measure-w", ca.measure_w, "measurement weight");
    cat->add_option("--points", ca.points, "weights in the sweep");
    cat->callback([&] { run = [&] { return cmd_cat(g, ca); }; });

    DetectArgs da;
    auto* det = app.add_subcommand("optimize-detection", "optimize detection areas under random phases");
    det->add_option("--n", da.n, "preparation and detection length");
    det->add_option("--samples", da.samples, "phase realizations");
    det->add_option("--budget", da.budget, "golden-section iterations per coordinate");
    det->add_option("--grid", da.grid, "scan points of the first detection phase");
    det->callback([&] { run = [&] { return cmd_detect(g, da); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    set_default_threads(g.threads);
    try {
        return run();
    } catch (const CLI::RequiredError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
