#include "llsgm/config.hpp"

#include "llsgm/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace llsgm {

using json = nlohmann::ordered_json;

namespace {

template <typename E>
struct EnumName {
    E value;
    std::string_view name;
};

constexpr EnumName<ExperimentKind> experiment_names[] = {
    {ExperimentKind::convergence_time, "convergence-time"},
    {ExperimentKind::convergence_space, "convergence-space"},
    {ExperimentKind::stability_grid, "stability-grid"},
    {ExperimentKind::efficiency, "efficiency"},
    {ExperimentKind::blowup, "blowup"},
    {ExperimentKind::twopop_regimes, "twopop-regimes"},
    {ExperimentKind::compare_fdm, "compare-fdm"},
};
constexpr EnumName<ModelKind> model_names[] = {{ModelKind::onepop, "onepop"}, {ModelKind::twopop, "twopop"}};
constexpr EnumName<Method> method_names[] = {{Method::llsgm, "llsgm"}, {Method::fdm, "fdm"}};
constexpr EnumName<ReferenceKind> reference_names[] = {{ReferenceKind::fdm, "fdm"}, {ReferenceKind::self, "self"}};
constexpr EnumName<FdmFlux> flux_names[] = {{FdmFlux::upwind, "upwind"}, {FdmFlux::centered, "centered"}};
constexpr EnumName<DiffusionMode> diffusion_names[] = {{DiffusionMode::constant, "constant"},
                                                       {DiffusionMode::model, "model"}};
constexpr EnumName<RefractoryMode> refractory_names[] = {{RefractoryMode::pass_through, "pass-through"},
                                                         {RefractoryMode::exponential, "exponential"}};

template <typename E, std::size_t N>
std::string_view name_of(const EnumName<E> (&table)[N], E value) {
    for (const auto& entry : table) {
        if (entry.value == value) return entry.name;
    }
    return "unknown";
}

template <typename E, std::size_t N>
E value_of(const EnumName<E> (&table)[N], std::string_view name, const std::string& where) {
    for (const auto& entry : table) {
        if (entry.name == name) return entry.value;
    }
    std::string allowed;
    for (const auto& entry : table) allowed += (allowed.empty() ? "" : ", ") + std::string(entry.name);
    fail(ErrorCategory::configuration, where + ": unknown value '" + std::string(name) + "' (expected " + allowed + ")");
}

// Reads one JSON object, remembering which keys were consumed so leftovers can be reported.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) fail(ErrorCategory::configuration, where() + ": expected an object");
    }

    bool has(const char* key) const { return node_.contains(key); }

    template <typename T>
    void get(const char* key, T& out) {
        if (!node_.contains(key)) return;
        seen_.insert(key);
        try {
            out = node_.at(key).get<T>();
        } catch (const json::exception&) {
            fail(ErrorCategory::configuration, where(key) + ": wrong type");
        }
    }

    template <typename E, std::size_t N>
    void get_enum(const char* key, const EnumName<E> (&table)[N], E& out) {
        std::string name;
        if (!node_.contains(key)) return;
        get(key, name);
        out = value_of(table, name, where(key));
    }

    void get_pair(const char* key, std::array<double, 2>& out) {
        if (!node_.contains(key)) return;
        Section s = child(key);
        s.get("E", out[pop_e]);
        s.get("I", out[pop_i]);
        s.finish();
    }

    void get_table(const char* key, std::array<std::array<double, 2>, 2>& out) {
        if (!node_.contains(key)) return;
        Section s = child(key);
        s.get_pair("E", out[pop_e]);
        s.get_pair("I", out[pop_i]);
        s.finish();
    }

    Section child(const char* key) {
        seen_.insert(key);
        return Section(node_.at(key), where(key));
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) fail(ErrorCategory::configuration, where(key.c_str()) + ": unknown key");
        }
    }

private:
    std::string where(const char* key = nullptr) const {
        if (!key) return path_.empty() ? "config" : path_;
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

json pair_json(const std::array<double, 2>& p) { return json{{"E", p[pop_e]}, {"I", p[pop_i]}}; }

json table_json(const std::array<std::array<double, 2>, 2>& t) {
    return json{{"E", pair_json(t[pop_e])}, {"I", pair_json(t[pop_i])}};
}

json gaussian_json(const GaussianSpec& g) { return json{{"v0", g.v0}, {"sigma0_sq", g.sigma0_sq}}; }

void read_gaussian(Section& parent, const char* key, GaussianSpec& g) {
    if (!parent.has(key)) return;
    Section s = parent.child(key);
    s.get("v0", g.v0);
    s.get("sigma0_sq", g.sigma0_sq);
    s.finish();
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    j["experiment"] = to_string(c.kind);
    j["model"] = to_string(c.model);
    j["method"] = to_string(c.method);
    j["domain"] = {{"v_reset", c.domain.v_reset}, {"v_fire", c.domain.v_fire}, {"beta", c.domain.beta}};
    j["onepop"] = {{"a0", c.onepop.a0}, {"a1", c.onepop.a1}, {"b", c.onepop.b}};
    const TwoPopParams& t = c.twopop;
    j["twopop"] = {{"b", table_json(t.b)},
                   {"d", table_json(t.d)},
                   {"delay", table_json(t.delay)},
                   {"nu_ext", t.nu_ext},
                   {"tau", pair_json(t.tau)},
                   {"diffusion", name_of(diffusion_names, t.diffusion_mode)},
                   {"diffusion_constant", t.diffusion_constant},
                   {"refractory", name_of(refractory_names, t.refractory_mode)}};
    j["initial"] = {{"E", gaussian_json(c.initial.e)},
                    {"I", gaussian_json(c.initial.i)},
                    {"refractory", pair_json(c.initial.refractory)}};
    const NumericsSpec& n = c.numerics;
    j["numerics"] = {{"M", n.M},
                     {"dt", n.dt},
                     {"T", n.T},
                     {"n_q", n.n_q},
                     {"snapshot_times", n.snapshot_times},
                     {"blowup_threshold", n.blowup_threshold},
                     {"dt_ladder", n.dt_ladder},
                     {"M_ladder", n.M_ladder}};
    const ReferenceSpec& r = c.reference;
    j["reference"] = {{"kind", name_of(reference_names, r.kind)},
                      {"h", r.h},
                      {"v_min", r.v_min},
                      {"flux", name_of(flux_names, r.flux)},
                      {"M", r.M},
                      {"dt", r.dt}};
    const FdmSpec& f = c.fdm;
    j["fdm"] = {{"h", f.h},
                {"v_min", f.v_min},
                {"flux", name_of(flux_names, f.flux)},
                {"cfl_fraction", f.cfl_fraction},
                {"rate_bound", f.rate_bound},
                {"h_ladder", f.h_ladder},
                {"reference_h", f.reference_h}};
    const RegimeRules& g = c.regimes;
    j["regimes"] = {{"warmup_fraction", g.warmup_fraction},
                    {"tail_fraction", g.tail_fraction},
                    {"steady_tolerance", g.steady_tolerance},
                    {"spacing_tolerance", g.spacing_tolerance},
                    {"min_amplitude", g.min_amplitude},
                    {"min_peaks", g.min_peaks},
                    {"peak_window", g.peak_window},
                    {"sweep_bEE", c.sweep_bEE}};
    const TimingSpec& m = c.timing;
    j["timing"] = {{"repetitions", m.repetitions},
                   {"target_error", m.target_error},
                   {"twopop", m.twopop},
                   {"twopop_M", m.twopop_M},
                   {"twopop_dt", m.twopop_dt},
                   {"twopop_h", m.twopop_h},
                   {"twopop_rate_bound", m.twopop_rate_bound},
                   {"twopop_initial", {{"E", gaussian_json(m.twopop_initial[pop_e])},
                                       {"I", gaussian_json(m.twopop_initial[pop_i])}}}};
    j["stability_threshold"] = c.stability_threshold;
    j["output_directory"] = c.output_directory;
    return j;
}

ExperimentConfig from_json(const json& j) {
    ExperimentConfig c;
    Section root(j, "");
    if (!root.has("schema_version")) fail(ErrorCategory::configuration, "schema_version: missing");
    root.get("schema_version", c.schema_version);
    if (c.schema_version != config_schema_version) {
        fail(ErrorCategory::configuration, "schema_version: unsupported version " + std::to_string(c.schema_version));
    }
    if (!root.has("experiment")) fail(ErrorCategory::configuration, "experiment: missing");
    root.get_enum("experiment", experiment_names, c.kind);
    root.get("name", c.name);
    root.get_enum("model", model_names, c.model);
    root.get_enum("method", method_names, c.method);

    if (root.has("domain")) {
        Section s = root.child("domain");
        s.get("v_reset", c.domain.v_reset);
        s.get("v_fire", c.domain.v_fire);
        s.get("beta", c.domain.beta);
        s.finish();
    }
    if (root.has("onepop")) {
        Section s = root.child("onepop");
        s.get("a0", c.onepop.a0);
        s.get("a1", c.onepop.a1);
        s.get("b", c.onepop.b);
        s.finish();
    }
    if (root.has("twopop")) {
        Section s = root.child("twopop");
        TwoPopParams& t = c.twopop;
        s.get_table("b", t.b);
        s.get_table("d", t.d);
        s.get_table("delay", t.delay);
        s.get("nu_ext", t.nu_ext);
        s.get_pair("tau", t.tau);
        s.get_enum("diffusion", diffusion_names, t.diffusion_mode);
        s.get("diffusion_constant", t.diffusion_constant);
        s.get_enum("refractory", refractory_names, t.refractory_mode);
        s.finish();
    }
    if (root.has("initial")) {
        Section s = root.child("initial");
        read_gaussian(s, "E", c.initial.e);
        read_gaussian(s, "I", c.initial.i);
        s.get_pair("refractory", c.initial.refractory);
        s.finish();
    }
    if (root.has("numerics")) {
        Section s = root.child("numerics");
        NumericsSpec& n = c.numerics;
        s.get("M", n.M);
        s.get("dt", n.dt);
        s.get("T", n.T);
        s.get("n_q", n.n_q);
        s.get("snapshot_times", n.snapshot_times);
        s.get("blowup_threshold", n.blowup_threshold);
        s.get("dt_ladder", n.dt_ladder);
        s.get("M_ladder", n.M_ladder);
        s.finish();
    }
    if (root.has("reference")) {
        Section s = root.child("reference");
        ReferenceSpec& r = c.reference;
        s.get_enum("kind", reference_names, r.kind);
        s.get("h", r.h);
        s.get("v_min", r.v_min);
        s.get_enum("flux", flux_names, r.flux);
        s.get("M", r.M);
        s.get("dt", r.dt);
        s.finish();
    }
    if (root.has("fdm")) {
        Section s = root.child("fdm");
        FdmSpec& f = c.fdm;
        s.get("h", f.h);
        s.get("v_min", f.v_min);
        s.get_enum("flux", flux_names, f.flux);
        s.get("cfl_fraction", f.cfl_fraction);
        s.get("rate_bound", f.rate_bound);
        s.get("h_ladder", f.h_ladder);
        s.get("reference_h", f.reference_h);
        s.finish();
    }
    if (root.has("regimes")) {
        Section s = root.child("regimes");
        RegimeRules& g = c.regimes;
        s.get("warmup_fraction", g.warmup_fraction);
        s.get("tail_fraction", g.tail_fraction);
        s.get("steady_tolerance", g.steady_tolerance);
        s.get("spacing_tolerance", g.spacing_tolerance);
        s.get("min_amplitude", g.min_amplitude);
        s.get("min_peaks", g.min_peaks);
        s.get("peak_window", g.peak_window);
        s.get("sweep_bEE", c.sweep_bEE);
        s.finish();
    }
    if (root.has("timing")) {
        Section s = root.child("timing");
        TimingSpec& m = c.timing;
        s.get("repetitions", m.repetitions);
        s.get("target_error", m.target_error);
        s.get("twopop", m.twopop);
        s.get("twopop_M", m.twopop_M);
        s.get("twopop_dt", m.twopop_dt);
        s.get("twopop_h", m.twopop_h);
        s.get("twopop_rate_bound", m.twopop_rate_bound);
        if (s.has("twopop_initial")) {
            Section ic = s.child("twopop_initial");
            read_gaussian(ic, "E", m.twopop_initial[pop_e]);
            read_gaussian(ic, "I", m.twopop_initial[pop_i]);
            ic.finish();
        }
        s.finish();
    }
    root.get("stability_threshold", c.stability_threshold);
    root.get("output_directory", c.output_directory);
    root.finish();
    return c;
}

void require(bool ok, const std::string& message) {
    if (!ok) fail(ErrorCategory::configuration, message);
}

void check_step(double dt, const ExperimentConfig& c, const char* what) {
    require(dt > 0.0, std::string(what) + " must be positive");
    c.run_config(dt).validate();
    if (c.model == ModelKind::twopop) c.twopop.validate(dt);
}

void check_fdm_grid(const Domain& domain, double v_min, double h, const char* what) {
    try {
        FdmGrid::make(domain, v_min, h);
    } catch (const Error& e) {
        fail(ErrorCategory::configuration, std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept { return name_of(experiment_names, kind); }
std::string_view to_string(ModelKind kind) noexcept { return name_of(model_names, kind); }
std::string_view to_string(Method method) noexcept { return name_of(method_names, method); }

ExperimentKind parse_experiment_kind(std::string_view name) {
    return value_of(experiment_names, name, "experiment");
}

RunConfig ExperimentConfig::run_config(double dt) const {
    RunConfig rc;
    rc.dt = dt;
    rc.final_time = numerics.T;
    rc.snapshot_times = numerics.snapshot_times;
    rc.blowup_threshold = numerics.blowup_threshold;
    return rc;
}

void ExperimentConfig::validate() const {
    require(schema_version == config_schema_version, "unsupported schema_version");
    domain.validate();
    onepop.validate();
    regimes.validate();
    require(numerics.M >= 1, "numerics.M must be at least 1");
    require(numerics.n_q >= 0, "numerics.n_q must be nonnegative");
    require(initial.e.sigma0_sq > 0.0 && initial.i.sigma0_sq > 0.0, "initial: sigma0_sq must be positive");
    require(timing.repetitions >= 1, "timing.repetitions must be at least 1");
    require(fdm.cfl_fraction > 0.0 && fdm.cfl_fraction <= 1.0, "fdm.cfl_fraction must lie in (0, 1]");
    require(fdm.rate_bound >= 0.0, "fdm.rate_bound must be nonnegative");
    check_step(numerics.dt, *this, "numerics.dt");

    const bool needs_reference = kind == ExperimentKind::convergence_time ||
                                 kind == ExperimentKind::convergence_space ||
                                 kind == ExperimentKind::stability_grid;
    if (needs_reference) {
        if (reference.kind == ReferenceKind::fdm) {
            check_fdm_grid(domain, reference.v_min, reference.h, "reference grid");
        } else {
            require(reference.M >= 1, "reference.M must be at least 1");
            check_step(reference.dt, *this, "reference.dt");
        }
    }

    switch (kind) {
        case ExperimentKind::convergence_time:
            require(!numerics.dt_ladder.empty(), "convergence-time needs numerics.dt_ladder");
            for (double dt : numerics.dt_ladder) check_step(dt, *this, "numerics.dt_ladder entry");
            break;
        case ExperimentKind::convergence_space:
            require(!numerics.M_ladder.empty(), "convergence-space needs numerics.M_ladder");
            break;
        case ExperimentKind::stability_grid:
            require(model == ModelKind::onepop, "stability-grid is a one-population experiment");
            require(!numerics.M_ladder.empty() && !numerics.dt_ladder.empty(),
                    "stability-grid needs numerics.M_ladder and numerics.dt_ladder");
            for (double dt : numerics.dt_ladder) check_step(dt, *this, "numerics.dt_ladder entry");
            require(stability_threshold > 0.0, "stability_threshold must be positive");
            break;
        case ExperimentKind::efficiency:
            require(model == ModelKind::onepop, "efficiency is a one-population experiment");
            require(!numerics.M_ladder.empty() && !fdm.h_ladder.empty(),
                    "efficiency needs numerics.M_ladder and fdm.h_ladder");
            require(reference.M >= 1, "reference.M must be at least 1");
            for (double h : fdm.h_ladder) check_fdm_grid(domain, fdm.v_min, h, "fdm.h_ladder entry");
            check_fdm_grid(domain, fdm.v_min, fdm.reference_h, "fdm.reference_h");
            require(timing.target_error > 0.0, "timing.target_error must be positive");
            if (timing.twopop) {
                require(timing.twopop_M >= 1, "timing.twopop_M must be at least 1");
                check_fdm_grid(domain, fdm.v_min, timing.twopop_h, "timing.twopop_h");
                require(timing.twopop_dt > 0.0, "timing.twopop_dt must be positive");
                step_count(numerics.T, timing.twopop_dt);
                twopop.validate(timing.twopop_dt);
            }
            break;
        case ExperimentKind::blowup:
            break;
        case ExperimentKind::twopop_regimes:
            require(model == ModelKind::twopop, "twopop-regimes needs model twopop");
            require(!sweep_bEE.empty(), "twopop-regimes needs regimes.sweep_bEE");
            for (double b : sweep_bEE) require(b >= 0.0, "regimes.sweep_bEE entries must be nonnegative");
            break;
        case ExperimentKind::compare_fdm:
            require(model == ModelKind::onepop, "compare-fdm is a one-population experiment");
            break;
    }
    if (method == Method::fdm || kind == ExperimentKind::compare_fdm) {
        check_fdm_grid(domain, fdm.v_min, fdm.h, "fdm grid");
    }
}

ExperimentConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorCategory::configuration, std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c = from_json(j);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::io, "cannot open config " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const ExperimentConfig& config, int indent) {
    return indent < 0 ? to_json(config).dump() : to_json(config).dump(indent) + "\n";
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return to_json(a) == to_json(b); }

namespace {

ExperimentConfig base(std::string name, ExperimentKind kind) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.kind = kind;
    c.output_directory = "out/" + c.name;
    return c;
}

void accuracy_onepop(ExperimentConfig& c) {
    c.onepop = {1.0, 0.1, 0.0};
    c.initial.e = {-1.0, 0.5};
    c.numerics.T = 0.2;
    c.numerics.M = 16;
}

void accuracy_twopop(ExperimentConfig& c) {
    c.model = ModelKind::twopop;
    TwoPopParams& t = c.twopop;
    t.b = {{{0.5, 0.75}, {0.5, 0.25}}};
    t.diffusion_mode = DiffusionMode::constant;
    t.diffusion_constant = 1.0;
    t.refractory_mode = RefractoryMode::pass_through;
    c.initial.e = {-1.0, 0.5};
    c.initial.i = {0.0, 0.25};
    c.numerics.T = 0.2;
    c.numerics.M = 16;
}

void periodic_twopop(ExperimentConfig& c) {
    c.model = ModelKind::twopop;
    TwoPopParams& t = c.twopop;
    t.b = {{{3.5, 0.75}, {4.0, 3.0}}};
    t.delay = {{{0.1, 0.1}, {0.1, 0.1}}};
    t.nu_ext = 20.0;
    t.tau = {0.025, 0.025};
    t.diffusion_mode = DiffusionMode::constant;
    t.diffusion_constant = 1.0;
    t.refractory_mode = RefractoryMode::exponential;
    c.initial.e = {-1.0, 0.5};
    c.initial.i = {-1.0, 0.5};
}

const std::vector<double> time_ladder{0.04, 0.02, 0.01, 0.005};

}  // namespace

std::vector<std::string> preset_names() {
    return {"convergence-time-onepop", "convergence-time-twopop", "convergence-space-onepop",
            "convergence-space-twopop", "stability-grid", "efficiency", "blowup-onepop", "blowup-twopop",
            "blowup-control", "twopop-regimes", "compare-fdm"};
}

ExperimentConfig preset_config(std::string_view preset) {
    const std::string name(preset);
    ExperimentConfig c;
    if (name == "convergence-time-onepop") {
        c = base(name, ExperimentKind::convergence_time);
        accuracy_onepop(c);
        c.numerics.dt_ladder = time_ladder;
        c.numerics.dt = 0.005;
    } else if (name == "convergence-time-twopop") {
        c = base(name, ExperimentKind::convergence_time);
        accuracy_twopop(c);
        c.numerics.dt_ladder = time_ladder;
        c.numerics.dt = 0.005;
    } else if (name == "convergence-space-onepop") {
        c = base(name, ExperimentKind::convergence_space);
        accuracy_onepop(c);
        c.numerics.M_ladder = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    } else if (name == "convergence-space-twopop") {
        c = base(name, ExperimentKind::convergence_space);
        accuracy_twopop(c);
        c.numerics.M_ladder = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    } else if (name == "stability-grid") {
        c = base(name, ExperimentKind::stability_grid);
        accuracy_onepop(c);
        c.numerics.M_ladder = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
        // exact halvings, so every step divides T
        c.numerics.dt_ladder = {0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
        c.numerics.dt = 0.003125;
    } else if (name == "efficiency") {
        c = base(name, ExperimentKind::efficiency);
        periodic_twopop(c);
        c.timing.twopop = true;
        c.timing.twopop_initial = {c.initial.e, c.initial.i};
        c.model = ModelKind::onepop;
        c.onepop = {1.0, 0.0, 0.5};
        c.initial.e = {0.0, 0.25};
        c.numerics.T = 0.5;
        c.numerics.M_ladder = {4, 8, 12, 16, 20};
        c.reference.kind = ReferenceKind::self;
        c.reference.M = 30;
        c.reference.dt = 1e-3;
        c.fdm.h_ladder = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
        c.fdm.reference_h = 1.0 / 128;
    } else if (name == "blowup-onepop") {
        c = base(name, ExperimentKind::blowup);
        c.onepop = {1.0, 0.0, 3.0};
        c.initial.e = {-1.0, 0.5};
        c.numerics.T = 4.0;
        c.numerics.snapshot_times = {2.95, 3.15, 3.35};
        c.numerics.blowup_threshold = 5.0;
    } else if (name == "blowup-twopop") {
        c = base(name, ExperimentKind::blowup);
        c.model = ModelKind::twopop;
        c.twopop.b = {{{3.0, 0.75}, {0.5, 0.25}}};
        c.twopop.diffusion_constant = 1.0;
        c.initial.e = {-1.0, 0.5};
        c.initial.i = {-1.0, 0.5};
        c.numerics.T = 5.0;
        c.numerics.blowup_threshold = 5.0;
    } else if (name == "blowup-control") {
        c = base(name, ExperimentKind::blowup);
        c.onepop = {1.0, 0.0, 0.0};
        c.initial.e = {-1.0, 0.5};
        c.numerics.T = 5.0;
        c.numerics.blowup_threshold = 5.0;
    } else if (name == "twopop-regimes") {
        c = base(name, ExperimentKind::twopop_regimes);
        periodic_twopop(c);
        c.numerics.dt = 1e-4;
        c.numerics.T = 10.0;
        c.numerics.blowup_threshold = 50.0;
        c.sweep_bEE = {3.5, 3.82, 4.0};
    } else if (name == "compare-fdm") {
        c = base(name, ExperimentKind::compare_fdm);
        c.onepop = {1.0, 0.0, 0.0};
        c.initial.e = {-1.0, 0.5};
        c.numerics.T = 0.2;
        c.numerics.dt = 1e-4;
        c.fdm.h = 1.0 / 256;
        c.fdm.v_min = -8.0;
        c.fdm.flux = FdmFlux::centered;
    } else {
        fail(ErrorCategory::configuration, "unknown preset '" + name + "'");
    }
    c.validate();
    return c;
}

}  // namespace llsgm
