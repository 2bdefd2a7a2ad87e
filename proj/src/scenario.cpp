#include "ringform/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "ringform/errors.hpp"
#include "ringform/plot.hpp"

namespace ringform {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_winding(std::size_t n, int winding) {
    if (winding < 1 || 2 * static_cast<std::size_t>(winding) >= n)
        throw ScenarioError("infeasible winding " + std::to_string(winding) + " for n = " + std::to_string(n) +
                            ": need 1 <= winding < n/2");
    if (std::gcd(static_cast<std::size_t>(winding), n) != 1)
        throw ScenarioError("infeasible winding " + std::to_string(winding) + ": not coprime with n = " +
                            std::to_string(n));
}

void check_target_deg(double deg, std::size_t i) {
    if (!std::isfinite(deg)) throw ScenarioError("target_angles_deg[" + std::to_string(i) + "] is not finite");
    if (std::fabs(std::sin(deg_to_rad(deg))) < 1e-12)
        throw ScenarioError("target_angles_deg[" + std::to_string(i) + "] = " + fmt17(deg) +
                            " is degenerate: target angles must differ from 0 and 180 deg");
}

std::vector<Vec2> regular_positions(std::size_t n, const RegularGenerator& g) {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec2> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = -kTwoPi * static_cast<double>(g.winding) * static_cast<double>(i) / static_cast<double>(n);
        // Both draws happen for every agent so one seed gives the same offset
        // directions at every perturbation scale.
        const double r = g.perturb * std::sqrt(unit(rng));
        const double phi = kTwoPi * unit(rng);
        z[i] = Vec2{g.radius * std::cos(ang) + r * std::cos(phi), g.radius * std::sin(ang) + r * std::sin(phi)};
    }
    return z;
}

std::vector<Vec2> collinear_decagon_positions(const CollinearDecagonGenerator& g) {
    std::vector<Vec2> v(10);
    for (std::size_t k = 0; k < 10; ++k) {
        const double ang = -kTwoPi * static_cast<double>(k) / 10.0;
        v[k] = Vec2{std::cos(ang), std::sin(ang)};
    }
    const auto lerp = [](Vec2 p, Vec2 q, double t) { return p + t * (q - p); };
    std::vector<Vec2> z(10);
    z[0] = v[0];
    z[3] = v[3];
    z[1] = lerp(v[0], v[3], 1.0 / 3.0);
    z[2] = lerp(v[0], v[3], 2.0 / 3.0);
    z[5] = v[5];
    z[8] = v[8];
    z[6] = lerp(v[5], v[8], 1.0 / 3.0);
    z[7] = lerp(v[5], v[8], 2.0 / 3.0);
    z[9] = lerp(v[8], v[0], 0.5);
    const Vec2 m = lerp(v[3], v[5], 0.5);
    z[4] = m - (g.inset / norm(m)) * m;
    return z;
}

// Field access with path context for error messages.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ScenarioError(where() + "expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
                throw ScenarioError(where(it.key()) + "unknown field");
        }
    }
    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& at(const char* key) const {
        if (!j_.contains(key)) throw ScenarioError(where(key) + "missing required field");
        return j_.at(key);
    }

    double number(const char* key) const {
        const json& v = at(key);
        if (!v.is_number()) throw ScenarioError(where(key) + "expected a number");
        return v.get<double>();
    }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t unsigned_int(const char* key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ScenarioError(where(key) + "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::int64_t integer(const char* key) const {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ScenarioError(where(key) + "expected an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ScenarioError(where(key) + "expected true or false");
        return v.get<bool>();
    }

    std::string string(const char* key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw ScenarioError(where(key) + "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const char* key) const {
        const json& v = at(key);
        if (!v.is_array()) throw ScenarioError(where(key) + "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                throw ScenarioError(where(key) + "element " + std::to_string(i) + " is not a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    Reader child(const char* key) const { return Reader(at(key), path_.empty() ? key : path_ + "." + key); }
    std::string where(const std::string& key = {}) const {
        std::string p = path_;
        if (!key.empty()) p = p.empty() ? key : p + "." + key;
        return p.empty() ? std::string() : p + ": ";
    }

private:
    const json& j_;
    std::string path_;
};

SimParams read_sim(const Reader& r) {
    r.allow({"a", "dt", "t_max", "eps_tol", "collision_dist", "sample_stride", "dwell_samples", "stop_on_converge",
             "integrator", "terminal_band"});
    SimParams p;
    p.a = r.number("a", p.a);
    p.dt = r.number("dt", p.dt);
    p.t_max = r.number("t_max", p.t_max);
    p.eps_tol = r.number("eps_tol", p.eps_tol);
    if (r.has("collision_dist")) p.collision_dist = r.number("collision_dist");
    p.sample_stride = r.unsigned_int("sample_stride", p.sample_stride);
    p.dwell_samples = r.unsigned_int("dwell_samples", p.dwell_samples);
    p.stop_on_converge = r.boolean("stop_on_converge", p.stop_on_converge);
    const std::string integ = r.string("integrator", std::string(to_string(p.integrator)));
    try {
        p.integrator = integrator_from_string(integ);
    } catch (const Error& e) {
        throw ScenarioError(r.where("integrator") + e.what());
    }
    p.terminal_band = r.number("terminal_band", p.terminal_band);
    try {
        p.validate();
    } catch (const Error& e) {
        throw ScenarioError(r.where() + e.what());
    }
    return p;
}

InitialSpec read_initial(const Reader& r) {
    if (r.has("positions")) {
        r.allow({"positions"});
        const json& arr = r.at("positions");
        if (!arr.is_array()) throw ScenarioError(r.where("positions") + "expected an array of [x, y] pairs");
        std::vector<Vec2> z;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& p = arr[i];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw ScenarioError(r.where("positions") + "element " + std::to_string(i) +
                                    " is not an [x, y] pair");
            z.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return z;
    }
    const std::string kind = r.string("generator", "");
    if (kind == "regular") {
        r.allow({"generator", "winding", "radius", "perturb", "seed"});
        RegularGenerator g;
        g.winding = static_cast<int>(r.integer("winding"));
        g.radius = r.number("radius", g.radius);
        g.perturb = r.number("perturb", g.perturb);
        g.seed = r.unsigned_int("seed", g.seed);
        if (!(g.radius > 0.0)) throw ScenarioError(r.where("radius") + "must be positive");
        if (!(g.perturb >= 0.0)) throw ScenarioError(r.where("perturb") + "must be nonnegative");
        return g;
    }
    if (kind == "collinear_decagon") {
        r.allow({"generator", "inset"});
        CollinearDecagonGenerator g;
        g.inset = r.number("inset", g.inset);
        return g;
    }
    throw ScenarioError(r.where("generator") + "expected \"regular\" or \"collinear_decagon\", or a positions list");
}

FrameSpec read_frames(const Reader& r) {
    const std::string mode = r.string("mode", "none");
    FrameSpec f;
    if (mode == "none") {
        r.allow({"mode"});
    } else if (mode == "explicit") {
        r.allow({"mode", "offsets_deg"});
        f.mode = FrameMode::explicit_offsets;
        f.offsets_deg = r.numbers("offsets_deg");
    } else if (mode == "random") {
        r.allow({"mode", "seed"});
        f.mode = FrameMode::random;
        f.seed = r.unsigned_int("seed", 0);
    } else {
        throw ScenarioError(r.where("mode") + "expected \"none\", \"explicit\" or \"random\"");
    }
    return f;
}

std::string line_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["n"] = s.n;
    j["target_angles_deg"] = s.target_deg;
    std::visit(overloaded{
                   [&](const std::vector<Vec2>& z) {
                       json arr = json::array();
                       for (Vec2 p : z) arr.push_back({p.x, p.y});
                       j["initial"] = {{"positions", arr}};
                   },
                   [&](const RegularGenerator& g) {
                       j["initial"] = {{"generator", "regular"},
                                       {"winding", g.winding},
                                       {"radius", g.radius},
                                       {"perturb", g.perturb},
                                       {"seed", g.seed}};
                   },
                   [&](const CollinearDecagonGenerator& g) {
                       j["initial"] = {{"generator", "collinear_decagon"}, {"inset", g.inset}};
                   },
               },
               s.initial);
    switch (s.frames.mode) {
        case FrameMode::none: j["frames"] = {{"mode", "none"}}; break;
        case FrameMode::explicit_offsets:
            j["frames"] = {{"mode", "explicit"}, {"offsets_deg", s.frames.offsets_deg}};
            break;
        case FrameMode::random: j["frames"] = {{"mode", "random"}, {"seed", s.frames.seed}}; break;
    }
    json sim;
    sim["a"] = s.sim.a;
    sim["dt"] = s.sim.dt;
    sim["t_max"] = s.sim.t_max;
    sim["eps_tol"] = s.sim.eps_tol;
    sim["collision_dist"] = s.sim.collision_dist ? json(*s.sim.collision_dist) : json(nullptr);
    sim["sample_stride"] = s.sim.sample_stride;
    sim["dwell_samples"] = s.sim.dwell_samples;
    sim["stop_on_converge"] = s.sim.stop_on_converge;
    sim["integrator"] = std::string(to_string(s.sim.integrator));
    sim["terminal_band"] = s.sim.terminal_band;
    j["sim"] = sim;
    return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void Scenario::validate() const {
    if (n < 3) throw ScenarioError("n: a ring needs at least 3 agents, got " + std::to_string(n));
    if (target_deg.size() != n)
        throw ScenarioError("target_angles_deg: expected " + std::to_string(n) + " entries, got " +
                            std::to_string(target_deg.size()));
    for (std::size_t i = 0; i < n; ++i) check_target_deg(target_deg[i], i);
    std::visit(overloaded{
                   [&](const std::vector<Vec2>& z) {
                       if (z.size() != n)
                           throw ScenarioError("initial.positions: expected " + std::to_string(n) +
                                               " entries, got " + std::to_string(z.size()));
                       for (std::size_t i = 0; i < n; ++i)
                           if (!std::isfinite(z[i].x) || !std::isfinite(z[i].y))
                               throw ScenarioError("initial.positions: element " + std::to_string(i) +
                                                   " is not finite");
                   },
                   [&](const RegularGenerator& g) { check_winding(n, g.winding); },
                   [&](const CollinearDecagonGenerator& g) {
                       if (n != 10) throw ScenarioError("initial: collinear_decagon requires n = 10");
                       if (!(g.inset > 0.0 && g.inset < 0.5))
                           throw ScenarioError("initial.inset: must lie in (0, 0.5)");
                   },
               },
               initial);
    if (frames.mode == FrameMode::explicit_offsets && frames.offsets_deg.size() != n)
        throw ScenarioError("frames.offsets_deg: expected " + std::to_string(n) + " entries, got " +
                            std::to_string(frames.offsets_deg.size()));
    try {
        sim.validate();
    } catch (const Error& e) {
        throw ScenarioError(std::string("sim: ") + e.what());
    }
}

FormationState Scenario::initial_state() const {
    validate();
    FormationState st;
    st.positions = std::visit(overloaded{
                                  [](const std::vector<Vec2>& z) { return z; },
                                  [&](const RegularGenerator& g) { return regular_positions(n, g); },
                                  [](const CollinearDecagonGenerator& g) { return collinear_decagon_positions(g); },
                              },
                              initial);
    return st;
}

TargetFormation Scenario::targets() const {
    validate();
    std::vector<double> rad(n);
    for (std::size_t i = 0; i < n; ++i) rad[i] = deg_to_rad(target_deg[i]);
    return TargetFormation(std::move(rad));
}

std::vector<LocalFrame> Scenario::local_frames() const {
    validate();
    std::vector<LocalFrame> out;
    switch (frames.mode) {
        case FrameMode::none: break;
        case FrameMode::explicit_offsets:
            for (double d : frames.offsets_deg) out.push_back({deg_to_rad(d)});
            break;
        case FrameMode::random: {
            std::mt19937_64 rng(frames.seed);
            std::uniform_real_distribution<double> u(0.0, kTwoPi);
            for (std::size_t i = 0; i < n; ++i) out.push_back({u(rng)});
            break;
        }
    }
    return out;
}

Scenario make_regular_scenario(std::size_t n, int winding, double target_deg, double perturb, std::uint64_t seed) {
    if (n < 3) throw ScenarioError("n: a ring needs at least 3 agents");
    check_winding(n, winding);
    const double expected = 180.0 * (static_cast<double>(n) - 2.0 * winding) / static_cast<double>(n);
    if (std::fabs(target_deg - expected) > 1e-9)
        throw ScenarioError("target " + fmt17(target_deg) + " deg is inconsistent with the regular {" +
                            std::to_string(n) + "/" + std::to_string(winding) + "} polygon angle " +
                            fmt17(expected) + " deg");
    if (!(perturb >= 0.0)) throw ScenarioError("perturb must be nonnegative");
    Scenario s;
    s.name = "regular_" + std::to_string(n) + "_" + std::to_string(winding);
    s.n = n;
    s.initial = RegularGenerator{winding, 1.0, perturb, seed};
    s.target_deg.assign(n, target_deg);
    s.validate();
    return s;
}

Scenario make_collinear_decagon_scenario(double a) {
    Scenario s;
    s.name = "collinear_decagon";
    s.n = 10;
    s.initial = CollinearDecagonGenerator{};
    s.target_deg.assign(10, 144.0);
    s.sim.a = a;
    s.validate();
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    s.validate();
    return to_json(s).dump(2) + "\n";
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("parse error at " + line_context(text, e.byte) + ": " + e.what());
    }
    const Reader r(j, "");
    r.allow({"name", "n", "target_angles_deg", "target_angle_deg", "initial", "frames", "sim"});
    Scenario s;
    s.name = r.string("name", "scenario");
    const std::int64_t n = r.integer("n");
    if (n < 3) throw ScenarioError("n: a ring needs at least 3 agents, got " + std::to_string(n));
    s.n = static_cast<std::size_t>(n);
    if (r.has("target_angles_deg") == r.has("target_angle_deg"))
        throw ScenarioError("give exactly one of target_angles_deg (per agent) or target_angle_deg (uniform)");
    if (r.has("target_angle_deg"))
        s.target_deg.assign(s.n, r.number("target_angle_deg"));
    else
        s.target_deg = r.numbers("target_angles_deg");
    for (std::size_t i = 0; i < s.target_deg.size(); ++i) check_target_deg(s.target_deg[i], i);
    s.initial = read_initial(r.child("initial"));
    if (r.has("frames")) s.frames = read_frames(r.child("frames"));
    if (r.has("sim")) s.sim = read_sim(r.child("sim"));
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario s;
    try {
        s = parse_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
    apply_seed_override(s);
    return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write scenario file " + path.string());
    out << serialize_scenario(s);
    if (!out) throw ScenarioError("write failed for " + path.string());
}

std::optional<std::uint64_t> seed_override() {
    const char* v = std::getenv("RINGFORM_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(v, &end, 10);
    if (end == v || *end != '\0') throw ScenarioError(std::string("RINGFORM_SEED is not an integer: ") + v);
    return static_cast<std::uint64_t>(seed);
}

bool apply_seed_override(Scenario& s) {
    const auto seed = seed_override();
    if (!seed) return false;
    if (auto* g = std::get_if<RegularGenerator>(&s.initial)) g->seed = *seed;
    if (s.frames.mode == FrameMode::random) s.frames.seed = *seed;
    return true;
}

std::optional<double> final_decade_slope(const TrajectoryLog& log, double eps_tol) {
    std::size_t end = log.samples.size();
    for (std::size_t k = 0; k < log.samples.size(); ++k) {
        if (log.samples[k].eps_inf_norm <= eps_tol) {
            end = k;
            break;
        }
    }
    std::size_t begin = end;
    while (begin > 0 && log.samples[begin - 1].eps_inf_norm <= 10.0 * eps_tol &&
           log.samples[begin - 1].eps_inf_norm > eps_tol)
        --begin;
    if (end - begin < 3) return std::nullopt;
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double m = static_cast<double>(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
        const double t = log.samples[k].time;
        const double y = std::log(log.samples[k].V);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double den = m * stt - st * st;
    if (den <= 0.0) return std::nullopt;
    return (m * sty - st * sy) / den;
}

RunSummary summarize(const TrajectoryLog& log, const Scenario& s) {
    if (log.samples.empty()) throw DomainError("summarize needs a nonempty log");
    RunSummary r;
    r.scenario = s.name;
    if (const Event* e = log.terminal()) {
        r.terminal_event = std::string(to_string(e->kind));
        r.terminal_time = e->time;
    }
    r.settling_time = settling_time(log, kSummarySettleTol);
    if (s.sim.a == 1.0) r.exp_rate = final_decade_slope(log, s.sim.eps_tol);
    r.bounds = analysis::bound_report(log, s.sim.a);
    r.min_pair_dist = log.samples.front().min_pair_dist;
    const double sum0 = log.samples.front().theta_sum;
    for (const DiagnosticsSample& d : log.samples) {
        r.min_pair_dist = std::min(r.min_pair_dist, d.min_pair_dist);
        r.max_theta_sum_drift = std::max(r.max_theta_sum_drift, std::fabs(d.theta_sum - sum0));
    }
    r.final_eps_inf = log.samples.back().eps_inf_norm;
    r.samples = log.samples.size();
    return r;
}

std::string trajectory_csv(const TrajectoryLog& log) {
    if (log.samples.empty()) return {};
    const std::size_t n = log.states.front().size();
    std::string out = "t";
    for (std::size_t i = 1; i <= n; ++i) out += ",z" + std::to_string(i) + "x,z" + std::to_string(i) + "y";
    for (std::size_t i = 1; i <= n; ++i) out += ",eps" + std::to_string(i);
    out += ",V,rho,theta_sum,min_dist,V_dot_analytic\n";
    for (std::size_t k = 0; k < log.samples.size(); ++k) {
        const DiagnosticsSample& d = log.samples[k];
        out += fmt17(d.time);
        for (Vec2 p : log.states[k].positions) {
            out += ',';
            out += fmt17(p.x);
            out += ',';
            out += fmt17(p.y);
        }
        for (double e : d.eps) {
            out += ',';
            out += fmt17(e);
        }
        for (double v : {d.V, d.rho, d.theta_sum, d.min_pair_dist, d.V_dot_analytic}) {
            out += ',';
            out += fmt17(v);
        }
        out += '\n';
    }
    return out;
}

std::string summary_json(const RunSummary& r) {
    json j;
    j["scenario"] = r.scenario;
    j["terminal_event"] = r.terminal_event;
    j["terminal_time"] = r.terminal_time;
    j["settling_time"] = r.settling_time ? json(*r.settling_time) : json(nullptr);
    j["settling_tol"] = kSummarySettleTol;
    j["exp_rate"] = r.exp_rate ? json(*r.exp_rate) : json(nullptr);
    j["min_pair_dist"] = r.min_pair_dist;
    j["max_theta_sum_drift"] = r.max_theta_sum_drift;
    j["final_eps_inf"] = r.final_eps_inf;
    j["samples"] = r.samples;
    j["bounds"] = {{"K", r.bounds.K},
                   {"K_at_boundary", r.bounds.K_at_boundary},
                   {"lambda2_EtE", r.bounds.lambda2_EtE},
                   {"lambda1_DtD", r.bounds.lambda1_DtD},
                   {"kappa", r.bounds.kappa},
                   {"C_norm", r.bounds.C_norm},
                   {"rho_max_observed", r.bounds.rho_max_observed},
                   {"eta_fit", finite_or_null(r.bounds.eta_fit)},
                   {"beta_observed", r.bounds.beta_observed}};
    return j.dump(2) + "\n";
}

void write_outputs(const TrajectoryLog& log, const RunSummary& summary, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ScenarioError("cannot create output directory " + dir.string() + ": " + ec.message());
    const plot::PlotSet plots = plot::render_plots(log);
    const std::pair<const char*, std::string> files[] = {
        {"trajectory.csv", trajectory_csv(log)},
        {"summary.json", summary_json(summary)},
        {"formation.svg", plots.formation},
        {"errors.svg", plots.errors},
        {"diagnostics.svg", plots.diagnostics},
    };
    for (const auto& [name, body] : files) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) throw ScenarioError("write failed for " + path.string());
    }
}

}  // namespace ringform
