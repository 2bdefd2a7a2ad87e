#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ringform/errors.hpp"
#include "ringform/experiments.hpp"
#include "ringform/plot.hpp"
#include "ringform/scenario.hpp"
#include "support.hpp"

using namespace ringform;
using testing::near;
namespace fs = std::filesystem;

namespace {

double eps_inf(const Scenario& s) {
    const auto e = angle_errors(edges_of(s.initial_state().positions), s.targets());
    double m = 0.0;
    for (double v : e) m = std::max(m, std::fabs(v));
    return m;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ringform_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kMinimal = R"({
  "n": 3,
  "target_angle_deg": 60,
  "initial": {"positions": [[0, 0], [0.5, 0.9], [1, 0]]}
})";

}  // namespace

TEST_CASE("make_regular_scenario: exact pentagram and decagon") {
    const Scenario star = make_regular_scenario(5, 2, 36.0, 0.0, 123);
    CHECK(eps_inf(star) < 1e-14);
    const Scenario deca = make_regular_scenario(10, 1, 144.0, 0.0, 9);
    CHECK(eps_inf(deca) < 1e-14);
    const double sum = diagnostics(star.initial_state(), star.targets(), 1.0).theta_sum;
    CHECK(near(sum, kPi, 1e-12));
}

TEST_CASE("make_regular_scenario: seeded perturbation") {
    const Scenario a = make_regular_scenario(5, 2, 36.0, 0.1, 42);
    const Scenario b = make_regular_scenario(5, 2, 36.0, 0.1, 42);
    CHECK(a.initial_state().positions == b.initial_state().positions);
    CHECK(eps_inf(a) > 0.0);
    const auto base = make_regular_scenario(5, 2, 36.0, 0.0, 42).initial_state().positions;
    const auto z = a.initial_state().positions;
    for (std::size_t i = 0; i < 5; ++i) CHECK(norm(z[i] - base[i]) <= 0.1);
    // Same seed at another scale moves each agent along the same direction.
    const auto half = make_regular_scenario(5, 2, 36.0, 0.05, 42).initial_state().positions;
    for (std::size_t i = 0; i < 5; ++i) CHECK(near(half[i] - base[i], 0.5 * (z[i] - base[i]), 1e-15));
}

TEST_CASE("make_regular_scenario: infeasible inputs") {
    CHECK_THROWS_AS(make_regular_scenario(6, 2, 60.0, 0.0, 1), ScenarioError);   // not coprime
    CHECK_THROWS_AS(make_regular_scenario(5, 3, 36.0, 0.0, 1), ScenarioError);   // winding >= n/2
    CHECK_THROWS_AS(make_regular_scenario(5, 2, 108.0, 0.0, 1), ScenarioError);  // wrong angle
    CHECK_THROWS_AS(make_regular_scenario(2, 1, 0.0, 0.0, 1), ScenarioError);
    CHECK_THROWS_AS(make_regular_scenario(5, 2, 36.0, -0.1, 1), ScenarioError);
}

TEST_CASE("collinear decagon: five straight vertices, one reflex vertex") {
    const Scenario s = make_collinear_decagon_scenario(0.6);
    const auto th = subtended_angles(edges_of(s.initial_state().positions));
    std::size_t straight = 0;
    for (std::size_t i : {1u, 2u, 6u, 7u, 9u}) {
        CHECK(near(th[i], kPi, 1e-12));
        ++straight;
    }
    CHECK(straight == 5);
    CHECK(th[4] > kPi);
    CHECK(near(diagnostics(s.initial_state(), s.targets(), 0.6).theta_sum, 8 * kPi, 1e-12));
}

TEST_CASE("parse_scenario: minimal file loads with defaults") {
    const Scenario s = parse_scenario(kMinimal);
    CHECK(s.n == 3);
    CHECK(s.name == "scenario");
    CHECK(s.target_deg == std::vector<double>(3, 60.0));
    CHECK(s.frames.mode == FrameMode::none);
    CHECK(s.sim == SimParams{});
    CHECK(s.local_frames().empty());
    CHECK(near(s.targets().angle(0), kPi / 3, 0.0));
}

TEST_CASE("parse_scenario: errors carry context") {
    auto message = [](const std::string& text) {
        try {
            parse_scenario(text);
        } catch (const ScenarioError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    const std::string a1 = message(R"({"n": 3, "target_angle_deg": 180,
        "initial": {"positions": [[0,0],[1,0],[0,1]]}})");
    CHECK(a1.find("must differ from 0 and 180 deg") != std::string::npos);
    CHECK(message(R"({"n": 3, "target_angle_deg": 0, "initial": {"positions": [[0,0],[1,0],[0,1]]}})")
              .find("must differ from 0 and 180 deg") != std::string::npos);
    const std::string syntax = message("{\n  \"n\": 3,\n  \"target_angle_deg\": ,\n}");
    CHECK(syntax.find("line 3") != std::string::npos);
    CHECK(message(R"({"n": 3, "target_angle_deg": 60, "initial": {"positions": [[0,0],[1,0]]}})")
              .find("initial.positions") != std::string::npos);
    CHECK(message(R"({"n": 3, "target_angle_deg": 60, "initial": {"positions": [[0,0],[1,0],[0,1]]},
        "sim": {"dt": "fast"}})")
              .find("sim.dt") != std::string::npos);
    CHECK(message(R"({"n": 3, "target_angle_deg": 60, "initial": {"positions": [[0,0],[1,0],[0,1]]},
        "sim": {"tmax": 3}})")
              .find("sim.tmax: unknown field") != std::string::npos);
    CHECK(message(R"({"n": 6, "target_angle_deg": 60, "initial": {"generator": "regular", "winding": 2}})")
              .find("coprime") != std::string::npos);
    CHECK(message(R"({"n": 3, "target_angles_deg": [60, 60], "initial": {"positions": [[0,0],[1,0],[0,1]]}})")
              .find("target_angles_deg") != std::string::npos);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioError);
}

TEST_CASE("serialization: round trip is value- and byte-stable") {
    Scenario s = experiments::fig3_scenario(0.3);
    s.frames = {FrameMode::random, {}, 77};
    s.sim.collision_dist = 1e-4;
    s.sim.integrator = Integrator::rk4;
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    CHECK(back == s);
    CHECK(serialize_scenario(back) == text);

    Scenario explicit_pos = parse_scenario(kMinimal);
    explicit_pos.frames = {FrameMode::explicit_offsets, {10.0, 20.5, 359.0}, 0};
    explicit_pos.initial = std::vector<Vec2>{{0.1, 1.0 / 3.0}, {0.5, 0.9}, {1, 0}};
    const std::string t2 = serialize_scenario(explicit_pos);
    CHECK(parse_scenario(t2) == explicit_pos);
    CHECK(serialize_scenario(parse_scenario(t2)) == t2);

    const fs::path dir = scratch_dir("roundtrip");
    save_scenario(s, dir / "s.json");
    const Scenario loaded = load_scenario(dir / "s.json");
    save_scenario(loaded, dir / "t.json");
    CHECK(read_file(dir / "s.json") == read_file(dir / "t.json"));
    CHECK(loaded == s);
    const std::string deca = serialize_scenario(experiments::fig4_scenario(0.6));
    CHECK(serialize_scenario(parse_scenario(deca)) == deca);
}

TEST_CASE("frames: explicit and random offsets") {
    Scenario s = parse_scenario(kMinimal);
    s.frames = {FrameMode::explicit_offsets, {0.0, 90.0, 180.0}, 0};
    const auto f = s.local_frames();
    REQUIRE(f.size() == 3);
    CHECK(f[1].offset == kPi / 2);
    s.frames = {FrameMode::random, {}, 5};
    const auto r1 = s.local_frames(), r2 = s.local_frames();
    REQUIRE(r1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r1[i].offset == r2[i].offset);
        CHECK(r1[i].offset >= 0.0);
        CHECK(r1[i].offset < kTwoPi);
    }
    s.frames = {FrameMode::explicit_offsets, {0.0}, 0};
    CHECK_THROWS_AS(s.validate(), ScenarioError);
}

TEST_CASE("RINGFORM_SEED overrides scenario seeds") {
    Scenario s = experiments::fig3_scenario(1.0);
    s.frames = {FrameMode::random, {}, 3};
    ::unsetenv("RINGFORM_SEED");
    CHECK_FALSE(apply_seed_override(s));
    ::setenv("RINGFORM_SEED", "991", 1);
    CHECK(apply_seed_override(s));
    CHECK(std::get<RegularGenerator>(s.initial).seed == 991);
    CHECK(s.frames.seed == 991);
    ::setenv("RINGFORM_SEED", "abc", 1);
    CHECK_THROWS_AS(seed_override(), ScenarioError);
    ::unsetenv("RINGFORM_SEED");
}

TEST_CASE("trajectory CSV: header, column count, 17 significant digits") {
    Scenario s = experiments::fig3_scenario(1.0);
    s.sim.t_max = 0.05;
    const auto r = experiments::run_scenario(s);
    REQUIRE(r.error.empty());
    const std::string csv = trajectory_csv(r.log);
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    CHECK(header ==
          "t,z1x,z1y,z2x,z2y,z3x,z3y,z4x,z4y,z5x,z5y,eps1,eps2,eps3,eps4,eps5,V,rho,theta_sum,min_dist,V_dot_analytic");
    std::size_t rows = 0;
    while (std::getline(in, row)) {
        CHECK(std::count(row.begin(), row.end(), ',') == 20);
        ++rows;
    }
    CHECK(rows == r.log.samples.size());
    std::istringstream first(csv.substr(header.size() + 1));
    std::getline(first, row);
    const std::string z1x = row.substr(row.find(',') + 1, row.find(',', row.find(',') + 1) - row.find(',') - 1);
    CHECK(std::stod(z1x) == r.log.states.front().positions[0].x);
}

TEST_CASE("summary and outputs") {
    Scenario s = experiments::fig3_scenario(1.0);
    const auto r = experiments::run_scenario(s);
    REQUIRE(r.error.empty());
    CHECK(r.summary.terminal_event == "Converged");
    REQUIRE(r.summary.settling_time.has_value());
    REQUIRE(r.summary.exp_rate.has_value());
    CHECK(*r.summary.exp_rate < 0.0);
    CHECK(r.summary.max_theta_sum_drift < 1e-6);
    CHECK(r.summary.min_pair_dist > 0.0);
    const auto j = nlohmann::json::parse(summary_json(r.summary));
    CHECK(j["terminal_event"] == "Converged");
    CHECK(j["bounds"]["K"].get<double>() > 0.0);

    const fs::path dir = scratch_dir("outputs");
    write_outputs(r.log, r.summary, dir / "run");
    for (const char* f : {"trajectory.csv", "summary.json", "formation.svg", "errors.svg", "diagnostics.svg"})
        CHECK(fs::file_size(dir / "run" / f) > 0);
    CHECK(read_file(dir / "run" / "errors.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("final_decade_slope fits ln V") {
    TrajectoryLog log;
    for (int k = 0; k < 50; ++k) {
        DiagnosticsSample d;
        d.time = 0.1 * k;
        d.eps_inf_norm = 1e-8 * std::exp(-0.5 * d.time);
        d.V = 0.5 * d.eps_inf_norm * d.eps_inf_norm;
        log.samples.push_back(d);
    }
    const auto slope = final_decade_slope(log, 1e-9);
    REQUIRE(slope.has_value());
    CHECK(near(*slope, -1.0, 1e-9));
}

TEST_CASE("render_plots: documents, log floor, equilibrium run") {
    const Scenario s = make_regular_scenario(5, 2, 36.0, 0.0, 1);
    const TrajectoryLog log = simulate(s.initial_state(), s.targets(), s.sim);
    const plot::PlotSet p = plot::render_plots(log);
    for (const std::string* doc : {&p.formation, &p.errors, &p.diagnostics}) {
        CHECK(doc->rfind("<?xml", 0) == 0);
        CHECK(doc->find("</svg>") != std::string::npos);
        CHECK(doc->find("nan") == std::string::npos);
        CHECK(doc->find("inf") == std::string::npos);
    }
    CHECK(p.formation.find("stroke-dasharray") != std::string::npos);
    CHECK(p.errors.find("1e-16") != std::string::npos);
    CHECK_THROWS_AS(plot::render_plots(TrajectoryLog{}), DomainError);
}

TEST_CASE("sweep and reproduction scenarios") {
    const Scenario base = experiments::fig4_scenario(1.0);
    const std::vector<double> values = {0.3, 0.6, 1.0};
    const auto scns = experiments::sweep_scenarios(base, experiments::SweepParam::a, values);
    REQUIRE(scns.size() == 3);
    CHECK(scns[1].sim.a == 0.6);
    CHECK_THROWS_AS(experiments::sweep_scenarios(base, experiments::SweepParam::perturb, values), ScenarioError);
    const auto fig3 = experiments::reproduction_scenarios("fig3");
    REQUIRE(fig3.size() == 2);
    CHECK(fig3[0].sim.a == 1.0);
    CHECK(fig3[1].sim.a == 0.3);
    const auto fig4 = experiments::reproduction_scenarios("fig4");
    CHECK(fig4[1].sim.a == 0.6);
    CHECK_THROWS_AS(experiments::reproduction_scenarios("fig5"), ScenarioError);
    CHECK_THROWS_AS(experiments::sweep_param_from_string("gain"), ScenarioError);
}

TEST_CASE("verify suite passes") {
    for (const auto& c : experiments::verify_suite(1)) {
        INFO(c.name << " " << c.detail);
        CHECK(c.pass);
    }
}
