#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ringform/errors.hpp"
#include "ringform/experiments.hpp"
#include "ringform/scenario.hpp"

namespace fs = std::filesystem;
using namespace ringform;

namespace {

std::string opt(const std::optional<double>& v, const char* f = "%.4f") {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, f, *v);
    return buf;
}

void print_summary(const experiments::RunResult& r) {
    if (!r.error.empty()) {
        std::printf("%-28s ERROR %s\n", r.scenario.name.c_str(), r.error.c_str());
        return;
    }
    const RunSummary& s = r.summary;
    std::printf("%-28s %-15s t_end=%-10.3f settle=%-10s rate=%-10s min_dist=%-8.4f drift=%.2e wall=%.2fs\n",
                r.scenario.name.c_str(), s.terminal_event.c_str(), s.terminal_time, opt(s.settling_time).c_str(),
                opt(s.exp_rate).c_str(), s.min_pair_dist, s.max_theta_sum_drift, r.wall_seconds);
}

bool run_ok(const experiments::RunResult& r) {
    return r.error.empty() && r.summary.terminal_event != std::string(to_string(EventKind::collision));
}

void write_run(const experiments::RunResult& r, const fs::path& dir) {
    write_outputs(r.log, r.summary, dir);
    save_scenario(r.scenario, dir / "scenario.json");
}

int cmd_run(const std::string& path, const fs::path& out) {
    const Scenario s = load_scenario(path);
    if (const std::string w = s.targets().feasibility_warning(); !w.empty()) std::cerr << "warning: " << w << "\n";
    const experiments::RunResult r = experiments::run_scenario(s);
    print_summary(r);
    if (!r.error.empty()) return 1;
    write_run(r, out);
    return run_ok(r) ? 0 : 1;
}

int cmd_verify(std::optional<std::uint64_t> seed) {
    const std::uint64_t s = seed ? *seed : seed_override().value_or(1);
    std::printf("verify seed=%llu\n", static_cast<unsigned long long>(s));
    bool all = true;
    for (const experiments::Check& c : experiments::verify_suite(s)) {
        std::printf("%s  %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : "  | ",
                    c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "some checks failed");
    return all ? 0 : 1;
}

int cmd_sweep(const std::string& scenario_path, const std::string& preset, const std::string& param,
              const std::vector<double>& values, const std::optional<fs::path>& out) {
    Scenario base;
    if (!scenario_path.empty())
        base = load_scenario(scenario_path);
    else if (preset == "pentagram")
        base = experiments::fig3_scenario(1.0);
    else if (preset == "decagon")
        base = experiments::fig4_scenario(1.0);
    else
        throw ScenarioError("unknown preset \"" + preset + "\": expected pentagram or decagon");
    base.name = preset.empty() ? base.name : preset;
    const auto scenarios =
        experiments::sweep_scenarios(base, experiments::sweep_param_from_string(param), values);
    const auto results = experiments::run_all(scenarios);
    bool ok = true;
    for (const auto& r : results) {
        print_summary(r);
        ok = ok && run_ok(r);
        if (out && r.error.empty()) write_run(r, *out / r.scenario.name);
    }
    return ok ? 0 : 1;
}

int cmd_reproduce(const std::string& figure, const fs::path& out) {
    const auto scenarios = experiments::reproduction_scenarios(figure);
    const auto results = experiments::run_all(scenarios);
    bool ok = true;
    for (const auto& r : results) {
        print_summary(r);
        ok = ok && run_ok(r);
        if (r.error.empty()) write_run(r, out / figure / r.scenario.name);
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bearing-only control of angle-constrained ring formations"};
    app.require_subcommand(1);

    std::string scenario_path;
    fs::path out = "out";
    auto* run = app.add_subcommand("run", "Simulate one scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory")->required();

    std::optional<std::uint64_t> seed;
    auto* verify = app.add_subcommand("verify", "Run the lemma and invariant suite");
    verify->add_option("--seed", seed, "Sampling seed (default RINGFORM_SEED or 1)");

    std::string preset, param;
    std::vector<double> values;
    std::optional<fs::path> sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter family concurrently");
    auto* sweep_scn = sweep->add_option("--scenario", scenario_path, "Base scenario JSON")->check(CLI::ExistingFile);
    sweep->add_option("--preset", preset, "Built-in base: pentagram or decagon")->excludes(sweep_scn);
    sweep->add_option("--param", param, "a, dt or perturb")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", sweep_out, "Write per-run outputs under this directory");

    std::string figure;
    auto* reproduce = app.add_subcommand("reproduce", "Regenerate the five-agent or ten-agent experiment");
    reproduce->add_option("figure", figure, "fig3 or fig4")->required()->check(CLI::IsMember({"fig3", "fig4"}));
    reproduce->add_option("--out", out, "Output directory (default out)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(scenario_path, out);
        if (*verify) return cmd_verify(seed);
        if (*sweep) {
            if (scenario_path.empty() && preset.empty()) preset = "decagon";
            return cmd_sweep(scenario_path, preset, param, values, sweep_out);
        }
        if (*reproduce) return cmd_reproduce(figure, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
