#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "constelsim/commands.hpp"
#include "constelsim/config.hpp"

namespace {

constexpr int kExitValidationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw constelsim::config::ConfigError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    namespace cfg = constelsim::config;
    namespace cli = constelsim::cli;

    CLI::App app{"K-availability and K-localizability of LEO, MEO and hybrid constellations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    bool use_mc = false;
    bool print_config = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (key = value lines)");
        sub->add_option("--set", overrides, "override one key, e.g. --set \"leo.n_sats=1500\"")->take_all();
        sub->add_option("--seed", seed, "master seed of the simulation");
        sub->add_option("--trials", trials, "Monte Carlo trials");
        sub->add_option("--out", out_path, "output CSV path (default stdout)");
        sub->add_flag("--print-config", print_config, "print the effective configuration to stderr");
    };
    auto* curve = app.add_subcommand("curve", "one-axis sweep of the closed-form metric");
    common(curve);
    curve->add_flag("--mc", use_mc, "append simulated columns with standard errors");
    auto* heatmap = app.add_subcommand("heatmap", "LEO count x MEO count grid of the hybrid metric");
    common(heatmap);
    heatmap->add_flag("--mc", use_mc, "not supported (rejected)");
    auto* validate = app.add_subcommand("validate", "closed forms against the simulator");
    common(validate);
    validate->add_flag("--mc", use_mc, "accepted for symmetry; validate always simulates");
    auto* sample = app.add_subcommand("sample", "dump one sampled constellation");
    common(sample);
    sample->add_flag("--mc", use_mc, "ignored");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    cfg::RunConfig run;
    try {
        if (!config_path.empty()) run = cfg::load(config_path);
        for (const auto& o : overrides) cfg::apply_override(run, o);
        if (seed) run.mc.master_seed = *seed;
        if (trials) run.mc.n_trials = *trials;
        run.validate();
        if (print_config) std::cerr << cfg::emit(run);

        if (curve->parsed()) {
            write_output(cli::cmd_curve(run, {use_mc}), out_path);
        } else if (heatmap->parsed()) {
            write_output(cli::cmd_heatmap(run, {use_mc}), out_path);
        } else if (validate->parsed()) {
            const auto result = cli::cmd_validate(run);
            write_output(result.csv, out_path);
            if (result.failures > 0) {
                std::cerr << result.failures << " validation row(s) outside the tolerance band\n";
                return kExitValidationFailed;
            }
        } else if (sample->parsed()) {
            write_output(cli::cmd_sample(run), out_path);
        }
    } catch (const cfg::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return 0;
}
