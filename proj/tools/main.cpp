#include "cfq/experiments.hpp"
#include "cfq/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"coherent-feedback Kerr circuit: steady states, photon statistics, bistability"};
    app.set_version_flag("--version", cfq::version);
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = "out";
    std::vector<int> truncation;
    bool plot = false;
    std::string unit_mode;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--truncation", truncation,
                   "Fock truncation override, one value for both modes or two")
        ->expected(1, 2);
    app.add_flag("--plot", plot, "also write SVG quick-look plots");
    app.add_option("--unit-mode", unit_mode, "verbatim (caption numbers) or angular (x 2pi)")
        ->check(CLI::IsMember({"verbatim", "angular"}));

    std::string fig, config_path;
    CLI::App* rep = app.add_subcommand("reproduce", "re-run a published figure panel");
    rep->add_option("figure", fig, "fig3 | fig4 | fig5 | fig6 | fig7 | fig8")->required();
    CLI::App* runc = app.add_subcommand("run", "run a scenario from a config file");
    runc->add_option("config", config_path, "key = value scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    CLI::App* val = app.add_subcommand("validate", "run the cross-module consistency suite");

    CLI11_PARSE(app, argc, argv);

    std::optional<cfq::UnitMode> mode;
    if (!unit_mode.empty()) mode = cfq::unit_mode_from_string(unit_mode);

    try {
        cfq::Scenario s;
        if (rep->parsed()) {
            s = cfq::figure_recipe(fig, mode.value_or(cfq::UnitMode::verbatim));
        } else if (runc->parsed()) {
            s = cfq::parse_config(config_path, mode);
        } else if (val->parsed()) {
            s.experiment = cfq::Experiment::validate;
            s.name = "validate";
        }
        if (app.count("--out")) s.out_dir = out_dir;
        if (s.out_dir.empty()) s.out_dir = out_dir;
        if (!truncation.empty())
            s.truncation = {truncation[0], truncation.size() > 1 ? truncation[1] : truncation[0]};
        if (plot) s.plot = true;

        cfq::RunOutcome oc = cfq::run(s);
        for (const auto& f : oc.files_written) std::printf("wrote %s\n", f.c_str());
        std::printf("points: %d, failed: %d\n", oc.points_total, oc.points_failed);
        if (!oc.ok())
            std::printf("partial failure: see the failure entries in the output manifests\n");
        return oc.ok() ? 0 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
