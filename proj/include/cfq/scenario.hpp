#pragma once

#include "cfq/semiclassical.hpp"
#include "cfq/slh.hpp"
#include "cfq/steady.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cfq {

// verbatim keeps caption numbers as printed; angular multiplies the
// /2pi-annotated ones by 2*pi. Annotation is a property of the figure
// recipes; hand-written configs are always taken literally.
enum class UnitMode { verbatim, angular };

std::string to_string(UnitMode m);
UnitMode unit_mode_from_string(const std::string& s);

enum class Experiment {
    bistability,
    hysteresis,
    g2_ksweep,
    g2_map,
    g2_drive_sweep,
    g2_chi_sweep,
    weak_drive_compare,
    validate,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct Scenario {
    CircuitParams params;
    Experiment experiment = Experiment::g2_ksweep;

    std::vector<double> k_grid;
    std::vector<double> eps_grid;
    std::vector<double> delta_s_grid;     // map axis
    std::vector<double> chi_grid;         // chi sweep (direct)
    std::vector<double> delta_qt_grid;    // chi sweep via the qubit pathway
    std::vector<double> k_values;         // one trace per K (drive sweep)
    std::vector<double> delta_s_values;   // one trace per delta_s
    std::vector<CavityMode> modes{CavityMode::a};

    std::string out_dir = "out";
    std::array<int, 2> truncation{0, 0};  // 0 = per-point rule
    bool plot = false;
    UnitMode unit_mode = UnitMode::verbatim;
    P1Form p1_form = P1Form::four_gamma;
    std::string name = "run";
    std::string chi_source = "config";

    void validate() const;  // grid presence and finiteness per experiment
};

// Hard-coded parameter sets of the published figure panels.
Scenario figure_recipe(const std::string& fig, UnitMode mode);

// key = value text, '#' comments, unknown keys rejected. A `reproduce = figN`
// line expands the recipe first; every other key then overrides it.
Scenario parse_config(const std::string& path,
                      std::optional<UnitMode> unit_mode_override = std::nullopt);

std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> grid_range(double lo, double step, double hi);

// 16-hex digest of the canonical parameter rendering; lets any CSV row be
// re-run in isolation.
std::string params_hash(const CircuitParams& p);
std::string canonical_params(const CircuitParams& p);

} // namespace cfq
