#include "cfq/scenario.hpp"

#include "cfq/csv.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cfq {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_config: value of '" + key + "' is not numeric: '" +
                                    value + "'");
    }
    while (pos < value.size() && (value[pos] == ' ' || value[pos] == '\t')) ++pos;
    if (pos != value.size())
        throw std::invalid_argument("parse_config: trailing characters in value of '" + key +
                                    "': '" + value + "'");
    if (!std::isfinite(v))
        throw std::invalid_argument("parse_config: value of '" + key + "' is not finite");
    return v;
}

// "lo:step:hi" or "v1,v2,..." or a single number
std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    if (value.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3)
            throw std::invalid_argument("parse_config: range value of '" + key +
                                        "' must be lo:step:hi");
        double lo = parse_number(key, parts[0]);
        double step = parse_number(key, parts[1]);
        double hi = parse_number(key, parts[2]);
        return grid_range(lo, step, hi);
    }
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
    if (out.empty())
        throw std::invalid_argument("parse_config: empty grid for '" + key + "'");
    return out;
}

std::vector<CavityMode> parse_modes(const std::string& value) {
    std::vector<CavityMode> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string m = trim(item);
        if (m == "a")
            out.push_back(CavityMode::a);
        else if (m == "c")
            out.push_back(CavityMode::c);
        else
            throw std::invalid_argument("parse_config: unknown mode '" + m + "' (use a or c)");
    }
    if (out.empty()) throw std::invalid_argument("parse_config: empty mode list");
    return out;
}

void require_grid(const std::vector<double>& g, const char* what) {
    if (g.empty()) throw std::invalid_argument(std::string("scenario: missing grid: ") + what);
    for (double v : g)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string("scenario: non-finite entry in ") + what);
}

} // namespace

std::string to_string(UnitMode m) { return m == UnitMode::verbatim ? "verbatim" : "angular"; }

UnitMode unit_mode_from_string(const std::string& s) {
    if (s == "verbatim") return UnitMode::verbatim;
    if (s == "angular") return UnitMode::angular;
    throw std::invalid_argument("unknown unit mode '" + s + "' (verbatim|angular)");
}

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::bistability: return "bistability";
        case Experiment::hysteresis: return "hysteresis";
        case Experiment::g2_ksweep: return "g2-ksweep";
        case Experiment::g2_map: return "g2-map";
        case Experiment::g2_drive_sweep: return "g2-drive-sweep";
        case Experiment::g2_chi_sweep: return "g2-chi-sweep";
        case Experiment::weak_drive_compare: return "weak-drive-compare";
        case Experiment::validate: return "validate";
    }
    return "?";
}

Experiment experiment_from_string(const std::string& s) {
    for (Experiment e : {Experiment::bistability, Experiment::hysteresis, Experiment::g2_ksweep,
                         Experiment::g2_map, Experiment::g2_drive_sweep, Experiment::g2_chi_sweep,
                         Experiment::weak_drive_compare, Experiment::validate})
        if (to_string(e) == s) return e;
    throw std::invalid_argument("unknown experiment name '" + s + "'");
}

void Scenario::validate() const {
    params.validate();
    switch (experiment) {
        case Experiment::bistability:
        case Experiment::hysteresis:
            require_grid(eps_grid, "eps_grid");
            break;
        case Experiment::g2_ksweep:
            require_grid(k_grid, "k_grid");
            break;
        case Experiment::g2_map:
            require_grid(k_grid, "k_grid");
            require_grid(delta_s_grid, "delta_s_grid");
            break;
        case Experiment::g2_drive_sweep:
            require_grid(eps_grid, "eps_grid");
            require_grid(k_values, "k_values");
            break;
        case Experiment::g2_chi_sweep:
            if (delta_qt_grid.empty()) {
                require_grid(chi_grid, "chi_grid (or delta_qT_grid with a qubit block)");
            } else {
                require_grid(delta_qt_grid, "delta_qT_grid");
                if (!params.qubit)
                    throw std::invalid_argument(
                        "scenario: delta_qT_grid requires qubit.g and qubit.omega");
            }
            break;
        case Experiment::weak_drive_compare:
            require_grid(k_grid, "k_grid");
            break;
        case Experiment::validate:
            break;
    }
    if (modes.empty()) throw std::invalid_argument("scenario: empty mode list");
    for (int t : truncation)
        if (t < 0 || (t > 0 && t < 2))
            throw std::invalid_argument("scenario: truncation must be 0 (rule) or >= 2");
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) return {lo};
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
    return out;
}

std::vector<double> grid_range(double lo, double step, double hi) {
    if (step <= 0 || hi < lo) throw std::invalid_argument("grid_range: need step > 0 and hi >= lo");
    std::vector<double> out;
    int n = int(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) out.push_back(lo + step * i);
    return out;
}

std::string canonical_params(const CircuitParams& p) {
    std::string s;
    s += "gamma=" + format_double(p.gamma);
    s += ";gamma_f=" + format_double(p.gamma_f);
    s += ";kappa=" + format_double(p.kappa);
    s += ";chi=" + format_double(p.chi);
    s += ";delta_s=" + format_double(p.delta_s);
    s += ";delta=" + format_double(p.delta);
    s += ";epsilon=" + format_double(p.epsilon);
    if (p.qubit) {
        s += ";qubit.g=" + format_double(p.qubit->g);
        s += ";qubit.omega=" + format_double(p.qubit->omega);
        s += ";qubit.delta_qT=" + format_double(p.qubit->delta_qT);
    }
    return s;
}

std::string params_hash(const CircuitParams& p) { return hash_hex(fnv1a(canonical_params(p))); }

Scenario figure_recipe(const std::string& fig, UnitMode mode) {
    double u = mode == UnitMode::angular ? two_pi : 1.0;
    Scenario s;
    s.unit_mode = mode;
    s.name = fig;

    if (fig == "fig3") {
        // every caption value carries the /2pi annotation here
        s.experiment = Experiment::hysteresis;
        s.params.delta_s = 100 * u;
        s.params.delta = 4.9 * u;
        s.params.chi = 10 * u;
        s.params.gamma = 6 * u;
        s.params.gamma_f = 8 * u;
        s.params.kappa = 3 * u;
        s.eps_grid = grid_range(0.02 * u, 0.01 * u, 1.5 * u);
        s.p1_form = P1Form::gamma_sum;
        return s;
    }

    // figs 4-8 share the quantum-regime base set; only the decay rates are
    // /2pi-annotated in those captions
    s.params.chi = 10;
    s.params.delta_s = 50;
    s.params.gamma = 2 * u;
    s.params.gamma_f = 2.5 * u;
    s.params.kappa = 1;
    s.params.epsilon = 0.1 * s.params.kappa;
    s.params.set_k(1.0);

    if (fig == "fig4") {
        s.experiment = Experiment::g2_ksweep;
        s.k_grid = grid_range(0.0, 0.05, 3.0);
        s.delta_s_values = {50};
        s.modes = {CavityMode::a};
    } else if (fig == "fig5") {
        s.experiment = Experiment::g2_ksweep;
        s.k_grid = grid_range(0.0, 0.05, 3.0);
        s.delta_s_values = {50, 10};
        s.modes = {CavityMode::a, CavityMode::c};
    } else if (fig == "fig6") {
        s.experiment = Experiment::g2_map;
        s.k_grid = grid_range(0.5, 0.1, 2.5);
        s.delta_s_grid = grid_range(10, 10, 100);
        s.modes = {CavityMode::a};
    } else if (fig == "fig7") {
        s.experiment = Experiment::g2_drive_sweep;
        s.k_values = {1, 2};
        s.delta_s_values = {10, 50};
        s.eps_grid = grid_range(0.1 * s.params.kappa, 0.1 * s.params.kappa, 2.0 * s.params.kappa);
        s.modes = {CavityMode::a};
    } else if (fig == "fig8") {
        s.experiment = Experiment::g2_chi_sweep;
        s.params.qubit = QubitParams{1800, 1800, 40000};
        s.delta_qt_grid = linspace(40000, 19000, 15);
        s.k_values = {1};
        s.modes = {CavityMode::a};
        s.chi_source = "qubit";
    } else {
        throw std::invalid_argument("unknown figure '" + fig + "' (fig3..fig8)");
    }
    return s;
}

Scenario parse_config(const std::string& path, std::optional<UnitMode> unit_mode_override) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("parse_config: cannot open '" + path + "'");

    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("parse_config: line " + std::to_string(lineno) +
                                        " is not key = value: '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("parse_config: empty key or value on line " +
                                        std::to_string(lineno));
        for (const auto& [k, v] : entries)
            if (k == key)
                throw std::invalid_argument("parse_config: duplicate key '" + key + "'");
        entries.emplace_back(key, value);
    }

    auto find_one = [&](const std::string& key) -> std::optional<std::string> {
        for (const auto& [k, v] : entries)
            if (k == key) return v;
        return std::nullopt;
    };

    UnitMode mode = UnitMode::verbatim;
    if (auto v = find_one("unit_mode")) mode = unit_mode_from_string(*v);
    if (unit_mode_override) mode = *unit_mode_override;

    Scenario s;
    bool from_recipe = false;
    if (auto v = find_one("reproduce")) {
        s = figure_recipe(*v, mode);
        from_recipe = true;
    }
    s.unit_mode = mode;

    bool chi_given = false, qubit_given = false;
    QubitParams qp = s.params.qubit.value_or(QubitParams{0, 0, 0});
    std::optional<double> k_override;

    for (const auto& [key, value] : entries) {
        if (key == "reproduce" || key == "unit_mode") continue;
        if (key == "experiment")
            s.experiment = experiment_from_string(value);
        else if (key == "name")
            s.name = value;
        else if (key == "out")
            s.out_dir = value;
        else if (key == "plot")
            s.plot = (value == "true" || value == "1");
        else if (key == "p1_form")
            s.p1_form = p1_form_from_string(value);
        else if (key == "truncation") {
            std::vector<double> t = parse_grid(key, value);
            if (t.size() == 1)
                s.truncation = {int(t[0]), int(t[0])};
            else if (t.size() == 2)
                s.truncation = {int(t[0]), int(t[1])};
            else
                throw std::invalid_argument("parse_config: truncation takes one or two integers");
        } else if (key == "gamma")
            s.params.gamma = parse_number(key, value);
        else if (key == "gamma_f")
            s.params.gamma_f = parse_number(key, value);
        else if (key == "kappa")
            s.params.kappa = parse_number(key, value);
        else if (key == "chi") {
            s.params.chi = parse_number(key, value);
            chi_given = true;
        } else if (key == "delta_s")
            s.params.delta_s = parse_number(key, value);
        else if (key == "delta")
            s.params.delta = parse_number(key, value);
        else if (key == "epsilon")
            s.params.epsilon = parse_number(key, value);
        else if (key == "k")
            k_override = parse_number(key, value);
        else if (key == "qubit.g") {
            qp.g = parse_number(key, value);
            qubit_given = true;
        } else if (key == "qubit.omega") {
            qp.omega = parse_number(key, value);
            qubit_given = true;
        } else if (key == "qubit.delta_qT") {
            qp.delta_qT = parse_number(key, value);
            qubit_given = true;
        } else if (key == "k_grid")
            s.k_grid = parse_grid(key, value);
        else if (key == "eps_grid")
            s.eps_grid = parse_grid(key, value);
        else if (key == "delta_s_grid")
            s.delta_s_grid = parse_grid(key, value);
        else if (key == "chi_grid")
            s.chi_grid = parse_grid(key, value);
        else if (key == "delta_qT_grid")
            s.delta_qt_grid = parse_grid(key, value);
        else if (key == "k_values")
            s.k_values = parse_grid(key, value);
        else if (key == "delta_s_values")
            s.delta_s_values = parse_grid(key, value);
        else if (key == "modes")
            s.modes = parse_modes(value);
        else
            throw std::invalid_argument("parse_config: unknown key '" + key + "'");
    }

    if (qubit_given) {
        if (chi_given)
            throw std::invalid_argument(
                "parse_config: give either chi or a qubit block, not both");
        if (qp.g <= 0 || qp.omega <= 0 || qp.delta_qT <= 0)
            throw std::invalid_argument(
                "parse_config: qubit block needs positive qubit.g, qubit.omega, qubit.delta_qT");
        s.params.qubit = qp;
        s.params.chi = kerr_from_qubit(qp.g, qp.omega, qp.delta_qT).chi;
        s.chi_source = "qubit";
    } else if (chi_given && !from_recipe) {
        s.chi_source = "config";
    }
    if (k_override) s.params.set_k(*k_override);

    s.validate();
    return s;
}

} // namespace cfq
