#include "cfq/experiments.hpp"

#include "cfq/csv.hpp"
#include "cfq/pool.hpp"
#include "cfq/svg.hpp"
#include "cfq/version.hpp"
#include "cfq/weak_drive.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace cfq {

namespace {

namespace fs = std::filesystem;

std::string flag(bool b) { return b ? "1" : "0"; }

std::string token(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    for (char& c : s) {
        if (c == '.') c = 'p';
        if (c == '-') c = 'm';
        if (c == '+') c = '\0';
    }
    s.erase(std::remove(s.begin(), s.end(), '\0'), s.end());
    return s;
}

std::string clean_error(std::string e) {
    for (char& c : e) {
        if (c == ',') c = ';';
        if (c == '\n') c = ' ';
    }
    return e;
}

std::string grid_desc(const std::vector<double>& g) {
    if (g.empty()) return "(empty)";
    return std::to_string(g.size()) + " points [" + format_double(g.front()) + ", " +
           format_double(g.back()) + "]";
}

void common_manifest(CsvFile& csv, const Scenario& s, const CircuitParams& p) {
    csv.manifest("version", version);
    csv.manifest("experiment", to_string(s.experiment));
    csv.manifest("name", s.name);
    csv.manifest("unit_mode", to_string(s.unit_mode));
    csv.manifest("p1_form", to_string(s.p1_form));
    csv.manifest("chi_source", s.chi_source);
    csv.manifest("params", canonical_params(p));
    csv.manifest("params_hash", params_hash(p));
    if (s.truncation[0] > 0)
        csv.manifest("truncation", std::to_string(s.truncation[0]) + "," +
                                       std::to_string(s.truncation[1]));
    else
        csv.manifest("truncation", "per-point rule");
}

ModeSpace point_space(const CircuitParams& p, std::array<int, 2> dims_override) {
    if (dims_override[0] > 0 && dims_override[1] > 0)
        return ModeSpace({dims_override[0], dims_override[1]});
    return default_truncation(p);
}

std::string save(CsvFile& csv, const Scenario& s, const std::string& basename, RunOutcome& oc) {
    std::string path = (fs::path(s.out_dir) / (basename + ".csv")).string();
    csv.write(path);
    oc.files_written.push_back(path);
    return path;
}

void save_plot(const Scenario& s, const std::string& basename, const std::string& title,
               const std::string& xlabel, const std::string& ylabel,
               const std::vector<SvgSeries>& series, bool log_y, RunOutcome& oc) {
    if (!s.plot) return;
    std::string path = (fs::path(s.out_dir) / (basename + ".svg")).string();
    write_line_plot(path, title, xlabel, ylabel, series, log_y);
    oc.files_written.push_back(path);
}

// rows carrying a solved g2 point share one layout across the sweep writers
void g2_cells(std::vector<std::string>& cells, const SweepPoint& pt, const std::string& hash) {
    if (pt.failed) {
        cells.insert(cells.end(), {"", "", ""});
    } else {
        cells.push_back(format_double(pt.g2));
        cells.push_back(format_double(pt.mean_photon));
        cells.push_back(format_double(pt.residual));
    }
    cells.push_back(std::to_string(pt.dims[0]));
    cells.push_back(std::to_string(pt.dims[1]));
    cells.push_back(flag(pt.converged));
    cells.push_back(flag(pt.failed));
    cells.push_back(clean_error(pt.error));
    cells.push_back(hash);
}

void point_summary(CsvFile& csv, const std::vector<SweepPoint>& pts, RunOutcome& oc,
                   const std::string& coord_name) {
    double rmax = 0;
    int nfail = 0, nuncv = 0;
    for (const auto& pt : pts) {
        ++oc.points_total;
        if (pt.failed) {
            ++nfail;
            ++oc.points_failed;
            csv.manifest("failure", coord_name + "=" + format_double(pt.x) +
                                        (pt.y != 0 ? " y=" + format_double(pt.y) : "") + " " +
                                        clean_error(pt.error));
        } else {
            rmax = std::max(rmax, pt.residual);
            if (!pt.converged) ++nuncv;
        }
    }
    csv.manifest("residual_max", rmax);
    csv.manifest("unconverged_points", std::to_string(nuncv));
    csv.manifest("failed_points", std::to_string(nfail));
}

void write_roots_table(const Scenario& s, RunOutcome& oc) {
    BistabilityCoefficients bc = bistability_coefficients(s.params, s.p1_form);
    CsvFile csv("epsilon,root_index,C0_sq,A0_sq,stable,leading_eigenvalue,params_hash");
    common_manifest(csv, s, s.params);
    csv.manifest("eps_grid", grid_desc(s.eps_grid));
    csv.manifest("p1", bc.p1);
    csv.manifest("p2", bc.p2);
    if (s.params.chi != 0) {
        double thr_sq = std::sqrt(3.0) * bc.p1 * bc.p1 * bc.p1 / s.params.chi;
        csv.manifest("threshold_eps_sq", thr_sq);
        if (thr_sq > 0) csv.manifest("threshold_eps", std::sqrt(thr_sq));
    }

    bool any3 = false;
    double lo = 0, hi = 0;
    int nfail = 0;
    std::vector<SvgSeries> branches(3);
    for (size_t i = 0; i < branches.size(); ++i) branches[i].label = "branch " + std::to_string(i);

    for (double eps : s.eps_grid) {
        CircuitParams q = s.params;
        q.epsilon = eps;
        ++oc.points_total;
        try {
            BistabilityResult r = steady_roots(q, s.p1_form);
            std::string hash = params_hash(q);
            for (size_t i = 0; i < r.roots.size(); ++i) {
                const CubicRoot& root = r.roots[i];
                csv.row({format_double(eps), std::to_string(i), format_double(root.X),
                         format_double(root.A0_sq), flag(root.stable),
                         format_double(root.leading_eigenvalue), hash});
                if (i < 3) {
                    branches[i].x.push_back(eps);
                    branches[i].y.push_back(root.A0_sq);
                }
            }
            if (r.roots.size() == 3) {
                if (!any3) lo = eps;
                hi = eps;
                any3 = true;
            }
        } catch (const std::exception& e) {
            ++nfail;
            ++oc.points_failed;
            csv.manifest("failure", "eps=" + format_double(eps) + " " + clean_error(e.what()));
        }
    }
    csv.manifest("window",
                 any3 ? "[" + format_double(lo) + ", " + format_double(hi) + "]" : "(none)");
    csv.manifest("failed_points", std::to_string(nfail));
    std::string base = s.name + "_roots";
    save(csv, s, base, oc);
    save_plot(s, base, "steady |A0|^2 branches", "epsilon", "|A0|^2", branches, false, oc);
}

void write_hysteresis_table(const Scenario& s, RunOutcome& oc) {
    CsvFile csv("epsilon,a_sq_up,c_sq_up,a_sq_down,c_sq_down,params_hash");
    common_manifest(csv, s, s.params);
    csv.manifest("eps_grid", grid_desc(s.eps_grid));
    oc.points_total += int(s.eps_grid.size());
    try {
        HysteresisTrace t = hysteresis(s.params, s.eps_grid, s.p1_form);
        for (size_t i = 0; i < t.eps.size(); ++i) {
            CircuitParams q = s.params;
            q.epsilon = t.eps[i];
            csv.row({format_double(t.eps[i]), format_double(t.a_sq_up[i]),
                     format_double(t.c_sq_up[i]), format_double(t.a_sq_down[i]),
                     format_double(t.c_sq_down[i]), params_hash(q)});
        }
        csv.manifest("failed_points", "0");
        std::string base = s.name + "_hysteresis";
        save(csv, s, base, oc);
        save_plot(s, base, "mean-field hysteresis", "epsilon", "|A|^2",
                  {{"up sweep", t.eps, t.a_sq_up}, {"down sweep", t.eps, t.a_sq_down}}, false,
                  oc);
    } catch (const std::exception& e) {
        oc.points_failed += int(s.eps_grid.size());
        csv.manifest("failure", clean_error(e.what()));
        csv.manifest("failed_points", std::to_string(s.eps_grid.size()));
        save(csv, s, s.name + "_hysteresis", oc);
    }
}

void write_ksweep(const Scenario& s, RunOutcome& oc) {
    std::vector<double> ds_list =
        s.delta_s_values.empty() ? std::vector<double>{s.params.delta_s} : s.delta_s_values;
    for (double ds : ds_list)
        for (CavityMode m : s.modes) {
            CircuitParams p = s.params;
            p.delta_s = ds;
            std::vector<SweepPoint> pts = k_sweep(p, s.k_grid, m, s.truncation);

            CsvFile csv("K,g2_numeric,g2_analytic,mean_photon,residual,dim_a,dim_c,converged,"
                        "failed,error,params_hash");
            common_manifest(csv, s, p);
            csv.manifest("mode", to_string(m));
            csv.manifest("k_grid", grid_desc(s.k_grid));

            SvgSeries numeric{"numeric", {}, {}}, analytic{"closed form", {}, {}};
            for (const auto& pt : pts) {
                CircuitParams q = p;
                q.set_k(pt.x);
                std::string closed;
                if (m == CavityMode::a) {
                    try {
                        double v = g2_closed_form(q, pt.x);
                        closed = format_double(v);
                        analytic.x.push_back(pt.x);
                        analytic.y.push_back(v);
                    } catch (const std::exception&) {
                    }
                }
                std::vector<std::string> cells{format_double(pt.x),
                                               pt.failed ? "" : format_double(pt.g2), closed};
                if (pt.failed)
                    cells.insert(cells.end(), {"", ""});
                else {
                    cells.push_back(format_double(pt.mean_photon));
                    cells.push_back(format_double(pt.residual));
                }
                cells.insert(cells.end(),
                             {std::to_string(pt.dims[0]), std::to_string(pt.dims[1]),
                              flag(pt.converged), flag(pt.failed), clean_error(pt.error),
                              params_hash(q)});
                csv.row(cells);
                if (!pt.failed) {
                    numeric.x.push_back(pt.x);
                    numeric.y.push_back(pt.g2);
                }
            }
            point_summary(csv, pts, oc, "K");
            std::string base = s.name + "_ksweep_" + to_string(m) + "_ds" + token(ds);
            save(csv, s, base, oc);
            std::vector<SvgSeries> series{numeric};
            if (!analytic.x.empty()) series.push_back(analytic);
            save_plot(s, base, "g2(0) vs K, mode " + to_string(m), "K", "g2(0)", series, true,
                      oc);
        }
}

void write_map(const Scenario& s, RunOutcome& oc) {
    for (CavityMode m : s.modes) {
        std::vector<SweepPoint> pts =
            k_delta_s_map(s.params, s.k_grid, s.delta_s_grid, m, s.truncation);
        CsvFile csv("K,delta_s,g2,mean_photon,residual,dim_a,dim_c,converged,failed,error,"
                    "params_hash");
        common_manifest(csv, s, s.params);
        csv.manifest("mode", to_string(m));
        csv.manifest("k_grid", grid_desc(s.k_grid));
        csv.manifest("delta_s_grid", grid_desc(s.delta_s_grid));

        size_t nk = s.k_grid.size(), nd = s.delta_s_grid.size();
        std::vector<double> cell_values(nk * nd, std::numeric_limits<double>::quiet_NaN());
        for (size_t i = 0; i < pts.size(); ++i) {
            const auto& pt = pts[i];
            CircuitParams q = s.params;
            q.set_k(pt.x);
            q.delta_s = pt.y;
            std::vector<std::string> cells{format_double(pt.x), format_double(pt.y)};
            g2_cells(cells, pt, params_hash(q));
            csv.row(cells);
            if (!pt.failed) cell_values[(i % nd) * nk + i / nd] = pt.g2;
        }
        point_summary(csv, pts, oc, "K");
        std::string base = s.name + "_map_" + to_string(m);
        save(csv, s, base, oc);
        if (s.plot) {
            std::string path = (fs::path(s.out_dir) / (base + ".svg")).string();
            write_heat_map(path, "g2(0) map, mode " + to_string(m), "K", "delta_s", s.k_grid,
                           s.delta_s_grid, cell_values);
            oc.files_written.push_back(path);
        }
    }
}

void write_drive_sweep(const Scenario& s, RunOutcome& oc) {
    std::vector<double> ds_list =
        s.delta_s_values.empty() ? std::vector<double>{s.params.delta_s} : s.delta_s_values;
    for (double kv : s.k_values)
        for (double ds : ds_list)
            for (CavityMode m : s.modes) {
                CircuitParams p = s.params;
                p.delta_s = ds;
                std::vector<SweepPoint> pts =
                    drive_strength_sweep(p, s.eps_grid, kv, m, s.truncation);

                CsvFile csv("epsilon,eps_over_kappa,g2,mean_photon,residual,dim_a,dim_c,"
                            "converged,failed,error,params_hash");
                common_manifest(csv, s, p);
                csv.manifest("mode", to_string(m));
                csv.manifest("K", kv);
                csv.manifest("eps_grid", grid_desc(s.eps_grid));

                SvgSeries line{"g2", {}, {}};
                for (const auto& pt : pts) {
                    CircuitParams q = p;
                    q.set_k(kv);
                    q.epsilon = pt.x;
                    std::vector<std::string> cells{
                        format_double(pt.x),
                        format_double(p.kappa > 0 ? pt.x / p.kappa : 0)};
                    g2_cells(cells, pt, params_hash(q));
                    csv.row(cells);
                    if (!pt.failed) {
                        line.x.push_back(p.kappa > 0 ? pt.x / p.kappa : pt.x);
                        line.y.push_back(pt.g2);
                    }
                }
                point_summary(csv, pts, oc, "eps");
                std::string base =
                    s.name + "_drive_k" + token(kv) + "_ds" + token(ds) + "_" + to_string(m);
                save(csv, s, base, oc);
                save_plot(s, base, "g2(0) vs drive, K=" + token(kv), "eps/kappa", "g2(0)",
                          {line}, true, oc);
            }
}

void write_chi_sweep(const Scenario& s, RunOutcome& oc) {
    bool via_qubit = !s.delta_qt_grid.empty();
    const std::vector<double>& grid = via_qubit ? s.delta_qt_grid : s.chi_grid;
    double k_fixed = !s.k_values.empty() ? s.k_values[0]
                     : s.params.chi != 0 ? s.params.k()
                                         : 1.0;

    struct ChiRow {
        SweepPoint pt;
        CircuitParams q;
        double dqt = 0, r1 = 0, r2 = 0;
        bool warn = false;
    };
    std::vector<ChiRow> rows(grid.size());
    parallel_for(int(grid.size()), [&](int i) {
        ChiRow& row = rows[size_t(i)];
        row.q = s.params;
        if (via_qubit) {
            row.dqt = grid[size_t(i)];
            KerrFromQubit kq =
                kerr_from_qubit(s.params.qubit->g, s.params.qubit->omega, row.dqt);
            row.q.chi = kq.chi;
            row.q.qubit = QubitParams{s.params.qubit->g, s.params.qubit->omega, row.dqt};
            row.r1 = kq.ratio_g2_omega;
            row.r2 = kq.ratio_g_detuning;
            row.warn = kq.validity_warning;
        } else {
            row.q.chi = grid[size_t(i)];
        }
        row.q.set_k(k_fixed);
        row.pt = g2_sweep_point(row.q, point_space(row.q, s.truncation),
                                s.modes.empty() ? CavityMode::a : s.modes[0], row.q.chi);
    });

    CsvFile csv("delta_qT,chi,ratio_g2_omega,ratio_g_detuning,validity_warning,g2,mean_photon,"
                "residual,dim_a,dim_c,converged,failed,error,params_hash");
    common_manifest(csv, s, s.params);
    csv.manifest("K", k_fixed);
    csv.manifest(via_qubit ? "delta_qT_grid" : "chi_grid", grid_desc(grid));
    if (via_qubit) {
        csv.manifest("qubit.g", s.params.qubit->g);
        csv.manifest("qubit.omega", s.params.qubit->omega);
    }

    SvgSeries line{"g2", {}, {}};
    std::vector<SweepPoint> pts;
    for (const auto& row : rows) {
        std::vector<std::string> cells{via_qubit ? format_double(row.dqt) : "",
                                       format_double(row.q.chi),
                                       via_qubit ? format_double(row.r1) : "",
                                       via_qubit ? format_double(row.r2) : "",
                                       via_qubit ? flag(row.warn) : ""};
        g2_cells(cells, row.pt, params_hash(row.q));
        csv.row(cells);
        pts.push_back(row.pt);
        if (!row.pt.failed) {
            line.x.push_back(row.q.chi);
            line.y.push_back(row.pt.g2);
        }
    }
    point_summary(csv, pts, oc, "chi");
    std::string base = s.name + "_chisweep";
    save(csv, s, base, oc);
    save_plot(s, base, "g2(0) vs Kerr strength", "chi", "g2(0)", {line}, true, oc);
}

double rel_diff(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

void write_weak_compare(const Scenario& s, RunOutcome& oc) {
    struct CompareRow {
        SweepPoint quantum;
        double weak = 0, closed = 0;
        bool weak_ok = false, closed_ok = false;
        std::string weak_err, closed_err;
        CircuitParams q;
    };
    std::vector<CompareRow> rows(s.k_grid.size());
    parallel_for(int(s.k_grid.size()), [&](int i) {
        CompareRow& row = rows[size_t(i)];
        row.q = s.params;
        row.q.set_k(s.k_grid[size_t(i)]);
        row.quantum = g2_sweep_point(row.q, point_space(row.q, s.truncation), CavityMode::a,
                                     s.k_grid[size_t(i)]);
        try {
            row.weak = g2_weak_drive(row.q);
            row.weak_ok = true;
        } catch (const std::exception& e) {
            row.weak_err = e.what();
        }
        try {
            row.closed = g2_closed_form(row.q, s.k_grid[size_t(i)]);
            row.closed_ok = true;
        } catch (const std::exception& e) {
            row.closed_err = e.what();
        }
    });

    CsvFile csv("K,g2_quantum,g2_weak,g2_closed,rel_qw,rel_qc,rel_wc,converged,failed,error,"
                "params_hash");
    common_manifest(csv, s, s.params);
    csv.manifest("k_grid", grid_desc(s.k_grid));

    SvgSeries sq{"quantum", {}, {}}, sw{"weak drive", {}, {}}, sc{"closed form", {}, {}};
    double worst_qw = 0, worst_qc = 0, worst_wc = 0;
    std::vector<SweepPoint> pts;
    for (const auto& row : rows) {
        bool qok = !row.quantum.failed;
        std::string err = clean_error(row.quantum.error);
        if (!row.weak_ok) err += (err.empty() ? "" : " ") + clean_error(row.weak_err);
        if (!row.closed_ok) err += (err.empty() ? "" : " ") + clean_error(row.closed_err);
        std::vector<std::string> cells{format_double(row.quantum.x)};
        cells.push_back(qok ? format_double(row.quantum.g2) : "");
        cells.push_back(row.weak_ok ? format_double(row.weak) : "");
        cells.push_back(row.closed_ok ? format_double(row.closed) : "");
        cells.push_back(qok && row.weak_ok ? format_double(rel_diff(row.quantum.g2, row.weak))
                                           : "");
        cells.push_back(qok && row.closed_ok
                            ? format_double(rel_diff(row.quantum.g2, row.closed))
                            : "");
        cells.push_back(row.weak_ok && row.closed_ok
                            ? format_double(rel_diff(row.weak, row.closed))
                            : "");
        cells.push_back(flag(row.quantum.converged));
        cells.push_back(flag(!qok || !row.weak_ok || !row.closed_ok));
        cells.push_back(err);
        cells.push_back(params_hash(row.q));
        csv.row(cells);

        SweepPoint pt = row.quantum;
        pt.failed = !qok || !row.weak_ok || !row.closed_ok;
        pt.error = err;
        pts.push_back(pt);
        if (qok) {
            sq.x.push_back(row.quantum.x);
            sq.y.push_back(row.quantum.g2);
            if (row.weak_ok) worst_qw = std::max(worst_qw, rel_diff(row.quantum.g2, row.weak));
            if (row.closed_ok)
                worst_qc = std::max(worst_qc, rel_diff(row.quantum.g2, row.closed));
        }
        if (row.weak_ok) {
            sw.x.push_back(row.quantum.x);
            sw.y.push_back(row.weak);
            if (row.closed_ok) worst_wc = std::max(worst_wc, rel_diff(row.weak, row.closed));
        }
        if (row.closed_ok) {
            sc.x.push_back(row.quantum.x);
            sc.y.push_back(row.closed);
        }
    }
    csv.manifest("worst_rel_qw", worst_qw);
    csv.manifest("worst_rel_qc", worst_qc);
    csv.manifest("worst_rel_wc", worst_wc);
    point_summary(csv, pts, oc, "K");
    std::string base = s.name + "_compare";
    save(csv, s, base, oc);
    save_plot(s, base, "g2(0): three routes", "K", "g2(0)", {sq, sw, sc}, true, oc);
}

} // namespace

RunOutcome run(const Scenario& s) {
    s.validate();
    fs::create_directories(s.out_dir);
    RunOutcome oc;
    switch (s.experiment) {
        case Experiment::bistability:
            write_roots_table(s, oc);
            break;
        case Experiment::hysteresis:
            write_roots_table(s, oc);
            write_hysteresis_table(s, oc);
            break;
        case Experiment::g2_ksweep:
            write_ksweep(s, oc);
            break;
        case Experiment::g2_map:
            write_map(s, oc);
            break;
        case Experiment::g2_drive_sweep:
            write_drive_sweep(s, oc);
            break;
        case Experiment::g2_chi_sweep:
            write_chi_sweep(s, oc);
            break;
        case Experiment::weak_drive_compare:
            write_weak_compare(s, oc);
            break;
        case Experiment::validate: {
            int fails = 0, checks = 0;
            std::string report = validation_report(s, &fails, &checks);
            std::string path = (fs::path(s.out_dir) / "validation_report.txt").string();
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open " + path + " for writing");
            f << report;
            oc.files_written.push_back(path);
            oc.points_total = checks;
            oc.points_failed = fails;
            break;
        }
    }
    return oc;
}

} // namespace cfq
