// horolab: experiment driver for the homogeneous-dynamics laboratory.
// Subcommands: cones check, equidist run, nondiv run, growth run,
// count-horospheres, count-flags, fit, plot.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "horolab/cartan.hpp"
#include "horolab/csv.hpp"
#include "horolab/experiments.hpp"
#include "horolab/fit.hpp"
#include "horolab/svg.hpp"

namespace {

using namespace horolab;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<double> parse_csv_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::runtime_error("empty entry in list: " + text);
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::runtime_error("empty list");
    return out;
}

int run_config_command(const std::string& config_path, const std::string& expected_kind) {
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(read_file(config_path));
    if (cfg.kind != expected_kind)
        throw InvalidConfig("config kind '" + cfg.kind + "' does not match the subcommand '" +
                            expected_kind + "'");
    const RunManifest manifest = run(cfg);
    std::cout << manifest.to_json_text();
    return 0;
}

// y column: prefer exact counts, fall back to estimates
std::string pick_y_column(const CsvTable& table) {
    if (table.column("count") >= 0) return "count";
    if (table.column("estimate") >= 0) return "estimate";
    if (table.header.size() >= 2) return table.header[1];
    throw std::runtime_error("csv has no usable y column");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"horolab: horospherical equidistribution and counting laboratory"};
    app.require_subcommand(1);

    // cones check
    auto* cones = app.add_subcommand("cones", "cone membership queries");
    auto* cones_check = cones->add_subcommand("check", "classify a diagonal direction");
    int cc_n = 0;
    std::string cc_entries;
    bool cc_mult = false;
    std::string cc_out;
    cones_check->add_option("--n", cc_n, "dimension")->required();
    cones_check->add_option("--entries", cc_entries, "comma-separated t_1,...,t_n")->required();
    cones_check->add_flag("--multiplicative", cc_mult,
                          "entries are those of a positive diagonal matrix; logs are taken");
    cones_check->add_option("--out", cc_out, "also write a run manifest to this directory");

    // config-driven experiments
    std::string eq_config, nd_config, gr_config;
    auto* equidist = app.add_subcommand("equidist", "equidistribution discrepancy experiment");
    auto* equidist_run = equidist->add_subcommand("run", "run from a config file");
    equidist_run->add_option("--config", eq_config, "JSON config")->required();
    auto* nondiv = app.add_subcommand("nondiv", "non-divergence (escape mass) experiment");
    auto* nondiv_run = nondiv->add_subcommand("run", "run from a config file");
    nondiv_run->add_option("--config", nd_config, "JSON config")->required();
    auto* growth = app.add_subcommand("growth", "representation growth experiment");
    auto* growth_run = growth->add_subcommand("run", "run from a config file");
    growth_run->add_option("--config", gr_config, "JSON config")->required();

    // count-horospheres
    auto* ch = app.add_subcommand("count-horospheres", "lifts of a closed horosphere meeting a ball");
    int ch_n = 0, ch_grid = 0;
    double ch_rmax = 0.0;
    std::string ch_a0, ch_out = ".";
    std::int64_t ch_bound = 0;
    std::uint64_t ch_seed = 0;
    ch->add_option("--n", ch_n, "dimension (2 or 3)")->required();
    ch->add_option("--a0", ch_a0, "comma-separated diagonal of the base point")->required();
    ch->add_option("--rmax", ch_rmax, "largest radius")->required();
    ch->add_option("--grid", ch_grid, "number of grid points")->required();
    ch->add_option("--bound", ch_bound, "enumeration bound override (certified when omitted)");
    ch->add_option("--out", ch_out, "output directory");
    ch->add_option("--seed", ch_seed, "seed recorded in the manifest");

    // count-flags
    auto* cf = app.add_subcommand("count-flags", "rational points of bounded height");
    std::string cf_variety, cf_out = ".";
    double cf_tmax = 0.0, cf_tmin = 0.0;
    int cf_grid = 0;
    std::uint64_t cf_seed = 0;
    cf->add_option("--variety", cf_variety, "p1|p2|p3|flag3")->required();
    cf->add_option("--tmax", cf_tmax, "largest height threshold")->required();
    cf->add_option("--grid", cf_grid, "number of grid points")->required();
    cf->add_option("--tmin", cf_tmin, "smallest threshold (default tmax/1000)");
    cf->add_option("--out", cf_out, "output directory");
    cf->add_option("--seed", cf_seed, "seed recorded in the manifest");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a growth law to a CSV series");
    std::string fit_in, fit_model = "exp", fit_out;
    int fit_degree = 1;
    fit_cmd->add_option("--input", fit_in, "input CSV")->required();
    fit_cmd->add_option("--model", fit_model, "exp | powerlaw | logpoly");
    fit_cmd->add_option("--degree", fit_degree, "polynomial degree for logpoly");
    fit_cmd->add_option("--output", fit_out, "write the fit JSON here (stdout otherwise)");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render a CSV series as SVG");
    std::string plot_in, plot_out, plot_title, plot_xlabel, plot_ylabel;
    bool plot_logx = false, plot_logy = false;
    plot_cmd->add_option("--input", plot_in, "input CSV")->required();
    plot_cmd->add_option("--output", plot_out, "output SVG")->required();
    plot_cmd->add_flag("--logx", plot_logx, "log x axis");
    plot_cmd->add_flag("--logy", plot_logy, "log y axis");
    plot_cmd->add_option("--title", plot_title, "plot title");
    plot_cmd->add_option("--xlabel", plot_xlabel, "x label");
    plot_cmd->add_option("--ylabel", plot_ylabel, "y label");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cones_check) {
            Json params;
            params["n"] = cc_n;
            params["entries"] = parse_csv_numbers(cc_entries);
            if (cc_mult) params["multiplicative"] = true;
            ExperimentConfig cfg;
            cfg.kind = "cones";
            cfg.seed = 0;
            cfg.output_dir = cc_out.empty() ? "." : cc_out;
            cfg.params = params;
            Json printed;
            if (!cc_out.empty()) {
                const RunManifest manifest = run(cfg);
                printed = manifest.summary;
            } else {
                // compute without touching the filesystem
                Eigen::VectorXd x(cc_n);
                auto entries = parse_csv_numbers(cc_entries);
                if (static_cast<int>(entries.size()) != cc_n)
                    throw InvalidConfig("cones: expected n entries");
                for (int i = 0; i < cc_n; ++i) {
                    if (cc_mult && !(entries[i] > 0.0))
                        throw InvalidConfig("cones: multiplicative entries must be positive");
                    x[i] = cc_mult ? std::log(entries[i]) : entries[i];
                }
                if (cc_mult) {
                    // absorb determinant rounding, reject a wrong determinant
                    if (std::abs(x.mean()) > 1e-6)
                        throw InvalidConfig("cones: multiplicative entries must have product 1");
                    x.array() -= x.mean();
                }
                const CartanVector v{x};
                printed["in_A"] = cone_membership(v, ConeKind::weyl_chamber());
                printed["in_C"] = cone_membership(v, ConeKind::convergence());
                Json cj = Json::array();
                for (int j = 1; j < cc_n; ++j) cj.push_back(cone_membership(v, ConeKind::cj(j)));
                printed["in_Cj"] = cj;
                printed["in_Ctilde"] = cone_membership(v, ConeKind::cj_union());
                printed["depth"] = depth(v);
            }
            Json shown;
            for (const char* key : {"in_A", "in_C", "in_Cj", "in_Ctilde", "depth"})
                shown[key] = printed.at(key);
            std::cout << shown.dump(2) << "\n";
            return 0;
        }
        if (*equidist_run) return run_config_command(eq_config, "equidist");
        if (*nondiv_run) return run_config_command(nd_config, "nondiv");
        if (*growth_run) return run_config_command(gr_config, "growth");
        if (*ch) {
            Json params;
            params["n"] = ch_n;
            params["a0"] = parse_csv_numbers(ch_a0);
            params["rmax"] = ch_rmax;
            params["grid"] = ch_grid;
            if (ch_bound > 0) params["bound"] = ch_bound;
            ExperimentConfig cfg;
            cfg.kind = "count-horospheres";
            cfg.seed = ch_seed;
            cfg.output_dir = ch_out;
            cfg.params = params;
            std::cout << run(cfg).to_json_text();
            return 0;
        }
        if (*cf) {
            Json params;
            params["variety"] = cf_variety;
            params["tmax"] = cf_tmax;
            params["tmin"] = cf_tmin > 0.0 ? cf_tmin : cf_tmax / 1000.0;
            params["grid"] = cf_grid;
            ExperimentConfig cfg;
            cfg.kind = "count-flags";
            cfg.seed = cf_seed;
            cfg.output_dir = cf_out;
            cfg.params = params;
            std::cout << run(cfg).to_json_text();
            return 0;
        }
        if (*fit_cmd) {
            const CsvTable table = read_csv(read_file(fit_in));
            const std::string ycol = pick_y_column(table);
            const std::vector<double> xs = table.numeric_column(table.header[0]);
            const std::vector<double> ys = table.numeric_column(ycol);
            Json j;
            j["model"] = fit_model;
            j["x_column"] = table.header[0];
            j["y_column"] = ycol;
            if (fit_model == "exp" || fit_model == "powerlaw") {
                std::vector<double> fx, fy;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (!(ys[i] > 0.0)) continue;
                    if (fit_model == "powerlaw" && !(xs[i] > 0.0)) continue;
                    fx.push_back(fit_model == "powerlaw" ? std::log(xs[i]) : xs[i]);
                    fy.push_back(std::log(ys[i]));
                }
                const LinearFit lf = fit_line(fx, fy);
                j["slope"] = lf.slope;
                j["slope_se"] = lf.slope_se;
                j["intercept"] = lf.intercept;
                j["r2"] = lf.r2;
                j["points_used"] = static_cast<int>(fx.size());
            } else if (fit_model == "logpoly") {
                std::vector<double> fx, fy;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (!(xs[i] > 0.0)) continue;
                    fx.push_back(std::log(xs[i]));
                    fy.push_back(ys[i] / xs[i]);
                }
                const PolyFit pf = fit_poly(fx, fy, fit_degree);
                Json coeffs = Json::array(), ses = Json::array();
                for (Eigen::Index k = 0; k < pf.coeffs.size(); ++k) {
                    coeffs.push_back(pf.coeffs[k]);
                    ses.push_back(pf.ses[k]);
                }
                j["coeffs"] = coeffs;
                j["ses"] = ses;
                j["r2"] = pf.r2;
                j["degree"] = fit_degree;
            } else {
                throw std::runtime_error("unknown model '" + fit_model + "'");
            }
            const std::string text = j.dump(2) + "\n";
            if (fit_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream f(fit_out, std::ios::binary);
                f << text;
            }
            return 0;
        }
        if (*plot_cmd) {
            const CsvTable table = read_csv(read_file(plot_in));
            const std::string ycol = pick_y_column(table);
            PlotSeries ps;
            ps.label = ycol;
            ps.x = table.numeric_column(table.header[0]);
            ps.y = table.numeric_column(ycol);
            if (table.column("stderr") >= 0) {
                // stderr may be blank for exact series
                const int c = table.column("stderr");
                bool all_numeric = true;
                for (const auto& row : table.rows)
                    if (row[c].empty()) all_numeric = false;
                if (all_numeric) ps.yerr = table.numeric_column("stderr");
            }
            PlotStyle style;
            style.title = plot_title;
            style.xlabel = plot_xlabel.empty() ? table.header[0] : plot_xlabel;
            style.ylabel = plot_ylabel.empty() ? ycol : plot_ylabel;
            style.logx = plot_logx;
            style.logy = plot_logy;
            std::ofstream f(plot_out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open: " + plot_out);
            f << emit_plot({ps}, style);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "no subcommand executed\n";
    return 1;
}
