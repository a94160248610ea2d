#include "horolab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "horolab/cartan.hpp"
#include "horolab/csv.hpp"
#include "horolab/dynamics.hpp"
#include "horolab/horocount.hpp"
#include "horolab/manin.hpp"
#include "horolab/parallel.hpp"
#include "horolab/sha1.hpp"
#include "horolab/svg.hpp"

namespace horolab {

namespace fs = std::filesystem;

namespace {

constexpr double kLn10 = 2.302585092994045684;

struct Outputs {
    Json summary = Json::object();
    std::vector<std::pair<std::string, std::string>> files; // name -> content
};

CartanVector cartan_from_params(int n, const std::vector<double>& entries, bool multiplicative,
                                const std::string& context) {
    if (static_cast<int>(entries.size()) != n)
        throw InvalidConfig(context + ": expected " + std::to_string(n) + " entries");
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = entries[i];
    if (multiplicative) {
        for (int i = 0; i < n; ++i) {
            if (!(x[i] > 0.0))
                throw InvalidConfig(context + ": multiplicative entries must be positive");
            x[i] = std::log(x[i]);
        }
        // tolerate determinant rounding in the input, not a wrong determinant
        const double mean = x.mean();
        if (std::abs(mean) > 1e-6)
            throw InvalidConfig(context + ": multiplicative entries must have product 1");
        x.array() -= mean;
    }
    try {
        return CartanVector(x);
    } catch (const std::invalid_argument& e) {
        throw InvalidConfig(context + ": " + e.what());
    }
}

CsvTable series_table() {
    CsvTable t;
    t.header = {"t", "eps", "estimate", "stderr", "n_samples"};
    return t;
}

Outputs run_cones(const ExperimentConfig& cfg) {
    FieldReader f(cfg.params, "cones");
    const int n = static_cast<int>(f.integer("n"));
    const auto entries = f.number_array("entries");
    const bool multiplicative = f.boolean("multiplicative", false);
    f.done();
    if (n < 2) throw InvalidConfig("cones: n >= 2 required");
    const CartanVector x = cartan_from_params(n, entries, multiplicative, "cones");

    Outputs out;
    out.summary["in_A"] = cone_membership(x, ConeKind::weyl_chamber());
    out.summary["in_C"] = cone_membership(x, ConeKind::convergence());
    Json cj = Json::array();
    for (int j = 1; j < n; ++j) cj.push_back(cone_membership(x, ConeKind::cj(j)));
    out.summary["in_Cj"] = cj;
    out.summary["in_Ctilde"] = cone_membership(x, ConeKind::cj_union());
    out.summary["depth"] = depth(x);
    Json weights = Json::array();
    for (int i = 1; i < n; ++i) weights.push_back(eval_weight(x, i));
    out.summary["weights"] = weights;
    return out;
}

Outputs run_equidist(const ExperimentConfig& cfg) {
    FieldReader f(cfg.params, "equidist");
    const int n = static_cast<int>(f.integer("n"));
    const auto theta = f.number_array("theta");
    const auto times = f.number_array("times");
    const std::int64_t samples = f.integer("samples");
    const double radius = f.number("bump_radius");
    const auto order = static_cast<int>(f.integer("bump_order"));
    const bool primitive = f.boolean("primitive", false);
    f.done();
    if (samples <= 0) throw InvalidConfig("equidist: samples must be positive");
    if (!(radius > 0.0)) throw InvalidConfig("equidist: bump_radius must be positive");
    if (order < 1) throw InvalidConfig("equidist: bump_order >= 1 required");

    const FlowSpec flow = FlowSpec::standard(cartan_from_params(n, theta, false, "equidist"),
                                             times);
    const TestFunction phi =
        SiegelTransform{Bump(Eigen::VectorXd::Zero(n), radius, order), primitive};
    const DiscrepancySeries series =
        discrepancy_series(flow, phi, samples, cfg.seed, std::nullopt, resolve_threads());

    CsvTable table = series_table();
    for (const auto& p : series.points)
        table.rows.push_back({format_num(p.t), "", format_num(p.discrepancy), format_num(p.se),
                              std::to_string(p.samples)});

    PlotSeries ps;
    ps.label = "discrepancy";
    for (const auto& p : series.points) {
        ps.x.push_back(p.t);
        ps.y.push_back(p.discrepancy);
        ps.yerr.push_back(p.se);
    }
    PlotStyle style;
    style.title = "equidistribution discrepancy";
    style.xlabel = "t";
    style.ylabel = "|mu_t(phi) - m(phi)|";
    style.logy = true;
    if (series.window.size() >= 3) {
        const double d = depth(flow.theta);
        style.fit = FitLine{-series.delta_hat * d / kLn10, series.intercept / kLn10};
    }

    Outputs out;
    out.summary["delta_hat"] = series.delta_hat;
    out.summary["delta_se"] = series.delta_se;
    out.summary["r2"] = series.r2;
    out.summary["reference_mean"] = series.reference_mean;
    out.summary["depth"] = depth(flow.theta);
    out.summary["window"] = series.window;
    out.files.emplace_back("equidist.csv", write_csv(table));
    out.files.emplace_back("equidist.svg", emit_plot({ps}, style));
    return out;
}

Outputs run_nondiv(const ExperimentConfig& cfg) {
    FieldReader f(cfg.params, "nondiv");
    const int n = static_cast<int>(f.integer("n"));
    const auto theta = f.number_array("theta");
    const auto times = f.number_array("times");
    const auto eps = f.number_array("eps");
    const std::int64_t samples = f.integer("samples");
    f.done();
    if (samples <= 0) throw InvalidConfig("nondiv: samples must be positive");

    const FlowSpec flow = FlowSpec::standard(cartan_from_params(n, theta, false, "nondiv"),
                                             times);
    const EscapeTable table = escape_mass(flow, eps, samples, cfg.seed, resolve_threads());

    CsvTable csv = series_table();
    for (const auto& c : table.cells)
        csv.rows.push_back({format_num(c.t), format_num(c.eps), format_num(c.fraction),
                            format_num(c.se), std::to_string(c.samples)});

    std::vector<PlotSeries> plots;
    for (const auto& slope : table.slopes) {
        PlotSeries ps;
        ps.label = "t=" + format_num(slope.t);
        for (const auto& c : table.cells)
            if (c.t == slope.t && c.fraction > 0.0) {
                ps.x.push_back(c.eps);
                ps.y.push_back(c.fraction);
                ps.yerr.push_back(c.se);
            }
        if (!ps.x.empty()) plots.push_back(std::move(ps));
    }
    PlotStyle style;
    style.title = "escape mass";
    style.xlabel = "eps";
    style.ylabel = "mu{ g_t z not in K_eps }";
    style.logx = true;
    style.logy = true;

    Outputs out;
    Json slopes = Json::array();
    for (const auto& s : table.slopes) {
        Json row;
        row["t"] = s.t;
        row["kappa_hat"] = s.loglog.slope;
        row["kappa_se"] = s.loglog.slope_se;
        row["r2"] = s.loglog.r2;
        row["cells_used"] = s.cells_used;
        slopes.push_back(row);
    }
    out.summary["slopes"] = slopes;
    out.files.emplace_back("nondiv.csv", write_csv(csv));
    if (!plots.empty()) out.files.emplace_back("nondiv.svg", emit_plot(plots, style));
    return out;
}

Outputs run_growth(const ExperimentConfig& cfg) {
    FieldReader f(cfg.params, "growth");
    const int n = static_cast<int>(f.integer("n"));
    const auto theta = f.number_array("theta");
    const auto j = static_cast<int>(f.integer("j"));
    const double r = f.number("r");
    const auto v = f.number_array("wedge_v");
    const auto times = f.number_array("times");
    const std::int64_t random_samples = f.integer("random_samples");
    f.done();
    if (random_samples < 0) throw InvalidConfig("growth: random_samples must be >= 0");

    const FlowSpec flow = FlowSpec::standard(cartan_from_params(n, theta, false, "growth"),
                                             times);
    Eigen::VectorXd wedge = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    const GrowthSeries series = growth_slope(flow, j, r, wedge, random_samples, cfg.seed);

    CsvTable csv = series_table();
    for (std::size_t i = 0; i < series.times.size(); ++i)
        csv.rows.push_back({format_num(series.times[i]), "", format_num(series.sups[i]), "",
                            std::to_string(series.n_probes)});

    PlotSeries ps;
    ps.label = "sup over B_U(r)";
    ps.x = series.times;
    ps.y = series.sups;
    PlotStyle style;
    style.title = "representation growth";
    style.xlabel = "t";
    style.ylabel = "sup |rho(g_t u) v|";
    style.logy = true;
    style.fit = FitLine{series.fitted_rate / kLn10,
                        (std::log(series.sups.front()) - series.fitted_rate * series.times.front()) /
                            kLn10};

    Outputs out;
    out.summary["fitted_rate"] = series.fitted_rate;
    out.summary["rate_se"] = series.rate_se;
    out.summary["alpha_hat"] = series.alpha_hat;
    out.summary["top_weight_rate"] = series.top_weight_rate;
    out.summary["n_probes"] = series.n_probes;
    out.files.emplace_back("growth.csv", write_csv(csv));
    out.files.emplace_back("growth.svg", emit_plot({ps}, style));
    return out;
}

Outputs run_count_horospheres(const ExperimentConfig& cfg) {
    FieldReader f(cfg.params, "count-horospheres");
    const int n = static_cast<int>(f.integer("n"));
    const auto a0 = f.number_array("a0");
    const double rmax = f.number("rmax");
    const auto grid = static_cast<int>(f.integer("grid"));
    const auto bound_override = f.optional_integer("bound");
    f.done();
    if (static_cast<int>(a0.size()) != n)
        throw InvalidConfig("count-horospheres: a0 must have n entries");
    if (!(rmax > 0.0)) throw InvalidConfig("count-horospheres: rmax must be positive");
    if (grid < 1) throw InvalidConfig("count-horospheres: grid >= 1 required");

    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a0[i];
    HorosphereSpec spec{diag};
    std::vector<double> r_grid;
    for (int i = 1; i <= grid; ++i) r_grid.push_back(rmax * i / grid);
    const std::int64_t required = required_coset_bound(spec, rmax);
    const std::int64_t bound = bound_override.value_or(required);
    const CountSeries series = count_lifts(spec, r_grid, bound);

    CsvTable csv;
    csv.header = {"R", "count"};
    for (std::size_t i = 0; i < series.param.size(); ++i)
        csv.rows.push_back({format_num(series.param[i]), std::to_string(series.counts[i])});

    Outputs out;
    out.summary["required_bound"] = required;
    out.summary["rho_delta_norm"] = rho_delta(n).norm();
    PlotStyle style;
    style.title = "horosphere lifts meeting B(x0,R)";
    style.xlabel = "R";
    style.ylabel = "N(R)";
    style.logy = true;
    if (series.param.size() >= 6) {
        const GrowthFit fit = fit_growth(series, n - 2);
        out.summary["rate"] = fit.rate;
        out.summary["rate_se"] = fit.rate_se;
        out.summary["r2"] = fit.r2;
        out.summary["residuals"] = fit.residuals;
        style.fit = FitLine{fit.rate / kLn10, fit.intercept / kLn10};
    }
    PlotSeries ps;
    ps.label = "N(R)";
    for (std::size_t i = 0; i < series.param.size(); ++i) {
        ps.x.push_back(series.param[i]);
        ps.y.push_back(static_cast<double>(series.counts[i]));
    }
    out.files.emplace_back("horospheres.csv", write_csv(csv));
    out.files.emplace_back("horospheres.svg", emit_plot({ps}, style));
    return out;
}

Outputs run_count_flags(const ExperimentConfig& cfg) {
    FieldReader f(cfg.params, "count-flags");
    const std::string variety_name = f.text("variety");
    const double tmin = f.number("tmin");
    const double tmax = f.number("tmax");
    const auto grid = static_cast<int>(f.integer("grid"));
    f.done();
    if (!(tmin > 0.0 && tmax > tmin)) throw InvalidConfig("count-flags: need 0 < tmin < tmax");
    if (grid < 2) throw InvalidConfig("count-flags: grid >= 2 required");
    const Variety variety = variety_from_string(variety_name);

    std::vector<double> t_grid;
    for (int i = 0; i < grid; ++i)
        t_grid.push_back(tmin * std::pow(tmax / tmin, static_cast<double>(i) / (grid - 1)));
    const CountSeries series = enumerate_points(variety, t_grid);

    CsvTable csv;
    csv.header = {"T", "count"};
    for (std::size_t i = 0; i < series.param.size(); ++i)
        csv.rows.push_back({format_num(series.param[i]), std::to_string(series.counts[i])});

    Outputs out;
    const HeightSpec hs = variety_height(variety);
    out.summary["variety"] = to_string(variety);
    out.summary["pic_rank"] = variety_pic_rank(variety);
    out.summary["height_exponents"] = hs.exponents;

    PlotStyle style;
    style.title = "rational points of bounded height: " + to_string(variety);
    style.xlabel = "T";
    style.ylabel = "N(T)/T";
    style.logx = true;
    PlotSeries ps;
    ps.label = "N(T)/T";
    for (std::size_t i = 0; i < series.param.size(); ++i) {
        ps.x.push_back(series.param[i]);
        ps.y.push_back(static_cast<double>(series.counts[i]) / series.param[i]);
    }

    if (series.param.back() >= 100.0 * series.param.front() && series.param.size() >= 4) {
        const ManinFit fit = fit_manin(series, variety_pic_rank(variety));
        Json coeffs = Json::array(), ses = Json::array(), tstats = Json::array();
        for (Eigen::Index k = 0; k < fit.poly.coeffs.size(); ++k) {
            coeffs.push_back(fit.poly.coeffs[k]);
            ses.push_back(fit.poly.ses[k]);
            tstats.push_back(fit.poly.tstat(static_cast<int>(k)));
        }
        out.summary["degree"] = fit.degree;
        out.summary["coeffs"] = coeffs;
        out.summary["ses"] = ses;
        out.summary["tstats"] = tstats;
        out.summary["r2"] = fit.poly.r2;
        out.summary["residual_exponent"] = fit.residual_exponent;
        if (fit.degree <= 1)
            style.fit = FitLine{fit.degree == 1 ? fit.poly.coeffs[1] * kLn10 : 0.0,
                                fit.poly.coeffs[0]};
    }
    out.files.emplace_back("flags.csv", write_csv(csv));
    out.files.emplace_back("flags.svg", emit_plot({ps}, style));
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

std::string RunManifest::to_json_text() const {
    Json j;
    j["config"] = Json::parse(config.canonical_json());
    j["tool_version"] = tool_version;
    j["config_hash"] = config_hash;
    j["wall_time_s"] = wall_time_s;
    Json outs = Json::object();
    for (const auto& [name, hash] : outputs) outs[name] = hash;
    j["outputs"] = outs;
    j["summary"] = summary;
    return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Outputs result;
    if (cfg.kind == "cones") result = run_cones(cfg);
    else if (cfg.kind == "equidist") result = run_equidist(cfg);
    else if (cfg.kind == "nondiv") result = run_nondiv(cfg);
    else if (cfg.kind == "growth") result = run_growth(cfg);
    else if (cfg.kind == "count-horospheres") result = run_count_horospheres(cfg);
    else if (cfg.kind == "count-flags") result = run_count_flags(cfg);
    else throw InvalidConfig("run: unknown kind '" + cfg.kind + "'");

    RunManifest manifest;
    manifest.config = cfg;
    manifest.tool_version = kToolVersion;
    manifest.config_hash = git_blob_hash(cfg.canonical_json());
    manifest.summary = result.summary;

    const fs::path dir = cfg.output_dir.empty() ? fs::path(".") : fs::path(cfg.output_dir);
    fs::create_directories(dir);
    for (const auto& [name, content] : result.files) {
        write_file(dir / name, content);
        manifest.outputs.emplace_back(name, git_blob_hash(content));
    }

    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // manifest goes last, atomically
    const fs::path tmp = dir / "manifest.json.tmp";
    write_file(tmp, manifest.to_json_text());
    fs::rename(tmp, dir / "manifest.json");
    return manifest;
}

} // namespace horolab
