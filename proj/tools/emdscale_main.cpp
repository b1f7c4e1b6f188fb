#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emdscale/emd.hpp"
#include "emdscale/errors.hpp"
#include "emdscale/ingest.hpp"
#include "emdscale/scaling.hpp"
#include "emdscale/serialize.hpp"
#include "emdscale/signal.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace emdscale;

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kOutputFormatVersion = 1;

struct CommonOpts {
    std::string output_dir = ".";
    std::string format_name = "text-table";
    bool serial = false;
    SiftConfig sift;

    TableFormat format() const { return parse_table_format(format_name); }
    Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

struct IngestOpts {
    IngestionConfig cfg;
    std::string delimiter = ",";
    bool no_log = false;

    IngestionConfig resolved() const {
        IngestionConfig c = cfg;
        if (delimiter.size() != 1) {
            throw ArgumentError("delimiter must be a single character");
        }
        c.delimiter = delimiter[0];
        c.apply_log = !no_log;
        return c;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-o,--output-dir", o.output_dir, "Directory for output files")
        ->capture_default_str();
    cmd->add_option("--format", o.format_name,
                    "Table format: text-table, delimited, structured")
        ->capture_default_str();
    cmd->add_flag("--serial", o.serial,
                  "Run ensembles on the serial reference path");
    cmd->add_option("--sd-threshold", o.sift.sd_threshold,
                    "Sift stopping threshold")
        ->capture_default_str();
    cmd->add_option("--max-sift", o.sift.max_sift_iterations,
                    "Sift iteration cap per component")
        ->capture_default_str();
    cmd->add_option("--max-imfs", o.sift.max_imfs, "Component count cap")
        ->capture_default_str();
    cmd->add_option("--envelope-boundary", o.sift.envelope_boundary,
                    "Extrema mirrored beyond each end for the envelopes")
        ->capture_default_str();
}

void add_ingest(CLI::App* cmd, IngestOpts& o, bool required_input = true) {
    auto* in = cmd->add_option("-i,--input", o.cfg.path, "Delimited input file");
    if (required_input) in->required();
    cmd->add_option("--timestamp-column", o.cfg.timestamp_column,
                    "Timestamp column, zero-based index or header name")
        ->capture_default_str();
    cmd->add_option("--price-column", o.cfg.price_column,
                    "Price column, zero-based index or header name")
        ->capture_default_str();
    cmd->add_option("--delimiter", o.delimiter, "Field delimiter")
        ->capture_default_str();
    cmd->add_flag("--no-log", o.no_log,
                  "Ingest values as-is instead of log-transforming prices");
    cmd->add_flag("--drop-nonpositive", o.cfg.drop_nonpositive,
                  "Drop non-positive prices instead of failing");
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw DataError("cannot write '" + p.string() + "'");
    return os;
}

fs::path table_path(const fs::path& dir, const std::string& base,
                    TableFormat fmt) {
    return dir / (base + "." + table_format_extension(fmt));
}

json sift_params(const SiftConfig& s) {
    return json{{"sd_threshold", s.sd_threshold},
                {"max_sift", s.max_sift_iterations},
                {"max_imfs", s.max_imfs},
                {"envelope_boundary", s.envelope_boundary}};
}

json ingest_params(const IngestionConfig& c) {
    return json{{"input", c.path},
                {"timestamp_column", c.timestamp_column},
                {"price_column", c.price_column},
                {"delimiter", std::string(1, c.delimiter)},
                {"apply_log", c.apply_log},
                {"drop_nonpositive", c.drop_nonpositive}};
}

// The manifest records what was computed, not where it was written, so the
// same run into two directories stays byte-identical.
void write_manifest(const fs::path& dir, const std::string& command,
                    json parameters, const std::vector<std::string>& warnings) {
    json m;
    m["command"] = command;
    m["parameters"] = std::move(parameters);
    m["versions"] =
        json{{"tool", kToolVersion}, {"output_format", kOutputFormatVersion}};
    m["warnings"] = warnings;
    auto os = open_out(dir / "manifest.json");
    os << m.dump(2) << '\n';
}

std::string human_period(double seconds) {
    if (!std::isfinite(seconds)) return "";
    char buf[40];
    if (seconds < 60.0) {
        std::snprintf(buf, sizeof buf, "%.1f s", seconds);
    } else if (seconds < 3600.0) {
        std::snprintf(buf, sizeof buf, "%.1f min", seconds / 60.0);
    } else if (seconds < 86400.0) {
        std::snprintf(buf, sizeof buf, "%.1f h", seconds / 3600.0);
    } else {
        std::snprintf(buf, sizeof buf, "%.1f d", seconds / 86400.0);
    }
    return buf;
}

Table imf_summary_table(const Decomposition& d) {
    Table t;
    const bool wall = d.source.sample_interval_seconds.has_value();
    t.headers = {"imf", "zero_crossings", "extrema", "variance",
                 "period_samples"};
    if (wall) {
        t.headers.push_back("period_seconds");
        t.headers.push_back("period_label");
    }
    for (const Imf& imf : d.imfs) {
        std::vector<Cell> row{static_cast<std::int64_t>(imf.index_k),
                              static_cast<std::int64_t>(imf.zero_crossings),
                              static_cast<std::int64_t>(imf.extrema_count),
                              imf.variance, imf.period_samples};
        if (wall) {
            const double sec =
                imf.period_samples * *d.source.sample_interval_seconds;
            row.emplace_back(sec);
            row.emplace_back(human_period(sec));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

double max_reconstruction_error(const Decomposition& d) {
    double worst = 0.0;
    for (std::size_t t = 0; t < d.residue.size(); ++t) {
        double sum = d.residue[t];
        for (const Imf& imf : d.imfs) sum += imf.values[t];
        worst = std::max(worst, std::abs(sum - d.source.values[t]));
    }
    return worst;
}

std::vector<std::pair<double, double>> zip(const std::vector<double>& xs,
                                           const std::vector<double>& ys) {
    std::vector<std::pair<double, double>> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out.emplace_back(xs[i], ys[i]);
    return out;
}

// decompose: component matrix, per-component summary, orthogonality stats,
// the ingested series itself, optional trend overlay.
struct DecomposeOpts {
    CommonOpts common;
    IngestOpts ingest;
    std::int64_t trend_imfs = -1;
};

void cmd_decompose(const DecomposeOpts& o) {
    const IngestionConfig icfg = o.ingest.resolved();
    const TableFormat fmt = o.common.format();
    const IngestResult ing = emdscale::ingest(icfg);
    const Decomposition d = decompose(ing.signal, o.common.sift);

    const fs::path dir(o.common.output_dir);
    fs::create_directories(dir);

    {
        auto os = open_out(dir / "series.csv");
        const auto pts = zip(ing.timestamps, ing.signal.values);
        write_pairs(os, pts, "timestamp", "value");
    }
    {
        auto os = open_out(dir / "components.csv");
        write_decomposition_matrix(os, d);
    }
    {
        auto os = open_out(table_path(dir, "imf_summary", fmt));
        write_table(os, imf_summary_table(d), fmt);
    }
    const double recon = max_reconstruction_error(d);
    {
        Table t;
        t.headers = {"n_imfs", "io", "max_reconstruction_error"};
        t.rows.push_back({static_cast<std::int64_t>(d.imfs.size()), d.io, recon});
        auto os = open_out(table_path(dir, "decompose_stats", fmt));
        write_table(os, t, fmt);
    }
    if (o.trend_imfs >= 0) {
        const Signal tr = trend(d, static_cast<std::size_t>(o.trend_imfs));
        auto os = open_out(dir / "trend.csv");
        write_pairs(os, zip(ing.timestamps, tr.values), "timestamp", "trend");
    }

    json params = ingest_params(icfg);
    params["sift"] = sift_params(o.common.sift);
    params["format"] = o.common.format_name;
    if (o.trend_imfs >= 0) params["trend_imfs"] = o.trend_imfs;
    write_manifest(dir, "decompose", params, ing.report.warnings);

    std::cout << "decomposed " << ing.signal.size() << " samples into "
              << d.imfs.size() << " components + residue\n"
              << "io " << format_full(d.io) << ", max reconstruction error "
              << format_full(recon) << '\n'
              << "outputs in " << dir.string() << '\n';
}

struct ScalingOpts {
    CommonOpts common;
    IngestOpts ingest;
};

void write_scaling_outputs(const fs::path& dir, TableFormat fmt,
                           const ScalingFit& fit) {
    {
        auto os = open_out(dir / "scaling_points.csv");
        write_pairs(os, fit.points, "log_period", "log_variance");
    }
    Table t;
    t.headers = {"h_star", "slope", "log_intercept", "r_squared",
                 "n_imfs_used"};
    t.rows.push_back({fit.h_star, 2.0 * fit.h_star, fit.log_intercept,
                      fit.r_squared,
                      static_cast<std::int64_t>(fit.n_imfs_used)});
    auto os = open_out(table_path(dir, "scaling_fit", fmt));
    write_table(os, t, fmt);
}

void cmd_scaling(const ScalingOpts& o) {
    const IngestionConfig icfg = o.ingest.resolved();
    const TableFormat fmt = o.common.format();
    const IngestResult ing = emdscale::ingest(icfg);
    const Decomposition d = decompose(ing.signal, o.common.sift);
    const ScalingFit fit = fit_variance_scaling(d);

    const fs::path dir(o.common.output_dir);
    fs::create_directories(dir);
    write_scaling_outputs(dir, fmt, fit);

    json params = ingest_params(icfg);
    params["sift"] = sift_params(o.common.sift);
    params["format"] = o.common.format_name;
    write_manifest(dir, "scaling", params, ing.report.warnings);

    std::cout << "h_star " << format_full(fit.h_star) << ", r_squared "
              << format_full(fit.r_squared) << " over " << fit.n_imfs_used
              << " components\n"
              << "outputs in " << dir.string() << '\n';
}

struct BaselineOpts {
    CommonOpts common;
    IngestOpts ingest;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
};

void cmd_baseline(const BaselineOpts& o) {
    const IngestionConfig icfg = o.ingest.resolved();
    const TableFormat fmt = o.common.format();
    const IngestResult ing = emdscale::ingest(icfg);
    const Decomposition d = decompose(ing.signal, o.common.sift);
    const ScalingFit fit = fit_variance_scaling(d);
    const BaselineEnsemble ens =
        baseline_compare(d, o.reps, o.seed, o.common.sift, o.common.exec());

    const fs::path dir(o.common.output_dir);
    fs::create_directories(dir);
    write_scaling_outputs(dir, fmt, fit);
    {
        Table t;
        t.headers = {"replicate", "c", "c0", "r2_bm"};
        for (const BaselineReplicate& r : ens.replicates) {
            t.rows.push_back({static_cast<std::int64_t>(r.replicate_index),
                              r.c_i, r.c0_i, r.r2_bm_i});
        }
        auto os = open_out(table_path(dir, "baseline_replicates", fmt));
        write_table(os, t, fmt);
    }
    {
        // One comparison line per replicate in (intercept, slope) form; the
        // slope is 1 by construction.
        Table t;
        t.headers = {"replicate", "log_intercept", "slope"};
        for (const BaselineReplicate& r : ens.replicates) {
            t.rows.push_back({static_cast<std::int64_t>(r.replicate_index),
                              std::log(r.c_i * r.c0_i), 1.0});
        }
        auto os = open_out(dir / "baseline_lines.csv");
        write_table(os, t, TableFormat::delimited);
    }
    {
        Table t;
        t.headers = {"mean_r2_bm", "p05", "p95", "n_replicates", "n_failed",
                     "n_requested", "bm_length"};
        t.rows.push_back({ens.mean_r2_bm, ens.p05, ens.p95,
                          static_cast<std::int64_t>(ens.replicates.size()),
                          static_cast<std::int64_t>(ens.n_failed),
                          static_cast<std::int64_t>(o.reps),
                          static_cast<std::int64_t>(ens.bm_length)});
        auto os = open_out(table_path(dir, "baseline_summary", fmt));
        write_table(os, t, fmt);
    }

    json params = ingest_params(icfg);
    params["sift"] = sift_params(o.common.sift);
    params["format"] = o.common.format_name;
    params["baseline_reps"] = o.reps;
    params["seed"] = o.seed;
    write_manifest(dir, "baseline", params, ing.report.warnings);

    std::cout << "mean_r2_bm " << format_full(ens.mean_r2_bm) << " (p05 "
              << format_full(ens.p05) << ", p95 " << format_full(ens.p95)
              << ") over " << ens.replicates.size() << " replicates\n"
              << "outputs in " << dir.string() << '\n';
}

struct SimulateOpts {
    CommonOpts common;
    double hurst = 0.5;
    std::size_t length = 10000;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    bool generalized = false;
};

void cmd_simulate(const SimulateOpts& o) {
    if (!(o.hurst > 0.0) || !(o.hurst < 1.0)) {
        throw ArgumentError("hurst must lie strictly between 0 and 1");
    }
    const TableFormat fmt = o.common.format();
    const MonteCarloH res =
        monte_carlo_h(o.hurst, o.length, o.reps, o.seed, o.common.sift,
                      o.common.exec(), o.generalized);

    const fs::path dir(o.common.output_dir);
    fs::create_directories(dir);
    {
        Table t;
        t.headers = {"hurst", "length", "n_reps", "n_used", "n_failed",
                     "mean_h_star", "rmse_h_star"};
        std::vector<Cell> row{o.hurst, static_cast<std::int64_t>(o.length),
                              static_cast<std::int64_t>(o.reps),
                              static_cast<std::int64_t>(res.n_used),
                              static_cast<std::int64_t>(res.n_failed),
                              res.mean_h_star, res.rmse};
        if (o.generalized) {
            t.headers.push_back("mean_h_g");
            t.headers.push_back("rmse_h_g");
            row.emplace_back(res.mean_h_g);
            row.emplace_back(res.rmse_h_g);
        }
        t.rows.push_back(std::move(row));
        auto os = open_out(table_path(dir, "simulate_summary", fmt));
        write_table(os, t, fmt);
    }
    {
        Table t;
        t.headers = {"replicate", "h_star"};
        if (o.generalized) t.headers.push_back("h_g");
        for (std::size_t i = 0; i < res.h_stars.size(); ++i) {
            std::vector<Cell> row{static_cast<std::int64_t>(i),
                                  res.h_stars[i]};
            if (o.generalized) row.emplace_back(res.h_gs[i]);
            t.rows.push_back(std::move(row));
        }
        auto os = open_out(table_path(dir, "simulate_replicates", fmt));
        write_table(os, t, fmt);
    }

    json params{{"hurst", o.hurst},
                {"length", o.length},
                {"reps", o.reps},
                {"seed", o.seed},
                {"generalized", o.generalized},
                {"format", o.common.format_name}};
    params["sift"] = sift_params(o.common.sift);
    write_manifest(dir, "simulate", params, {});

    std::cout << "mean_h_star " << format_full(res.mean_h_star) << ", rmse "
              << format_full(res.rmse) << " over " << res.n_used
              << " replicates";
    if (o.generalized) {
        std::cout << "; mean_h_g " << format_full(res.mean_h_g);
    }
    std::cout << "\noutputs in " << dir.string() << '\n';
}

struct RankOpts {
    CommonOpts common;
    IngestOpts ingest; // column settings shared by every input
    std::vector<std::string> inputs;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
};

void cmd_rank(const RankOpts& o) {
    const TableFormat fmt = o.common.format();
    std::vector<std::pair<std::string, std::string>> series; // label, path
    for (const std::string& spec : o.inputs) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
            series.emplace_back(fs::path(spec).stem().string(), spec);
        } else {
            series.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
        }
    }
    {
        std::map<std::string, int> seen;
        for (const auto& [label, path] : series) {
            if (++seen[label] > 1) {
                throw ArgumentError("duplicate series label '" + label + "'");
            }
        }
    }

    std::vector<RankingRow> rows;
    std::vector<std::string> warnings;
    std::exception_ptr first_failure;
    for (const auto& [label, path] : series) {
        try {
            IngestionConfig icfg = o.ingest.resolved();
            icfg.path = path;
            const IngestResult ing = emdscale::ingest(icfg);
            for (const std::string& w : ing.report.warnings) {
                warnings.push_back(label + ": " + w);
            }
            const Decomposition d = decompose(ing.signal, o.common.sift);
            const ScalingFit fit = fit_variance_scaling(d);
            const BaselineEnsemble ens = baseline_compare(
                d, o.reps, o.seed, o.common.sift, o.common.exec());
            rows.push_back({label, d.imfs.size(), d.io, fit.r_squared,
                            fit.h_star, ens.mean_r2_bm});
        } catch (const Error& e) {
            if (!first_failure) first_failure = std::current_exception();
            warnings.push_back(label + ": failed: " + e.what());
            std::cerr << "warning: series '" << label << "' failed: "
                      << e.what() << '\n';
        }
    }
    if (rows.empty() && first_failure) {
        std::rethrow_exception(first_failure);
    }

    const std::vector<RankingRow> by_bm = rank(rows, RankMetric::mean_r2_bm);
    const std::vector<RankingRow> by_r2 = rank(rows, RankMetric::r_squared);
    std::map<std::string, std::int64_t> bm_pos, r2_pos;
    for (std::size_t i = 0; i < by_bm.size(); ++i) {
        bm_pos[by_bm[i].label] = static_cast<std::int64_t>(i + 1);
        r2_pos[by_r2[i].label] = static_cast<std::int64_t>(i + 1);
    }

    const fs::path dir(o.common.output_dir);
    fs::create_directories(dir);
    {
        Table t;
        t.headers = {"label",  "n_imfs",     "io",
                     "r_squared", "h_star", "mean_r2_bm",
                     "rank_by_mean_r2_bm", "rank_by_r_squared"};
        for (const RankingRow& r : by_bm) {
            t.rows.push_back({r.label, static_cast<std::int64_t>(r.n_imfs),
                              r.io, r.r_squared, r.h_star, r.mean_r2_bm,
                              bm_pos[r.label], r2_pos[r.label]});
        }
        auto os = open_out(table_path(dir, "ranking", fmt));
        write_table(os, t, fmt);
    }

    json inputs_json = json::array();
    for (const auto& [label, path] : series) {
        inputs_json.push_back(json{{"label", label}, {"path", path}});
    }
    IngestionConfig icol = o.ingest.resolved();
    json params{{"inputs", inputs_json},
                {"timestamp_column", icol.timestamp_column},
                {"price_column", icol.price_column},
                {"delimiter", std::string(1, icol.delimiter)},
                {"apply_log", icol.apply_log},
                {"drop_nonpositive", icol.drop_nonpositive},
                {"baseline_reps", o.reps},
                {"seed", o.seed},
                {"format", o.common.format_name}};
    params["sift"] = sift_params(o.common.sift);
    write_manifest(dir, "rank", params, warnings);

    std::cout << "ranked " << rows.size() << " of " << series.size()
              << " series";
    if (!by_bm.empty()) {
        std::cout << "; top by mean_r2_bm: " << by_bm.front().label << " ("
                  << format_full(by_bm.front().mean_r2_bm) << ")";
    }
    std::cout << "\noutputs in " << dir.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mode-decomposition variance-period scaling analysis"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file whose keys mirror flag names");
    app.footer("Exit codes: 0 success, 1 usage, 2 input error, "
               "3 numeric/degenerate error, 4 ensemble failure.");

    DecomposeOpts dec_o;
    CLI::App* dec = app.add_subcommand(
        "decompose", "Decompose a series into oscillatory components");
    add_ingest(dec, dec_o.ingest);
    add_common(dec, dec_o.common);
    dec->add_option("--trend-imfs", dec_o.trend_imfs,
                    "Also write residue + this many slowest components");

    ScalingOpts sca_o;
    CLI::App* sca = app.add_subcommand(
        "scaling", "Fit the variance-period power law of a series");
    add_ingest(sca, sca_o.ingest);
    add_common(sca, sca_o.common);

    BaselineOpts bas_o;
    CLI::App* bas = app.add_subcommand(
        "baseline", "Score a series against a Brownian-motion baseline");
    add_ingest(bas, bas_o.ingest);
    add_common(bas, bas_o.common);
    bas->add_option("--baseline-reps", bas_o.reps, "Baseline replicate count")
        ->capture_default_str()
        ->check(CLI::Range(static_cast<std::size_t>(2),
                           std::numeric_limits<std::size_t>::max()));
    bas->add_option("--seed", bas_o.seed, "Ensemble seed")->required();

    SimulateOpts sim_o;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Estimate the scaling exponent on synthetic ensembles");
    add_common(sim, sim_o.common);
    sim->add_option("--hurst", sim_o.hurst, "True Hurst exponent")->required();
    sim->add_option("--length", sim_o.length, "Path length")->required();
    sim->add_option("--reps", sim_o.reps, "Replicate count")->required();
    sim->add_option("--seed", sim_o.seed, "Ensemble seed")->required();
    sim->add_flag("--generalized", sim_o.generalized,
                  "Also run the generalized Hurst estimator");

    RankOpts rnk_o;
    CLI::App* rnk = app.add_subcommand(
        "rank", "Rank several series by Brownian-baseline agreement");
    rnk->add_option("-i,--input", rnk_o.inputs,
                    "Input file, optionally label=path; repeatable")
        ->required();
    rnk->add_option("--timestamp-column", rnk_o.ingest.cfg.timestamp_column,
                    "Timestamp column, zero-based index or header name")
        ->capture_default_str();
    rnk->add_option("--price-column", rnk_o.ingest.cfg.price_column,
                    "Price column, zero-based index or header name")
        ->capture_default_str();
    rnk->add_option("--delimiter", rnk_o.ingest.delimiter, "Field delimiter")
        ->capture_default_str();
    rnk->add_flag("--no-log", rnk_o.ingest.no_log,
                  "Ingest values as-is instead of log-transforming prices");
    rnk->add_flag("--drop-nonpositive", rnk_o.ingest.cfg.drop_nonpositive,
                  "Drop non-positive prices instead of failing");
    add_common(rnk, rnk_o.common);
    rnk->add_option("--baseline-reps", rnk_o.reps, "Baseline replicate count")
        ->capture_default_str()
        ->check(CLI::Range(static_cast<std::size_t>(2),
                           std::numeric_limits<std::size_t>::max()));
    rnk->add_option("--seed", rnk_o.seed, "Ensemble seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (dec->parsed()) cmd_decompose(dec_o);
        else if (sca->parsed()) cmd_scaling(sca_o);
        else if (bas->parsed()) cmd_baseline(bas_o);
        else if (sim->parsed()) cmd_simulate(sim_o);
        else if (rnk->parsed()) cmd_rank(rnk_o);
        return 0;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const EnsembleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
