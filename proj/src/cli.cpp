#include "efw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "efw/errors.hpp"
#include "efw/fit.hpp"
#include "efw/format.hpp"
#include "efw/io.hpp"
#include "efw/jhu.hpp"
#include "efw/metrics.hpp"
#include "efw/mixture.hpp"
#include "efw/record.hpp"
#include "efw/series.hpp"
#include "efw/sir.hpp"
#include "efw/svg.hpp"

namespace efw::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string command;
    std::string input;
    std::string url;
    std::string region;
    std::string series;
    std::string mixture;
    std::string predictions;
    bool smooth_series = false;
    std::size_t wavelets = 5;
    std::size_t starts = 16;
    std::uint64_t seed = 42;
    std::size_t holdout = 6;
    std::size_t horizon = 60;
    std::string family = "LogNormal";
    std::string edge_policy = "full";
    std::size_t half_window = 3;
    std::size_t threads = 1;
    double jitter = 0.2;
    int max_iter = 200;
    std::string out_dir = ".";
    // simulate
    std::vector<std::string> components;
    std::string sir;
    double sir_dt = kDefaultSirStep;
    std::size_t days = 120;
    double noise_cv = 0.0;
    std::string origin = "2020-03-01";
};

/// Everything that influences output bytes; out_dir and threads are excluded.
std::string canonical(const RunConfig& c, const std::string& input_digest) {
    std::ostringstream os;
    os << "command=" << c.command << ";input=" << input_digest << ";region=" << c.region
       << ";smooth_series=" << c.smooth_series << ";wavelets=" << c.wavelets << ";starts=" << c.starts
       << ";seed=" << c.seed << ";holdout=" << c.holdout << ";horizon=" << c.horizon << ";family=" << c.family
       << ";edge=" << c.edge_policy << ";half_window=" << c.half_window << ";jitter=" << format_double(c.jitter)
       << ";max_iter=" << c.max_iter << ";sir=" << c.sir << ";sir_dt=" << format_double(c.sir_dt)
       << ";days=" << c.days << ";noise_cv=" << format_double(c.noise_cv) << ";origin=" << c.origin;
    for (const auto& comp : c.components) os << ";component=" << comp;
    return os.str();
}

struct Context {
    RunConfig cfg;
    std::string config_hash;
    std::ostream& out;
    std::ostream& err;

    std::string stamp() const {
        return "efw " + cfg.command + " seed=" + std::to_string(cfg.seed) + " config=" + config_hash;
    }
    fs::path path(const std::string& name) const { return fs::path(cfg.out_dir) / name; }
};

struct LoadedData {
    DailySeries raw;
    DailySeries smoothed;
    std::vector<RevisionAnomaly> anomalies;
    std::string label;
};

std::string read_input_text(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.url.empty()) {
        try {
            return fetch_url(cfg.url);
        } catch (const Error& e) {
            if (cfg.input.empty()) throw ParseError(std::string(e.what()) + " and no --input fallback was given");
            err << "warning: " << e.what() << "; falling back to " << cfg.input << '\n';
        }
    }
    if (cfg.input.empty()) throw ConfigError("no input: pass --input, --url or --series");
    return read_file(cfg.input);
}

/// Digest of the data a command reads, for the config hash.
std::string input_digest(const RunConfig& cfg, std::ostream& err) {
    std::string digest;
    if (!cfg.series.empty()) digest += "series:" + fnv1a_hex(read_file(cfg.series));
    if (!cfg.input.empty() || !cfg.url.empty()) digest += "table:" + fnv1a_hex(read_input_text(cfg, err));
    if (!cfg.mixture.empty()) digest += "mixture:" + fnv1a_hex(read_file(cfg.mixture));
    if (!cfg.predictions.empty()) digest += "pred:" + fnv1a_hex(read_file(cfg.predictions));
    return digest;
}

LoadedData load_data(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const EdgePolicy policy = parse_edge_policy(cfg.edge_policy);
    LoadedData data;
    if (!cfg.series.empty()) {
        data.raw = read_series_csv(read_file(cfg.series));
        data.label = fs::path(cfg.series).filename().string();
        if (data.raw.empty()) throw ParseError("series file has no data rows");
        if (cfg.smooth_series) {
            data.smoothed = moving_average(data.raw, cfg.half_window, policy);
        } else {
            data.smoothed = data.raw;
            data.smoothed.kind = SeriesKind::Smoothed;
        }
        return data;
    }
    if (cfg.region.empty()) throw ConfigError("--region is required with a JHU table input");
    const std::string text = read_input_text(cfg, ctx.err);
    const RawTimeSeries cumulative = parse_timeseries_csv(text, RegionSelector::parse(cfg.region));
    data.raw = cumulative_to_daily(cumulative, &data.anomalies);
    data.smoothed = moving_average(data.raw, cfg.half_window, policy);
    data.label = cfg.region;
    for (const auto& a : data.anomalies) {
        ctx.err << "warning: negative revision on " << format_iso(a.date) << " (" << format_double(a.previous)
                << " -> " << format_double(a.current) << "), daily count clamped to 0\n";
    }
    return data;
}

FitConfig fit_config(const RunConfig& cfg) {
    FitConfig fc;
    fc.n_wavelets = cfg.wavelets;
    fc.n_starts = cfg.starts;
    fc.seed = cfg.seed;
    fc.family = parse_family(cfg.family);
    fc.threads = cfg.threads;
    fc.jitter = cfg.jitter;
    fc.lm.max_iter = cfg.max_iter;
    if (cfg.wavelets == 0) throw ConfigError("--wavelets must be at least 1");
    if (cfg.starts == 0) throw ConfigError("--starts must be at least 1");
    return fc;
}

std::optional<SirReference> sir_reference_for(Family family) {
    if (family == Family::SirWave) return default_sir_reference();
    return std::nullopt;
}

double squared_norm(const DailySeries& y) {
    double s = 0.0;
    for (const double v : y.values) s += v * v;
    return s;
}

std::string fit_report_text(const Context& ctx, const FitOutcome& fo, const DailySeries& y) {
    std::ostringstream os;
    os << "# " << ctx.stamp() << '\n';
    os << "family=" << ctx.cfg.family << '\n';
    os << "wavelets=" << fo.mixture.size() << '\n';
    os << "days=" << y.size() << '\n';
    os << "sse=" << format_double(fo.report.sse) << '\n';
    const double norm = squared_norm(y);
    os << "relative_sse=" << format_double(norm > 0.0 ? fo.report.sse / norm : 0.0) << '\n';
    os << "initial_sse=" << format_double(fo.initial_sse) << '\n';
    os << "best_start=" << fo.best_start << '\n';
    os << "iterations=" << fo.report.iterations << '\n';
    os << "termination=" << to_string(fo.report.termination) << '\n';
    os << "redundant=";
    for (std::size_t i = 0; i < fo.redundant.size(); ++i) os << (i ? "," : "") << fo.redundant[i] + 1;
    os << '\n';
    for (std::size_t s = 0; s < fo.starts.size(); ++s) {
        const auto& st = fo.starts[s];
        os << "start." << s << '=';
        if (st.report) {
            os << "sse:" << format_double(st.report->sse) << " iterations:" << st.report->iterations
               << " termination:" << to_string(st.report->termination);
        } else {
            os << "failed:" << st.error;
        }
        os << '\n';
    }
    return os.str();
}

void write_mixture(const Context& ctx, const WaveletMixture& m, const std::string& name) {
    MixtureRecord rec{m, ctx.cfg.seed, ctx.config_hash, sir_reference_for(m.components.front().family())};
    write_file_atomic(ctx.path(name), write_mixture_record(rec));
}

FitOutcome run_fit(const Context& ctx, const DailySeries& y) {
    const FitOutcome fo = fit(y, fit_config(ctx.cfg));
    if (!fo.redundant.empty()) {
        ctx.err << "note: " << fo.redundant.size() << " component(s) carry less than 1e-3 of the largest amplitude\n";
    }
    return fo;
}

WaveletMixture load_or_fit(const Context& ctx, const LoadedData& data) {
    if (!ctx.cfg.mixture.empty()) return read_mixture_record(read_file(ctx.cfg.mixture)).mixture;
    const FitOutcome fo = run_fit(ctx, data.smoothed);
    write_mixture(ctx, fo.mixture, "mixture.txt");
    write_file_atomic(ctx.path("fit_report.txt"), fit_report_text(ctx, fo, data.smoothed));
    return fo.mixture;
}

/// Day index of a calendar date relative to the mixture origin (t = 1 on the origin).
double index_of(const WaveletMixture& m, Date d) { return static_cast<double>((d - m.origin).count()) + 1.0; }

std::size_t last_observed_index(const WaveletMixture& m, const DailySeries& smoothed) {
    const double t = index_of(m, smoothed.date_at(smoothed.size() - 1));
    if (t < 1.0) throw ConfigError("data ends before the mixture origin");
    return static_cast<std::size_t>(t);
}

int cmd_smooth(const Context& ctx) {
    const LoadedData data = load_data(ctx);
    write_file_atomic(ctx.path("daily.csv"), write_series_csv(data.raw, {ctx.stamp(), "kind=raw"}));
    write_file_atomic(ctx.path("smoothed.csv"),
                      write_series_csv(data.smoothed, {ctx.stamp(), "kind=smoothed edge=" + ctx.cfg.edge_policy}));
    ctx.out << "days=" << data.raw.size() << " smoothed=" << data.smoothed.size()
            << " anomalies=" << data.anomalies.size() << '\n';
    return kOk;
}

int cmd_fit(const Context& ctx) {
    const LoadedData data = load_data(ctx);
    const FitOutcome fo = run_fit(ctx, data.smoothed);
    write_mixture(ctx, fo.mixture, "mixture.txt");
    write_file_atomic(ctx.path("fit_report.txt"), fit_report_text(ctx, fo, data.smoothed));
    ctx.out << "sse=" << format_double(fo.report.sse) << " relative_sse="
            << format_double(fo.report.sse / std::max(squared_norm(data.smoothed), 1e-300))
            << " best_start=" << fo.best_start << " termination=" << to_string(fo.report.termination) << '\n';
    return kOk;
}

int cmd_validate(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<ValidationRow> rows;
    std::ostringstream summary;
    summary << "# " << ctx.stamp() << '\n';
    if (!cfg.predictions.empty()) {
        rows = read_validation_csv(read_file(cfg.predictions));
        if (rows.empty()) throw ConfigError("prediction table has no rows");
    } else {
        if (cfg.holdout == 0) throw ConfigError("--holdout must be at least 1 day");
        const LoadedData data = load_data(ctx);
        const auto [train, valid] = train_validation_split(data.smoothed, cfg.holdout);
        const FitOutcome fo = run_fit(ctx, train);
        write_mixture(ctx, fo.mixture, "mixture.txt");
        write_file_atomic(ctx.path("fit_report.txt"), fit_report_text(ctx, fo, train));
        for (std::size_t k = 0; k < valid.size(); ++k) {
            const Date d = valid.date_at(k);
            const auto raw_index = static_cast<std::size_t>(data.raw.day_index(d) - 1.0);
            const double real = raw_index < data.raw.size() ? data.raw.values[raw_index] : 0.0;
            const double y_hat = eval_mixture(fo.mixture, static_cast<double>(train.size() + 1 + k));
            rows.push_back(make_row(d, real, valid.values[k], y_hat));
        }
        const double norm = squared_norm(train);
        summary << "train_days=" << train.size() << '\n';
        summary << "train_sse=" << format_double(fo.report.sse) << '\n';
        summary << "train_relative_sse=" << format_double(norm > 0.0 ? fo.report.sse / norm : 0.0) << '\n';
    }
    const MeanError mean = mean_validation_error(rows);
    if (mean.excluded > 0) {
        ctx.err << "warning: " << mean.excluded << " validation day(s) with zero smoothed actual excluded from the mean\n";
    }
    summary << "rows=" << rows.size() << '\n';
    summary << "excluded=" << mean.excluded << '\n';
    summary << "mean_error=" << format_double(mean.value) << '\n';
    summary << "mean_error_percent=" << format_percent(mean.value) << '\n';
    write_file_atomic(ctx.path("validation.csv"), write_validation_csv(rows, {ctx.stamp()}));
    write_file_atomic(ctx.path("validation_summary.txt"), summary.str());
    for (const auto& r : rows) {
        ctx.out << format_iso(r.date) << "  smoothing=" << format_double(r.y) << "  prediction="
                << format_double(r.y_hat) << "  error=" << format_percent(r.err) << "%\n";
    }
    ctx.out << "mean error " << format_percent(mean.value) << "%\n";
    return kOk;
}

svg::Chart forecast_chart(const Context& ctx, const LoadedData& data, const WaveletMixture& m,
                          std::size_t last_observed) {
    svg::Chart chart;
    chart.title = data.label + ": fit and " + std::to_string(ctx.cfg.horizon) + "-day projection, " +
                  std::to_string(m.size()) + " " + ctx.cfg.family + " wavelets";
    chart.x_label = "date";
    chart.marker_x = static_cast<double>(last_observed);
    const std::size_t end = last_observed + ctx.cfg.horizon;

    svg::Series raw{"reported", "#b0b0b0", {}, 1.0, false};
    for (std::size_t i = 0; i < data.raw.size(); ++i) {
        raw.points.emplace_back(index_of(m, data.raw.date_at(i)), data.raw.values[i]);
    }
    svg::Series smooth{"7-day average", "#000000", {}, 1.5, false};
    for (std::size_t i = 0; i < data.smoothed.size(); ++i) {
        smooth.points.emplace_back(index_of(m, data.smoothed.date_at(i)), data.smoothed.values[i]);
    }
    svg::Series total{"model", "#2ca02c", {}, 2.5, false};
    for (std::size_t t = 1; t <= end; ++t) total.points.emplace_back(static_cast<double>(t), eval_mixture(m, static_cast<double>(t)));
    chart.series.push_back(std::move(raw));
    chart.series.push_back(std::move(smooth));
    chart.series.push_back(std::move(total));

    const auto parts = decompose(m, 1, end);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        svg::Series s{"wavelet " + std::to_string(i + 1), svg::palette(i + 3), {}, 1.2, true};
        for (std::size_t k = 0; k < parts[i].size(); ++k) s.points.emplace_back(static_cast<double>(k + 1), parts[i].values[k]);
        chart.series.push_back(std::move(s));
    }
    // Month ticks.
    for (std::size_t t = 1; t <= end; ++t) {
        const Date d = add_days(m.origin, static_cast<long>(t) - 1);
        const std::chrono::year_month_day ymd{d};
        if (static_cast<unsigned>(ymd.day()) == 1) chart.x_ticks.emplace_back(static_cast<double>(t), format_iso(d).substr(0, 7));
    }
    return chart;
}

int cmd_forecast(const Context& ctx) {
    if (ctx.cfg.horizon == 0) throw ConfigError("--horizon must be at least 1 day");
    const LoadedData data = load_data(ctx);
    const WaveletMixture m = load_or_fit(ctx, data);
    const std::size_t last = last_observed_index(m, data.smoothed);
    const DailySeries fc = forecast(m, last, ctx.cfg.horizon);
    write_file_atomic(ctx.path("forecast.csv"), write_series_csv(fc, {ctx.stamp(), "kind=forecast"}));
    std::string chart = svg::render(forecast_chart(ctx, data, m, last));
    chart.insert(chart.find('\n') + 1, "<!-- " + ctx.stamp() + " -->\n");
    write_file_atomic(ctx.path("forecast.svg"), chart);
    ctx.out << "forecast " << format_iso(fc.origin) << " .. " << format_iso(fc.date_at(fc.size() - 1)) << " ("
            << fc.size() << " days)\n";
    return kOk;
}

int cmd_decompose(const Context& ctx) {
    const LoadedData data = load_data(ctx);
    const WaveletMixture m = load_or_fit(ctx, data);
    const std::size_t last = last_observed_index(m, data.smoothed) + ctx.cfg.horizon;
    const auto parts = decompose(m, 1, last);
    std::ostringstream os;
    os << "# " << ctx.stamp() << '\n' << "date,total";
    for (std::size_t i = 0; i < parts.size(); ++i) os << ",wavelet" << i + 1;
    os << '\n';
    for (std::size_t k = 0; k < last; ++k) {
        os << format_iso(add_days(m.origin, static_cast<long>(k))) << ','
           << format_double(eval_mixture(m, static_cast<double>(k + 1)));
        for (const auto& p : parts) os << ',' << format_double(p.values[k]);
        os << '\n';
    }
    write_file_atomic(ctx.path("components.csv"), os.str());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& w = m.components[i];
        ctx.out << "wavelet " << i + 1 << ": a=" << format_double(w.amplitude()) << " b=" << format_double(w.b())
                << " c=" << format_double(w.c()) << " peak="
                << format_iso(add_days(m.origin, std::lround(peak(w)) - 1)) << '\n';
    }
    return kOk;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto d = parse_double(item);
        if (!d) throw ConfigError("bad number '" + item + "' in " + what);
        v.push_back(*d);
    }
    if (v.size() != expected) {
        throw ConfigError(what + " needs " + std::to_string(expected) + " comma-separated values");
    }
    return v;
}

int cmd_simulate(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.days == 0) throw ConfigError("--days must be at least 1");
    const auto origin = parse_iso(cfg.origin);
    if (!origin) throw ConfigError("--origin must be an ISO date");

    std::ostringstream manifest;
    manifest << "# " << ctx.stamp() << '\n';
    WaveletMixture m;
    m.origin = *origin;
    if (!cfg.sir.empty()) {
        const auto v = parse_list(cfg.sir, 4, "--sir beta,gamma,N,I0");
        SirReference ref;
        ref.params = {v[0], v[1], v[2]};
        ref.initial = {v[2] - v[3], v[3], 0.0};
        ref.dt = cfg.sir_dt;
        ref.steps = static_cast<std::size_t>(std::ceil(static_cast<double>(cfg.days) / cfg.sir_dt));
        const SirTrajectory traj = integrate(ref);
        const SirPeak pk = locate_peak(traj, ref.params);
        m.components.push_back(sir_wavelet(traj, pk.infectious > 0.0 ? traj.states[traj.peak_index()].i : 0.0));
        manifest << "source=sir\n";
        manifest << "beta=" << format_double(v[0]) << "\ngamma=" << format_double(v[1]) << "\nN=" << format_double(v[2])
                 << "\nI0=" << format_double(v[3]) << "\ndt=" << format_double(cfg.sir_dt) << '\n';
        manifest << "peak_time=" << format_double(pk.time) << '\n';
        manifest << "peak_date=" << format_iso(add_days(*origin, std::lround(pk.time) - 1)) << '\n';
        manifest << "peak_susceptible=" << format_double(pk.susceptible) << '\n';
        manifest << "threshold_susceptible=" << format_double(v[1] * v[2] / std::max(v[0], 1e-300)) << '\n';
        manifest << "peak_infectious=" << format_double(pk.infectious) << '\n';
    } else {
        if (!cfg.mixture.empty()) {
            m = read_mixture_record(read_file(cfg.mixture)).mixture;
        } else {
            if (cfg.components.empty()) throw ConfigError("simulate needs --component, --mixture or --sir");
            const Family family = parse_family(cfg.family);
            if (family == Family::SirWave) throw ConfigError("use --sir to simulate an SIR epidemic");
            for (const auto& c : cfg.components) {
                const auto v = parse_list(c, 3, "--component a,b,c");
                m.components.push_back(Wavelet::make(family, v[0], v[1], v[2]));
            }
        }
        canonical_sort(m);
        manifest << "source=mixture\n";
        manifest << "family=" << to_string(m.components.front().family()) << '\n';
        manifest << "n=" << m.size() << '\n';
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto& w = m.components[i];
            manifest << "component." << i + 1 << '=' << format_double(w.amplitude()) << ',' << format_double(w.b())
                     << ',' << format_double(w.c()) << '\n';
        }
    }
    const DailySeries y = synth_daily_cases(m, cfg.days, cfg.noise_cv, cfg.seed);
    const double norm = squared_norm(y);
    manifest << "origin=" << format_iso(y.origin) << '\n';
    manifest << "days=" << y.size() << '\n';
    manifest << "seed=" << cfg.seed << '\n';
    manifest << "noise_cv=" << format_double(cfg.noise_cv) << '\n';
    manifest << "exact=" << (cfg.noise_cv == 0.0 ? "true" : "false") << '\n';
    manifest << "norm2=" << format_double(norm) << '\n';
    // Noiseless fits must reach 1e-6 ||y||^2; noisy ones about noise_cv^2 ||y||^2.
    const double threshold = cfg.noise_cv == 0.0 ? 1e-6 * norm : 2.0 * cfg.noise_cv * cfg.noise_cv * norm;
    manifest << "fit_sse_threshold=" << format_double(threshold) << '\n';
    write_file_atomic(ctx.path("series.csv"), write_series_csv(y, {ctx.stamp(), "kind=synthetic"}));
    write_file_atomic(ctx.path("manifest.txt"), manifest.str());
    ctx.out << "wrote " << y.size() << " days to " << ctx.path("series.csv").string() << '\n';
    return kOk;
}

void add_common(CLI::App& app, RunConfig& c) {
    app.add_option("--input", c.input, "JHU wide CSV file");
    app.add_option("--url", c.url, "fetch the JHU CSV from a URL (falls back to --input)");
    app.add_option("--region", c.region, "country or province/state; 'Country:Province' for one row");
    app.add_option("--series", c.series, "two-column date,value CSV instead of a JHU table");
    app.add_flag("--smooth", c.smooth_series, "apply the moving average to --series input");
    app.add_option("--edge-policy", c.edge_policy, "full | shrink");
    app.add_option("--half-window", c.half_window, "moving-average half width d (window 2d+1)");
    app.add_option("--out-dir", c.out_dir, "output directory");
}

void add_fit_options(CLI::App& app, RunConfig& c) {
    app.add_option("--wavelets", c.wavelets, "number of wavelets N");
    app.add_option("--starts", c.starts, "multi-start count");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--family", c.family, "LogNormal | Gaussian | GaussianTruncated | Gompertz | BetaPrime | SirWave");
    app.add_option("--threads", c.threads, "parallel fit starts");
    app.add_option("--jitter", c.jitter, "start perturbation scale");
    app.add_option("--max-iter", c.max_iter, "LM iteration cap");
}

const char* kind_of(int code) {
    switch (code) {
        case kInputError: return "input";
        case kRegionNotFound: return "region_not_found";
        case kFitFailure: return "fit_failure";
        default: return "unexpected";
    }
}

int fail(std::ostream& err, int code, const std::string& message) {
    std::string quoted;
    for (const char ch : message) {
        if (ch == '"' || ch == '\\') quoted.push_back('\\');
        quoted.push_back(ch == '\n' ? ' ' : ch);
    }
    err << "error code=" << code << " kind=" << kind_of(code) << " message=\"" << quoted << "\"\n";
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Epidemic-fitted wavelet modelling of daily case curves", "efw"};
    app.require_subcommand(1, 1);

    auto* smooth = app.add_subcommand("smooth", "daily counts and their moving average");
    add_common(*smooth, cfg);

    auto* fit_cmd = app.add_subcommand("fit", "fit a wavelet mixture to the smoothed series");
    add_common(*fit_cmd, cfg);
    add_fit_options(*fit_cmd, cfg);

    auto* validate = app.add_subcommand("validate", "fit on all but the last days and score the holdout");
    add_common(*validate, cfg);
    add_fit_options(*validate, cfg);
    validate->add_option("--holdout", cfg.holdout, "validation days at the end of the series");
    validate->add_option("--predictions", cfg.predictions, "score a day,real data,smoothing,prediction table");

    auto* forecast_cmd = app.add_subcommand("forecast", "project the fitted mixture forward");
    add_common(*forecast_cmd, cfg);
    add_fit_options(*forecast_cmd, cfg);
    forecast_cmd->add_option("--horizon", cfg.horizon, "days to project");
    forecast_cmd->add_option("--mixture", cfg.mixture, "use a saved mixture record instead of fitting");

    auto* decompose_cmd = app.add_subcommand("decompose", "per-wavelet sub-epidemic curves");
    add_common(*decompose_cmd, cfg);
    add_fit_options(*decompose_cmd, cfg);
    decompose_cmd->add_option("--horizon", cfg.horizon, "days past the data to include");
    decompose_cmd->add_option("--mixture", cfg.mixture, "use a saved mixture record instead of fitting");

    auto* simulate = app.add_subcommand("simulate", "synthetic daily series with a ground-truth manifest");
    simulate->add_option("--out-dir", cfg.out_dir, "output directory");
    simulate->add_option("--family", cfg.family, "family of --component wavelets");
    simulate->add_option("--component", cfg.components, "a,b,c of one wavelet (repeatable)");
    simulate->add_option("--mixture", cfg.mixture, "simulate from a saved mixture record");
    simulate->add_option("--sir", cfg.sir, "beta,gamma,N,I0 of an SIR epidemic");
    simulate->add_option("--sir-dt", cfg.sir_dt, "RK4 step in days");
    simulate->add_option("--days", cfg.days, "series length");
    simulate->add_option("--noise-cv", cfg.noise_cv, "multiplicative noise standard deviation");
    simulate->add_option("--seed", cfg.seed, "random seed");
    simulate->add_option("--origin", cfg.origin, "date of day 1 (ISO)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        return fail(err, kInputError, e.what());
    }

    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    try {
        const std::string digest = input_digest(cfg, err);
        Context ctx{cfg, fnv1a_hex(canonical(cfg, digest)), out, err};
        fs::create_directories(cfg.out_dir);
        if (cfg.command == "smooth") return cmd_smooth(ctx);
        if (cfg.command == "fit") return cmd_fit(ctx);
        if (cfg.command == "validate") return cmd_validate(ctx);
        if (cfg.command == "forecast") return cmd_forecast(ctx);
        if (cfg.command == "decompose") return cmd_decompose(ctx);
        if (cfg.command == "simulate") return cmd_simulate(ctx);
        return fail(err, kInputError, "unknown command");
    } catch (const NotFoundError& e) {
        return fail(err, kRegionNotFound, e.what());
    } catch (const FitError& e) {
        return fail(err, kFitFailure, e.what());
    } catch (const NumericError& e) {
        return fail(err, kFitFailure, e.what());
    } catch (const Error& e) {
        return fail(err, kInputError, e.what());
    } catch (const fs::filesystem_error& e) {
        return fail(err, kInputError, e.what());
    } catch (const std::exception& e) {
        return fail(err, kUnexpected, e.what());
    }
}

}  // namespace efw::cli
