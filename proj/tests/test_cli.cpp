#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <regex>

#include "cli_harness.hpp"
#include "efw/metrics.hpp"
#include "efw/mixture.hpp"
#include "efw/record.hpp"
#include "efw/series.hpp"

using namespace harness;

namespace {

const std::regex kErrorLine{R"(^error code=(\d) kind=(\w+) message="[^\n]*"\n$)"};

std::vector<std::string> snapshot_args(const std::string& cmd, const TempDir& dir, const std::string& region) {
    return {cmd, "--input", fixture("jhu_snapshot.csv"), "--region", region, "--out-dir", dir.str()};
}

std::vector<std::string> with(std::vector<std::string> args, std::initializer_list<std::string> extra) {
    args.insert(args.end(), extra);
    return args;
}

}  // namespace

TEST_CASE("bad configuration exits 2 with one error line") {
    TempDir dir("cfg");
    for (const auto& args : {with(snapshot_args("fit", dir, "Czechia"), {"--wavelets", "0"}),
                             with(snapshot_args("validate", dir, "Czechia"), {"--holdout", "0"}),
                             with(snapshot_args("fit", dir, "Czechia"), {"--family", "Weibull"}),
                             with(snapshot_args("smooth", dir, "Czechia"), {"--edge-policy", "wrap"}),
                             std::vector<std::string>{"fit", "--input", dir.file("absent.csv"), "--region", "Czechia",
                                                      "--out-dir", dir.str()},
                             std::vector<std::string>{"fit", "--no-such-flag"}}) {
        const auto inv = run(args);
        CHECK(inv.code == efw::cli::kInputError);
        std::smatch m;
        REQUIRE(std::regex_match(inv.err, m, kErrorLine));
        CHECK(m[1] == "2");
        CHECK(m[2] == "input");
    }
}

TEST_CASE("unknown region exits 3 and suggests close names") {
    TempDir dir("region");
    const auto inv = run(snapshot_args("smooth", dir, "Czechi"));
    CHECK(inv.code == efw::cli::kRegionNotFound);
    std::smatch m;
    REQUIRE(std::regex_match(inv.err, m, kErrorLine));
    CHECK(m[2] == "region_not_found");
    CHECK(inv.err.find("Czechia") != std::string::npos);
}

TEST_CASE("smooth writes raw and averaged series that read back") {
    TempDir dir("smooth");
    REQUIRE(run(snapshot_args("smooth", dir, "Germany")).code == 0);
    const auto raw = efw::read_series_csv(slurp(dir.file("daily.csv")));
    const auto avg = efw::read_series_csv(slurp(dir.file("smoothed.csv")), efw::SeriesKind::Smoothed);
    REQUIRE(raw.size() > 200);
    CHECK(avg.size() == raw.size() - 6);
    CHECK(avg.origin == efw::add_days(raw.origin, 3));
    double s = 0.0;
    for (std::size_t k = 0; k < 7; ++k) s += raw.values[k];
    CHECK(avg.values[0] == doctest::Approx(s / 7).epsilon(1e-12));
    CHECK(slurp(dir.file("daily.csv")).rfind("# efw smooth seed=42 config=", 0) == 0);
}

TEST_CASE("fit recovers the noiseless three-wave fixture") {
    TempDir dir("fit3");
    const auto inv = run({"fit", "--series", fixture("synthetic_3wave.csv"), "--wavelets", "3", "--seed", "42",
                          "--out-dir", dir.str()});
    REQUIRE(inv.code == 0);
    const auto manifest = read_kv(fixture("synthetic_3wave_manifest.txt"));
    const auto report = read_kv(dir.file("fit_report.txt"));
    CHECK(std::stod(report.at("sse")) < std::stod(manifest.at("fit_sse_threshold")));
    CHECK(std::stod(report.at("sse")) <= std::stod(report.at("initial_sse")));

    const auto rec = efw::read_mixture_record(slurp(dir.file("mixture.txt")));
    REQUIRE(rec.mixture.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        std::istringstream truth(manifest.at("component." + std::to_string(i + 1)));
        double a = 0, b = 0, c = 0;
        char sep = 0;
        truth >> a >> sep >> b >> sep >> c;
        CHECK(rec.mixture.components[i].amplitude() == doctest::Approx(a).epsilon(0.01));
        CHECK(rec.mixture.components[i].b() == doctest::Approx(b).epsilon(0.01));
        CHECK(rec.mixture.components[i].c() == doctest::Approx(c).epsilon(0.01));
    }
}

TEST_CASE("forecast rows and chart follow the saved mixture") {
    TempDir dir("forecast");
    REQUIRE(run({"fit", "--series", fixture("synthetic_3wave.csv"), "--wavelets", "3", "--out-dir", dir.str()}).code == 0);
    const auto inv = run({"forecast", "--series", fixture("synthetic_3wave.csv"), "--mixture", dir.file("mixture.txt"),
                          "--out-dir", dir.str()});
    REQUIRE(inv.code == 0);
    const auto rec = efw::read_mixture_record(slurp(dir.file("mixture.txt")));
    const auto fc = efw::read_series_csv(slurp(dir.file("forecast.csv")));
    REQUIRE(fc.size() == 60);
    CHECK(fc.origin == efw::add_days(rec.mixture.origin, 120));
    for (std::size_t k = 0; k < fc.size(); ++k) {
        const double t = 121.0 + static_cast<double>(k);
        CHECK(std::abs(fc.values[k] - efw::eval_mixture(rec.mixture, t)) <= 1e-9 * std::max(1.0, fc.values[k]));
    }
    CHECK(count_of(slurp(dir.file("forecast.svg")), "<polyline") == rec.mixture.size() + 3);

    REQUIRE(run({"forecast", "--series", fixture("synthetic_3wave.csv"), "--mixture", dir.file("mixture.txt"),
                 "--horizon", "14", "--out-dir", dir.str()})
                .code == 0);
    CHECK(efw::read_series_csv(slurp(dir.file("forecast.csv"))).size() == 14);
}

TEST_CASE("decompose columns sum to the total") {
    TempDir dir("decompose");
    REQUIRE(run({"decompose", "--series", fixture("synthetic_3wave.csv"), "--wavelets", "3", "--horizon", "10",
                 "--out-dir", dir.str()})
                .code == 0);
    std::istringstream in(slurp(dir.file("components.csv")));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("date", 0) == 0) continue;
        std::istringstream fields(line);
        std::string cell;
        std::getline(fields, cell, ',');
        std::getline(fields, cell, ',');
        const double total = std::stod(cell);
        double sum = 0.0;
        int parts = 0;
        while (std::getline(fields, cell, ',')) {
            sum += std::stod(cell);
            ++parts;
        }
        CHECK(parts == 3);
        CHECK(std::abs(sum - total) <= 1e-9 * std::max(1.0, total));
        ++rows;
    }
    CHECK(rows == 130);
}

TEST_CASE("validate on the snapshot scores exactly the holdout days") {
    TempDir dir("validate");
    const auto inv = run(with(snapshot_args("validate", dir, "Czechia"), {"--holdout", "6", "--wavelets", "3", "--starts", "4"}));
    REQUIRE(inv.code == 0);
    const auto rows = efw::read_validation_csv(slurp(dir.file("validation.csv")));
    CHECK(rows.size() == 6);
    const auto summary = read_kv(dir.file("validation_summary.txt"));
    CHECK(summary.at("rows") == "6");
    CHECK(summary.at("excluded") == "0");
    double mean = 0.0;
    for (const auto& r : rows) mean += r.err / 6.0;
    CHECK(std::stod(summary.at("mean_error")) == doctest::Approx(mean).epsilon(1e-9));
    CHECK(summary.at("mean_error_percent") == efw::format_percent(mean));
}

TEST_CASE("validate rescores a printed prediction table") {
    TempDir dir("predictions");
    const auto inv = run({"validate", "--predictions", fixture("czechia_table.csv"), "--out-dir", dir.str()});
    REQUIRE(inv.code == 0);
    const std::string csv = slurp(dir.file("validation.csv"));
    for (const char* e : {",3.96%", ",4.68%", ",3.87%", ",5.95%", ",4.37%", ",2.18%"}) {
        CHECK(csv.find(e) != std::string::npos);
    }
    CHECK(read_kv(dir.file("validation_summary.txt")).at("mean_error_percent") == "4.17");
    CHECK(inv.out.find("mean error 4.17%") != std::string::npos);
}

TEST_CASE("simulate writes an exact manifest and an SIR peak") {
    TempDir dir("simulate");
    REQUIRE(run({"simulate", "--component", "1000,3,0.25", "--days", "90", "--out-dir", dir.str()}).code == 0);
    auto manifest = read_kv(dir.file("manifest.txt"));
    CHECK(manifest.at("exact") == "true");
    CHECK(manifest.at("days") == "90");
    const auto y = efw::read_series_csv(slurp(dir.file("series.csv")));
    REQUIRE(y.size() == 90);
    efw::WaveletMixture m;
    m.components = {efw::Wavelet::log_normal(1000, 3, 0.25)};
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y.values[i] == efw::eval_mixture(m, static_cast<double>(i + 1)));

    REQUIRE(run({"simulate", "--sir", "0.3,0.1,1000000,10", "--days", "150", "--out-dir", dir.str()}).code == 0);
    manifest = read_kv(dir.file("manifest.txt"));
    CHECK(manifest.at("source") == "sir");
    const double s_peak = std::stod(manifest.at("peak_susceptible"));
    const double s_star = std::stod(manifest.at("threshold_susceptible"));
    CHECK(std::abs(s_peak - s_star) / s_star < 1e-3);
    CHECK(manifest.count("peak_date") == 1);

    CHECK(run({"simulate", "--component", "1,2", "--out-dir", dir.str()}).code == efw::cli::kInputError);
    CHECK(run({"simulate", "--days", "0", "--component", "1,2,3", "--out-dir", dir.str()}).code == efw::cli::kInputError);
}

TEST_CASE("reruns are byte-identical and thread count does not matter") {
    TempDir a("rerun-a");
    TempDir b("rerun-b");
    TempDir c("rerun-c");
    const std::initializer_list<std::string> fit_opts{"--wavelets", "3", "--starts", "6", "--seed", "9"};
    REQUIRE(run(with(snapshot_args("fit", a, "Freedonia"), fit_opts)).code == 0);
    REQUIRE(run(with(snapshot_args("fit", b, "Freedonia"), fit_opts)).code == 0);
    REQUIRE(run(with(with(snapshot_args("fit", c, "Freedonia"), fit_opts), {"--threads", "4"})).code == 0);
    const auto sa = snapshot(a.path());
    CHECK(sa.size() == 2);
    CHECK(sa == snapshot(b.path()));
    CHECK(sa == snapshot(c.path()));

    TempDir d("rerun-d");
    REQUIRE(run(with(snapshot_args("fit", d, "Freedonia"), {"--wavelets", "3", "--starts", "6", "--seed", "10"})).code == 0);
    CHECK(slurp(a.file("mixture.txt")) != slurp(d.file("mixture.txt")));
}

TEST_CASE("mixture record survives a write/read cycle") {
    TempDir dir("record");
    REQUIRE(run({"fit", "--series", fixture("synthetic_3wave.csv"), "--wavelets", "3", "--out-dir", dir.str()}).code == 0);
    const std::string text = slurp(dir.file("mixture.txt"));
    CHECK(text.rfind("efw-mixture 1 family=LogNormal n=3 origin=2020-03-01 seed=42 config=", 0) == 0);
    CHECK(efw::write_mixture_record(efw::read_mixture_record(text)) == text);
}

TEST_CASE("help exits cleanly") {
    const auto inv = run({"--help"});
    CHECK(inv.code == 0);
    CHECK(inv.out.find("validate") != std::string::npos);
}
