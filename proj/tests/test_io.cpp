#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaudit/audit.hpp"
#include "fairaudit/io.hpp"
#include "fairaudit/synthetic.hpp"

using namespace fairaudit;
using nlohmann::json;

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::vector<std::string> keys_of(const json& j) {
    std::vector<std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
    std::sort(out.begin(), out.end());
    return out;
}

std::string temp_path(const char* name) { return std::string("/tmp/") + name; }

}  // namespace

TEST_CASE("format_double round-trips every value bitwise") {
    const double values[] = {0.1,    1.0 / 3.0, 1e-300, -0.0,     2.5e5,
                             -1e300, 4.9e-324,  1.0,    0.1 + 0.2};
    for (double v : values) {
        const std::string s = format_double(v);
        CHECK(same_bits(parse_double(s, "test"), v));
    }
    CHECK(format_double(-0.0)[0] == '-');
    CHECK(parse_double("2.5", "x") == 2.5);
    CHECK_THROWS_AS(parse_double("", "ctx"), data_error);
    CHECK_THROWS_AS(parse_double("12x", "ctx"), data_error);
    CHECK_THROWS_AS(parse_double("1,2", "ctx"), data_error);
}

TEST_CASE("read_csv: headers, CRLF, blank lines, field counts") {
    const std::string path = temp_path("fa_io_basic.csv");
    write_file(path, "a,b,c\r\n1,2,3\n\n4,5,6");
    const Csv csv = read_csv(path);
    CHECK(csv.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(csv.rows.size() == 2);  // the blank line is skipped
    CHECK(csv.rows[0] == std::vector<std::string>{"1", "2", "3"});
    CHECK(csv.rows[1] == std::vector<std::string>{"4", "5", "6"});

    const std::string bad = temp_path("fa_io_jagged.csv");
    write_file(bad, "a,b\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(bad), data_error);

    const std::string empty = temp_path("fa_io_empty.csv");
    write_file(empty, "");
    CHECK_THROWS_AS(read_csv(empty), data_error);
    CHECK_THROWS_AS(read_csv("/tmp/fa_io_nothing_here.csv"), data_error);
}

TEST_CASE("dataset_csv exports reparse to the identical dataset") {
    const std::vector<double> y = {0.1, 1.0 / 3.0, -2.75, 1e-300, 7.0, -0.0};
    const std::vector<double> s = {0.3, -1.0 / 7.0, 3.25, 2.5e5, -7.0, 1.0};
    const std::vector<long long> a = {0, 1, 0, 1, 0, 1};
    const AuditDataset ds = validate_dataset(y, s, a, 1);

    const std::string text = dataset_csv(ds, "y", "s", "a");
    const std::string path = temp_path("fa_io_ds.csv");
    write_file(path, text);
    const Csv csv = read_csv(path);
    CHECK(csv.header == std::vector<std::string>{"y", "s", "a"});
    REQUIRE(csv.rows.size() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(same_bits(parse_double(csv.rows[i][0], "y"), ds.targets(i, 0)));
        CHECK(same_bits(parse_double(csv.rows[i][1], "s"), ds.scores(i, 0)));
        CHECK(csv.rows[i][2] == std::to_string(ds.sensitive[i]));
    }
}

TEST_CASE("report_json: layout, nulls, and bitwise float round-trip") {
    FairnessReport r;
    r.n = 42;
    r.k_classes = 2;
    r.ratio_ind = 1.0 / 3.0;
    r.ratio_sep = 0.1 + 0.2;
    r.ratio_suf = 2.5e5;
    r.nmi_ind = -0.0072154;
    r.nmi_sep = std::nullopt;  // undefined normalizer
    r.nmi_suf = 0.25;
    r.balanced_accuracy_s = 0.5;
    r.balanced_accuracy_y = 2.0 / 3.0;
    r.balanced_accuracy_ys = 1.0;
    r.diagnostics = {"plain entry", "tricky \"quotes\" and \\slashes\\ and\nnewline"};

    AuditConfig cfg;
    cfg.seed = 7;
    cfg.clamp_negative_nmi = true;

    const std::string text = report_json(r, cfg);
    const json j = json::parse(text);  // must be valid JSON at all

    CHECK(keys_of(j) == std::vector<std::string>{"balanced_accuracy", "config", "diagnostics",
                                                 "k_classes", "measures", "n", "version"});
    CHECK(j["version"] == "1.0");
    CHECK(j["n"] == 42);
    CHECK(j["k_classes"] == 2);
    CHECK(keys_of(j["config"]) == std::vector<std::string>{"basis", "clamp_nmi", "epsilon", "folds",
                                                           "held_in", "l2", "seed"});
    CHECK(j["config"]["folds"] == 10);
    CHECK(j["config"]["basis"] == 100);
    CHECK(same_bits(j["config"]["l2"].get<double>(), 1e-3));
    CHECK(j["config"]["seed"] == 7);
    CHECK(j["config"]["held_in"] == false);
    CHECK(j["config"]["clamp_nmi"] == true);

    CHECK(keys_of(j["measures"]) == std::vector<std::string>{"nmi_ind", "nmi_sep", "nmi_suf",
                                                             "ratio_ind", "ratio_sep", "ratio_suf"});
    CHECK(same_bits(j["measures"]["ratio_ind"].get<double>(), 1.0 / 3.0));
    CHECK(same_bits(j["measures"]["ratio_sep"].get<double>(), 0.1 + 0.2));
    CHECK(j["measures"]["nmi_sep"].is_null());
    CHECK(same_bits(j["measures"]["nmi_ind"].get<double>(), -0.0072154));
    CHECK(same_bits(j["balanced_accuracy"]["y"].get<double>(), 2.0 / 3.0));

    REQUIRE(j["diagnostics"].size() == 2);
    CHECK(j["diagnostics"][0] == "plain entry");
    CHECK(j["diagnostics"][1] == "tricky \"quotes\" and \\slashes\\ and\nnewline");

    // byte determinism and LF-only endings
    CHECK(report_json(r, cfg) == text);
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("report_json: three-class reports omit the ratio keys") {
    FairnessReport r;
    r.n = 9;
    r.k_classes = 3;
    r.nmi_ind = 0.5;
    r.nmi_sep = 0.25;
    r.nmi_suf = std::nullopt;
    const json j = json::parse(report_json(r, AuditConfig{}));
    CHECK(keys_of(j["measures"]) == std::vector<std::string>{"nmi_ind", "nmi_sep", "nmi_suf"});
    CHECK(j["measures"]["nmi_suf"].is_null());
    CHECK(j["diagnostics"].empty());
}

TEST_CASE("report_json: a real audit report stays parseable") {
    const AuditDataset ds = validate_dataset(std::vector<double>{-5, -1, 1, 5},
                                             std::vector<double>{-5, -1, 1, 5},
                                             std::vector<long long>{0, 0, 1, 1}, 1);
    AuditConfig cfg;
    cfg.held_in = true;
    cfg.n_folds = 1;
    cfg.l2_strength = 1e-4;
    const FairnessReport r = run_audit(ds, cfg);
    const json j = json::parse(report_json(r, cfg));
    CHECK(j["n"] == 4);
    CHECK(!j["diagnostics"].empty());  // the domination warning must appear
    CHECK(same_bits(j["measures"]["ratio_ind"].get<double>(), *r.ratio_ind));
}

TEST_CASE("sweep_csv: fixed header, nan for unavailable ratios") {
    SweepResult res;
    res.lambdas = {0.0, 2.5};
    res.rmse = {0.5, 1.0 / 3.0};
    FairnessReport a;
    a.ratio_ind = 1.25;
    a.ratio_sep = 2.0;
    a.ratio_suf = 0.75;
    a.nmi_ind = 0.125;
    a.nmi_sep = 0.5;
    a.nmi_suf = 0.25;
    FairnessReport b;  // three-class style row: no ratios, one undefined nmi
    b.nmi_ind = -0.25;
    res.reports = {a, b};

    const std::string text = sweep_csv(res);
    const std::string path = temp_path("fa_io_sweep.csv");
    write_file(path, text);
    const Csv csv = read_csv(path);
    CHECK(csv.header == std::vector<std::string>{"lambda", "rmse", "ratio_ind", "ratio_sep",
                                                 "ratio_suf", "nmi_ind", "nmi_sep", "nmi_suf"});
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.rows[0][0] == "0");
    CHECK(same_bits(parse_double(csv.rows[0][1], "rmse"), 0.5));
    CHECK(csv.rows[0][2] == "1.25");
    CHECK(csv.rows[1][2] == "nan");
    CHECK(csv.rows[1][6] == "nan");
    CHECK(same_bits(parse_double(csv.rows[1][5], "nmi"), -0.25));
}

TEST_CASE("plot_csv: points and per-group histograms") {
    ScenarioSpec spec;
    spec.n = 80;
    const AuditDataset ds = generate(spec);
    const std::string path = temp_path("fa_io_plot.csv");
    write_file(path, plot_csv(ds));
    const Csv csv = read_csv(path);
    CHECK(csv.header == std::vector<std::string>{"record", "group", "v1", "v2", "v3"});

    std::map<std::string, long> rows_by_record;
    std::map<std::string, long> hist_mass;  // record -> sum of bin counts
    long group1_points = 0;
    for (const auto& row : csv.rows) {
        ++rows_by_record[row[0]];
        if (row[0] == "point") {
            CHECK(row[4].empty());
            if (row[1] == "1") ++group1_points;
        } else {
            // histogram rows carry [lo, hi) edges and a count
            CHECK(parse_double(row[3], "hi") > parse_double(row[2], "lo"));
            hist_mass[row[0] + "/" + row[1]] += static_cast<long>(parse_double(row[4], "count"));
        }
    }
    CHECK(rows_by_record["point"] == 80);
    for (const char* rec : {"hist_y", "hist_s", "hist_resid"})
        CHECK(rows_by_record[rec] == 2 * 30);

    long n1 = 0;
    for (int v : ds.sensitive) n1 += v;
    CHECK(group1_points == n1);
    CHECK(hist_mass["hist_y/0"] == 80 - n1);
    CHECK(hist_mass["hist_y/1"] == n1);
    CHECK(hist_mass["hist_s/0"] == 80 - n1);
    CHECK(hist_mass["hist_resid/1"] == n1);
}

TEST_CASE("write_file and read_file round-trip bytes") {
    const std::string path = temp_path("fa_io_bytes.txt");
    const std::string payload = "line1\nline2\n\x01\x02 tail without newline";
    write_file(path, payload);
    CHECK(read_file(path) == payload);
    CHECK_THROWS_AS(read_file("/tmp/fa_io_missing_file.txt"), data_error);
    CHECK_THROWS_AS(write_file("/tmp/no_such_dir_fa/out.txt", "x"), data_error);
}
