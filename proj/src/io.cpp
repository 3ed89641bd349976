#include "fairaudit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fairaudit {

Csv read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    Csv csv;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (first) {
            csv.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != csv.header.size())
                throw data_error(path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(csv.header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            csv.rows.push_back(std::move(fields));
        }
    }
    if (first) throw data_error("'" + path + "' is empty");
    return csv;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw data_error(context + ": '" + s + "' is not a number");
    return v;
}

std::string dataset_csv(const AuditDataset& ds, const std::string& target_col,
                        const std::string& score_col, const std::string& sensitive_col) {
    if (ds.targets.cols() != 1 || ds.scores.cols() != 1)
        throw data_error("CSV export supports scalar targets and scores only");
    std::string out = target_col + "," + score_col + "," + sensitive_col + "\n";
    for (long i = 0; i < ds.n(); ++i)
        out += format_double(ds.targets(i, 0)) + "," + format_double(ds.scores(i, 0)) + "," +
               std::to_string(ds.sensitive[i]) + "\n";
    return out;
}

namespace {
void histogram_rows(std::string& out, const char* record, const Eigen::VectorXd& values,
                    const std::vector<int>& group, int k_classes) {
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    const int bins = 30;
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    for (int a = 0; a < k_classes; ++a) {
        std::vector<long> count(bins, 0);
        for (long i = 0; i < values.size(); ++i) {
            if (group[i] != a) continue;
            int b = static_cast<int>((values(i) - lo) / width);
            b = std::clamp(b, 0, bins - 1);
            ++count[b];
        }
        for (int b = 0; b < bins; ++b)
            out += std::string(record) + "," + std::to_string(a) + "," +
                   format_double(lo + b * width) + "," + format_double(lo + (b + 1) * width) + "," +
                   std::to_string(count[b]) + "\n";
    }
}
}  // namespace

std::string plot_csv(const AuditDataset& ds) {
    if (ds.targets.cols() != 1 || ds.scores.cols() != 1)
        throw data_error("plot data supports scalar targets and scores only");
    std::string out = "record,group,v1,v2,v3\n";
    for (long i = 0; i < ds.n(); ++i)
        out += "point," + std::to_string(ds.sensitive[i]) + "," + format_double(ds.targets(i, 0)) +
               "," + format_double(ds.scores(i, 0)) + ",\n";
    histogram_rows(out, "hist_y", ds.targets.col(0), ds.sensitive, ds.k_classes);
    histogram_rows(out, "hist_s", ds.scores.col(0), ds.sensitive, ds.k_classes);
    const Eigen::VectorXd resid = ds.scores.col(0) - ds.targets.col(0);
    histogram_rows(out, "hist_resid", resid, ds.sensitive, ds.k_classes);
    return out;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = "lambda,rmse,ratio_ind,ratio_sep,ratio_suf,nmi_ind,nmi_sep,nmi_suf\n";
    auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string("nan");
    };
    for (std::size_t i = 0; i < result.lambdas.size(); ++i) {
        const FairnessReport& r = result.reports[i];
        out += format_double(result.lambdas[i]) + "," + format_double(result.rmse[i]) + "," +
               opt(r.ratio_ind) + "," + opt(r.ratio_sep) + "," + opt(r.ratio_suf) + "," +
               format_double(r.nmi_ind) + "," + opt(r.nmi_sep) + "," + opt(r.nmi_suf) + "\n";
    }
    return out;
}

namespace {
std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string json_opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("null");
}
}  // namespace

std::string report_json(const FairnessReport& report, const AuditConfig& config) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": \"1.0\",\n";
    out << "  \"n\": " << report.n << ",\n";
    out << "  \"k_classes\": " << report.k_classes << ",\n";
    out << "  \"config\": {\n";
    out << "    \"folds\": " << config.n_folds << ",\n";
    out << "    \"basis\": " << config.n_basis << ",\n";
    out << "    \"l2\": " << format_double(config.l2_strength) << ",\n";
    out << "    \"epsilon\": " << format_double(config.clamp_epsilon) << ",\n";
    out << "    \"seed\": " << config.seed << ",\n";
    out << "    \"held_in\": " << (config.held_in ? "true" : "false") << ",\n";
    out << "    \"clamp_nmi\": " << (config.clamp_negative_nmi ? "true" : "false") << "\n";
    out << "  },\n";
    out << "  \"measures\": {\n";
    if (report.k_classes == 2) {
        out << "    \"ratio_ind\": " << json_opt(report.ratio_ind) << ",\n";
        out << "    \"ratio_sep\": " << json_opt(report.ratio_sep) << ",\n";
        out << "    \"ratio_suf\": " << json_opt(report.ratio_suf) << ",\n";
    }
    out << "    \"nmi_ind\": " << format_double(report.nmi_ind) << ",\n";
    out << "    \"nmi_sep\": " << json_opt(report.nmi_sep) << ",\n";
    out << "    \"nmi_suf\": " << json_opt(report.nmi_suf) << "\n";
    out << "  },\n";
    out << "  \"balanced_accuracy\": {\n";
    out << "    \"s\": " << format_double(report.balanced_accuracy_s) << ",\n";
    out << "    \"y\": " << format_double(report.balanced_accuracy_y) << ",\n";
    out << "    \"ys\": " << format_double(report.balanced_accuracy_ys) << "\n";
    out << "  },\n";
    out << "  \"diagnostics\": [";
    for (std::size_t i = 0; i < report.diagnostics.size(); ++i) {
        out << (i ? ",\n    " : "\n    ") << '"' << json_escape(report.diagnostics[i]) << '"';
    }
    out << (report.diagnostics.empty() ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw data_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw data_error("failed while writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fairaudit
