#pragma once
#include <string>
#include <vector>

#include "fairaudit/audit.hpp"
#include "fairaudit/berk.hpp"
#include "fairaudit/dataset.hpp"

namespace fairaudit {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row sized like header
};

// plain comma-separated values, LF or CRLF, no quoting; first row is the header
Csv read_csv(const std::string& path);

// 17 significant digits, round-trips any double
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& context);

std::string dataset_csv(const AuditDataset& ds, const std::string& target_col,
                        const std::string& score_col, const std::string& sensitive_col);

// long-form plot data: "record,group,v1,v2,v3" rows holding scatter points
// (y, s) and per-group histogram bins for y, s and the residual s - y
std::string plot_csv(const AuditDataset& ds);

std::string sweep_csv(const SweepResult& result);

// versioned report JSON; key order fixed, LF endings, byte-deterministic
std::string report_json(const FairnessReport& report, const AuditConfig& config);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fairaudit
