#pragma once

#include <string>
#include <vector>

// Result serialization: one CSV per table plus report.json mirroring the
// whole run. Cells are preformatted strings so the CSV and the JSON carry
// bit-identical values; reruns with the same config and seed reproduce both
// byte for byte, except for the wall-clock entry.
namespace fracfp::report {

struct Table {
    std::string name;  // file stem, e.g. "stability" -> stability.csv
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// fixed-format cells: doubles as %.12e, integers verbatim
std::string cell(double x);
std::string cell(int x);
std::string cell(long long x);

// summary entry; numbers keep the same fixed format as table cells
struct SummaryItem {
    enum class Kind { Number, Boolean, Text };
    std::string key;
    Kind kind = Kind::Text;
    double number = 0.0;
    bool flag = false;
    std::string text;
};

SummaryItem summary_number(const std::string& key, double value);
SummaryItem summary_boolean(const std::string& key, bool value);
SummaryItem summary_text(const std::string& key, const std::string& value);

struct RunReport {
    std::string kind;
    std::string config_hash;
    std::string config_echo;  // canonical config text; reproduces the run
    std::vector<SummaryItem> summary;
    std::vector<Table> tables;
    bool pass = false;
    double wall_clock_seconds = 0.0;
};

std::string render_csv(const Table& table);

// report.json body; every table row carries the producing config hash
std::string render_json(const RunReport& report);

// Writes report.json and one <table>.csv per table into out_dir (created if
// missing). All writes happen here, after the run has finished.
void write_all(const RunReport& report, const std::string& out_dir);

}  // namespace fracfp::report
