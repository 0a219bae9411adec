#include "fracfp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace fracfp::report {

std::string cell(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::string cell(int x) { return std::to_string(x); }

std::string cell(long long x) { return std::to_string(x); }

SummaryItem summary_number(const std::string& key, double value) {
    SummaryItem item;
    item.key = key;
    item.kind = SummaryItem::Kind::Number;
    item.number = value;
    return item;
}

SummaryItem summary_boolean(const std::string& key, bool value) {
    SummaryItem item;
    item.key = key;
    item.kind = SummaryItem::Kind::Boolean;
    item.flag = value;
    return item;
}

SummaryItem summary_text(const std::string& key, const std::string& value) {
    SummaryItem item;
    item.key = key;
    item.kind = SummaryItem::Kind::Text;
    item.text = value;
    return item;
}

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (j) out += ',';
        out += table.columns[j];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("render_csv: row width mismatch in '" +
                                        table.name + "'");
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += row[j];
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["kind"] = report.kind;
    j["config_hash"] = report.config_hash;
    j["config_echo"] = report.config_echo;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& item : report.summary) {
        switch (item.kind) {
            case SummaryItem::Kind::Number:
                summary[item.key] = cell(item.number);
                break;
            case SummaryItem::Kind::Boolean:
                summary[item.key] = item.flag;
                break;
            case SummaryItem::Kind::Text:
                summary[item.key] = item.text;
                break;
        }
    }
    j["summary"] = std::move(summary);
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto& table : report.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            if (row.size() != table.columns.size())
                throw std::invalid_argument(
                    "render_json: row width mismatch in '" + table.name + "'");
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t c = 0; c < row.size(); ++c)
                obj[table.columns[c]] = row[c];
            obj["config_hash"] = report.config_hash;
            rows.push_back(std::move(obj));
        }
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        entry["columns"] = table.columns;
        entry["rows"] = std::move(rows);
        tables[table.name] = std::move(entry);
    }
    j["tables"] = std::move(tables);
    j["pass"] = report.pass;
    j["wall_clock_seconds"] = cell(report.wall_clock_seconds);
    return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_all(const RunReport& report, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", render_json(report));
    for (const auto& table : report.tables)
        write_file(dir / (table.name + ".csv"), render_csv(table));
}

}  // namespace fracfp::report
