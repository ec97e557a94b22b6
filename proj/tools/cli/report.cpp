#include "report.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace specgap::cli {

namespace {

bool same(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Json cell_json(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return number(*d);
    return std::get<std::string>(c);
}

}  // namespace

bool Record::operator==(const Record& o) const {
    return section == o.section && name == o.name && same(value, o.value) && same(lower, o.lower) &&
           same(upper, o.upper) && same(error, o.error) && source == o.source && status == o.status;
}

bool Table::operator==(const Table& o) const {
    if (id != o.id || columns != o.columns || rows.size() != o.rows.size()) return false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != o.rows[i].size()) return false;
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            const auto& a = rows[i][j];
            const auto& b = o.rows[i][j];
            if (a.index() != b.index()) return false;
            if (a.index() == 0 ? !same(std::get<0>(a), std::get<0>(b)) : std::get<1>(a) != std::get<1>(b))
                return false;
        }
    }
    return true;
}

bool RunReport::operator==(const RunReport& o) const {
    return command == o.command && inputs == o.inputs && records == o.records && table == o.table &&
           status == o.status && warnings == o.warnings && error == o.error;
}

void RunReport::warn(std::string message) {
    warnings.push_back(std::move(message));
    if (status == "ok") status = "warning";
}

void RunReport::fail(std::string message) {
    error = std::move(message);
    status = "error";
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return kNaN;
    throw std::invalid_argument("not a number: " + s);
}

Json to_json(const RunReport& r) {
    Json j;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    Json recs = Json::array();
    for (const auto& rec : r.records) {
        Json e;
        e["section"] = rec.section;
        e["name"] = rec.name;
        e["value"] = number(rec.value);
        e["lower"] = number(rec.lower);
        e["upper"] = number(rec.upper);
        e["error"] = number(rec.error);
        e["source"] = rec.source;
        e["status"] = rec.status;
        recs.push_back(std::move(e));
    }
    j["records"] = std::move(recs);
    if (r.table) {
        Json t;
        t["id"] = r.table->id;
        t["columns"] = r.table->columns;
        Json rows = Json::array();
        for (const auto& row : r.table->rows) {
            Json jr = Json::array();
            for (const auto& c : row) jr.push_back(cell_json(c));
            rows.push_back(std::move(jr));
        }
        t["rows"] = std::move(rows);
        j["table"] = std::move(t);
    } else {
        j["table"] = nullptr;
    }
    j["status"] = r.status;
    j["warnings"] = r.warnings;
    j["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    return j;
}

RunReport report_from_json(const Json& j) {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    for (const auto& e : j.at("records")) {
        Record rec;
        rec.section = e.at("section").get<std::string>();
        rec.name = e.at("name").get<std::string>();
        rec.value = number_from(e.at("value"));
        rec.lower = number_from(e.at("lower"));
        rec.upper = number_from(e.at("upper"));
        rec.error = number_from(e.at("error"));
        rec.source = e.at("source").get<std::string>();
        rec.status = e.at("status").get<std::string>();
        r.records.push_back(std::move(rec));
    }
    if (!j.at("table").is_null()) {
        const auto& t = j.at("table");
        Table table;
        table.id = t.at("id").get<std::string>();
        table.columns = t.at("columns").get<std::vector<std::string>>();
        for (const auto& jr : t.at("rows")) {
            std::vector<Cell> row;
            for (const auto& c : jr) {
                // table strings that spell a non-finite number are stored as numbers
                if (c.is_number() || c == "inf" || c == "-inf" || c == "nan")
                    row.emplace_back(number_from(c));
                else
                    row.emplace_back(c.get<std::string>());
            }
            table.rows.push_back(std::move(row));
        }
        r.table = std::move(table);
    }
    r.status = j.at("status").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.error = j.at("error").is_null() ? std::string() : j.at("error").get<std::string>();
    return r;
}

std::string to_json_text(const RunReport& report) { return to_json(report).dump(2) + "\n"; }

std::string to_csv(const RunReport& r) {
    std::string out;
    if (r.table) {
        for (std::size_t i = 0; i < r.table->columns.size(); ++i)
            out += (i ? "," : "") + csv_text(r.table->columns[i]);
        out += "\n";
        for (const auto& row : r.table->rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ",";
                if (const double* d = std::get_if<double>(&row[i]))
                    out += csv_number(*d);
                else
                    out += csv_text(std::get<std::string>(row[i]));
            }
            out += "\n";
        }
        return out;
    }
    out += kRecordCsvHeader;
    out += "\n";
    for (const auto& rec : r.records) {
        out += csv_text(rec.section) + "," + csv_text(rec.name) + "," + csv_number(rec.value) + "," +
               csv_number(rec.lower) + "," + csv_number(rec.upper) + "," + csv_number(rec.error) + "," +
               csv_text(rec.source) + "," + csv_text(rec.status) + "\n";
    }
    return out;
}

}  // namespace specgap::cli
