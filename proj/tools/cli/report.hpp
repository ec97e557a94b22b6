#pragma once
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace specgap::cli {

using Json = nlohmann::ordered_json;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One line of output: a bound, a reference value, a solver result, a sample estimate or a check.
struct Record {
    std::string section;
    std::string name;
    double value = kNaN;
    double lower = kNaN;
    double upper = kNaN;
    double error = kNaN;
    std::string source;
    std::string status;

    bool operator==(const Record&) const;
};

using Cell = std::variant<double, std::string>;

/// Plot-ready table (the `table` command).
struct Table {
    std::string id;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    bool operator==(const Table&) const;
};

struct RunReport {
    std::string command;
    Json inputs = Json::object();
    std::vector<Record> records;
    std::optional<Table> table;
    std::string status = "ok";  ///< ok | warning | error
    std::vector<std::string> warnings;
    std::string error;

    void warn(std::string message);
    void fail(std::string message);
    bool operator==(const RunReport&) const;
};

/// Column header of the CSV form of reports without a table.
inline constexpr const char* kRecordCsvHeader = "section,name,value,lower,upper,error,source,status";

/// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
Json number(double x);
double number_from(const Json& j);

Json to_json(const RunReport& report);
RunReport report_from_json(const Json& j);
std::string to_json_text(const RunReport& report);
/// %.17g numbers; strings are quoted when they contain a comma or quote.
std::string to_csv(const RunReport& report);

}  // namespace specgap::cli
