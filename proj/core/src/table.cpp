#include "strokelab/table.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace strokelab::ingest {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) {
        return false;
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        return false;
    }
    out = v;
    return true;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == delimiter && !quoted) {
            fields.push_back(field);
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace

std::string cell_to_string(const Cell& c) {
    if (is_missing(c)) {
        return "";
    }
    if (const double* num = as_number(c)) {
        std::ostringstream oss;
        oss.precision(17);
        oss << *num;
        return oss.str();
    }
    return *as_text(c);
}

std::size_t RawTable::column_index(const std::string& name) const {
    const auto it = std::find(column_order.begin(), column_order.end(), name);
    if (it == column_order.end()) {
        throw std::invalid_argument("unknown column: " + name);
    }
    return static_cast<std::size_t>(it - column_order.begin());
}

bool RawTable::has_column(const std::string& name) const {
    return std::find(column_order.begin(), column_order.end(), name) != column_order.end();
}

const std::vector<std::string>& stroke_schema() {
    static const std::vector<std::string> schema = {
        "id",           "gender", "age",  "hypertension", "heart_disease", "ever_married",
        "work_type",    "Residence_type", "avg_glucose_level", "bmi", "smoking_status",
        "stroke"};
    return schema;
}

RawTable load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_csv: cannot open file: " + path);
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("load_csv: empty file: " + path);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }

    RawTable table;
    for (auto& name : split_line(line, options.delimiter)) {
        std::string canonical = trim(name);
        for (const auto& [alias, target] : options.header_aliases) {
            if (canonical == alias) {
                canonical = target;
                break;
            }
        }
        table.column_order.push_back(canonical);
    }

    for (const auto& required : options.required_columns) {
        if (!table.has_column(required)) {
            throw std::runtime_error("load_csv: header lacks required column '" + required + "'");
        }
    }

    const auto is_missing_token = [&](const std::string& s) {
        return std::find(options.missing_tokens.begin(), options.missing_tokens.end(), s) !=
               options.missing_tokens.end();
    };

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_line(line, options.delimiter);
        if (fields.size() != table.n_cols()) {
            throw std::runtime_error("load_csv: line " + std::to_string(line_no) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(table.n_cols()));
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (auto& f : fields) {
            const std::string value = trim(f);
            if (is_missing_token(value)) {
                row.emplace_back(std::monostate{});
                continue;
            }
            double num = 0.0;
            if (parse_number(value, num)) {
                row.emplace_back(num);
            } else {
                row.emplace_back(value);
            }
        }
        table.rows.push_back(std::move(row));
    }

    if (table.rows.empty()) {
        throw std::runtime_error("load_csv: no data rows in " + path);
    }
    return table;
}

void save_csv(const RawTable& table, const std::string& path, char delimiter) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_csv: cannot open file for writing: " + path);
    }
    for (std::size_t c = 0; c < table.column_order.size(); ++c) {
        if (c > 0) {
            out << delimiter;
        }
        out << table.column_order[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out << delimiter;
            }
            out << cell_to_string(row[c]);
        }
        out << '\n';
    }
    if (!out.good()) {
        throw std::runtime_error("save_csv: write failed: " + path);
    }
}

RawTable clean(const RawTable& raw, const CleaningRules& rules,
               std::vector<std::string>* warnings) {
    // A drop column that is already gone is a no-op, which keeps clean idempotent.
    const std::size_t bmi_col = raw.column_index(rules.bmi_column);
    const std::size_t age_col = raw.column_index(rules.age_column);
    std::optional<std::size_t> gender_col;
    if (!rules.drop_gender_values.empty()) {
        gender_col = raw.column_index(rules.gender_column);
    }

    std::vector<bool> keep_col(raw.n_cols(), true);
    for (const auto& col : rules.drop_columns) {
        if (raw.has_column(col)) {
            keep_col[raw.column_index(col)] = false;
        }
    }

    RawTable out;
    for (std::size_t c = 0; c < raw.n_cols(); ++c) {
        if (keep_col[c]) {
            out.column_order.push_back(raw.column_order[c]);
        }
    }

    std::size_t removed = 0;
    std::set<std::vector<Cell>> seen;
    for (const auto& row : raw.rows) {
        const double* bmi = as_number(row[bmi_col]);
        if (bmi != nullptr && *bmi > rules.bmi_max) {
            ++removed;
            continue;
        }
        const double* age = as_number(row[age_col]);
        if (age != nullptr && *age < rules.age_min) {
            ++removed;
            continue;
        }
        if (gender_col) {
            const std::string* gender = as_text(row[*gender_col]);
            if (gender != nullptr &&
                std::find(rules.drop_gender_values.begin(), rules.drop_gender_values.end(),
                          *gender) != rules.drop_gender_values.end()) {
                ++removed;
                continue;
            }
        }
        std::vector<Cell> kept;
        kept.reserve(out.n_cols());
        for (std::size_t c = 0; c < raw.n_cols(); ++c) {
            if (keep_col[c]) {
                kept.push_back(row[c]);
            }
        }
        if (rules.drop_duplicates && !seen.insert(kept).second) {
            ++removed;
            continue;
        }
        out.rows.push_back(std::move(kept));
    }

    if (warnings != nullptr && removed > 0) {
        warnings->push_back("clean: removed " + std::to_string(removed) + " rows");
    }
    return out;
}

}  // namespace strokelab::ingest
