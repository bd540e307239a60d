#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace strokelab::ingest {

/// One CSV cell: missing marker, parsed number, or raw text.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<std::monostate>(c); }
inline bool is_number(const Cell& c) { return std::holds_alternative<double>(c); }
inline const double* as_number(const Cell& c) { return std::get_if<double>(&c); }
inline const std::string* as_text(const Cell& c) { return std::get_if<std::string>(&c); }

/// Cell rendered back to CSV text ("" for missing, shortest round-trip for numbers).
std::string cell_to_string(const Cell& c);

/// Raw tabular data as loaded from disk. Rows are aligned with column_order;
/// every row has exactly one cell per column.
struct RawTable {
    std::vector<std::string> column_order;
    std::vector<std::vector<Cell>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return column_order.size(); }
    /// Index of a named column; throws std::invalid_argument when absent.
    std::size_t column_index(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

struct CsvOptions {
    char delimiter = ',';
    /// Lexemes treated as missing markers (the public stroke CSV uses "N/A").
    std::vector<std::string> missing_tokens = {"", "N/A"};
    /// Header names that must be present (empty = no schema check).
    std::vector<std::string> required_columns;
    /// Header alias -> canonical name, applied before the schema check.
    std::vector<std::pair<std::string, std::string>> header_aliases;
};

/// The 12 column names of the raw stroke CSV, in file order.
const std::vector<std::string>& stroke_schema();

/// Load a CSV with a header line. Numeric-looking cells are parsed as
/// numbers, missing tokens become missing markers. Throws on a missing
/// file, an absent required column, a malformed row (with its line
/// number), or a file with no data rows.
RawTable load_csv(const std::string& path, const CsvOptions& options = {});

void save_csv(const RawTable& table, const std::string& path, char delimiter = ',');

struct CleaningRules {
    std::vector<std::string> drop_columns = {"id"};
    std::string bmi_column = "bmi";
    double bmi_max = 60.0;
    std::string age_column = "age";
    double age_min = 25.0;
    std::string gender_column = "gender";
    std::vector<std::string> drop_gender_values = {"Other"};
    bool drop_duplicates = true;
};

/// Apply the cleaning rules: drop the id column, remove rows with
/// bmi > bmi_max, age < age_min or a dropped gender value, then remove
/// exact duplicate rows (first occurrence kept). Row order is preserved.
/// Idempotent: absent drop columns are skipped, so a second pass is a
/// no-op. The bmi/age/gender rules throw when their column is unknown.
RawTable clean(const RawTable& raw, const CleaningRules& rules,
               std::vector<std::string>* warnings = nullptr);

}  // namespace strokelab::ingest
