#pragma once

#include <ostream>
#include <string>
#include <vector>

// Tabular output shared by every subcommand: RFC 4180 CSV or an aligned human
// layout, both printing numbers with the same shortest round-trip text.

namespace swipt::csv {

// Leading column of every CSV row; bump when columns change meaning.
inline constexpr const char* schema = "swipt-opt/1";

struct Column {
  std::string name;
  std::string unit;  // empty when dimensionless
};

class Table {
 public:
  explicit Table(std::vector<Column> columns);

  // Starts a row; cells are appended in column order.
  Table& row();
  Table& add(double v);
  Table& add(long v);
  Table& add(int v) { return add(static_cast<long>(v)); }
  Table& add(bool v);
  Table& add(std::string v);
  Table& add(const char* v) { return add(std::string(v)); }
  Table& blank();

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Locale-independent shortest text that reads back to the same double.
std::string format_number(double v);

// Quotes a field when it holds a comma, quote, CR or LF.
std::string escape(const std::string& field);

// Header "name [unit]" plus one CRLF-terminated record per row.
void write_csv(std::ostream& out, const Table& t);
// One "name [unit]  value" line per column for single-row tables, otherwise
// space-aligned columns.
void write_human(std::ostream& out, const Table& t);

// Parses RFC 4180 text back into records (used by tests and tooling).
std::vector<std::vector<std::string>> parse(const std::string& text);

}  // namespace swipt::csv
