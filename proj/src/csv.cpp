#include "swipt/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace swipt::csv {

namespace {

std::string header(const Column& c) { return c.unit.empty() ? c.name : c.name + " [" + c.unit + "]"; }

}  // namespace

Table::Table(std::vector<Column> columns) : columns_(std::move(columns)) {}

Table& Table::row() {
  if (!rows_.empty() && rows_.back().size() != columns_.size())
    throw std::logic_error("csv: previous row has " + std::to_string(rows_.back().size()) + " of " +
                           std::to_string(columns_.size()) + " cells");
  rows_.emplace_back();
  rows_.back().reserve(columns_.size());
  return *this;
}

Table& Table::add(std::string v) {
  if (rows_.empty()) throw std::logic_error("csv: add() before row()");
  if (rows_.back().size() == columns_.size()) throw std::logic_error("csv: too many cells in row");
  rows_.back().push_back(std::move(v));
  return *this;
}

Table& Table::add(double v) { return add(format_number(v)); }
Table& Table::add(long v) { return add(std::to_string(v)); }
Table& Table::add(bool v) { return add(std::string(v ? "true" : "false")); }
Table& Table::blank() { return add(std::string()); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("csv: cannot format number");
  return std::string(buf, end);
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_csv(std::ostream& out, const Table& t) {
  out << "schema";
  for (const auto& c : t.columns()) out << ',' << escape(header(c));
  out << "\r\n";
  for (const auto& r : t.rows()) {
    out << schema;
    for (std::size_t i = 0; i < t.columns().size(); ++i) out << ',' << escape(i < r.size() ? r[i] : "");
    out << "\r\n";
  }
}

void write_human(std::ostream& out, const Table& t) {
  const auto& cols = t.columns();
  if (t.rows().size() == 1) {
    std::size_t width = 0;
    for (const auto& c : cols) width = std::max(width, header(c).size());
    const auto& r = t.rows().front();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto h = header(cols[i]);
      out << h << std::string(width - h.size() + 2, ' ') << (i < r.size() ? r[i] : "") << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    width[i] = header(cols[i]).size();
    for (const auto& r : t.rows()) width[i] = std::max(width[i], i < r.size() ? r[i].size() : 0);
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto h = header(cols[i]);
    out << h << (i + 1 < cols.size() ? std::string(width[i] - h.size() + 2, ' ') : "");
  }
  out << '\n';
  for (const auto& r : t.rows()) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string cell = i < r.size() ? r[i] : "";
      out << cell << (i + 1 < cols.size() ? std::string(width[i] - cell.size() + 2, ' ') : "");
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> parse(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace swipt::csv
