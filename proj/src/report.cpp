#include "stokes_lab/report.hpp"

#include <cmath>
#include <cstdio>

namespace stokes_lab::report {

using scenarios::Cell;
using scenarios::CheckOutcome;
using scenarios::Expectation;
using scenarios::Table;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value == 0.0 ? 0.0 : value);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return format_number(std::get<double>(cell));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* condition(Expectation::Kind kind) {
  switch (kind) {
    case Expectation::Kind::value: return "value";
    case Expectation::Kind::less_than: return "less_than";
    case Expectation::Kind::greater_than: return "greater_than";
  }
  return "?";
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(format_cell(row[i]));
    out << '\n';
  }
}

void write_aligned(std::ostream& out, const Table& table) {
  std::vector<std::size_t> width(table.columns.size(), 0);
  std::vector<std::vector<std::string>> text;
  for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = table.columns[i].size();
  for (const auto& row : table.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(format_cell(row[i]));
      if (i < width.size()) width[i] = std::max(width[i], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += "  ";
      line += cells[i];
      if (i + 1 < cells.size() && i < width.size()) line.append(width[i] - cells[i].size(), ' ');
    }
    out << line << '\n';
  };
  emit(table.columns);
  for (const auto& line : text) emit(line);
}

std::string describe_check(const CheckOutcome& check) {
  const auto& e = check.expectation;
  std::string line = (check.passed ? "PASS " : "FAIL ") + e.quantity + ": ";
  switch (e.kind) {
    case Expectation::Kind::value:
      line += "expected " + format_number(e.value) + " +/- " + format_number(e.tol);
      break;
    case Expectation::Kind::less_than: line += "expected < " + format_number(e.value); break;
    case Expectation::Kind::greater_than: line += "expected > " + format_number(e.value); break;
  }
  line += ", actual " + (check.actual ? format_number(*check.actual) : std::string("(no such quantity)"));
  return line;
}

void write_result(std::ostream& out, const scenarios::ScenarioResult& result, Format format) {
  if (format == Format::csv) {
    write_csv(out, result.table);
    return;
  }
  out << "# " << result.name << " (" << result.kind << ", " << result.engine << ")\n";
  write_aligned(out, result.table);
  for (const auto& c : result.checks) out << describe_check(c) << '\n';
}

Table check_table(std::span<const scenarios::ScenarioResult> results) {
  Table t;
  t.columns = {"scenario", "quantity", "condition", "expected", "tol", "actual", "status"};
  for (const auto& r : results) {
    for (const auto& c : r.checks) {
      const auto& e = c.expectation;
      t.rows.push_back({r.name, e.quantity, std::string(condition(e.kind)), e.value,
                        e.kind == Expectation::Kind::value ? Cell{e.tol} : Cell{std::string("-")},
                        c.actual ? Cell{*c.actual} : Cell{std::string("-")},
                        std::string(c.passed ? "pass" : "fail")});
    }
  }
  return t;
}

}  // namespace stokes_lab::report
