#pragma once

#include <ostream>
#include <span>
#include <string>

#include "stokes_lab/scenarios.hpp"

namespace stokes_lab::report {

enum class Format { table, csv };

/// %.9g; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double value);

std::string format_cell(const scenarios::Cell& cell);

/// Header row, then one row per table row. Fields with commas or quotes are quoted.
void write_csv(std::ostream& out, const scenarios::Table& table);

/// Space-aligned columns.
void write_aligned(std::ostream& out, const scenarios::Table& table);

/// One line per expectation, e.g.
/// "FAIL n3.mean_S1: expected 3 +/- 1e-10, actual 2.5".
std::string describe_check(const scenarios::CheckOutcome& check);

/// Scenario output for `run`: the result table followed by check lines.
void write_result(std::ostream& out, const scenarios::ScenarioResult& result, Format format);

/// Columns scenario, quantity, condition, expected, tol, actual, status: one row per check.
scenarios::Table check_table(std::span<const scenarios::ScenarioResult> results);

}  // namespace stokes_lab::report
