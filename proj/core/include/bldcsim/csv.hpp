#pragma once

#include <filesystem>
#include <string>

#include "bldcsim/trace.hpp"

namespace bldcsim {

/// Trace CSV: exact header from trace_columns(), floats with 9 significant
/// digits, binary columns as 0/1 integers.
std::string trace_to_csv(const Trace& trace);
void export_csv(const Trace& trace, const std::filesystem::path& path);

/// Inverse of export within numeric formatting. Throws SchemaMismatch when
/// the header differs and ParseFailure (with row and column) on bad cells.
Trace import_csv(const std::filesystem::path& path);
Trace csv_to_trace(const std::string& text);

/// Formats a double with 9 significant digits (the trace CSV convention).
std::string format_csv_value(double value);

}  // namespace bldcsim
