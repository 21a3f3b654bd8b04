#pragma once

// Machine-readable output: a fixed-order envelope serialized with a fixed
// float format (%.12e) so identical invocations are byte-identical, plus
// RFC-4180 CSV emission and parsing for the table commands.

#include <string>
#include <vector>

#include <json.hpp>

namespace dfrac {

using ojson = nlohmann::ordered_json;

struct OutputEnvelope {
    std::string command;
    ojson params = ojson::object();
    int sign_sigma = 0;
    ojson results = ojson::object();
    std::vector<std::string> warnings;
    std::vector<std::string> errors;
};

// Field order: schema_version, command, params, sign_sigma, results, warnings, errors.
ojson envelope_json(const OutputEnvelope& env);

// Deterministic dump: every floating-point number rendered as %.12e, integers
// as integers, non-finite values as null; compact separators; no trailing
// whitespace. Appends nothing; callers add the final newline.
std::string dump_deterministic(const ojson& j);

// %.12e rendering shared by JSON and CSV paths.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC-4180 quoting (quotes around fields containing comma, quote, or newline;
// embedded quotes doubled); rows joined with '\n'.
std::string csv_emit(const CsvTable& table);

// Inverse of csv_emit for round-trip checks; handles quoted fields with
// embedded separators and newlines.
CsvTable csv_parse(const std::string& text);

} // namespace dfrac
