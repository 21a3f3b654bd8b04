#include "dfrac/cli_format.hpp"

#include <cmath>
#include <cstdio>

namespace dfrac {

ojson envelope_json(const OutputEnvelope& env) {
    ojson j = ojson::object();
    j["schema_version"] = "1";
    j["command"] = env.command;
    j["params"] = env.params;
    j["sign_sigma"] = env.sign_sigma;
    j["results"] = env.results;
    j["warnings"] = env.warnings;
    j["errors"] = env.errors;
    return j;
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // canonical zero: never print the sign of -0.0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (ch < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += static_cast<char>(ch);
                }
        }
    }
    out += '"';
}

void dump_rec(const ojson& j, std::string& out) {
    switch (j.type()) {
        case ojson::value_t::null: out += "null"; break;
        case ojson::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case ojson::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case ojson::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case ojson::value_t::number_float: {
            double v = j.get<double>();
            if (std::isfinite(v)) out += format_double(v);
            else out += "null";
            break;
        }
        case ojson::value_t::string: escape_string(j.get<std::string>(), out); break;
        case ojson::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                dump_rec(item, out);
            }
            out += ']';
            break;
        }
        case ojson::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                escape_string(it.key(), out);
                out += ':';
                dump_rec(it.value(), out);
            }
            out += '}';
            break;
        }
        default: out += "null"; break;
    }
}

bool needs_quoting(const std::string& field) {
    for (char ch : field)
        if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r') return true;
    return false;
}

void emit_field(const std::string& field, std::string& out) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
}

} // namespace

std::string dump_deterministic(const ojson& j) {
    std::string out;
    dump_rec(j, out);
    return out;
}

std::string csv_emit(const CsvTable& table) {
    std::string out;
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            emit_field(row[i], out);
        }
        out += '\n';
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
    return out;
}

CsvTable csv_parse(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\n') {
            end_row();
        } else if (ch == '\r') {
            // tolerate CRLF input
        } else {
            field += ch;
            field_started = true;
        }
    }
    if (field_started || !field.empty() || !row.empty()) end_row();

    CsvTable table;
    if (!rows.empty()) {
        table.header = rows.front();
        table.rows.assign(rows.begin() + 1, rows.end());
    }
    return table;
}

} // namespace dfrac
