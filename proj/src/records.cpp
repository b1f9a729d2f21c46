#include "dgbo/records.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dgbo/errors.hpp"

namespace dgbo {
namespace {

void json_string(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

std::string json_double(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct JsonValue {
    std::string& out;
    void operator()(long long v) { out += std::to_string(v); }
    void operator()(std::uint64_t v) { out += std::to_string(v); }
    void operator()(double v) { out += json_double(v); }
    void operator()(bool v) { out += v ? "true" : "false"; }
    void operator()(const std::string& v) { json_string(out, v); }
    void operator()(const std::vector<double>& v) {
        out += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            out += json_double(v[i]);
        }
        out += ']';
    }
};

struct CsvValue {
    std::string operator()(long long v) { return std::to_string(v); }
    std::string operator()(std::uint64_t v) { return std::to_string(v); }
    std::string operator()(double v) { return format_double(v); }
    std::string operator()(bool v) { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) { return csv_cell(v); }
    std::string operator()(const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += format_double(v[i]);
        }
        return s;
    }
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else {
            cells.back() += c;
        }
    }
    return cells;
}

std::string json_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "nan";
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += json_text(v[i]);
        }
        return s;
    }
    return v.dump();
}

const std::string& need(const TextRow& row, const std::string& key) {
    auto it = row.find(key);
    if (it == row.end()) fail_validation(ErrorKind::Io, "record is missing key '" + key + "'");
    return it->second;
}

double to_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return infinity;
    if (s == "-inf") return -infinity;
    // strtod rather than stod: subnormals set ERANGE but come back exact
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) fail_validation(ErrorKind::Io, "malformed number '" + s + "'");
    return v;
}

}  // namespace

Format parse_format(const std::string& s) {
    if (s == "jsonl") return Format::Jsonl;
    if (s == "csv") return Format::Csv;
    fail_validation(ErrorKind::Config, "format must be jsonl or csv, got '" + s + "'");
}

const char* extension(Format f) { return f == Format::Jsonl ? "jsonl" : "csv"; }

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Row to_row(const EstimateRatioRecord& r) {
    return {{"lemma", r.lemma},
            {"case", r.case_kind},
            {"N1", (long long)r.N1},
            {"N2", (long long)r.N2},
            {"N", (long long)r.N},
            {"L1", (long long)r.L1},
            {"L2", (long long)r.L2},
            {"L", (long long)r.L},
            {"r", r.r},
            {"alpha", r.alpha},
            {"trial", (long long)r.trial},
            {"seed", r.seed},
            {"j_value", r.j_value},
            {"bound", r.bound},
            {"norm_product", r.norm_product},
            {"ratio", r.ratio}};
}

Row to_row(const SweepRecord& r) {
    return {{"alpha", r.alpha},         {"r", r.r},
            {"s", r.s},                 {"T", r.T},
            {"amplitude", r.amplitude}, {"seed", r.seed},
            {"kappas", r.kappas},       {"converged", r.converged},
            {"diverged", r.diverged},   {"residual", r.residual},
            {"error", r.error}};
}

Row to_row(const ProbeRecord& r) {
    return {{"N", (long long)r.N},         {"alpha", r.alpha},   {"s", r.s},
            {"r", r.r},                    {"t", r.t},           {"seed", r.seed},
            {"space", r.space},            {"second_norm", r.second_norm},
            {"data_norm", r.data_norm},    {"ratio", r.ratio},   {"growth", r.growth},
            {"monotone", r.monotone}};
}

Row to_row(const Diagnostics& r) {
    return {{"t", r.t}, {"mean", r.mean}, {"l2", r.l2}, {"energy", r.energy}};
}

std::string serialize(const std::vector<std::string>& header, const std::vector<Row>& rows, Format f) {
    std::string out;
    if (f == Format::Csv) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(header[i]);
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += std::visit(CsvValue{}, row[i].value);
            }
            out += '\n';
        }
        return out;
    }
    for (const auto& row : rows) {
        out += '{';
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            json_string(out, row[i].key);
            out += ':';
            std::visit(JsonValue{out}, row[i].value);
        }
        out += "}\n";
    }
    return out;
}

std::size_t write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw RuntimeFailure(ErrorKind::Io, "cannot open '" + path + "' for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw RuntimeFailure(ErrorKind::Io, "write to '" + path + "' failed");
    return text.size();
}

std::string read_text(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw RuntimeFailure(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<TextRow> parse_rows(const std::string& text, Format f) {
    std::vector<TextRow> rows;
    std::istringstream is(text);
    std::string line;
    if (f == Format::Csv) {
        if (!std::getline(is, line)) return rows;
        const auto header = split_csv_line(line);
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            if (cells.size() != header.size()) fail_validation(ErrorKind::Io, "CSV row width differs from header");
            TextRow row;
            for (std::size_t i = 0; i < cells.size(); ++i) row[header[i]] = cells[i];
            rows.push_back(std::move(row));
        }
        return rows;
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail_validation(ErrorKind::Io, std::string("malformed JSON line: ") + e.what());
        }
        if (!obj.is_object()) fail_validation(ErrorKind::Io, "JSON line is not an object");
        TextRow row;
        for (auto it = obj.begin(); it != obj.end(); ++it) row[it.key()] = json_text(it.value());
        rows.push_back(std::move(row));
    }
    return rows;
}

EstimateRatioRecord estimate_record_from(const TextRow& row) {
    EstimateRatioRecord r;
    r.lemma = need(row, "lemma");
    r.case_kind = need(row, "case");
    r.N1 = std::stol(need(row, "N1"));
    r.N2 = std::stol(need(row, "N2"));
    r.N = std::stol(need(row, "N"));
    r.L1 = std::stol(need(row, "L1"));
    r.L2 = std::stol(need(row, "L2"));
    r.L = std::stol(need(row, "L"));
    r.r = to_double(need(row, "r"));
    r.alpha = to_double(need(row, "alpha"));
    r.trial = std::stol(need(row, "trial"));
    r.seed = std::stoull(need(row, "seed"));
    r.j_value = to_double(need(row, "j_value"));
    r.bound = to_double(need(row, "bound"));
    r.norm_product = to_double(need(row, "norm_product"));
    r.ratio = to_double(need(row, "ratio"));
    return r;
}

std::vector<EstimateRatioRecord> parse_estimate_records(const std::string& path, Format f) {
    std::vector<EstimateRatioRecord> out;
    for (const auto& row : parse_rows(read_text(path), f)) out.push_back(estimate_record_from(row));
    return out;
}

}  // namespace dgbo
