#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dgbo/bilinear.hpp"
#include "dgbo/probes.hpp"
#include "dgbo/solver.hpp"

namespace dgbo {

using FieldValue = std::variant<long long, std::uint64_t, double, bool, std::string, std::vector<double>>;

struct Field {
    std::string key;
    FieldValue value;
};

using Row = std::vector<Field>;

enum class Format { Jsonl, Csv };

Format parse_format(const std::string& s);
const char* extension(Format f);

// 17 significant digits; non-finite values become nan / inf / -inf.
std::string format_double(double v);

// Key order of each record kind is the member order of its struct.
Row to_row(const EstimateRatioRecord& r);
Row to_row(const SweepRecord& r);
Row to_row(const ProbeRecord& r);
Row to_row(const Diagnostics& r);

// One JSON object per line, or a CSV header plus one line per row. Vectors
// become JSON arrays, and ';'-joined cells in CSV. Non-finite doubles are
// JSON null. Returns the byte count written.
std::string serialize(const std::vector<std::string>& header, const std::vector<Row>& rows, Format f);
std::size_t write_text(const std::string& path, const std::string& text);

template <class Record>
std::vector<std::string> header_of() {
    std::vector<std::string> keys;
    for (const auto& f : to_row(Record{})) keys.push_back(f.key);
    return keys;
}

template <class Record>
std::size_t emit_records(const std::vector<Record>& records, Format f, const std::string& path) {
    std::vector<Row> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(to_row(r));
    return write_text(path, serialize(header_of<Record>(), rows, f));
}

// Rows as key -> textual value (numbers keep their written digits).
using TextRow = std::map<std::string, std::string>;
std::vector<TextRow> parse_rows(const std::string& text, Format f);
std::string read_text(const std::string& path);

EstimateRatioRecord estimate_record_from(const TextRow& row);
std::vector<EstimateRatioRecord> parse_estimate_records(const std::string& path, Format f);

}  // namespace dgbo
