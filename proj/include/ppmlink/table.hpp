#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppmlink {

/// Fixed-dialect tabular output: comma separator, '.' decimal point, header
/// row, scientific notation with 17 significant digits, '#'-prefixed
/// key = value metadata lines after the data.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    bool operator==(const Table&) const = default;
};

inline std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string format_int(long long v) { return std::to_string(v); }

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    out.push_back(cell);
    return out;
}

}  // namespace detail

/// Streaming row sink; concrete emitters write CSV or JSON incrementally, the
/// collector buffers a Table for in-process use.
class RowSink {
public:
    virtual ~RowSink() = default;
    virtual void header(const std::vector<std::string>& columns) = 0;
    virtual void row(const std::vector<std::string>& cells) = 0;
    virtual void metadata(const std::string& key, const std::string& value) = 0;
    virtual void finish() {}
};

class CsvEmitter final : public RowSink {
public:
    explicit CsvEmitter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& columns) override { line(columns); }
    void row(const std::vector<std::string>& cells) override { line(cells); }
    void metadata(const std::string& key, const std::string& value) override {
        os_ << "# " << key << " = " << value << "\n";
    }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }
    std::ostream& os_;
};

class JsonEmitter final : public RowSink {
public:
    explicit JsonEmitter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& columns) override {
        columns_ = columns;
        os_ << "{\n  \"rows\": [";
    }
    void row(const std::vector<std::string>& cells) override {
        os_ << (first_row_ ? "\n" : ",\n") << "    {";
        first_row_ = false;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ", ";
            os_ << '"' << columns_[i] << "\": \"" << cells[i] << '"';
        }
        os_ << '}';
    }
    void metadata(const std::string& key, const std::string& value) override {
        meta_.emplace_back(key, value);
    }
    void finish() override {
        os_ << "\n  ],\n  \"metadata\": {";
        for (std::size_t i = 0; i < meta_.size(); ++i) {
            if (i) os_ << ',';
            os_ << "\n    \"" << meta_[i].first << "\": \"" << meta_[i].second << '"';
        }
        os_ << (meta_.empty() ? "" : "\n  ") << "}\n}\n";
    }

private:
    std::ostream& os_;
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    bool first_row_ = true;
};

class TableCollector final : public RowSink {
public:
    void header(const std::vector<std::string>& columns) override { table_.columns = columns; }
    void row(const std::vector<std::string>& cells) override { table_.rows.push_back(cells); }
    void metadata(const std::string& key, const std::string& value) override {
        table_.metadata.emplace_back(key, value);
    }
    const Table& table() const { return table_; }

private:
    Table table_;
};

inline void emit_csv(const Table& t, std::ostream& os) {
    CsvEmitter e(os);
    e.header(t.columns);
    for (const auto& r : t.rows) e.row(r);
    for (const auto& [k, v] : t.metadata) e.metadata(k, v);
    e.finish();
}

inline Table parse_csv(std::istream& is) {
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos)
                throw std::runtime_error("parse_csv: malformed metadata line: " + line);
            std::string key = line.substr(1, eq - 1);
            if (!key.empty() && key.front() == ' ') key.erase(0, 1);
            t.metadata.emplace_back(key, line.substr(eq + 3));
            continue;
        }
        auto cells = detail::split_csv_line(line);
        if (!have_header) {
            t.columns = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != t.columns.size())
                throw std::runtime_error("parse_csv: row width does not match header");
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw std::runtime_error("parse_csv: missing header row");
    return t;
}

}  // namespace ppmlink
