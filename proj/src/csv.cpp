#include "lyatel/csv.hpp"

#include <cstdio>

namespace lyatel {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out_ += ',';
        out_ += names[i];
    }
    out_ += '\n';
}

void CsvWriter::sep() {
    if (row_open_) out_ += ',';
    row_open_ = true;
}

void CsvWriter::field(const std::string& s) {
    sep();
    out_ += s;
}

void CsvWriter::field(double x) { field(fmt17(x)); }

void CsvWriter::field(long long v) {
    sep();
    out_ += std::to_string(v);
}

void CsvWriter::field_empty() { sep(); }

void CsvWriter::end_row() {
    out_ += '\n';
    row_open_ = false;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace lyatel
