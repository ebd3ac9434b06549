#pragma once

#include <string>
#include <vector>

namespace lyatel {

// 17 significant digits: round-trips doubles exactly and deterministically.
std::string fmt17(double x);

// Tiny deterministic CSV assembler (comma separated, '\n' rows).
class CsvWriter {
  public:
    void header(const std::vector<std::string>& names);
    void field(const std::string& s);
    void field(double x);
    void field(long long v);
    void field_empty();
    void end_row();
    const std::string& str() const { return out_; }

  private:
    void sep();
    std::string out_;
    bool row_open_ = false;
};

// Split one CSV line on commas (no quoting; none of our emitters quote).
std::vector<std::string> csv_split(const std::string& line);

} // namespace lyatel
