#pragma once

// Command results as a small document (echoed inputs, scalar results,
// tables, notes) with text, TSV and JSON renderings. Rendering is a pure
// function of the report, so output is byte-stable.

#include <string>
#include <utility>
#include <vector>

namespace excon {

/// A value with its display text. JSON gets the value at full precision,
/// text and TSV get the display.
struct Cell {
    enum class Kind { kText, kNumber, kInteger, kBool, kNull };
    Kind kind = Kind::kNull;
    std::string display;
    std::string text;
    double number = 0.0;
    long long integer = 0;
    bool flag = false;

    static Cell str(std::string s);
    /// Fixed decimals for display.
    static Cell num(double v, int decimals);
    /// Shortest round-trip representation for display as well.
    static Cell exact(double v);
    /// %.3g-style display for p-values and other small quantities.
    static Cell sci(double v);
    /// A probability shown in percent with one decimal, rounded half up.
    static Cell percent(double p);
    static Cell integer_value(long long v);
    static Cell boolean(bool b);
    static Cell null(std::string display = "-");
};

using Field = std::pair<std::string, Cell>;

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string command;
    std::vector<Field> inputs;
    std::vector<Field> results;
    std::vector<ReportTable> tables;
    std::vector<std::string> notes;
    std::string config_text;  // canonical config for config-driven commands
};

enum class Format { kText, kTsv, kJson };

Format parse_format(const std::string& name);

std::string render(const Report& report, Format format);

const char* tool_version();

} // namespace excon
