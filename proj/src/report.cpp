#include "excon/report.hpp"

#include "excon/error.hpp"
#include "excon/power.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace excon {

namespace {

std::string strip_negative_zero(std::string s) {
    if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string nonfinite_text(double v) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string shortest(double v) {
    if (!std::isfinite(v)) return nonfinite_text(v);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json to_json(const Cell& c) {
    switch (c.kind) {
    case Cell::Kind::kText: return c.text;
    case Cell::Kind::kNumber:
        if (!std::isfinite(c.number)) return nonfinite_text(c.number);
        return c.number;
    case Cell::Kind::kInteger: return c.integer;
    case Cell::Kind::kBool: return c.flag;
    case Cell::Kind::kNull: return nullptr;
    }
    return nullptr;
}

bool right_aligned(const Cell& c) {
    return c.kind == Cell::Kind::kNumber || c.kind == Cell::Kind::kInteger;
}

std::string pad(const std::string& s, std::size_t width, bool right) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return right ? fill + s : s + fill;
}

void render_fields(std::string& out, const char* title, const std::vector<Field>& fields) {
    if (fields.empty()) return;
    std::size_t width = 0;
    for (const auto& f : fields) width = std::max(width, f.first.size());
    out += title;
    out += "\n";
    for (const auto& f : fields) out += "  " + pad(f.first, width, false) + "  " + f.second.display + "\n";
}

void render_table_text(std::string& out, const ReportTable& t) {
    std::vector<std::size_t> width(t.columns.size(), 0);
    for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
    for (const auto& row : t.rows)
        for (std::size_t j = 0; j < row.size() && j < width.size(); ++j) width[j] = std::max(width[j], row[j].display.size());
    out += t.name + "\n";
    std::string line = " ";
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        const bool right = !t.rows.empty() && j < t.rows[0].size() && right_aligned(t.rows[0][j]);
        line += " " + pad(t.columns[j], width[j], right);
    }
    out += line + "\n";
    for (const auto& row : t.rows) {
        line = " ";
        for (std::size_t j = 0; j < row.size() && j < width.size(); ++j) line += " " + pad(row[j].display, width[j], right_aligned(row[j]));
        out += line + "\n";
    }
}

std::string render_text(const Report& r) {
    std::string out = std::string("excon ") + tool_version() + " " + r.command + "\n";
    if (!r.inputs.empty()) out += "\n";
    render_fields(out, "inputs", r.inputs);
    if (!r.results.empty()) out += "\n";
    render_fields(out, "results", r.results);
    for (const ReportTable& t : r.tables) {
        out += "\n";
        render_table_text(out, t);
    }
    if (!r.notes.empty()) out += "\n";
    for (const std::string& n : r.notes) out += "note: " + n + "\n";
    return out;
}

std::string render_tsv(const Report& r) {
    std::string out = std::string("#excon\t") + tool_version() + "\t" + r.command + "\n";
    for (const auto& f : r.inputs) out += "input\t" + f.first + "\t" + f.second.display + "\n";
    for (const auto& f : r.results) out += "result\t" + f.first + "\t" + f.second.display + "\n";
    for (const ReportTable& t : r.tables) {
        out += "#table\t" + t.name + "\n";
        for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "\t" : "") + t.columns[j];
        out += "\n";
        for (const auto& row : t.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "\t" : "") + row[j].display;
            out += "\n";
        }
    }
    for (const std::string& n : r.notes) out += "#note\t" + n + "\n";
    return out;
}

std::string render_json(const Report& r) {
    nlohmann::ordered_json j;
    j["tool"] = "excon";
    j["version"] = tool_version();
    j["command"] = r.command;
    auto fields = [](const std::vector<Field>& fs) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (const auto& f : fs) o[f.first] = to_json(f.second);
        return o;
    };
    j["inputs"] = fields(r.inputs);
    j["results"] = fields(r.results);
    j["tables"] = nlohmann::ordered_json::array();
    for (const ReportTable& t : r.tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const Cell& c : row) jr.push_back(to_json(c));
            jt["rows"].push_back(std::move(jr));
        }
        j["tables"].push_back(std::move(jt));
    }
    j["notes"] = r.notes;
    if (!r.config_text.empty()) j["config"] = r.config_text;
    return j.dump(2) + "\n";
}

} // namespace

Cell Cell::str(std::string s) {
    Cell c;
    c.kind = Kind::kText;
    c.display = s;
    c.text = std::move(s);
    return c;
}

Cell Cell::num(double v, int decimals) {
    Cell c;
    c.kind = Kind::kNumber;
    c.number = v;
    if (!std::isfinite(v)) {
        c.display = nonfinite_text(v);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        c.display = strip_negative_zero(buf);
    }
    return c;
}

Cell Cell::exact(double v) {
    Cell c;
    c.kind = Kind::kNumber;
    c.number = v;
    c.display = shortest(v);
    return c;
}

Cell Cell::sci(double v) {
    Cell c;
    c.kind = Kind::kNumber;
    c.number = v;
    if (!std::isfinite(v)) {
        c.display = nonfinite_text(v);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        c.display = strip_negative_zero(buf);
    }
    return c;
}

Cell Cell::percent(double p) {
    Cell c;
    c.kind = Kind::kNumber;
    c.number = 100.0 * p;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", percent_one_decimal(p));
    c.display = buf;
    return c;
}

Cell Cell::integer_value(long long v) {
    Cell c;
    c.kind = Kind::kInteger;
    c.integer = v;
    c.display = std::to_string(v);
    return c;
}

Cell Cell::boolean(bool b) {
    Cell c;
    c.kind = Kind::kBool;
    c.flag = b;
    c.display = b ? "yes" : "no";
    return c;
}

Cell Cell::null(std::string display) {
    Cell c;
    c.kind = Kind::kNull;
    c.display = std::move(display);
    return c;
}

Format parse_format(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "text") return Format::kText;
    if (lower == "tsv") return Format::kTsv;
    if (lower == "json") return Format::kJson;
    fail(ErrorCode::kInvalidArgument, "unknown format '" + name + "' (expected text, tsv or json)");
}

std::string render(const Report& report, Format format) {
    switch (format) {
    case Format::kText: return render_text(report);
    case Format::kTsv: return render_tsv(report);
    case Format::kJson: return render_json(report);
    }
    return render_text(report);
}

const char* tool_version() { return "0.1.0"; }

} // namespace excon
