#include "excon/config.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace excon {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

struct LineContext {
    const std::string& origin;
    std::size_t line;

    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorCode::kParse, origin + ":" + std::to_string(line) + ": " + what);
    }
};

double to_double(const std::string& text, const LineContext& ctx) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        ctx.error("'" + text + "' is not a finite number");
    return v;
}

std::uint64_t to_unsigned(const std::string& text, const LineContext& ctx) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
        ctx.error("'" + text + "' is not a nonnegative integer");
    return v;
}

std::vector<double> to_doubles(const std::string& text, const LineContext& ctx) {
    std::vector<double> out;
    for (const std::string& item : split(text, ',')) out.push_back(to_double(item, ctx));
    if (out.empty()) ctx.error("empty list");
    return out;
}

const char* column_key(PowerColumn c) {
    switch (c) {
    case PowerColumn::kT1: return "t1";
    case PowerColumn::kT2: return "t2";
    case PowerColumn::kT2Opt: return "t2opt";
    case PowerColumn::kTc: return "tc";
    case PowerColumn::kTcOpt: return "tcopt";
    case PowerColumn::kNaive: return "naive";
    }
    return "?";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>) out += num(values[i]);
        else out += std::to_string(values[i]);
    }
    return out;
}

void set_scenario_key(DesignGrid& g, const std::string& key, const std::string& value, const LineContext& ctx) {
    if (key == "theta_star") {
        g.theta_stars = to_doubles(value, ctx);
    } else if (key == "delta0") {
        g.delta0s = to_doubles(value, ctx);
    } else if (key == "n1") {
        g.n1s.clear();
        for (const std::string& item : split(value, ',')) {
            const std::uint64_t n = to_unsigned(item, ctx);
            if (n == 0) ctx.error("n1 must be positive");
            g.n1s.push_back(static_cast<std::size_t>(n));
        }
        if (g.n1s.empty()) ctx.error("empty list");
    } else if (key == "ratio") {
        const auto parts = split(value, ':');
        if (parts.size() != 3) ctx.error("ratio must look like n1:n0:ne, e.g. 2:1:3");
        const double a = to_double(parts[0], ctx);
        const double b = to_double(parts[1], ctx);
        const double c = to_double(parts[2], ctx);
        if (!(a > 0.0 && b > 0.0 && c > 0.0)) ctx.error("ratio parts must be positive");
        g.ratio_n0 = b / a;
        g.ratio_ne = c / a;
    } else if (key == "theta0") {
        g.theta0 = to_double(value, ctx);
    } else if (key == "delta_star") {
        g.delta_star = to_double(value, ctx);
    } else if (key == "sigma1") {
        g.sigma1 = to_double(value, ctx);
    } else if (key == "sigma0") {
        g.sigma0 = to_double(value, ctx);
    } else if (key == "sigma_e") {
        g.sigma_e = to_double(value, ctx);
    } else if (key == "w") {
        g.w = to_double(value, ctx);
    } else if (key == "alpha") {
        g.alpha = to_double(value, ctx);
    } else {
        ctx.error("unknown key '" + key + "'");
    }
}

} // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
    ScenarioConfig config;
    DesignGrid defaults;
    defaults.theta_stars.clear();
    defaults.delta0s.clear();
    defaults.n1s.clear();
    bool in_block = false;
    std::vector<std::size_t> block_lines;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{origin, line_no};
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line != "[grid]") ctx.error("unknown section '" + line + "' (only [grid] is supported)");
            config.blocks.push_back(defaults);
            block_lines.push_back(line_no);
            in_block = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) ctx.error("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) ctx.error("missing value for '" + key + "'");

        if (key == "columns" || key == "reps" || key == "seed") {
            if (in_block) ctx.error("'" + key + "' must appear before the first [grid] block");
            if (key == "columns") {
                config.columns.clear();
                for (const std::string& item : split(value, ',')) {
                    std::string lower = item;
                    std::transform(lower.begin(), lower.end(), lower.begin(),
                                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                    try {
                        config.columns.push_back(parse_power_column(lower));
                    } catch (const Error& e) {
                        ctx.error(e.what());
                    }
                }
            } else if (key == "reps") {
                const std::uint64_t r = to_unsigned(value, ctx);
                if (r == 0) ctx.error("reps must be positive");
                config.reps = static_cast<std::size_t>(r);
            } else {
                config.seed = to_unsigned(value, ctx);
            }
            continue;
        }
        set_scenario_key(in_block ? config.blocks.back() : defaults, key, value, ctx);
    }

    if (config.blocks.empty()) {
        config.blocks.push_back(defaults);
        block_lines.push_back(1);
    }
    for (std::size_t b = 0; b < config.blocks.size(); ++b) {
        const DesignGrid& g = config.blocks[b];
        const LineContext ctx{origin, block_lines[b]};
        if (g.theta_stars.empty() || g.delta0s.empty() || g.n1s.empty())
            ctx.error("grid block needs theta_star, delta0 and n1");
        try {
            (void)expand(g);
        } catch (const Error& e) {
            ctx.error(std::string("invalid scenario: ") + e.what());
        }
    }
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
    return parse_config(in, path);
}

std::string to_config_text(const ScenarioConfig& config) {
    std::string out;
    if (!config.columns.empty()) {
        out += "columns = ";
        for (std::size_t i = 0; i < config.columns.size(); ++i) {
            if (i) out += ", ";
            out += column_key(config.columns[i]);
        }
        out += "\n";
    }
    if (config.reps) out += "reps = " + std::to_string(*config.reps) + "\n";
    if (config.seed) out += "seed = " + std::to_string(*config.seed) + "\n";
    for (const DesignGrid& g : config.blocks) {
        out += "\n[grid]\n";
        out += "theta_star = " + join(g.theta_stars) + "\n";
        out += "delta0 = " + join(g.delta0s) + "\n";
        out += "n1 = " + join(g.n1s) + "\n";
        out += "ratio = 1:" + num(g.ratio_n0) + ":" + num(g.ratio_ne) + "\n";
        out += "theta0 = " + num(g.theta0) + "\n";
        out += "delta_star = " + num(g.delta_star) + "\n";
        out += "sigma1 = " + num(g.sigma1) + "\n";
        out += "sigma0 = " + num(g.sigma0) + "\n";
        out += "sigma_e = " + num(g.sigma_e) + "\n";
        out += "w = " + num(g.w) + "\n";
        out += "alpha = " + num(g.alpha) + "\n";
    }
    return out;
}

std::vector<PowerScenario> expand(const ScenarioConfig& config) {
    std::vector<PowerScenario> out;
    for (const DesignGrid& g : config.blocks) {
        const auto part = expand(g);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

ScenarioConfig power_table_config() {
    ScenarioConfig c;
    c.blocks = {power_table_design()};
    c.columns = {PowerColumn::kT1, PowerColumn::kT2, PowerColumn::kT2Opt, PowerColumn::kTc, PowerColumn::kTcOpt};
    return c;
}

ScenarioConfig type1_table_config() {
    ScenarioConfig c;
    c.blocks = {type1_table_design()};
    c.columns = {PowerColumn::kT1, PowerColumn::kT2, PowerColumn::kTc, PowerColumn::kNaive};
    return c;
}

} // namespace excon
