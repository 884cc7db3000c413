#include "chirpmem_cli/config.hpp"

#include <chirpmem/sequence.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace chirpmem::cli {
namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// strips a trailing comment, respecting quotes
std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::optional<double> parse_number(const std::string& s)
{
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

ConfigValue parse_value(const std::string& raw, int line_no)
{
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (raw.empty()) {
        throw ConfigError(where() + "missing value");
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') {
            throw ConfigError(where() + "unterminated string");
        }
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                ++i;
            }
            out += raw[i];
        }
        return out;
    }
    if (raw == "true" || raw == "false") {
        return raw == "true";
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') {
            throw ConfigError(where() + "unterminated array");
        }
        std::vector<double> out;
        std::stringstream items(raw.substr(1, raw.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                continue;
            }
            auto v = parse_number(item);
            if (!v) {
                throw ConfigError(where() + "array items must be numbers: '" + item + "'");
            }
            out.push_back(*v);
        }
        return out;
    }
    if (auto v = parse_number(raw)) {
        return *v;
    }
    throw ConfigError(where() + "cannot parse value '" + raw + "'");
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out + "\"";
}

const char* type_name(const ConfigValue& v)
{
    switch (v.index()) {
    case 0: return "number";
    case 1: return "string";
    case 2: return "bool";
    default: return "array";
    }
}

// Binds dotted keys to RunConfig members.  Shared by reading and writing so
// the two cannot drift apart.
template <class Config, class F>
void visit_fields(Config& c, F&& f)
{
    f("scenario", c.scenario);
    f("pulse.amplitude", c.pulse.amplitude);
    f("pulse.tau_p", c.pulse.tau_p);
    f("pulse.delta0", c.pulse.delta0);
    f("pulse.chirp_range", c.pulse.chirp_range);
    f("pulse.half_window", c.pulse.half_window);
    f("atom.omega_r", c.atom.omega_r);
    f("atom.dipole_ratio", c.atom.dipole_ratio);
    f("atom.delta", c.atom.delta);
    f("timing.t0", c.timing.t0);
    f("timing.t1", c.timing.t1);
    f("timing.t2", c.timing.t2);
    f("timing.t3", c.timing.t3);
    f("timing.t4", c.timing.t4);
    f("timing.T", c.timing.T);
    f("scan.delta_lo", c.scan.delta_lo);
    f("scan.delta_hi", c.scan.delta_hi);
    f("scan.delta_points", c.scan.delta_points);
    f("scan.tau_lo", c.scan.tau_lo);
    f("scan.tau_hi", c.scan.tau_hi);
    f("scan.tau_points", c.scan.tau_points);
    f("scan.chirp_lo", c.scan.chirp_lo);
    f("scan.chirp_hi", c.scan.chirp_hi);
    f("scan.chirp_points", c.scan.chirp_points);
    f("scan.mode", c.scan.mode);
    f("scan.rel_tol", c.scan.rel_tol);
    f("scan.max_steps", c.scan.max_steps);
    f("scan.window_fraction", c.scan.window_fraction);
    f("medium.alpha_d", c.medium.alpha_d);
    f("medium.length", c.medium.length);
    f("medium.spectrum", c.medium.spectrum);
    f("medium.lo", c.medium.lo);
    f("medium.hi", c.medium.hi);
    f("medium.sigma", c.medium.sigma);
    f("medium.sigma_s", c.medium.sigma_s);
    f("grid.z_steps", c.grid.z_steps);
    f("grid.time_steps", c.grid.time_steps);
    f("grid.delta_nodes", c.grid.delta_nodes);
    f("grid.delta_panels", c.grid.delta_panels);
    f("grid.check_resolution", c.grid.check_resolution);
    f("grid.z_stride", c.grid.z_stride);
    f("grid.xi_stride", c.grid.xi_stride);
    f("map.delta_lo", c.map.delta_lo);
    f("map.delta_hi", c.map.delta_hi);
    f("map.delta_points", c.map.delta_points);
    f("echo.signal_amplitude", c.echo.signal_amplitude);
    f("echo.signal_tau", c.echo.signal_tau);
    f("echo.window_steps", c.echo.window_steps);
    f("echo.check_linearity", c.echo.check_linearity);
    f("echo.lengths", c.echo.lengths);
    f("phasematch.geometry", c.phasematch.geometry);
    f("phasematch.k", c.phasematch.k);
    f("phasematch.length", c.phasematch.length);
    f("phasematch.threshold", c.phasematch.threshold);
    f("material.preset", c.material.preset);
}

struct Reader {
    const ConfigTable& table;
    std::size_t used = 0;

    const ConfigValue* find(const std::string& key)
    {
        auto it = table.find(key);
        if (it == table.end()) {
            return nullptr;
        }
        ++used;
        return &it->second;
    }

    template <class T>
    const T& get(const std::string& key, const ConfigValue& v, const char* want)
    {
        if (const T* p = std::get_if<T>(&v)) {
            return *p;
        }
        throw ConfigError(key + ": expected " + want + ", got " + type_name(v));
    }

    void operator()(const std::string& key, double& out)
    {
        if (auto v = find(key)) {
            out = get<double>(key, *v, "number");
        }
    }
    void operator()(const std::string& key, std::optional<double>& out)
    {
        if (auto v = find(key)) {
            out = get<double>(key, *v, "number");
        }
    }
    void operator()(const std::string& key, std::size_t& out)
    {
        if (auto v = find(key)) {
            const double d = get<double>(key, *v, "number");
            if (!(d >= 0.0) || d != std::floor(d) || d > 1e15) {
                throw ConfigError(key + ": expected a non-negative integer");
            }
            out = static_cast<std::size_t>(d);
        }
    }
    void operator()(const std::string& key, bool& out)
    {
        if (auto v = find(key)) {
            out = get<bool>(key, *v, "bool");
        }
    }
    void operator()(const std::string& key, std::string& out)
    {
        if (auto v = find(key)) {
            out = get<std::string>(key, *v, "string");
        }
    }
    void operator()(const std::string& key, std::vector<double>& out)
    {
        if (auto v = find(key)) {
            out = get<std::vector<double>>(key, *v, "array");
        }
    }
};

struct Writer {
    ConfigTable& table;

    void operator()(const std::string& key, const double& v) { table[key] = v; }
    void operator()(const std::string& key, const std::optional<double>& v)
    {
        if (v) {
            table[key] = *v;
        }
    }
    void operator()(const std::string& key, const std::size_t& v) { table[key] = static_cast<double>(v); }
    void operator()(const std::string& key, const bool& v) { table[key] = v; }
    void operator()(const std::string& key, const std::string& v) { table[key] = v; }
    void operator()(const std::string& key, const std::vector<double>& v) { table[key] = v; }
};

void require(bool ok, const std::string& field, const std::string& message)
{
    if (!ok) {
        throw ConfigError(field + ": " + message);
    }
}

}  // namespace

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

ConfigTable parse_config(const std::string& text)
{
    ConfigTable table;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": bad section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (table.count(full)) {
            throw ConfigError(full + ": duplicate key (line " + std::to_string(line_no) + ")");
        }
        table[full] = parse_value(trim(line.substr(eq + 1)), line_no);
    }
    return table;
}

ConfigTable read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

RunConfig RunConfig::from_table(const ConfigTable& table)
{
    RunConfig c;
    Reader r{table};
    visit_fields(c, r);
    if (r.used != table.size()) {
        const ConfigTable known = c.to_table();
        for (const auto& [key, value] : table) {
            bool found = known.count(key) > 0 || key == "timing.t4";
            if (!found) {
                throw ConfigError(key + ": unknown key");
            }
        }
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path)
{
    return from_table(read_config_file(path));
}

ConfigTable RunConfig::to_table() const
{
    ConfigTable t;
    visit_fields(*this, Writer{t});
    return t;
}

std::string RunConfig::to_text() const
{
    // keys in declaration order, grouped by section
    std::vector<std::string> order;
    visit_fields(*this, [&](const std::string& k, const auto&) { order.push_back(k); });
    const ConfigTable t = to_table();

    std::ostringstream out;
    std::string section;
    for (const auto& key : order) {
        auto it = t.find(key);
        if (it == t.end()) {
            continue;
        }
        const auto dot = key.rfind('.');
        const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
        const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
        if (sec != section) {
            out << "\n[" << sec << "]\n";
            section = sec;
        }
        out << name << " = ";
        std::visit(
            [&](const auto& v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, double>) {
                    out << format_double(v);
                } else if constexpr (std::is_same_v<V, std::string>) {
                    out << quote(v);
                } else if constexpr (std::is_same_v<V, bool>) {
                    out << (v ? "true" : "false");
                } else {
                    out << "[";
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        out << (i ? ", " : "") << format_double(v[i]);
                    }
                    out << "]";
                }
            },
            it->second);
        out << "\n";
    }
    return out.str();
}

void RunConfig::validate() const
{
    static const char* scenarios[] = {"pulse-scan", "ensemble-scan", "sequence-check", "phasematch",
                                      "propagate",  "rephasing-map", "echo"};
    bool known = false;
    for (const char* s : scenarios) {
        known = known || scenario == s;
    }
    require(known, "scenario", "unknown scenario '" + scenario + "'");

    require(pulse.amplitude >= 0.0, "pulse.amplitude", "must be >= 0");
    require(pulse.tau_p > 0.0, "pulse.tau_p", "must be > 0");
    require(pulse.half_window >= 5.0 * pulse.tau_p, "pulse.half_window", "must be >= 5 tau_p");
    require(atom.omega_r > 0.0, "atom.omega_r", "must be > 0");
    require(timing.T > 0.0, "timing.T", "must be > 0");

    require(scan.delta_points >= 2, "scan.delta_points", "must be >= 2");
    require(scan.delta_hi > scan.delta_lo, "scan.delta_hi", "must exceed scan.delta_lo");
    require(scan.tau_points >= 1 && scan.tau_lo > 0.0 && scan.tau_hi >= scan.tau_lo, "scan.tau_lo",
            "need 0 < tau_lo <= tau_hi and tau_points >= 1");
    require(scan.chirp_points >= 1 && scan.chirp_hi >= scan.chirp_lo, "scan.chirp_lo",
            "need chirp_lo <= chirp_hi and chirp_points >= 1");
    require(scan.mode == "numeric" || scan.mode == "adiabatic", "scan.mode", "must be numeric or adiabatic");
    require(scan.rel_tol > 0.0 && scan.rel_tol < 1e-2, "scan.rel_tol", "must be in (0, 1e-2)");
    require(scan.max_steps >= 1, "scan.max_steps", "must be >= 1");
    require(scan.window_fraction > 0.0 && scan.window_fraction <= 1.0, "scan.window_fraction",
            "must be in (0, 1]");

    require(medium.alpha_d >= 0.0, "medium.alpha_d", "must be >= 0");
    require(medium.length > 0.0, "medium.length", "must be > 0");
    require(medium.spectrum == "uniform" || medium.spectrum == "gaussian", "medium.spectrum",
            "must be uniform or gaussian");
    if (medium.spectrum == "uniform") {
        require(medium.lo < 0.0 && medium.hi > 0.0, "medium.lo", "uniform window must contain 0 so g(0) > 0");
    } else {
        require(medium.sigma > 0.0, "medium.sigma", "must be > 0");
    }
    require(grid.z_steps >= 1, "grid.z_steps", "must be >= 1");
    require(grid.time_steps >= 16, "grid.time_steps", "must be >= 16");
    require(grid.delta_panels >= 1 && grid.delta_nodes % grid.delta_panels == 0, "grid.delta_nodes",
            "must be a multiple of grid.delta_panels");
    require(grid.z_stride >= 1, "grid.z_stride", "must be >= 1");
    require(grid.xi_stride >= 1, "grid.xi_stride", "must be >= 1");
    require(map.delta_points >= 2 && map.delta_hi > map.delta_lo, "map.delta_points",
            "need >= 2 points and delta_hi > delta_lo");
    require(echo.signal_amplitude >= 0.0, "echo.signal_amplitude", "must be >= 0");
    require(echo.signal_tau > 0.0, "echo.signal_tau", "must be > 0");
    require(echo.window_steps >= 16 && echo.window_steps % 2 == 0, "echo.window_steps", "must be even and >= 16");
    // lengths refer to the echo medium only
    for (double l : scenario == "echo" ? echo.lengths : std::vector<double>{}) {
        require(l > 0.0 && l <= medium.length * medium.alpha_d + 1e-12, "echo.lengths",
                "each alpha_d L must lie in (0, alpha_d * medium.length]");
    }
    require(phasematch.k > 0.0, "phasematch.k", "must be > 0");
    require(phasematch.length > 0.0, "phasematch.length", "must be > 0");
    require(phasematch.threshold > 0.0, "phasematch.threshold", "must be > 0");

    SequenceTiming t;
    t.t0 = timing.t0;
    t.t1 = timing.t1;
    t.t2 = timing.t2;
    t.t3 = timing.t3;
    t.T = timing.T;
    t.T_prime = pulse.half_window;
    t.chirp_sign = pulse.chirp_range < 0.0 ? ChirpSign::negative : ChirpSign::positive;
    try {
        if (timing.t4) {
            t.t4 = *timing.t4;
            t.validate();
        } else {
            t.validate_controls();
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("timing: ") + e.what());
    }
}

}  // namespace chirpmem::cli
