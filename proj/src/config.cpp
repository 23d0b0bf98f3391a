#include "entangle/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "entangle/errors.hpp"
#include "entangle/output.hpp"

namespace entangle {
namespace {

struct RawValue {
    std::string text;
    std::vector<std::string> items;
    bool quoted = false;
    bool array = false;
    int line = 0;  // 0 for --set overrides
};

using Section = std::map<std::string, RawValue>;
using RawConfig = std::map<std::string, Section>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"params", parameter_keys()},
        {"sweep", {"kind", "param", "start", "stop", "count", "scale", "y_start", "y_stop", "y_count", "y_scale"}},
        {"output", {"dir", "formats", "precision", "name"}},
    };
    return keys;
}

bool is_known(const std::string& section, const std::string& key) {
    const auto& keys = known_keys().at(section);
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string strip_comment(std::string_view line) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            in_quotes = !in_quotes;
        } else if (line[i] == '#' && !in_quotes) {
            return std::string(line.substr(0, i));
        }
    }
    return std::string(line);
}

std::string unquote(std::string_view s, int line) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return std::string(s.substr(1, s.size() - 2));
    }
    if (!s.empty() && (s.front() == '"' || s.back() == '"')) {
        throw ConfigError(line, "unterminated string " + std::string(s));
    }
    return std::string(s);
}

RawValue parse_value(std::string_view text, int line) {
    RawValue v;
    v.line = line;
    text = trim(text);
    if (text.empty()) {
        throw ConfigError(line, "missing value");
    }
    if (text.front() == '[') {
        if (text.back() != ']') {
            throw ConfigError(line, "unterminated array");
        }
        v.array = true;
        const std::string_view body = trim(text.substr(1, text.size() - 2));
        std::size_t pos = 0;
        while (!body.empty() && pos <= body.size()) {
            const auto comma = body.find(',', pos);
            const auto item = trim(body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos));
            if (item.empty()) {
                throw ConfigError(line, "empty array element");
            }
            v.items.push_back(unquote(item, line));
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
        v.text = std::string(text);
        return v;
    }
    v.quoted = text.front() == '"';
    v.text = unquote(text, line);
    return v;
}

RawConfig read_raw(std::string_view text) {
    RawConfig raw;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string stripped = strip_comment(line);
        const std::string_view body = trim(stripped);
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ConfigError(line_no, "malformed section header");
            }
            section = std::string(trim(body.substr(1, body.size() - 2)));
            if (!known_keys().contains(section)) {
                throw ConfigError(line_no, "unknown section [" + section + "]");
            }
            raw[section];
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, "expected key = value");
        }
        const std::string key(trim(body.substr(0, eq)));
        if (section.empty()) {
            throw ConfigError(line_no, "key '" + key + "' outside of a section");
        }
        if (!is_known(section, key)) {
            throw ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]");
        }
        if (raw[section].contains(key)) {
            throw ConfigError(line_no, "duplicate key '" + key + "'");
        }
        raw[section][key] = parse_value(body.substr(eq + 1), line_no);
    }
    return raw;
}

void apply_override(RawConfig& raw, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError(0, "--set expects key=value, got '" + assignment + "'");
    }
    std::string key(trim(std::string_view(assignment).substr(0, eq)));
    std::string section;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
        if (!known_keys().contains(section) || !is_known(section, key)) {
            throw ConfigError(0, "--set: unknown key '" + section + "." + key + "'");
        }
    } else {
        for (const auto& [name, keys] : known_keys()) {
            if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
                section = name;
            }
        }
        if (section.empty()) {
            throw ConfigError(0, "--set: unknown key '" + key + "'");
        }
    }
    RawValue value = parse_value(std::string_view(assignment).substr(eq + 1), 0);

    // A flag replaces whichever alternative the file chose.
    Section& params = raw["params"];
    if (section == "params") {
        if (key == "theta") {
            params.erase("g");
            params.erase("omega_c");
        } else if (key == "g" || key == "omega_c") {
            params.erase("theta");
        } else if (key == "drive") {
            params.erase("g_minus");
        } else if (key == "g_minus") {
            params.erase("drive");
        }
    }
    raw[section][key] = std::move(value);
}

std::string where(int line, const std::string& key) {
    return line > 0 ? key : "--set " + key;
}

struct Unit {
    std::string_view suffix;
    double factor;
};

double parse_number_prefix(std::string_view s, std::size_t& consumed, int line) {
    double value = 0.0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (ec != std::errc() || !std::isfinite(value)) {
        throw ConfigError(line, "malformed number '" + std::string(s) + "'");
    }
    consumed = static_cast<std::size_t>(ptr - s.data());
    return value;
}

const RawValue* find(const Section& section, const std::string& key) {
    const auto it = section.find(key);
    return it == section.end() ? nullptr : &it->second;
}

const RawValue& scalar(const RawValue& v, const std::string& key) {
    if (v.array) {
        throw ConfigError(v.line, where(v.line, key) + ": expected a scalar");
    }
    return v;
}

int parse_int(const RawValue& v, const std::string& key) {
    const std::string& t = scalar(v, key).text;
    int out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(v.line, where(v.line, key) + ": malformed integer '" + t + "'");
    }
    return out;
}

// --- params ---------------------------------------------------------------

enum class Bound { Positive, NonNegative, OpenQuarterTurn };

double read_param(const Section& s, const std::string& key, double fallback, Bound bound) {
    const RawValue* v = find(s, key);
    if (!v) {
        return fallback;
    }
    const double x = parse_quantity(scalar(*v, key).text, parameter_quantity(key), v->line);
    const bool ok = bound == Bound::Positive      ? x > 0.0
                    : bound == Bound::NonNegative ? x >= 0.0
                                                  : (x > 0.0 && x < units::pi / 2);
    if (!ok) {
        const char* rule = bound == Bound::Positive      ? "must be > 0"
                           : bound == Bound::NonNegative ? "must be >= 0"
                                                         : "must lie in (0, pi/2)";
        throw ConfigError(v->line, where(v->line, key) + " " + rule);
    }
    return x;
}

std::optional<double> read_optional(const Section& s, const std::string& key, Bound bound) {
    if (!find(s, key)) {
        return std::nullopt;
    }
    return read_param(s, key, 0.0, bound);
}

ParamBlock resolve_params(const Section& s) {
    ParamBlock p;
    p.omega_a = read_param(s, "omega_a", p.omega_a, Bound::Positive);
    p.omega_b = read_param(s, "omega_b", p.omega_b, Bound::Positive);
    p.kappa_a = read_param(s, "kappa_a", p.kappa_a, Bound::Positive);
    p.kappa_c = read_param(s, "kappa_c", p.kappa_c, Bound::Positive);
    p.kappa_b = read_param(s, "kappa_b", p.kappa_b, Bound::Positive);
    p.temperature_mk = read_param(s, "T", p.temperature_mk, Bound::NonNegative);
    p.g0 = read_param(s, "g0", p.g0, Bound::Positive);
    p.omega_0 = read_optional(s, "omega_0", Bound::Positive);

    const auto theta = read_optional(s, "theta", Bound::OpenQuarterTurn);
    const auto g = read_optional(s, "g", Bound::NonNegative);
    const auto omega_c = read_optional(s, "omega_c", Bound::Positive);
    if (theta && (g || omega_c)) {
        const RawValue* v = find(s, "theta");
        throw ConfigError(v->line, "theta conflicts with explicit g/omega_c; give one or the other");
    }
    if (g.has_value() != omega_c.has_value()) {
        const RawValue* v = g ? find(s, "g") : find(s, "omega_c");
        throw ConfigError(v->line, "explicit geometry needs both g and omega_c");
    }
    if (g) {
        p.theta.reset();
        p.g = g;
        p.omega_c = omega_c;
    } else if (theta) {
        p.theta = theta;
    }

    const auto g_minus = read_optional(s, "g_minus", Bound::NonNegative);
    const auto drive = read_optional(s, "drive", Bound::NonNegative);
    if (g_minus && drive) {
        const RawValue* v = find(s, "drive");
        throw ConfigError(v->line, "drive conflicts with g_minus; pin one of them");
    }
    if (drive) {
        p.g_minus.reset();
        p.drive = drive;
    } else if (g_minus) {
        p.g_minus = g_minus;
    }
    return p;
}

// --- sweep ----------------------------------------------------------------

std::string x_key(SweepKind kind, const std::string& param) {
    switch (kind) {
        case SweepKind::Theta: return "theta";
        case SweepKind::Detuning: return "detuning";
        case SweepKind::GMinus: return "g_minus";
        case SweepKind::KappaGrid: return "kappa_a";
        case SweepKind::TempKappaBGrid: return "T";
        case SweepKind::Generic: return param;
        case SweepKind::Point: break;
    }
    return {};
}

Axis read_axis(const Section& s, const std::string& prefix, Axis axis, bool range_required) {
    const Quantity q = parameter_quantity(axis.key);
    const RawValue* start = find(s, prefix + "start");
    const RawValue* stop = find(s, prefix + "stop");
    if (range_required && (!start || !stop)) {
        throw ConfigError(0, "sweep over '" + axis.key + "' needs " + prefix + "start and " + prefix + "stop");
    }
    if (start) {
        axis.start = parse_quantity(scalar(*start, prefix + "start").text, q, start->line);
    }
    if (stop) {
        axis.stop = parse_quantity(scalar(*stop, prefix + "stop").text, q, stop->line);
    }
    if (const RawValue* count = find(s, prefix + "count")) {
        axis.count = parse_int(*count, prefix + "count");
    } else if (range_required) {
        axis.count = 200;
    }
    if (const RawValue* scale = find(s, prefix + "scale")) {
        const std::string& t = scalar(*scale, prefix + "scale").text;
        if (t == "linear") {
            axis.scale = AxisScale::Linear;
        } else if (t == "log") {
            axis.scale = AxisScale::Log;
        } else {
            throw ConfigError(scale->line, where(scale->line, prefix + "scale") + ": expected linear or log");
        }
    }
    try {
        axis.validate();
    } catch (const Error& e) {
        const RawValue* at = start ? start : stop;
        throw ConfigError(at ? at->line : 0, e.what());
    }
    return axis;
}

SweepBlock resolve_sweep(const Section& s) {
    SweepBlock b;
    if (const RawValue* kind = find(s, "kind")) {
        const auto parsed = sweep_kind_from_string(scalar(*kind, "kind").text);
        if (!parsed) {
            throw ConfigError(kind->line, "unknown sweep kind '" + kind->text + "' (see list-sweeps)");
        }
        b.kind = *parsed;
    }

    const RawValue* param = find(s, "param");
    if (b.kind == SweepKind::Generic) {
        if (!param) {
            throw ConfigError(0, "generic sweep needs sweep.param");
        }
        b.param = scalar(*param, "param").text;
        const auto& keys = parameter_keys();
        if (std::find(keys.begin(), keys.end(), b.param) == keys.end()) {
            throw ConfigError(param->line, "sweep.param: unknown parameter '" + b.param + "'");
        }
    } else if (param) {
        throw ConfigError(param->line, "sweep.param only applies to kind = generic");
    }

    const bool two_d = b.kind == SweepKind::KappaGrid || b.kind == SweepKind::TempKappaBGrid;
    for (const char* key : {"start", "stop", "count", "scale"}) {
        if (b.kind == SweepKind::Point && find(s, key)) {
            throw ConfigError(find(s, key)->line, std::string("sweep.") + key + ": point evaluation has no axis");
        }
        const std::string y = std::string("y_") + key;
        if (!two_d && find(s, y)) {
            throw ConfigError(find(s, y)->line, "sweep." + y + ": only 2-D sweeps have a y axis");
        }
    }
    if (b.kind == SweepKind::Point) {
        return b;
    }

    auto [dx, dy] = default_axes(b.kind, b.param);
    dx->key = x_key(b.kind, b.param);
    b.x = read_axis(s, "", *dx, b.kind == SweepKind::Generic);
    if (two_d) {
        b.y = read_axis(s, "y_", *dy, false);
    }
    return b;
}

// --- output ---------------------------------------------------------------

OutputBlock resolve_output(const Section& s, SweepKind kind) {
    OutputBlock o;
    if (const RawValue* dir = find(s, "dir")) {
        o.dir = scalar(*dir, "dir").text;
        if (o.dir.empty()) {
            throw ConfigError(dir->line, "output.dir must not be empty");
        }
    }
    if (const RawValue* formats = find(s, "formats")) {
        o.formats = formats->array ? formats->items : std::vector<std::string>{formats->text};
        for (const auto& f : o.formats) {
            if (f != "csv" && f != "meta" && f != "dat") {
                throw ConfigError(formats->line, "output.formats: unknown format '" + f + "' (csv, meta, dat)");
            }
        }
    }
    if (const RawValue* precision = find(s, "precision")) {
        if (scalar(*precision, "precision").text == "shortest") {
            o.precision = 0;
        } else {
            o.precision = parse_int(*precision, "precision");
            if (o.precision < 1 || o.precision > 17) {
                throw ConfigError(precision->line, "output.precision must be \"shortest\" or 1..17");
            }
        }
    }
    o.name = std::string(to_string(kind));
    if (const RawValue* name = find(s, "name")) {
        o.name = scalar(*name, "name").text;
        if (o.name.empty() || o.name.find('/') != std::string::npos) {
            throw ConfigError(name->line, "output.name must be a plain file stem");
        }
    }
    return o;
}

// --- echo -----------------------------------------------------------------

std::string fmt(double x) { return format_double(x, 0); }

std::string with_unit(double display, Quantity q) {
    switch (q) {
        case Quantity::Frequency: return fmt(display) + "Hz";
        case Quantity::Temperature: return fmt(display) + "mK";
        case Quantity::Angle: return fmt(display);
        case Quantity::DriveProduct: return fmt(display);
    }
    return fmt(display);
}

void echo_axis(std::ostringstream& os, const Axis& axis, const std::string& prefix) {
    const Quantity q = parameter_quantity(axis.key);
    os << prefix << "start = " << with_unit(axis.start, q) << '\n';
    os << prefix << "stop = " << with_unit(axis.stop, q) << '\n';
    os << prefix << "count = " << axis.count << '\n';
    os << prefix << "scale = " << to_string(axis.scale) << '\n';
}

}  // namespace

double parse_quantity(std::string_view text, Quantity quantity, int line) {
    text = trim(text);
    std::size_t consumed = 0;
    const double number = parse_number_prefix(text, consumed, line);
    const std::string_view suffix = trim(text.substr(consumed));

    static constexpr std::array<Unit, 9> frequency{{{"", 1.0},
                                                    {"Hz", 1.0},
                                                    {"mHz", 1e-3},
                                                    {"kHz", 1e3},
                                                    {"MHz", 1e6},
                                                    {"GHz", 1e9},
                                                    {"k", 1e3},
                                                    {"M", 1e6},
                                                    {"G", 1e9}}};
    static constexpr std::array<Unit, 4> temperature{{{"", 1.0}, {"mK", 1.0}, {"uK", 1e-3}, {"K", 1e3}}};
    static constexpr std::array<Unit, 3> angle{{{"", 1.0}, {"rad", 1.0}, {"pi", units::pi}}};
    static constexpr std::array<Unit, 3> drive{{{"", 1.0}, {"Hz2", 1.0}, {"Hz^2", 1.0}}};

    auto lookup = [&](const auto& table) -> std::optional<double> {
        for (const auto& u : table) {
            if (u.suffix == suffix) {
                return u.factor;
            }
        }
        return std::nullopt;
    };

    std::optional<double> factor;
    const char* expected = "";
    switch (quantity) {
        case Quantity::Frequency: factor = lookup(frequency); expected = "a frequency (Hz, kHz, MHz, GHz)"; break;
        case Quantity::Temperature: factor = lookup(temperature); expected = "a temperature (mK, K)"; break;
        case Quantity::Angle: factor = lookup(angle); expected = "an angle (rad or multiples of pi)"; break;
        case Quantity::DriveProduct: factor = lookup(drive); expected = "a drive product (Hz^2)"; break;
    }
    if (!factor) {
        throw ConfigError(line, "unit mismatch: '" + std::string(text) + "' is not " + expected);
    }
    return number * *factor;
}

Scenario ParamBlock::to_scenario() const {
    Scenario s;
    s.omega_a = parameter_to_si("omega_a", omega_a);
    s.omega_b = parameter_to_si("omega_b", omega_b);
    s.kappa_a = parameter_to_si("kappa_a", kappa_a);
    s.kappa_c = parameter_to_si("kappa_c", kappa_c);
    s.kappa_b = parameter_to_si("kappa_b", kappa_b);
    s.temperature = parameter_to_si("T", temperature_mk);
    s.g0 = parameter_to_si("g0", g0);
    if (theta) {
        s.theta = *theta;
    } else {
        s.g = parameter_to_si("g", g.value_or(0.0));
        s.omega_c = parameter_to_si("omega_c", omega_c.value_or(0.0));
    }
    if (omega_0) {
        s.omega_0 = parameter_to_si("omega_0", *omega_0);
    }
    if (g_minus) {
        s.abs_g_minus = parameter_to_si("g_minus", *g_minus);
    } else {
        s.drive_strength = parameter_to_si("drive", drive.value_or(0.0));
    }
    return s;
}

SweepSpec RunConfig::to_sweep_spec() const {
    SweepSpec spec;
    spec.kind = sweep.kind;
    spec.base = params.to_scenario();
    spec.x = sweep.x;
    spec.y = sweep.y;
    spec.param = sweep.param;
    return spec;
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
    RawConfig raw = read_raw(text);
    for (const auto& o : overrides) {
        apply_override(raw, o);
    }

    RunConfig config;
    config.params = resolve_params(raw["params"]);
    config.sweep = resolve_sweep(raw["sweep"]);
    config.output = resolve_output(raw["output"], config.sweep.kind);

    try {
        validate_sweep_spec(config.to_sweep_spec());
        config.params.to_scenario().resolve().params.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(0, e.what());
    }
    return config;
}

std::string echo_config(const RunConfig& c) {
    std::ostringstream os;
    const ParamBlock& p = c.params;
    os << "[params]\n";
    os << "omega_a = " << with_unit(p.omega_a, Quantity::Frequency) << '\n';
    os << "omega_b = " << with_unit(p.omega_b, Quantity::Frequency) << '\n';
    if (p.theta) {
        os << "theta = " << with_unit(*p.theta, Quantity::Angle) << '\n';
    }
    if (p.g) {
        os << "g = " << with_unit(*p.g, Quantity::Frequency) << '\n';
    }
    if (p.omega_c) {
        os << "omega_c = " << with_unit(*p.omega_c, Quantity::Frequency) << '\n';
    }
    os << "kappa_a = " << with_unit(p.kappa_a, Quantity::Frequency) << '\n';
    os << "kappa_c = " << with_unit(p.kappa_c, Quantity::Frequency) << '\n';
    os << "kappa_b = " << with_unit(p.kappa_b, Quantity::Frequency) << '\n';
    os << "T = " << with_unit(p.temperature_mk, Quantity::Temperature) << '\n';
    if (p.g_minus) {
        os << "g_minus = " << with_unit(*p.g_minus, Quantity::Frequency) << '\n';
    }
    if (p.drive) {
        os << "drive = " << with_unit(*p.drive, Quantity::DriveProduct) << '\n';
    }
    os << "g0 = " << with_unit(p.g0, Quantity::Frequency) << '\n';
    if (p.omega_0) {
        os << "omega_0 = " << with_unit(*p.omega_0, Quantity::Frequency) << '\n';
    }

    os << "\n[sweep]\n";
    os << "kind = " << to_string(c.sweep.kind) << '\n';
    if (c.sweep.kind == SweepKind::Generic) {
        os << "param = " << c.sweep.param << '\n';
    }
    if (c.sweep.x) {
        echo_axis(os, *c.sweep.x, "");
    }
    if (c.sweep.y) {
        echo_axis(os, *c.sweep.y, "y_");
    }

    os << "\n[output]\n";
    os << "dir = \"" << c.output.dir << "\"\n";
    os << "formats = [";
    for (std::size_t i = 0; i < c.output.formats.size(); ++i) {
        os << (i ? ", " : "") << '"' << c.output.formats[i] << '"';
    }
    os << "]\n";
    if (c.output.precision == 0) {
        os << "precision = \"shortest\"\n";
    } else {
        os << "precision = " << c.output.precision << '\n';
    }
    os << "name = \"" << c.output.name << "\"\n";
    return os.str();
}

}  // namespace entangle
