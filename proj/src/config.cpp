#include "tfem/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tfem/error.hpp"

namespace tfem {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string> kCommonKeys{
    "problem",       "initial.kind",  "initial.amplitude", "initial.rate",
    "input.kind",    "input.t0",      "input.sigma",       "input.amplitude",
    "input.omega",   "sim.dt",        "sim.T",             "sim.scheme",
    "sim.stride",    "output.dir",    "output.snapshots",
};

const std::set<std::string> k1DKeys{
    "domain.a",     "domain.b",     "mesh.kind",    "mesh.elements", "mesh.side",
    "mesh.ratio",   "motion.kind",  "motion.speed", "motion.horizon", "density.kind",
    "density.h0",   "density.slope", "initial.center",
};

const std::set<std::string> k2DKeys{
    "domain.lx",     "domain.ly",   "mesh.nx",        "mesh.ny",
    "velocity.kind", "velocity.c1", "velocity.c2",    "velocity.alpha",
    "velocity.omega", "initial.center1", "initial.center2",
};

class Reader {
public:
    Reader(const KeyValues& kv, std::string source) : kv_(kv), source_(std::move(source)) {}

    bool has(const std::string& key) const { return kv_.values.count(key) != 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        std::ostringstream msg;
        msg << source_;
        if (auto it = kv_.lines.find(key); it != kv_.lines.end())
            msg << ":" << it->second;
        msg << ": " << key << ": " << what;
        throw ConfigError(msg.str());
    }

    std::string text(const std::string& key, const std::string& fallback) const
    {
        auto it = kv_.values.find(key);
        return it == kv_.values.end() ? fallback : it->second;
    }

    std::string required_text(const std::string& key) const
    {
        if (!has(key))
            throw ConfigError(source_ + ": missing required key '" + key + "'");
        return kv_.values.at(key);
    }

    double number(const std::string& key, double fallback) const
    {
        if (!has(key))
            return fallback;
        return parse_double(key, kv_.values.at(key));
    }

    double required_number(const std::string& key) const
    {
        return parse_double(key, required_text(key));
    }

    long integer(const std::string& key, long fallback) const
    {
        if (!has(key))
            return fallback;
        const std::string& v = kv_.values.at(key);
        long out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            fail(key, "expected an integer, got '" + v + "'");
        return out;
    }

    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<const char*> allowed) const
    {
        const std::string v = text(key, fallback);
        for (const char* a : allowed)
            if (v == a)
                return v;
        std::string list;
        for (const char* a : allowed)
            list += std::string(list.empty() ? "" : "|") + a;
        fail(key, "expected one of " + list + ", got '" + v + "'");
    }

    std::vector<double> number_list(const std::string& key) const
    {
        std::vector<double> out;
        if (!has(key))
            return out;
        std::stringstream ss(kv_.values.at(key));
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(parse_double(key, trim(item)));
        return out;
    }

private:
    double parse_double(const std::string& key, const std::string& v) const
    {
        double out = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
            fail(key, "expected a number, got '" + v + "'");
        return out;
    }

    const KeyValues& kv_;
    std::string source_;
};

} // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source)
{
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key or value");
        if (kv.values.count(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.values[key] = value;
        kv.lines[key] = lineno;
    }
    return kv;
}

RunConfig parse_run_config(std::istream& in, const std::string& source)
{
    const KeyValues kv = parse_key_values(in, source);
    const Reader r(kv, source);
    RunConfig c;

    const std::string problem = r.choice("problem", "", {"transport-1d", "transport-2d"});
    c.problem = problem == "transport-1d" ? ProblemKind::Transport1D : ProblemKind::Transport2D;
    const auto& specific = c.problem == ProblemKind::Transport1D ? k1DKeys : k2DKeys;
    for (const auto& [key, value] : kv.values)
        if (!kCommonKeys.count(key) && !specific.count(key))
            r.fail(key, "unknown key for " + problem);

    c.initial_kind = r.choice("initial.kind", "gaussian", {"gaussian", "constant", "zero"});
    c.amplitude = r.number("initial.amplitude", c.amplitude);
    c.rate = r.number("initial.rate", c.rate);
    if (!(c.rate > 0.0))
        r.fail("initial.rate", "must be > 0");

    const std::string input = r.choice("input.kind", "zero", {"zero", "gaussian-pulse", "step", "sine"});
    const double amp = r.number("input.amplitude", 1.0);
    if (input == "gaussian-pulse") {
        const double sigma = r.number("input.sigma", 0.05);
        if (!(sigma > 0.0))
            r.fail("input.sigma", "must be > 0");
        c.sim.input = InputSignal::gaussian_pulse(r.number("input.t0", 0.0), sigma, amp);
    } else if (input == "step") {
        c.sim.input = InputSignal::step(r.number("input.t0", 0.0), amp);
    } else if (input == "sine") {
        c.sim.input = InputSignal::sine(r.number("input.omega", 1.0), amp);
    }

    c.sim.dt = r.required_number("sim.dt");
    c.sim.final_time = r.required_number("sim.T");
    c.sim.scheme = r.choice("sim.scheme", "midpoint", {"midpoint", "rk4"}) == "rk4" ? Scheme::Rk4
                                                                                  : Scheme::Midpoint;
    const long stride = r.integer("sim.stride", 1);
    if (stride < 1)
        r.fail("sim.stride", "must be >= 1");
    c.sim.stride = static_cast<std::size_t>(stride);
    c.sim.snapshot_times = r.number_list("output.snapshots");
    if (!(c.sim.dt > 0.0))
        r.fail("sim.dt", "must be > 0");
    if (!(c.sim.final_time >= c.sim.dt))
        r.fail("sim.T", "must be >= sim.dt");
    for (double ts : c.sim.snapshot_times)
        if (ts < 0.0 || ts > c.sim.final_time)
            r.fail("output.snapshots", "snapshot times must lie in [0, sim.T]");
    c.output_dir = r.required_text("output.dir");

    if (c.problem == ProblemKind::Transport1D) {
        c.a = r.number("domain.a", c.a);
        c.b = r.number("domain.b", c.b);
        if (!(c.b > c.a))
            r.fail("domain.b", "must exceed domain.a");
        c.mesh_kind = r.choice("mesh.kind", "uniform", {"uniform", "log-concentrated"});
        const long elements = r.integer("mesh.elements", 20);
        if (elements < 1)
            r.fail("mesh.elements", "must be >= 1");
        c.elements = static_cast<std::size_t>(elements);
        c.side = r.choice("mesh.side", "right", {"left", "right"}) == "left" ? Side::Left : Side::Right;
        c.ratio = r.number("mesh.ratio", c.ratio);
        if (c.mesh_kind == "log-concentrated" && !(c.ratio > 1.0))
            r.fail("mesh.ratio", "must be > 1");
        c.motion_kind = r.choice("motion.kind", "static", {"static", "traveling"});
        c.motion_speed = r.number("motion.speed", c.motion_speed);
        if (!(c.motion_speed > 0.0))
            r.fail("motion.speed", "must be > 0");
        c.motion_horizon = r.number("motion.horizon", 0.0);
        if (r.has("motion.horizon") && c.motion_horizon < c.sim.final_time)
            r.fail("motion.horizon", "must be >= sim.T");
        c.density_kind = r.choice("density.kind", "constant", {"constant", "affine"});
        c.h0 = r.number("density.h0", c.h0);
        c.slope = c.density_kind == "affine" ? r.number("density.slope", 0.0) : 0.0;
        if (c.density_kind == "constant" && r.has("density.slope"))
            r.fail("density.slope", "only valid with density.kind = affine");
        if (!(c.h0 + c.slope * c.a > 0.0) || !(c.h0 + c.slope * c.b > 0.0))
            r.fail("density.h0", "density must be positive on [domain.a, domain.b]");
        c.center = r.number("initial.center", c.center);
    } else {
        c.lx = r.number("domain.lx", c.lx);
        c.ly = r.number("domain.ly", c.ly);
        if (!(c.lx > 0.0) || !(c.ly > 0.0))
            r.fail("domain.lx", "side lengths must be > 0");
        c.nx = static_cast<int>(r.integer("mesh.nx", c.nx));
        c.ny = static_cast<int>(r.integer("mesh.ny", c.ny));
        if (c.nx < 1 || c.ny < 1)
            r.fail("mesh.nx", "mesh.nx and mesh.ny must be >= 1");
        c.velocity_kind = r.choice("velocity.kind", "constant", {"constant", "stretch", "rotation"});
        c.c1 = r.number("velocity.c1", c.c1);
        c.c2 = r.number("velocity.c2", c.c2);
        c.alpha = r.number("velocity.alpha", c.alpha);
        c.omega = r.number("velocity.omega", c.omega);
        c.center1 = r.number("initial.center1", c.center1);
        c.center2 = r.number("initial.center2", c.center2);
        if (c.sim.scheme != Scheme::Midpoint)
            r.fail("sim.scheme", "transport-2d supports only midpoint");
    }
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    return parse_run_config(in, path);
}

} // namespace tfem
