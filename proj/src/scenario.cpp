#include "diana/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "diana/errors.hpp"
#include "diana/network.hpp"

namespace diana {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct Cursor {
    std::string file;
    int line = 0;

    std::string where() const { return file + ":" + std::to_string(line); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(where() + ": " + msg); }

    double num(const std::string& key, const std::string& value) const {
        char* end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size())
            fail("key '" + key + "': not a number: '" + value + "'");
        return v;
    }

    int integer(const std::string& key, const std::string& value) const {
        double v = num(key, value);
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) fail("key '" + key + "': not an integer: '" + value + "'");
        return i;
    }

    bool flag(const std::string& key, const std::string& value) const {
        if (value == "on" || value == "true" || value == "1") return true;
        if (value == "off" || value == "false" || value == "0") return false;
        fail("key '" + key + "': expected on/off: '" + value + "'");
    }
};

}  // namespace

const SiteSpec* Scenario::find_site(const std::string& id) const {
    for (const auto& s : sites) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

const UserSpec* Scenario::find_user(const std::string& id) const {
    for (const auto& u : users) {
        if (u.id == id) return &u;
    }
    return nullptr;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    Scenario sc = parse_scenario_text(buf.str(), path);
    sc.name = name;
    return sc;
}

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    Scenario sc;
    sc.name = name;
    Cursor cur{name, 0};

    enum class Section { None, Config, Site, Edge, User, Job, Group, Poisson };
    Section section = Section::None;
    size_t target = 0;  // index into the matching scenario vector

    auto warn_unknown = [&](const std::string& section_name, const std::string& key) {
        sc.warnings.push_back(cur.where() + ": unknown " + section_name + " key '" + key + "'");
    };

    std::istringstream lines(text);
    std::string raw;
    while (std::getline(lines, raw)) {
        ++cur.line;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') cur.fail("unterminated section header");
            auto tokens = split_ws(line.substr(1, line.size() - 2));
            if (tokens.empty()) cur.fail("empty section header");
            const std::string& kind = tokens[0];
            if (kind == "config" && tokens.size() == 1) {
                section = Section::Config;
            } else if (kind == "site" && tokens.size() == 2) {
                section = Section::Site;
                sc.sites.push_back({});
                sc.sites.back().id = tokens[1];
                target = sc.sites.size() - 1;
            } else if (kind == "edge" && tokens.size() == 3) {
                section = Section::Edge;
                NetworkEdge e;
                e.source = tokens[1];
                e.destination = tokens[2];
                sc.edges.push_back(e);
                target = sc.edges.size() - 1;
            } else if (kind == "user" && tokens.size() == 2) {
                section = Section::User;
                sc.users.push_back({tokens[1], 1.0});
                target = sc.users.size() - 1;
            } else if (kind == "job" && tokens.size() == 2) {
                section = Section::Job;
                sc.jobs.push_back({});
                sc.jobs.back().id = tokens[1];
                target = sc.jobs.size() - 1;
            } else if (kind == "group" && tokens.size() == 2) {
                section = Section::Group;
                sc.groups.push_back({});
                sc.groups.back().id = tokens[1];
                target = sc.groups.size() - 1;
            } else if (kind == "poisson" && tokens.size() == 2) {
                section = Section::Poisson;
                sc.poisson.push_back({});
                sc.poisson.back().name = tokens[1];
                target = sc.poisson.size() - 1;
            } else {
                cur.fail("bad section header '" + line + "'");
            }
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) cur.fail("expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) cur.fail("empty key");

        switch (section) {
            case Section::None:
                cur.fail("key '" + key + "' outside any section");
            case Section::Config: {
                ScenarioConfig& c = sc.config;
                if (key == "w5") c.weights.w5 = cur.num(key, value);
                else if (key == "w6") c.weights.w6 = cur.num(key, value);
                else if (key == "w7") c.weights.w7 = cur.num(key, value);
                else if (key == "subgroup_size") c.subgroup_size = cur.integer(key, value);
                else if (key == "thrs") c.thrs = cur.num(key, value);
                else if (key == "migration_boost") c.migration_boost = cur.num(key, value);
                else if (key == "aging") c.aging = cur.flag(key, value);
                else if (key == "aging_coefficient") c.aging_coefficient = cur.num(key, value);
                else if (key == "normalize_costs") c.normalize_costs = cur.flag(key, value);
                else if (key == "subgrid_min") c.subgrid_min = cur.integer(key, value);
                else if (key == "heartbeat_interval") c.heartbeat_interval = cur.num(key, value);
                else if (key == "missed_beats") c.missed_beats = cur.integer(key, value);
                else if (key == "heartbeats") c.heartbeats = cur.flag(key, value);
                else if (key == "data_ratio") c.data_ratio = cur.num(key, value);
                else if (key == "compute_ratio") c.compute_ratio = cur.num(key, value);
                else if (key == "window_length") c.window_length = cur.integer(key, value);
                else warn_unknown("config", key);
                break;
            }
            case Section::Site: {
                SiteSpec& s = sc.sites[target];
                if (key == "cpus") s.cpus = cur.integer(key, value);
                else if (key == "capability") s.capability = cur.num(key, value);
                else if (key == "load") s.load = cur.num(key, value);
                else if (key == "availability") s.availability = cur.num(key, value);
                else if (key == "datasets") {
                    for (const auto& d : split_ws(value)) s.datasets.insert(d);
                } else if (key.rfind("cap.", 0) == 0) {
                    s.user_caps[key.substr(4)] = cur.integer(key, value);
                } else warn_unknown("site", key);
                break;
            }
            case Section::Edge: {
                NetworkEdge& e = sc.edges[target];
                if (key == "bandwidth") e.bandwidth = cur.num(key, value);
                else if (key == "loss") e.loss_rate = cur.num(key, value);
                else warn_unknown("edge", key);
                break;
            }
            case Section::User: {
                if (key == "quota") sc.users[target].quota = cur.num(key, value);
                else warn_unknown("user", key);
                break;
            }
            case Section::Job: {
                JobSpec& j = sc.jobs[target];
                if (key == "owner") j.owner = value;
                else if (key == "origin") j.origin = value;
                else if (key == "submit") j.submit = cur.num(key, value);
                else if (key == "service") j.service = cur.num(key, value);
                else if (key == "procs") j.procs = cur.integer(key, value);
                else if (key == "input") j.input = cur.num(key, value);
                else if (key == "output") j.output = cur.num(key, value);
                else if (key == "exec") j.exec = cur.num(key, value);
                else if (key == "class") j.class_override = value;
                else warn_unknown("job", key);
                break;
            }
            case Section::Group: {
                GroupSpec& g = sc.groups[target];
                if (key == "owner") g.owner = value;
                else if (key == "origin") g.origin = value;
                else if (key == "submit") g.submit = cur.num(key, value);
                else if (key == "service") g.service = cur.num(key, value);
                else if (key == "size") g.size = cur.integer(key, value);
                else if (key == "procs") g.procs = cur.integer(key, value);
                else if (key == "division_factor") g.division_factor = cur.integer(key, value);
                else if (key == "input") g.input = cur.num(key, value);
                else if (key == "output") g.output = cur.num(key, value);
                else if (key == "exec") g.exec = cur.num(key, value);
                else warn_unknown("group", key);
                break;
            }
            case Section::Poisson: {
                PoissonSpec& p = sc.poisson[target];
                if (key == "owners") p.owners = split_ws(value);
                else if (key == "origin") p.origin = value;
                else if (key == "rate") p.rate = cur.num(key, value);
                else if (key == "count") p.count = cur.integer(key, value);
                else if (key == "start") p.start = cur.num(key, value);
                else if (key == "service") p.service = cur.num(key, value);
                else if (key == "procs") p.procs = cur.integer(key, value);
                else if (key == "input") p.input = cur.num(key, value);
                else if (key == "output") p.output = cur.num(key, value);
                else if (key == "exec") p.exec = cur.num(key, value);
                else warn_unknown("poisson", key);
                break;
            }
        }
    }
    sc.validate();
    return sc;
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

void check_range(const std::string& field, double v, double lo, double hi) {
    if (v < lo || v > hi)
        invalid(field + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
}

}  // namespace

void Scenario::validate() const {
    if (sites.empty()) invalid("scenario has no sites");
    std::set<std::string> site_ids;
    for (const auto& s : sites) {
        if (!site_ids.insert(s.id).second) invalid("duplicate site '" + s.id + "'");
        if (s.cpus < 1) invalid("site " + s.id + ": cpus must be >= 1");
        if (s.capability <= 0.0) invalid("site " + s.id + ": capability must be > 0");
        check_range("site " + s.id + ": load", s.load, 0.0, 1.0);
        check_range("site " + s.id + ": availability", s.availability, 0.0, 1.0);
    }
    std::set<std::string> user_ids;
    for (const auto& u : users) {
        if (!user_ids.insert(u.id).second) invalid("duplicate user '" + u.id + "'");
        if (u.quota <= 0.0) invalid("user " + u.id + ": quota must be > 0");
    }
    for (const auto& s : sites) {
        for (const auto& [user, cap] : s.user_caps) {
            if (!user_ids.count(user)) invalid("site " + s.id + ": cap for unknown user '" + user + "'");
            if (cap < 0) invalid("site " + s.id + ": cap." + user + " must be >= 0");
        }
    }

    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const auto& e : edges) {
        if (!site_ids.count(e.source)) invalid("edge from unknown site '" + e.source + "'");
        if (!site_ids.count(e.destination)) invalid("edge to unknown site '" + e.destination + "'");
        e.validate();
        if (!seen_edges.insert({e.source, e.destination}).second)
            invalid("duplicate edge " + e.source + " -> " + e.destination);
    }
    for (const auto& a : sites) {
        for (const auto& b : sites) {
            if (a.id == b.id) continue;
            if (!seen_edges.count({a.id, b.id}))
                invalid("network matrix misses edge " + a.id + " -> " + b.id);
        }
    }

    std::set<std::string> job_ids;
    auto check_job_fields = [&](const std::string& what, const std::string& owner,
                                const std::string& origin, double service, int procs, double input,
                                double output, double exec) {
        if (!user_ids.count(owner)) invalid(what + ": unknown owner '" + owner + "'");
        if (!site_ids.count(origin)) invalid(what + ": unknown origin site '" + origin + "'");
        if (service < 0.0) invalid(what + ": service must be >= 0");
        if (procs < 1) invalid(what + ": procs must be >= 1");
        if (input < 0.0 || output < 0.0 || exec < 0.0) invalid(what + ": data sizes must be >= 0");
    };
    for (const auto& j : jobs) {
        if (!job_ids.insert(j.id).second) invalid("duplicate job '" + j.id + "'");
        check_job_fields("job " + j.id, j.owner, j.origin, j.service, j.procs, j.input, j.output,
                         j.exec);
        if (j.submit < 0.0) invalid("job " + j.id + ": submit must be >= 0");
        if (!j.class_override.empty() && j.class_override != "compute" &&
            j.class_override != "data" && j.class_override != "both")
            invalid("job " + j.id + ": class must be compute/data/both");
    }
    std::set<std::string> group_ids;
    for (const auto& g : groups) {
        if (!group_ids.insert(g.id).second) invalid("duplicate group '" + g.id + "'");
        check_job_fields("group " + g.id, g.owner, g.origin, g.service, g.procs, g.input, g.output,
                         g.exec);
        if (g.submit < 0.0) invalid("group " + g.id + ": submit must be >= 0");
        if (g.size < 1) invalid("group " + g.id + ": size must be >= 1");
        if (g.division_factor < 0) invalid("group " + g.id + ": division_factor must be >= 0");
    }
    std::set<std::string> gen_ids;
    for (const auto& p : poisson) {
        if (!gen_ids.insert(p.name).second) invalid("duplicate poisson generator '" + p.name + "'");
        if (p.owners.empty()) invalid("poisson " + p.name + ": owners must not be empty");
        for (const auto& o : p.owners) {
            if (!user_ids.count(o)) invalid("poisson " + p.name + ": unknown owner '" + o + "'");
        }
        if (!site_ids.count(p.origin)) invalid("poisson " + p.name + ": unknown origin '" + p.origin + "'");
        if (p.rate <= 0.0) invalid("poisson " + p.name + ": rate must be > 0");
        if (p.count < 0) invalid("poisson " + p.name + ": count must be >= 0");
        if (p.start < 0.0) invalid("poisson " + p.name + ": start must be >= 0");
        check_job_fields("poisson " + p.name, p.owners.front(), p.origin, p.service, p.procs,
                         p.input, p.output, p.exec);
    }

    config.weights.validate();
    check_range("config thrs", config.thrs, 0.0, 1.0);
    if (config.subgroup_size < 1) invalid("config subgroup_size must be >= 1");
    if (config.migration_boost < 0.0) invalid("config migration_boost must be >= 0");
    if (config.aging_coefficient < 0.0) invalid("config aging_coefficient must be >= 0");
    if (config.subgrid_min < 0) invalid("config subgrid_min must be >= 0");
    if (config.heartbeat_interval <= 0.0) invalid("config heartbeat_interval must be > 0");
    if (config.missed_beats < 1) invalid("config missed_beats must be >= 1");
    if (config.data_ratio <= 0.0 || config.compute_ratio <= 0.0)
        invalid("config classifier ratios must be > 0");
    if (config.window_length < 2) invalid("config window_length must be >= 2");
}

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string render(const Scenario& sc) {
    std::ostringstream os;
    os << "[config]\n";
    const ScenarioConfig& c = sc.config;
    os << "w5 = " << g17(c.weights.w5) << "\nw6 = " << g17(c.weights.w6) << "\nw7 = "
       << g17(c.weights.w7) << "\n";
    os << "subgroup_size = " << c.subgroup_size << "\n";
    os << "thrs = " << g17(c.thrs) << "\n";
    os << "migration_boost = " << g17(c.migration_boost) << "\n";
    os << "aging = " << (c.aging ? "on" : "off") << "\n";
    os << "aging_coefficient = " << g17(c.aging_coefficient) << "\n";
    os << "normalize_costs = " << (c.normalize_costs ? "on" : "off") << "\n";
    os << "subgrid_min = " << c.subgrid_min << "\n";
    os << "heartbeat_interval = " << g17(c.heartbeat_interval) << "\n";
    os << "missed_beats = " << c.missed_beats << "\n";
    os << "heartbeats = " << (c.heartbeats ? "on" : "off") << "\n";
    os << "data_ratio = " << g17(c.data_ratio) << "\n";
    os << "compute_ratio = " << g17(c.compute_ratio) << "\n";
    os << "window_length = " << c.window_length << "\n";
    for (const auto& s : sc.sites) {
        os << "\n[site " << s.id << "]\n";
        os << "cpus = " << s.cpus << "\n";
        os << "capability = " << g17(s.capability) << "\n";
        os << "load = " << g17(s.load) << "\n";
        os << "availability = " << g17(s.availability) << "\n";
        if (!s.datasets.empty()) {
            os << "datasets =";
            for (const auto& d : s.datasets) os << " " << d;
            os << "\n";
        }
        for (const auto& [user, cap] : s.user_caps) os << "cap." << user << " = " << cap << "\n";
    }
    for (const auto& e : sc.edges) {
        os << "\n[edge " << e.source << " " << e.destination << "]\n";
        os << "bandwidth = " << g17(e.bandwidth) << "\n";
        os << "loss = " << g17(e.loss_rate) << "\n";
    }
    for (const auto& u : sc.users) {
        os << "\n[user " << u.id << "]\n";
        os << "quota = " << g17(u.quota) << "\n";
    }
    for (const auto& j : sc.jobs) {
        os << "\n[job " << j.id << "]\n";
        os << "owner = " << j.owner << "\norigin = " << j.origin << "\n";
        os << "submit = " << g17(j.submit) << "\nservice = " << g17(j.service) << "\n";
        os << "procs = " << j.procs << "\n";
        os << "input = " << g17(j.input) << "\noutput = " << g17(j.output) << "\nexec = "
           << g17(j.exec) << "\n";
        if (!j.class_override.empty()) os << "class = " << j.class_override << "\n";
    }
    for (const auto& g : sc.groups) {
        os << "\n[group " << g.id << "]\n";
        os << "owner = " << g.owner << "\norigin = " << g.origin << "\n";
        os << "submit = " << g17(g.submit) << "\nsize = " << g.size << "\n";
        os << "service = " << g17(g.service) << "\nprocs = " << g.procs << "\n";
        if (g.division_factor > 0) os << "division_factor = " << g.division_factor << "\n";
        os << "input = " << g17(g.input) << "\noutput = " << g17(g.output) << "\nexec = "
           << g17(g.exec) << "\n";
    }
    for (const auto& p : sc.poisson) {
        os << "\n[poisson " << p.name << "]\n";
        os << "owners =";
        for (const auto& o : p.owners) os << " " << o;
        os << "\norigin = " << p.origin << "\n";
        os << "rate = " << g17(p.rate) << "\ncount = " << p.count << "\nstart = " << g17(p.start)
           << "\n";
        os << "service = " << g17(p.service) << "\nprocs = " << p.procs << "\n";
        os << "input = " << g17(p.input) << "\noutput = " << g17(p.output) << "\nexec = "
           << g17(p.exec) << "\n";
    }
    return os.str();
}

}  // namespace diana
