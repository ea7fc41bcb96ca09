#include "repsim/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "repsim/behaviors.hpp"

namespace repsim::sim {

double SimConfig::effective_delay_extra() const {
    if (delay_extra > 0.0) return delay_extra;
    return 2.0 * ((queue_size - 1) * tau + 3.0 * tau_prime);
}

double SimConfig::effective_flood_rate() const {
    if (flood_rate > 0.0) return flood_rate;
    return 2.0 * eta;
}

proto::ProtocolParams SimConfig::protocol() const {
    return proto::ProtocolParams{tau, tau_prime, eta, blacklist_rule, delay_rule};
}

void SimConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw Error("config field " + field + ": " + why);
    };
    if (node_count <= 3) fail("node_count", "must exceed 3");
    if (node_count >= 5000) fail("node_count", "must stay below 5000 (identifier width)");
    if (malicious_count < 0 || malicious_count > node_count) {
        fail("malicious_count", "must lie in [0, node_count]");
    }
    if (area_width <= 0.0 || area_width > 2000.0) fail("area_width", "must lie in (0, 2000]");
    if (area_height <= 0.0 || area_height > 1000.0) fail("area_height", "must lie in (0, 1000]");
    if (max_radio <= 0.0 || max_radio > 250.0) fail("max_radio", "must lie in (0, 250]");
    if (radio_min <= 0.0 || radio_min > max_radio) fail("radio_min", "must lie in (0, max_radio]");
    if (v_max < 0.0 || v_max > 50.0) fail("v_max", "must lie in [0, 50]");
    if (pause_max < 0.0) fail("pause_max", "must be nonnegative");
    if (hello_min < 1 || hello_max < hello_min || hello_max >= 30) {
        fail("hello_min/hello_max", "need 1 <= hello_min <= hello_max < 30");
    }
    if (tau_prime <= 0.0) fail("tau_prime", "must be positive");
    if (eta < 1) fail("eta", "must be positive");
    if (packet_size < 1) fail("packet_size", "must be positive");
    if (bandwidth <= 0.0) fail("bandwidth", "must be positive");
    if (sim_time <= 0.0) fail("sim_time", "must be positive");
    if (runs < 1) fail("runs", "must be positive");
    if (!(alpha > 1.0)) fail("alpha", "must exceed 1");
    if (suspicion_limit < 1) fail("suspicion_limit", "must be positive");
    if (tau <= 0.0) fail("tau", "must be positive");
    if (queue_size < 2) fail("queue_size", "must be at least 2");
    if (hop_limit < 2) fail("hop_limit", "must be at least 2");
    if (sigma <= 0.0) fail("sigma", "must be positive");
    if (traffic_rate <= 0.0) fail("traffic_rate", "must be positive");
    if (supportive_fraction < 0.0 || supportive_fraction > 1.0) {
        fail("supportive_fraction", "must lie in [0, 1]");
    }
    if (malicious_strategy != "mixed") {
        strategy::Strategy s = strategy::parse_strategy(malicious_strategy);
        if (!strategy::is_malicious(s)) fail("malicious_strategy", "must name a malicious strategy");
    }
    if (delay_extra < 0.0) fail("delay_extra", "must be nonnegative");
    if (flood_rate < 0.0) fail("flood_rate", "must be nonnegative");
    if (collusion_interval <= 0.0) fail("collusion_interval", "must be positive");
    if (mobility_dt <= 0.0) fail("mobility_dt", "must be positive");
    if (paper_profile) {
        if (node_count < 500) fail("node_count", "full-scale profile needs at least 500 nodes");
        if (malicious_count > 500) fail("malicious_count", "full-scale profile caps attackers at 500");
        if (area_width != 2000.0 || area_height != 1000.0) {
            fail("area_width/area_height", "full-scale profile fixes the arena at 2000x1000");
        }
        if (max_radio != 250.0) fail("max_radio", "full-scale profile fixes the radio cap at 250");
        if (v_max != 50.0) fail("v_max", "full-scale profile fixes the speed cap at 50");
        if (hello_min != 6 || hello_max != 10) {
            fail("hello_min/hello_max", "full-scale profile fixes beacon intervals at [6, 10]");
        }
        if (tau_prime != 10.0) fail("tau_prime", "full-scale profile fixes tau_prime at 10");
        if (eta != 5) fail("eta", "full-scale profile fixes eta at 5");
        if (packet_size != 512) fail("packet_size", "full-scale profile fixes packets at 512 bytes");
        if (bandwidth != 1.0e6) fail("bandwidth", "full-scale profile fixes bandwidth at 1 Mb/s");
        if (sim_time != 3600.0) fail("sim_time", "full-scale profile fixes the horizon at 3600 s");
        if (runs != 6) fail("runs", "full-scale profile fixes runs at 6");
    }
}

namespace {

/** Applied when paper_profile=true appears, before any explicit overrides land on top. */
void apply_paper_profile(SimConfig& c) {
    c.node_count = 500;
    c.area_width = 2000.0;
    c.area_height = 1000.0;
    c.max_radio = 250.0;
    c.radio_min = 150.0;
    c.v_max = 50.0;
    c.hello_min = 6;
    c.hello_max = 10;
    c.tau_prime = 10.0;
    c.eta = 5;
    c.packet_size = 512;
    c.bandwidth = 1.0e6;
    c.sim_time = 3600.0;
    c.runs = 6;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw Error("");
        return d;
    } catch (...) {
        throw Error("config field " + key + ": not a number: '" + v + "'");
    }
}

int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const int64_t i = std::stoll(v, &used);
        if (used != v.size()) throw Error("");
        return i;
    } catch (...) {
        throw Error("config field " + key + ": not an integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error("config field " + key + ": not a boolean: '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

SimConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw Error("config line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, val).second) {
            throw Error("config field " + key + ": duplicated");
        }
    }

    SimConfig c;
    if (auto it = kv.find("paper_profile"); it != kv.end() && parse_bool("paper_profile", it->second)) {
        c.paper_profile = true;
        apply_paper_profile(c);
    }
    kv.erase("paper_profile");

    for (const auto& [key, val] : kv) {
        if (key == "node_count") c.node_count = static_cast<int>(parse_int(key, val));
        else if (key == "malicious_count") c.malicious_count = static_cast<int>(parse_int(key, val));
        else if (key == "area_width") c.area_width = parse_double(key, val);
        else if (key == "area_height") c.area_height = parse_double(key, val);
        else if (key == "max_radio") c.max_radio = parse_double(key, val);
        else if (key == "radio_min") c.radio_min = parse_double(key, val);
        else if (key == "v_max") c.v_max = parse_double(key, val);
        else if (key == "pause_max") c.pause_max = parse_double(key, val);
        else if (key == "hello_min") c.hello_min = static_cast<int>(parse_int(key, val));
        else if (key == "hello_max") c.hello_max = static_cast<int>(parse_int(key, val));
        else if (key == "tau_prime") c.tau_prime = parse_double(key, val);
        else if (key == "eta") c.eta = static_cast<int>(parse_int(key, val));
        else if (key == "packet_size") c.packet_size = static_cast<int>(parse_int(key, val));
        else if (key == "bandwidth") c.bandwidth = parse_double(key, val);
        else if (key == "sim_time") c.sim_time = parse_double(key, val);
        else if (key == "runs") c.runs = static_cast<int>(parse_int(key, val));
        else if (key == "seed") c.seed = static_cast<uint64_t>(parse_int(key, val));
        else if (key == "alpha") c.alpha = parse_double(key, val);
        else if (key == "suspicion_limit") c.suspicion_limit = static_cast<int>(parse_int(key, val));
        else if (key == "tau") c.tau = parse_double(key, val);
        else if (key == "queue_size") c.queue_size = static_cast<int>(parse_int(key, val));
        else if (key == "hop_limit") c.hop_limit = static_cast<int>(parse_int(key, val));
        else if (key == "sigma") c.sigma = parse_double(key, val);
        else if (key == "blacklist_rule") {
            if (val == "pseudocode") c.blacklist_rule = proto::BlacklistRule::Pseudocode;
            else if (val == "prose") c.blacklist_rule = proto::BlacklistRule::Prose;
            else throw Error("config field blacklist_rule: expected pseudocode or prose");
        } else if (key == "delay_rule") {
            if (val == "prose") c.delay_rule = proto::DelayRule::Prose;
            else if (val == "pseudocode") c.delay_rule = proto::DelayRule::Pseudocode;
            else throw Error("config field delay_rule: expected prose or pseudocode");
        } else if (key == "penalty_mode") {
            if (val == "literal") c.penalty_mode = fuzzy::PenaltyMode::Literal;
            else if (val == "magnitude") c.penalty_mode = fuzzy::PenaltyMode::Magnitude;
            else throw Error("config field penalty_mode: expected literal or magnitude");
        }
        else if (key == "traffic_rate") c.traffic_rate = parse_double(key, val);
        else if (key == "supportive_fraction") c.supportive_fraction = parse_double(key, val);
        else if (key == "malicious_strategy") c.malicious_strategy = val;
        else if (key == "delay_extra") c.delay_extra = parse_double(key, val);
        else if (key == "flood_rate") c.flood_rate = parse_double(key, val);
        else if (key == "collusion_interval") c.collusion_interval = parse_double(key, val);
        else if (key == "mobility_dt") c.mobility_dt = parse_double(key, val);
        else throw Error("config: unknown key '" + key + "'");
    }

    c.validate();
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace repsim::sim
