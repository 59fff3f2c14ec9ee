#include "mvcg/config.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvcg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config key '" + key + "': " + what);
}

} // namespace

KeyValues KeyValues::parse_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        if (!section.empty())
            key = section + "." + key;
        kv.values_[key] = value;
    }
    return kv;
}

KeyValues KeyValues::parse_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object())
        throw std::invalid_argument("config JSON must be an object");
    KeyValues kv;
    const auto to_string = [](const nlohmann::json& v) -> std::string {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_array()) {
            std::string out;
            for (const auto& item : v) {
                if (!out.empty())
                    out += ",";
                out += item.dump();
            }
            return out;
        }
        return v.dump();
    };
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            for (const auto& [inner, v2] : value.items())
                kv.values_[key + "." + inner] = to_string(v2);
        } else {
            kv.values_[key] = to_string(value);
        }
    }
    return kv;
}

KeyValues KeyValues::parse_auto(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        return c == '{' ? parse_json(text) : parse_text(text);
    }
    return KeyValues{};
}

KeyValues KeyValues::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_auto(buf.str());
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size())
            bad_key(key, "expected an integer, got '" + it->second + "'");
        return v;
    } catch (const std::invalid_argument&) {
        bad_key(key, "expected an integer, got '" + it->second + "'");
    } catch (const std::out_of_range&) {
        bad_key(key, "integer out of range: '" + it->second + "'");
    }
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size())
            bad_key(key, "expected a number, got '" + it->second + "'");
        return v;
    } catch (const std::invalid_argument&) {
        bad_key(key, "expected a number, got '" + it->second + "'");
    } catch (const std::out_of_range&) {
        bad_key(key, "number out of range: '" + it->second + "'");
    }
}

std::uint64_t KeyValues::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size())
            bad_key(key, "expected an unsigned integer, got '" + it->second + "'");
        return v;
    } catch (const std::invalid_argument&) {
        bad_key(key, "expected an unsigned integer, got '" + it->second + "'");
    } catch (const std::out_of_range&) {
        bad_key(key, "unsigned integer out of range: '" + it->second + "'");
    }
}

std::vector<int> KeyValues::get_int_list(const std::string& key,
                                         std::vector<int> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    std::vector<int> out;
    std::istringstream in(it->second);
    std::string token;
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty())
            continue;
        try {
            out.push_back(std::stoi(token));
        } catch (...) {
            bad_key(key, "expected a comma-separated integer list, got '" + it->second + "'");
        }
    }
    if (out.empty())
        bad_key(key, "expected a nonempty integer list");
    return out;
}

void KeyValues::check_known(const std::string& prefix,
                            const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (key.rfind(prefix, 0) != 0)
            continue;
        const std::string rest = key.substr(prefix.size());
        if (rest.find('.') != std::string::npos)
            continue; // deeper section, not ours
        if (!allowed.count(rest))
            bad_key(key, "unknown key");
    }
}

InstanceSpec instance_spec_from(const KeyValues& kv, const std::string& prefix) {
    kv.check_known(prefix, {"kind", "states", "actions", "horizon", "agents", "r_max",
                            "seed", "noise", "variant", "delta"});
    InstanceSpec spec;
    spec.kind = kv.get_string(prefix + "kind", spec.kind);
    if (spec.kind != "onehot" && spec.kind != "hard")
        bad_key(prefix + "kind", "expected onehot|hard, got '" + spec.kind + "'");
    spec.states = kv.get_int(prefix + "states", spec.states);
    spec.actions = kv.get_int(prefix + "actions", spec.actions);
    spec.horizon = kv.get_int(prefix + "horizon", spec.horizon);
    spec.agents = kv.get_int(prefix + "agents", spec.agents);
    spec.r_max = kv.get_double(prefix + "r_max", spec.r_max);
    spec.seed = kv.get_u64(prefix + "seed", spec.seed);
    spec.noise = kv.get_string(prefix + "noise", spec.noise);
    if (spec.noise != "bernoulli" && spec.noise != "deterministic")
        bad_key(prefix + "noise", "expected bernoulli|deterministic, got '" + spec.noise + "'");
    spec.variant = kv.get_string(prefix + "variant", spec.variant);
    if (spec.variant != "theta0" && spec.variant != "theta1")
        bad_key(prefix + "variant", "expected theta0|theta1, got '" + spec.variant + "'");
    spec.delta = kv.get_double(prefix + "delta", spec.delta);
    return spec;
}

ReportingStrategy strategy_from_string(const std::string& text, const std::string& key) {
    const auto transform_of = [&](const std::string& t) -> ReportTransform {
        ReportTransform tr;
        if (t == "zero")
            tr.kind = ReportTransform::Kind::Zero;
        else if (t == "one")
            tr.kind = ReportTransform::Kind::One;
        else if (t == "complement")
            tr.kind = ReportTransform::Kind::Complement;
        else if (t.rfind("scale:", 0) == 0) {
            tr.kind = ReportTransform::Kind::Scale;
            try {
                tr.scale = std::stod(t.substr(6));
            } catch (...) {
                bad_key(key, "bad scale factor in '" + t + "'");
            }
        } else
            bad_key(key, "unknown transform '" + t + "'");
        return tr;
    };

    if (text == "truthful")
        return ReportingStrategy::truthful();
    if (text.rfind("switch:", 0) == 0) {
        const std::string rest = text.substr(7);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
            bad_key(key, "expected switch:<round>:<transform>");
        int round = 0;
        try {
            round = std::stoi(rest.substr(0, colon));
        } catch (...) {
            bad_key(key, "bad switch round in '" + text + "'");
        }
        return ReportingStrategy::switching(transform_of(rest.substr(colon + 1)), round);
    }
    return ReportingStrategy::untruthful(transform_of(text));
}

ExperimentConfig experiment_config_from(const KeyValues& kv) {
    kv.check_known("mechanism.", {"T", "K", "zeta1", "zeta2", "zeta3", "delta", "lambda",
                                  "beta_scale", "beta_form", "eval_threads"});
    kv.check_known("experiment.", {"T_grid", "seeds", "base_seed", "threads", "keep_series"});

    ExperimentConfig cfg;
    cfg.instance = instance_spec_from(kv);

    cfg.mech.K = kv.get_int("mechanism.K", 0);
    const std::string z1 = kv.get_string("mechanism.zeta1", "etc");
    if (z1 == "etc")
        cfg.mech.zeta1 = DataPolicy::Etc;
    else if (z1 == "ewc")
        cfg.mech.zeta1 = DataPolicy::Ewc;
    else
        bad_key("mechanism.zeta1", "expected etc|ewc, got '" + z1 + "'");
    const auto mode_of = [](const std::string& key, const std::string& v) {
        if (v == "opt")
            return ValueMode::Optimistic;
        if (v == "pes")
            return ValueMode::Pessimistic;
        bad_key(key, "expected opt|pes, got '" + v + "'");
    };
    cfg.mech.zeta2 = mode_of("mechanism.zeta2", kv.get_string("mechanism.zeta2", "opt"));
    cfg.mech.zeta3 = mode_of("mechanism.zeta3", kv.get_string("mechanism.zeta3", "pes"));
    cfg.mech.delta = kv.get_double("mechanism.delta", cfg.mech.delta);
    cfg.mech.lambda = kv.get_double("mechanism.lambda", cfg.mech.lambda);
    cfg.mech.c_beta = kv.get_double("mechanism.beta_scale", cfg.mech.c_beta);
    const std::string form = kv.get_string("mechanism.beta_form", "practical");
    if (form == "practical")
        cfg.mech.beta_form = BetaForm::Practical;
    else if (form == "theory")
        cfg.mech.beta_form = BetaForm::TheoryAgents;
    else if (form == "theory_total")
        cfg.mech.beta_form = BetaForm::TheoryTotal;
    else
        bad_key("mechanism.beta_form", "expected practical|theory|theory_total");
    cfg.mech.eval_threads = kv.get_int("mechanism.eval_threads", 1);

    std::vector<int> default_grid;
    if (kv.has("mechanism.T"))
        default_grid = {kv.get_int("mechanism.T", 0)};
    cfg.T_grid = kv.get_int_list("experiment.T_grid", default_grid);
    if (cfg.T_grid.empty())
        bad_key("experiment.T_grid", "no T values given (set mechanism.T or experiment.T_grid)");
    cfg.seeds = kv.get_int("experiment.seeds", 1);
    cfg.base_seed = kv.get_u64("experiment.base_seed", 1);
    cfg.threads = kv.get_int("experiment.threads", 1);
    cfg.keep_series = kv.get_int("experiment.keep_series", 0) != 0;

    // Strategies: strategies.agent<i> entries, with strategies.default as the
    // fill-in for unnamed agents.
    const std::string fallback = kv.get_string("strategies.default", "truthful");
    for (int i = 1; i <= cfg.instance.agents; ++i) {
        const std::string key = "strategies.agent" + std::to_string(i);
        cfg.strategies.push_back(strategy_from_string(kv.get_string(key, fallback), key));
    }
    cfg.validate();
    return cfg;
}

} // namespace mvcg
