#include "mcpfl/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace mcpfl {
namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Key {
    std::string name;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

std::vector<Key> key_table() {
    std::vector<Key> keys;
    auto add_double = [&](const std::string& name, auto member) {
        keys.push_back({name,
                        [name, member](ExperimentConfig& c, const std::string& v) {
                            member(c) = parse_double(name, v);
                        },
                        [member](const ExperimentConfig& c) {
                            return fmt_double(member(const_cast<ExperimentConfig&>(c)));
                        }});
    };
    auto add_size = [&](const std::string& name, auto member) {
        keys.push_back({name,
                        [name, member](ExperimentConfig& c, const std::string& v) {
                            member(c) = static_cast<std::size_t>(parse_u64(name, v));
                        },
                        [member](const ExperimentConfig& c) {
                            return std::to_string(member(const_cast<ExperimentConfig&>(c)));
                        }});
    };
    auto add_int = [&](const std::string& name, auto member) {
        keys.push_back({name,
                        [name, member](ExperimentConfig& c, const std::string& v) {
                            member(c) = static_cast<int>(parse_u64(name, v));
                        },
                        [member](const ExperimentConfig& c) {
                            return std::to_string(member(const_cast<ExperimentConfig&>(c)));
                        }});
    };
    auto add_bool = [&](const std::string& name, auto member) {
        keys.push_back({name,
                        [name, member](ExperimentConfig& c, const std::string& v) {
                            member(c) = parse_bool(name, v);
                        },
                        [member](const ExperimentConfig& c) {
                            return member(const_cast<ExperimentConfig&>(c)) ? "true" : "false";
                        }});
    };

    add_size("data.n_total", [](ExperimentConfig& c) -> std::size_t& { return c.data.n_total; });
    add_size("data.dim_im", [](ExperimentConfig& c) -> std::size_t& { return c.data.dims[0]; });
    add_size("data.dim_emr", [](ExperimentConfig& c) -> std::size_t& { return c.data.dims[1]; });
    add_size("data.dim_iot", [](ExperimentConfig& c) -> std::size_t& { return c.data.dims[2]; });
    add_double("data.interaction_weight",
               [](ExperimentConfig& c) -> double& { return c.data.interaction_weight; });
    add_double("data.noise_std", [](ExperimentConfig& c) -> double& { return c.data.noise_std; });
    add_double("data.missing_rate_im",
               [](ExperimentConfig& c) -> double& { return c.data.missing_rate[0]; });
    add_double("data.missing_rate_emr",
               [](ExperimentConfig& c) -> double& { return c.data.missing_rate[1]; });
    add_double("data.missing_rate_iot",
               [](ExperimentConfig& c) -> double& { return c.data.missing_rate[2]; });
    keys.push_back({"data.seed",
                    [](ExperimentConfig& c, const std::string& v) {
                        c.data.seed = parse_u64("data.seed", v);
                    },
                    [](const ExperimentConfig& c) { return std::to_string(c.data.seed); }});

    add_size("model.latent_im",
             [](ExperimentConfig& c) -> std::size_t& { return c.model.latent_dims[0]; });
    add_size("model.latent_emr",
             [](ExperimentConfig& c) -> std::size_t& { return c.model.latent_dims[1]; });
    add_size("model.latent_iot",
             [](ExperimentConfig& c) -> std::size_t& { return c.model.latent_dims[2]; });
    add_double("model.lambda", [](ExperimentConfig& c) -> double& { return c.model.lambda; });
    add_double("model.learning_rate",
               [](ExperimentConfig& c) -> double& { return c.model.learning_rate; });
    add_size("model.local_epochs",
             [](ExperimentConfig& c) -> std::size_t& { return c.model.local_epochs; });
    add_size("model.batch_size",
             [](ExperimentConfig& c) -> std::size_t& { return c.model.batch_size; });

    add_double("dp.clip_norm", [](ExperimentConfig& c) -> double& { return c.dp.clip_norm; });
    add_double("dp.sigma", [](ExperimentConfig& c) -> double& { return c.dp.sigma; });
    add_double("dp.delta", [](ExperimentConfig& c) -> double& { return c.dp.dp_delta; });
    keys.push_back({"dp.epsilon_max",
                    [](ExperimentConfig& c, const std::string& v) {
                        c.dp.epsilon_max = (v == "unbounded")
                                               ? std::numeric_limits<double>::infinity()
                                               : parse_double("dp.epsilon_max", v);
                    },
                    [](const ExperimentConfig& c) {
                        return std::isinf(c.dp.epsilon_max) ? "unbounded"
                                                            : fmt_double(c.dp.epsilon_max);
                    }});

    add_double("sched.tau", [](ExperimentConfig& c) -> double& { return c.sched.tau; });
    add_double("sched.gamma", [](ExperimentConfig& c) -> double& { return c.sched.gamma; });
    add_int("sched.eta", [](ExperimentConfig& c) -> int& { return c.sched.eta; });
    add_double("sched.kappa",
               [](ExperimentConfig& c) -> double& { return c.sched.dropout_kappa; });
    add_size("sched.random_k",
             [](ExperimentConfig& c) -> std::size_t& { return c.sched.random_k; });
    add_bool("sched.staleness_readmit",
             [](ExperimentConfig& c) -> bool& { return c.sched.staleness_readmit; });

    add_double("net.min_bandwidth_mbps",
               [](ExperimentConfig& c) -> double& { return c.net.min_bandwidth_mbps; });
    add_double("net.max_bandwidth_mbps",
               [](ExperimentConfig& c) -> double& { return c.net.max_bandwidth_mbps; });
    add_double("net.min_latency_ms",
               [](ExperimentConfig& c) -> double& { return c.net.min_latency_ms; });
    add_double("net.max_latency_ms",
               [](ExperimentConfig& c) -> double& { return c.net.max_latency_ms; });
    add_double("net.round_timeout_ms",
               [](ExperimentConfig& c) -> double& { return c.net.round_timeout_ms; });
    add_double("net.link_jitter", [](ExperimentConfig& c) -> double& { return c.net.link_jitter; });

    add_double("fusion.schema_mismatch_rate",
               [](ExperimentConfig& c) -> double& { return c.schema_mismatch_rate; });

    add_double("energy.min", [](ExperimentConfig& c) -> double& { return c.energy_min; });
    add_double("energy.max", [](ExperimentConfig& c) -> double& { return c.energy_max; });
    add_double("energy.recharge_rate",
               [](ExperimentConfig& c) -> double& { return c.recharge_rate; });

    add_size("run.n_clients", [](ExperimentConfig& c) -> std::size_t& { return c.n_clients; });
    add_double("run.dirichlet_beta",
               [](ExperimentConfig& c) -> double& { return c.dirichlet_beta; });
    add_double("run.fedprox_mu", [](ExperimentConfig& c) -> double& { return c.fedprox_mu; });
    add_size("run.rounds", [](ExperimentConfig& c) -> std::size_t& { return c.rounds; });
    keys.push_back({"run.methods",
                    [](ExperimentConfig& c, const std::string& v) { c.methods = split_list(v); },
                    [](const ExperimentConfig& c) {
                        std::string s;
                        for (const auto& m : c.methods) {
                            if (!s.empty()) s += ',';
                            s += m;
                        }
                        return s;
                    }});
    keys.push_back({"run.seeds",
                    [](ExperimentConfig& c, const std::string& v) {
                        c.seeds.clear();
                        for (const auto& s : split_list(v)) c.seeds.push_back(parse_u64("run.seeds", s));
                    },
                    [](const ExperimentConfig& c) {
                        std::string s;
                        for (auto x : c.seeds) {
                            if (!s.empty()) s += ',';
                            s += std::to_string(x);
                        }
                        return s;
                    }});
    keys.push_back({"run.out_dir",
                    [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
                    [](const ExperimentConfig& c) { return c.out_dir; }});
    add_bool("run.transcript", [](ExperimentConfig& c) -> bool& { return c.transcript; });
    return keys;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void NetworkModel::validate() const {
    if (min_bandwidth_mbps <= 0.0 || max_bandwidth_mbps < min_bandwidth_mbps)
        throw ConfigError("net bandwidth range must be positive and ordered");
    if (min_latency_ms <= 0.0 || max_latency_ms < min_latency_ms)
        throw ConfigError("net latency range must be positive and ordered");
    if (round_timeout_ms <= 0.0) throw ConfigError("net.round_timeout_ms must be > 0");
    if (link_jitter < 0.0) throw ConfigError("net.link_jitter must be >= 0");
}

void ExperimentConfig::validate() const {
    data.validate();
    model.validate();
    dp.validate();
    sched.validate();
    net.validate();
    if (n_clients < 1) throw ConfigError("run.n_clients must be >= 1");
    if (dirichlet_beta <= 0.0) throw ConfigError("run.dirichlet_beta must be > 0");
    if (schema_mismatch_rate < 0.0 || schema_mismatch_rate > 1.0)
        throw ConfigError("fusion.schema_mismatch_rate must be in [0,1]");
    if (fedprox_mu < 0.0) throw ConfigError("run.fedprox_mu must be >= 0");
    if (energy_min < 0.0 || energy_max > 1.0 || energy_min > energy_max)
        throw ConfigError("energy.min/max must satisfy 0 <= min <= max <= 1");
    if (recharge_rate < 0.0) throw ConfigError("energy.recharge_rate must be >= 0");
    if (methods.empty()) throw ConfigError("run.methods must not be empty");
    if (seeds.empty()) throw ConfigError("run.seeds must not be empty");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    auto keys = key_table();

    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool found = false;
        for (auto& k : keys) {
            if (k.name == key) {
                k.set(cfg, value);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("unknown key: " + key);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& k : key_table()) out += k.name + " = " + k.get(cfg) + "\n";
    return out;
}

}  // namespace mcpfl
