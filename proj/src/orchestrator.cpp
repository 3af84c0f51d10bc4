#include "mcpfl/orchestrator.hpp"

#include <algorithm>
#include <cmath>

namespace mcpfl {
namespace {

std::string client_name(int id) { return "client:" + std::to_string(id); }

std::vector<Modality> all_modalities() { return {Modality::im, Modality::emr, Modality::iot}; }

}  // namespace

MethodConfig method_config(const std::string& name, double fedprox_mu) {
    MethodConfig m;
    m.name = name;
    if (name == "fedavg" || name == "fedavg_im" || name == "fedavg_emr" || name == "fedavg_iot") {
        Modality mod = Modality::im;
        if (name == "fedavg_emr") mod = Modality::emr;
        if (name == "fedavg_iot") mod = Modality::iot;
        m.modalities = {mod};
        m.policy = Policy::random_k;
        return m;
    }
    if (name == "fedprox") {
        m.modalities = {Modality::im};
        m.policy = Policy::random_k;
        m.fedprox_mu = fedprox_mu;
        return m;
    }
    if (name == "multimodal_fl") {
        m.modalities = all_modalities();
        m.policy = Policy::all;
        return m;
    }
    if (name == "mcp_fusion" || name == "mcp_no_negotiation" || name == "mcp_no_secagg" ||
        name == "mcp_no_dp" || name == "mcp_no_sched" || name == "naive_dp") {
        m.dp_no_clip = name == "naive_dp";
        m.modalities = all_modalities();
        m.use_schema_negotiation = name != "mcp_no_negotiation";
        m.use_secagg = name != "mcp_no_secagg";
        m.use_dp = name != "mcp_no_dp";
        m.use_energy_scheduler = name != "mcp_no_sched";
        m.policy = m.use_energy_scheduler ? Policy::energy_aware : Policy::all;
        return m;
    }
    throw ConfigError("unknown method: " + name);
}

Simulation::Simulation(const ExperimentConfig& cfg, const MethodConfig& method,
                       std::uint64_t run_seed, const SplitDataset* shared_data)
    : cfg_(cfg), method_(method), run_seed_(run_seed) {
    cfg_.validate();

    if (shared_data) {
        test_ = &shared_data->test;
        client_data_ = partition(shared_data->train, cfg_.n_clients, cfg_.dirichlet_beta,
                                 cfg_.data.seed);
    } else {
        owned_data_ = generate(cfg_.data);
        test_ = &owned_data_.test;
        client_data_ =
            partition(owned_data_.train, cfg_.n_clients, cfg_.dirichlet_beta, cfg_.data.seed);
    }

    negotiate_population();
    init_profiles();

    layout_ = make_layout(server_plan_);
    auto is = stream("init");
    theta_ = init_model(server_plan_, is);
    budgets_.assign(cfg_.n_clients, BudgetState{});
}

RandomStream Simulation::stream(const std::string& tag) const {
    return RandomStream(run_seed_, tag);
}

std::size_t Simulation::admitted_count() const {
    std::size_t n = 0;
    for (const auto& p : client_plans_)
        if (p) ++n;
    return n;
}

void Simulation::negotiate_population() {
    std::vector<SchemaDescriptor> required;
    std::string offer_payload = "schemas=";
    for (auto mod : method_.modalities) {
        int mi = static_cast<int>(mod);
        required.push_back({mod, 1, cfg_.data.dims[mi], cfg_.model.latent_dims[mi]});
        offer_payload += std::string(modality_name(mod)) + ":v1;";
    }
    transcript_.record({MsgType::schema_offer, 0, "server", offer_payload});

    // the all-supported server plan drives evaluation and the model layout
    CapabilitySet server_caps{-1, required};
    server_plan_ = negotiate(required, server_caps);

    client_plans_.resize(cfg_.n_clients);
    for (std::size_t k = 0; k < cfg_.n_clients; ++k) {
        auto ms = stream("schema:" + std::to_string(k));
        CapabilitySet caps;
        caps.client_id = static_cast<int>(k);
        std::string adv = "caps=";
        for (auto d : required) {
            if (ms.next_double() < cfg_.schema_mismatch_rate) d.schema_version = 2;
            adv += std::string(modality_name(d.modality)) + ":v" +
                   std::to_string(d.schema_version) + ";";
            caps.supported.push_back(d);
        }
        transcript_.record({MsgType::capability_advertise, 0, client_name(int(k)), adv});
        try {
            client_plans_[k] = negotiate(required, caps, !method_.use_schema_negotiation);
            transcript_.record({MsgType::schema_ack, 0, "server", "to=" + std::to_string(k)});
        } catch (const NegotiationRejected&) {
            client_plans_[k] = std::nullopt;
            ++negotiation_rejects_;
            transcript_.record(
                {MsgType::negotiation_reject, 0, "server", "to=" + std::to_string(k)});
        }
    }
}

void Simulation::init_profiles() {
    auto es = stream("energy");
    auto ns = stream("net");
    for (std::size_t k = 0; k < cfg_.n_clients; ++k) {
        ClientProfile p;
        p.id = static_cast<int>(k);
        p.energy = cfg_.energy_min + (cfg_.energy_max - cfg_.energy_min) * es.next_double();
        p.recharge_rate = (k % 2 == 0) ? cfg_.recharge_rate : 0.0;
        double bw = cfg_.net.min_bandwidth_mbps +
                    (cfg_.net.max_bandwidth_mbps - cfg_.net.min_bandwidth_mbps) * ns.next_double();
        double lat = cfg_.net.min_latency_ms +
                     (cfg_.net.max_latency_ms - cfg_.net.min_latency_ms) * ns.next_double();
        bandwidth_mbps_.push_back(bw);
        latency_ms_.push_back(lat);
        base_link_.push_back(std::clamp(bw / cfg_.net.max_bandwidth_mbps, 0.0, 1.0));
        p.link = base_link_.back();
        profiles_.push_back(p);
    }
}

RoundStats Simulation::evaluate_current() const {
    RoundStats s;
    s.eval = evaluate(theta_, *test_, server_plan_);
    return s;
}

RoundStats Simulation::run_round() {
    const int r = ++round_;
    const std::string rs = std::to_string(r);
    const std::size_t msg_mark = transcript_.messages().size();

    auto js = stream("link:" + rs);
    for (std::size_t k = 0; k < profiles_.size(); ++k)
        profiles_[k].link =
            std::clamp(base_link_[k] + cfg_.net.link_jitter * js.next_gaussian(), 0.0, 1.0);

    SchedulerConfig scfg = cfg_.sched;
    scfg.policy = method_.policy;

    std::vector<ClientProfile> pool;
    for (const auto& p : profiles_)
        if (client_plans_[p.id]) pool.push_back(p);

    std::vector<int> roster;
    if (!pool.empty()) {
        auto ss = stream("select:" + rs);
        roster = select_round(pool, scfg, ss);
    }

    RoundRecord rec;
    rec.round = r;
    rec.roster = roster;

    for (int id : roster)
        transcript_.record({MsgType::round_invite, r, "server", "to=" + std::to_string(id)});

    // privacy-budget gate answered at invite time
    std::vector<int> accepted;
    for (int id : roster) {
        bool ok = !method_.use_dp || gate(budgets_[id], cfg_.dp);
        rec.alpha[id] = ok ? 1 : 0;
        transcript_.record({ok ? MsgType::round_accept : MsgType::round_decline, r,
                            client_name(id), ""});
        if (ok) accepted.push_back(id);
    }

    ModelConfig mc = cfg_.model;
    mc.fedprox_mu = method_.fedprox_mu;

    std::map<int, ModelVector> deltas;
    for (int id : accepted) {
        auto ts = stream("train:" + rs + ":" + std::to_string(id));
        ModelVector delta = local_train(client_data_[id], theta_, mc, *client_plans_[id], ts);
        if (method_.use_dp) {
            if (!method_.dp_no_clip) delta = clip(delta, cfg_.dp.clip_norm);
            if (cfg_.dp.sigma > 0.0) {
                auto ps = stream("noise:" + rs + ":" + std::to_string(id));
                delta = perturb(delta, cfg_.dp.sigma, ps);
            }
        }
        deltas.emplace(id, std::move(delta));
    }

    std::vector<int> completed, dropped;
    for (int id : accepted) {
        auto ds = stream("drop:" + rs + ":" + std::to_string(id));
        (survives_round(profiles_[id], scfg, ds) ? completed : dropped).push_back(id);
    }
    rec.dropouts = dropped;

    const std::size_t dim = layout_->total_size();
    const std::size_t update_bytes = 8 * dim;
    bool have_update = !completed.empty();

    if (have_update) {
        double wsum = 0.0;
        for (int id : completed) wsum += static_cast<double>(client_data_[id].n());

        std::vector<double> agg_values(dim, 0.0);
        if (method_.use_secagg) {
            auto provision = [&](const std::vector<int>& ids) {
                PairwiseSeeds seeds;
                for (std::size_t i = 0; i < ids.size(); ++i)
                    for (std::size_t j = i + 1; j < ids.size(); ++j)
                        seeds.set(ids[i], ids[j],
                                  derive_key(run_seed_, "pairseed:" + rs + ":" +
                                                            std::to_string(ids[i]) + ":" +
                                                            std::to_string(ids[j])));
                return seeds;
            };
            auto send_updates = [&](const std::vector<int>& mask_roster,
                                    const PairwiseSeeds& seeds) {
                std::vector<MaskedUpdate> sent;
                for (int id : completed) {
                    const ModelVector& d = deltas.at(id);
                    double w = static_cast<double>(client_data_[id].n());
                    FieldVector fv = encode_fixed(vec_scale(w, d).values);
                    MaskedUpdate mu;
                    mu.client_id = id;
                    mu.round = r;
                    mu.vec = mask(fv, id, mask_roster, seeds, r);
                    mu.weight = w;
                    mu.n_samples = client_data_[id].n();
                    sent.push_back(std::move(mu));
                    transcript_.record({MsgType::masked_update, r, client_name(id),
                                        "dim=" + std::to_string(dim) +
                                            ";weight=" + std::to_string(client_data_[id].n()),
                                        dim});
                }
                return sent;
            };

            FieldVector sum;
            try {
                auto sent = send_updates(accepted, provision(accepted));
                sum = aggregate_unmask(sent, accepted);
            } catch (const RoundAbort& abort) {
                std::string missing;
                for (int id : abort.missing) missing += std::to_string(id) + ";";
                transcript_.record({MsgType::round_abort, r, "server", "missing=" + missing});
                // retry once with the surviving roster
                auto sent = send_updates(completed, provision(completed));
                sum = aggregate_unmask(sent, completed);
            }
            std::vector<double> decoded = decode_fixed(sum);
            for (std::size_t i = 0; i < dim; ++i) agg_values[i] = decoded[i] / wsum;
        } else {
            for (int id : completed) {
                double w = static_cast<double>(client_data_[id].n());
                const ModelVector& d = deltas.at(id);
                for (std::size_t i = 0; i < dim; ++i) agg_values[i] += w * d.values[i];
                transcript_.record({MsgType::masked_update, r, client_name(id),
                                    "dim=" + std::to_string(dim) + ";plain=1;weight=" +
                                        std::to_string(client_data_[id].n()),
                                    dim});
            }
            for (std::size_t i = 0; i < dim; ++i) agg_values[i] /= wsum;
        }
        theta_ = vec_axpy(1.0, ModelVector(layout_, std::move(agg_values)), theta_);

        if (method_.use_dp)
            for (int id : completed) budgets_[id] = charge(budgets_[id], cfg_.dp);
    } else if (!dropped.empty() && method_.use_secagg) {
        std::string missing;
        for (int id : dropped) missing += std::to_string(id) + ";";
        transcript_.record({MsgType::round_abort, r, "server", "missing=" + missing});
    }

    transcript_.record(
        {MsgType::global_model, r, "server", "dim=" + std::to_string(dim), dim});

    for (std::size_t k = 0; k < profiles_.size(); ++k) {
        int id = static_cast<int>(k);
        Participation outcome = Participation::idle;
        if (std::find(completed.begin(), completed.end(), id) != completed.end())
            outcome = Participation::completed;
        else if (std::find(dropped.begin(), dropped.end(), id) != dropped.end())
            outcome = Participation::dropped;
        double mb = outcome == Participation::completed
                        ? static_cast<double>(update_bytes) / 1e6
                        : 0.0;
        profiles_[k] = step_energy(profiles_[k], outcome, mb);
    }

    RoundStats stats;
    stats.eval = evaluate(theta_, *test_, server_plan_);
    stats.roster_size = roster.size();
    stats.dropouts = dropped.size();
    stats.dropout_rate =
        accepted.empty() ? 0.0
                         : static_cast<double>(dropped.size()) / static_cast<double>(accepted.size());
    for (const auto& b : budgets_) stats.epsilon_spent_max = std::max(stats.epsilon_spent_max,
                                                                     b.epsilon_spent);
    for (std::size_t i = msg_mark; i < transcript_.messages().size(); ++i)
        stats.bytes += transcript_.messages()[i].byte_size();
    stats.empty_round = !have_update;

    double upload_ms = 0.0;
    for (int id : completed)
        upload_ms = std::max(upload_ms, latency_ms_[id] + static_cast<double>(update_bytes) / 1e6 /
                                                              bandwidth_mbps_[id] * 1000.0);
    double broadcast_ms = 0.0;
    for (int id : roster)
        broadcast_ms =
            std::max(broadcast_ms, latency_ms_[id] + static_cast<double>(update_bytes) / 1e6 /
                                                         bandwidth_mbps_[id] * 1000.0);
    stats.wall_ms = std::min(upload_ms + broadcast_ms, cfg_.net.round_timeout_ms);

    rec.global_model = theta_;
    rec.metrics["accuracy"] = stats.eval.accuracy;
    rec.metrics["f1"] = stats.eval.f1;
    rec.metrics["auc"] = stats.eval.auc;
    rec.metrics["dropout_rate"] = stats.dropout_rate;
    history_.push_back(std::move(rec));
    return stats;
}

std::vector<RoundStats> Simulation::run_all() {
    std::vector<RoundStats> out;
    out.push_back(evaluate_current());
    for (std::size_t r = 0; r < cfg_.rounds; ++r) out.push_back(run_round());
    return out;
}

}  // namespace mcpfl
