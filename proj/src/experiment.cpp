#include "mcpfl/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace mcpfl {
namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct MeanStd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    for (double x : xs) r.sd += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(r.sd / static_cast<double>(xs.size()));
    return r;
}

const CellResult* find_cell(const ExperimentResult& r, const std::string& method,
                            std::uint64_t seed) {
    for (const auto& c : r.cells)
        if (c.method == method && c.seed == seed) return &c;
    return nullptr;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    SplitDataset data = generate(cfg.data);

    ExperimentResult result;
    for (const auto& method_name : cfg.methods) {
        MethodConfig method = method_config(method_name, cfg.fedprox_mu);
        for (std::uint64_t seed : cfg.seeds) {
            Simulation sim(cfg, method, seed, &data);
            CellResult cell;
            cell.method = method_name;
            cell.seed = seed;
            cell.rounds = sim.run_all();
            cell.negotiation_rejects = sim.negotiation_rejects();
            if (cfg.transcript) {
                std::filesystem::create_directories(cfg.out_dir + "/transcripts");
                sim.transcript().dump(cfg.out_dir + "/transcripts/" + method_name + "_seed" +
                                      std::to_string(seed) + ".log");
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

std::vector<SweepPoint> run_sigma_sweep(ExperimentConfig cfg, const std::vector<double>& sigmas) {
    cfg.validate();
    SplitDataset data = generate(cfg.data);
    MethodConfig method = method_config(cfg.methods.front(), cfg.fedprox_mu);

    std::vector<SweepPoint> points;
    for (double sigma : sigmas) {
        ExperimentConfig c = cfg;
        c.dp.sigma = sigma;
        SweepPoint pt;
        pt.sigma = sigma;
        std::vector<double> accs, f1s, aucs;
        for (std::uint64_t seed : cfg.seeds) {
            Simulation sim(c, method, seed, &data);
            auto rounds = sim.run_all();
            accs.push_back(rounds.back().eval.accuracy);
            f1s.push_back(rounds.back().eval.f1);
            aucs.push_back(rounds.back().eval.auc);
        }
        auto acc = mean_std(accs);
        pt.accuracy_mean = acc.mean;
        pt.accuracy_std = acc.sd;
        pt.f1_mean = mean_std(f1s).mean;
        pt.auc_mean = mean_std(aucs).mean;
        pt.epsilon_total = epsilon_total(cfg.rounds, c.dp.dp_delta, c.dp.clip_norm, sigma);
        points.push_back(pt);
    }
    return points;
}

double final_accuracy_mean(const ExperimentResult& r, const std::string& method) {
    std::vector<double> accs;
    for (const auto& c : r.cells)
        if (c.method == method) accs.push_back(c.rounds.back().eval.accuracy);
    return mean_std(accs).mean;
}

double mean_dropout_rate(const CellResult& cell) {
    std::vector<double> rates;
    for (std::size_t i = 1; i < cell.rounds.size(); ++i)
        rates.push_back(cell.rounds[i].dropout_rate);
    return mean_std(rates).mean;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::filesystem::create_directories(cfg.out_dir);

    {
        std::ofstream f(cfg.out_dir + "/rounds.csv");
        f << "method,seed,round,accuracy,f1,auc,roster_size,dropouts,dropout_rate,"
             "epsilon_spent_max,bytes,wall_ms\n";
        for (const auto& method : cfg.methods) {
            for (std::uint64_t seed : cfg.seeds) {
                const CellResult* c = find_cell(result, method, seed);
                if (!c) continue;
                for (std::size_t r = 0; r < c->rounds.size(); ++r) {
                    const auto& s = c->rounds[r];
                    f << method << "," << seed << "," << r << "," << fmt(s.eval.accuracy) << ","
                      << fmt(s.eval.f1) << "," << fmt(s.eval.auc) << "," << s.roster_size << ","
                      << s.dropouts << "," << fmt(s.dropout_rate) << ","
                      << fmt(s.epsilon_spent_max) << "," << s.bytes << "," << fmt(s.wall_ms)
                      << "\n";
                }
            }
        }
    }

    {
        std::ofstream f(cfg.out_dir + "/summary.csv");
        f << "method,accuracy_mean,accuracy_std,f1_mean,f1_std,auc_mean,auc_std,"
             "dropout_pct_mean,negotiation_rejects\n";
        for (const auto& method : cfg.methods) {
            std::vector<double> accs, f1s, aucs, drops;
            std::size_t rejects = 0;
            for (std::uint64_t seed : cfg.seeds) {
                const CellResult* c = find_cell(result, method, seed);
                if (!c) continue;
                accs.push_back(c->rounds.back().eval.accuracy);
                f1s.push_back(c->rounds.back().eval.f1);
                aucs.push_back(c->rounds.back().eval.auc);
                drops.push_back(mean_dropout_rate(*c));
                rejects += c->negotiation_rejects;
            }
            auto a = mean_std(accs), f1 = mean_std(f1s), auc = mean_std(aucs), d = mean_std(drops);
            f << method << "," << fmt(a.mean) << "," << fmt(a.sd) << "," << fmt(f1.mean) << ","
              << fmt(f1.sd) << "," << fmt(auc.mean) << "," << fmt(auc.sd) << ","
              << fmt(100.0 * d.mean) << "," << rejects << "\n";
        }
    }

    // per-round means across seeds, one file per reported curve
    auto write_fig = [&](const std::string& name, auto metric) {
        std::ofstream f(cfg.out_dir + "/" + name);
        f << "method,round,value\n";
        for (const auto& method : cfg.methods) {
            std::size_t n_rounds = 0;
            for (std::uint64_t seed : cfg.seeds)
                if (const CellResult* c = find_cell(result, method, seed))
                    n_rounds = std::max(n_rounds, c->rounds.size());
            for (std::size_t r = 0; r < n_rounds; ++r) {
                std::vector<double> vals;
                for (std::uint64_t seed : cfg.seeds)
                    if (const CellResult* c = find_cell(result, method, seed))
                        if (r < c->rounds.size()) vals.push_back(metric(c->rounds[r]));
                f << method << "," << r << "," << fmt(mean_std(vals).mean) << "\n";
            }
        }
    };
    write_fig("fig_accuracy.csv", [](const RoundStats& s) { return s.eval.accuracy; });
    write_fig("fig_f1.csv", [](const RoundStats& s) { return s.eval.f1; });
    write_fig("fig_auc.csv", [](const RoundStats& s) { return s.eval.auc; });
    write_fig("fig_dropout.csv", [](const RoundStats& s) { return s.dropout_rate; });
}

void write_sweep_csv(const std::string& out_dir, const std::vector<SweepPoint>& points) {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir + "/fig_privacy.csv");
    f << "sigma,accuracy_mean,accuracy_std,f1_mean,auc_mean,epsilon_total\n";
    for (const auto& p : points)
        f << fmt(p.sigma) << "," << fmt(p.accuracy_mean) << "," << fmt(p.accuracy_std) << ","
          << fmt(p.f1_mean) << "," << fmt(p.auc_mean) << "," << fmt(p.epsilon_total) << "\n";
}

}  // namespace mcpfl
