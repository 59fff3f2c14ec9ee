#include "mvcg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mvcg/serialize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mvcg {

double RegretReport::max_identity_residual() const {
    const double r1 = std::abs(Reg_sharp - n * Reg_W - T * Z);
    const double r2 = std::abs(Reg_0 + (n - 1) * Reg_W + T * Z);
    return std::max(r1, r2);
}

RegretReport compute_regrets(const RunLog& log, const VcgBenchmark& bench,
                             const LinearMdpInstance& inst) {
    if (log.n != inst.n || log.H != inst.H || log.S != inst.S || log.A != inst.A)
        throw std::invalid_argument("run log does not match the instance");
    if (bench.n != inst.n)
        throw std::invalid_argument("benchmark does not match the instance");
    // Cheap recomputation guards against a benchmark from a different world.
    {
        const DpResult star = exact_plan(inst, RewardSelector::total(inst.n));
        if (std::abs(star.value[0][inst.initial_state] - bench.v_star) > 1e-9)
            throw std::invalid_argument("benchmark was not built on this instance");
    }

    const int T = static_cast<int>(log.rounds.size());
    const int n = inst.n;

    RegretReport rep;
    rep.T = T;
    rep.K = log.config.K;
    rep.n = n;
    rep.v_star = bench.v_star;
    rep.reg_w.resize(T);
    rep.reg0.resize(T);
    rep.regi.assign(T, std::vector<double>(n, 0.0));
    rep.price.assign(T, std::vector<double>(n, 0.0));
    rep.u0.resize(T);
    rep.ui.assign(T, std::vector<double>(n, 0.0));
    rep.v_pi_R.resize(T);
    rep.z_running.resize(T);
    rep.Reg_i.assign(n, 0.0);

    double minus_opt_sum = 0.0;
    for (const auto& ab : bench.agents)
        minus_opt_sum += ab.v_minus_opt;

    // Per-stream values of every executed policy, cached by policy id.
    std::vector<std::vector<double>> stream_values(log.policies.size());
    const auto values_for = [&](int policy_id) -> const std::vector<double>& {
        auto& slot = stream_values[policy_id];
        if (slot.empty())
            slot = exact_eval_streams(inst, log.policies[policy_id]);
        return slot;
    };

    double y_acc = 0.0;
    for (int idx = 0; idx < T; ++idx) {
        const RoundRecord& round = log.rounds[idx];
        const std::vector<double>& v = values_for(round.policy_id);
        double v_R = 0.0;
        for (int i = 0; i <= n; ++i)
            v_R += v[i];

        rep.v_pi_R[idx] = v_R;
        rep.reg_w[idx] = bench.v_star - v_R;
        rep.Reg_W += rep.reg_w[idx];

        double price_sum = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double p = round.prices[i - 1];
            const double u = v[i] - p;
            rep.price[idx][i - 1] = p;
            rep.ui[idx][i - 1] = u;
            rep.regi[idx][i - 1] = bench.agents[i - 1].utility - u;
            rep.Reg_i[i - 1] += rep.regi[idx][i - 1];
            price_sum += p;
            y_acc += p + (v_R - v[i]);
        }
        rep.u0[idx] = v[0] + price_sum;
        rep.reg0[idx] = bench.seller_utility - rep.u0[idx];
        rep.Reg_0 += rep.reg0[idx];
        rep.z_running[idx] = y_acc / (idx + 1) - minus_opt_sum;
    }
    for (double r : rep.Reg_i)
        rep.Reg_sharp += r;
    rep.Y = y_acc / T;
    rep.Z = rep.Y - minus_opt_sum;
    return rep;
}

double fit_exponent(const std::vector<std::pair<double, double>>& points,
                    std::vector<std::string>* warnings) {
    std::vector<std::pair<double, double>> kept;
    for (const auto& [t, reg] : points) {
        if (!(t > 0.0))
            throw std::invalid_argument("T values must be positive");
        if (reg <= 0.0) {
            if (warnings)
                warnings->push_back("dropped nonpositive regret point at T=" +
                                    std::to_string(static_cast<long long>(t)));
            continue;
        }
        kept.emplace_back(std::log(t), std::log(reg));
    }
    if (kept.size() < 3)
        throw std::invalid_argument("need at least 3 positive points to fit a slope");

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : kept) {
        mx += x;
        my += y;
    }
    mx /= kept.size();
    my /= kept.size();
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : kept) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("T values must not be all equal");
    return sxy / sxx;
}

void ExperimentConfig::validate() const {
    if (seeds < 1)
        throw std::invalid_argument("need at least one seed");
    if (T_grid.empty())
        throw std::invalid_argument("T grid must not be empty");
    for (int t : T_grid)
        if (t < 1)
            throw std::invalid_argument("T values must be >= 1");
    if (threads < 0)
        throw std::invalid_argument("threads must be nonnegative");
}

namespace {

CellResult run_cell(const LinearMdpInstance& inst, const VcgBenchmark& bench,
                    const ExperimentConfig& cfg,
                    const std::vector<ReportingStrategy>& strategies, int t_index,
                    int seed_index) {
    CellResult cell;
    cell.T = cfg.T_grid[t_index];
    cell.seed_index = seed_index;
    cell.seed = Rng::derive(cfg.base_seed,
                            static_cast<std::uint64_t>(t_index) * cfg.seeds + seed_index);
    try {
        MechanismConfig mc = cfg.mech;
        mc.T = cell.T;
        mc.seed = cell.seed;
        const RunLog log = run_mechanism(inst, strategies, mc);
        if (!cfg.log_dir.empty()) {
            const std::string path = cfg.log_dir + "/run_T" + std::to_string(cell.T) +
                                     "_s" + std::to_string(seed_index) + ".jsonl";
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write run log: " + path);
            out << runlog_jsonl(log, cfg.instance);
        }
        const RegretReport rep = compute_regrets(log, bench, inst);

        cell.Reg_W = rep.Reg_W;
        cell.Reg_0 = rep.Reg_0;
        cell.Reg_sharp = rep.Reg_sharp;
        cell.Reg_i = rep.Reg_i;
        cell.Z = rep.Z;
        cell.Ui_over_T.assign(inst.n, 0.0);
        double u0_acc = 0.0, price_acc = 0.0;
        for (int t = 0; t < rep.T; ++t) {
            u0_acc += rep.u0[t];
            for (int i = 0; i < inst.n; ++i) {
                cell.Ui_over_T[i] += rep.ui[t][i];
                price_acc += rep.price[t][i];
            }
        }
        for (int i = 0; i < inst.n; ++i)
            cell.Ui_over_T[i] /= rep.T;
        cell.u0_over_T = u0_acc / rep.T;
        cell.mean_price = price_acc / (static_cast<double>(rep.T) * inst.n);

        if (cfg.keep_series) {
            cell.series.resize(rep.T);
            for (int t = 0; t < rep.T; ++t) {
                SeriesRow& row = cell.series[t];
                row.t = t + 1;
                row.phase = log.rounds[t].phase == Phase::Explore ? 0 : 1;
                row.reg_w = rep.reg_w[t];
                row.reg0 = rep.reg0[t];
                row.regi = rep.regi[t];
                row.price = rep.price[t];
                row.z_running = rep.z_running[t];
            }
        }
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    return cell;
}

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

void append_series_row(std::string& out, const SeriesRow& row) {
    out += std::to_string(row.t);
    out += ',';
    out += row.phase == 0 ? "explore" : "exploit";
    out += ',';
    append_double(out, row.reg_w);
    out += ',';
    append_double(out, row.reg0);
    for (double r : row.regi) {
        out += ',';
        append_double(out, r);
    }
    for (double p : row.price) {
        out += ',';
        append_double(out, p);
    }
    out += ',';
    append_double(out, row.z_running);
    out += '\n';
}

std::string series_header(int n, bool with_cell) {
    std::string h = with_cell ? "T,seed,t,phase,reg_w,reg_0" : "t,phase,reg_w,reg_0";
    for (int i = 1; i <= n; ++i)
        h += ",reg_" + std::to_string(i);
    for (int i = 1; i <= n; ++i)
        h += ",price_" + std::to_string(i);
    h += ",z_running\n";
    return h;
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    config.validate();

    const LinearMdpInstance inst = build_instance(config.instance);
    const VcgBenchmark bench = vcg_benchmark(inst);

    std::vector<ReportingStrategy> strategies = config.strategies;
    if (strategies.empty())
        strategies.assign(inst.n, ReportingStrategy::truthful());
    if (static_cast<int>(strategies.size()) != inst.n)
        throw std::invalid_argument("strategy count does not match the agent count");

    ExperimentSummary summary;
    summary.config = config;

    const int num_t = static_cast<int>(config.T_grid.size());
    const int cells = num_t * config.seeds;
    summary.cells.resize(cells);

    if (config.threads == 1) {
        for (int c = 0; c < cells; ++c)
            summary.cells[c] = run_cell(inst, bench, config, strategies,
                                        c / config.seeds, c % config.seeds);
    } else {
#ifdef _OPENMP
        const int requested = config.threads == 0 ? omp_get_max_threads() : config.threads;
#pragma omp parallel for schedule(dynamic) num_threads(requested)
        for (int c = 0; c < cells; ++c)
            summary.cells[c] = run_cell(inst, bench, config, strategies,
                                        c / config.seeds, c % config.seeds);
#else
        for (int c = 0; c < cells; ++c)
            summary.cells[c] = run_cell(inst, bench, config, strategies,
                                        c / config.seeds, c % config.seeds);
#endif
    }

    // Fixed-order reduce, independent of which thread produced which cell.
    summary.aggregates.resize(num_t);
    for (int ti = 0; ti < num_t; ++ti) {
        TAggregate agg;
        agg.T = config.T_grid[ti];
        agg.mean_reg_i.assign(inst.n, 0.0);
        agg.mean_ui_over_T.assign(inst.n, 0.0);
        std::vector<double> reg_ws;
        for (int si = 0; si < config.seeds; ++si) {
            const CellResult& cell = summary.cells[ti * config.seeds + si];
            if (!cell.ok) {
                summary.warnings.push_back("cell T=" + std::to_string(cell.T) + " seed=" +
                                           std::to_string(si) + " failed: " + cell.error);
                continue;
            }
            ++agg.surviving;
            agg.mean_reg_w += cell.Reg_W;
            agg.mean_reg0 += cell.Reg_0;
            agg.mean_price += cell.mean_price;
            for (int i = 0; i < inst.n; ++i) {
                agg.mean_reg_i[i] += cell.Reg_i[i];
                agg.mean_ui_over_T[i] += cell.Ui_over_T[i];
            }
            reg_ws.push_back(cell.Reg_W);
        }
        if (agg.surviving > 0) {
            agg.mean_reg_w /= agg.surviving;
            agg.mean_reg0 /= agg.surviving;
            agg.mean_price /= agg.surviving;
            for (int i = 0; i < inst.n; ++i) {
                agg.mean_reg_i[i] /= agg.surviving;
                agg.mean_ui_over_T[i] /= agg.surviving;
            }
            agg.mean_reg_w_over_T = agg.mean_reg_w / agg.T;
            if (agg.surviving > 1) {
                double var = 0.0;
                for (double r : reg_ws)
                    var += (r - agg.mean_reg_w) * (r - agg.mean_reg_w);
                var /= agg.surviving - 1;
                agg.half_reg_w = 1.96 * std::sqrt(var / agg.surviving);
            }
        }
        summary.aggregates[ti] = std::move(agg);
    }

    if (num_t >= 3) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& agg : summary.aggregates)
            if (agg.surviving > 0)
                pts.emplace_back(agg.T, agg.mean_reg_w);
        try {
            summary.slope = fit_exponent(pts, &summary.warnings);
        } catch (const std::exception& e) {
            summary.warnings.push_back(std::string("slope fit failed: ") + e.what());
        }
    }
    return summary;
}

std::string series_csv(const ExperimentSummary& summary) {
    const int n = summary.cells.empty() ? 0
                                        : static_cast<int>(summary.cells.front().Reg_i.size());
    std::string out = series_header(n, true);
    for (const auto& cell : summary.cells) {
        if (!cell.ok)
            continue;
        for (const auto& row : cell.series) {
            out += std::to_string(cell.T);
            out += ',';
            out += std::to_string(cell.seed_index);
            out += ',';
            append_series_row(out, row);
        }
    }
    return out;
}

std::string report_csv(const RegretReport& report) {
    std::string out = series_header(report.n, false);
    for (int t = 0; t < report.T; ++t) {
        SeriesRow row;
        row.t = t + 1;
        row.phase = t + 1 <= report.K ? 0 : 1;
        row.reg_w = report.reg_w[t];
        row.reg0 = report.reg0[t];
        row.regi = report.regi[t];
        row.price = report.price[t];
        row.z_running = report.z_running[t];
        append_series_row(out, row);
    }
    return out;
}

} // namespace mvcg
