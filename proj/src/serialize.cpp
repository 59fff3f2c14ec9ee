#include "mvcg/serialize.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mvcg {

namespace {

using nlohmann::json;

double round12(double v) {
    if (!std::isfinite(v))
        return v;
    return std::round(v * 1e12) / 1e12;
}

json spec_to_json(const InstanceSpec& spec) {
    json j;
    j["kind"] = spec.kind;
    j["states"] = spec.states;
    j["actions"] = spec.actions;
    j["horizon"] = spec.horizon;
    j["agents"] = spec.agents;
    j["r_max"] = spec.r_max;
    j["seed"] = spec.seed;
    j["noise"] = spec.noise;
    if (spec.kind == "hard") {
        j["variant"] = spec.variant;
        j["delta"] = spec.delta;
    }
    return j;
}

InstanceSpec spec_from_json(const json& j) {
    InstanceSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    spec.states = j.at("states").get<int>();
    spec.actions = j.at("actions").get<int>();
    spec.horizon = j.at("horizon").get<int>();
    spec.agents = j.at("agents").get<int>();
    spec.r_max = j.at("r_max").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.noise = j.at("noise").get<std::string>();
    if (j.contains("variant"))
        spec.variant = j["variant"].get<std::string>();
    if (j.contains("delta"))
        spec.delta = j["delta"].get<double>();
    return spec;
}

json policy_to_json(const PolicyTable& p) {
    return json{{"H", p.H}, {"S", p.S}, {"action", p.action}};
}

PolicyTable policy_from_json(const json& j) {
    PolicyTable p(j.at("H").get<int>(), j.at("S").get<int>());
    p.action = j.at("action").get<std::vector<int>>();
    return p;
}

json trajectory_to_json(const Trajectory& traj) {
    json steps = json::array();
    for (const auto& st : traj.steps)
        steps.push_back({st.h, st.state, st.action, st.next_state});
    return json{{"t", traj.episode}, {"steps", steps}, {"rewards", traj.rewards}};
}

Trajectory trajectory_from_json(const json& j) {
    Trajectory traj;
    traj.episode = j.at("t").get<int>();
    for (const auto& st : j.at("steps")) {
        traj.steps.push_back(
            {st[0].get<int>(), st[1].get<int>(), st[2].get<int>(), st[3].get<int>()});
    }
    traj.rewards = j.at("rewards").get<std::vector<std::vector<double>>>();
    return traj;
}

} // namespace

std::string instance_spec_json(const InstanceSpec& spec) { return spec_to_json(spec).dump(); }

std::string instance_json(const LinearMdpInstance& inst) {
    json j;
    j["H"] = inst.H;
    j["n"] = inst.n;
    j["R_max"] = inst.R_max;
    j["states"] = inst.S;
    j["actions"] = inst.A;
    j["initial_state"] = inst.initial_state;
    j["d"] = inst.d;
    j["noise"] = inst.noise == NoiseModel::Bernoulli ? "bernoulli" : "deterministic";
    json phi = json::array();
    for (const auto& v : inst.phi)
        for (int k = 0; k < v.size(); ++k)
            phi.push_back(v[k]);
    j["phi"] = std::move(phi);   // (s*A + a) major, feature index minor
    j["P"] = inst.trans;         // ((h*S + s)*A + a) major, next state minor
    j["mean_reward"] = inst.means; // ((i*H + h)*S + s)*A + a
    return j.dump();
}

std::string benchmark_json(const VcgBenchmark& bench) {
    json j;
    j["n"] = bench.n;
    j["V_star_R"] = round12(bench.v_star);
    j["pi_star"] = policy_to_json(bench.pi_star);
    j["u_0"] = round12(bench.seller_utility);
    json agents = json::array();
    for (const auto& ab : bench.agents) {
        json a;
        a["pi_minus"] = policy_to_json(ab.pi_minus);
        a["V_minus_opt"] = round12(ab.v_minus_opt);
        a["V_star_minus"] = round12(ab.v_star_minus);
        a["price"] = round12(ab.price);
        a["utility"] = round12(ab.utility);
        agents.push_back(std::move(a));
    }
    j["agents"] = std::move(agents);
    return j.dump(2);
}

std::string dataset_jsonl(const Dataset& data) {
    std::string out;
    json meta;
    meta["H"] = data.H;
    meta["n"] = data.n;
    meta["states"] = data.S;
    meta["actions"] = data.A;
    meta["d"] = data.d;
    meta["R_max"] = data.R_max;
    meta["K"] = data.K;
    meta["episodes"] = data.episodes.size();
    out += meta.dump();
    out += '\n';
    for (const auto& ep : data.episodes) {
        out += trajectory_to_json(ep).dump();
        out += '\n';
    }
    return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty dataset file");
    json meta = json::parse(line);
    Dataset data;
    data.H = meta.at("H").get<int>();
    data.n = meta.at("n").get<int>();
    data.S = meta.at("states").get<int>();
    data.A = meta.at("actions").get<int>();
    data.d = meta.at("d").get<int>();
    data.R_max = meta.at("R_max").get<double>();
    data.K = meta.at("K").get<int>();
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        data.episodes.push_back(trajectory_from_json(json::parse(line)));
    }
    data.validate();
    return data;
}

std::string runlog_jsonl(const RunLog& log, const InstanceSpec& spec) {
    std::string out;
    json meta;
    meta["instance"] = spec_to_json(spec);
    meta["T"] = log.config.T;
    meta["K"] = log.config.K;
    meta["zeta1"] = log.config.zeta1 == DataPolicy::Etc ? "etc" : "ewc";
    meta["zeta2"] = log.config.zeta2 == ValueMode::Optimistic ? "opt" : "pes";
    meta["zeta3"] = log.config.zeta3 == ValueMode::Optimistic ? "opt" : "pes";
    meta["delta"] = log.config.delta;
    meta["lambda"] = log.config.lambda;
    meta["beta_scale"] = log.config.c_beta;
    meta["beta_form"] = log.config.beta_form == BetaForm::Practical ? "practical"
                        : log.config.beta_form == BetaForm::TheoryAgents ? "theory"
                                                                         : "theory_total";
    meta["beta"] = log.beta;
    meta["seed"] = log.config.seed;
    meta["n"] = log.n;
    meta["H"] = log.H;
    meta["states"] = log.S;
    meta["actions"] = log.A;
    meta["R_max"] = log.R_max;
    json policies = json::array();
    for (const auto& p : log.policies)
        policies.push_back(policy_to_json(p));
    meta["policies"] = std::move(policies);
    out += meta.dump();
    out += '\n';
    for (const auto& round : log.rounds) {
        json j;
        j["t"] = round.t;
        j["phase"] = round.phase == Phase::Explore ? "explore" : "exploit";
        j["policy"] = round.policy_id;
        j["traj"] = trajectory_to_json(round.traj);
        j["true_rewards"] = round.true_rewards;
        j["prices"] = round.prices;
        j["F"] = round.F;
        j["G"] = round.G;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::pair<RunLog, InstanceSpec> runlog_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty run log file");
    json meta = json::parse(line);
    InstanceSpec spec = spec_from_json(meta.at("instance"));

    RunLog log;
    log.config.T = meta.at("T").get<int>();
    log.config.K = meta.at("K").get<int>();
    log.config.zeta1 =
        meta.at("zeta1").get<std::string>() == "etc" ? DataPolicy::Etc : DataPolicy::Ewc;
    log.config.zeta2 = meta.at("zeta2").get<std::string>() == "opt" ? ValueMode::Optimistic
                                                                    : ValueMode::Pessimistic;
    log.config.zeta3 = meta.at("zeta3").get<std::string>() == "opt" ? ValueMode::Optimistic
                                                                    : ValueMode::Pessimistic;
    log.config.delta = meta.at("delta").get<double>();
    log.config.lambda = meta.at("lambda").get<double>();
    log.config.c_beta = meta.at("beta_scale").get<double>();
    const std::string form = meta.at("beta_form").get<std::string>();
    log.config.beta_form = form == "practical" ? BetaForm::Practical
                           : form == "theory"  ? BetaForm::TheoryAgents
                                               : BetaForm::TheoryTotal;
    log.beta = meta.at("beta").get<double>();
    log.config.seed = meta.at("seed").get<std::uint64_t>();
    log.n = meta.at("n").get<int>();
    log.H = meta.at("H").get<int>();
    log.S = meta.at("states").get<int>();
    log.A = meta.at("actions").get<int>();
    log.R_max = meta.at("R_max").get<double>();
    for (const auto& p : meta.at("policies"))
        log.policies.push_back(policy_from_json(p));

    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        json j = json::parse(line);
        RoundRecord round;
        round.t = j.at("t").get<int>();
        round.phase = j.at("phase").get<std::string>() == "explore" ? Phase::Explore
                                                                    : Phase::Exploit;
        round.policy_id = j.at("policy").get<int>();
        round.traj = trajectory_from_json(j.at("traj"));
        round.true_rewards = j.at("true_rewards").get<std::vector<std::vector<double>>>();
        round.prices = j.at("prices").get<std::vector<double>>();
        round.F = j.at("F").get<std::vector<double>>();
        round.G = j.at("G").get<std::vector<double>>();
        log.rounds.push_back(std::move(round));
    }
    return {std::move(log), std::move(spec)};
}

std::string runlog_csv(const RunLog& log) {
    std::string out = "t,phase";
    for (int i = 1; i <= log.n; ++i)
        out += ",price_" + std::to_string(i);
    for (int i = 1; i <= log.n; ++i)
        out += ",realized_u_" + std::to_string(i);
    out += ",realized_u_0\n";

    char buf[40];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out += buf;
    };
    for (const auto& round : log.rounds) {
        out += std::to_string(round.t);
        out += round.phase == Phase::Explore ? ",explore" : ",exploit";
        double price_sum = 0.0;
        for (int i = 0; i < log.n; ++i) {
            out += ',';
            put(round.prices[i]);
            price_sum += round.prices[i];
        }
        for (int i = 1; i <= log.n; ++i) {
            double total = 0.0;
            for (int h = 0; h < log.H; ++h)
                total += round.true_rewards[h][i];
            out += ',';
            put(total - round.prices[i - 1]);
        }
        double seller = 0.0;
        for (int h = 0; h < log.H; ++h)
            seller += round.true_rewards[h][0];
        out += ',';
        put(seller + price_sum);
        out += '\n';
    }
    return out;
}

std::string summary_json(const ExperimentSummary& summary) {
    json j;
    json cfg;
    cfg["instance"] = spec_to_json(summary.config.instance);
    cfg["T_grid"] = summary.config.T_grid;
    cfg["seeds"] = summary.config.seeds;
    cfg["base_seed"] = summary.config.base_seed;
    cfg["threads"] = summary.config.threads;
    cfg["zeta1"] = summary.config.mech.zeta1 == DataPolicy::Etc ? "etc" : "ewc";
    cfg["zeta2"] =
        summary.config.mech.zeta2 == ValueMode::Optimistic ? "opt" : "pes";
    cfg["zeta3"] =
        summary.config.mech.zeta3 == ValueMode::Optimistic ? "opt" : "pes";
    cfg["delta"] = summary.config.mech.delta;
    cfg["lambda"] = summary.config.mech.lambda;
    cfg["beta_scale"] = summary.config.mech.c_beta;
    cfg["beta_form"] = summary.config.mech.beta_form == BetaForm::Practical ? "practical"
                       : summary.config.mech.beta_form == BetaForm::TheoryAgents
                           ? "theory"
                           : "theory_total";
    cfg["K"] = summary.config.mech.K;
    j["config"] = std::move(cfg);

    json cells = json::array();
    for (const auto& cell : summary.cells) {
        json c;
        c["T"] = cell.T;
        c["seed_index"] = cell.seed_index;
        c["seed"] = cell.seed;
        c["ok"] = cell.ok;
        if (!cell.ok) {
            c["error"] = cell.error;
        } else {
            c["Reg_W"] = round12(cell.Reg_W);
            c["Reg_0"] = round12(cell.Reg_0);
            c["Reg_sharp"] = round12(cell.Reg_sharp);
            json regi = json::array();
            for (double r : cell.Reg_i)
                regi.push_back(round12(r));
            c["Reg_i"] = std::move(regi);
            json uit = json::array();
            for (double u : cell.Ui_over_T)
                uit.push_back(round12(u));
            c["Ui_over_T"] = std::move(uit);
            c["u0_over_T"] = round12(cell.u0_over_T);
            c["mean_price"] = round12(cell.mean_price);
            c["Z"] = round12(cell.Z);
        }
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);

    json aggs = json::array();
    for (const auto& agg : summary.aggregates) {
        json a;
        a["T"] = agg.T;
        a["surviving"] = agg.surviving;
        a["mean_Reg_W"] = round12(agg.mean_reg_w);
        a["halfwidth_Reg_W"] = round12(agg.half_reg_w);
        a["mean_Reg_W_over_T"] = round12(agg.mean_reg_w_over_T);
        a["mean_Reg_0"] = round12(agg.mean_reg0);
        json regi = json::array();
        for (double r : agg.mean_reg_i)
            regi.push_back(round12(r));
        a["mean_Reg_i"] = std::move(regi);
        json uit = json::array();
        for (double u : agg.mean_ui_over_T)
            uit.push_back(round12(u));
        a["mean_Ui_over_T"] = std::move(uit);
        a["mean_price"] = round12(agg.mean_price);
        aggs.push_back(std::move(a));
    }
    j["aggregates"] = std::move(aggs);
    if (summary.slope)
        j["slope"] = round12(*summary.slope);
    j["warnings"] = summary.warnings;
    return j.dump(2);
}

} // namespace mvcg
