// Command-line front end: run experiment grids, inspect exact benchmark
// values, replay saved run logs, plot regret curves, and re-check golden
// files.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "mvcg/config.hpp"
#include "mvcg/harness.hpp"
#include "mvcg/serialize.hpp"
#include "mvcg/svg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

fs::path resolve_out_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        if (const char* env = std::getenv("MVCG_OUT"))
            dir = env;
        else
            dir = ".";
    }
    fs::create_directories(dir);
    return dir;
}

struct Overrides {
    std::vector<int> t_grid;
    int seeds = -1;
    std::string zeta1, zeta2, zeta3;
    double beta_scale = std::nan("");
    int threads = -1;

    void apply(mvcg::ExperimentConfig& cfg) const {
        if (!t_grid.empty())
            cfg.T_grid = t_grid;
        if (seeds > 0)
            cfg.seeds = seeds;
        if (!zeta1.empty())
            cfg.mech.zeta1 = zeta1 == "etc" ? mvcg::DataPolicy::Etc : mvcg::DataPolicy::Ewc;
        if (!zeta2.empty())
            cfg.mech.zeta2 = zeta2 == "opt" ? mvcg::ValueMode::Optimistic
                                            : mvcg::ValueMode::Pessimistic;
        if (!zeta3.empty())
            cfg.mech.zeta3 = zeta3 == "opt" ? mvcg::ValueMode::Optimistic
                                            : mvcg::ValueMode::Pessimistic;
        if (!std::isnan(beta_scale))
            cfg.mech.c_beta = beta_scale;
        if (threads >= 0)
            cfg.threads = threads;
    }
};

int cmd_run(const std::string& config_path, const std::string& out_flag,
            const Overrides& overrides, const std::string& format, bool save_logs) {
    auto kv = mvcg::KeyValues::parse_auto(read_file(config_path));
    auto cfg = mvcg::experiment_config_from(kv);
    overrides.apply(cfg);
    cfg.keep_series = true;

    const fs::path out_early = resolve_out_dir(out_flag);
    if (save_logs) {
        fs::create_directories(out_early / "logs");
        cfg.log_dir = (out_early / "logs").string();
    }

    const auto summary = mvcg::run_experiment(cfg);
    const fs::path out = out_early;
    write_file(out / "summary.json", mvcg::summary_json(summary));
    if (format != "json")
        write_file(out / "series.csv", mvcg::series_csv(summary));

    for (const auto& agg : summary.aggregates)
        std::printf("T=%-8d seeds=%-3d mean Reg_W=%.6g (Reg_W/T=%.6g)\n", agg.T,
                    agg.surviving, agg.mean_reg_w, agg.mean_reg_w_over_T);
    if (summary.slope)
        std::printf("fitted welfare-regret exponent: %.4f\n", *summary.slope);
    for (const auto& w : summary.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("wrote %s\n", (out / "summary.json").string().c_str());
    return kExitOk;
}

int cmd_bench(const std::string& config_path) {
    const auto kv = mvcg::KeyValues::parse_auto(read_file(config_path));
    const auto spec = mvcg::instance_spec_from(kv);
    const auto inst = mvcg::build_instance(spec);
    const auto bench = mvcg::vcg_benchmark(inst);
    std::cout << mvcg::benchmark_json(bench) << "\n";
    return kExitOk;
}

int cmd_replay(const std::string& log_path, const std::string& out_flag,
               const std::string& format) {
    const auto [log, spec] = mvcg::runlog_from_jsonl(read_file(log_path));
    const auto inst = mvcg::build_instance(spec);
    const auto bench = mvcg::vcg_benchmark(inst);
    const auto report = mvcg::compute_regrets(log, bench, inst);

    const fs::path out = resolve_out_dir(out_flag);
    if (format == "json") {
        nlohmann::json j;
        j["T"] = report.T;
        j["K"] = report.K;
        j["Reg_W"] = report.Reg_W;
        j["Reg_0"] = report.Reg_0;
        j["Reg_sharp"] = report.Reg_sharp;
        j["Reg_i"] = report.Reg_i;
        j["Y"] = report.Y;
        j["Z"] = report.Z;
        j["identity_residual"] = report.max_identity_residual();
        write_file(out / "report.json", j.dump(2));
        std::printf("wrote %s\n", (out / "report.json").string().c_str());
    } else {
        write_file(out / "report.csv", mvcg::report_csv(report));
        write_file(out / "realized.csv", mvcg::runlog_csv(log));
        std::printf("wrote %s and realized.csv\n", (out / "report.csv").string().c_str());
    }
    std::printf("T=%d Reg_W=%.6g Reg_0=%.6g Reg_sharp=%.6g Z=%.6g\n", report.T,
                report.Reg_W, report.Reg_0, report.Reg_sharp, report.Z);
    return kExitOk;
}

int cmd_plot(const std::string& summary_path, const std::string& out_flag) {
    const auto j = nlohmann::json::parse(read_file(summary_path));
    mvcg::SvgSeries series;
    series.label = "mean welfare regret";
    for (const auto& agg : j.at("aggregates")) {
        const double t = agg.at("T").get<double>();
        const double reg = agg.at("mean_Reg_W").get<double>();
        if (reg > 0.0)
            series.points.emplace_back(t, reg);
    }
    if (series.points.size() < 2)
        throw std::runtime_error("summary has fewer than 2 positive regret points");
    std::string annotation = "log-log regret vs rounds";
    if (j.contains("slope")) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "fitted slope: %.4f", j["slope"].get<double>());
        annotation = buf;
    }
    const std::string svg =
        mvcg::svg_loglog_chart({series}, "rounds T", "cumulative welfare regret", annotation);
    const fs::path out = resolve_out_dir(out_flag);
    write_file(out / "regret_vs_T.svg", svg);
    std::printf("wrote %s\n", (out / "regret_vs_T.svg").string().c_str());
    return kExitOk;
}

bool json_close(const nlohmann::json& a, const nlohmann::json& b, double tol,
                std::string path, std::string* mismatch) {
    if (a.is_number() && b.is_number()) {
        const double da = a.get<double>(), db = b.get<double>();
        if (std::abs(da - db) > tol) {
            *mismatch = path + ": " + std::to_string(da) + " vs " + std::to_string(db);
            return false;
        }
        return true;
    }
    if (a.is_object() && b.is_object()) {
        if (a.size() != b.size()) {
            *mismatch = path + ": object size differs";
            return false;
        }
        for (const auto& [key, value] : a.items()) {
            if (!b.contains(key)) {
                *mismatch = path + "." + key + ": missing";
                return false;
            }
            if (!json_close(value, b[key], tol, path + "." + key, mismatch))
                return false;
        }
        return true;
    }
    if (a.is_array() && b.is_array()) {
        if (a.size() != b.size()) {
            *mismatch = path + ": array size differs";
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!json_close(a[i], b[i], tol, path + "[" + std::to_string(i) + "]", mismatch))
                return false;
        return true;
    }
    if (a != b) {
        *mismatch = path + ": " + a.dump() + " vs " + b.dump();
        return false;
    }
    return true;
}

int cmd_verify(const std::string& golden_flag) {
    fs::path dir = golden_flag.empty() ? fs::path("golden") : fs::path(golden_flag);
    if (!fs::is_directory(dir))
        throw std::runtime_error("golden directory not found: " + dir.string());

    int checked = 0;
    bool ok = true;
    std::vector<fs::path> specs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".spec")
            specs.push_back(entry.path());
    std::sort(specs.begin(), specs.end());

    for (const auto& spec_path : specs) {
        const auto kv = mvcg::KeyValues::parse_auto(read_file(spec_path.string()));
        const auto spec = mvcg::instance_spec_from(kv);
        const auto inst = mvcg::build_instance(spec);

        fs::path bench_path = spec_path;
        bench_path.replace_extension(".bench.json");
        if (fs::exists(bench_path)) {
            ++checked;
            const auto expected = nlohmann::json::parse(read_file(bench_path.string()));
            const auto actual =
                nlohmann::json::parse(mvcg::benchmark_json(mvcg::vcg_benchmark(inst)));
            std::string mismatch;
            if (json_close(expected, actual, 1e-9, spec_path.stem().string(), &mismatch)) {
                std::printf("ok   %s\n", bench_path.filename().string().c_str());
            } else {
                std::printf("FAIL %s (%s)\n", bench_path.filename().string().c_str(),
                            mismatch.c_str());
                ok = false;
            }
        }

        fs::path inst_path = spec_path;
        inst_path.replace_extension(".instance.json");
        if (fs::exists(inst_path)) {
            ++checked;
            if (read_file(inst_path.string()) == mvcg::instance_json(inst) + "\n") {
                std::printf("ok   %s\n", inst_path.filename().string().c_str());
            } else {
                std::printf("FAIL %s (instance dump drifted)\n",
                            inst_path.filename().string().c_str());
                ok = false;
            }
        }
    }
    if (checked == 0)
        throw std::runtime_error("no golden files found under " + dir.string());
    if (!ok)
        return kExitRuntime;
    std::printf("verified %d golden files\n", checked);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online VCG mechanism learning on finite linear MDPs"};
    app.require_subcommand(1);

    std::string config_path, out_dir, log_path, summary_path, golden_dir;
    std::string format = "csv";
    Overrides overrides;

    auto* run = app.add_subcommand("run", "run an experiment grid from a config file");
    run->add_option("--config", config_path, "experiment config (text or JSON)")->required();
    run->add_option("--out", out_dir, "output directory (default $MVCG_OUT or .)");
    run->add_option("--seeds", overrides.seeds, "override seed count");
    run->add_option("--T", overrides.t_grid, "override the T grid")->delimiter(',');
    run->add_option("--zeta1", overrides.zeta1, "etc|ewc")
        ->check(CLI::IsMember({"etc", "ewc"}));
    run->add_option("--zeta2", overrides.zeta2, "opt|pes")
        ->check(CLI::IsMember({"opt", "pes"}));
    run->add_option("--zeta3", overrides.zeta3, "opt|pes")
        ->check(CLI::IsMember({"opt", "pes"}));
    run->add_option("--beta-scale", overrides.beta_scale, "override the bonus scale");
    run->add_option("--threads", overrides.threads, "worker threads (0 = all cores)");
    run->add_option("--format", format, "series output format")
        ->check(CLI::IsMember({"csv", "json"}));
    bool save_logs = false;
    run->add_flag("--save-logs", save_logs, "write each cell's run log under <out>/logs");

    auto* bench = app.add_subcommand("bench", "print the exact mechanism benchmark");
    bench->add_option("--config", config_path, "instance spec")->required();

    auto* replay = app.add_subcommand("replay", "recompute regrets from a saved run log");
    replay->add_option("--log", log_path, "run log (JSON lines)")->required();
    replay->add_option("--out", out_dir, "output directory");
    replay->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* plot = app.add_subcommand("plot", "render the regret-vs-T chart as SVG");
    plot->add_option("--summary", summary_path, "summary.json from a run")->required();
    plot->add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "re-check golden instance/benchmark files");
    verify->add_option("--golden", golden_dir, "golden directory (default ./golden)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, out_dir, overrides, format, save_logs);
        if (bench->parsed())
            return cmd_bench(config_path);
        if (replay->parsed())
            return cmd_replay(log_path, out_dir, format);
        if (plot->parsed())
            return cmd_plot(summary_path, out_dir);
        if (verify->parsed())
            return cmd_verify(golden_dir);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
