#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bldcsim/csv.hpp"
#include "bldcsim/dataset.hpp"
#include "bldcsim/gradcheck.hpp"
#include "bldcsim/sim_engine.hpp"
#include "bldcsim/svg.hpp"
#include "bldcsim/train.hpp"

namespace fs = std::filesystem;
using namespace bldcsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoFailure("cannot create output directory: " + dir.string());
    }
}

SimConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::optional<std::uint64_t>& seed) {
    SimConfig cfg;
    if (config_path) {
        if (!fs::exists(*config_path)) {
            throw IoFailure("config not found: " + *config_path);
        }
        cfg = load_config(*config_path);
    } else {
        cfg = default_config();
    }
    if (seed) {
        cfg.seed = *seed;
    }
    return cfg;
}

int cmd_simulate(const std::optional<std::string>& config_path, const fs::path& out_dir,
                 const std::optional<std::uint64_t>& seed) {
    const SimConfig cfg = resolve_config(config_path, seed);
    ensure_out_dir(out_dir);
    const Trace trace = run_simulation(cfg);
    const fs::path trace_path = out_dir / "trace.csv";
    export_csv(trace, trace_path);
    const RunSummary summary = summarize(trace);
    const std::string text = summary_text(summary);
    {
        std::FILE* f = std::fopen((out_dir / "summary.txt").string().c_str(), "wb");
        if (!f) {
            throw IoFailure("cannot write summary file");
        }
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }
    std::printf("wrote %s (%zu rows)\n%s", trace_path.string().c_str(), trace.records.size(),
                text.c_str());
    return kExitOk;
}

TrainConfig make_train_config(const std::optional<int>& epochs, const std::optional<double>& lr,
                              const std::optional<std::uint64_t>& seed) {
    TrainConfig cfg;
    if (epochs) {
        cfg.epochs = *epochs;
    }
    if (lr) {
        cfg.learning_rate = *lr;
    }
    if (seed) {
        cfg.seed = *seed;
    }
    return cfg;
}

int cmd_train(int case_id, const fs::path& trace_path, const fs::path& out_dir,
              const TrainConfig& tcfg, bool softmax_output) {
    const Trace trace = import_csv(trace_path);
    CaseSetup setup = build_case(case_id, trace, tcfg.seed, softmax_output);
    Mlp model = make_mlp(setup.topology, tcfg.seed);
    TrainConfig cfg = tcfg;
    cfg.loss = setup.data.loss;

    const TrainResult result =
        train(std::move(model), setup.data.inputs, setup.data.targets, setup.data.partition,
              setup.data.accuracy, cfg);

    ensure_out_dir(out_dir);
    const std::string tag = "case" + std::to_string(case_id);
    export_metrics_csv(result.history, out_dir / ("metrics_" + tag + ".csv"));
    save_model(result.model, out_dir / ("model_" + tag + ".txt"));

    const EpochMetrics& last = result.history.back();
    std::printf("case %d: epochs %d  train_loss %.6g  val_loss %.6g  train_acc %.6g  "
                "val_acc %.6g  mse %.6g  mae %.6g\n",
                case_id, last.epoch, last.train_loss, last.val_loss, last.train_accuracy,
                last.val_accuracy, last.mse, last.mae);
    return kExitOk;
}

int cmd_predict(int case_id, const fs::path& trace_path, const fs::path& model_path,
                const fs::path& out_dir, const std::optional<std::uint64_t>& seed) {
    const Trace trace = import_csv(trace_path);
    const CaseSetup setup = build_case(case_id, trace, seed.value_or(1));
    const Mlp model = load_model(model_path);
    const auto predictions = predict_case(model, setup.data);
    ensure_out_dir(out_dir);
    const fs::path out_path = out_dir / ("predictions_case" + std::to_string(case_id) + ".csv");
    export_predictions_csv(trace, setup.data, predictions, out_path);
    std::printf("wrote %s (%zu rows)\n", out_path.string().c_str(), predictions.size());
    return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed) {
    const GradCheckReport report = run_gradient_audit(seed);
    std::printf("%s", report.detail.c_str());
    std::printf("checked %d parameters, max relative error %.3e (threshold 1e-06)\n",
                report.parameters_checked, report.max_rel_error);
    if (!report.passed) {
        std::fprintf(stderr, "gradient audit FAILED\n");
        return kExitNumerical;
    }
    std::printf("gradient audit passed\n");
    return kExitOk;
}

void figures_from_trace(const fs::path& trace_path, const fs::path& out_dir) {
    const Trace trace = import_csv(trace_path);
    const auto t = trace_column(trace, "t");
    auto chart = [&](const std::string& file, const std::string& title, const std::string& ylab,
                     const std::vector<std::pair<std::string, std::string>>& cols,
                     double spread = 0.0) {
        std::vector<Series> series;
        double offset = 0.0;
        for (const auto& [label, column] : cols) {
            Series s{label, t, trace_column(trace, column)};
            for (double& v : s.y) {
                v += offset;
            }
            series.push_back(std::move(s));
            offset += spread;
        }
        write_line_chart(out_dir / file, title, "time (s)", ylab, series);
    };

    chart("fig_load_torque.svg", "Load torque", "torque (Nm)", {{"load", "load_torque"}});
    chart("fig_speed_rpm.svg", "Reference and actual rotor speed", "speed (rpm)",
          {{"reference", "speed_ref"}, {"actual", "speed_actual"}});
    chart("fig_speed_rad.svg", "Rotor speed", "speed (rad/s)", {{"speed", "speed_rad"}});
    chart("fig_te.svg", "Electromagnetic torque", "torque (Nm)", {{"Te", "te"}});
    chart("fig_currents.svg", "Stator currents", "current (A)",
          {{"ia", "ia"}, {"ib", "ib"}, {"ic", "ic"}});
    chart("fig_emf_volts.svg", "Stator back EMF", "EMF (V)",
          {{"ea", "ea"}, {"eb", "eb"}, {"ec", "ec"}});
    chart("fig_emf_norm.svg", "Normalized EMF", "level (offset per phase)",
          {{"emf a", "emf_norm_a"}, {"emf b", "emf_norm_b"}, {"emf c", "emf_norm_c"}}, 2.5);
    chart("fig_hall.svg", "Hall signals", "level (offset per signal)",
          {{"hall a", "hall_a"}, {"hall b", "hall_b"}, {"hall c", "hall_c"}}, 1.5);
    chart("fig_pwm.svg", "PWM signals", "level (offset per signal)",
          {{"pwm a", "pwm_a"}, {"pwm b", "pwm_b"}, {"pwm c", "pwm_c"},
           {"pwm d", "pwm_d"}, {"pwm e", "pwm_e"}, {"pwm f", "pwm_f"}}, 1.5);
    chart("fig_duty.svg", "PWM duty command", "duty", {{"duty", "duty"}});
}

void figures_from_metrics(const fs::path& metrics_path, const fs::path& out_dir) {
    const auto history = import_metrics_csv(metrics_path);
    std::vector<double> epoch, train_loss, val_loss, train_acc, val_acc, mae;
    for (const auto& m : history) {
        epoch.push_back(m.epoch);
        train_loss.push_back(m.train_loss);
        val_loss.push_back(m.val_loss);
        train_acc.push_back(m.train_accuracy);
        val_acc.push_back(m.val_accuracy);
        mae.push_back(m.mae);
    }
    const std::string stem = metrics_path.stem().string();
    write_line_chart(out_dir / (stem + "_accuracy.svg"), "Model accuracy", "epoch", "accuracy",
                     {{"train", epoch, train_acc}, {"validation", epoch, val_acc}});
    write_line_chart(out_dir / (stem + "_loss.svg"), "Model loss", "epoch", "loss",
                     {{"train", epoch, train_loss}, {"validation", epoch, val_loss}});
    write_line_chart(out_dir / (stem + "_mae.svg"), "Mean absolute error", "epoch", "MAE",
                     {{"validation", epoch, mae}});
}

int cmd_figures(const std::optional<std::string>& trace_path,
                const std::vector<std::string>& metrics_paths, const fs::path& out_dir) {
    ensure_out_dir(out_dir);
    if (trace_path) {
        figures_from_trace(*trace_path, out_dir);
    }
    for (const auto& m : metrics_paths) {
        figures_from_metrics(m, out_dir);
    }
    std::printf("wrote figures to %s\n", out_dir.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BLDC drive simulator with a from-scratch MLP trained on its own traces"};
    app.require_subcommand(1);
    app.footer("Config file keys (all optional, `key = value` lines):\n" + config_key_reference());

    std::optional<std::string> config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int case_id = 1;
    std::string trace_path;
    std::string model_path;
    std::optional<int> epochs;
    std::optional<double> lr;
    bool softmax_output = false;
    std::vector<std::string> metrics_paths;
    std::optional<std::string> figures_trace;

    auto* simulate = app.add_subcommand("simulate", "Run the closed-loop simulation, write trace.csv and summary.txt");
    simulate->add_option("--config", config_path, "Config file path (defaults built in)");
    simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
    simulate->add_option("--seed", seed, "Seed recorded with the run");

    auto* train_cmd = app.add_subcommand("train", "Build a case dataset from a trace and train the network");
    train_cmd->add_option("--case", case_id, "Prediction case id")->required()->check(CLI::Range(1, 4));
    train_cmd->add_option("--trace", trace_path, "Trace CSV path")->required();
    train_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    train_cmd->add_option("--epochs", epochs, "Epoch count (default 100)");
    train_cmd->add_option("--lr", lr, "Learning rate (default 0.05)");
    train_cmd->add_option("--seed", seed, "Seed for split, init and shuffling (default 1)");
    train_cmd->add_flag("--softmax", softmax_output, "Softmax output layer for cases 1-2");

    auto* predict = app.add_subcommand("predict", "Run a trained model over a trace, write prediction-vs-target CSV");
    predict->add_option("--case", case_id, "Prediction case id")->required()->check(CLI::Range(1, 4));
    predict->add_option("--trace", trace_path, "Trace CSV path")->required();
    predict->add_option("--model", model_path, "Model file path")->required();
    predict->add_option("--out", out_dir, "Output directory")->capture_default_str();
    predict->add_option("--seed", seed, "Seed for the dataset split tag (default 1)");

    auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference audit of the backpropagation gradients");
    gradcheck->add_option("--seed", seed, "Seed for the random networks (default 1)");

    auto* figures = app.add_subcommand("figures", "Render SVG charts from trace and metrics CSVs");
    figures->add_option("--trace", figures_trace, "Trace CSV to chart");
    figures->add_option("--metrics", metrics_paths, "Metrics CSV to chart (repeatable)");
    figures->add_option("--out", out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path, out_dir, seed);
        }
        if (train_cmd->parsed()) {
            return cmd_train(case_id, trace_path, out_dir, make_train_config(epochs, lr, seed),
                             softmax_output);
        }
        if (predict->parsed()) {
            return cmd_predict(case_id, trace_path, model_path, out_dir, seed);
        }
        if (gradcheck->parsed()) {
            return cmd_gradcheck(seed.value_or(1));
        }
        if (figures->parsed()) {
            if (!figures_trace && metrics_paths.empty()) {
                std::fprintf(stderr, "figures: need --trace and/or --metrics\n");
                return kExitUsage;
            }
            return cmd_figures(figures_trace, metrics_paths, out_dir);
        }
    } catch (const NumericalDivergence& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const NonFiniteLoss& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
