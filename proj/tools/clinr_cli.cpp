// Copyright 2026 The CliNR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "clinr/all.hpp"

using namespace clinr;

namespace {

/// Flags shared by run / sweep / grid; each one overrides the config file.
struct Overrides {
    std::string config_path;
    std::string mode, source, path, strategy, noise_mode, layout, idle_scope, output;
    size_t n = 0, t = 0, r = 0, threads = 0;
    uint64_t shots = 0, seed = 0;
    double p = 0, p2 = 0, alpha = 0, budget = 0, p_idle = 0;
    bool desk = false;
    CLI::App *app = nullptr;

    void attach(CLI::App *sub) {
        app = sub;
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--mode", mode, "direct | clinr | cznr");
        sub->add_option("--source", source, "file | random-clifford | random-sequence | dense-cz");
        sub->add_option("--circuit", path, "circuit or graph edge-list file (implies --source file)");
        sub->add_option("--n", n, "circuit width")->check(CLI::PositiveNumber);
        sub->add_option("--alpha", alpha, "shape parameter, s = round(n^alpha)");
        sub->add_option("--shots", shots, "shots per mode")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--noise", noise_mode, "uniform | realistic | custom");
        sub->add_option("--p", p, "uniform fault rate");
        sub->add_option("--p2", p2, "two-qubit fault rate (realistic mode)");
        sub->add_option("--p-idle", p_idle, "idle fault rate per layer");
        sub->add_option("--t", t, "sub-circuit count")->check(CLI::PositiveNumber);
        sub->add_option("--r", r, "checks per sub-circuit");
        sub->add_option("--strategy", strategy, "uniform | bell");
        sub->add_option("--budget", budget, "gate-overhead budget for choosing t");
        sub->add_option("--layout", layout, "split | sequential");
        sub->add_option("--idle-scope", idle_scope, "segment | register");
        sub->add_option("-o,--output", output, "CSV output path");
        sub->add_option("--threads", threads, "worker threads (0 = auto)");
        sub->add_flag("--desk", desk, "desk profile: 1e4 shots, n <= 15");
    }

    bool given(const std::string &name) const {
        return app->count(name) > 0;
    }

    ExperimentConfig build() const {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (given("--mode")) {
            cfg.mode = parse_mode(mode);
        }
        if (given("--source")) {
            cfg.circuit.kind = parse_circuit_kind(source);
        }
        if (given("--circuit")) {
            cfg.circuit.kind = CircuitKind::File;
            cfg.circuit.path = path;
        }
        if (given("--n")) {
            cfg.circuit.n = n;
        }
        if (given("--alpha")) {
            cfg.circuit.alpha = alpha;
        }
        if (given("--shots")) {
            cfg.shots = shots;
        }
        if (given("--seed")) {
            cfg.seed = seed;
        }
        if (given("--noise")) {
            cfg.noise.mode = parse_noise_mode(noise_mode);
        }
        if (given("--p")) {
            cfg.noise.rate = p;
        }
        if (given("--p2")) {
            if (cfg.noise.mode == NoiseMode::Realistic) {
                cfg.noise.rate = p2;
            } else {
                cfg.noise.p2 = p2;
            }
        }
        if (given("--p-idle")) {
            cfg.noise.p_idle = p_idle;
        }
        if (given("--t")) {
            cfg.protocol.t = t;
        }
        if (given("--r")) {
            cfg.protocol.r = r;
        }
        if (given("--strategy")) {
            cfg.protocol.strategy = parse_strategy(strategy);
        }
        if (given("--budget")) {
            cfg.protocol.budget = budget;
        }
        if (given("--layout")) {
            cfg.protocol.layout = parse_layout(layout);
        }
        if (given("--idle-scope")) {
            cfg.protocol.idle_scope = parse_idle_scope(idle_scope);
        }
        if (given("--output")) {
            cfg.output = output;
        }
        if (given("--threads")) {
            cfg.threads = threads;
        }
        if (desk) {
            apply_desk_profile(cfg);
        }
        cfg.validate();
        return cfg;
    }
};

/// CSV sink: stdout, or `path` (header written once, rows appended when
/// `append` and the file already has content).
class CsvSink {
   public:
    CsvSink(const std::string &path, std::string_view header, bool append) {
        if (path.empty()) {
            out_ = &std::cout;
            *out_ << header << '\n';
            return;
        }
        bool has_content = append && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
        file_ = std::make_unique<std::ofstream>(path, append ? std::ios::app : std::ios::trunc);
        if (!*file_) {
            throw std::runtime_error("cannot open output file '" + path + "'");
        }
        out_ = file_.get();
        if (!has_content) {
            *out_ << header << '\n';
        }
    }

    void write(const std::string &line) {
        *out_ << line << '\n';
        out_->flush();
    }

   private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream *out_ = nullptr;
};

void warn_aborts(const ResultRow &row) {
    if (row.aborts > 0) {
        std::cerr << "warning: " << row.aborts << " aborted shot(s) in mode " << row.mode << " (n=" << row.n
                  << "); raise protocol.max_restarts\n";
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Clifford noise reduction simulator"};
    app.require_subcommand(1);

    // sample
    size_t sample_n = 0;
    uint64_t sample_seed = 1;
    std::string sample_kind = "random-clifford", sample_out;
    size_t sample_s = 0;
    double sample_alpha = 0;
    auto *sample = app.add_subcommand("sample", "write a random circuit");
    sample->add_option("--n", sample_n, "width")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "rng seed");
    sample->add_option("--source", sample_kind, "random-clifford | random-sequence | dense-cz");
    sample->add_option("--s", sample_s, "gate count (sequence kinds)");
    sample->add_option("--alpha", sample_alpha, "shape parameter (sequence kinds)");
    sample->add_option("-o,--output", sample_out, "output file (stdout when absent)");

    // run / sweep / grid
    Overrides run_flags, sweep_flags, grid_flags;
    auto *run = app.add_subcommand("run", "simulate one configuration, append one CSV row");
    run_flags.attach(run);
    auto *sweep = app.add_subcommand("sweep", "direct vs protocol over the n and p2 axes");
    sweep_flags.attach(sweep);
    auto *grid = app.add_subcommand("grid", "Delta p_log over the n and alpha axes");
    grid_flags.attach(grid);

    // bounds
    std::string bounds_protocol = "clinr";
    size_t bn = 0, bs = 0, bt = 1, br = 0;
    double bp = 0;
    auto *bounds = app.add_subcommand("bounds", "analytic bounds as JSON");
    bounds->add_option("--protocol", bounds_protocol, "clinr | lemma1 | cznr");
    bounds->add_option("--n", bn, "width")->required()->check(CLI::PositiveNumber);
    bounds->add_option("--s", bs, "circuit size")->required()->check(CLI::PositiveNumber);
    bounds->add_option("--t", bt, "sub-circuit count")->check(CLI::PositiveNumber);
    bounds->add_option("--r", br, "checks per sub-circuit");
    bounds->add_option("--p", bp, "fault rate")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) {
            std::optional<size_t> s;
            std::optional<double> alpha;
            if (sample->count("--s") > 0) {
                s = sample_s;
            }
            if (sample->count("--alpha") > 0) {
                alpha = sample_alpha;
            }
            Circuit c = make_circuit(parse_circuit_kind(sample_kind), sample_n, alpha, s, sample_seed);
            std::string text = serialize_circuit(c);
            if (sample_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(sample_out, std::ios::trunc);
                if (!out) {
                    throw std::runtime_error("cannot open output file '" + sample_out + "'");
                }
                out << text;
            }
            std::cerr << "s=" << c.size() << '\n';
            return 0;
        }
        if (run->parsed()) {
            ExperimentConfig cfg = run_flags.build();
            if (cfg.mode == Mode::Bounds) {
                std::cout << bound_to_json(cmd_bounds(cfg)).dump(2) << '\n';
                return 0;
            }
            ResultRow row = cmd_run(cfg);
            CsvSink sink(cfg.output, kSweepHeader, true);
            sink.write(to_csv(row));
            warn_aborts(row);
            return 0;
        }
        if (sweep->parsed()) {
            ExperimentConfig cfg = sweep_flags.build();
            CsvSink sink(cfg.output, kSweepHeader, false);
            cmd_sweep(cfg, [&](const ResultRow &row) {
                sink.write(to_csv(row));
                warn_aborts(row);
            });
            return 0;
        }
        if (grid->parsed()) {
            ExperimentConfig cfg = grid_flags.build();
            CsvSink sink(cfg.output, kGridHeader, false);
            cmd_grid(cfg, [&](const GridRow &row) { sink.write(to_csv(row)); });
            return 0;
        }
        if (bounds->parsed()) {
            BoundReport b;
            if (bounds_protocol == "clinr") {
                b = clinr_bound(bn, bs, bt, br, bp);
            } else if (bounds_protocol == "lemma1") {
                b = lemma1_bound(bn, bs, br, bp);
            } else if (bounds_protocol == "cznr") {
                b = cznr_bound(bn, bs, bt, br, bp);
            } else {
                throw ConfigError("--protocol: expected clinr, lemma1 or cznr");
            }
            std::cout << bound_to_json(b).dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
