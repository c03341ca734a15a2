#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "creativity/cin.hpp"
#include "creativity/error.hpp"
#include "creativity/experiments.hpp"
#include "creativity/graph.hpp"
#include "creativity/io.hpp"
#include "creativity/model.hpp"
#include "creativity/output.hpp"
#include "creativity/pipeline.hpp"

namespace creativity::cli {

enum ExitCode : int { kOk = 0, kIo = 1, kValidation = 2, kNumerical = 3 };

struct Inputs {
    std::string config_path;
    std::string manifest;
    std::vector<std::string> features;
    std::vector<std::string> settings;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::vector<AspectSource> parse_feature_args(const std::vector<std::string>& args) {
    std::vector<AspectSource> out;
    for (const auto& a : args) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == a.size())
            throw ValidationError("--features expects ASPECT=PATH (got '" + a + "')");
        out.push_back({a.substr(0, eq), a.substr(eq + 1)});
    }
    if (out.empty()) throw ValidationError("at least one --features ASPECT=PATH is required");
    return out;
}

inline RunConfig load_config(const Inputs& in) {
    RunConfig cfg;
    if (!in.config_path.empty()) cfg = read_run_config(in.config_path);
    for (const auto& s : in.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value (got '" + s + "')");
        apply_setting(cfg, io::trim(std::string_view(s).substr(0, eq)), io::trim(std::string_view(s).substr(eq + 1)));
    }
    if (in.seed) cfg.seed = *in.seed;
    cfg.validate();
    return cfg;
}

inline Corpus load_corpus(const Inputs& in) {
    return ingest_corpus(in.manifest, parse_feature_args(in.features));
}

inline std::filesystem::path prepare_out(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

inline void add_inputs(CLI::App& cmd, Inputs& in, bool with_config, bool with_out) {
    if (with_config) cmd.add_option("--config", in.config_path, "Run configuration file (key = value)");
    cmd.add_option("--manifest", in.manifest, "Manifest CSV (id,year[,artist][,style][,genre])")->required();
    cmd.add_option("--features", in.features, "Feature file per aspect, ASPECT=PATH (repeatable)")->required();
    if (with_out) cmd.add_option("--out", in.out_dir, "Output directory")->required();
    if (with_config) {
        cmd.add_option("--set", in.settings, "Override a config key, key=value (repeatable)");
        cmd.add_option("--seed", in.seed, "RNG seed");
    }
}

}  // namespace detail

inline int cmd_validate(const Inputs& in, std::ostream& out) {
    const auto corpus = detail::load_corpus(in);
    out << corpus.size() << " artifacts, " << corpus.aspects().size()
        << (corpus.aspects().size() == 1 ? " aspect" : " aspects");
    if (corpus.aspects().size() == 1) {
        out << ", dim " << corpus.aspects().front().dim();
    } else {
        out << ", dims";
        for (const auto& fs : corpus.aspects()) out << ' ' << fs.aspect() << '=' << fs.dim();
    }
    out << '\n';
    return kOk;
}

inline int cmd_score(const Inputs& in, bool plot, std::ostream& out, std::ostream& err) {
    const auto cfg = detail::load_config(in);
    const auto corpus = detail::load_corpus(in);
    const auto dir = detail::prepare_out(in.out_dir);
    const auto runs = run_multi_aspect(corpus, cfg);

    io::write_file(dir / "scores.csv", scores_csv(corpus, runs));
    io::write_file(dir / "run_meta.json", run_meta_json(corpus, cfg, runs));
    if (plot) {
        for (const auto& run : runs) {
            const auto name = runs.size() == 1 ? std::string("plot.svg") : "plot_" + run.aspect + ".svg";
            io::write_file(dir / name, score_plot_svg(corpus.years(), run.scores, "creativity: " + run.aspect));
        }
    }
    bool converged = true;
    for (const auto& run : runs) {
        out << run.aspect << ": " << run.stats.edges << " edges, " << run.stats.balance.reversed << " reversed, "
            << run.scores.meta.iterations << " iterations\n";
        if (!run.scores.meta.converged) {
            err << "error: solver did not converge for aspect '" << run.aspect << "' (residual "
                << run.scores.meta.residual << " after " << run.scores.meta.iterations << " iterations)\n";
            converged = false;
        }
    }
    return converged ? kOk : kNumerical;
}

inline int cmd_timemachine(const Inputs& in, const std::string& spec_path, std::ostream& out, std::ostream& err) {
    const auto cfg = detail::load_config(in);
    auto spec = parse_time_machine_spec(io::read_file(spec_path), spec_path);
    if (in.seed) spec.seed = *in.seed;
    const auto corpus = detail::load_corpus(in);
    const auto dir = detail::prepare_out(in.out_dir);
    const auto report = run_time_machine(corpus, cfg, spec);
    for (const auto& note : report.notices) err << note << '\n';
    io::write_file(dir / "report.csv", time_machine_report_csv(report));
    io::write_file(dir / "runs.csv", time_machine_runs_csv(corpus, report));
    out << report.group << " " << to_string(report.move) << ": mean gain " << report.mean_gain << "% +/- "
        << report.std_gain << ", increased " << report.pct_increase << "% +/- " << report.std_pct << '\n';
    if (!report.converged) {
        err << "error: solver did not converge in at least one run\n";
        return kNumerical;
    }
    return kOk;
}

inline int cmd_dump_graph(const Inputs& in, const std::string& aspect_name, std::ostream& out) {
    const auto cfg = detail::load_config(in);
    const auto corpus = detail::load_corpus(in);
    const auto dir = detail::prepare_out(in.out_dir);
    const auto& features = aspect_name.empty() ? corpus.aspects().front() : corpus.aspect(aspect_name);
    const double sigma = resolve_sigma(features, cfg);
    const auto graph = build_graph(corpus.years(), features, similarity_params(sigma, cfg), cfg.K);
    io::write_file(dir / ("graph_" + features.aspect() + ".csv"), graph_csv(corpus, graph));
    std::size_t cin_edges = 0;
    if (graph.edge_count() > 0) {
        const auto m = compute_threshold(graph, BalanceSpec::from(cfg), corpus.years());
        const auto cin = build_implication_network(graph, m, corpus.years(), cfg.balance_node);
        cin_edges = cin.edge_count();
        io::write_file(dir / ("cin_" + features.aspect() + ".csv"), cin_csv(corpus, cin));
    } else {
        io::write_file(dir / ("cin_" + features.aspect() + ".csv"), "src_id,dst_id,weight,label\n");
    }
    out << features.aspect() << ": " << graph.edge_count() << " graph edges, " << cin_edges << " CIN edges\n";
    return kOk;
}

/// Entry point shared by the executable and the tests. Never throws.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Creativity scoring over dated artifact collections"};
    app.require_subcommand(1);

    Inputs validate_in, score_in, tm_in, dump_in;
    bool plot = false;
    std::string spec_path, dump_aspect;

    auto* validate = app.add_subcommand("validate", "Check a manifest and its feature files");
    detail::add_inputs(*validate, validate_in, false, false);

    auto* score = app.add_subcommand("score", "Compute creativity scores for every aspect");
    detail::add_inputs(*score, score_in, true, true);
    score->add_flag("--plot", plot, "Also write an SVG score-vs-year scatter");

    auto* tm = app.add_subcommand("timemachine", "Run the re-dating validation experiment");
    detail::add_inputs(*tm, tm_in, true, true);
    tm->add_option("--spec", spec_path, "Experiment specification file (key = value)")->required();

    auto* dump = app.add_subcommand("dump-graph", "Write the similarity graph and implication network as CSV");
    detail::add_inputs(*dump, dump_in, true, true);
    dump->add_option("--aspect", dump_aspect, "Aspect to dump (default: first)");

    std::vector<const char*> argv;
    argv.push_back("creativity");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kValidation;
    }

    try {
        if (*validate) return cmd_validate(validate_in, out);
        if (*score) return cmd_score(score_in, plot, out, err);
        if (*tm) return cmd_timemachine(tm_in, spec_path, out, err);
        if (*dump) return cmd_dump_graph(dump_in, dump_aspect, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::bad_alloc&) {
        err << "out of memory\n";
        return kNumerical;
    }
    return kValidation;
}

}  // namespace creativity::cli
