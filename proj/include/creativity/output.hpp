#pragma once

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "creativity/cin.hpp"
#include "creativity/experiments.hpp"
#include "creativity/graph.hpp"
#include "creativity/model.hpp"
#include "creativity/pipeline.hpp"

namespace creativity {

/// Shortest-faithful text for a double (17 significant digits).
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Manifest CSV for a corpus, with only the label columns that are in use.
inline std::string manifest_csv(const Corpus& corpus) {
    bool artist = false, style = false, genre = false;
    for (const auto& a : corpus.artifacts()) {
        artist = artist || !a.artist.empty();
        style = style || !a.style.empty();
        genre = genre || !a.genre.empty();
    }
    std::string out = "id,year";
    if (artist) out += ",artist";
    if (style) out += ",style";
    if (genre) out += ",genre";
    out += '\n';
    for (const auto& a : corpus.artifacts()) {
        out += csv_field(a.id) + ',' + std::to_string(a.year);
        if (artist) out += ',' + csv_field(a.artist);
        if (style) out += ',' + csv_field(a.style);
        if (genre) out += ',' + csv_field(a.genre);
        out += '\n';
    }
    return out;
}

/// 1-based ranks: highest score first, ties broken by id.
inline std::vector<std::size_t> score_ranks(const Corpus& corpus, const ScoreVector& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return corpus.artifact(a).id < corpus.artifact(b).id;
    });
    std::vector<std::size_t> rank(scores.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
    return rank;
}

/// `id,year,aspect,score,rank`, one block of rows per aspect.
inline std::string scores_csv(const Corpus& corpus, const std::vector<AspectRun>& runs) {
    std::string out = "id,year,aspect,score,rank\n";
    for (const auto& run : runs) {
        const auto rank = score_ranks(corpus, run.scores);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& a = corpus.artifact(i);
            out += csv_field(a.id) + ',' + std::to_string(a.year) + ',' + csv_field(run.aspect) + ',' +
                   format_real(run.scores[i]) + ',' + std::to_string(rank[i]) + '\n';
        }
    }
    return out;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["K"] = cfg.K;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["percentile_p"] = cfg.percentile_p;
    j["sigma"] = cfg.sigma ? nlohmann::ordered_json(*cfg.sigma) : nlohmann::ordered_json("auto");
    for (const auto& [aspect, s] : cfg.sigma_per_aspect) j["sigma." + aspect] = s;
    j["balancing_mode"] = to_string(cfg.balancing_mode);
    j["balance_node"] = to_string(cfg.balance_node);
    j["local_window_years"] = cfg.local_window_years;
    j["min_local_sample"] = cfg.min_local_sample;
    j["temporal_prior"] = to_string(cfg.temporal_prior);
    j["temporal_window_k"] = cfg.temporal_window_k;
    j["solver"] = to_string(cfg.solver);
    j["scoring"] = to_string(cfg.scoring);
    j["tol"] = cfg.tol;
    j["max_iters"] = cfg.max_iters;
    j["seed"] = cfg.seed;
    return j;
}

inline std::string run_meta_json(const Corpus& corpus, const RunConfig& cfg, const std::vector<AspectRun>& runs) {
    nlohmann::ordered_json meta;
    meta["artifacts"] = corpus.size();
    meta["config"] = config_json(cfg);
    auto& aspects = meta["aspects"] = nlohmann::ordered_json::array();
    for (const auto& run : runs) {
        nlohmann::ordered_json a;
        a["aspect"] = run.aspect;
        a["sigma"] = run.sigma;
        a["graph"] = {{"nodes", run.stats.nodes},
                      {"edges", run.stats.edges},
                      {"cin_edges", run.stats.cin_edges},
                      {"kept", run.stats.balance.kept},
                      {"reversed", run.stats.balance.reversed},
                      {"dropped", run.stats.balance.dropped},
                      {"reversed_fraction", run.stats.reversed_fraction},
                      {"dangling", run.stats.dangling},
                      {"dangling_prior", run.stats.dangling_prior},
                      {"dangling_subsequent", run.stats.dangling_subsequent}};
        const auto& m = run.scores.meta;
        a["solver"] = {{"solver", m.solver},
                       {"iterations", m.iterations},
                       {"residual", m.residual},
                       {"converged", m.converged},
                       {"worst_sum_error", m.worst_sum_error},
                       {"min_floor_slack", m.min_floor_slack}};
        aspects.push_back(std::move(a));
    }
    return meta.dump(2) + "\n";
}

inline std::string graph_csv(const Corpus& corpus, const PaintingGraph& graph) {
    std::string out = "src_id,dst_id,weight\n";
    graph.for_each_edge([&](NodeIndex s, NodeIndex d, double w) {
        out += csv_field(corpus.artifact(s).id) + ',' + csv_field(corpus.artifact(d).id) + ',' + format_real(w) + '\n';
    });
    return out;
}

inline std::string cin_csv(const Corpus& corpus, const ImplicationNetwork& cin) {
    std::string out = "src_id,dst_id,weight,label\n";
    for (const auto& e : cin.edges()) {
        out += csv_field(corpus.artifact(e.src).id) + ',' + csv_field(corpus.artifact(e.dst).id) + ',' +
               format_real(e.weight) + ',' + std::string(to_string(e.label)) + '\n';
    }
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Scatter of year (x) against min-max scaled score (y), one circle per artifact.
inline std::string score_plot_svg(std::span<const Year> years, const ScoreVector& scores, const std::string& title) {
    constexpr double width = 800, height = 500, left = 70, right = 20, top = 40, bottom = 50;
    const auto [ymin_it, ymax_it] = std::minmax_element(years.begin(), years.end());
    double x0 = years.empty() ? 0 : *ymin_it, x1 = years.empty() ? 1 : *ymax_it;
    if (x0 == x1) {
        x0 -= 1;
        x1 += 1;
    }
    const auto [smin_it, smax_it] = std::minmax_element(scores.scores.begin(), scores.scores.end());
    const double s0 = scores.scores.empty() ? 0 : *smin_it, s1 = scores.scores.empty() ? 1 : *smax_it;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    svg += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           xml_escape(title) + "</text>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
           num(top + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(top + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<text class=\"x-min\" x=\"" + num(left) + "\" y=\"" + num(height - 28) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + std::to_string(int(x0)) +
           "</text>\n";
    svg += "<text class=\"x-max\" x=\"" + num(left + plot_w) + "\" y=\"" + num(height - 28) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + std::to_string(int(x1)) +
           "</text>\n";
    svg += "<text x=\"400\" y=\"" + num(height - 8) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">year</text>\n";
    svg += "<text x=\"18\" y=\"" + num(top + plot_h / 2) + "\" transform=\"rotate(-90 18 " + num(top + plot_h / 2) +
           ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">scaled creativity score</text>\n";
    svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(top + plot_h) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n";
    svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(top + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1</text>\n";
    svg += "<g fill=\"steelblue\" fill-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double scaled = s1 > s0 ? (scores[i] - s0) / (s1 - s0) : 0.0;
        const double cx = left + (years[i] - x0) / (x1 - x0) * plot_w;
        const double cy = top + (1.0 - scaled) * plot_h;
        svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"3\"/>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

/// One row per group x move, laid out like a time-machine results table.
inline std::string time_machine_report_csv(const TimeMachineReport& r) {
    std::string out = "group,move,mean_gain,std_gain,pct_increase,std_pct\n";
    out += csv_field(r.group) + ',' + std::string(to_string(r.move)) + ',' + format_real(r.mean_gain) + ',' +
           format_real(r.std_gain) + ',' + format_real(r.pct_increase) + ',' + format_real(r.std_pct) + '\n';
    return out;
}

inline std::string time_machine_runs_csv(const Corpus& corpus, const TimeMachineReport& r) {
    std::string out = "run,id,original_year,new_year,base_score,new_score,gain_pct,run_mean_gain,run_pct_increase\n";
    for (const auto& run : r.runs) {
        for (const auto& t : run.trials) {
            out += std::to_string(run.run) + ',' + csv_field(corpus.artifact(t.node).id) + ',' +
                   std::to_string(t.original_year) + ',' + std::to_string(t.new_year) + ',' +
                   format_real(t.base_score) + ',' + format_real(t.new_score) + ',' + format_real(t.gain_pct) + ',' +
                   format_real(run.mean_gain) + ',' + format_real(run.pct_increase) + '\n';
        }
    }
    return out;
}

}  // namespace creativity
