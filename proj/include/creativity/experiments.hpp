#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "creativity/error.hpp"
#include "creativity/io.hpp"
#include "creativity/model.hpp"
#include "creativity/parallel.hpp"
#include "creativity/pipeline.hpp"

namespace creativity {

enum class Move { back, forward, wander };

inline std::string_view to_string(Move m) {
    switch (m) {
        case Move::back: return "back";
        case Move::forward: return "forward";
        default: return "wander";
    }
}

/// Which artifacts a time-machine experiment may re-date.
struct GroupSelector {
    enum class Field { style, artist, genre, ids };
    Field field = Field::style;
    std::string value;             // label value for style/artist/genre
    std::vector<std::string> ids;  // for Field::ids

    /// Parses "style:NAME", "artist:NAME", "genre:NAME" or "ids:a,b,c".
    static GroupSelector parse(std::string_view text) {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos)
            throw ConfigError("group selector must look like style:NAME or ids:a,b,c (got '" +
                              std::string(text) + "')");
        const auto kind = io::trim(text.substr(0, colon));
        const auto rest = io::trim(text.substr(colon + 1));
        GroupSelector sel;
        if (kind == "style") sel.field = Field::style;
        else if (kind == "artist") sel.field = Field::artist;
        else if (kind == "genre") sel.field = Field::genre;
        else if (kind == "ids") sel.field = Field::ids;
        else throw ConfigError("unknown group selector kind '" + kind + "'");
        if (rest.empty()) throw ConfigError("group selector has an empty value");
        if (sel.field == Field::ids) {
            std::size_t pos = 0;
            while (pos <= rest.size()) {
                auto comma = rest.find(',', pos);
                if (comma == std::string::npos) comma = rest.size();
                auto id = io::trim(std::string_view(rest).substr(pos, comma - pos));
                if (!id.empty()) sel.ids.push_back(std::move(id));
                pos = comma + 1;
            }
        } else {
            sel.value = rest;
        }
        return sel;
    }

    std::string name() const {
        if (field == Field::ids) return "ids(" + std::to_string(ids.size()) + ")";
        return value;
    }

    std::vector<NodeIndex> members(const Corpus& corpus) const {
        std::vector<NodeIndex> out;
        if (field == Field::ids) {
            for (const auto& id : ids) {
                auto idx = corpus.index_of(id);
                if (!idx) throw ValidationError("group selector: unknown id '" + id + "'");
                out.push_back(*idx);
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& a = corpus.artifact(i);
            const auto& label = field == Field::style ? a.style : field == Field::artist ? a.artist : a.genre;
            if (label == value) out.push_back(static_cast<NodeIndex>(i));
        }
        return out;
    }
};

struct TimeMachineSpec {
    GroupSelector group;
    std::string aspect;  // empty: the corpus's first aspect
    Move move = Move::back;
    /// Centre of the new-date distribution. For `wander` it may be omitted, in
    /// which case each artifact's new date is drawn around its own year.
    std::optional<int> move_mean;
    double move_std = 50.0;
    std::size_t n_test = 10;
    std::size_t n_runs = 10;
    std::uint64_t seed = 0;
    std::optional<int> min_year;
    std::optional<int> max_year;

    void validate() const {
        if (n_test == 0) throw ConfigError("n_test must be positive");
        if (n_runs == 0) throw ConfigError("n_runs must be positive");
        if (!(move_std > 0.0 && std::isfinite(move_std))) throw ConfigError("move_std must be positive");
        if (move != Move::wander && !move_mean) throw ConfigError("move_mean is required for back/forward moves");
        if (min_year && max_year && *min_year > *max_year) throw ConfigError("min_year exceeds max_year");
    }
};

inline void apply_setting(TimeMachineSpec& spec, std::string_view key, std::string_view value) {
    using namespace detail;
    auto as_int = [&](std::string_view v) {
        long long out = 0;
        if (!io::parse_int(v, out) || out < -100000 || out > 100000)
            throw ConfigError("key '" + std::string(key) + "': expected an integer year, got '" + std::string(v) + "'");
        return static_cast<int>(out);
    };
    if (key == "group") {
        spec.group = GroupSelector::parse(value);
    } else if (key == "aspect") {
        spec.aspect = std::string(value);
    } else if (key == "move") {
        static constexpr std::pair<std::string_view, Move> c[] = {
            {"back", Move::back}, {"forward", Move::forward}, {"wander", Move::wander}};
        spec.move = parse_enum(key, value, c);
    } else if (key == "move_mean") {
        if (value == "own") spec.move_mean.reset();
        else spec.move_mean = as_int(value);
    } else if (key == "move_std") {
        spec.move_std = parse_real(key, value);
    } else if (key == "n_test") {
        spec.n_test = parse_unsigned(key, value);
    } else if (key == "n_runs") {
        spec.n_runs = parse_unsigned(key, value);
    } else if (key == "seed") {
        spec.seed = parse_unsigned(key, value);
    } else if (key == "min_year") {
        spec.min_year = as_int(value);
    } else if (key == "max_year") {
        spec.max_year = as_int(value);
    } else {
        throw ConfigError("unknown time-machine key '" + std::string(key) + "'");
    }
}

inline TimeMachineSpec parse_time_machine_spec(std::string_view text, std::string_view source = "<spec>") {
    TimeMachineSpec spec;
    bool has_group = false;
    for (const auto& [key, value] : parse_key_values(text, source)) {
        apply_setting(spec, key, value);
        has_group = has_group || key == "group";
    }
    if (!has_group) throw ConfigError(std::string(source) + ": missing 'group'");
    spec.validate();
    return spec;
}

struct TimeMachineTrial {
    NodeIndex node = 0;
    Year original_year = 0;
    Year new_year = 0;
    double base_score = 0.0;
    double new_score = 0.0;
    double gain_pct = 0.0;
};

struct TimeMachineRun {
    std::size_t run = 0;
    std::vector<TimeMachineTrial> trials;
    double mean_gain = 0.0;
    double pct_increase = 0.0;
    bool converged = true;
};

struct TimeMachineReport {
    std::string group;
    Move move = Move::back;
    std::vector<TimeMachineRun> runs;
    double mean_gain = 0.0;
    double std_gain = 0.0;
    double pct_increase = 0.0;
    double std_pct = 0.0;
    bool converged = true;
    std::vector<std::string> notices;
};

namespace detail {

inline std::pair<double, double> mean_and_std(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace detail

/// Re-dates sampled group members, rescoring the whole corpus each run, and
/// reports the percentage change of their scores relative to the true dating.
inline TimeMachineReport run_time_machine(const Corpus& corpus, const RunConfig& cfg, const TimeMachineSpec& spec) {
    cfg.validate();
    spec.validate();
    if (corpus.aspects().empty()) throw ValidationError("corpus has no feature aspects");
    const auto& features = spec.aspect.empty() ? corpus.aspects().front() : corpus.aspect(spec.aspect);
    if (spec.n_test >= corpus.size())
        throw ValidationError("n_test (" + std::to_string(spec.n_test) + ") must be smaller than the corpus (" +
                              std::to_string(corpus.size()) + ")");
    const auto members = spec.group.members(corpus);
    if (members.size() < spec.n_test)
        throw ValidationError("group '" + spec.group.name() + "' matches " + std::to_string(members.size()) +
                              " artifacts, fewer than n_test = " + std::to_string(spec.n_test));

    TimeMachineReport report;
    report.group = spec.group.name();
    report.move = spec.move;
    if (cfg.temporal_prior != TemporalPrior::none)
        report.notices.push_back("warning: temporal prior enabled; the reference protocol uses none");
    if (spec.n_test * 100 > corpus.size())
        report.notices.push_back("notice: n_test exceeds 1% of the corpus and may disturb the global score distribution");

    // Dates do not change feature distances, so sigma is shared by every run.
    const double sigma = resolve_sigma(features, cfg);
    const auto baseline = score_aspect(corpus.years(), features, cfg, sigma);
    report.converged = baseline.scores.meta.converged;

    report.runs.resize(spec.n_runs);
    parallel_for(spec.n_runs, 1, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                              static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            std::vector<NodeIndex> chosen;
            std::sample(members.begin(), members.end(), std::back_inserter(chosen), spec.n_test, rng);

            std::vector<Year> years(corpus.years().begin(), corpus.years().end());
            TimeMachineRun run;
            run.run = r;
            for (NodeIndex node : chosen) {
                const double centre = spec.move_mean ? *spec.move_mean : years[node];
                std::normal_distribution<double> draw(centre, spec.move_std);
                long long y = std::llround(draw(rng));
                if (spec.min_year) y = std::max<long long>(y, *spec.min_year);
                if (spec.max_year) y = std::min<long long>(y, *spec.max_year);
                run.trials.push_back({node, years[node], static_cast<Year>(y), 0.0, 0.0, 0.0});
            }
            for (const auto& t : run.trials) years[t.node] = t.new_year;

            const auto moved = score_aspect(years, features, cfg, sigma);
            run.converged = moved.scores.meta.converged;
            std::size_t increased = 0;
            double total = 0.0;
            for (auto& t : run.trials) {
                t.base_score = baseline.scores[t.node];
                t.new_score = moved.scores[t.node];
                t.gain_pct = (t.new_score - t.base_score) / t.base_score * 100.0;
                total += t.gain_pct;
                if (t.new_score > t.base_score) ++increased;
            }
            run.mean_gain = total / static_cast<double>(run.trials.size());
            run.pct_increase = 100.0 * static_cast<double>(increased) / static_cast<double>(run.trials.size());
            report.runs[r] = std::move(run);
        }
    });

    std::vector<double> gains, pcts;
    for (const auto& run : report.runs) {
        gains.push_back(run.mean_gain);
        pcts.push_back(run.pct_increase);
        report.converged = report.converged && run.converged;
    }
    std::tie(report.mean_gain, report.std_gain) = detail::mean_and_std(gains);
    std::tie(report.pct_increase, report.std_pct) = detail::mean_and_std(pcts);
    return report;
}

/// Runs the single-aspect pipeline independently for each named aspect
/// (every aspect of the corpus when `aspects` is empty).
inline std::vector<AspectRun> run_multi_aspect(const Corpus& corpus, const RunConfig& cfg,
                                               std::vector<std::string> aspects = {}) {
    cfg.validate();
    if (aspects.empty())
        for (const auto& fs : corpus.aspects()) aspects.push_back(fs.aspect());
    if (aspects.empty()) throw ValidationError("corpus has no feature aspects");
    for (const auto& a : aspects) (void)corpus.aspect(a);
    std::vector<AspectRun> out;
    out.reserve(aspects.size());
    for (const auto& a : aspects) out.push_back(score_aspect(corpus, a, cfg));
    return out;
}

}  // namespace creativity
