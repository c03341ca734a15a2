#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "creativity/error.hpp"
#include "creativity/model.hpp"

namespace creativity {

namespace io {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return std::move(buf).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

/// Minimal RFC 4180 reader: comma separated, optional double quotes, CRLF or LF.
/// Returns one entry per non-blank line together with its 1-based line number.
struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

inline std::vector<CsvRow> parse_csv(std::string_view text, std::string_view source) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1;
    row.line = 1;

    auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        const bool blank = row.fields.size() == 1 && row.fields[0].empty();
        if (!blank) rows.push_back(std::move(row));
        row = CsvRow{};
    };

    for (std::size_t k = 0; k < text.size(); ++k) {
        const char ch = text[k];
        if (quoted) {
            if (ch == '"') {
                if (k + 1 < text.size() && text[k + 1] == '"') {
                    field.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !field_started && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\r') {
            // swallowed; LF ends the row
        } else if (ch == '\n') {
            end_row();
            row.line = ++line;
        } else {
            field.push_back(ch);
            field_started = true;
        }
    }
    if (quoted) throw ValidationError(std::string(source) + ": unterminated quoted field");
    if (!field.empty() || !row.fields.empty()) end_row();
    return rows;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

inline bool parse_int(std::string_view s, long long& out) {
    if (s.starts_with('+')) s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_double(std::string_view s, double& out) {
    if (s.starts_with('+')) s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace io

/// Reads the manifest CSV (`id,year[,artist][,style][,genre]`, header required).
inline std::vector<Artifact> read_manifest(const std::filesystem::path& path) {
    const auto source = path.string();
    const auto rows = io::parse_csv(io::read_file(path), source);
    if (rows.empty()) throw ValidationError(source + ": missing header");

    int id_col = -1, year_col = -1, artist_col = -1, style_col = -1, genre_col = -1;
    const auto& header = rows.front().fields;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = io::trim(header[c]);
        int* slot = name == "id"       ? &id_col
                    : name == "year"   ? &year_col
                    : name == "artist" ? &artist_col
                    : name == "style"  ? &style_col
                    : name == "genre"  ? &genre_col
                                       : nullptr;
        if (!slot) throw ValidationError(source + ": unknown manifest column '" + name + "'");
        if (*slot >= 0) throw ValidationError(source + ": column '" + name + "' given twice");
        *slot = static_cast<int>(c);
    }
    if (id_col < 0 || year_col < 0) throw ValidationError(source + ": header must contain 'id' and 'year'");

    std::vector<Artifact> artifacts;
    artifacts.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        const std::string where = source + ": row " + std::to_string(r) + " (line " +
                                  std::to_string(rows[r].line) + ")";
        if (f.size() != header.size())
            throw ValidationError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(f.size()));
        Artifact a;
        a.id = io::trim(f[id_col]);
        if (a.id.empty()) throw ValidationError(where + ": empty id");
        const auto year_text = io::trim(f[year_col]);
        if (year_text.empty()) throw ValidationError(where + ": missing year for id '" + a.id + "'");
        long long year = 0;
        if (!io::parse_int(year_text, year) || year < -100000 || year > 100000)
            throw ValidationError(where + ": non-integer year '" + year_text + "' for id '" + a.id + "'");
        a.year = static_cast<Year>(year);
        if (artist_col >= 0) a.artist = f[artist_col];
        if (style_col >= 0) a.style = f[style_col];
        if (genre_col >= 0) a.genre = f[genre_col];
        artifacts.push_back(std::move(a));
    }
    return artifacts;
}

inline constexpr std::array<char, 4> kFeatureMagic = {'C', 'R', 'F', 'T'};

namespace detail {

inline std::uint32_t load_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void store_u32_le(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

}  // namespace detail

/// Parses a binary feature file: "CRFT", u32 rows, u32 dim, 4 zero bytes, f32 LE data.
inline FeatureSet parse_feature_binary(std::string_view bytes, std::string aspect, std::string_view source) {
    const std::string where(source);
    if (bytes.size() < 16) throw ValidationError(where + ": truncated feature header");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (std::memcmp(p, kFeatureMagic.data(), 4) != 0) throw ValidationError(where + ": bad magic");
    const std::uint32_t rows = detail::load_u32_le(p + 4);
    const std::uint32_t dim = detail::load_u32_le(p + 8);
    if (detail::load_u32_le(p + 12) != 0) throw ValidationError(where + ": reserved header bytes must be zero");
    if (dim == 0) throw ValidationError(where + ": dim must be positive");
    const std::uint64_t expected = 16 + std::uint64_t{rows} * dim * 4;
    if (bytes.size() != expected)
        throw ValidationError(where + ": expected " + std::to_string(expected) + " bytes for " +
                              std::to_string(rows) + "x" + std::to_string(dim) + ", got " +
                              std::to_string(bytes.size()));
    std::vector<double> values(std::size_t{rows} * dim);
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::uint32_t raw = detail::load_u32_le(p + 16 + 4 * k);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        if (!std::isfinite(f))
            throw ValidationError(where + ": non-finite value at row " + std::to_string(k / dim + 1));
        values[k] = f;
    }
    return FeatureSet(std::move(aspect), dim, std::move(values));
}

/// Parses a CSV feature file: one row of reals per artifact, no header.
inline FeatureSet parse_feature_csv(std::string_view text, std::string aspect, std::string_view source) {
    const std::string where(source);
    const auto rows = io::parse_csv(text, where);
    if (rows.empty()) throw ValidationError(where + ": no feature rows");
    const std::size_t dim = rows.front().fields.size();
    std::vector<double> values;
    values.reserve(rows.size() * dim);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        if (f.size() != dim)
            throw ValidationError(where + ": row " + std::to_string(r + 1) + " has " + std::to_string(f.size()) +
                                  " values, expected " + std::to_string(dim));
        for (const auto& cell : f) {
            double v = 0.0;
            const auto t = io::trim(cell);
            if (!io::parse_double(t, v))
                throw ValidationError(where + ": row " + std::to_string(r + 1) + ": not a number '" + t + "'");
            if (!std::isfinite(v))
                throw ValidationError(where + ": row " + std::to_string(r + 1) + ": non-finite value '" + t + "'");
            values.push_back(v);
        }
    }
    return FeatureSet(std::move(aspect), dim, std::move(values));
}

/// Reads a feature file, detecting the binary format by its magic bytes.
inline FeatureSet read_features(const std::filesystem::path& path, std::string aspect) {
    const auto bytes = io::read_file(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kFeatureMagic.data(), 4) == 0)
        return parse_feature_binary(bytes, std::move(aspect), path.string());
    return parse_feature_csv(bytes, std::move(aspect), path.string());
}

/// Serializes features in the binary format (values rounded to float32).
inline std::string encode_feature_binary(const FeatureSet& fs) {
    std::string out(kFeatureMagic.begin(), kFeatureMagic.end());
    detail::store_u32_le(out, static_cast<std::uint32_t>(fs.rows()));
    detail::store_u32_le(out, static_cast<std::uint32_t>(fs.dim()));
    detail::store_u32_le(out, 0);
    out.reserve(16 + fs.values().size() * 4);
    for (double v : fs.values()) {
        const float f = static_cast<float>(v);
        std::uint32_t raw;
        std::memcpy(&raw, &f, sizeof raw);
        detail::store_u32_le(out, raw);
    }
    return out;
}

struct AspectSource {
    std::string aspect;
    std::filesystem::path path;
};

/// Reads and validates a manifest plus one feature file per aspect.
inline Corpus ingest_corpus(const std::filesystem::path& manifest, const std::vector<AspectSource>& features) {
    auto artifacts = read_manifest(manifest);
    std::vector<FeatureSet> sets;
    sets.reserve(features.size());
    for (const auto& src : features) {
        auto fs = read_features(src.path, src.aspect);
        if (fs.rows() != artifacts.size())
            throw ValidationError("row-count mismatch: manifest '" + manifest.string() + "' has " +
                                  std::to_string(artifacts.size()) + " rows, feature file '" +
                                  src.path.string() + "' has " + std::to_string(fs.rows()));
        sets.push_back(std::move(fs));
    }
    return Corpus(std::move(artifacts), std::move(sets));
}

/// Parses `key = value` lines; '#' starts a comment. Returns pairs in file order.
inline std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text,
                                                                         std::string_view source) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto content = io::trim(line);
        std::string_view c = content;
        while (!c.empty() && c.back() == '\r') c.remove_suffix(1);
        if (c.empty()) continue;
        const auto eq = c.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": expected key = value");
        auto key = io::trim(c.substr(0, eq));
        auto value = io::trim(c.substr(eq + 1));
        if (key.empty())
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>") {
    RunConfig cfg;
    for (const auto& [key, value] : parse_key_values(text, source)) apply_setting(cfg, key, value);
    cfg.validate();
    return cfg;
}

inline RunConfig read_run_config(const std::filesystem::path& path) {
    return parse_run_config(io::read_file(path), path.string());
}

}  // namespace creativity
