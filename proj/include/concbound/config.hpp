#pragma once

#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concbound/ensemble.hpp"
#include "concbound/errors.hpp"
#include "concbound/format.hpp"
#include "concbound/simulate.hpp"
#include "concbound/types.hpp"
#include "concbound/verify.hpp"

namespace concbound {

enum class Command { Bound, Simulate, Verify, Combinatorics, Regimes };

inline std::string_view to_string(Command c) {
    switch (c) {
        case Command::Bound: return "bound";
        case Command::Simulate: return "simulate";
        case Command::Verify: return "verify";
        case Command::Combinatorics: return "combinatorics";
        case Command::Regimes: return "regimes";
    }
    return "unknown";
}

enum class OutputFormat { Csv, Jsonl };

inline std::string_view to_string(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "jsonl";
}

struct VerifySpec {
    std::vector<std::string> checks;   // default: all five
    std::vector<double> truncation_l;  // default: {1}
    double averaging_l = 1.0;
    std::vector<double> mgf_a;         // default: {1, 2, 4}
    double bound_scale = 1.0;          // test fixture knob
};

// Fully parsed run description. Defaults: replications 100000, pilot_fraction
// 0.2, margin_sigmas 3, format csv.
struct RunConfig {
    Command command = Command::Bound;
    std::uint64_t seed = 0;
    std::int64_t replications = 100000;
    double pilot_fraction = 0.2;
    double margin_sigmas = 3.0;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::Csv;

    std::optional<EnsembleConfig> ensemble;

    // explicit process description for the `bound` command
    std::optional<double> p;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> big_n;
    double envelope_m = 0.0;
    double sigma = 0.0;
    std::optional<double> sigma_trunc;

    std::vector<BoundRequest> requests;
    std::vector<PlusMomentTarget> targets;
    std::optional<double> truncation_k;

    VerifySpec verify;
    int comb_m_max = 6;
    int comb_n_max = 6;

    std::vector<RegimeRequest> regime_grid;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double_value(std::string_view key, std::string_view value) {
    const std::string v(value);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    require_usage(end == v.c_str() + v.size() && !v.empty(),
                  "config: key '" + std::string(key) + "' expects a number, got '" + v + "'");
    return out;
}

inline std::int64_t parse_int_value(std::string_view key, std::string_view value) {
    std::int64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    require_usage(res.ec == std::errc() && res.ptr == value.data() + value.size(),
                  "config: key '" + std::string(key) + "' expects an integer, got '" +
                      std::string(value) + "'");
    return out;
}

inline std::uint64_t parse_u64_value(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    require_usage(res.ec == std::errc() && res.ptr == value.data() + value.size(),
                  "config: key '" + std::string(key) + "' expects an unsigned integer, got '" +
                      std::string(value) + "'");
    return out;
}

inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto piece = comma == std::string_view::npos ? value.substr(start)
                                                           : value.substr(start, comma - start);
        const auto trimmed = trim(piece);
        if (!trimmed.empty()) out.emplace_back(trimmed);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline Direction parse_direction(std::string_view key, std::string_view value) {
    if (value == "upper") return Direction::Upper;
    if (value == "lower") return Direction::Lower;
    throw UsageError("config: key '" + std::string(key) + "' expects upper|lower, got '" +
                     std::string(value) + "'");
}

// splits "request.3.eps" into ("request", 3, "eps"); index part optional
struct KeyPath {
    std::string_view section;
    std::optional<std::size_t> index;
    std::string_view field;
};

inline KeyPath split_key(std::string_view key) {
    KeyPath path;
    const auto dot = key.find('.');
    if (dot == std::string_view::npos) {
        path.section = key;
        return path;
    }
    path.section = key.substr(0, dot);
    auto rest = key.substr(dot + 1);
    const auto dot2 = rest.find('.');
    if (dot2 != std::string_view::npos) {
        const auto idx = rest.substr(0, dot2);
        std::size_t value = 0;
        const auto res = std::from_chars(idx.data(), idx.data() + idx.size(), value);
        if (res.ec == std::errc() && res.ptr == idx.data() + idx.size()) {
            path.index = value;
            path.field = rest.substr(dot2 + 1);
            return path;
        }
    }
    path.field = rest;
    return path;
}

template <class T>
T& at_index(std::vector<T>& vec, std::size_t index, std::string_view key) {
    require_usage(index <= vec.size(),
                  "config: key '" + std::string(key) + "' skips an index; lists must be dense");
    if (index == vec.size()) vec.emplace_back();
    return vec[index];
}

}  // namespace detail

inline void validate_config(const RunConfig& cfg);

// Parses the flat key = value document. Unknown keys, missing required keys
// and invariant violations raise UsageError with the key path.
inline RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    bool have_command = false;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        auto line = eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        require_usage(eq != std::string_view::npos,
                      "config: line " + std::to_string(line_no) + " is not 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        require_usage(!key.empty(), "config: line " + std::to_string(line_no) + " has an empty key");

        const auto path = detail::split_key(key);
        const auto unknown = [&]() -> UsageError {
            return UsageError("config: unknown key '" + std::string(key) + "'");
        };

        if (path.section == "command" && !path.index && path.field.empty()) {
            if (value == "bound") cfg.command = Command::Bound;
            else if (value == "simulate") cfg.command = Command::Simulate;
            else if (value == "verify") cfg.command = Command::Verify;
            else if (value == "combinatorics") cfg.command = Command::Combinatorics;
            else if (value == "regimes") cfg.command = Command::Regimes;
            else throw UsageError("config: unknown command '" + std::string(value) + "'");
            have_command = true;
        } else if (path.section == "seed" && path.field.empty()) {
            cfg.seed = detail::parse_u64_value(key, value);
        } else if (path.section == "replications" && path.field.empty()) {
            cfg.replications = detail::parse_int_value(key, value);
        } else if (path.section == "pilot_fraction" && path.field.empty()) {
            cfg.pilot_fraction = detail::parse_double_value(key, value);
        } else if (path.section == "margin_sigmas" && path.field.empty()) {
            cfg.margin_sigmas = detail::parse_double_value(key, value);
        } else if (path.section == "output" && !path.index) {
            if (path.field == "path") cfg.output_path = std::string(value);
            else if (path.field == "format") {
                if (value == "csv") cfg.format = OutputFormat::Csv;
                else if (value == "jsonl") cfg.format = OutputFormat::Jsonl;
                else throw UsageError("config: output.format expects csv|jsonl, got '" +
                                      std::string(value) + "'");
            } else throw unknown();
        } else if (path.section == "ensemble" && !path.index) {
            if (!cfg.ensemble) cfg.ensemble.emplace();
            auto& e = *cfg.ensemble;
            if (path.field == "family") {
                if (value == "rademacher") e.family = Family::Rademacher;
                else if (value == "bounded_uniform") e.family = Family::BoundedUniform;
                else if (value == "symmetric_pareto") e.family = Family::SymmetricPareto;
                else if (value == "student_t") e.family = Family::StudentT;
                else throw UsageError("config: unknown ensemble.family '" + std::string(value) +
                                      "'");
            } else if (path.field == "n") e.n = detail::parse_int_value(key, value);
            else if (path.field == "N") e.N = detail::parse_int_value(key, value);
            else if (path.field == "lo") e.lo = detail::parse_double_value(key, value);
            else if (path.field == "hi") e.hi = detail::parse_double_value(key, value);
            else if (path.field == "alpha") e.alpha = detail::parse_double_value(key, value);
            else if (path.field == "dof") e.dof = detail::parse_double_value(key, value);
            else if (path.field == "scale") e.scale = detail::parse_double_value(key, value);
            else if (path.field == "dependence") {
                if (value == "iid") e.dependence = Dependence::IidAcrossCells;
                else if (value == "shared_envelope_rows")
                    e.dependence = Dependence::SharedEnvelopeRows;
                else throw UsageError(
                        "config: ensemble.dependence expects iid|shared_envelope_rows, got '" +
                        std::string(value) + "'");
            } else throw unknown();
        } else if (path.section == "process" && !path.index) {
            if (path.field == "p") cfg.p = detail::parse_double_value(key, value);
            else if (path.field == "n") cfg.n = detail::parse_int_value(key, value);
            else if (path.field == "N") cfg.big_n = detail::parse_int_value(key, value);
            else if (path.field == "M") cfg.envelope_m = detail::parse_double_value(key, value);
            else if (path.field == "sigma") cfg.sigma = detail::parse_double_value(key, value);
            else if (path.field == "sigma_trunc")
                cfg.sigma_trunc = detail::parse_double_value(key, value);
            else throw unknown();
        } else if (path.section == "request" && path.index) {
            auto& req = detail::at_index(cfg.requests, *path.index, key);
            if (path.field == "family") {
                const auto fam = bound_family_from_string(value);
                require_usage(fam.has_value(),
                              "config: unknown request family '" + std::string(value) + "'");
                req.family = *fam;
            } else if (path.field == "l") req.l = detail::parse_double_value(key, value);
            else if (path.field == "eps") req.eps = detail::parse_double_value(key, value);
            else if (path.field == "K") req.K = detail::parse_double_value(key, value);
            else if (path.field == "A") req.A = detail::parse_double_value(key, value);
            else if (path.field == "x") req.x = detail::parse_double_value(key, value);
            else if (path.field == "sigma_y2")
                req.sigma_y2 = detail::parse_double_value(key, value);
            else if (path.field == "mean_y") req.mean_y = detail::parse_double_value(key, value);
            else if (path.field == "bernstein_k")
                req.bernstein_k = detail::parse_double_value(key, value);
            else throw unknown();
        } else if (path.section == "target" && path.index) {
            auto& target = detail::at_index(cfg.targets, *path.index, key);
            if (path.field == "l") target.l = detail::parse_double_value(key, value);
            else if (path.field == "eps") target.eps = detail::parse_double_value(key, value);
            else if (path.field == "direction") target.direction = detail::parse_direction(key, value);
            else throw unknown();
        } else if (path.section == "truncation" && !path.index && path.field == "K") {
            cfg.truncation_k = detail::parse_double_value(key, value);
        } else if (path.section == "verify" && !path.index) {
            if (path.field == "checks") {
                cfg.verify.checks = detail::split_list(value);
                for (const auto& c : cfg.verify.checks) {
                    require_usage(c == "moment" || c == "truncation" || c == "averaging" ||
                                      c == "mgf" || c == "combinatorics",
                                  "config: unknown check '" + c + "' in verify.checks");
                }
            } else if (path.field == "bound_scale") {
                cfg.verify.bound_scale = detail::parse_double_value(key, value);
            } else if (path.field == "truncation_l") {
                cfg.verify.truncation_l.clear();
                for (const auto& item : detail::split_list(value)) {
                    cfg.verify.truncation_l.push_back(detail::parse_double_value(key, item));
                }
            } else if (path.field == "averaging_l") {
                cfg.verify.averaging_l = detail::parse_double_value(key, value);
            } else if (path.field == "mgf_A") {
                cfg.verify.mgf_a.clear();
                for (const auto& item : detail::split_list(value)) {
                    cfg.verify.mgf_a.push_back(detail::parse_double_value(key, item));
                }
            } else throw unknown();
        } else if (path.section == "combinatorics" && !path.index) {
            if (path.field == "m_max")
                cfg.comb_m_max = static_cast<int>(detail::parse_int_value(key, value));
            else if (path.field == "n_max")
                cfg.comb_n_max = static_cast<int>(detail::parse_int_value(key, value));
            else throw unknown();
        } else if (path.section == "regime" && path.index) {
            auto& row = detail::at_index(cfg.regime_grid, *path.index, key);
            if (path.field == "l") row.l = detail::parse_double_value(key, value);
            else if (path.field == "p") row.p = detail::parse_double_value(key, value);
            else if (path.field == "n") row.n = detail::parse_int_value(key, value);
            else if (path.field == "N") row.N = detail::parse_int_value(key, value);
            else throw unknown();
        } else {
            throw unknown();
        }
    }

    require_usage(have_command, "config: missing required key 'command'");
    validate_config(cfg);
    return cfg;
}

// Per-command completeness and cross-field invariants.
inline void validate_config(const RunConfig& cfg) {
    require_usage(cfg.replications >= 1, "config: replications must be >= 1");
    require_usage(cfg.pilot_fraction > 0.0 && cfg.pilot_fraction <= 0.5,
                  "config: pilot_fraction must lie in (0, 0.5]");
    require_usage(cfg.margin_sigmas >= 0.0, "config: margin_sigmas must be >= 0");

    const auto needs_p_ge_l = [](BoundFamily f) {
        switch (f) {
            case BoundFamily::MainUpper:
            case BoundFamily::MainLower:
            case BoundFamily::TruncatedUpper:
            case BoundFamily::TruncatedLower:
            case BoundFamily::Symmetrization:
            case BoundFamily::FiniteClass:
            case BoundFamily::FiniteClassGeneral:
            case BoundFamily::TruncationBias:
                return true;
            default:
                return false;
        }
    };
    const auto require_fields = [](const BoundRequest& req, std::size_t idx,
                                   std::initializer_list<std::pair<const char*, bool>> fields) {
        for (const auto& [name, present] : fields) {
            require_usage(present, "config: request." + std::to_string(idx) +
                                       " family " + std::string(to_string(req.family)) +
                                       " requires key '" + name + "'");
        }
    };

    for (std::size_t i = 0; i < cfg.requests.size(); ++i) {
        const auto& req = cfg.requests[i];
        switch (req.family) {
            case BoundFamily::MainUpper:
            case BoundFamily::MainLower:
                require_fields(req, i, {{"l", req.l.has_value()}, {"eps", req.eps.has_value()}});
                break;
            case BoundFamily::ChebyshevUpper:
            case BoundFamily::ChebyshevLower:
                require_fields(req, i, {{"x", req.x.has_value()}, {"eps", req.eps.has_value()}});
                break;
            case BoundFamily::TruncatedUpper:
            case BoundFamily::TruncatedLower:
                require_fields(req, i, {{"l", req.l.has_value()},
                                        {"eps", req.eps.has_value()},
                                        {"K", req.K.has_value()}});
                break;
            case BoundFamily::Symmetrization:
            case BoundFamily::FiniteClass:
            case BoundFamily::TruncationBias:
                require_fields(req, i, {{"l", req.l.has_value()}});
                break;
            case BoundFamily::FiniteClassGeneral:
            case BoundFamily::BoundedPart:
                require_fields(req, i, {{"l", req.l.has_value()}, {"A", req.A.has_value()}});
                break;
            case BoundFamily::ExpectedSup:
                break;
            case BoundFamily::Bousquet:
                require_fields(req, i, {{"x", req.x.has_value()},
                                        {"sigma_y2", req.sigma_y2.has_value()},
                                        {"mean_y", req.mean_y.has_value()}});
                break;
            case BoundFamily::BernsteinClass:
                require_fields(req, i, {{"x", req.x.has_value()},
                                        {"bernstein_k", req.bernstein_k.has_value()}});
                break;
        }
        if (needs_p_ge_l(req.family) && req.l && cfg.p) {
            require_usage(*cfg.p >= *req.l,
                          "config: request." + std::to_string(i) + ": p >= l violated");
        }
    }

    switch (cfg.command) {
        case Command::Bound:
            require_usage(cfg.p.has_value(), "config: missing required key 'process.p'");
            require_usage(cfg.n.has_value(), "config: missing required key 'process.n'");
            require_usage(cfg.big_n.has_value(), "config: missing required key 'process.N'");
            require_usage(!cfg.requests.empty(), "config: bound needs at least one request.*");
            break;
        case Command::Simulate:
            require_usage(cfg.ensemble.has_value(),
                          "config: missing required section 'ensemble' for simulate");
            require_usage(!cfg.targets.empty(), "config: simulate needs at least one target.*");
            break;
        case Command::Verify:
            require_usage(cfg.ensemble.has_value(),
                          "config: missing required section 'ensemble' for verify");
            require_usage(cfg.p.has_value(), "config: missing required key 'process.p'");
            break;
        case Command::Combinatorics:
            require_usage(cfg.comb_m_max >= 1 && cfg.comb_n_max >= 1,
                          "config: combinatorics grid must be nonempty");
            break;
        case Command::Regimes:
            require_usage(!cfg.regime_grid.empty(), "config: regimes needs at least one regime.*");
            break;
    }
}

// Canonical serialization; parse(serialize(cfg)) reproduces cfg.
inline std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    const auto put = [&](std::string_view key, std::string value) {
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    };
    put("command", std::string(to_string(cfg.command)));
    put("seed", format_u64(cfg.seed));
    put("replications", format_int(cfg.replications));
    put("pilot_fraction", format_double(cfg.pilot_fraction));
    put("margin_sigmas", format_double(cfg.margin_sigmas));
    put("output.format", std::string(to_string(cfg.format)));
    if (cfg.output_path) put("output.path", *cfg.output_path);

    if (cfg.ensemble) {
        const auto& e = *cfg.ensemble;
        put("ensemble.family", std::string(to_string(e.family)));
        put("ensemble.n", format_int(e.n));
        put("ensemble.N", format_int(e.N));
        put("ensemble.dependence", std::string(to_string(e.dependence)));
        if (e.family == Family::BoundedUniform) {
            put("ensemble.lo", format_double(e.lo));
            put("ensemble.hi", format_double(e.hi));
        }
        if (e.family == Family::SymmetricPareto) {
            put("ensemble.alpha", format_double(e.alpha));
            put("ensemble.scale", format_double(e.scale));
        }
        if (e.family == Family::StudentT) {
            put("ensemble.dof", format_double(e.dof));
            put("ensemble.scale", format_double(e.scale));
        }
    }

    if (cfg.p) put("process.p", format_double(*cfg.p));
    if (cfg.n) put("process.n", format_int(*cfg.n));
    if (cfg.big_n) put("process.N", format_int(*cfg.big_n));
    if (cfg.envelope_m != 0.0) put("process.M", format_double(cfg.envelope_m));
    if (cfg.sigma != 0.0) put("process.sigma", format_double(cfg.sigma));
    if (cfg.sigma_trunc) put("process.sigma_trunc", format_double(*cfg.sigma_trunc));

    for (std::size_t i = 0; i < cfg.requests.size(); ++i) {
        const auto& r = cfg.requests[i];
        const std::string prefix = "request." + std::to_string(i) + ".";
        put(prefix + "family", std::string(to_string(r.family)));
        if (r.l) put(prefix + "l", format_double(*r.l));
        if (r.eps) put(prefix + "eps", format_double(*r.eps));
        if (r.K) put(prefix + "K", format_double(*r.K));
        if (r.A) put(prefix + "A", format_double(*r.A));
        if (r.x) put(prefix + "x", format_double(*r.x));
        if (r.sigma_y2) put(prefix + "sigma_y2", format_double(*r.sigma_y2));
        if (r.mean_y) put(prefix + "mean_y", format_double(*r.mean_y));
        if (r.bernstein_k) put(prefix + "bernstein_k", format_double(*r.bernstein_k));
    }

    for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
        const auto& t = cfg.targets[i];
        const std::string prefix = "target." + std::to_string(i) + ".";
        put(prefix + "l", format_double(t.l));
        put(prefix + "eps", format_double(t.eps));
        put(prefix + "direction", std::string(to_string(t.direction)));
    }
    if (cfg.truncation_k) put("truncation.K", format_double(*cfg.truncation_k));

    if (!cfg.verify.checks.empty()) {
        std::string list;
        for (const auto& c : cfg.verify.checks) {
            if (!list.empty()) list += ",";
            list += c;
        }
        put("verify.checks", list);
    }
    if (cfg.verify.bound_scale != 1.0) put("verify.bound_scale", format_double(cfg.verify.bound_scale));
    if (!cfg.verify.truncation_l.empty()) {
        std::string list;
        for (double l : cfg.verify.truncation_l) {
            if (!list.empty()) list += ",";
            list += format_double(l);
        }
        put("verify.truncation_l", list);
    }
    if (cfg.verify.averaging_l != 1.0) put("verify.averaging_l", format_double(cfg.verify.averaging_l));
    if (!cfg.verify.mgf_a.empty()) {
        std::string list;
        for (double a : cfg.verify.mgf_a) {
            if (!list.empty()) list += ",";
            list += format_double(a);
        }
        put("verify.mgf_A", list);
    }
    if (cfg.comb_m_max != 6) put("combinatorics.m_max", format_int(cfg.comb_m_max));
    if (cfg.comb_n_max != 6) put("combinatorics.n_max", format_int(cfg.comb_n_max));

    for (std::size_t i = 0; i < cfg.regime_grid.size(); ++i) {
        const auto& r = cfg.regime_grid[i];
        const std::string prefix = "regime." + std::to_string(i) + ".";
        put(prefix + "l", format_double(r.l));
        put(prefix + "p", format_double(r.p));
        put(prefix + "n", format_int(r.n));
        put(prefix + "N", format_int(r.N));
    }
    return out;
}

}  // namespace concbound
