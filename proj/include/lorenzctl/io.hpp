#pragma once

// JSON and CSV serialisation of every result type.
//
// CSV: comma separated, LF line endings, mandatory header, shortest
// round-trip formatting for doubles. Only trajectories and sweeps have a
// CSV form; everything has a JSON form.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "chaos.hpp"
#include "equilibria.hpp"
#include "integrator.hpp"
#include "lyapunov.hpp"
#include "orbits.hpp"
#include "sweep.hpp"

namespace lorenzctl {

using json = nlohmann::ordered_json;

enum class Format { Json, Csv };

inline std::optional<Format> parse_format(std::string_view name)
{
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    return std::nullopt;
}

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// --- JSON ------------------------------------------------------------------

inline void to_json(json& j, const SystemParams& p)
{
    j = json{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"M", p.M}, {"N", p.N}, {"P", p.P}};
}

inline void from_json(const json& j, SystemParams& p)
{
    j.at("a").get_to(p.a);
    j.at("b").get_to(p.b);
    j.at("c").get_to(p.c);
    p.M = j.value("M", 0.0);
    p.N = j.value("N", 0.0);
    p.P = j.value("P", 0.0);
}

inline void to_json(json& j, const State& s) { j = json::array({s.x, s.y, s.z}); }

inline json eigenvalues_json(const Eigenvalues& ev)
{
    json out = json::array();
    for (const auto& v : ev) out.push_back(json::array({v.real(), v.imag()}));
    return out;
}

inline void to_json(json& j, const Equilibrium& e)
{
    j = json{{"location", e.location},
             {"eigenvalues", eigenvalues_json(e.eigenvalues)},
             {"stable_dim", e.stable_dim},
             {"unstable_dim", e.unstable_dim},
             {"center_dim", e.center_dim}};
}

inline void to_json(json& j, const EquilibriumSet& s)
{
    j = json{{"kind", to_string(s.kind)}, {"origin", s.origin}, {"pair", nullptr}};
    if (s.pair) j["pair"] = json{{"plus", s.pair->plus}, {"minus", s.pair->minus}};
}

inline void to_json(json& j, const HypothesisFlags& h)
{
    j = json{{"lemma_ok", h.lemma_ok}, {"conv_ok", h.conv_ok}, {"het_ok", h.het_ok}};
}

inline void to_json(json& j, const CertificateReport& r)
{
    j = json{{"flags", r.flags},
             {"no_closed_orbits", r.no_closed_orbits},
             {"no_homoclinic", r.no_homoclinic},
             {"converges_to_equilibria", r.converges_to_equilibria},
             {"heteroclinic_pair", r.heteroclinic_pair},
             {"chaos_possible", r.chaos_possible}};
}

inline void to_json(json& j, const Trajectory& t)
{
    j = json{{"status", to_string(t.status)}, {"t", t.times}, {"states", t.states}};
}

inline void to_json(json& j, const HeteroclinicResult& r)
{
    j = json{{"branch", to_string(r.branch)},
             {"epsilon", r.epsilon},
             {"success", r.success},
             {"certified", r.certified},
             {r.branch == Branch::PlusX ? "min_x_on_branch" : "max_x_on_branch", r.extremal_x},
             {"terminal", nullptr},
             {"status", to_string(r.trajectory.status)},
             {"steps", r.trajectory.states.size()},
             {"final_state", r.trajectory.states.back()}};
    if (r.terminal) j["terminal"] = *r.terminal;
}

inline void to_json(json& j, const LLEEstimate& e)
{
    j = json{{"lambda1", e.lambda1},
             {"transient_discarded", e.transient_discarded},
             {"horizon", e.horizon},
             {"history", e.history}};
}

inline void to_json(json& j, const AnticontrolSuggestion& s)
{
    j = json{{"params", s.params},
             {"pitchfork_crossed", s.pitchfork_crossed},
             {"necessary_condition_b_lt_2a", s.necessary_condition},
             {"chaos_guaranteed", s.chaos_guaranteed},
             {"origin_class", to_string(s.origin_class)},
             {"note", s.note},
             {"lle", nullptr}};
    if (s.lle) j["lle"] = s.lle->lambda1;
}

inline void to_json(json& j, const SweepRow& r)
{
    j = json{{"axis_values", r.axis_values}, {"params", r.params}};
    if (r.equilibria) j["equilibria"] = *r.equilibria;
    if (r.origin_class) j["origin_class"] = to_string(*r.origin_class);
    if (r.certificate) j["certificate"] = *r.certificate;
    if (r.regime) j["regime"] = to_string(*r.regime);
    if (r.lle) j["lle"] = *r.lle;
    json errors = json::object();
    for (const auto& f : r.failures) errors[std::string(to_string(f.task))] = to_string(f.code);
    j["errors"] = errors;
}

inline void to_json(json& j, const SweepResult& r)
{
    json tasks = json::array();
    for (auto t : r.tasks) tasks.push_back(to_string(t));
    j = json{{"axes", r.axis_names}, {"tasks", tasks}, {"rows", r.rows}};
}

// --- CSV -------------------------------------------------------------------

inline void write_csv(std::ostream& os, const Trajectory& t)
{
    os << "t,x,y,z\n";
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        const auto& s = t.states[i];
        os << format_double(t.times[i]) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
           << format_double(s.z) << '\n';
    }
}

inline void write_csv(std::ostream& os, const SweepResult& r)
{
    std::string header;
    auto col = [&](std::string_view name) {
        if (!header.empty()) header += ',';
        header += name;
    };
    for (const auto& name : r.axis_names) col(name);
    for (auto task : r.tasks) {
        switch (task) {
        case SweepTask::Equilibria:
            col("equilibria_kind");
            col("eplus_x");
            col("eplus_y");
            col("eplus_z");
            break;
        case SweepTask::OriginClass: col("origin_class"); break;
        case SweepTask::Certificate:
            col("lemma_ok");
            col("conv_ok");
            col("het_ok");
            col("chaos_possible");
            break;
        case SweepTask::Regime: col("regime"); break;
        case SweepTask::Lle: col("lle"); break;
        }
    }
    col("error");
    os << header << '\n';

    auto flag = [](bool b) { return b ? "true" : "false"; };
    for (const auto& row : r.rows) {
        std::string line;
        bool first = true;
        auto field = [&](std::string_view v) {
            if (!first) line += ',';
            first = false;
            line += v;
        };
        for (double v : row.axis_values) field(format_double(v));
        for (auto task : r.tasks) {
            switch (task) {
            case SweepTask::Equilibria:
                field(row.equilibria ? to_string(row.equilibria->kind) : "");
                if (row.equilibria && row.equilibria->pair) {
                    const auto& e = row.equilibria->pair->plus.location;
                    field(format_double(e.x));
                    field(format_double(e.y));
                    field(format_double(e.z));
                } else {
                    field("");
                    field("");
                    field("");
                }
                break;
            case SweepTask::OriginClass: field(row.origin_class ? to_string(*row.origin_class) : ""); break;
            case SweepTask::Certificate:
                if (row.certificate) {
                    field(flag(row.certificate->flags.lemma_ok));
                    field(flag(row.certificate->flags.conv_ok));
                    field(flag(row.certificate->flags.het_ok));
                    field(flag(row.certificate->chaos_possible));
                } else {
                    for (int k = 0; k < 4; ++k) field("");
                }
                break;
            case SweepTask::Regime: field(row.regime ? to_string(*row.regime) : ""); break;
            case SweepTask::Lle: field(row.lle ? format_double(*row.lle) : ""); break;
            }
        }
        std::string errors;
        for (const auto& f : row.failures) {
            if (!errors.empty()) errors += '|';
            errors += std::string(to_string(f.task)) + '=' + std::string(to_string(f.code));
        }
        field(errors);
        os << line << '\n';
    }
}

template <class T>
concept CsvWritable = requires(std::ostream& os, const T& v) { write_csv(os, v); };

template <class T>
void write(std::ostream& os, const T& value, Format format)
{
    if (format == Format::Csv) {
        if constexpr (CsvWritable<T>) {
            write_csv(os, value);
            return;
        } else {
            throw Error(ErrorCode::UnsupportedFormat, "this result has no CSV form");
        }
    }
    os << json(value).dump(2) << '\n';
}

/// Writes `value` to `destination`, or to standard output when empty.
template <class T>
void emit(const T& value, Format format, const std::optional<std::filesystem::path>& destination = std::nullopt)
{
    if (!destination) {
        write(std::cout, value, format);
        std::cout.flush();
        if (!std::cout) throw Error(ErrorCode::IoError, "failed writing to standard output");
        return;
    }
    std::ofstream out(*destination, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + destination->string());
    write(out, value, format);
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + destination->string());
}

} // namespace lorenzctl
