// oscil: analyze bit strings, run the matching constructions, and drive
// corpus experiments from the shell. Reports are JSON (default) or
// plot-ready CSV, embed the resolved run configuration plus a schema
// version, and are byte-identical for identical configurations. Exit codes:
// 0 success, 2 malformed input / precondition / budget diagnostics,
// 1 internal errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscil/bitstring.hpp"
#include "oscil/codes.hpp"
#include "oscil/flags.hpp"
#include "oscil/io.hpp"
#include "oscil/matching.hpp"
#include "oscil/oracle.hpp"
#include "oscil/params.hpp"
#include "oscil/rational.hpp"
#include "oscil/regularity.hpp"
#include "oscil/statistics.hpp"
#include "oscil/strategy.hpp"
#include "oscil/structure.hpp"

namespace {

using nlohmann::json;
using namespace oscil;

constexpr const char* kSchema = "oscil-report/1";

json g_config;  // resolved config of the running subcommand, for diagnostics

struct Common {
    std::string epsilon = "1/1000000";
    std::string gamma = "1/1000000000000000";
    int n0_override = -1;  // -1 = unset
    std::uint64_t seed = 0x05C11u;
    std::string out;
    std::string format = "json";
    std::int64_t sweep_cap = std::int64_t{1} << 16;
};

void add_param_opts(CLI::App* cmd, Common& c) {
    cmd->add_option("--epsilon", c.epsilon,
                    "epsilon as an exact rational, e.g. 1/10")
        ->capture_default_str();
    cmd->add_option("--gamma", c.gamma, "gamma as an exact rational")
        ->capture_default_str();
    cmd->add_option("--n0-override", c.n0_override,
                    "pin the smallest statistics scale (>= 0)");
}

void add_output_opts(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "write the report here instead of stdout");
    cmd->add_option("--format", c.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

ParamSet make_params(const Common& c) {
    std::optional<int> n0;
    if (c.n0_override >= 0) n0 = c.n0_override;
    return ParamSet(parse_rational(c.epsilon), parse_rational(c.gamma), n0);
}

json param_config(const Common& c) {
    return json{{"epsilon", c.epsilon},
                {"gamma", c.gamma},
                {"n0_override",
                 c.n0_override >= 0 ? json(c.n0_override) : json(nullptr)}};
}

json base_config(const std::string& subcommand,
                 const std::vector<std::string>& inputs, const Common& c) {
    json cfg{{"subcommand", subcommand},
             {"inputs", inputs},
             {"format", c.format},
             {"out", c.out.empty() ? json(nullptr) : json(c.out)}};
    return cfg;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ',';
        s += parts[i];
    }
    return s;
}

// One canonical text for every numeric cell, shared by both formats.
std::string num(const json& v) { return v.dump(); }

int emit(const Common& c, const json& report, const CsvTable& csv) {
    std::string text;
    if (c.format == "csv") {
        text = "# schema: " + std::string(kSchema) + "\n";
        text += "# config: " + report.at("config").dump() + "\n";
        text += join(csv.header) + "\n";
        for (const auto& row : csv.rows) text += join(row) + "\n";
    } else {
        text = report.dump(2) + "\n";
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
        if (!f) throw PreconditionError("cannot open output file: " + c.out);
        f << text;
        if (!f) throw ResourceError("write failed: " + c.out);
    }
    return 0;
}

BitString first_string(const std::string& path) {
    std::vector<BitString> words = read_strings(path);
    if (words.empty()) throw PreconditionError("no strings in " + path);
    return std::move(words.front());
}

json matching_json(const Matching& m) {
    json arr = json::array();
    for (const auto& [a, b] : m.pairs) arr.push_back(json::array({a, b}));
    return arr;
}

json certificate_json(const StrategyCertificate& c) {
    json notes = json::array();
    for (const BlockNote& n : c.notes)
        notes.push_back(json{{"block", n.block},
                             {"size", n.size},
                             {"gain", n.gain},
                             {"hypothesis_ok", n.hypothesis_ok},
                             {"detail", n.detail}});
    return json{{"kind", strategy_kind_name(c.kind)},
                {"scale", c.scale},
                {"delta", c.delta},
                {"size", c.size},
                {"baseline", c.baseline},
                {"claimed_floor", to_fraction_string(c.claimed_floor)},
                {"floor_met", c.floor_met},
                {"hypotheses_ok", c.hypotheses_ok},
                {"notes", notes},
                {"failures", c.failures}};
}

json table_json(const StatisticsTable& T) {
    json scales = json::array();
    for (const ScaleRow& row : T.scales) {
        json blocks = json::array();
        for (const BlockStat& b : row.blocks)
            blocks.push_back(
                json{{"ones", b.ones},
                     {"zeros", b.zeros},
                     {"type", b.type ? json(type_name(*b.type)) : json(nullptr)}});
        scales.push_back(json{{"m", row.m}, {"blocks", blocks}});
    }
    json family = json::array();
    for (const FamilyInterval& f : T.family)
        family.push_back(json{{"lo", f.interval.lo},
                              {"hi", f.interval.hi},
                              {"bit_lo", f.bit_lo},
                              {"bit_hi", f.bit_hi},
                              {"zeros", f.zeros},
                              {"side", side_name(f.side)}});
    return json{{"length", T.length},
                {"ones", T.ones},
                {"n", T.n},
                {"n0", T.n0},
                {"red_cap_mode", red_cap_mode_name(T.red_cap_mode)},
                {"family_mode", family_mode_name(T.family_mode)},
                {"scales", scales},
                {"family", family},
                {"canonical", canonical_serialization(T)}};
}

std::string block_text(const BlockStat& b) {
    return "(" + std::to_string(b.ones) + "," + std::to_string(b.zeros) + "," +
           (b.type ? type_name(*b.type) : "-") + ")";
}

std::string first_table_difference(const StatisticsTable& A,
                                   const StatisticsTable& B) {
    if (A.length != B.length)
        return "bit lengths differ: " + std::to_string(A.length) + " vs " +
               std::to_string(B.length);
    if (A.ones != B.ones)
        return "ones counts differ: " + std::to_string(A.ones) + " vs " +
               std::to_string(B.ones);
    if (A.n != B.n || A.n0 != B.n0) return "scale ranges differ";
    for (std::size_t r = 0; r < A.scales.size() && r < B.scales.size(); ++r) {
        const ScaleRow& ra = A.scales[r];
        const ScaleRow& rb = B.scales[r];
        for (std::size_t i = 0; i < ra.blocks.size() && i < rb.blocks.size();
             ++i)
            if (!(ra.blocks[i] == rb.blocks[i]))
                return "scale m=" + std::to_string(ra.m) + " block " +
                       std::to_string(i + 1) + ": " + block_text(ra.blocks[i]) +
                       " vs " + block_text(rb.blocks[i]);
    }
    if (!(A.family == B.family)) return "interval families differ";
    return A == B ? "" : "tables differ";
}

json trace_json(const PipelineTrace& tr) {
    return json{
        {"preconditions", tr.preconditions},
        {"trivial_equal", tr.trivial_equal},
        {"n", tr.n},
        {"n0", tr.n0},
        {"heavy_threshold", tr.heavy_threshold},
        {"heavy_counts", tr.heavy_counts},
        {"heavy_route", tr.heavy_route},
        {"m_star", tr.m_star ? json(*tr.m_star) : json(nullptr)},
        {"block_count", tr.block_count},
        {"type_counts", tr.type_counts},
        {"rev_type_counts", tr.rev_type_counts},
        {"chosen", tr.chosen},
        {"case", tr.case_label},
        {"notes", tr.notes}};
}

// ---- subcommand handlers ------------------------------------------------

struct FlagsOpts {
    std::string input;
    Common c;
};

int run_flags(const FlagsOpts& o) {
    json cfg = base_config("flags", {o.input}, o.c);
    cfg.update(param_config(o.c));
    g_config = cfg;
    const ParamSet p = make_params(o.c);

    json strings = json::array();
    CsvTable csv{{"string", "ell", "blue", "green", "yellow", "red"}, {}};
    const std::vector<BitString> words = read_strings(o.input);
    for (std::size_t k = 0; k < words.size(); ++k) {
        const BitString& w = words[k];
        const FlagProfile prof = b_profile(w, p);
        json scales = json::array();
        for (std::int64_t ell = 1; ell <= w.ones(); ell <<= 1) {
            const std::int64_t blue = count_flags(w, ell, FlagColor::Blue, p);
            const std::int64_t green = count_flags(w, ell, FlagColor::Green, p);
            const std::int64_t yellow =
                count_flags(w, ell, FlagColor::Yellow, p);
            const std::int64_t red = count_flags(w, ell, FlagColor::Red, p);
            scales.push_back(json{{"ell", ell},
                                  {"blue", blue},
                                  {"green", green - blue},
                                  {"yellow", yellow - green},
                                  {"red", red}});
            csv.rows.push_back({std::to_string(k), std::to_string(ell),
                                std::to_string(blue),
                                std::to_string(green - blue),
                                std::to_string(yellow - green),
                                std::to_string(red)});
        }
        strings.push_back(json{{"index", k},
                               {"length", w.length()},
                               {"ones", w.ones()},
                               {"b", prof.b},
                               {"scales", scales}});
    }
    json report{{"schema", kSchema}, {"config", cfg}, {"strings", strings}};
    return emit(o.c, report, csv);
}

struct ClassifyOpts {
    std::string input;
    Common c;
};

int run_classify(const ClassifyOpts& o) {
    json cfg = base_config("classify", {o.input}, o.c);
    cfg.update(param_config(o.c));
    g_config = cfg;
    const ParamSet p = make_params(o.c);

    json strings = json::array();
    CsvTable csv{{"string", "type"}, {}};
    const std::vector<BitString> words = read_strings(o.input);
    for (std::size_t k = 0; k < words.size(); ++k) {
        const ClassifyOutcome out = classify_outcome(words[k], p);
        const std::string name =
            out.type ? type_name(*out.type) : std::string("untyped");
        json gaps = json::array();
        for (const ClassifyGap& g : out.gaps)
            gaps.push_back(
                json{{"condition", g.condition}, {"detail", g.detail}});
        strings.push_back(json{{"index", k},
                               {"length", words[k].length()},
                               {"ones", words[k].ones()},
                               {"type", name},
                               {"red_cap_mode",
                                red_cap_mode_name(out.red_cap_mode)},
                               {"gaps", gaps}});
        csv.rows.push_back({std::to_string(k), name});
    }
    json report{{"schema", kSchema}, {"config", cfg}, {"strings", strings}};
    return emit(o.c, report, csv);
}

struct BalanceOpts {
    std::string input;
    std::string beta = "1/4";
    std::string variant = "interval";
    int m_lo = -1;
    Common c;
};

int run_balance(const BalanceOpts& o) {
    json cfg = base_config("balance", {o.input}, o.c);
    cfg.update(param_config(o.c));
    cfg["beta"] = o.beta;
    cfg["variant"] = o.variant;
    cfg["m_lo"] = o.m_lo >= 0 ? json(o.m_lo) : json(nullptr);
    g_config = cfg;
    const ParamSet p = make_params(o.c);
    const Rational beta = parse_rational(o.beta);
    const BalanceVariant variant = o.variant == "substring"
                                       ? BalanceVariant::Substring
                                       : BalanceVariant::Interval;
    std::optional<int> m_lo;
    if (o.m_lo >= 0) m_lo = o.m_lo;

    json strings = json::array();
    CsvTable csv{{"string", "m", "entropy", "unbalanced"}, {}};
    const std::vector<BitString> words = read_strings(o.input);
    for (std::size_t k = 0; k < words.size(); ++k) {
        const BalanceScanResult r = balance_scan(words[k], beta, p, variant, m_lo);
        json scales = json::array();
        for (const BalanceReport& rep : r.reports) {
            json blocks = json::array();
            for (const BlockVerdict& b : rep.blocks)
                blocks.push_back(
                    json{{"i", b.index},
                         {"discrepancy", to_fraction_string(b.discrepancy)},
                         {"balanced", b.balanced}});
            scales.push_back(json{{"m", rep.m},
                                  {"unbalanced", rep.unbalanced},
                                  {"blocks", blocks}});
        }
        strings.push_back(json{{"index", k},
                               {"variant", balance_variant_name(r.variant)},
                               {"beta", to_fraction_string(r.beta)},
                               {"n", r.n},
                               {"m_lo", r.m_lo},
                               {"ledger", r.ledger},
                               {"scales", scales}});
        for (int m = 0; m <= r.n; ++m) {
            std::string unbalanced;
            if (m >= r.m_lo)
                unbalanced = std::to_string(
                    r.reports[static_cast<std::size_t>(m - r.m_lo)].unbalanced);
            csv.rows.push_back({std::to_string(k), std::to_string(m),
                                num(json(r.ledger[static_cast<std::size_t>(m)])),
                                unbalanced});
        }
    }
    json report{{"schema", kSchema}, {"config", cfg}, {"strings", strings}};
    return emit(o.c, report, csv);
}

struct LcsOpts {
    std::string a, b;
    std::int64_t budget_cells = std::int64_t{1} << 30;
    Common c;
};

int run_lcs(const LcsOpts& o) {
    json cfg = base_config("lcs", {o.a, o.b}, o.c);
    cfg["budget_cells"] = o.budget_cells;
    g_config = cfg;
    const BitString s = first_string(o.a), t = first_string(o.b);

    const std::int64_t fast = lcs_fast(s, t);
    json exact = nullptr, agree = nullptr, witness_valid = nullptr;
    std::vector<std::string> notes;
    try {
        const LcsResult r = lcs_exact(s, t, o.budget_cells);
        exact = r.length;
        agree = (r.length == fast);
        witness_valid = validate(r.witness, s, t) &&
                        r.witness.size() == r.length;
    } catch (const ResourceError& e) {
        notes.push_back(std::string("exact route skipped: ") + e.what());
    }
    json report{{"schema", kSchema},
                {"config", cfg},
                {"length", fast},
                {"exact", exact},
                {"agree", agree},
                {"witness_valid", witness_valid},
                {"notes", notes}};
    CsvTable csv{{"fast", "exact", "agree"},
                 {{std::to_string(fast), num(exact), num(agree)}}};
    int status = emit(o.c, report, csv);
    // the two routes are independent; disagreement means a defect, not input
    if (agree.is_boolean() && !agree.get<bool>()) return 1;
    return status;
}

struct PairOpts {
    std::string s, t;
    Common c;
};

json pipeline_report(const PairOpts& o, const char* name, bool full,
                     PipelineResult& result) {
    json cfg = base_config(name, {o.s, o.t}, o.c);
    cfg.update(param_config(o.c));
    cfg["seed"] = o.c.seed;
    cfg["sweep_cap"] = o.c.sweep_cap;
    g_config = cfg;
    const ParamSet p = make_params(o.c);
    const BitString s = first_string(o.s), t = first_string(o.t);

    result = pipeline_lcs(s, t, p, o.c.sweep_cap, o.c.seed);
    json report{{"schema", kSchema},
                {"config", cfg},
                {"s", s.to_text()},
                {"t", t.to_text()},
                {"size", result.matching.size()},
                {"case", result.trace.case_label},
                {"matching", matching_json(result.matching)}};
    if (result.certificate)
        report["certificate"] = certificate_json(*result.certificate);
    if (full) {
        report["trace"] = trace_json(result.trace);
        // mirror the pipeline's agreement check for the diagnostic
        bool fwd_diff = false, rev_diff = false;
        for (const std::string& msg : result.trace.preconditions) {
            if (msg == "strings disagree on statistics") fwd_diff = true;
            if (msg == "reversed strings disagree on statistics")
                rev_diff = true;
        }
        if (fwd_diff || rev_diff) {
            const int n = result.trace.n;
            json diffs = json::array();
            auto add = [&](const char* which, const BitString& a,
                           const BitString& b) {
                const StatisticsTable Ta = statistics_table(a, p);
                const StatisticsTable Tb = statistics_table(b, p);
                diffs.push_back(
                    json{{"which", which},
                         {"s_table", canonical_serialization(Ta)},
                         {"t_table", canonical_serialization(Tb)},
                         {"first_difference", first_table_difference(Ta, Tb)}});
            };
            if (fwd_diff)
                add("forward", s.dyadic_block(n, 1), t.dyadic_block(n, 1));
            if (rev_diff)
                add("reversed", s.reversed().dyadic_block(n, 1),
                    t.reversed().dyadic_block(n, 1));
            report["table_diff"] = diffs;
        }
    }
    return report;
}

int run_match(const PairOpts& o) {
    PipelineResult result;
    json report = pipeline_report(o, "match", false, result);
    CsvTable csv{{"a", "b"}, {}};
    for (const auto& [a, b] : result.matching.pairs)
        csv.rows.push_back({std::to_string(a), std::to_string(b)});
    return emit(o.c, report, csv);
}

int run_pipeline(const PairOpts& o) {
    PipelineResult result;
    json report = pipeline_report(o, "pipeline", true, result);
    CsvTable csv{{"a", "b"}, {}};
    for (const auto& [a, b] : result.matching.pairs)
        csv.rows.push_back({std::to_string(a), std::to_string(b)});
    const int status = emit(o.c, report, csv);
    if (status != 0) return status;
    return result.trace.preconditions.empty() ? 0 : 2;
}

struct TableOpts {
    std::string input;
    Common c;
};

int run_table(const TableOpts& o) {
    json cfg = base_config("table", {o.input}, o.c);
    cfg.update(param_config(o.c));
    g_config = cfg;
    const ParamSet p = make_params(o.c);

    json strings = json::array();
    CsvTable csv{{"string", "m", "i", "ones", "zeros", "type"}, {}};
    const std::vector<BitString> words = read_strings(o.input);
    for (std::size_t k = 0; k < words.size(); ++k) {
        const StatisticsTable T = statistics_table(words[k], p);
        json entry = table_json(T);
        entry["index"] = k;
        strings.push_back(entry);
        for (const ScaleRow& row : T.scales)
            for (std::size_t i = 0; i < row.blocks.size(); ++i) {
                const BlockStat& b = row.blocks[i];
                csv.rows.push_back(
                    {std::to_string(k), std::to_string(row.m),
                     std::to_string(i + 1), std::to_string(b.ones),
                     std::to_string(b.zeros),
                     b.type ? type_name(*b.type) : std::string("-")});
            }
    }
    json report{{"schema", kSchema}, {"config", cfg}, {"strings", strings}};
    return emit(o.c, report, csv);
}

struct CollideOpts {
    std::string input;
    Common c;
};

int run_collide(const CollideOpts& o) {
    json cfg = base_config("collide", {o.input}, o.c);
    cfg.update(param_config(o.c));
    g_config = cfg;
    const ParamSet p = make_params(o.c);
    const std::vector<BitString> words = read_strings(o.input);

    const CollisionReport r = find_collision(words, p);
    json pair = nullptr;
    if (r.pair) pair = json::array({r.pair->first, r.pair->second});
    json report{{"schema", kSchema},
                {"config", cfg},
                {"count", words.size()},
                {"pair", pair},
                {"distinct_keys", r.distinct_keys},
                {"log2_key_bound", r.log2_key_bound}};
    CsvTable csv{
        {"found", "i", "j", "distinct_keys", "log2_key_bound"},
        {{r.pair ? "1" : "0",
          r.pair ? std::to_string(r.pair->first) : std::string(),
          r.pair ? std::to_string(r.pair->second) : std::string(),
          std::to_string(r.distinct_keys), num(json(r.log2_key_bound))}}};
    return emit(o.c, report, csv);
}

struct CodesOpts {
    std::string family = "bukh-ma";
    int k = 4;
    std::int64_t length = 0;
    std::int64_t size = 0;
    bool measure = false;
    Common c;
};

int run_codes(const CodesOpts& o) {
    json cfg = base_config("codes", {}, o.c);
    cfg["family"] = o.family;
    cfg["seed"] = o.c.seed;
    cfg["measure"] = o.measure;
    if (o.family == "bukh-ma") cfg["k"] = o.k;
    if (o.family == "random") {
        cfg["length"] = o.length;
        cfg["size"] = o.size;
    }
    g_config = cfg;

    Code code;
    json concatenated = nullptr;
    if (o.family == "bukh-ma") {
        OscillationFamily fam = bukh_ma_code(o.k);
        concatenated = fam.concatenated.to_text();
        code = std::move(fam.periods);
    } else if (o.family == "random") {
        if (o.length < 1 || o.size < 1)
            throw PreconditionError(
                "random codes need --length and --size >= 1");
        code = random_code(o.length, o.size, o.c.seed);
    } else {
        throw PreconditionError("unknown code family: " + o.family);
    }

    json words = json::array();
    for (const BitString& w : code.words) words.push_back(w.to_text());
    json report{{"schema", kSchema},
                {"config", cfg},
                {"family", code.family},
                {"generator", code.generator},
                {"seed", code.seed},
                {"params", code.params},
                {"word_length", code.word_length()},
                {"concatenated", concatenated},
                {"words", words}};

    CsvTable csv;
    if (o.measure) {
        json rows = json::array();
        csv.header = {"a", "b", "lcs", "surplus"};
        for (const PairMeasurement& m : measure_pairs(code)) {
            rows.push_back(json{
                {"a", m.a}, {"b", m.b}, {"lcs", m.lcs}, {"surplus", m.surplus}});
            csv.rows.push_back({std::to_string(m.a), std::to_string(m.b),
                                std::to_string(m.lcs),
                                std::to_string(m.surplus)});
        }
        report["measurements"] = rows;
    } else {
        csv.header = {"index", "word"};
        for (std::size_t k = 0; k < code.words.size(); ++k)
            csv.rows.push_back({std::to_string(k), code.words[k].to_text()});
    }
    return emit(o.c, report, csv);
}

struct CsOpts {
    std::int64_t n = 1024;
    std::int64_t trials = 50;
    Common c;
};

int run_cs_estimate(const CsOpts& o) {
    json cfg = base_config("cs-estimate", {}, o.c);
    cfg["n"] = o.n;
    cfg["trials"] = o.trials;
    cfg["seed"] = o.c.seed;
    g_config = cfg;

    const CsEstimate est = cs_estimate(o.n, o.trials, o.c.seed);
    json report{{"schema", kSchema},
                {"config", cfg},
                {"n", est.n},
                {"trials", est.trials},
                {"seed", est.seed},
                {"mean", est.mean},
                {"stddev", est.stddev},
                {"stderr", est.stderr_mean},
                {"lcs_values", est.lcs_values}};
    CsvTable csv{{"trial", "lcs", "ratio"}, {}};
    for (std::size_t k = 0; k < est.lcs_values.size(); ++k)
        csv.rows.push_back(
            {std::to_string(k), std::to_string(est.lcs_values[k]),
             num(json(static_cast<double>(est.lcs_values[k]) /
                      static_cast<double>(est.n)))});
    return emit(o.c, report, csv);
}

struct SpanOpts {
    std::string s, t;
    std::string floor = "1";
    std::int64_t budget_pairs = std::int64_t{1} << 17;
    Common c;
};

int run_span(const SpanOpts& o) {
    json cfg = base_config("span", {o.s, o.t}, o.c);
    cfg["span_floor"] = o.floor;
    cfg["budget_cells"] = o.budget_pairs;
    g_config = cfg;
    const BitString s = first_string(o.s), t = first_string(o.t);

    const SpanResult r = span(s, t, parse_rational(o.floor), o.budget_pairs);
    json ratio = r.unbounded ? json(nullptr) : json(to_fraction_string(r.ratio));
    json report{{"schema", kSchema},
                {"config", cfg},
                {"s_range", json::array({r.s_range.begin, r.s_range.end})},
                {"t_range", json::array({r.t_range.begin, r.t_range.end})},
                {"lcs", r.lcs},
                {"unbounded", r.unbounded},
                {"ratio", ratio},
                {"floor", to_fraction_string(r.floor_c)},
                {"granularity", r.granularity}};
    CsvTable csv{{"s_begin", "s_end", "t_begin", "t_end", "lcs", "unbounded",
                  "ratio", "granularity"},
                 {{std::to_string(r.s_range.begin),
                   std::to_string(r.s_range.end),
                   std::to_string(r.t_range.begin),
                   std::to_string(r.t_range.end), std::to_string(r.lcs),
                   r.unbounded ? "1" : "0",
                   r.unbounded ? std::string() : to_fraction_string(r.ratio),
                   std::to_string(r.granularity)}}};
    return emit(o.c, report, csv);
}

struct VerifyOpts {
    std::string report_path;
    Common c;
};

int run_verify_matching(const VerifyOpts& o) {
    json cfg = base_config("verify-matching", {o.report_path}, o.c);
    g_config = cfg;
    std::ifstream f(o.report_path, std::ios::binary);
    if (!f)
        throw PreconditionError("cannot open report file: " + o.report_path);
    json rep;
    try {
        f >> rep;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report is not JSON: ") + e.what());
    }
    if (!rep.contains("s") || !rep.contains("t") || !rep.contains("matching"))
        throw PreconditionError(
            "report lacks s, t, and matching fields; only match and "
            "pipeline reports carry a matching");

    const BitString s = BitString::from_text(rep["s"].get<std::string>());
    const BitString t = BitString::from_text(rep["t"].get<std::string>());
    Matching m;
    for (const json& pr : rep["matching"])
        m.pairs.push_back({pr.at(0).get<std::int64_t>(),
                           pr.at(1).get<std::int64_t>()});
    const bool valid = validate(m, s, t);
    json report{{"schema", kSchema},
                {"config", cfg},
                {"valid", valid},
                {"size", m.size()}};
    CsvTable csv{{"valid", "size"},
                 {{valid ? "1" : "0", std::to_string(m.size())}}};
    const int status = emit(o.c, report, csv);
    if (status != 0) return status;
    return valid ? 0 : 2;
}

int diagnostic(const char* kind, const std::string& message) {
    json report{{"schema", kSchema},
                {"error", json{{"kind", kind}, {"message", message}}}};
    if (!g_config.is_null()) report["config"] = g_config;
    std::cout << report.dump(2) << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "oscil: bit-string structure analysis, matching constructions, and "
        "code experiments"};
    app.require_subcommand(1);

    FlagsOpts flags_o;
    auto* cmd_flags = app.add_subcommand(
        "flags", "flag profile and per-scale color counts");
    cmd_flags->add_option("input", flags_o.input, "strings file")->required();
    add_param_opts(cmd_flags, flags_o.c);
    add_output_opts(cmd_flags, flags_o.c);

    ClassifyOpts classify_o;
    auto* cmd_classify =
        app.add_subcommand("classify", "structure type of each string");
    cmd_classify->add_option("input", classify_o.input, "strings file")
        ->required();
    add_param_opts(cmd_classify, classify_o.c);
    add_output_opts(cmd_classify, classify_o.c);

    BalanceOpts balance_o;
    auto* cmd_balance = app.add_subcommand(
        "balance", "per-scale balance verdicts and the entropy ledger");
    cmd_balance->add_option("input", balance_o.input, "strings file")
        ->required();
    cmd_balance->add_option("--beta", balance_o.beta,
                            "balance threshold as an exact rational")
        ->capture_default_str();
    cmd_balance
        ->add_option("--variant", balance_o.variant,
                     "interval|substring distributions")
        ->check(CLI::IsMember({"interval", "substring"}))
        ->capture_default_str();
    cmd_balance->add_option("--m-lo", balance_o.m_lo,
                            "lowest scanned scale (default: formula)");
    add_param_opts(cmd_balance, balance_o.c);
    add_output_opts(cmd_balance, balance_o.c);

    PairOpts match_o;
    auto* cmd_match = app.add_subcommand(
        "match", "build a common-subsequence matching for a pair");
    cmd_match->add_option("s", match_o.s, "first strings file")->required();
    cmd_match->add_option("t", match_o.t, "second strings file")->required();
    cmd_match->add_option("--seed", match_o.c.seed, "shift-sweep seed")
        ->capture_default_str();
    cmd_match
        ->add_option("--sweep-cap", match_o.c.sweep_cap,
                     "max shifts per sweep")
        ->capture_default_str();
    add_param_opts(cmd_match, match_o.c);
    add_output_opts(cmd_match, match_o.c);

    LcsOpts lcs_o;
    auto* cmd_lcs =
        app.add_subcommand("lcs", "LCS length by two independent routes");
    cmd_lcs->add_option("a", lcs_o.a, "first strings file")->required();
    cmd_lcs->add_option("b", lcs_o.b, "second strings file")->required();
    cmd_lcs
        ->add_option("--budget-cells", lcs_o.budget_cells,
                     "cell budget for the exact route")
        ->capture_default_str();
    add_output_opts(cmd_lcs, lcs_o.c);

    TableOpts table_o;
    auto* cmd_table =
        app.add_subcommand("table", "statistics table of each string");
    cmd_table->add_option("input", table_o.input, "strings file")->required();
    add_param_opts(cmd_table, table_o.c);
    add_output_opts(cmd_table, table_o.c);

    CollideOpts collide_o;
    auto* cmd_collide = app.add_subcommand(
        "collide", "first pair of code words sharing a statistics key");
    cmd_collide->add_option("input", collide_o.input, "code file")->required();
    add_param_opts(cmd_collide, collide_o.c);
    add_output_opts(cmd_collide, collide_o.c);

    PairOpts pipeline_o;
    auto* cmd_pipeline = app.add_subcommand(
        "pipeline", "end-to-end construction with a full trace");
    cmd_pipeline->add_option("s", pipeline_o.s, "first strings file")
        ->required();
    cmd_pipeline->add_option("t", pipeline_o.t, "second strings file")
        ->required();
    cmd_pipeline->add_option("--seed", pipeline_o.c.seed, "shift-sweep seed")
        ->capture_default_str();
    cmd_pipeline
        ->add_option("--sweep-cap", pipeline_o.c.sweep_cap,
                     "max shifts per sweep")
        ->capture_default_str();
    add_param_opts(cmd_pipeline, pipeline_o.c);
    add_output_opts(cmd_pipeline, pipeline_o.c);

    CodesOpts codes_o;
    auto* cmd_codes =
        app.add_subcommand("codes", "generate code families and measure pairs");
    cmd_codes
        ->add_option("--family", codes_o.family, "bukh-ma|random")
        ->check(CLI::IsMember({"bukh-ma", "random"}))
        ->capture_default_str();
    cmd_codes->add_option("--k", codes_o.k, "oscillation exponent")
        ->capture_default_str();
    cmd_codes->add_option("--length", codes_o.length,
                          "word length (random family)");
    cmd_codes->add_option("--size", codes_o.size, "word count (random family)");
    cmd_codes->add_option("--seed", codes_o.c.seed, "generator seed")
        ->capture_default_str();
    cmd_codes->add_flag("--measure", codes_o.measure,
                        "measure LCS over all word pairs");
    add_output_opts(cmd_codes, codes_o.c);

    CsOpts cs_o;
    auto* cmd_cs = app.add_subcommand(
        "cs-estimate", "Monte Carlo estimate of the random-pair LCS ratio");
    cmd_cs->add_option("--n", cs_o.n, "string length")->capture_default_str();
    cmd_cs->add_option("--trials", cs_o.trials, "trial count")
        ->capture_default_str();
    cmd_cs->add_option("--seed", cs_o.c.seed, "base seed")
        ->capture_default_str();
    add_output_opts(cmd_cs, cs_o.c);

    SpanOpts span_o;
    auto* cmd_span = app.add_subcommand(
        "span", "minimum substring-pair length-to-LCS ratio");
    cmd_span->add_option("s", span_o.s, "first strings file")->required();
    cmd_span->add_option("t", span_o.t, "second strings file")->required();
    cmd_span
        ->add_option("--span-floor", span_o.floor,
                     "substring length floor c as an exact rational")
        ->capture_default_str();
    cmd_span
        ->add_option("--budget-cells", span_o.budget_pairs,
                     "candidate-pair budget before the grid coarsens")
        ->capture_default_str();
    add_output_opts(cmd_span, span_o.c);

    VerifyOpts verify_o;
    auto* cmd_verify = app.add_subcommand(
        "verify-matching", "re-validate the matching inside a report");
    cmd_verify->add_option("report", verify_o.report_path, "report JSON file")
        ->required();
    add_output_opts(cmd_verify, verify_o.c);

    int code = 0;
    cmd_flags->callback([&] { code = run_flags(flags_o); });
    cmd_classify->callback([&] { code = run_classify(classify_o); });
    cmd_balance->callback([&] { code = run_balance(balance_o); });
    cmd_match->callback([&] { code = run_match(match_o); });
    cmd_lcs->callback([&] { code = run_lcs(lcs_o); });
    cmd_table->callback([&] { code = run_table(table_o); });
    cmd_collide->callback([&] { code = run_collide(collide_o); });
    cmd_pipeline->callback([&] { code = run_pipeline(pipeline_o); });
    cmd_codes->callback([&] { code = run_codes(codes_o); });
    cmd_cs->callback([&] { code = run_cs_estimate(cs_o); });
    cmd_span->callback([&] { code = run_span(span_o); });
    cmd_verify->callback([&] { code = run_verify_matching(verify_o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const ParseError& e) {
        return diagnostic("parse", e.what());
    } catch (const PreconditionError& e) {
        return diagnostic("precondition", e.what());
    } catch (const ResourceError& e) {
        return diagnostic("resource", e.what());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return code;
}
