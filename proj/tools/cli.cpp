#include "cli.hpp"

#include "records.hpp"

#include "klooster/error.hpp"
#include "klooster/identities.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <random>

namespace klooster::cli {

namespace {

inline constexpr i64 sweep_c_cap = 5000;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    bool pretty = false;
    int jobs = 1;
    u64 seed = 1;
    std::string output;
};

struct SumArgs {
    std::string kind;
    i64 m = 0;
    i64 n = 0;
    std::optional<i64> k;
    i64 c = 1;
    std::string chi;
    std::string backend = "exact";
    i64 exact_cap = SumOptions{}.exact_degree_cap;
};

struct VerifyArgs {
    std::string identity;
    i64 m = 0;
    i64 n = 0;
    std::optional<i64> k;
    i64 c = 1;
    std::string chi;
    std::string weight;
    std::string backend = "exact";
    double tolerance = 1e-6;
};

struct SweepArgs {
    std::string identity;
    i64 c_min = 1;
    i64 c_max = 0;
    i64 chi_modulus = 1;
    bool nontrivial_gcd = false;
    bool timing = false;
    std::string backend = "exact";
    std::size_t max_counterexamples = 1000;
};

struct TraceArgs {
    i64 m = 0;
    i64 n = 0;
    i64 c = 1;
    i64 cap = default_trace_cap;
};

struct BenchArgs {
    i64 c_min = 2;
    i64 c_max = 100000;
    i64 samples = 100;
    std::string csv;
};

i64 parse_int(std::string_view s, const char* what) {
    i64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

/// "N:index" into the canonical character enumeration.
DirichletCharacter parse_character(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("character text must be N:index, got '" + text + "'");
    const i64 modulus = parse_int(std::string_view(text).substr(0, colon), "character modulus");
    const i64 index = parse_int(std::string_view(text).substr(colon + 1), "character index");
    if (modulus < 1)
        throw UsageError("character modulus must be positive");
    try {
        return character(modulus, index);
    } catch (const OutOfRange& e) {
        throw UsageError(e.what());
    }
}

Weight parse_weight(const std::string& name) {
    for (Weight w : all_weights)
        if (to_string(w) == name)
            return w;
    throw UsageError("unknown weight '" + name + "'");
}

Backend parse_backend(const std::string& name) {
    if (name == "exact")
        return Backend::exact;
    if (name == "float")
        return Backend::float_;
    throw UsageError("unknown backend '" + name + "'");
}

void require_modulus(i64 c) {
    if (c < 1)
        throw UsageError("modulus c must be positive, got " + std::to_string(c));
}

i64 require_k(const std::optional<i64>& k, const std::string& what) {
    if (!k)
        throw UsageError(what + " requires -k");
    return *k;
}

Json sum_params(const SumArgs& a) {
    Json p{{"kind", a.kind}, {"m", a.m}, {"n", a.n}};
    if (a.k)
        p["k"] = *a.k;
    p["c"] = a.c;
    if (!a.chi.empty())
        p["chi"] = a.chi;
    p["backend"] = a.backend;
    return p;
}

int cmd_eval(const SumArgs& a, RecordWriter& w) {
    require_modulus(a.c);
    if (a.backend != "exact" && a.backend != "float" && a.backend != "crt")
        throw UsageError("unknown backend '" + a.backend + "'");
    SumOptions opts;
    opts.exact = a.backend == "exact";
    opts.exact_degree_cap = a.exact_cap;
    const Json params = sum_params(a);

    if (a.backend == "crt") {
        if (a.kind != "kloosterman")
            throw UsageError("the crt backend only evaluates kloosterman sums");
        const auto z = kloosterman_crt(a.m, a.n, a.c);
        w.emit("eval", params, Json{{"re", z.real()}, {"im", z.imag()}, {"exact", nullptr}},
               RecordStatus::ok);
        return exit_ok;
    }

    Json result;
    if (a.kind == "kloosterman") {
        result = sum_json(kloosterman(a.m, a.n, a.c, opts));
    } else if (a.kind == "xi") {
        result = sum_json(xi_sum(a.m, a.n, require_k(a.k, "xi"), a.c, opts));
    } else if (a.kind == "twisted") {
        if (a.chi.empty())
            throw UsageError("twisted requires --chi N:index");
        const auto chi = parse_character(a.chi);
        if (a.c % chi.modulus() != 0)
            throw UsageError("character modulus " + std::to_string(chi.modulus()) +
                             " does not divide c = " + std::to_string(a.c));
        result = sum_json(twisted_kloosterman(chi, a.m, a.n, a.c, opts));
    } else if (a.kind == "ramanujan") {
        auto r = ramanujan(a.m, a.c, opts);
        result = sum_json(r.sum);
        result["closed_form"] = r.closed_form;
    } else if (a.kind == "selberg_rhs") {
        result = sum_json(selberg_rhs(a.m, a.n, a.c, opts));
    } else if (a.kind == "xi_rhs_mn") {
        result = sum_json(xi_rhs_mn(a.m, a.n, require_k(a.k, "xi_rhs_mn"), a.c, opts));
    } else if (a.kind == "xi_rhs_mk") {
        result = sum_json(xi_rhs_mk(a.m, a.n, require_k(a.k, "xi_rhs_mk"), a.c, opts));
    } else {
        throw UsageError("unknown sum kind '" + a.kind + "'");
    }
    w.emit("eval", params, result, RecordStatus::ok);
    return exit_ok;
}

int emit_reports(const std::string& command, const std::vector<IdentityReport>& reports,
                 RecordWriter& w) {
    int code = exit_ok;
    for (const auto& r : reports) {
        const bool pass = r.status == Status::pass;
        w.emit(command, params_json(r.params), report_json(r),
               pass ? RecordStatus::ok : RecordStatus::fail);
        if (!pass)
            code = exit_counterexample;
    }
    return code;
}

int cmd_verify(const VerifyArgs& a, RecordWriter& w) {
    require_modulus(a.c);
    VerifyOptions opts;
    opts.backend = parse_backend(a.backend);
    opts.float_tolerance = a.tolerance;

    std::vector<IdentityReport> reports;
    const std::string& id = a.identity;
    if (id == "selberg") {
        reports.push_back(verify_selberg(a.m, a.n, a.c, opts));
    } else if (id == "xi_selberg" || id == "xi_selberg_mn" || id == "xi_selberg_mk") {
        auto both = verify_xi_selberg(a.m, a.n, require_k(a.k, id), a.c, opts);
        if (id != "xi_selberg_mk")
            reports.push_back(both[0]);
        if (id != "xi_selberg_mn")
            reports.push_back(both[1]);
    } else if (id == "xi_symmetry") {
        reports.push_back(verify_xi_symmetry(a.m, a.n, require_k(a.k, id), a.c, opts));
    } else if (id == "xi_reduces_to_s") {
        reports.push_back(verify_xi_reduces_to_s(a.m, a.n, a.c, opts));
    } else if (id == "twisted_candidate" || id == "twisted") {
        if (a.chi.empty())
            throw UsageError("twisted_candidate requires --chi N:index");
        const auto chi = parse_character(a.chi);
        if (a.c % chi.modulus() != 0)
            throw UsageError("character modulus " + std::to_string(chi.modulus()) +
                             " does not divide c = " + std::to_string(a.c));
        if (a.weight.empty()) {
            for (Weight wt : all_weights)
                reports.push_back(verify_twisted_candidate(chi, wt, a.m, a.n, a.c, opts));
        } else {
            reports.push_back(verify_twisted_candidate(chi, parse_weight(a.weight), a.m, a.n, a.c, opts));
        }
    } else {
        throw UsageError("unknown identity '" + id + "'");
    }
    return emit_reports("verify", reports, w);
}

int cmd_sweep_twisted(const SweepArgs& a, const Globals& g, RecordWriter& w) {
    if (a.chi_modulus < 1)
        throw UsageError("--N must be positive");
    VerifyOptions opts;
    opts.backend = parse_backend(a.backend);
    const auto start = std::chrono::steady_clock::now();
    const auto ex = explore_twisted(a.chi_modulus, a.c_min, a.c_max, g.jobs, a.max_counterexamples, opts);
    const Json base{{"identity", "twisted_candidate"}, {"N", a.chi_modulus}, {"c_min", a.c_min},
                    {"c_max", a.c_max}, {"backend", a.backend}};
    for (const auto& t : ex.tallies) {
        Json params = base;
        params["chi"] = std::to_string(a.chi_modulus) + ":" + std::to_string(t.character_index);
        params["weight"] = std::string(to_string(t.weight));
        w.emit("sweep", params,
               Json{{"kind", "tally"}, {"character_order", t.character_order},
                    {"holds", t.holds}, {"fails", t.fails}},
               RecordStatus::ok);
    }
    for (const auto& r : ex.counterexamples) {
        Json result = report_json(r);
        result["kind"] = "counterexample";
        w.emit("sweep", params_json(r.params), result, RecordStatus::fail);
    }
    Json summary{{"kind", "summary"},
                 {"cases", ex.cases},
                 {"filtered", ex.filtered},
                 {"characters", std::int64_t(ex.tallies.size() / all_weights.size())},
                 {"counterexamples_emitted", std::int64_t(ex.counterexamples.size())}};
    if (a.timing)
        summary["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    w.emit("sweep", base, summary, RecordStatus::ok);
    // Exploratory: failing candidates are data, not counterexamples to a stated identity.
    return exit_ok;
}

int cmd_sweep(const SweepArgs& a, const Globals& g, RecordWriter& w) {
    if (a.c_max > sweep_c_cap)
        throw UsageError("--c-max exceeds the sweep cap of " + std::to_string(sweep_c_cap));
    if (a.identity == "twisted" || a.identity == "twisted_candidate")
        return cmd_sweep_twisted(a, g, w);

    std::vector<IdentityId> ids;
    if (a.identity == "xi_selberg") {
        ids = {IdentityId::xi_selberg_mn, IdentityId::xi_selberg_mk};
    } else if (auto id = parse_identity(a.identity)) {
        ids = {*id};
    } else {
        throw UsageError("unknown identity '" + a.identity + "'");
    }

    VerifyOptions opts;
    opts.backend = parse_backend(a.backend);
    SweepRanges ranges;
    ranges.c_min = a.c_min;
    ranges.c_max = a.c_max;
    ranges.nontrivial_gcd_only = a.nontrivial_gcd;

    int code = exit_ok;
    for (IdentityId id : ids) {
        const auto summary = sweep(id, ranges, g.jobs, opts);
        if (emit_reports("sweep", summary.failures, w) != exit_ok)
            code = exit_counterexample;
        Json params{{"identity", std::string(to_string(id))}, {"c_min", a.c_min},
                    {"c_max", a.c_max}, {"nontrivial_gcd", a.nontrivial_gcd},
                    {"backend", a.backend}};
        Json result{{"kind", "summary"},
                    {"total_cases", summary.total_cases},
                    {"filtered", summary.filtered},
                    {"failures", std::int64_t(summary.failures.size())}};
        if (a.timing)
            result["wall_time_s"] = summary.wall_time.count();
        w.emit("sweep", params, result,
               summary.failures.empty() ? RecordStatus::ok : RecordStatus::fail);
    }
    return code;
}

int cmd_trace(const TraceArgs& a, RecordWriter& w) {
    if (a.c < 1 || a.c > a.cap)
        throw UsageError("trace needs 1 <= c <= " + std::to_string(a.cap) + ", got " +
                         std::to_string(a.c));
    const auto t = proof_trace_selberg(a.m, a.n, a.c, a.cap);
    Json stages = Json::object();
    const char* names[] = {"A", "B", "C", "D", "E"};
    for (std::size_t i = 0; i < t.stages.size(); ++i)
        stages[names[i]] = t.stages[i];
    w.emit("trace", Json{{"m", a.m}, {"n", a.n}, {"c", a.c}},
           Json{{"stages", stages}, {"max_deviation", t.max_deviation}},
           t.max_deviation <= 1e-6 ? RecordStatus::ok : RecordStatus::fail);
    return t.max_deviation <= 1e-6 ? exit_ok : exit_counterexample;
}

template <class F>
double time_us(F&& f, std::complex<double>& out) {
    const auto start = std::chrono::steady_clock::now();
    out = f();
    return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
}

int cmd_bench(const BenchArgs& a, const Globals& g, RecordWriter& w) {
    if (a.samples < 0)
        throw UsageError("--samples must be non-negative");
    if (a.c_min < 1 || a.c_max < a.c_min)
        throw UsageError("bench needs 1 <= c-min <= c-max");
    std::ofstream csv;
    if (!a.csv.empty()) {
        csv.open(a.csv);
        if (!csv)
            throw UsageError("cannot open CSV output '" + a.csv + "'");
        csv << "c,m,n,distinct_primes,direct_us,crt_us,speedup,abs_diff\n";
    }
    std::mt19937_64 rng(g.seed);
    double max_diff = 0.0;
    std::vector<double> composite_speedups;
    for (i64 s = 0; s < a.samples; ++s) {
        const i64 c = std::uniform_int_distribution<i64>(a.c_min, a.c_max)(rng);
        const i64 m = std::uniform_int_distribution<i64>(0, c - 1)(rng);
        const i64 n = std::uniform_int_distribution<i64>(0, c - 1)(rng);
        const auto primes = std::int64_t(factorize(u64(c)).factors.size());
        std::complex<double> direct, fast;
        const double direct_us = time_us([&] { return kloosterman(m, n, c, {.exact = false}).approx; }, direct);
        const double crt_us = time_us([&] { return kloosterman_crt(m, n, c); }, fast);
        const double diff = std::abs(direct - fast);
        const double speedup = crt_us > 0 ? direct_us / crt_us : 0.0;
        max_diff = std::max(max_diff, diff);
        if (primes >= 2)
            composite_speedups.push_back(speedup);
        w.emit("bench", Json{{"c", c}, {"m", m}, {"n", n}},
               Json{{"kind", "sample"}, {"distinct_primes", primes}, {"direct_us", direct_us},
                    {"crt_us", crt_us}, {"speedup", speedup}, {"abs_diff", diff}},
               diff <= 1e-6 ? RecordStatus::ok : RecordStatus::fail);
        if (csv)
            csv << c << ',' << m << ',' << n << ',' << primes << ',' << direct_us << ',' << crt_us
                << ',' << speedup << ',' << diff << '\n';
    }
    if (a.samples == 0)
        return exit_ok;
    Json median = nullptr;
    if (!composite_speedups.empty()) {
        auto mid = composite_speedups.begin() + std::ptrdiff_t(composite_speedups.size() / 2);
        std::nth_element(composite_speedups.begin(), mid, composite_speedups.end());
        median = *mid;
    }
    w.emit("bench", Json{{"c_min", a.c_min}, {"c_max", a.c_max}, {"samples", a.samples}, {"seed", g.seed}},
           Json{{"kind", "summary"}, {"max_abs_diff", max_diff},
                {"median_speedup_multi_prime", median},
                {"multi_prime_samples", std::int64_t(composite_speedups.size())}},
           max_diff <= 1e-6 ? RecordStatus::ok : RecordStatus::fail);
    return max_diff <= 1e-6 ? exit_ok : exit_counterexample;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and numeric Kloosterman-type sums and identity verification", "klooster"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--pretty", g.pretty, "Human-readable lines instead of JSON records");
    app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->check(CLI::Range(1, 1024));
    app.add_option("--seed", g.seed, "Seed for randomized input selection");
    app.add_option("--output", g.output, "Write records to this file instead of stdout");

    SumArgs ev;
    auto* eval = app.add_subcommand("eval", "Evaluate one sum");
    eval->fallthrough();
    eval->add_option("kind", ev.kind,
                     "kloosterman | xi | twisted | ramanujan | selberg_rhs | xi_rhs_mn | xi_rhs_mk")
        ->required();
    eval->add_option("-m", ev.m, "First argument");
    eval->add_option("-n", ev.n, "Second argument");
    eval->add_option("-k", ev.k, "Congruence target for xi sums");
    eval->add_option("-c", ev.c, "Modulus")->required();
    eval->add_option("--chi", ev.chi, "Character as N:index");
    eval->add_option("--backend", ev.backend, "exact | float | crt");
    eval->add_option("--exact-cap", ev.exact_cap, "Largest field degree for the exact backend");

    VerifyArgs vf;
    auto* verify = app.add_subcommand("verify", "Check one identity instance");
    verify->fallthrough();
    verify->add_option("identity", vf.identity,
                       "selberg | xi_selberg | xi_selberg_mn | xi_selberg_mk | xi_symmetry | "
                       "xi_reduces_to_s | twisted_candidate")
        ->required();
    verify->add_option("-m", vf.m);
    verify->add_option("-n", vf.n);
    verify->add_option("-k", vf.k);
    verify->add_option("-c", vf.c)->required();
    verify->add_option("--chi", vf.chi, "Character as N:index");
    verify->add_option("--weight", vf.weight, "one | chi | chi_conj (default: all)");
    verify->add_option("--backend", vf.backend, "exact | float");
    verify->add_option("--tolerance", vf.tolerance, "Float backend pass threshold");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Check an identity over every tuple up to --c-max");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("identity", sw.identity,
                          "selberg | xi_selberg | xi_selberg_mn | xi_selberg_mk | xi_symmetry | "
                          "xi_reduces_to_s | twisted")
        ->required();
    sweep_cmd->add_option("--c-min", sw.c_min);
    sweep_cmd->add_option("--c-max", sw.c_max)->required();
    sweep_cmd->add_option("--N", sw.chi_modulus, "Character modulus for the twisted explorer");
    sweep_cmd->add_flag("--nontrivial-gcd", sw.nontrivial_gcd, "Only tuples with gcd(m, n, c) > 1");
    sweep_cmd->add_flag("--timing", sw.timing, "Include wall time in the summary record");
    sweep_cmd->add_option("--backend", sw.backend, "exact | float");
    sweep_cmd->add_option("--max-counterexamples", sw.max_counterexamples,
                          "Twisted explorer: counterexample records to emit");

    TraceArgs tr;
    auto* trace = app.add_subcommand("trace", "Replay the orthogonality proof stage by stage");
    trace->fallthrough();
    trace->add_option("-m", tr.m);
    trace->add_option("-n", tr.n);
    trace->add_option("-c", tr.c)->required();
    trace->add_option("--cap", tr.cap, "Largest admissible c (stage B has c^3 terms)");

    BenchArgs bn;
    auto* bench = app.add_subcommand("bench", "Time direct against CRT evaluation");
    bench->fallthrough();
    bench->add_option("--c-min", bn.c_min);
    bench->add_option("--c-max", bn.c_max);
    bench->add_option("--samples", bn.samples);
    bench->add_option("--csv", bn.csv, "Also write samples as CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        err << "klooster: " << e.what() << '\n';
        return exit_usage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!g.output.empty()) {
        file.open(g.output);
        if (!file) {
            err << "klooster: cannot open output '" << g.output << "'\n";
            return exit_usage;
        }
        sink = &file;
    }
    RecordWriter writer(*sink, g.pretty);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (*eval)
            return cmd_eval(ev, writer);
        if (*verify)
            return cmd_verify(vf, writer);
        if (*sweep_cmd)
            return cmd_sweep(sw, g, writer);
        if (*trace)
            return cmd_trace(tr, writer);
        if (*bench)
            return cmd_bench(bn, g, writer);
    } catch (const UsageError& e) {
        writer.emit(command, Json::object(), Json{{"message", e.what()}}, RecordStatus::error);
        err << "klooster: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        writer.emit(command, Json::object(), Json{{"message", e.what()}}, RecordStatus::error);
        err << "klooster: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace klooster::cli
