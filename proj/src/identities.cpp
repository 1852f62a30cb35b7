#include "klooster/identities.hpp"

#include "klooster/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace klooster {

std::string_view to_string(IdentityId id) {
    switch (id) {
    case IdentityId::selberg: return "selberg";
    case IdentityId::xi_selberg_mn: return "xi_selberg_mn";
    case IdentityId::xi_selberg_mk: return "xi_selberg_mk";
    case IdentityId::xi_symmetry: return "xi_symmetry";
    case IdentityId::xi_reduces_to_s: return "xi_reduces_to_s";
    case IdentityId::twisted_candidate: return "twisted_candidate";
    }
    return "unknown";
}

std::optional<IdentityId> parse_identity(std::string_view name) {
    for (auto id : {IdentityId::selberg, IdentityId::xi_selberg_mn, IdentityId::xi_selberg_mk,
                    IdentityId::xi_symmetry, IdentityId::xi_reduces_to_s,
                    IdentityId::twisted_candidate})
        if (to_string(id) == name)
            return id;
    return std::nullopt;
}

std::string_view to_string(Backend b) { return b == Backend::exact ? "exact" : "float"; }
std::string_view to_string(Status s) { return s == Status::pass ? "pass" : "fail"; }

std::string_view to_string(Weight w) {
    switch (w) {
    case Weight::one: return "one";
    case Weight::chi: return "chi";
    case Weight::chi_conj: return "chi_conj";
    }
    return "unknown";
}

namespace {

SumOptions sum_options(const VerifyOptions& opts) {
    SumOptions s = opts.sums;
    s.exact = opts.backend == Backend::exact;
    return s;
}

IdentityReport judge(IdentityId id, IdentityParams params, SumValue lhs, SumValue rhs,
                     const VerifyOptions& opts) {
    IdentityReport r;
    r.id = id;
    r.params = params;
    r.backend = opts.backend;
    r.abs_diff = std::abs(lhs.approx - rhs.approx);
    if (opts.backend == Backend::exact) {
        if (!lhs.exact || !rhs.exact)
            throw ExactUnavailable(std::string(to_string(id)) + ": field modulus " +
                                   std::to_string(lhs.field_modulus) +
                                   " exceeds the exact degree cap");
        const i64 common = lcm(lhs.field_modulus, rhs.field_modulus);
        r.exact_equal = equal_exact(lift(*lhs.exact, common), lift(*rhs.exact, common));
        r.status = r.exact_equal ? Status::pass : Status::fail;
    } else {
        r.status = r.abs_diff <= opts.float_tolerance ? Status::pass : Status::fail;
    }
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    return r;
}

} // namespace

IdentityReport verify_selberg(i64 m, i64 n, i64 c, const VerifyOptions& opts) {
    const auto s = sum_options(opts);
    return judge(IdentityId::selberg, {.m = m, .n = n, .c = c}, kloosterman(m, n, c, s),
                 selberg_rhs(m, n, c, s), opts);
}

std::array<IdentityReport, 2> verify_xi_selberg(i64 m, i64 n, i64 k, i64 c,
                                                const VerifyOptions& opts) {
    const auto s = sum_options(opts);
    const SumValue lhs = xi_sum(m, n, k, c, s);
    const IdentityParams p{.m = m, .n = n, .k = k, .c = c};
    return {judge(IdentityId::xi_selberg_mn, p, lhs, xi_rhs_mn(m, n, k, c, s), opts),
            judge(IdentityId::xi_selberg_mk, p, lhs, xi_rhs_mk(m, n, k, c, s), opts)};
}

IdentityReport verify_xi_symmetry(i64 m, i64 n, i64 k, i64 c, const VerifyOptions& opts) {
    const auto s = sum_options(opts);
    const std::array<std::array<i64, 3>, 5> others{{
        {m, k, n}, {n, m, k}, {n, k, m}, {k, m, n}, {k, n, m},
    }};
    SumValue lhs = xi_sum(m, n, k, c, s);
    const IdentityParams p{.m = m, .n = n, .k = k, .c = c};
    IdentityReport last;
    for (const auto& perm : others) {
        last = judge(IdentityId::xi_symmetry, p, lhs, xi_sum(perm[0], perm[1], perm[2], c, s), opts);
        if (last.status == Status::fail)
            break;
    }
    return last;
}

IdentityReport verify_xi_reduces_to_s(i64 m, i64 n, i64 c, const VerifyOptions& opts) {
    const auto s = sum_options(opts);
    return judge(IdentityId::xi_reduces_to_s, {.m = m, .n = n, .k = 1, .c = c}, xi_sum(m, n, 1, c, s),
                 kloosterman(m, n, c, s), opts);
}

SumValue twisted_candidate_rhs(const DirichletCharacter& chi, Weight weight, i64 m, i64 n,
                               i64 c, const SumOptions& opts) {
    if (c < 1)
        throw OutOfRange("twisted_candidate_rhs: modulus must be positive");
    m = mod(m, c);
    n = mod(n, c);
    const i64 field = twisted_field_modulus(chi, c);
    SumValue out;
    out.field_modulus = field;
    const bool exact = opts.exact && i64(euler_phi(u64(field))) <= opts.exact_degree_cap;
    if (exact)
        out.exact = CyclotomicInteger(field);
    for (i64 d : divisors(gcd(m, n, c))) {
        CharValue w = RootOfUnity{0, 1};
        if (weight != Weight::one)
            w = chi.eval(d);
        if (w && weight == Weight::chi_conj)
            w = conj(*w);
        if (!w)
            continue;
        const i64 reduced = c / d;
        SumValue t = twisted_kloosterman(chi, mod(i128(m / d) * (n / d), reduced), 1, reduced, opts);
        const double angle = 2.0 * std::numbers::pi * double(w->num) / double(w->den);
        out.approx += double(d) * std::polar(1.0, angle) * t.approx;
        out.terms += t.terms;
        if (exact) {
            const CyclotomicInteger lifted = rotate(lift(*t.exact, field), w->num * (field / w->den));
            out.exact = add(*out.exact, scale(BigInt(d), lifted));
        }
    }
    return out;
}

IdentityReport verify_twisted_candidate(const DirichletCharacter& chi, Weight weight, i64 m,
                                        i64 n, i64 c, const VerifyOptions& opts) {
    const auto s = sum_options(opts);
    const IdentityParams p{.m = m, .n = n, .c = c, .chi = CharacterRef{chi.modulus(), chi.index()}, .weight = weight};
    return judge(IdentityId::twisted_candidate, p, twisted_kloosterman(chi, m, n, c, s),
                 twisted_candidate_rhs(chi, weight, m, n, c, s), opts);
}

ProofTrace proof_trace_selberg(i64 m, i64 n, i64 c, i64 cap) {
    if (c < 1 || c > cap)
        throw TraceCapExceeded("proof_trace_selberg: c = " + std::to_string(c) +
                               " outside [1, " + std::to_string(cap) + "]");
    m = mod(m, c);
    n = mod(n, c);
    std::vector<double> cosines(static_cast<std::size_t>(c));
    for (i64 j = 0; j < c; ++j)
        cosines[std::size_t(j)] = std::cos(2.0 * std::numbers::pi * double(j) / double(c));
    auto e = [&](i128 exponent) { return cosines[std::size_t(mod(exponent, c))]; };

    ProofTrace trace;
    trace.stages[0] = kloosterman(m, n, c, {.exact = false}).approx.real();

    double b = 0.0;
    for (i64 a = 0; a < c; ++a)
        for (i64 x = 0; x < c; ++x)
            for (i64 y = 0; y < c; ++y)
                b += e(i128(x) * (m + i128(a) * y) + i128(n) * y - a);
    trace.stages[1] = b / double(c);

    double stage_c = 0.0;
    for (i64 d : divisors(c)) {
        const i64 q = c / d;
        for (i64 a = 0; a < q; ++a) {
            if (gcd(a, q) != 1)
                continue;
            for (i64 y = 0; y < c; ++y)
                if (mod(i128(a) * d * y + m, c) == 0)
                    stage_c += e(i128(n) * y - i128(a) * d);
        }
    }
    trace.stages[2] = stage_c;

    double stage_d = 0.0;
    for (i64 d : divisors(gcd(m, n, c))) {
        const i64 q = c / d;
        double inner = 0.0;
        for (i64 a = 0; a < q; ++a) {
            if (gcd(a, q) != 1)
                continue;
            inner += e(i128(mod_inverse(a, q)) * (m / d) * n + i128(a) * d);
        }
        stage_d += double(d) * inner;
    }
    trace.stages[3] = stage_d;

    trace.stages[4] = selberg_rhs(m, n, c, {.exact = false}).approx.real();

    const auto [lo, hi] = std::minmax_element(trace.stages.begin(), trace.stages.end());
    trace.max_deviation = *hi - *lo;
    return trace;
}

namespace {

struct SliceResult {
    i64 cases = 0;
    i64 filtered = 0;
    std::vector<IdentityReport> failures;
};

// Runs task(i) for i in [0, count) on `jobs` threads; results land in index order.
// Indices are handed out from the top since later moduli cost the most.
template <class Result, class Task>
std::vector<Result> run_ordered(std::size_t count, int jobs, Task task) {
    std::vector<Result> results(count);
    const std::size_t workers = std::min<std::size_t>(std::size_t(std::max(jobs, 1)), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            results[i] = task(i);
        return results;
    }
    std::atomic<std::size_t> taken{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = taken++; t < count; t = taken++)
                        results[count - 1 - t] = task(count - 1 - t);
                } catch (...) {
                    errors[w] = std::current_exception();
                    taken = count;
                }
            });
        }
    }
    for (auto& err : errors)
        if (err)
            std::rethrow_exception(err);
    return results;
}

bool twisted_modulus_ok(i64 c, i64 big_n) { return c % big_n == 0 && gcd(c / big_n, big_n) == 1; }

SliceResult sweep_modulus(IdentityId id, i64 c, const SweepRanges& ranges,
                          const VerifyOptions& opts) {
    SliceResult out;
    auto record = [&](IdentityReport r) {
        ++out.cases;
        if (r.status == Status::fail)
            out.failures.push_back(std::move(r));
    };
    auto keep = [&](i64 m, i64 n) { return !ranges.nontrivial_gcd_only || gcd(m, n, c) > 1; };

    switch (id) {
    case IdentityId::selberg:
    case IdentityId::xi_reduces_to_s:
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n) {
                if (!keep(m, n)) {
                    ++out.filtered;
                    continue;
                }
                record(id == IdentityId::selberg ? verify_selberg(m, n, c, opts)
                                                 : verify_xi_reduces_to_s(m, n, c, opts));
            }
        break;
    case IdentityId::xi_selberg_mn:
    case IdentityId::xi_selberg_mk:
    case IdentityId::xi_symmetry: {
        const auto s = sum_options(opts);
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n) {
                if (!keep(m, n)) {
                    out.filtered += c;
                    continue;
                }
                for (i64 k = 0; k < c; ++k) {
                    const IdentityParams p{.m = m, .n = n, .k = k, .c = c};
                    if (id == IdentityId::xi_symmetry)
                        record(verify_xi_symmetry(m, n, k, c, opts));
                    else if (id == IdentityId::xi_selberg_mn)
                        record(judge(id, p, xi_sum(m, n, k, c, s), xi_rhs_mn(m, n, k, c, s), opts));
                    else
                        record(judge(id, p, xi_sum(m, n, k, c, s), xi_rhs_mk(m, n, k, c, s), opts));
                }
            }
        break;
    }
    case IdentityId::twisted_candidate: {
        const i64 big_n = ranges.chi_modulus;
        const bool modulus_ok = twisted_modulus_ok(c, big_n);
        const auto chars = enumerate_characters(big_n);
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n) {
                if (!modulus_ok || gcd(n, big_n) != 1 || !keep(m, n)) {
                    ++out.filtered;
                    continue;
                }
                for (const auto& chi : chars)
                    for (Weight w : all_weights)
                        record(verify_twisted_candidate(chi, w, m, n, c, opts));
            }
        break;
    }
    }
    return out;
}

std::vector<i64> modulus_range(i64 c_min, i64 c_max) {
    std::vector<i64> cs;
    for (i64 c = std::max<i64>(c_min, 1); c <= c_max; ++c)
        cs.push_back(c);
    return cs;
}

} // namespace

SweepSummary sweep(IdentityId id, const SweepRanges& ranges, int jobs, const VerifyOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const auto cs = modulus_range(ranges.c_min, ranges.c_max);
    auto slices = run_ordered<SliceResult>(
        cs.size(), jobs, [&](std::size_t i) { return sweep_modulus(id, cs[i], ranges, opts); });
    SweepSummary summary;
    summary.id = id;
    summary.ranges = ranges;
    for (auto& slice : slices) {
        summary.total_cases += slice.cases;
        summary.filtered += slice.filtered;
        for (auto& f : slice.failures)
            summary.failures.push_back(std::move(f));
    }
    summary.wall_time = std::chrono::steady_clock::now() - start;
    return summary;
}

TwistedExploration explore_twisted(i64 chi_modulus, i64 c_min, i64 c_max, int jobs,
                                   std::size_t max_counterexamples, const VerifyOptions& opts) {
    if (chi_modulus < 1)
        throw OutOfRange("explore_twisted: character modulus must be positive");
    const auto chars = enumerate_characters(chi_modulus);
    const auto cs = modulus_range(c_min, c_max);
    const std::size_t slots = chars.size() * all_weights.size();

    struct Slice {
        i64 cases = 0;
        i64 filtered = 0;
        std::vector<i64> holds;
        std::vector<i64> fails;
        std::vector<IdentityReport> counterexamples;
    };
    auto slices = run_ordered<Slice>(cs.size(), jobs, [&](std::size_t i) {
        const i64 c = cs[i];
        Slice out;
        out.holds.assign(slots, 0);
        out.fails.assign(slots, 0);
        const bool modulus_ok = twisted_modulus_ok(c, chi_modulus);
        const auto s = sum_options(opts);
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n) {
                if (!modulus_ok || gcd(n, chi_modulus) != 1) {
                    ++out.filtered;
                    continue;
                }
                ++out.cases;
                const IdentityParams base{.m = m, .n = n, .c = c};
                for (std::size_t ci = 0; ci < chars.size(); ++ci) {
                    const SumValue lhs = twisted_kloosterman(chars[ci], m, n, c, s);
                    for (std::size_t wi = 0; wi < all_weights.size(); ++wi) {
                        IdentityParams p = base;
                        p.chi = CharacterRef{chi_modulus, chars[ci].index()};
                        p.weight = all_weights[wi];
                        auto r = judge(IdentityId::twisted_candidate, p, lhs,
                                       twisted_candidate_rhs(chars[ci], all_weights[wi], m, n, c, s), opts);
                        const std::size_t slot = ci * all_weights.size() + wi;
                        if (r.status == Status::pass) {
                            ++out.holds[slot];
                        } else {
                            ++out.fails[slot];
                            if (out.counterexamples.size() < max_counterexamples)
                                out.counterexamples.push_back(std::move(r));
                        }
                    }
                }
            }
        return out;
    });

    TwistedExploration ex;
    ex.chi_modulus = chi_modulus;
    ex.c_min = c_min;
    ex.c_max = c_max;
    for (std::size_t ci = 0; ci < chars.size(); ++ci)
        for (Weight w : all_weights)
            ex.tallies.push_back({chars[ci].index(), chars[ci].order(), w, 0, 0});
    for (auto& slice : slices) {
        ex.cases += slice.cases;
        ex.filtered += slice.filtered;
        for (std::size_t k = 0; k < slots; ++k) {
            ex.tallies[k].holds += slice.holds[k];
            ex.tallies[k].fails += slice.fails[k];
        }
        for (auto& r : slice.counterexamples)
            if (ex.counterexamples.size() < max_counterexamples)
                ex.counterexamples.push_back(std::move(r));
    }
    return ex;
}

} // namespace klooster
