#pragma once

#include "klooster/sums.hpp"

#include <array>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace klooster {

enum class IdentityId {
    selberg,
    xi_selberg_mn,
    xi_selberg_mk,
    xi_symmetry,
    xi_reduces_to_s,
    twisted_candidate,
};

std::string_view to_string(IdentityId id);
std::optional<IdentityId> parse_identity(std::string_view name);

enum class Backend { exact, float_ };
enum class Status { pass, fail };

std::string_view to_string(Backend b);
std::string_view to_string(Status s);

/// Candidate divisor weights tried by the twisted explorer.
enum class Weight { one, chi, chi_conj };
inline constexpr std::array<Weight, 3> all_weights{Weight::one, Weight::chi, Weight::chi_conj};
std::string_view to_string(Weight w);

struct CharacterRef {
    i64 modulus = 1;
    i64 index = 0;
};

struct IdentityParams {
    i64 m = 0;
    i64 n = 0;
    std::optional<i64> k = std::nullopt;
    i64 c = 1;
    std::optional<CharacterRef> chi = std::nullopt;
    std::optional<Weight> weight = std::nullopt;
};

struct IdentityReport {
    IdentityId id = IdentityId::selberg;
    IdentityParams params;
    Backend backend = Backend::exact;
    SumValue lhs;
    SumValue rhs;
    bool exact_equal = false;
    double abs_diff = 0.0;
    Status status = Status::fail;
};

/// Options shared by every verifier. Exact verdicts throw ExactUnavailable when the
/// field degree exceeds sums.exact_degree_cap.
struct VerifyOptions {
    SumOptions sums;
    Backend backend = Backend::exact;
    /// Pass threshold for the float backend.
    double float_tolerance = 1e-6;
};

IdentityReport verify_selberg(i64 m, i64 n, i64 c, const VerifyOptions& opts = {});
std::array<IdentityReport, 2> verify_xi_selberg(i64 m, i64 n, i64 k, i64 c,
                                                const VerifyOptions& opts = {});
/// Pass iff Xi over all six permutations of (m, n, k) agree. rhs holds the first
/// permutation that disagrees with lhs, or the last permutation when all agree.
IdentityReport verify_xi_symmetry(i64 m, i64 n, i64 k, i64 c, const VerifyOptions& opts = {});
/// Xi_1(m, n; c) against S(m, n; c).
IdentityReport verify_xi_reduces_to_s(i64 m, i64 n, i64 c, const VerifyOptions& opts = {});
/// S_chi(m, n; c) against sum_{d | (m,n,c)} w(d) d S_chi((m/d)(n/d), 1; c/d).
IdentityReport verify_twisted_candidate(const DirichletCharacter& chi, Weight weight, i64 m,
                                        i64 n, i64 c, const VerifyOptions& opts = {});

/// Right-hand side of the twisted candidate, exact in Z[zeta_lcm(c, ord chi)].
SumValue twisted_candidate_rhs(const DirichletCharacter& chi, Weight weight, i64 m, i64 n,
                               i64 c, const SumOptions& opts = {});

inline constexpr i64 default_trace_cap = 30;

struct ProofTrace {
    /// A: direct sum; B: triple sum over (a, x, y); C: after the x-sum;
    /// D: after solving for y; E: divisor-sum right-hand side.
    std::array<double, 5> stages{};
    double max_deviation = 0.0;
};

/// Throws TraceCapExceeded unless 1 <= c <= cap.
ProofTrace proof_trace_selberg(i64 m, i64 n, i64 c, i64 cap = default_trace_cap);

struct SweepRanges {
    i64 c_min = 1;
    i64 c_max = 0;
    /// Character modulus for twisted_candidate sweeps.
    i64 chi_modulus = 1;
    /// Keep only tuples whose governing gcd exceeds 1.
    bool nontrivial_gcd_only = false;
};

struct SweepSummary {
    IdentityId id = IdentityId::selberg;
    SweepRanges ranges;
    i64 total_cases = 0;
    i64 filtered = 0;
    std::vector<IdentityReport> failures;
    std::chrono::duration<double> wall_time{0};
};

/// Every tuple with c_min <= c <= c_max and all other parameters in [0, c), in
/// lexicographic (c, m, n, k) order. Output is independent of `jobs`.
SweepSummary sweep(IdentityId id, const SweepRanges& ranges, int jobs = 1,
                   const VerifyOptions& opts = {});

struct TwistedTally {
    i64 character_index = 0;
    i64 character_order = 1;
    Weight weight = Weight::one;
    i64 holds = 0;
    i64 fails = 0;
};

struct TwistedExploration {
    i64 chi_modulus = 1;
    i64 c_min = 1;
    i64 c_max = 0;
    /// Tuples tested per (character, weight).
    i64 cases = 0;
    /// Tuples rejected by N | c, gcd(c/N, N) = 1, gcd(n, N) = 1.
    i64 filtered = 0;
    std::vector<TwistedTally> tallies;
    std::vector<IdentityReport> counterexamples;
};

/// Tallies the twisted candidate for every character mod N and every weight.
/// `max_counterexamples` bounds how many failing reports are retained (tallies are complete).
TwistedExploration explore_twisted(i64 chi_modulus, i64 c_min, i64 c_max, int jobs = 1,
                                   std::size_t max_counterexamples = 1000,
                                   const VerifyOptions& opts = {});

} // namespace klooster
