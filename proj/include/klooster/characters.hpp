#pragma once

#include "klooster/modarith.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace klooster {

struct UnitGenerator {
    i64 generator = 1;
    i64 order = 1;
};

/// Cyclic decomposition of (Z/NZ)^* with a full discrete-log table.
class UnitGroupStructure {
public:
    explicit UnitGroupStructure(i64 modulus);

    i64 modulus() const { return modulus_; }
    const std::vector<UnitGenerator>& generators() const { return generators_; }
    i64 size() const; // phi(N)

    /// Exponent vector of x against generators(); empty when x is not a unit.
    std::optional<std::span<const i64>> dlog(i64 x) const;

private:
    i64 modulus_;
    std::vector<UnitGenerator> generators_;
    std::vector<i64> dlog_;       // modulus_ * rank entries
    std::vector<char> is_unit_;
};

UnitGroupStructure unit_group_structure(i64 modulus);
/// Shared immutable instance, constructed once per modulus.
std::shared_ptr<const UnitGroupStructure> shared_unit_group(i64 modulus);

/// Smallest primitive root modulo an odd prime power p^alpha.
i64 primitive_root(u64 p, int alpha);

/// exp(2 pi i num / den) with 0 <= num < den and gcd(num, den) = 1.
struct RootOfUnity {
    i64 num = 0;
    i64 den = 1;

    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

RootOfUnity operator*(RootOfUnity a, RootOfUnity b);
RootOfUnity conj(RootOfUnity a);

/// A character value: a root of unity, or nullopt for zero.
using CharValue = std::optional<RootOfUnity>;

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group, std::vector<i64> exponents,
                       i64 index);

    i64 modulus() const { return group_->modulus(); }
    i64 order() const { return order_; }
    i64 index() const { return index_; }
    const std::vector<i64>& exponents() const { return exponents_; }
    bool is_principal() const { return order_ == 1; }

    CharValue eval(i64 x) const;
    std::string label() const { return std::to_string(modulus()) + ":" + std::to_string(index_); }

private:
    std::shared_ptr<const UnitGroupStructure> group_;
    std::vector<i64> exponents_;
    i64 order_ = 1;
    i64 index_ = 0;
};

/// All phi(N) characters, in lexicographic order of exponent vectors.
/// Index 0 is the principal character.
std::vector<DirichletCharacter> enumerate_characters(i64 modulus);

/// Character number `index` of enumerate_characters(modulus). Throws OutOfRange.
DirichletCharacter character(i64 modulus, i64 index);

inline CharValue eval(const DirichletCharacter& chi, i64 x) { return chi.eval(x); }

} // namespace klooster
