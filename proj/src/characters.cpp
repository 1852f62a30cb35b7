#include "klooster/characters.hpp"

#include "klooster/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace klooster {

namespace {

i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

RootOfUnity normalized(i128 num, i64 den) {
    i64 n = mod(num, den);
    i64 g = gcd(n, den);
    if (g == 0)
        return {0, 1};
    return {n / g, den / g};
}

} // namespace

RootOfUnity operator*(RootOfUnity a, RootOfUnity b) {
    i64 den = lcm(a.den, b.den);
    return normalized(i128(a.num) * (den / a.den) + i128(b.num) * (den / b.den), den);
}

RootOfUnity conj(RootOfUnity a) { return normalized(-i128(a.num), a.den); }

i64 primitive_root(u64 p, int alpha) {
    if (p == 2 || alpha < 1)
        throw OutOfRange("primitive_root: expects an odd prime power");
    const i64 q = ipow(i64(p), alpha);
    const u64 phi = u64(q / i64(p)) * (p - 1);
    const auto phi_factors = factorize(phi).factors;
    for (i64 g = 2; g < q; ++g) {
        if (gcd(g, q) != 1)
            continue;
        bool generates = true;
        for (const auto& pp : phi_factors) {
            if (powmod(u64(g), phi / pp.prime, u64(q)) == 1) {
                generates = false;
                break;
            }
        }
        if (generates)
            return g;
    }
    throw std::logic_error("primitive_root: none found");
}

UnitGroupStructure::UnitGroupStructure(i64 modulus) : modulus_(modulus) {
    if (modulus < 1)
        throw OutOfRange("unit_group_structure: modulus must be positive");
    // Per prime power, a local generator; lifted to mod N by CRT (1 at the other primes).
    for (const auto& pp : factorize(u64(modulus)).factors) {
        const i64 q = ipow(i64(pp.prime), pp.exponent);
        const i64 rest = modulus / q;
        auto globalize = [&](i64 local) { return crt_combine(local, q, 1 % rest, rest); };
        if (pp.prime == 2) {
            if (pp.exponent == 2) {
                generators_.push_back({globalize(3), 2});
            } else if (pp.exponent >= 3) {
                generators_.push_back({globalize(q - 1), 2});
                generators_.push_back({globalize(5), q / 4});
            }
        } else {
            generators_.push_back({globalize(primitive_root(pp.prime, pp.exponent)), q / i64(pp.prime) * i64(pp.prime - 1)});
        }
    }

    const std::size_t rank = generators_.size();
    dlog_.assign(std::size_t(modulus) * rank, 0);
    is_unit_.assign(std::size_t(modulus), 0);
    const i64 count = size();
    std::vector<i64> e(rank, 0);
    i64 visited = 0;
    for (i64 index = 0; index < count; ++index) {
        i64 x = 1 % modulus;
        for (std::size_t i = 0; i < rank; ++i)
            x = mulmod(x, i64(powmod(u64(generators_[i].generator), u64(e[i]), u64(modulus))), modulus);
        if (is_unit_[std::size_t(x)])
            throw std::logic_error("unit_group_structure: generators are not independent");
        is_unit_[std::size_t(x)] = 1;
        std::copy(e.begin(), e.end(), dlog_.begin() + std::ptrdiff_t(std::size_t(x) * rank));
        ++visited;
        for (std::size_t i = rank; i-- > 0;) {
            if (++e[i] < generators_[i].order)
                break;
            e[i] = 0;
        }
    }
    if (visited != i64(euler_phi(u64(modulus))))
        throw std::logic_error("unit_group_structure: order mismatch");
}

i64 UnitGroupStructure::size() const {
    i64 s = 1;
    for (const auto& g : generators_)
        s *= g.order;
    return s;
}

std::optional<std::span<const i64>> UnitGroupStructure::dlog(i64 x) const {
    const i64 r = mod(x, modulus_);
    if (!is_unit_[std::size_t(r)])
        return std::nullopt;
    const std::size_t rank = generators_.size();
    return std::span<const i64>(dlog_.data() + std::size_t(r) * rank, rank);
}

UnitGroupStructure unit_group_structure(i64 modulus) { return UnitGroupStructure(modulus); }

std::shared_ptr<const UnitGroupStructure> shared_unit_group(i64 modulus) {
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const UnitGroupStructure>> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(modulus);
        if (it != cache.end())
            return it->second;
    }
    auto built = std::make_shared<const UnitGroupStructure>(modulus);
    std::lock_guard lock(mu);
    return cache.emplace(modulus, std::move(built)).first->second;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group,
                                       std::vector<i64> exponents, i64 index)
    : group_(std::move(group)), exponents_(std::move(exponents)), index_(index) {
    const auto& gens = group_->generators();
    if (exponents_.size() != gens.size())
        throw OutOfRange("DirichletCharacter: one exponent per generator expected");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (exponents_[i] < 0 || exponents_[i] >= gens[i].order)
            throw OutOfRange("DirichletCharacter: exponent out of range");
        order_ = lcm(order_, gens[i].order / gcd(exponents_[i], gens[i].order));
    }
}

CharValue DirichletCharacter::eval(i64 x) const {
    auto logs = group_->dlog(x);
    if (!logs)
        return std::nullopt;
    const auto& gens = group_->generators();
    // chi(x) = exp(2 pi i sum_i e_i l_i / o_i); o_i / gcd(e_i, o_i) divides order_.
    i128 acc = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const i64 o = gens[i].order;
        const i64 g = gcd(exponents_[i], o);
        if (exponents_[i] == 0)
            continue;
        // e/o = (e/g) / (o/g), and (o/g) | order_.
        acc += i128(exponents_[i] / g) * ((*logs)[i]) % (o / g) * (order_ / (o / g));
    }
    return normalized(acc, order_);
}

std::vector<DirichletCharacter> enumerate_characters(i64 modulus) {
    auto group = shared_unit_group(modulus);
    const auto& gens = group->generators();
    std::vector<DirichletCharacter> out;
    out.reserve(std::size_t(group->size()));
    std::vector<i64> e(gens.size(), 0);
    for (i64 index = 0; index < group->size(); ++index) {
        out.emplace_back(group, e, index);
        for (std::size_t i = gens.size(); i-- > 0;) {
            if (++e[i] < gens[i].order)
                break;
            e[i] = 0;
        }
    }
    return out;
}

DirichletCharacter character(i64 modulus, i64 index) {
    if (modulus < 1)
        throw OutOfRange("character: modulus must be positive");
    auto group = shared_unit_group(modulus);
    if (index < 0 || index >= group->size())
        throw OutOfRange("character: index " + std::to_string(index) + " out of range for modulus " +
                         std::to_string(modulus));
    const auto& gens = group->generators();
    std::vector<i64> e(gens.size(), 0);
    i64 rest = index;
    for (std::size_t i = gens.size(); i-- > 0;) {
        e[i] = rest % gens[i].order;
        rest /= gens[i].order;
    }
    return DirichletCharacter(group, std::move(e), index);
}

} // namespace klooster
