#include "klooster/error.hpp"
#include "klooster/identities.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace klooster;

namespace {

py::int_ to_py(const BigInt& v) {
    if (v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max())
        return py::int_(static_cast<i64>(v));
    const std::string s = v.str();
    return py::reinterpret_steal<py::int_>(PyLong_FromString(s.c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& v) { return BigInt(py::repr(v).cast<std::string>()); }

SumOptions sum_options(bool exact, i64 exact_cap) { return {.exact_degree_cap = exact_cap, .exact = exact}; }

VerifyOptions verify_options(const std::string& backend, double tolerance, i64 exact_cap) {
    VerifyOptions o;
    if (backend == "float")
        o.backend = Backend::float_;
    else if (backend != "exact")
        throw py::value_error("backend must be 'exact' or 'float'");
    o.float_tolerance = tolerance;
    o.sums.exact_degree_cap = exact_cap;
    return o;
}

Weight parse_weight(const std::string& w) {
    for (Weight x : all_weights)
        if (to_string(x) == w)
            return x;
    throw py::value_error("weight must be one of 'one', 'chi', 'chi_conj'");
}

IdentityId identity_from(const std::string& name) {
    if (auto id = parse_identity(name))
        return *id;
    throw py::value_error("unknown identity '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact and floating-point Kloosterman-type sums";
    py::register_exception<Error>(m, "KloosterError", PyExc_ValueError);

    m.def("gcd", py::overload_cast<i64, i64>(&gcd));
    m.def("mod_inverse", &mod_inverse, py::arg("a"), py::arg("c"));
    m.def("is_prime", &is_prime);
    m.def("factorize", [](u64 n) {
        std::vector<std::pair<u64, int>> out;
        for (const auto& pp : factorize(n).factors)
            out.emplace_back(pp.prime, pp.exponent);
        return out;
    });
    m.def("euler_phi", py::overload_cast<u64>(&euler_phi));
    m.def("moebius", &moebius);
    m.def("cyclotomic_poly", [](i64 c) { return *cyclotomic_poly(c); }, py::arg("c"),
          "Coefficients of the c-th cyclotomic polynomial, constant term first.");

    py::class_<CyclotomicInteger>(m, "CyclotomicInteger")
        .def(py::init([](i64 c, const std::vector<py::int_>& coeffs) {
                 std::vector<BigInt> big;
                 for (const auto& x : coeffs)
                     big.push_back(from_py(x));
                 return CyclotomicInteger(c, std::move(big));
             }),
             py::arg("modulus"), py::arg("coeffs"))
        .def_static("from_integer", [](i64 c, const py::int_& k) { return CyclotomicInteger::from_integer(c, from_py(k)); })
        .def_property_readonly("modulus", &CyclotomicInteger::modulus)
        .def_property_readonly("coeffs", [](const CyclotomicInteger& x) {
            py::list out;
            for (const auto& a : x.coeffs())
                out.append(to_py(a));
            return out;
        })
        .def("is_zero", &CyclotomicInteger::is_zero)
        .def("lift", [](const CyclotomicInteger& x, i64 target) { return lift(x, target); })
        .def("__complex__", [](const CyclotomicInteger& x) { return to_complex(x); })
        .def("__eq__", [](const CyclotomicInteger& a, const CyclotomicInteger& b) { return a == b; })
        .def("__add__", [](const CyclotomicInteger& a, const CyclotomicInteger& b) { return add(a, b); })
        .def("__sub__", [](const CyclotomicInteger& a, const CyclotomicInteger& b) { return sub(a, b); })
        .def("__repr__", [](const CyclotomicInteger& x) { return "CyclotomicInteger(" + x.to_string() + ")"; });

    py::class_<SumValue>(m, "SumValue")
        .def_readonly("exact", &SumValue::exact)
        .def_readonly("approx", &SumValue::approx)
        .def_readonly("field_modulus", &SumValue::field_modulus)
        .def_readonly("terms", &SumValue::terms)
        .def("__complex__", [](const SumValue& s) { return s.approx; })
        .def("__repr__", [](const SumValue& s) {
            return "SumValue(approx=" + py::repr(py::cast(s.approx)).cast<std::string>() +
                   ", exact=" + (s.exact ? s.exact->to_string() : std::string("None")) + ")";
        });

    py::class_<DirichletCharacter>(m, "DirichletCharacter")
        .def_property_readonly("modulus", &DirichletCharacter::modulus)
        .def_property_readonly("order", &DirichletCharacter::order)
        .def_property_readonly("index", &DirichletCharacter::index)
        .def_property_readonly("exponents", &DirichletCharacter::exponents)
        .def("is_principal", &DirichletCharacter::is_principal)
        .def("__call__", [](const DirichletCharacter& chi, i64 x) -> std::optional<std::pair<i64, i64>> {
            if (auto v = chi.eval(x))
                return std::pair{v->num, v->den};
            return std::nullopt;
        }, "chi(x) as (num, den) meaning exp(2 pi i num/den), or None when gcd(x, N) > 1.")
        .def("__repr__", [](const DirichletCharacter& chi) { return "DirichletCharacter(" + chi.label() + ")"; });

    m.def("characters", &enumerate_characters, py::arg("modulus"));
    m.def("character", &character, py::arg("modulus"), py::arg("index"));

    m.def("kloosterman",
          [](i64 mm, i64 n, i64 c, bool exact, i64 cap) { return kloosterman(mm, n, c, sum_options(exact, cap)); },
          py::arg("m"), py::arg("n"), py::arg("c"), py::arg("exact") = true, py::arg("exact_cap") = 5000);
    m.def("kloosterman_crt", &kloosterman_crt, py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("ramanujan", [](i64 mm, i64 c) {
        const auto r = ramanujan(mm, c);
        return py::make_tuple(r.sum, r.closed_form);
    }, py::arg("m"), py::arg("c"), "(direct sum, divisor closed form)");
    m.def("xi",
          [](i64 mm, i64 n, i64 k, i64 c, bool exact, i64 cap) { return xi_sum(mm, n, k, c, sum_options(exact, cap)); },
          py::arg("m"), py::arg("n"), py::arg("k"), py::arg("c"), py::arg("exact") = true, py::arg("exact_cap") = 5000);
    m.def("twisted_kloosterman",
          [](const DirichletCharacter& chi, i64 mm, i64 n, i64 c) { return twisted_kloosterman(chi, mm, n, c); },
          py::arg("chi"), py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("selberg_rhs", [](i64 mm, i64 n, i64 c) { return selberg_rhs(mm, n, c); },
          py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("xi_rhs_mn", [](i64 mm, i64 n, i64 k, i64 c) { return xi_rhs_mn(mm, n, k, c); },
          py::arg("m"), py::arg("n"), py::arg("k"), py::arg("c"));
    m.def("xi_rhs_mk", [](i64 mm, i64 n, i64 k, i64 c) { return xi_rhs_mk(mm, n, k, c); },
          py::arg("m"), py::arg("n"), py::arg("k"), py::arg("c"));

    py::class_<IdentityReport>(m, "IdentityReport")
        .def_property_readonly("identity", [](const IdentityReport& r) { return std::string(to_string(r.id)); })
        .def_property_readonly("backend", [](const IdentityReport& r) { return std::string(to_string(r.backend)); })
        .def_property_readonly("passed", [](const IdentityReport& r) { return r.status == Status::pass; })
        .def_property_readonly("params", [](const IdentityReport& r) {
            py::dict d;
            d["m"] = r.params.m;
            d["n"] = r.params.n;
            d["k"] = r.params.k;
            d["c"] = r.params.c;
            if (r.params.chi)
                d["chi"] = py::make_tuple(r.params.chi->modulus, r.params.chi->index);
            if (r.params.weight)
                d["weight"] = std::string(to_string(*r.params.weight));
            return d;
        })
        .def_readonly("lhs", &IdentityReport::lhs)
        .def_readonly("rhs", &IdentityReport::rhs)
        .def_readonly("exact_equal", &IdentityReport::exact_equal)
        .def_readonly("abs_diff", &IdentityReport::abs_diff)
        .def("__repr__", [](const IdentityReport& r) {
            return "IdentityReport(" + std::string(to_string(r.id)) + ", c=" + std::to_string(r.params.c) + ", " +
                   std::string(to_string(r.status)) + ")";
        });

    m.def("verify_selberg",
          [](i64 mm, i64 n, i64 c, const std::string& backend, double tol) {
              return verify_selberg(mm, n, c, verify_options(backend, tol, 5000));
          },
          py::arg("m"), py::arg("n"), py::arg("c"), py::arg("backend") = "exact", py::arg("tolerance") = 1e-6);
    m.def("verify_xi_selberg",
          [](i64 mm, i64 n, i64 k, i64 c, const std::string& backend) {
              const auto both = verify_xi_selberg(mm, n, k, c, verify_options(backend, 1e-6, 5000));
              return py::make_tuple(both[0], both[1]);
          },
          py::arg("m"), py::arg("n"), py::arg("k"), py::arg("c"), py::arg("backend") = "exact");
    m.def("verify_xi_symmetry",
          [](i64 mm, i64 n, i64 k, i64 c) { return verify_xi_symmetry(mm, n, k, c); },
          py::arg("m"), py::arg("n"), py::arg("k"), py::arg("c"));
    m.def("verify_xi_reduces_to_s", [](i64 mm, i64 n, i64 c) { return verify_xi_reduces_to_s(mm, n, c); },
          py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("verify_twisted_candidate",
          [](const DirichletCharacter& chi, const std::string& weight, i64 mm, i64 n, i64 c) {
              return verify_twisted_candidate(chi, parse_weight(weight), mm, n, c);
          },
          py::arg("chi"), py::arg("weight"), py::arg("m"), py::arg("n"), py::arg("c"));

    m.def("proof_trace",
          [](i64 mm, i64 n, i64 c, i64 cap) { return proof_trace_selberg(mm, n, c, cap).stages; },
          py::arg("m"), py::arg("n"), py::arg("c"), py::arg("cap") = default_trace_cap,
          "Stage values A..E of the orthogonality argument for S(m, n; c).");

    m.def("sweep",
          [](const std::string& identity, i64 c_max, i64 c_min, int jobs, bool nontrivial_gcd) {
              SweepRanges r;
              r.c_min = c_min;
              r.c_max = c_max;
              r.nontrivial_gcd_only = nontrivial_gcd;
              SweepSummary s;
              {
                  py::gil_scoped_release release;
                  s = sweep(identity_from(identity), r, jobs);
              }
              py::dict d;
              d["total_cases"] = s.total_cases;
              d["filtered"] = s.filtered;
              d["failures"] = s.failures;
              return d;
          },
          py::arg("identity"), py::arg("c_max"), py::arg("c_min") = 1, py::arg("jobs") = 1,
          py::arg("nontrivial_gcd") = false);

    m.def("explore_twisted",
          [](i64 chi_modulus, i64 c_max, i64 c_min, int jobs) {
              TwistedExploration ex;
              {
                  py::gil_scoped_release release;
                  ex = explore_twisted(chi_modulus, c_min, c_max, jobs, 0);
              }
              py::list tallies;
              for (const auto& t : ex.tallies) {
                  py::dict d;
                  d["character_index"] = t.character_index;
                  d["character_order"] = t.character_order;
                  d["weight"] = std::string(to_string(t.weight));
                  d["holds"] = t.holds;
                  d["fails"] = t.fails;
                  tallies.append(d);
              }
              py::dict out;
              out["cases"] = ex.cases;
              out["filtered"] = ex.filtered;
              out["tallies"] = tallies;
              return out;
          },
          py::arg("chi_modulus"), py::arg("c_max"), py::arg("c_min") = 1, py::arg("jobs") = 1);
}
