#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gaplab/arith.hpp"
#include "gaplab/cover.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/gapstats.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/tuples.hpp"
#include "gaplab/variational.hpp"
#include "gaplab/weights.hpp"

namespace py = pybind11;
using namespace gaplab;

namespace {

std::string big_to_string(const BigInt& v) { return v.str(); }

TestFunction make_test_function(uint32_t k, const std::string& eta,
                                const std::vector<std::pair<std::string, std::vector<uint32_t>>>& terms) {
  Polynomial p(k);
  for (const auto& [coeff, exps] : terms) p.add_term(exps, parse_rational(coeff));
  return TestFunction{p, parse_rational(eta)};
}

py::dict mk_to_dict(const MkBound& mk) {
  py::dict d;
  d["k"] = mk.k;
  d["degree"] = mk.degree;
  d["eta"] = rat_to_string(mk.eta);
  d["bound"] = rat_to_string(mk.bound);
  d["bound_approx"] = rat_to_double(mk.bound);
  d["float_estimate"] = mk.float_estimate;
  py::list basis;
  for (const auto& [a, b] : mk.basis) basis.append(py::make_tuple(a, b));
  d["basis"] = basis;
  py::list coeffs;
  for (const auto& c : mk.coefficients) coeffs.append(rat_to_string(c));
  d["coefficients"] = coeffs;
  if (mk.bracketed) {
    d["bracket_lo"] = rat_to_string(mk.bracket_lo);
    d["bracket_hi"] = rat_to_string(mk.bracket_hi);
  }
  return d;
}

py::dict construction_to_dict(const ConstructionReport& rep) {
  py::dict d;
  d["tuple"] = rep.tuple.offsets();
  py::dict cover;
  for (const auto& [p, a] : rep.cover.entries) cover[py::int_(p)] = a;
  d["cover"] = cover;
  d["excluded"] = std::vector<uint64_t>(rep.cover.excluded.begin(), rep.cover.excluded.end());
  d["progression_residue"] = rep.progression_residue;
  d["P1"] = rep.P1;
  d["res1_size"] = rep.res1_size;
  d["res2_size"] = rep.res2_size;
  d["extension_rounds"] = rep.extension_rounds;
  d["residual_exact"] = rep.residual_exact;
  d["max_diff_prime_factor"] = rep.max_diff_prime_factor;
  d["max_position_error"] = rep.max_position_error;
  d["admissible"] = rep.admissible;
  py::list windows;
  for (const auto& w : rep.intervals) {
    py::dict wd;
    wd["lo"] = w.lo;
    wd["hi"] = w.hi;
    wd["candidates"] = w.candidates;
    wd["chosen"] = w.chosen;
    windows.append(wd);
  }
  d["windows"] = windows;
  return d;
}

ConstructionParams params_from_kwargs(uint32_t k, const std::vector<double>& betas, double x,
                                      uint64_t y, uint64_t z, uint64_t y1, uint64_t y2,
                                      uint64_t delta, const std::vector<uint64_t>& excluded,
                                      std::optional<uint64_t> ell) {
  ConstructionParams p;
  p.k = k;
  p.betas = betas;
  p.x = x;
  p.y = y;
  p.z = z;
  p.y1 = y1;
  p.y2 = y2;
  p.delta = delta;
  p.excluded.insert(excluded.begin(), excluded.end());
  p.ell = ell;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "prime-gap constructions: sieve arithmetic, admissible tuples, "
            "covering systems, variational functionals and gap statistics";

  py::register_exception<argument_error>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<gaplab::range_error>(m, "RangeError", PyExc_ValueError);
  py::register_exception<resource_error>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<infeasible_error>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<gaplab::parse_error>(m, "ParseError", PyExc_ValueError);

  py::class_<PrimeStore>(m, "PrimeStore")
      .def_static("build", &PrimeStore::build, py::arg("limit"),
                  py::arg("segment_size") = PrimeStore::kDefaultSegment,
                  py::arg("threads") = 0)
      .def_property_readonly("limit", &PrimeStore::limit)
      .def("rank", &PrimeStore::rank, py::arg("x"))
      .def("select", &PrimeStore::select, py::arg("n"))
      .def("is_prime", &PrimeStore::is_prime, py::arg("n"))
      .def("count", &PrimeStore::count)
      .def("primes", [](const PrimeStore& s) { return s.primes(); });

  m.def("chebyshev_psi", &chebyshev_psi, py::arg("store"), py::arg("N"));
  m.def("psi_progression", &psi_progression, py::arg("store"), py::arg("N"), py::arg("q"),
        py::arg("a"));
  m.def("smooth_count", &smooth_count, py::arg("x"), py::arg("y"));
  m.def("mertens_report", [](const PrimeStore& s, uint64_t x) {
    const auto r = mertens_report(s, x);
    return py::make_tuple(r.sum_reciprocal, r.product_form, r.predicted);
  });

  py::class_<KTuple>(m, "KTuple")
      .def(py::init<std::vector<uint64_t>>(), py::arg("offsets"))
      .def_static("parse", &KTuple::parse, py::arg("text"))
      .def_property_readonly("k", &KTuple::k)
      .def_property_readonly("offsets", &KTuple::offsets)
      .def_property_readonly("labels", &KTuple::labels)
      .def_property_readonly("parts", &KTuple::parts)
      .def("has_partition", &KTuple::has_partition)
      .def("__str__", &KTuple::to_string);

  m.def("is_admissible", &is_admissible, py::arg("tuple"));
  m.def("translate", &translate, py::arg("tuple"), py::arg("n"));
  m.def("partition_equal", &partition_equal, py::arg("tuple"), py::arg("parts"));
  m.def("prime_pattern", &prime_pattern, py::arg("store"), py::arg("tuple"), py::arg("n"));

  py::class_<ResidueCover>(m, "ResidueCover")
      .def(py::init<>())
      .def_readwrite("entries", &ResidueCover::entries)
      .def_readwrite("excluded", &ResidueCover::excluded)
      .def_readwrite("bound", &ResidueCover::bound);

  m.def("greedy_residue", &greedy_residue, py::arg("S"), py::arg("p"));
  m.def("residual", &residual, py::arg("z"), py::arg("cover"));
  m.def("extend_cover", &extend_cover, py::arg("tuple"), py::arg("S"), py::arg("primes"),
        py::arg("x"));
  m.def(
      "construct_tuple",
      [](const PrimeStore& store, uint32_t k, const std::vector<double>& betas, double x,
         uint64_t y, uint64_t z, uint64_t y1, uint64_t y2, uint64_t delta,
         const std::vector<uint64_t>& excluded, std::optional<uint64_t> ell,
         bool check_scale) {
        const auto p =
            params_from_kwargs(k, betas, x, y, z, y1, y2, delta, excluded, ell);
        return construction_to_dict(check_scale ? construct_tuple(store, p)
                                                : construct_tuple_unchecked_scale(store, p));
      },
      py::arg("store"), py::arg("k"), py::arg("betas"), py::arg("x"), py::arg("y"),
      py::arg("z"), py::arg("y1") = 0, py::arg("y2") = 0, py::arg("delta") = 0,
      py::arg("excluded") = std::vector<uint64_t>{}, py::arg("ell") = std::nullopt,
      py::arg("check_scale") = true);
  m.def("verify_sieved_interval", &verify_sieved_interval, py::arg("store"),
        py::arg("tuple"), py::arg("cover"), py::arg("n"), py::arg("z"));
  m.def("crt_base_point", [](const ResidueCover& c, uint64_t floor_exclusive) {
    return big_to_string(crt_base_point(c, floor_exclusive));
  });

  m.def("integral_I", [](uint32_t k, const std::string& eta,
                         const std::vector<std::pair<std::string, std::vector<uint32_t>>>& t) {
    return rat_to_string(integral_I(make_test_function(k, eta, t)));
  });
  m.def("integral_J", [](uint32_t k, const std::string& eta,
                         const std::vector<std::pair<std::string, std::vector<uint32_t>>>& t,
                         uint32_t i) {
    return rat_to_string(integral_J(make_test_function(k, eta, t), i));
  });
  m.def("integral_L", [](uint32_t k, const std::string& eta,
                         const std::vector<std::pair<std::string, std::vector<uint32_t>>>& t) {
    return rat_to_string(integral_L(make_test_function(k, eta, t)));
  });
  m.def("mk_lower_bound", [](uint32_t k, const std::string& eta, uint32_t degree) {
    return mk_to_dict(mk_lower_bound(k, parse_rational(eta), degree));
  });
  m.def("parse_test_function", [](const std::string& text) {
    return serialize_test_function(parse_test_function(text));
  });

  m.def(
      "lemma46_report",
      [](uint32_t k, double rho, double delta, uint64_t samples, uint64_t seed) {
        QuadratureConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        const auto rep = lemma46_report(k, rho, delta, cfg);
        py::dict d;
        d["k"] = rep.k;
        d["A"] = rep.A;
        d["T"] = rep.T;
        d["log_I"] = rep.integrals.log_I;
        d["log_J"] = rep.integrals.log_J;
        d["log_L"] = rep.integrals.log_L;
        d["J_over_I"] = rep.integrals.J_over_I;
        d["J_over_I_se"] = rep.integrals.J_over_I_se;
        d["L_over_I"] = rep.integrals.L_over_I;
        d["L_over_I_se"] = rep.integrals.L_over_I_se;
        d["logk_over_k"] = rep.logk_over_k;
        d["logk_over_k_sq"] = rep.logk_over_k_sq;
        d["pointwise_max_violation"] = rep.pointwise_max_violation;
        return d;
      },
      py::arg("k"), py::arg("rho") = 1.0, py::arg("delta") = 0.05,
      py::arg("samples") = 200000, py::arg("seed") = 1729);

  py::enum_<SumVariant>(m, "SumVariant")
      .value("S", SumVariant::S)
      .value("SPrime", SumVariant::SPrime);

  m.def(
      "weighted_sum_S",
      [](const PrimeStore& store, const KTuple& t, uint64_t b, uint64_t W, uint64_t N,
         uint32_t m_count, double delta, uint64_t Z, SumVariant variant) {
        const auto spec = SieveWeightSpec::triangle(t.k(), delta, Z);
        const auto res = weighted_sum_S(store, t, b, W, N, m_count, spec, variant);
        py::dict d;
        d["value"] = res.value;
        d["direct"] = res.direct_value;
        d["swapped"] = res.swapped_value;
        d["qualifying_n"] = res.qualifying_n;
        return d;
      },
      py::arg("store"), py::arg("tuple"), py::arg("b"), py::arg("W"), py::arg("N"),
      py::arg("m") = 1, py::arg("delta") = 0.05, py::arg("Z") = 1,
      py::arg("variant") = SumVariant::S);
  m.def("locate_witness", &locate_witness, py::arg("store"), py::arg("tuple"), py::arg("b"),
        py::arg("W"), py::arg("N"), py::arg("m") = 1);
  m.def("sieve_weight",
        [](uint32_t k, double delta, uint64_t Z, const std::vector<uint64_t>& d, uint64_t N) {
          const auto spec = SieveWeightSpec::triangle(k, delta, Z);
          return sieve_weight(spec, d, N, Z);
        },
        py::arg("k"), py::arg("delta"), py::arg("Z"), py::arg("d"), py::arg("N"));

  py::class_<GapRecord>(m, "GapRecord")
      .def_readonly("n", &GapRecord::n)
      .def_readonly("p", &GapRecord::p)
      .def_readonly("p_next", &GapRecord::p_next)
      .def_readonly("gap", &GapRecord::gap)
      .def_readonly("normalized", &GapRecord::normalized);

  m.def("gap_stream",
        [](const PrimeStore& s) { return gap_stream(s); }, py::arg("store"));
  m.def("poisson_histogram",
        [](const PrimeStore& s, const std::vector<double>& edges) {
          const auto records = gap_stream(s);
          const auto hist = poisson_histogram(records, edges);
          py::list rows;
          auto row_dict = [](const HistogramRow& r) {
            py::dict d;
            d["lo"] = r.lo;
            d["hi"] = r.hi;
            d["count"] = r.count;
            d["empirical"] = r.empirical;
            d["predicted"] = r.predicted;
            return d;
          };
          for (const auto& r : hist.rows) rows.append(row_dict(r));
          py::dict d;
          d["rows"] = rows;
          d["overflow"] = row_dict(hist.overflow);
          d["total"] = hist.total;
          d["max_cdf_discrepancy"] = hist.max_cdf_discrepancy;
          return d;
        },
        py::arg("store"), py::arg("edges"));
  m.def("chain_points",
        [](const PrimeStore& s, uint32_t m_len) {
          const auto records = gap_stream(s);
          return chain_points(records, m_len);
        },
        py::arg("store"), py::arg("m"));
  m.def("difference_hits",
        [](const PrimeStore& s, const std::vector<double>& betas, double tol) {
          const auto records = gap_stream(s);
          py::list out;
          for (const auto& dh : difference_hits(records, betas, tol)) {
            py::dict d;
            d["i"] = dh.i;
            d["j"] = dh.j;
            d["target"] = dh.target;
            d["hits"] = dh.hits;
            out.append(d);
          }
          return out;
        },
        py::arg("store"), py::arg("betas"), py::arg("tol"));
  m.def("measure_bounds", [](uint32_t kappa) {
    const auto mb = measure_bounds(kappa);
    py::dict d;
    d["kappa"] = mb.kappa;
    d["asymptotic_density"] = rat_to_string(mb.asymptotic_density);
    d["effective_density"] = rat_to_string(mb.effective_density);
    return d;
  });
  m.def(
      "bv_error_scan",
      [](const PrimeStore& store, uint64_t N, double theta, uint64_t q0, uint64_t Z) {
        const auto scan = bv_error_scan(store, N, theta, q0, Z);
        py::list rows;
        for (const auto& r : scan.rows) {
          py::dict d;
          d["q"] = r.q;
          d["max_error"] = r.max_error;
          d["partition_residual"] = r.partition_residual;
          rows.append(d);
        }
        py::dict d;
        d["psi"] = scan.psi_N;
        d["rows"] = rows;
        d["summed_total"] = scan.summed_total;
        return d;
      },
      py::arg("store"), py::arg("N"), py::arg("theta"), py::arg("q0") = 1, py::arg("Z") = 1);
}
