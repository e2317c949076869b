#include "gaplab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gaplab/arith.hpp"
#include "gaplab/cover.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/gapstats.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/report.hpp"
#include "gaplab/tuples.hpp"
#include "gaplab/variational.hpp"
#include "gaplab/weights.hpp"

namespace gaplab::cli {

namespace {

using json = nlohmann::json;
using report::csv_table;
using report::fmt_double;

const std::set<std::string> kCommands = {"primes",  "tuple",   "construct",
                                         "mk-bound", "lemma46", "weights-sum",
                                         "gaps",    "measure", "bv-scan"};

const std::set<std::string> kKeys = {
    "limit", "k",     "betas",   "x",      "y",       "z",     "eta",   "degree",
    "theta", "q0",    "kappa",   "tol",    "seed",    "out",   "format", "command",
    "offsets", "parts", "n",     "m",      "N",       "b",     "W",     "variant",
    "support-delta", "Z",        "y1",     "y2",      "delta", "ell",   "exclude",
    "edges", "rho",   "samples", "select", "basis-file", "segment", "chain"};

void apply_pair(RunConfig& cfg, const std::string& key, const std::string& value,
                bool from_file) {
  if (!kKeys.count(key))
    throw parse_error("unknown key '" + key + "'");
  if (key == "command") {
    if (!kCommands.count(value)) throw parse_error("unknown command '" + value + "'");
    cfg.command = value;
  } else if (key == "seed") {
    try {
      cfg.seed = std::stoull(value);
    } catch (const std::exception&) {
      throw parse_error("malformed seed '" + value + "'");
    }
  } else if (key == "out") {
    cfg.output_path = value;
  } else if (key == "format") {
    if (value != "csv" && value != "tree")
      throw parse_error("format must be 'csv' or 'tree', got '" + value + "'");
    cfg.format = value;
  } else {
    cfg.params[key] = value;
  }
  (void)from_file;
}

uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw parse_error("malformed integer for --" + key + ": '" + value + "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw parse_error("malformed number for --" + key + ": '" + value + "'");
  }
}

std::vector<double> to_vector(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(to_double(key, tok));
  if (out.empty()) throw parse_error("malformed vector for --" + key + ": '" + value + "'");
  return out;
}

struct Params {
  const std::map<std::string, std::string>& map;

  bool has(const std::string& k) const { return map.count(k) > 0; }
  std::string str(const std::string& k) const {
    auto it = map.find(k);
    if (it == map.end()) throw argument_error("missing required --" + k);
    return it->second;
  }
  uint64_t u64(const std::string& k) const { return to_u64(k, str(k)); }
  uint64_t u64_or(const std::string& k, uint64_t dflt) const {
    return has(k) ? u64(k) : dflt;
  }
  double real(const std::string& k) const { return to_double(k, str(k)); }
  double real_or(const std::string& k, double dflt) const {
    return has(k) ? real(k) : dflt;
  }
  std::vector<double> vec(const std::string& k) const { return to_vector(k, str(k)); }
};

std::string kv_csv(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : kv) rows.push_back({k, v});
  return csv_table({"key", "value"}, rows);
}

json kv_json(const std::vector<std::pair<std::string, std::string>>& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

// --- command implementations -------------------------------------------

std::string cmd_primes(const Params& p, const std::string& format) {
  const uint64_t limit = p.u64("limit");
  const auto store = PrimeStore::build(limit, static_cast<uint32_t>(p.u64_or("segment", PrimeStore::kDefaultSegment)));
  const auto mert = mertens_report(store, limit);
  std::vector<std::pair<std::string, std::string>> kv = {
      {"limit", std::to_string(limit)},
      {"pi", std::to_string(store.count())},
      {"psi", fmt_double(chebyshev_psi(store, limit))},
      {"mertens_sum_reciprocal", fmt_double(mert.sum_reciprocal)},
      {"mertens_product", fmt_double(mert.product_form)},
      {"mertens_predicted", fmt_double(mert.predicted)},
  };
  if (p.has("select"))
    kv.emplace_back("p_" + p.str("select"), std::to_string(store.select(p.u64("select"))));
  if (format == "tree") return kv_json(kv).dump(2) + "\n";
  return kv_csv(kv);
}

std::string cmd_tuple(const Params& p, const std::string& format) {
  KTuple t = KTuple::parse(p.str("offsets"));
  if (p.has("parts")) t = partition_equal(t, static_cast<uint32_t>(p.u64("parts")));
  std::vector<std::pair<std::string, std::string>> kv = {
      {"offsets", t.to_string()},
      {"k", std::to_string(t.k())},
      {"admissible", is_admissible(t) ? "true" : "false"},
  };
  if (t.has_partition()) {
    kv.emplace_back("parts", std::to_string(t.parts()));
    std::string labels;
    for (uint32_t i = 0; i < t.k(); ++i) {
      if (i) labels += ',';
      labels += std::to_string(t.label(i));
    }
    kv.emplace_back("labels", labels);
  }
  if (p.has("n")) {
    const uint64_t n = p.u64("n");
    const auto translated = translate(t, n);
    std::string ts;
    for (size_t i = 0; i < translated.size(); ++i) {
      if (i) ts += ',';
      ts += std::to_string(translated[i]);
    }
    kv.emplace_back("translated", ts);
    if (p.has("limit") && t.has_partition()) {
      const auto store = PrimeStore::build(p.u64("limit"));
      const auto counts = prime_pattern(store, t, n);
      std::string cs;
      for (size_t i = 0; i < counts.size(); ++i) {
        if (i) cs += ',';
        cs += std::to_string(counts[i]);
      }
      kv.emplace_back("part_prime_counts", cs);
    }
  }
  if (format == "tree") return kv_json(kv).dump(2) + "\n";
  return kv_csv(kv);
}

ConstructionParams construct_params(const Params& p) {
  ConstructionParams cp;
  const auto betas = p.vec("betas");
  cp.k = static_cast<uint32_t>(p.u64_or("k", betas.size()));
  cp.betas = betas;
  cp.x = p.real_or("x", 1.0);
  cp.y = p.u64("y");
  cp.z = p.u64("z");
  cp.y1 = p.u64_or("y1", 0);
  cp.y2 = p.u64_or("y2", 0);
  cp.delta = p.u64_or("delta", 0);
  if (p.has("ell")) cp.ell = p.u64("ell");
  if (p.has("exclude"))
    for (double v : p.vec("exclude")) cp.excluded.insert(static_cast<uint64_t>(v));
  return cp;
}

std::string cmd_construct(const Params& p, const std::string& format) {
  ConstructionParams cp = construct_params(p);
  const uint64_t limit = p.u64_or("limit", cp.z);
  const auto store = PrimeStore::build(std::max(limit, cp.z));
  const ConstructionReport rep = construct_tuple(store, cp);

  if (format == "tree") {
    json j;
    j["parameters"] = {{"k", rep.params.k},     {"x", rep.params.x},
                       {"y", rep.params.y},     {"y1", rep.params.y1},
                       {"y2", rep.params.y2},   {"z", rep.params.z},
                       {"delta", rep.params.delta}};
    j["parameters"]["betas"] = rep.params.betas;
    if (rep.params.ell) j["parameters"]["ell"] = *rep.params.ell;
    j["parameters"]["excluded"] = rep.params.excluded;
    j["stages"] = {{"res1", rep.res1_size},
                   {"res2", rep.res2_size},
                   {"extension_rounds", rep.extension_rounds}};
    json steps = json::array();
    for (const auto& s : rep.greedy_steps)
      steps.push_back({{"p", s.p}, {"a", s.residue}, {"removed", s.removed},
                       {"left", s.remaining}});
    j["stages"]["greedy"] = steps;
    j["progression"] = {{"A", rep.progression_residue}, {"P1", rep.P1}};
    json windows = json::array();
    for (const auto& w : rep.intervals)
      windows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"candidates", w.candidates},
                         {"chosen", w.chosen}});
    j["windows"] = windows;
    j["tuple"] = rep.tuple.offsets();
    json cover = json::object();
    for (const auto& [pp, a] : rep.cover.entries) cover[std::to_string(pp)] = a;
    j["cover"] = cover;
    j["verdicts"] = {{"residual_exact", rep.residual_exact},
                     {"max_diff_prime_factor", rep.max_diff_prime_factor},
                     {"max_position_error", rep.max_position_error},
                     {"admissible", rep.admissible}};
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "construct v1\n";
  out << "k " << rep.params.k << "\n";
  out << "betas ";
  for (size_t i = 0; i < rep.params.betas.size(); ++i)
    out << (i ? "," : "") << fmt_double(rep.params.betas[i]);
  out << "\n";
  out << "x " << fmt_double(rep.params.x) << "\n";
  out << "y " << rep.params.y << "\n";
  out << "y1 " << rep.params.y1 << "\n";
  out << "y2 " << rep.params.y2 << "\n";
  out << "z " << rep.params.z << "\n";
  out << "delta " << rep.params.delta << "\n";
  out << "ell " << (rep.params.ell ? std::to_string(*rep.params.ell) : "-") << "\n";
  out << "res1 " << rep.res1_size << "\n";
  for (const auto& s : rep.greedy_steps)
    out << "greedy " << s.p << " " << s.residue << " removed " << s.removed << " left "
        << s.remaining << "\n";
  out << "res2 " << rep.res2_size << "\n";
  out << "progression " << rep.progression_residue << " mod " << rep.P1 << "\n";
  for (size_t i = 0; i < rep.intervals.size(); ++i) {
    const auto& w = rep.intervals[i];
    out << "window " << (i + 1) << " (" << fmt_double(w.lo) << "," << fmt_double(w.hi)
        << "] candidates " << w.candidates << " chosen " << w.chosen << "\n";
  }
  out << "tuple " << rep.tuple.to_string() << "\n";
  for (const auto& [pp, a] : rep.cover.entries) out << "cover " << pp << " " << a << "\n";
  for (uint64_t pp : rep.cover.excluded) out << "excluded " << pp << "\n";
  out << "extension-rounds " << rep.extension_rounds << "\n";
  out << "verdict residual " << (rep.residual_exact ? "exact" : "MISMATCH") << "\n";
  out << "verdict smoothness max-prime-factor " << rep.max_diff_prime_factor << " bound "
      << rep.params.y << "\n";
  out << "verdict position-error " << rep.max_position_error << " bound "
      << rep.params.delta << "\n";
  out << "verdict admissible " << (rep.admissible ? "true" : "false") << "\n";
  return out.str();
}

std::string cmd_mk_bound(const Params& p, const std::string& format) {
  const uint32_t k = static_cast<uint32_t>(p.u64("k"));
  const Rat eta = p.has("eta") ? parse_rational(p.str("eta")) : Rat(0);
  const uint32_t degree = static_cast<uint32_t>(p.u64("degree"));
  MkBound mk;
  if (p.has("basis-file")) {
    std::ifstream in(p.str("basis-file"));
    if (!in) throw io_error("cannot read basis file " + p.str("basis-file"));
    std::stringstream buf;
    buf << in.rdbuf();
    mk = mk_lower_bound_with_basis(parse_basis_file(buf.str()));
  } else {
    mk = mk_lower_bound(k, eta, degree);
  }
  std::vector<std::pair<std::string, std::string>> kv = {
      {"k", std::to_string(mk.k)},
      {"eta", rat_to_string(mk.eta)},
      {"degree", std::to_string(mk.degree)},
      {"basis_size", std::to_string(mk.coefficients.size())},
      {"bound", rat_to_string(mk.bound)},
      {"bound_approx", fmt_double(rat_to_double(mk.bound))},
      {"float_estimate", fmt_double(mk.float_estimate)},
  };
  if (mk.bracketed) {
    kv.emplace_back("bracket_lo", fmt_double(rat_to_double(mk.bracket_lo)));
    kv.emplace_back("bracket_hi", fmt_double(rat_to_double(mk.bracket_hi)));
  }
  if (format == "tree") return kv_json(kv).dump(2) + "\n";
  return kv_csv(kv);
}

std::string cmd_lemma46(const Params& p, uint64_t seed, const std::string& format) {
  QuadratureConfig cfg;
  cfg.seed = seed;
  cfg.samples = p.u64_or("samples", 200000);
  const auto rep = lemma46_report(static_cast<uint32_t>(p.u64("k")),
                                  p.real_or("rho", 1.0), p.real_or("delta", 0.05), cfg);
  std::vector<std::pair<std::string, std::string>> kv = {
      {"k", std::to_string(rep.k)},
      {"A", fmt_double(rep.A)},
      {"T", fmt_double(rep.T)},
      {"rho", fmt_double(rep.rho)},
      {"delta", fmt_double(rep.delta)},
      {"log_I", fmt_double(rep.integrals.log_I)},
      {"log_J", fmt_double(rep.integrals.log_J)},
      {"log_L", fmt_double(rep.integrals.log_L)},
      {"J_over_I", fmt_double(rep.integrals.J_over_I)},
      {"J_over_I_se", fmt_double(rep.integrals.J_over_I_se)},
      {"L_over_I", fmt_double(rep.integrals.L_over_I)},
      {"L_over_I_se", fmt_double(rep.integrals.L_over_I_se)},
      {"logk_over_k", fmt_double(rep.logk_over_k)},
      {"logk_over_k_sq", fmt_double(rep.logk_over_k_sq)},
      {"pointwise_max_violation", fmt_double(rep.pointwise_max_violation)},
      {"pointwise_samples", std::to_string(rep.pointwise_samples)},
  };
  if (format == "tree") return kv_json(kv).dump(2) + "\n";
  return kv_csv(kv);
}

std::string cmd_weights_sum(const Params& p, const std::string& format) {
  KTuple t = KTuple::parse(p.str("offsets"));
  t = partition_equal(t, static_cast<uint32_t>(p.u64_or("parts", t.k())));
  const uint64_t N = p.u64("N");
  const uint64_t W = p.u64_or("W", 1);
  const uint64_t b = p.u64_or("b", 0);
  const uint32_t m = static_cast<uint32_t>(p.u64_or("m", 1));
  const uint64_t Z = p.u64_or("Z", 1);
  const double delta = p.real_or("support-delta", 0.05);
  SieveWeightSpec spec = SieveWeightSpec::triangle(t.k(), delta, Z);
  const std::string variant_name = p.has("variant") ? p.str("variant") : "s";
  SumVariant variant;
  if (variant_name == "s")
    variant = SumVariant::S;
  else if (variant_name == "sprime")
    variant = SumVariant::SPrime;
  else
    throw parse_error("variant must be 's' or 'sprime'");
  const auto store = PrimeStore::build(p.u64_or("limit", 2 * N + t.max_offset()));
  const auto res = weighted_sum_S(store, t, b, W, N, m, spec, variant);
  std::vector<std::pair<std::string, std::string>> kv = {
      {"value", fmt_double(res.value)},
      {"direct", fmt_double(res.direct_value)},
      {"swapped", fmt_double(res.swapped_value)},
      {"qualifying_n", std::to_string(res.qualifying_n)},
      {"variant", variant_name},
  };
  if (res.value > 0) {
    const auto witness = locate_witness(store, t, b, W, N, m);
    kv.emplace_back("witness_n", witness ? std::to_string(*witness) : "none");
  }
  if (format == "tree") return kv_json(kv).dump(2) + "\n";
  return kv_csv(kv);
}

std::string cmd_gaps(const Params& p, const std::string& format) {
  const auto store = PrimeStore::build(p.u64("limit"));
  const auto records = gap_stream(store);
  std::vector<double> edges;
  if (p.has("edges")) {
    edges = to_vector("edges", p.str("edges"));
  } else {
    for (int i = 0; i <= 16; ++i) edges.push_back(i * 0.25);
  }
  const auto hist = poisson_histogram(records, edges);

  double mean = 0;
  for (const auto& r : records) mean += r.normalized;
  if (!records.empty()) mean /= static_cast<double>(records.size());

  std::vector<std::vector<std::string>> rows;
  for (const auto& row : hist.rows)
    rows.push_back({fmt_double(row.lo), fmt_double(row.hi), std::to_string(row.count),
                    fmt_double(row.empirical), fmt_double(row.predicted)});
  rows.push_back({fmt_double(hist.overflow.lo), "inf", std::to_string(hist.overflow.count),
                  fmt_double(hist.overflow.empirical), fmt_double(hist.overflow.predicted)});

  std::vector<std::pair<std::string, std::string>> summary = {
      {"records", std::to_string(records.size())},
      {"mean_normalized", fmt_double(mean)},
      {"max_cdf_discrepancy", fmt_double(hist.max_cdf_discrepancy)},
  };

  std::vector<std::vector<std::string>> hit_rows;
  if (p.has("betas")) {
    const auto betas = p.vec("betas");
    const double tol = p.real_or("tol", 0.01);
    for (const auto& dh : difference_hits(records, betas, tol)) {
      std::string sample;
      for (size_t i = 0; i < dh.hits.size() && i < 5; ++i) {
        if (i) sample += ';';
        sample += std::to_string(dh.hits[i]);
      }
      hit_rows.push_back({std::to_string(dh.i), std::to_string(dh.j),
                          fmt_double(dh.target), std::to_string(dh.hits.size()), sample});
    }
  }
  if (p.has("chain")) {
    const auto points = chain_points(records, static_cast<uint32_t>(p.u64("chain")));
    summary.emplace_back("chain_windows", std::to_string(points.size()));
  }

  if (format == "tree") {
    json j;
    j["summary"] = kv_json(summary);
    json hrows = json::array();
    for (const auto& row : hist.rows)
      hrows.push_back({{"lo", row.lo}, {"hi", row.hi}, {"count", row.count},
                       {"empirical", row.empirical}, {"predicted", row.predicted}});
    hrows.push_back({{"lo", hist.overflow.lo}, {"hi", "inf"},
                     {"count", hist.overflow.count},
                     {"empirical", hist.overflow.empirical},
                     {"predicted", hist.overflow.predicted}});
    j["histogram"] = hrows;
    if (!hit_rows.empty()) {
      json hj = json::array();
      for (const auto& row : hit_rows)
        hj.push_back({{"i", row[0]}, {"j", row[1]}, {"target", row[2]},
                      {"count", row[3]}, {"first_hits", row[4]}});
      j["difference_hits"] = hj;
    }
    return j.dump(2) + "\n";
  }

  std::string out = kv_csv(summary);
  out += "\n";
  out += csv_table({"lo", "hi", "count", "empirical", "predicted"}, rows);
  if (!hit_rows.empty()) {
    out += "\n";
    out += csv_table({"i", "j", "target", "count", "first_hits"}, hit_rows);
  }
  return out;
}

std::string cmd_measure(const Params& p, const std::string& format) {
  const auto mb = measure_bounds(static_cast<uint32_t>(p.u64("kappa")));
  std::vector<std::pair<std::string, std::string>> kv = {
      {"kappa", std::to_string(mb.kappa)},
      {"asymptotic_density", rat_to_string(mb.asymptotic_density)},
      {"effective_density", rat_to_string(mb.effective_density)},
      {"asymptotic_approx", fmt_double(rat_to_double(mb.asymptotic_density))},
      {"effective_approx", fmt_double(rat_to_double(mb.effective_density))},
  };
  if (format == "tree") return kv_json(kv).dump(2) + "\n";
  return kv_csv(kv);
}

std::string cmd_bv_scan(const Params& p, const std::string& format) {
  const uint64_t N = p.u64("limit");
  const auto store = PrimeStore::build(N);
  const auto scan = bv_error_scan(store, N, p.real_or("theta", 0.3),
                                  p.u64_or("q0", 1), p.u64_or("Z", 1));
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : scan.rows)
    rows.push_back({std::to_string(row.q), fmt_double(row.max_error),
                    fmt_double(row.partition_residual)});
  std::vector<std::pair<std::string, std::string>> summary = {
      {"N", std::to_string(scan.N)},
      {"theta", fmt_double(scan.theta)},
      {"q0", std::to_string(scan.q0)},
      {"Z", std::to_string(scan.Z)},
      {"psi", fmt_double(scan.psi_N)},
      {"rows", std::to_string(scan.rows.size())},
      {"summed_total", fmt_double(scan.summed_total)},
  };
  if (format == "tree") {
    json j;
    j["summary"] = kv_json(summary);
    json rj = json::array();
    for (const auto& row : scan.rows)
      rj.push_back({{"q", row.q}, {"max_error", row.max_error},
                    {"partition_residual", row.partition_residual}});
    j["rows"] = rj;
    return j.dump(2) + "\n";
  }
  std::string out = kv_csv(summary);
  out += "\n";
  out += csv_table({"q", "max_error", "partition_residual"}, rows);
  return out;
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config file " + path);
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (!blank)
        throw parse_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw parse_error(path + ":" + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second)
      throw parse_error("duplicate key '" + key + "' in " + path);
    apply_pair(cfg, key, value, true);
  }
  return cfg;
}

RunConfig parse_command_line(int argc, const char* const* argv) {
  // collect raw flags first so --config loads before overrides apply
  std::string command;
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) {
      if (!command.empty()) throw parse_error("unexpected positional argument '" + arg + "'");
      command = arg;
      continue;
    }
    arg.erase(0, 2);
    std::string value;
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      value = arg.substr(eq + 1);
      arg.erase(eq);
    } else {
      if (i + 1 >= argc) throw parse_error("flag --" + arg + " needs a value");
      value = argv[++i];
    }
    if (arg == "config")
      config_path = value;
    else
      flags.emplace_back(arg, value);
  }

  RunConfig cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  if (!command.empty()) {
    if (!kCommands.count(command)) throw parse_error("unknown command '" + command + "'");
    cfg.command = command;
  }
  for (const auto& [k, v] : flags) apply_pair(cfg, k, v, false);  // flags win
  if (cfg.command.empty()) throw parse_error("no command given");
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "command = " << cfg.command << "\n";
  out << "format = " << cfg.format << "\n";
  out << "out = " << cfg.output_path << "\n";
  out << "seed = " << cfg.seed << "\n";
  for (const auto& [k, v] : cfg.params) out << k << " = " << v << "\n";
  return out.str();
}

void run(const RunConfig& cfg) {
  if (!kCommands.count(cfg.command))
    throw parse_error("unknown command '" + cfg.command + "'");
  const Params p{cfg.params};
  std::string output;
  if (cfg.command == "primes") output = cmd_primes(p, cfg.format);
  else if (cfg.command == "tuple") output = cmd_tuple(p, cfg.format);
  else if (cfg.command == "construct") output = cmd_construct(p, cfg.format);
  else if (cfg.command == "mk-bound") output = cmd_mk_bound(p, cfg.format);
  else if (cfg.command == "lemma46") output = cmd_lemma46(p, cfg.seed, cfg.format);
  else if (cfg.command == "weights-sum") output = cmd_weights_sum(p, cfg.format);
  else if (cfg.command == "gaps") output = cmd_gaps(p, cfg.format);
  else if (cfg.command == "measure") output = cmd_measure(p, cfg.format);
  else if (cfg.command == "bv-scan") output = cmd_bv_scan(p, cfg.format);

  if (cfg.output_path == "-") {
    std::cout << output;
    std::cout.flush();
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw io_error("cannot write to " + cfg.output_path);
    out << output;
    if (!out) throw io_error("write failed for " + cfg.output_path);
  }
}

int main_entry(int argc, const char* const* argv) {
  try {
    run(parse_command_line(argc, argv));
    return 0;
  } catch (const parse_error& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return 65;
  } catch (const argument_error& e) {
    std::cerr << "error: argument: " << e.what() << "\n";
    return 64;
  } catch (const gaplab::range_error& e) {
    std::cerr << "error: range: " << e.what() << "\n";
    return 66;
  } catch (const resource_error& e) {
    std::cerr << "error: resource: " << e.what() << "\n";
    return 67;
  } catch (const infeasible_error& e) {
    std::cerr << "error: infeasible: " << e.what() << "\n";
    return 68;
  } catch (const io_error& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 69;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace gaplab::cli
